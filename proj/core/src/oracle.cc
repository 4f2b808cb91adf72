// Copyright 2026 The Gridshade Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gridshade/oracle.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gridshade/errors.h"

namespace gridshade {
namespace {

using Index = std::size_t;

constexpr double kInf = std::numeric_limits<double>::infinity();

Index U(int v) { return static_cast<Index>(v); }

// Multicommodity flow feasibility by phase-one simplex with Bland's rule.
// Commodity k ships supply[k] from src[k] to dst[k] over directed pairs with
// capacities cap[p]. Returns flows indexed [k * pairs + p] or nullopt.
class FlowFeasibility {
 public:
  FlowFeasibility(int nodes, std::vector<std::pair<int, int>> pairs,
                  std::vector<double> cap)
      : nodes_(nodes), pairs_(std::move(pairs)), cap_(std::move(cap)) {}

  std::optional<std::vector<double>> Solve(const std::vector<int>& src,
                                           const std::vector<int>& dst,
                                           const std::vector<double>& supply) {
    const int k_count = static_cast<int>(src.size());
    const int p_count = static_cast<int>(pairs_.size());
    const int flows = k_count * p_count;
    const int cons_rows = k_count * nodes_;
    const int rows = cons_rows + p_count;
    // flows | capacity slacks | conservation artificials | rhs
    const int cols = flows + p_count + cons_rows;
    const int width = cols + 1;
    std::vector<double> t(U(rows) * U(width), 0.0);
    auto at = [&](int r, int c) -> double& { return t[U(r) * U(width) + U(c)]; };
    std::vector<int> basis(U(rows));

    for (int k = 0; k < k_count; ++k) {
      for (int v = 0; v < nodes_; ++v) {
        const int r = k * nodes_ + v;
        double rhs = 0.0;
        if (v == src[U(k)]) rhs += supply[U(k)];
        if (v == dst[U(k)]) rhs -= supply[U(k)];
        const double sign = rhs < 0.0 ? -1.0 : 1.0;
        for (int p = 0; p < p_count; ++p) {
          double coef = 0.0;
          if (pairs_[U(p)].first == v) coef += 1.0;
          if (pairs_[U(p)].second == v) coef -= 1.0;
          at(r, k * p_count + p) = sign * coef;
        }
        at(r, flows + p_count + r) = 1.0;
        at(r, cols) = sign * rhs;
        basis[U(r)] = flows + p_count + r;
      }
    }
    for (int p = 0; p < p_count; ++p) {
      const int r = cons_rows + p;
      for (int k = 0; k < k_count; ++k) at(r, k * p_count + p) = 1.0;
      at(r, flows + p) = 1.0;
      at(r, cols) = cap_[U(p)];
      basis[U(r)] = flows + p;
    }

    // Phase-one reduced costs: minimize the sum of artificials.
    std::vector<double> d(U(width), 0.0);
    for (int r = 0; r < cons_rows; ++r) {
      for (int c = 0; c < width; ++c) d[U(c)] -= at(r, c);
    }
    for (int r = 0; r < cons_rows; ++r) d[U(flows + p_count + r)] = 0.0;

    double scale = 1.0;
    for (double s : supply) scale += s;
    for (int guard = 0; guard < 100000; ++guard) {
      int enter = -1;
      for (int c = 0; c < cols; ++c) {
        if (d[U(c)] < -1e-11) {
          enter = c;
          break;
        }
      }
      if (enter < 0) break;
      int leave = -1;
      double best_ratio = kInf;
      for (int r = 0; r < rows; ++r) {
        const double a = at(r, enter);
        if (a <= 1e-11) continue;
        const double ratio = at(r, cols) / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 && leave >= 0 &&
             basis[U(r)] < basis[U(leave)])) {
          best_ratio = ratio;
          leave = r;
        }
      }
      if (leave < 0) break;  // cannot happen: phase one is bounded below
      const double piv = at(leave, enter);
      for (int c = 0; c < width; ++c) at(leave, c) /= piv;
      for (int r = 0; r < rows; ++r) {
        if (r == leave) continue;
        const double f = at(r, enter);
        if (f == 0.0) continue;
        for (int c = 0; c < width; ++c) at(r, c) -= f * at(leave, c);
      }
      const double f = d[U(enter)];
      for (int c = 0; c < width; ++c) d[U(c)] -= f * at(leave, c);
      basis[U(leave)] = enter;
    }

    double infeasibility = 0.0;
    std::vector<double> x(U(flows), 0.0);
    for (int r = 0; r < rows; ++r) {
      const int b = basis[U(r)];
      if (b >= flows + p_count) infeasibility += std::abs(at(r, cols));
      if (b < flows) x[U(b)] = std::max(0.0, at(r, cols));
    }
    if (infeasibility > 1e-9 * scale) return std::nullopt;
    return x;
  }

 private:
  int nodes_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<double> cap_;
};

struct Source {
  double cost;
  double cap_w;
  int var;
};

class Enumerator {
 public:
  Enumerator(const MilpInstance& instance, OracleStats* stats)
      : inst_(instance), topo_(instance.topology()), stats_(stats) {}

  MilpSolution Run();

 private:
  void Prepare();
  void EnumeratePaths(int i, int j, std::vector<int>& arcs,
                      std::vector<bool>& seen, int at);
  double EnergyCost(int node, double watts) const;
  double Bound(const std::vector<double>& watts) const;
  void CountDfs(int p);
  void RouteDfs(int q, int path_from, int left);
  void Record();

  const MilpInstance& inst_;
  const Topology& topo_;
  OracleStats* stats_;

  int n_ = 0;
  double capacity_gbps_ = 0.0;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<int> pair_max_;
  std::vector<std::vector<std::vector<int>>> paths_;
  std::vector<int> arc_cap_;
  std::vector<int> out_cap_;
  std::vector<int> in_cap_;
  std::vector<int> last_out_pair_;
  std::vector<int> last_in_pair_;
  std::vector<double> fixed_w_;
  std::vector<double> link_lit_w_;   // per endpoint per lit wavelength
  std::vector<double> min_lit_w_;    // cheapest incident link per node
  std::vector<std::array<Source, 3>> sources_;

  // Current served set.
  unsigned served_ = 0;
  double base_ = 0.0;
  std::vector<double> orig_gbps_;
  std::vector<double> term_gbps_;
  std::vector<double> total_served_;

  // Lightpath counts.
  std::vector<int> count_;
  std::vector<int> out_c_;
  std::vector<int> in_c_;
  std::vector<double> lb_w_;
  std::map<std::pair<unsigned, std::vector<int>>,
           std::optional<std::vector<double>>>
      flow_cache_;
  const std::vector<double>* flows_ = nullptr;
  std::vector<int> active_;  // pair indices with count > 0

  // Routing.
  std::vector<int> arc_load_;
  std::vector<std::vector<int>> pair_arc_;
  std::vector<double> route_w_;

  double best_ = kInf;
  MilpSolution best_solution_;
};

void Enumerator::EnumeratePaths(int i, int j, std::vector<int>& arcs,
                                std::vector<bool>& seen, int at) {
  if (at == j) {
    paths_.back().push_back(arcs);
    return;
  }
  for (int a : topo_.out_arcs(at)) {
    const Arc arc = topo_.arc(a);
    if (seen[U(arc.to)]) continue;
    if (inst_.variables()[U(inst_.routing(i, j, a))].upper < 1.0) continue;
    if (arc_cap_[U(a)] < 1) continue;
    seen[U(arc.to)] = true;
    arcs.push_back(a);
    EnumeratePaths(i, j, arcs, seen, arc.to);
    arcs.pop_back();
    seen[U(arc.to)] = false;
  }
}

void Enumerator::Prepare() {
  n_ = topo_.num_nodes();
  capacity_gbps_ = topo_.wavelength_capacity_gbps;
  const DevicePowers& dev = inst_.devices();
  const auto& vars = inst_.variables();

  arc_cap_.assign(U(topo_.num_arcs()), 0);
  for (int a = 0; a < topo_.num_arcs(); ++a) {
    arc_cap_[U(a)] = static_cast<int>(
        std::floor(vars[U(inst_.link_wavelengths(a))].upper + 1e-9));
  }
  out_cap_.assign(U(n_), 0);
  in_cap_.assign(U(n_), 0);
  for (int a = 0; a < topo_.num_arcs(); ++a) {
    out_cap_[U(topo_.arc(a).from)] += arc_cap_[U(a)];
    in_cap_[U(topo_.arc(a).to)] += arc_cap_[U(a)];
  }

  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (i != j) pairs_.emplace_back(i, j);
    }
  }
  last_out_pair_.assign(U(n_), -1);
  last_in_pair_.assign(U(n_), -1);
  for (int p = 0; p < static_cast<int>(pairs_.size()); ++p) {
    const auto [i, j] = pairs_[U(p)];
    last_out_pair_[U(i)] = p;
    last_in_pair_[U(j)] = p;
    paths_.emplace_back();
    std::vector<int> arcs;
    std::vector<bool> seen(U(n_), false);
    seen[U(i)] = true;
    const int c_max = static_cast<int>(
        std::floor(vars[U(inst_.lightpath(i, j))].upper + 1e-9));
    if (c_max >= 1) EnumeratePaths(i, j, arcs, seen, i);
    pair_max_.push_back(paths_.back().empty() ? 0 : c_max);
  }

  link_lit_w_.resize(U(topo_.num_links()));
  for (int k = 0; k < topo_.num_links(); ++k) {
    const Link& l = topo_.links[U(k)];
    link_lit_w_[U(k)] =
        0.5 * dev.transponder_w + 0.5 * dev.regenerator_w * l.regenerators;
  }
  fixed_w_.assign(U(n_), 0.0);
  min_lit_w_.assign(U(n_), 0.0);
  for (int i = 0; i < n_; ++i) {
    double lit = kInf;
    double edfa = 0.0;
    for (int k = 0; k < topo_.num_links(); ++k) {
      const Link& l = topo_.links[U(k)];
      if (l.m != i && l.n != i) continue;
      lit = std::min(lit, link_lit_w_[U(k)]);
      const int amps = std::max(
          2, static_cast<int>(std::ceil(l.length_km / topo_.span_km - 1.0)) + 2);
      edfa += 0.5 * dev.edfa_w * l.fibers * amps;
    }
    min_lit_w_[U(i)] = lit == kInf ? 0.0 : lit;
    if (inst_.powered(i)) fixed_w_[U(i)] = dev.optical_switch_w + edfa;
  }

  sources_.resize(U(n_));
  for (int i = 0; i < n_; ++i) {
    std::array<Source, 3> s = {
        Source{vars[U(inst_.renewable(i))].cost,
               vars[U(inst_.renewable(i))].upper, inst_.renewable(i)},
        Source{vars[U(inst_.grid(i))].cost, vars[U(inst_.grid(i))].upper,
               inst_.grid(i)},
        Source{vars[U(inst_.battery(i))].cost, vars[U(inst_.battery(i))].upper,
               inst_.battery(i)}};
    std::stable_sort(s.begin(), s.end(), [](const Source& a, const Source& b) {
      return a.cost < b.cost;
    });
    sources_[U(i)] = s;
  }
}

double Enumerator::EnergyCost(int node, double watts) const {
  double left = watts;
  double cost = 0.0;
  for (const Source& s : sources_[U(node)]) {
    const double take = std::min(left, s.cap_w);
    cost += s.cost * take;
    left -= take;
  }
  if (left > 1e-9 * (1.0 + watts)) return kInf;
  return cost;
}

double Enumerator::Bound(const std::vector<double>& watts) const {
  double total = base_;
  for (int i = 0; i < n_; ++i) {
    total += EnergyCost(i, watts[U(i)]);
    if (total == kInf) return kInf;
  }
  return total;
}

void Enumerator::CountDfs(int p) {
  const int pairs = static_cast<int>(pairs_.size());
  // Lower bound with the lightpath endpoints still required by the traffic
  // each node must send and receive.
  std::vector<double> watts = lb_w_;
  const double port = 0.5 * inst_.devices().router_port_w;
  for (int i = 0; i < n_; ++i) {
    const int need_out = static_cast<int>(
        std::ceil(orig_gbps_[U(i)] / capacity_gbps_ - 1e-9));
    const int need_in = static_cast<int>(
        std::ceil(term_gbps_[U(i)] / capacity_gbps_ - 1e-9));
    const int extra =
        std::max(0, need_out - out_c_[U(i)]) + std::max(0, need_in - in_c_[U(i)]);
    watts[U(i)] += extra * (port + min_lit_w_[U(i)]);
  }
  if (Bound(watts) >= best_ - 1e-9) return;

  if (p == pairs) {
    if (stats_ != nullptr) ++stats_->capacity_vectors;
    auto key = std::make_pair(served_, count_);
    auto it = flow_cache_.find(key);
    if (it == flow_cache_.end()) {
      if (stats_ != nullptr) ++stats_->flow_checks;
      std::vector<std::pair<int, int>> used;
      std::vector<double> cap;
      for (int q = 0; q < pairs; ++q) {
        if (count_[U(q)] == 0) continue;
        used.push_back(pairs_[U(q)]);
        cap.push_back(capacity_gbps_ * count_[U(q)]);
      }
      std::vector<int> src;
      std::vector<int> dst;
      std::vector<double> supply;
      const auto demands = inst_.demands();
      for (int k = 0; k < static_cast<int>(demands.size()); ++k) {
        if ((served_ >> k & 1U) == 0) continue;
        src.push_back(demands[U(k)].s);
        dst.push_back(demands[U(k)].d);
        supply.push_back(demands[U(k)].gbps);
      }
      FlowFeasibility lp(n_, used, cap);
      it = flow_cache_.emplace(key, lp.Solve(src, dst, supply)).first;
    }
    if (!it->second.has_value()) return;
    flows_ = &*it->second;

    active_.clear();
    for (int q = 0; q < pairs; ++q) {
      if (count_[U(q)] > 0) active_.push_back(q);
    }
    arc_load_.assign(U(topo_.num_arcs()), 0);
    pair_arc_.assign(pairs_.size(), std::vector<int>(U(topo_.num_arcs()), 0));
    route_w_ = lb_w_;
    RouteDfs(0, 0, active_.empty() ? 0 : count_[U(active_[0])]);
    return;
  }

  const auto [i, j] = pairs_[U(p)];
  int k_max = pair_max_[U(p)];
  k_max = std::min(k_max, static_cast<int>(std::ceil(
                              total_served_[0] / capacity_gbps_ - 1e-9)));
  k_max = std::min(k_max, out_cap_[U(i)] - out_c_[U(i)]);
  k_max = std::min(k_max, in_cap_[U(j)] - in_c_[U(j)]);
  const double per_end_i = port + min_lit_w_[U(i)];
  const double per_end_j = port + min_lit_w_[U(j)];
  for (int k = 0; k <= k_max; ++k) {
    count_[U(p)] = k;
    out_c_[U(i)] += k;
    in_c_[U(j)] += k;
    lb_w_[U(i)] += k * per_end_i;
    lb_w_[U(j)] += k * per_end_j;
    bool cut_ok = true;
    if (last_out_pair_[U(i)] == p &&
        out_c_[U(i)] * capacity_gbps_ < orig_gbps_[U(i)] - 1e-9) {
      cut_ok = false;
    }
    if (last_in_pair_[U(j)] == p &&
        in_c_[U(j)] * capacity_gbps_ < term_gbps_[U(j)] - 1e-9) {
      cut_ok = false;
    }
    if (cut_ok) CountDfs(p + 1);
    out_c_[U(i)] -= k;
    in_c_[U(j)] -= k;
    lb_w_[U(i)] -= k * per_end_i;
    lb_w_[U(j)] -= k * per_end_j;
  }
  count_[U(p)] = 0;
}

// Routes the lightpaths of active_[q] as a multiset of simple paths: path
// indices are chosen in non-decreasing order starting at `path_from`, with
// `left` lightpaths of the pair still unrouted.
void Enumerator::RouteDfs(int q, int path_from, int left) {
  if (Bound(route_w_) >= best_ - 1e-9) return;
  if (q == static_cast<int>(active_.size())) {
    Record();
    return;
  }
  if (left == 0) {
    const int next = q + 1;
    RouteDfs(next, 0,
             next < static_cast<int>(active_.size()) ? count_[U(active_[U(next)])]
                                                     : 0);
    return;
  }
  const int p = active_[U(q)];
  const auto [i, j] = pairs_[U(p)];
  const auto& options = paths_[U(p)];
  const auto& vars = inst_.variables();
  for (int o = path_from; o < static_cast<int>(options.size()); ++o) {
    const std::vector<int>& path = options[U(o)];
    bool fits = true;
    for (int a : path) {
      if (arc_load_[U(a)] + 1 > arc_cap_[U(a)] ||
          pair_arc_[U(p)][U(a)] + 1 >
              vars[U(inst_.routing(i, j, a))].upper + 1e-9) {
        fits = false;
        break;
      }
    }
    if (!fits) continue;
    route_w_[U(i)] -= min_lit_w_[U(i)];
    route_w_[U(j)] -= min_lit_w_[U(j)];
    for (int a : path) {
      const Arc arc = topo_.arc(a);
      ++arc_load_[U(a)];
      ++pair_arc_[U(p)][U(a)];
      route_w_[U(arc.from)] += link_lit_w_[U(arc.link)];
      route_w_[U(arc.to)] += link_lit_w_[U(arc.link)];
    }
    RouteDfs(q, o, left - 1);
    for (int a : path) {
      const Arc arc = topo_.arc(a);
      --arc_load_[U(a)];
      --pair_arc_[U(p)][U(a)];
      route_w_[U(arc.from)] -= link_lit_w_[U(arc.link)];
      route_w_[U(arc.to)] -= link_lit_w_[U(arc.link)];
    }
    route_w_[U(i)] += min_lit_w_[U(i)];
    route_w_[U(j)] += min_lit_w_[U(j)];
  }
}

void Enumerator::Record() {
  if (stats_ != nullptr) ++stats_->routings;
  // Exact node powers from scratch.
  const double port = 0.5 * inst_.devices().router_port_w;
  std::vector<double> watts = fixed_w_;
  for (int p = 0; p < static_cast<int>(pairs_.size()); ++p) {
    const auto [i, j] = pairs_[U(p)];
    watts[U(i)] += port * count_[U(p)];
    watts[U(j)] += port * count_[U(p)];
  }
  for (int a = 0; a < topo_.num_arcs(); ++a) {
    const Arc arc = topo_.arc(a);
    watts[U(arc.from)] += link_lit_w_[U(arc.link)] * arc_load_[U(a)];
    watts[U(arc.to)] += link_lit_w_[U(arc.link)] * arc_load_[U(a)];
  }
  const double cost = Bound(watts);
  if (!(cost < best_)) return;
  best_ = cost;

  MilpSolution sol;
  sol.values.assign(U(inst_.num_variables()), 0.0);
  const auto demands = inst_.demands();
  const int pairs = static_cast<int>(pairs_.size());
  int served_index = 0;
  std::vector<int> active_pairs;
  for (int q = 0; q < pairs; ++q) {
    if (count_[U(q)] > 0) active_pairs.push_back(q);
  }
  for (int k = 0; k < static_cast<int>(demands.size()); ++k) {
    if ((served_ >> k & 1U) == 0) {
      sol.values[U(inst_.blocking(k))] = 1.0;
      continue;
    }
    for (int u = 0; u < static_cast<int>(active_pairs.size()); ++u) {
      const auto [i, j] = pairs_[U(active_pairs[U(u)])];
      sol.values[U(inst_.flow(k, i, j))] =
          (*flows_)[U(served_index) * active_pairs.size() + U(u)];
    }
    ++served_index;
  }
  for (int p = 0; p < pairs; ++p) {
    const auto [i, j] = pairs_[U(p)];
    sol.values[U(inst_.lightpath(i, j))] = count_[U(p)];
    for (int a = 0; a < topo_.num_arcs(); ++a) {
      sol.values[U(inst_.routing(i, j, a))] = pair_arc_[U(p)][U(a)];
    }
  }
  for (int a = 0; a < topo_.num_arcs(); ++a) {
    sol.values[U(inst_.link_wavelengths(a))] = arc_load_[U(a)];
  }
  for (int i = 0; i < n_; ++i) {
    double left = watts[U(i)];
    for (const Source& s : sources_[U(i)]) {
      const double take = std::min(left, s.cap_w);
      sol.values[U(s.var)] = take;
      left -= take;
    }
  }
  sol.objective = cost;
  best_solution_ = std::move(sol);
}

MilpSolution Enumerator::Run() {
  Prepare();
  const auto demands = inst_.demands();
  const int d = static_cast<int>(demands.size());
  const auto& vars = inst_.variables();

  // Served sets ordered by number of blocked demands, then by mask.
  std::vector<unsigned> sets;
  for (unsigned mask = 0; mask < (1U << d); ++mask) sets.push_back(mask);
  std::stable_sort(sets.begin(), sets.end(), [&](unsigned a, unsigned b) {
    return std::popcount(a) > std::popcount(b);
  });

  count_.assign(pairs_.size(), 0);
  total_served_.assign(1, 0.0);
  for (unsigned mask : sets) {
    bool allowed = true;
    base_ = 0.0;
    orig_gbps_.assign(U(n_), 0.0);
    term_gbps_.assign(U(n_), 0.0);
    total_served_[0] = 0.0;
    for (int k = 0; k < d; ++k) {
      const Variable& bl = vars[U(inst_.blocking(k))];
      if (mask >> k & 1U) {
        if (bl.lower > 0.0) allowed = false;
        orig_gbps_[U(demands[U(k)].s)] += demands[U(k)].gbps;
        term_gbps_[U(demands[U(k)].d)] += demands[U(k)].gbps;
        total_served_[0] += demands[U(k)].gbps;
      } else {
        if (bl.upper < 1.0) allowed = false;
        base_ += bl.cost;
      }
    }
    if (!allowed) continue;
    if (stats_ != nullptr) ++stats_->served_sets;
    served_ = mask;
    out_c_.assign(U(n_), 0);
    in_c_.assign(U(n_), 0);
    lb_w_ = fixed_w_;
    CountDfs(0);
  }
  if (best_ == kInf) {
    throw SolverError("enumeration found no feasible assignment");
  }
  return best_solution_;
}

}  // namespace

MilpSolution EnumerateOracle(const MilpInstance& instance,
                             const OracleBudget& budget, OracleStats* stats) {
  const Topology& topo = instance.topology();
  if (topo.num_nodes() > budget.max_nodes ||
      topo.wavelengths_per_fiber > budget.max_wavelengths_per_fiber ||
      instance.num_demands() > budget.max_demands) {
    throw BudgetExceededError(
        "instance exceeds the enumeration budget (" +
        std::to_string(topo.num_nodes()) + " nodes, " +
        std::to_string(topo.wavelengths_per_fiber) + " wavelengths per fiber, " +
        std::to_string(instance.num_demands()) + " demands)");
  }
  Enumerator e(instance, stats);
  return e.Run();
}

}  // namespace gridshade
