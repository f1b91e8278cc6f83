#include "homsel/lift.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "homsel/rational_lp.hpp"

namespace homsel {
namespace {

// Union-find with path halving over global slot ids.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void join(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

// Squared Euclidean displacement between value points. Matching costs use
// squared displacement rather than a plain chord distance: squared costs are
// cyclically monotone, so two nearby strands moving the same way match
// straight through instead of swapping, which a concave chord cost would by
// a whisker prefer. A swap would union distinct strands and corrupt the
// forced-weight analysis downstream.
double sq_dist(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    const double d = a.coords[i] - b.coords[i];
    s += d * d;
  }
  return s;
}

// All injections of 0..small-1 into 0..big-1 in lexicographic order, reported
// through a callback receiving the partner array.
void for_each_injection(int small, int big, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> partner(static_cast<std::size_t>(small), -1);
  std::vector<bool> used(static_cast<std::size_t>(big), false);
  std::function<void(int)> rec = [&](int i) {
    if (i == small) {
      fn(partner);
      return;
    }
    for (int j = 0; j < big; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(j)] = true;
      partner[static_cast<std::size_t>(i)] = j;
      rec(i + 1);
      used[static_cast<std::size_t>(j)] = false;
    }
  };
  rec(0);
}

// A sparse integer row over component variables, kept sorted by variable.
using SparseRow = std::vector<std::pair<int, long long>>;

void add_term(std::map<int, long long>& acc, int var, long long coef) {
  auto it = acc.emplace(var, 0).first;
  it->second += coef;
  if (it->second == 0) acc.erase(it);
}

SparseRow to_row(const std::map<int, long long>& acc) {
  return SparseRow(acc.begin(), acc.end());
}

// Exhaustive integer search: assigns each variable a value in [0, bound] and
// checks every row when its last variable is placed. The systems the strand
// solver produces are tiny, and the vertex-total rows prune hard.
class IntegerSearch {
 public:
  IntegerSearch(const std::vector<SparseRow>& rows, const std::vector<Int>& rhs, int vars,
                const Int& bound)
      : rows_(rows), rhs_(rhs), vars_(vars), bound_(bound), value_(static_cast<std::size_t>(vars)),
        closing_(static_cast<std::size_t>(vars)) {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      int last = -1;
      for (const auto& [v, c] : rows_[r]) last = std::max(last, v);
      if (last < 0)
        throw error("empty row reached the integer search");
      closing_[static_cast<std::size_t>(last)].push_back(static_cast<int>(r));
    }
  }

  bool run(std::vector<Int>& out) {
    if (search(0)) {
      out = value_;
      return true;
    }
    return false;
  }

 private:
  bool search(int i) {
    if (i == vars_) return true;
    for (Int v = 0; v <= bound_; ++v) {
      value_[static_cast<std::size_t>(i)] = v;
      bool ok = true;
      for (int r : closing_[static_cast<std::size_t>(i)]) {
        Int sum = 0;
        for (const auto& [var, coef] : rows_[static_cast<std::size_t>(r)])
          sum += coef * value_[static_cast<std::size_t>(var)];
        if (sum != rhs_[static_cast<std::size_t>(r)]) {
          ok = false;
          break;
        }
      }
      if (ok && search(i + 1)) return true;
    }
    return false;
  }

  const std::vector<SparseRow>& rows_;
  const std::vector<Int>& rhs_;
  int vars_;
  Int bound_;
  std::vector<Int> value_;
  std::vector<std::vector<int>> closing_;
};

// The constraint system of a strand structure: homogeneous continuation rows
// from cardinality changes, and one total row per distinct vertex profile.
struct WeightSystem {
  std::vector<SparseRow> balance;  // rows with right-hand side zero
  std::vector<SparseRow> totals;   // rows with right-hand side M
};

WeightSystem collect_system(const GridMultifunction& f, const StrandSystem& S) {
  WeightSystem sys;
  std::map<SparseRow, bool> seen_balance;
  for (const EdgeFlow& e : S.edges) {
    const int wide = static_cast<int>(f.value_at(e.from_node).size());
    const int narrow = static_cast<int>(f.value_at(e.to_node).size());
    if (wide == narrow) continue;  // bijective: joined into one component
    for (int s = 0; s < narrow; ++s) {
      std::map<int, long long> acc;
      add_term(acc, S.component_of({e.to_node, s}), 1);
      for (int j = 0; j < wide; ++j)
        if (e.target[static_cast<std::size_t>(j)] == s)
          add_term(acc, S.component_of({e.from_node, j}), -1);
      SparseRow row = to_row(acc);
      if (row.empty()) continue;
      if (row.front().second < 0)
        for (auto& [v, c] : row) c = -c;
      if (seen_balance.emplace(row, true).second) sys.balance.push_back(std::move(row));
    }
  }
  std::map<SparseRow, bool> seen_total;
  for (long long v = 0; v < f.vertex_count(); ++v) {
    std::map<int, long long> acc;
    for (int p = 0; p < static_cast<int>(f.value_at(v).size()); ++p)
      add_term(acc, S.component_of({v, p}), 1);
    SparseRow row = to_row(acc);
    if (seen_total.emplace(row, true).second) sys.totals.push_back(std::move(row));
  }
  return sys;
}

// Components whose weight is zero in every nonnegative solution with equal
// vertex totals. Scale-free, so independent of the requested total. Found by
// one exact program: maximize the number of components that can be pushed to
// weight one or more simultaneously (solutions add, so this is well defined).
std::vector<int> forced_zero_components(const WeightSystem& sys, int components) {
  const std::size_t c = static_cast<std::size_t>(components);
  // Variables: w (components), s (capped indicators), then two slack blocks.
  const std::size_t vars = 4 * c;
  std::vector<std::vector<Rat>> rows;
  std::vector<Rat> rhs;
  auto blank = [&]() { return std::vector<Rat>(vars, 0); };
  for (const SparseRow& r : sys.balance) {
    auto row = blank();
    for (const auto& [v, coef] : r) row[static_cast<std::size_t>(v)] = coef;
    rows.push_back(std::move(row));
    rhs.push_back(0);
  }
  for (std::size_t i = 1; i < sys.totals.size(); ++i) {
    auto row = blank();
    for (const auto& [v, coef] : sys.totals[0]) row[static_cast<std::size_t>(v)] += coef;
    for (const auto& [v, coef] : sys.totals[i]) row[static_cast<std::size_t>(v)] -= coef;
    rows.push_back(std::move(row));
    rhs.push_back(0);
  }
  for (std::size_t i = 0; i < c; ++i) {
    auto link = blank();  // w_i - s_i - u_i = 0
    link[i] = 1;
    link[c + i] = -1;
    link[2 * c + i] = -1;
    rows.push_back(std::move(link));
    rhs.push_back(0);
    auto cap = blank();  // s_i + t_i = 1
    cap[c + i] = 1;
    cap[3 * c + i] = 1;
    rows.push_back(std::move(cap));
    rhs.push_back(1);
  }
  std::vector<Rat> objective(vars, 0);
  for (std::size_t i = 0; i < c; ++i) objective[c + i] = 1;
  const LpResult lp = solve_lp(rows, rhs, objective);
  if (lp.status != LpStatus::kOptimal)
    throw error("forced-zero analysis: the indicator program must have an optimum");
  std::vector<int> forced;
  for (std::size_t i = 0; i < c; ++i)
    if (lp.point[c + i] != 1) forced.push_back(static_cast<int>(i));
  return forced;
}

// Drops forced components from a row; returns false when the row becomes
// trivially satisfied and true with the reduced row otherwise.
bool reduce_row(const SparseRow& row, const std::vector<bool>& zero, SparseRow& out) {
  out.clear();
  for (const auto& [v, coef] : row)
    if (!zero[static_cast<std::size_t>(v)]) out.emplace_back(v, coef);
  return !out.empty();
}

std::string describe_total(const Int& total) {
  return total.str();
}

}  // namespace

std::vector<std::pair<StrandSlot, StrandSlot>> StrandSystem::merge_events() const {
  std::vector<std::pair<StrandSlot, StrandSlot>> out;
  for (const EdgeFlow& e : edges)
    for (std::size_t j = 0; j < e.target.size(); ++j)
      if (e.surplus[j])
        out.push_back({{e.from_node, static_cast<int>(j)},
                       {e.to_node, e.target[j]}});
  return out;
}

StrandSystem build_strand_system(const GridMultifunction& f, double tol) {
  if (tol < 0) throw error("matching tolerance must be nonnegative");
  const int m = f.domain_dim();
  const int res = f.resolution();
  const long long vertices = f.vertex_count();
  const int bound = f.bound();

  StrandSystem sys;
  sys.component.resize(static_cast<std::size_t>(vertices));
  for (long long v = 0; v < vertices; ++v)
    sys.component[static_cast<std::size_t>(v)].assign(f.value_at(v).size(), -1);

  DisjointSets dsu(static_cast<std::size_t>(vertices) * static_cast<std::size_t>(bound));
  auto slot_id = [bound](long long node, int member) {
    return static_cast<std::size_t>(node) * static_cast<std::size_t>(bound) +
           static_cast<std::size_t>(member);
  };

  // Strides of the row-major vertex layout, last axis fastest.
  std::vector<long long> stride(static_cast<std::size_t>(m), 1);
  for (int d = m - 2; d >= 0; --d)
    stride[static_cast<std::size_t>(d)] = stride[static_cast<std::size_t>(d + 1)] * (res + 1);

  for (long long v = 0; v < vertices; ++v) {
    const std::vector<int> x = f.vertex_of(v);
    for (int d = 0; d < m; ++d) {
      if (x[static_cast<std::size_t>(d)] >= res) continue;
      const long long u = v + stride[static_cast<std::size_t>(d)];
      const FiniteSubset& fv = f.value_at(v);
      const FiniteSubset& fu = f.value_at(u);
      const bool v_wide = fv.size() >= fu.size();
      const long long wide_node = v_wide ? v : u;
      const long long narrow_node = v_wide ? u : v;
      const auto& wide_pts = f.value_at(wide_node).points();
      const auto& narrow_pts = f.value_at(narrow_node).points();
      const int wide = static_cast<int>(wide_pts.size());
      const int narrow = static_cast<int>(narrow_pts.size());

      // Minimum-cost injection of the narrow fiber into the wide one under
      // squared displacement (see sq_dist), lexicographically first among
      // equal costs; track the best distinct runner-up for the ambiguity
      // margin.
      std::vector<int> partner;
      double best = 0.0, second = -1.0;
      for_each_injection(narrow, wide, [&](const std::vector<int>& cand) {
        double cost = 0.0;
        for (int i = 0; i < narrow; ++i)
          cost += sq_dist(narrow_pts[static_cast<std::size_t>(i)],
                          wide_pts[static_cast<std::size_t>(cand[static_cast<std::size_t>(i)])]);
        if (partner.empty() || cost < best) {
          if (!partner.empty()) second = second < 0 ? best : std::min(second, best);
          best = cost;
          partner = cand;
        } else {
          second = second < 0 ? cost : std::min(second, cost);
        }
      });

      EdgeFlow flow;
      flow.from_node = wide_node;
      flow.to_node = narrow_node;
      flow.target.assign(static_cast<std::size_t>(wide), -1);
      flow.surplus.assign(static_cast<std::size_t>(wide), false);
      for (int i = 0; i < narrow; ++i)
        flow.target[static_cast<std::size_t>(partner[static_cast<std::size_t>(i)])] = i;

      double attach_margin = -1.0;
      for (int j = 0; j < wide; ++j) {
        if (flow.target[static_cast<std::size_t>(j)] >= 0) continue;
        int nearest = 0;
        double dist = 0.0, runner = -1.0;
        for (int i = 0; i < narrow; ++i) {
          const double d2 = sq_dist(wide_pts[static_cast<std::size_t>(j)],
                                    narrow_pts[static_cast<std::size_t>(i)]);
          if (i == 0 || d2 < dist) {
            if (i > 0) runner = runner < 0 ? dist : std::min(runner, dist);
            dist = d2;
            nearest = i;
          } else {
            runner = runner < 0 ? d2 : std::min(runner, d2);
          }
        }
        flow.target[static_cast<std::size_t>(j)] = nearest;
        flow.surplus[static_cast<std::size_t>(j)] = true;
        if (runner >= 0) {
          const double margin = std::sqrt(runner) - std::sqrt(dist);
          attach_margin = attach_margin < 0 ? margin : std::min(attach_margin, margin);
        }
      }

      // Margins are reported in length units: the root of a total squared
      // cost scales like a displacement, so the tol/2 threshold reads on the
      // same footing as the metric everywhere else.
      double margin = second < 0 ? -1.0 : std::sqrt(second) - std::sqrt(best);
      if (attach_margin >= 0) margin = margin < 0 ? attach_margin : std::min(margin, attach_margin);
      if (margin >= 0 && margin <= tol / 2)
        sys.ambiguities.push_back({wide_node, narrow_node, margin});

      if (wide == narrow)
        for (int j = 0; j < wide; ++j)
          dsu.join(slot_id(wide_node, j),
                   slot_id(narrow_node, flow.target[static_cast<std::size_t>(j)]));
      sys.edges.push_back(std::move(flow));
    }
  }

  // Compact component ids in least-slot order.
  std::map<std::size_t, int> id_of_root;
  for (long long v = 0; v < vertices; ++v) {
    for (int p = 0; p < static_cast<int>(f.value_at(v).size()); ++p) {
      const std::size_t root = dsu.find(slot_id(v, p));
      auto [it, fresh] = id_of_root.emplace(root, sys.components);
      if (fresh) {
        ++sys.components;
        sys.representative.push_back({v, p});
      }
      sys.component[static_cast<std::size_t>(v)][static_cast<std::size_t>(p)] = it->second;
    }
  }
  return sys;
}

LiftOutcome lift_to_configuration(const GridMultifunction& f, const StrandSystem& S, Int total) {
  if (total < 1) throw error("lift weight must be a positive integer");
  LiftOutcome out;
  out.total = total;

  const WeightSystem sys = collect_system(f, S);
  out.forced_zero = forced_zero_components(sys, S.components);
  std::vector<bool> zero(static_cast<std::size_t>(S.components), false);
  for (int c : out.forced_zero) zero[static_cast<std::size_t>(c)] = true;

  // Reduce the system by the forced components and read off contradictions
  // that need no further search.
  std::vector<SparseRow> rows;
  std::vector<Int> rhs;
  SparseRow reduced;
  for (const SparseRow& r : sys.balance)
    if (reduce_row(r, zero, reduced)) {
      rows.push_back(reduced);
      rhs.push_back(0);
    }
  bool empty_total = false;
  for (const SparseRow& r : sys.totals) {
    if (!reduce_row(r, zero, reduced)) {
      empty_total = true;
      continue;
    }
    rows.push_back(reduced);
    rhs.push_back(total);
  }
  if (empty_total) {
    out.obstruction =
        out.forced_zero.size() == static_cast<std::size_t>(S.components)
            ? "every strand component is forced to weight zero, so no vertex can carry total "
                  "weight " +
                  describe_total(total)
            : "some vertex is covered only by strand components forced to weight zero, so its "
              "total cannot reach " +
                  describe_total(total);
    return out;
  }

  // Exact rational feasibility of the reduced system.
  std::map<int, int> dense_of;  // component -> dense variable index
  for (const SparseRow& r : rows)
    for (const auto& [v, coef] : r) dense_of.emplace(v, 0);
  int next = 0;
  for (auto& [v, idx] : dense_of) idx = next++;
  std::vector<std::vector<Rat>> lp_rows;
  std::vector<Rat> lp_rhs;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<Rat> row(static_cast<std::size_t>(next), 0);
    for (const auto& [v, coef] : rows[i]) row[static_cast<std::size_t>(dense_of[v])] = coef;
    lp_rows.push_back(std::move(row));
    lp_rhs.push_back(Rat(rhs[i]));
  }
  const LpResult lp = solve_lp(lp_rows, lp_rhs, std::vector<Rat>(static_cast<std::size_t>(next), 0));
  if (lp.status == LpStatus::kInfeasible) {
    out.obstruction = "after forcing " + std::to_string(out.forced_zero.size()) +
                      " strand components to weight zero, the vertex totals cannot all equal " +
                      describe_total(total);
    return out;
  }
  if (lp.status != LpStatus::kOptimal)
    throw error("lift feasibility program cannot be unbounded");

  // Prefer the basic rational solution when it is already integral.
  std::vector<Int> dense_weights(static_cast<std::size_t>(next), 0);
  bool integral = true;
  for (int i = 0; i < next; ++i) {
    const Rat& x = lp.point[static_cast<std::size_t>(i)];
    if (denominator(x) == 1)
      dense_weights[static_cast<std::size_t>(i)] = numerator(x);
    else
      integral = false;
  }
  if (!integral) {
    if (next > 20)
      throw error("integer lift search is limited to 20 free strand components");
    // Remap rows to dense indices for the exhaustive search.
    std::vector<SparseRow> dense_rows;
    for (const SparseRow& r : rows) {
      SparseRow d;
      for (const auto& [v, coef] : r) d.emplace_back(dense_of[v], coef);
      std::sort(d.begin(), d.end());
      dense_rows.push_back(std::move(d));
    }
    IntegerSearch search(dense_rows, rhs, next, total);
    if (!search.run(dense_weights)) {
      out.obstruction = "a rational weighting exists but no nonnegative integer weighting meets "
                        "every vertex total of " +
                        describe_total(total);
      return out;
    }
  }

  out.feasible = true;
  out.weights.assign(static_cast<std::size_t>(S.components), 0);
  for (const auto& [v, idx] : dense_of)
    out.weights[static_cast<std::size_t>(v)] = dense_weights[static_cast<std::size_t>(idx)];

  // Exact verification of every vertex total before reporting success.
  for (const SparseRow& r : sys.totals) {
    Int sum = 0;
    for (const auto& [v, coef] : r) sum += coef * out.weights[static_cast<std::size_t>(v)];
    if (sum != total) throw error("lift verification failed: a vertex total is off");
  }
  for (const SparseRow& r : sys.balance) {
    Int sum = 0;
    for (const auto& [v, coef] : r) sum += coef * out.weights[static_cast<std::size_t>(v)];
    if (sum != 0) throw error("lift verification failed: a continuation row is off");
  }
  return out;
}

std::vector<std::pair<Point, Int>> lift_configuration_at(const GridMultifunction& f,
                                                         const StrandSystem& S,
                                                         const LiftOutcome& lift, long long node) {
  if (!lift.feasible) throw error("no configuration: the lift is infeasible");
  std::vector<std::pair<Point, Int>> out;
  const auto& pts = f.value_at(node).points();
  for (int p = 0; p < static_cast<int>(pts.size()); ++p)
    out.emplace_back(pts[static_cast<std::size_t>(p)],
                     lift.weights[static_cast<std::size_t>(S.component_of({node, p}))]);
  return out;
}

BoundaryClassEntry boundary_class_order_check(const GridMultifunction& f, Int r, int eps_steps) {
  const StrandSystem strands = build_strand_system(f, f.adjacent_variation());
  const LiftOutcome lift = lift_to_configuration(f, strands, r);
  if (!lift.feasible)
    throw error("the map admits no weight-" + describe_total(r) +
                " configuration lift; use the plain selection test instead (" + lift.obstruction +
                ")");
  BoundaryClassEntry entry = boundary_class_order(f, eps_steps);
  if (!entry.order.has_value() || *entry.order == 0 || r % *entry.order != 0)
    throw error("boundary class order does not divide the lift weight " + describe_total(r) +
                "; the discretization is too coarse to be faithful");
  return entry;
}

}  // namespace homsel
