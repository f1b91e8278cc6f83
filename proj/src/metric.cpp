#include "homsel/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace homsel {

namespace {

void require_finite_unit(const std::vector<double>& coords) {
  for (double c : coords) {
    if (!std::isfinite(c)) throw error("point coordinate not finite");
    if (c < 0.0 || c > 1.0) throw error("point coordinate outside [0,1]");
  }
}

void require_same_dim(int a, int b, const char* what) {
  if (a != b) throw error(std::string(what) + ": dimension mismatch");
}

}  // namespace

Point::Point(std::vector<double> c) : coords(std::move(c)) {
  if (coords.empty()) throw error("point must have positive dimension");
  require_finite_unit(coords);
}

double sup_metric(const Point& x, const Point& y) {
  require_same_dim(x.dim(), y.dim(), "sup_metric");
  double d = 0.0;
  for (int i = 0; i < x.dim(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

FiniteSubset::FiniteSubset(std::vector<Point> points, int bound) : points_(std::move(points)), bound_(bound) {
  if (points_.empty()) throw error("finite subset must be nonempty");
  if (bound_ < 1) throw error("cardinality bound must be positive");
  const int d = points_.front().dim();
  for (const Point& p : points_) require_same_dim(p.dim(), d, "FiniteSubset");
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
  if (static_cast<int>(points_.size()) > bound_)
    throw error("finite subset exceeds cardinality bound");
}

double hausdorff_distance(const FiniteSubset& a, const FiniteSubset& b) {
  require_same_dim(a.dim(), b.dim(), "hausdorff_distance");
  double d = 0.0;
  for (const Point& p : a.points()) d = std::max(d, distance_to_subset(b, p));
  for (const Point& q : b.points()) d = std::max(d, distance_to_subset(a, q));
  return d;
}

double distance_to_subset(const FiniteSubset& a, const Point& x) {
  require_same_dim(a.dim(), x.dim(), "distance_to_subset");
  double best = std::numeric_limits<double>::infinity();
  for (const Point& p : a.points()) best = std::min(best, sup_metric(p, x));
  return best;
}

bool epsilon_neighborhood_indicator(const FiniteSubset& a, const Point& x, double eps) {
  if (!(eps > 0.0)) throw error("eps must be positive");
  return distance_to_subset(a, x) <= eps;
}

Configuration::Configuration(std::vector<Atom> atoms, int total_weight)
    : atoms_(std::move(atoms)), total_weight_(total_weight) {
  if (atoms_.empty()) throw error("configuration must be nonempty");
  if (total_weight_ < 1) throw error("total weight must be positive");
  const int d = atoms_.front().point.dim();
  for (const Atom& a : atoms_) {
    require_same_dim(a.point.dim(), d, "Configuration");
    if (a.multiplicity < 1) throw error("multiplicity must be positive");
  }
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.point < b.point; });
  // Merge exact duplicates by summing multiplicities.
  std::vector<Atom> merged;
  for (const Atom& a : atoms_) {
    if (!merged.empty() && merged.back().point == a.point)
      merged.back().multiplicity += a.multiplicity;
    else
      merged.push_back(a);
  }
  atoms_ = std::move(merged);
  int sum = 0;
  for (const Atom& a : atoms_) sum += a.multiplicity;
  if (sum != total_weight_) throw error("multiplicities do not sum to the total weight");
}

bool Configuration::operator==(const Configuration& o) const {
  if (total_weight_ != o.total_weight_ || atoms_.size() != o.atoms_.size()) return false;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (!(atoms_[i].point == o.atoms_[i].point) || atoms_[i].multiplicity != o.atoms_[i].multiplicity)
      return false;
  return true;
}

std::vector<Point> Configuration::expand() const {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(total_weight_));
  for (const Atom& a : atoms_)
    for (int i = 0; i < a.multiplicity; ++i) out.push_back(a.point);
  return out;
}

namespace {

// Kuhn-style augmenting path search over edges with distance <= threshold.
bool try_kuhn(const std::vector<std::vector<double>>& dist, double threshold, int u,
              std::vector<char>& visited, std::vector<int>& match_of_b) {
  const int nb = static_cast<int>(dist[static_cast<std::size_t>(u)].size());
  for (int v = 0; v < nb; ++v) {
    if (visited[static_cast<std::size_t>(v)]) continue;
    if (dist[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] > threshold) continue;
    visited[static_cast<std::size_t>(v)] = 1;
    if (match_of_b[static_cast<std::size_t>(v)] < 0 ||
        try_kuhn(dist, threshold, match_of_b[static_cast<std::size_t>(v)], visited, match_of_b)) {
      match_of_b[static_cast<std::size_t>(v)] = u;
      return true;
    }
  }
  return false;
}

bool perfect_matching_exists(const std::vector<std::vector<double>>& dist, double threshold,
                             std::vector<int>* match_of_b_out = nullptr) {
  const int n = static_cast<int>(dist.size());
  std::vector<int> match_of_b(static_cast<std::size_t>(n), -1);
  for (int u = 0; u < n; ++u) {
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    if (!try_kuhn(dist, threshold, u, visited, match_of_b)) return false;
  }
  if (match_of_b_out) *match_of_b_out = std::move(match_of_b);
  return true;
}

}  // namespace

std::vector<int> bottleneck_assignment(const std::vector<Point>& a, const std::vector<Point>& b,
                                       double* cost) {
  if (a.size() != b.size() || a.empty()) throw error("bottleneck_assignment: size mismatch");
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<double>> dist(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(n)));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          sup_metric(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]);
      values.push_back(dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  // Binary search for the least threshold admitting a perfect matching.
  std::size_t lo = 0, hi = values.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (perfect_matching_exists(dist, values[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  const double threshold = values[lo];
  // Build the lexicographically least assignment at the optimal threshold:
  // fix a[0..i] to the smallest feasible partner in turn.
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      if (dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] > threshold) continue;
      // Tentatively assign i -> j and test that the remainder still matches.
      std::vector<std::vector<double>> rest;
      std::vector<int> rest_cols;
      for (int jj = 0; jj < n; ++jj)
        if (!used[static_cast<std::size_t>(jj)] && jj != j) rest_cols.push_back(jj);
      bool ok = true;
      if (i + 1 < n) {
        rest.assign(static_cast<std::size_t>(n - i - 1), {});
        for (int ii = i + 1; ii < n; ++ii) {
          auto& row = rest[static_cast<std::size_t>(ii - i - 1)];
          row.reserve(rest_cols.size());
          for (int jj : rest_cols)
            row.push_back(dist[static_cast<std::size_t>(ii)][static_cast<std::size_t>(jj)]);
        }
        ok = perfect_matching_exists(rest, threshold);
      }
      if (ok) {
        assignment[static_cast<std::size_t>(i)] = j;
        used[static_cast<std::size_t>(j)] = 1;
        break;
      }
    }
    if (assignment[static_cast<std::size_t>(i)] < 0)
      throw error("bottleneck_assignment: internal matching failure");
  }
  if (cost) {
    double c = 0.0;
    for (int i = 0; i < n; ++i)
      c = std::max(c, dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])]);
    *cost = c;
  }
  return assignment;
}

double config_distance(const Configuration& u, const Configuration& v) {
  if (u.total_weight() != v.total_weight()) throw error("config_distance: weight mismatch");
  require_same_dim(u.dim(), v.dim(), "config_distance");
  const std::vector<Point> xs = u.expand();
  const std::vector<Point> ys = v.expand();
  const int k = static_cast<int>(xs.size());
  if (k <= 6) {
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double m = 0.0;
      for (int i = 0; i < k && m < best; ++i)
        m = std::max(m, sup_metric(xs[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])],
                                   ys[static_cast<std::size_t>(i)]));
      best = std::min(best, m);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  double cost = 0.0;
  bottleneck_assignment(xs, ys, &cost);
  return cost;
}

FiniteSubset forget_weights(const Configuration& u) {
  std::vector<Point> pts;
  pts.reserve(u.atoms().size());
  for (const auto& a : u.atoms()) pts.push_back(a.point);
  return FiniteSubset(std::move(pts), u.total_weight());
}

}  // namespace homsel
