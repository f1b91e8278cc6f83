#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "homsel/common.hpp"
#include "homsel/metric.hpp"

using namespace homsel;

namespace {

// Independent reference for the bottleneck matching: exhaustive minimum over
// all permutations of the maximum sup distance, returning both the optimal
// cost and the lexicographically least optimal assignment.
double brute_bottleneck(const std::vector<Point>& a, const std::vector<Point>& b,
                        std::vector<int>* best_perm = nullptr) {
  const int n = static_cast<int>(a.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> arg;
  do {
    double cost = 0.0;
    for (int i = 0; i < n; ++i) cost = std::max(cost, sup_metric(a[i], b[perm[i]]));
    if (cost < best || (cost == best && (arg.empty() || perm < arg))) {
      best = cost;
      arg = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (best_perm) *best_perm = arg;
  return best;
}

Point random_point(Rng& rng, int dim) {
  std::vector<double> c(dim);
  // Snap to a coarse grid so exact coincidences (and hence the identity
  // axiom's converse) actually occur in the sample.
  for (double& x : c) x = rng.uniform_int(0, 8) / 8.0;
  return Point(c);
}

FiniteSubset random_subset(Rng& rng, int dim, int bound) {
  int m = static_cast<int>(rng.uniform_int(1, bound));
  std::vector<Point> pts;
  for (int i = 0; i < m; ++i) pts.push_back(random_point(rng, dim));
  return FiniteSubset(pts, bound);
}

Configuration random_config(Rng& rng, int dim, int k) {
  std::vector<Configuration::Atom> atoms;
  int left = k;
  while (left > 0) {
    int mult = static_cast<int>(rng.uniform_int(1, left));
    atoms.push_back({random_point(rng, dim), mult});
    left -= mult;
  }
  return Configuration(atoms, k);
}

}  // namespace

TEST_CASE("sup metric: known values and axioms") {
  Point x({0.25, 0.5});
  Point y({0.75, 0.5});
  CHECK(sup_metric(x, y) == 0.5);
  CHECK(sup_metric(Point({0.0, 0.0}), Point({0.125, 1.0})) == 1.0);

  Rng rng(11);
  for (int it = 0; it < 500; ++it) {
    int dim = static_cast<int>(rng.uniform_int(1, 4));
    Point a = random_point(rng, dim);
    Point b = random_point(rng, dim);
    Point c = random_point(rng, dim);
    CHECK(sup_metric(a, a) == 0.0);
    CHECK(sup_metric(a, b) == sup_metric(b, a));
    CHECK(sup_metric(a, c) <= sup_metric(a, b) + sup_metric(b, c) + 1e-15);
    if (sup_metric(a, b) == 0.0) CHECK(a == b);
  }
}

TEST_CASE("Hausdorff distance: known values") {
  FiniteSubset a({Point({0.0}), Point({0.5})}, 3);
  FiniteSubset b({Point({1.0})}, 3);
  // sup over a of dist to b is 1.0; sup over b of dist to a is 0.5.
  CHECK(hausdorff_distance(a, b) == 1.0);
  CHECK(hausdorff_distance(b, a) == 1.0);

  FiniteSubset c({Point({0.0, 0.0}), Point({1.0, 1.0})}, 2);
  FiniteSubset d({Point({0.0, 0.25}), Point({1.0, 0.75})}, 2);
  CHECK(hausdorff_distance(c, d) == 0.25);

  CHECK(distance_to_subset(a, Point({0.75})) == 0.25);
  CHECK(epsilon_neighborhood_indicator(a, Point({0.75}), 0.25));
  CHECK(!epsilon_neighborhood_indicator(a, Point({0.76}), 0.009));
}

TEST_CASE("Hausdorff distance: metric axioms on random subsets") {
  Rng rng(12);
  for (int it = 0; it < 400; ++it) {
    int dim = static_cast<int>(rng.uniform_int(1, 3));
    FiniteSubset a = random_subset(rng, dim, 4);
    FiniteSubset b = random_subset(rng, dim, 4);
    FiniteSubset c = random_subset(rng, dim, 4);
    CHECK(hausdorff_distance(a, a) == 0.0);
    CHECK(hausdorff_distance(a, b) == hausdorff_distance(b, a));
    CHECK(hausdorff_distance(a, c) <=
          hausdorff_distance(a, b) + hausdorff_distance(b, c) + 1e-15);
    if (hausdorff_distance(a, b) == 0.0) CHECK(a == b);
  }
}

TEST_CASE("configuration metric: known values and multiplicity sensitivity") {
  Configuration u({{Point({0.0}), 2}, {Point({1.0}), 1}}, 3);
  Configuration v({{Point({0.0}), 1}, {Point({1.0}), 2}}, 3);
  // Optimal matching moves one copy across the full interval.
  CHECK(config_distance(u, v) == 1.0);
  CHECK(config_distance(u, u) == 0.0);

  Configuration w({{Point({0.25}), 3}}, 3);
  CHECK(config_distance(u, w) == 0.75);

  // Same support, different weights: distinct configurations at positive
  // distance, but equal images under the forgetful map.
  CHECK(!(u == v));
  CHECK(forget_weights(u) == forget_weights(v));
  CHECK(hausdorff_distance(forget_weights(u), forget_weights(v)) == 0.0);
}

TEST_CASE("configuration metric: axioms and Lipschitz forgetful map") {
  Rng rng(13);
  for (int it = 0; it < 400; ++it) {
    int dim = static_cast<int>(rng.uniform_int(1, 3));
    int k = static_cast<int>(rng.uniform_int(1, 5));
    Configuration u = random_config(rng, dim, k);
    Configuration v = random_config(rng, dim, k);
    Configuration w = random_config(rng, dim, k);
    CHECK(config_distance(u, u) == 0.0);
    CHECK(config_distance(u, v) == config_distance(v, u));
    CHECK(config_distance(u, w) <= config_distance(u, v) + config_distance(v, w) + 1e-15);
    if (config_distance(u, v) == 0.0) CHECK(u == v);
    // The forgetful map is 1-Lipschitz.
    CHECK(hausdorff_distance(forget_weights(u), forget_weights(v)) <=
          config_distance(u, v) + 1e-15);
  }
}

TEST_CASE("bottleneck assignment matches exhaustive search and is lex-least") {
  Rng rng(14);
  for (int it = 0; it < 300; ++it) {
    int n = static_cast<int>(rng.uniform_int(1, 6));
    int dim = static_cast<int>(rng.uniform_int(1, 3));
    std::vector<Point> a, b;
    for (int i = 0; i < n; ++i) {
      a.push_back(random_point(rng, dim));
      b.push_back(random_point(rng, dim));
    }
    std::vector<int> expect;
    double expect_cost = brute_bottleneck(a, b, &expect);
    double cost = -1.0;
    std::vector<int> got = bottleneck_assignment(a, b, &cost);
    CHECK(cost == expect_cost);
    CHECK(got == expect);
  }
}

namespace {

// Test-local bipartite matcher (augmenting paths) used only to certify the
// production bottleneck result on sizes where brute force is infeasible.
bool oracle_perfect_matching(const std::vector<std::vector<char>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> match(n, -1);
  std::vector<char> seen;
  std::function<bool(int)> augment = [&](int u) -> bool {
    for (int v = 0; v < n; ++v) {
      if (adj[u][v] && !seen[v]) {
        seen[v] = 1;
        if (match[v] < 0 || augment(match[v])) {
          match[v] = u;
          return true;
        }
      }
    }
    return false;
  };
  for (int u = 0; u < n; ++u) {
    seen.assign(n, 0);
    if (!augment(u)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("bottleneck assignment scales past the permutation regime") {
  Rng rng(15);
  const int n = 40;
  std::vector<Point> a, b;
  for (int i = 0; i < n; ++i) {
    a.push_back(random_point(rng, 2));
    b.push_back(random_point(rng, 2));
  }
  double cost = -1.0;
  std::vector<int> perm = bottleneck_assignment(a, b, &cost);
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; ++i) CHECK(sorted[i] == i);
  double attained = 0.0;
  for (int i = 0; i < n; ++i) attained = std::max(attained, sup_metric(a[i], b[perm[i]]));
  CHECK(attained == cost);
  // Optimality certificate: restricted to pairs strictly closer than the
  // reported cost, no perfect matching exists.
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  bool any_below = false;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      adj[i][j] = sup_metric(a[i], b[j]) < cost ? 1 : 0;
      any_below = any_below || adj[i][j];
    }
  }
  if (any_below) CHECK(!oracle_perfect_matching(adj));
}

TEST_CASE("configurations canonicalize duplicates and validate weights") {
  Configuration u({{Point({0.5}), 1}, {Point({0.5}), 2}}, 3);
  REQUIRE(u.atoms().size() == 1);
  CHECK(u.atoms()[0].multiplicity == 3);
  CHECK(u.expand().size() == 3);
  CHECK_THROWS_AS(Configuration({{Point({0.5}), 1}}, 2), error);
  CHECK_THROWS_AS(Configuration({{Point({0.5}), 0}}, 0), error);
  CHECK_THROWS_AS(FiniteSubset({}, 3), error);
  CHECK_THROWS_AS(FiniteSubset({Point({0.1}), Point({0.2})}, 1), error);
  CHECK_THROWS_AS(FiniteSubset({Point({1.5})}, 1), error);
  CHECK_THROWS_AS(FiniteSubset({Point({0.1}), Point({0.2, 0.3})}, 3), error);
}
