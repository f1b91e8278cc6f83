#pragma once

// Points of the strategy cube, finite subsets, weighted configurations, and
// the three metrics that relate them: the sup metric on points, the Hausdorff
// metric on finite subsets, and the min-over-matchings metric on
// configurations. Mixed strategies over n+1 pure strategies are stored in the
// cube model: the first n simplex coordinates, each in [0,1], compared with
// the sup metric.

#include <optional>
#include <vector>

#include "homsel/common.hpp"

namespace homsel {

// A point of [0,1]^d. Coordinates are kept exactly as stored; equality is
// exact on the floating values so that the metric axioms hold literally.
struct Point {
  std::vector<double> coords;

  Point() = default;
  explicit Point(std::vector<double> c);

  int dim() const { return static_cast<int>(coords.size()); }
  double operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }
  bool operator==(const Point& o) const { return coords == o.coords; }
  bool operator<(const Point& o) const { return coords < o.coords; }
};

// sup metric d(x,y) = max_i |x_i - y_i|.
double sup_metric(const Point& x, const Point& y);

// A nonempty set of at most `bound` pairwise distinct points of common
// dimension, stored sorted lexicographically for a canonical form.
class FiniteSubset {
 public:
  // Deduplicates (exact equality), sorts, and validates against the bound.
  FiniteSubset(std::vector<Point> points, int bound);

  const std::vector<Point>& points() const { return points_; }
  int bound() const { return bound_; }
  int size() const { return static_cast<int>(points_.size()); }
  int dim() const { return points_.front().dim(); }
  bool operator==(const FiniteSubset& o) const { return points_ == o.points_; }

 private:
  std::vector<Point> points_;
  int bound_;
};

// Hausdorff distance max{sup_x inf_y d(x,y), sup_y inf_x d(x,y)}.
double hausdorff_distance(const FiniteSubset& a, const FiniteSubset& b);

// Distance from a point to the nearest member of A.
double distance_to_subset(const FiniteSubset& a, const Point& x);

// True iff x lies in the closed eps-neighborhood A^eps (sup metric).
bool epsilon_neighborhood_indicator(const FiniteSubset& a, const Point& x, double eps);

// An unordered k-tuple with multiplicities: pairwise distinct points, each
// with a positive multiplicity, multiplicities summing to the total weight k.
class Configuration {
 public:
  struct Atom {
    Point point;
    int multiplicity;
  };

  // Merges duplicate points (summing multiplicities), sorts canonically
  // (lexicographic on coordinates), and validates the total weight.
  Configuration(std::vector<Atom> atoms, int total_weight);

  const std::vector<Atom>& atoms() const { return atoms_; }
  int total_weight() const { return total_weight_; }
  int dim() const { return atoms_.front().point.dim(); }
  bool operator==(const Configuration& o) const;

  // Expands to a weakly sorted list of k points, repeating by multiplicity.
  std::vector<Point> expand() const;

 private:
  std::vector<Atom> atoms_;
  int total_weight_;
};

// Configuration metric min over matchings sigma of max_i d(x_sigma(i), y_i).
// Exhaustive over permutations for k <= 6; exact bottleneck assignment above.
double config_distance(const Configuration& u, const Configuration& v);

// The forgetful map q_k: drops multiplicities, keeping the point set.
FiniteSubset forget_weights(const Configuration& u);

// Exact bottleneck assignment between equal-size point lists: returns the
// matching (perm[i] = index in `b` assigned to a[i]) minimizing the maximum
// sup distance, tie-broken lexicographically on the assignment vector.
std::vector<int> bottleneck_assignment(const std::vector<Point>& a, const std::vector<Point>& b,
                                       double* cost = nullptr);

}  // namespace homsel
