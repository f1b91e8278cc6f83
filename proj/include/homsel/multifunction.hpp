#pragma once

// Multivalued maps sampled on a regular grid: at every vertex of the
// resolution-R grid on [0,1]^m, a finite subset of [0,1]^n with at most k
// members. This is the discrete carrier for graph complexes, selections, and
// lift analysis. Values are canonicalized through FiniteSubset (deduplicated,
// sorted), so equal objects compare equal structurally.

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "homsel/common.hpp"
#include "homsel/cubical.hpp"
#include "homsel/metric.hpp"

namespace homsel {

class GridMultifunction {
 public:
  // values are indexed row-major with the last domain axis fastest; each
  // entry lists the value set at that vertex.
  GridMultifunction(int m, int n, int resolution, int k,
                    std::vector<std::vector<Point>> values);

  int domain_dim() const { return m_; }
  int codomain_dim() const { return n_; }
  int resolution() const { return res_; }
  int bound() const { return k_; }
  long long vertex_count() const;

  // Row-major linearization of a grid vertex (coordinates in 0..resolution).
  long long linear_index(const std::vector<int>& x) const;
  std::vector<int> vertex_of(long long linear) const;

  const FiniteSubset& value_at(const std::vector<int>& x) const;
  const FiniteSubset& value_at(long long linear) const { return values_[linear]; }

  // All (vertex, member) pairs, ordered by vertex then by member.
  std::vector<GraphSample> graph_samples() const;

  // Largest Hausdorff jump between the values at adjacent grid vertices; the
  // discrete modulus of continuity of the sampling.
  double adjacent_variation() const;

  bool operator==(const GridMultifunction& o) const;

  nlohmann::json to_json() const;
  static GridMultifunction from_json(const nlohmann::json& j);

 private:
  int m_, n_, res_, k_;
  std::vector<FiniteSubset> values_;
};

// Evaluates a set-valued function at every grid vertex. The callable receives
// the vertex in unit coordinates and returns the value list (deduplicated and
// bound-checked here).
GridMultifunction sample_multifunction(
    int m, int n, int resolution, int k,
    const std::function<std::vector<Point>(const Point&)>& f);

}  // namespace homsel
