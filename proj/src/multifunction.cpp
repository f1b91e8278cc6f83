#include "homsel/multifunction.hpp"

#include <algorithm>
#include <cmath>

namespace homsel {

GridMultifunction::GridMultifunction(int m, int n, int resolution, int k,
                                     std::vector<std::vector<Point>> values)
    : m_(m), n_(n), res_(resolution), k_(k) {
  if (m < 1 || m > kMaxSpaceDim - 1) throw error("multifunction: bad domain dimension");
  if (n < 1 || n > kMaxSpaceDim - 1) throw error("multifunction: bad codomain dimension");
  if (resolution < 1) throw error("multifunction: resolution must be positive");
  if (k < 1) throw error("multifunction: value bound must be positive");
  long long expected = 1;
  for (int i = 0; i < m; ++i) expected *= resolution + 1;
  if (static_cast<long long>(values.size()) != expected)
    throw error("multifunction: expected one value set per grid vertex");
  values_.reserve(values.size());
  for (auto& pts : values) {
    for (const Point& p : pts) {
      if (p.dim() != n) throw error("multifunction: value dimension mismatch");
    }
    values_.emplace_back(std::move(pts), k);
  }
}

long long GridMultifunction::vertex_count() const {
  long long total = 1;
  for (int i = 0; i < m_; ++i) total *= res_ + 1;
  return total;
}

long long GridMultifunction::linear_index(const std::vector<int>& x) const {
  if (static_cast<int>(x.size()) != m_) throw error("multifunction: vertex arity mismatch");
  long long idx = 0;
  for (int i = 0; i < m_; ++i) {
    if (x[i] < 0 || x[i] > res_) throw error("multifunction: vertex outside the grid");
    idx = idx * (res_ + 1) + x[i];
  }
  return idx;
}

std::vector<int> GridMultifunction::vertex_of(long long linear) const {
  std::vector<int> x(m_);
  for (int i = m_ - 1; i >= 0; --i) {
    x[i] = static_cast<int>(linear % (res_ + 1));
    linear /= res_ + 1;
  }
  return x;
}

const FiniteSubset& GridMultifunction::value_at(const std::vector<int>& x) const {
  return values_[linear_index(x)];
}

std::vector<GraphSample> GridMultifunction::graph_samples() const {
  std::vector<GraphSample> out;
  for (long long v = 0; v < vertex_count(); ++v) {
    std::vector<int> x = vertex_of(v);
    for (const Point& p : values_[v].points()) {
      out.push_back({x, p.coords});
    }
  }
  return out;
}

double GridMultifunction::adjacent_variation() const {
  double worst = 0.0;
  for (long long v = 0; v < vertex_count(); ++v) {
    std::vector<int> x = vertex_of(v);
    for (int axis = 0; axis < m_; ++axis) {
      if (x[axis] == res_) continue;
      std::vector<int> y = x;
      y[axis] += 1;
      worst = std::max(worst, hausdorff_distance(values_[v], value_at(y)));
    }
  }
  return worst;
}

bool GridMultifunction::operator==(const GridMultifunction& o) const {
  return m_ == o.m_ && n_ == o.n_ && res_ == o.res_ && k_ == o.k_ && values_ == o.values_;
}

nlohmann::json GridMultifunction::to_json() const {
  nlohmann::json values = nlohmann::json::array();
  for (const FiniteSubset& v : values_) {
    nlohmann::json pts = nlohmann::json::array();
    for (const Point& p : v.points()) pts.push_back(p.coords);
    values.push_back(std::move(pts));
  }
  return nlohmann::json{
      {"m", m_}, {"n", n_}, {"resolution", res_}, {"k", k_}, {"values", std::move(values)}};
}

GridMultifunction GridMultifunction::from_json(const nlohmann::json& j) {
  for (const char* field : {"m", "n", "resolution", "k", "values"}) {
    if (!j.contains(field))
      throw error(std::string("multifunction: missing field '") + field + "'");
  }
  const int m = j.at("m").get<int>();
  const int n = j.at("n").get<int>();
  const int res = j.at("resolution").get<int>();
  const int k = j.at("k").get<int>();
  std::vector<std::vector<Point>> values;
  for (const nlohmann::json& entry : j.at("values")) {
    std::vector<Point> pts;
    for (const nlohmann::json& p : entry) {
      pts.emplace_back(p.get<std::vector<double>>());
    }
    values.push_back(std::move(pts));
  }
  return GridMultifunction(m, n, res, k, std::move(values));
}

GridMultifunction sample_multifunction(
    int m, int n, int resolution, int k,
    const std::function<std::vector<Point>(const Point&)>& f) {
  long long total = 1;
  for (int i = 0; i < m; ++i) total *= resolution + 1;
  std::vector<std::vector<Point>> values;
  values.reserve(total);
  for (long long v = 0; v < total; ++v) {
    long long rest = v;
    std::vector<int> x(m);
    for (int i = m - 1; i >= 0; --i) {
      x[i] = static_cast<int>(rest % (resolution + 1));
      rest /= resolution + 1;
    }
    std::vector<double> unit(m);
    for (int i = 0; i < m; ++i) unit[i] = static_cast<double>(x[i]) / resolution;
    values.push_back(f(Point(unit)));
  }
  return GridMultifunction(m, n, resolution, k, std::move(values));
}

}  // namespace homsel
