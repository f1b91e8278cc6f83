#include "homsel/dtransform.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace homsel {

namespace {

// g(j) = min_i max(f(i), |j-i| * step) for one line, out of place. The scan
// for each j walks outward from i = j and stops as soon as the distance term
// alone reaches the best value found: every further site i' has
// max(f(i'), |j-i'| * step) >= |j-i'| * step >= the stopping bound. Fibers
// of real maps keep the best value small, so the walk is short almost
// everywhere; the worst case (no nearby site beats the distance) is O(n).
void max_combine_line(const float* f, float* g, long long n, double step) {
  for (long long j = 0; j < n; ++j) {
    float best = f[j];
    for (long long d = 1; d < n; ++d) {
      const float bound = static_cast<float>(static_cast<double>(d) * step);
      if (bound >= best) break;
      const long long lo = j - d, hi = j + d;
      if (lo >= 0) best = std::min(best, std::max(f[lo], bound));
      if (hi < n) best = std::min(best, std::max(f[hi], bound));
    }
    g[j] = best;
  }
}

}  // namespace

void max_combine_axis(std::vector<float>& a, const std::vector<long long>& shape, int axis,
                      double step) {
  if (axis < 0 || axis >= static_cast<int>(shape.size())) throw std::invalid_argument("bad axis");
  long long total = 1;
  for (long long e : shape) {
    if (e <= 0) throw std::invalid_argument("bad shape");
    total *= e;
  }
  if (total != static_cast<long long>(a.size())) throw std::invalid_argument("shape mismatch");
  if (step <= 0) throw std::invalid_argument("step must be positive");

  const long long n = shape[static_cast<std::size_t>(axis)];
  long long inner = 1;  // stride of one step along `axis`
  for (std::size_t k = static_cast<std::size_t>(axis) + 1; k < shape.size(); ++k)
    inner *= shape[k];
  const long long outer = total / (n * inner);

  std::vector<float> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  for (long long o = 0; o < outer; ++o) {
    for (long long i = 0; i < inner; ++i) {
      float* base = a.data() + o * n * inner + i;
      for (long long j = 0; j < n; ++j) in[static_cast<std::size_t>(j)] = base[j * inner];
      max_combine_line(in.data(), out.data(), n, step);
      for (long long j = 0; j < n; ++j) base[j * inner] = out[static_cast<std::size_t>(j)];
    }
  }
}

std::vector<float> chebyshev_distance_field(const std::vector<char>& sites,
                                            const std::vector<long long>& shape, double step) {
  std::vector<float> field(sites.size());
  const float inf = std::numeric_limits<float>::infinity();
  for (std::size_t i = 0; i < sites.size(); ++i) field[i] = sites[i] ? 0.0f : inf;
  for (int axis = 0; axis < static_cast<int>(shape.size()); ++axis)
    max_combine_axis(field, shape, axis, step);
  return field;
}

}  // namespace homsel
