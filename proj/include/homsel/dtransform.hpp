#pragma once
// Exact sup-metric cost transforms on row-major grids.
//
// The building block is the one-dimensional max-combine transform
//
//   g(j) = min_i max(f(i), |j - i| * step),
//
// which merges a per-site cost f with Chebyshev distance along one axis.
// Applying it along every axis of a grid turns a site-cost array into
//
//   G(x) = min_s max(f(s), d_sup(x, s)),
//
// because the sup distance is the max of the per-axis distances and the
// min over sites splits axis by axis. With f = 0 on a site set and
// +infinity elsewhere this is the exact sup-metric distance transform; with
// f(s) = distance from a fixed query to the fiber over s it is the exact
// distance to a multifunction graph, evaluated for every grid point at
// once. All results are exact minima over grid sites, not approximations.

#include <vector>

namespace homsel {

// In-place max-combine along `axis` of the row-major array `a` with extents
// `shape`; `step` is the grid spacing along that axis. Non-finite entries
// (infinity for "no site") are handled naturally.
void max_combine_axis(std::vector<float>& a, const std::vector<long long>& shape, int axis,
                      double step);

// Exact sup-metric distance from every grid point to the site set (sites
// marked nonzero). All axes share the spacing `step`. Returns +infinity
// everywhere when the site set is empty.
std::vector<float> chebyshev_distance_field(const std::vector<char>& sites,
                                            const std::vector<long long>& shape, double step);

}  // namespace homsel
