#pragma once

// Cubical complexes on the unit cube at a fixed grid resolution. An
// elementary cube is encoded by its center on the half-step lattice: axis
// coordinate 2a for the degenerate interval {a} and 2a+1 for the unit extent
// [a, a+1] (in grid units), so parity reads off which axes are spanned.
// Up to four axes, 16 bits each, packed into one 64-bit key.
//
// On top of the raw complexes this header provides the two geometric
// constructions the selection machinery needs: the pair (cube, boundary) of
// the domain itself, and the fattened graph pair of a sampled multivalued
// map, together with the axis-forgetting projection onto the domain.

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "homsel/chain.hpp"
#include "homsel/common.hpp"
#include "homsel/sparse_reduce.hpp"

namespace homsel {

using CubeKey = std::uint64_t;

constexpr int kMaxSpaceDim = 4;

CubeKey pack_cube(const std::array<int, kMaxSpaceDim>& half_coords, int space_dim);
std::array<int, kMaxSpaceDim> unpack_cube(CubeKey key, int space_dim);
// Number of spanned (odd) axes.
int cube_dim(CubeKey key, int space_dim);

// Oriented faces of a cube: pairs (face key, incidence coefficient) following
// the alternating-sign convention, so that taking boundaries twice cancels.
std::vector<std::pair<CubeKey, int>> cube_faces(CubeKey key, int space_dim);

// A finite face-closed set of elementary cubes with deterministic cell
// indices (sorted by key within each degree).
class CubicalComplex {
 public:
  // Cells must be face-closed; coordinates must lie in [0, 2*resolution].
  CubicalComplex(int space_dim, int resolution, std::vector<CubeKey> cells);

  int space_dim() const { return d_; }
  int resolution() const { return res_; }
  int cell_count(int q) const;
  long long total_cells() const;
  CubeKey cell_key(int q, int index) const;
  // -1 when the cube is not a cell of this complex.
  int cell_index(int q, CubeKey key) const;
  bool contains(CubeKey key) const;

  // Boundary of cell (q, index) as (index in degree q-1, coefficient).
  std::vector<std::pair<int, int>> boundary_of(int q, int index) const;

  // Dense view with coordinate labels; intended for small complexes.
  ChainComplex to_chain_complex() const;

  // Adds the degree-q boundary matrix (rows: degree q-1, cols: degree q).
  void feed_boundary(int q, SparseReducer& reducer) const;

 private:
  int d_;
  int res_;
  std::vector<std::vector<CubeKey>> cells_;
  std::unordered_map<CubeKey, int> index_;
};

// A complex together with a face-closed subcomplex selection (per degree,
// sorted cell indices), i.e. the chain-level data of a pair of spaces.
struct PairComplex {
  CubicalComplex complex;
  std::vector<std::vector<int>> sub_selection;
  int domain_dim = 0;    // leading axes: the domain factor
  int codomain_dim = 0;  // trailing axes: the codomain factor (0 for plain pairs)

  // Index translation between absolute cells and relative (quotient) cells.
  struct RelativeIndex {
    std::vector<int> to_rel;    // absolute index -> relative index or -1
    std::vector<int> from_rel;  // relative index -> absolute index
  };
  RelativeIndex relative_index(int q) const;
  int relative_count(int q) const;
  // Adds the relative degree-q boundary matrix to the reducer.
  void feed_relative_boundary(int q, const RelativeIndex& rows, const RelativeIndex& cols,
                              SparseReducer& reducer) const;
  // Dense pair view for the small-complex path.
  Subcomplex to_subcomplex(const ChainComplex& parent) const;
};

// The pair (full cube complex of [0,1]^m, its topological boundary).
PairComplex build_domain_pair(int m, int resolution);

// One recorded value of a sampled multivalued map: a domain grid vertex (in
// grid units) and one member of the value set (in unit coordinates).
struct GraphSample {
  std::vector<int> x;
  std::vector<double> y;
};

// Fattened graph pair: every elementary cube contained in the closed box of
// half-width (eps_steps + 1/2) grid steps around some sample, paired with the
// part lying over the domain boundary. Containment (rather than a center
// test) keeps the set face-closed per sample.
PairComplex build_graph_pair(int m, int n, int resolution, int eps_steps,
                             const std::vector<GraphSample>& samples);

// The projection forgetting the codomain axes: a graph cube maps to its
// domain part when all codomain axes are degenerate (coefficient +1) and to
// zero otherwise. Returns the image key in the m-axis encoding.
std::optional<CubeKey> project_cube(CubeKey key, int m, int n);

}  // namespace homsel
