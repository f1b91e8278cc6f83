#include "homsel/cubical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace homsel {

namespace {

constexpr int kAxisBits = 16;
constexpr CubeKey kAxisMask = (CubeKey(1) << kAxisBits) - 1;

void check_space_dim(int d) {
  if (d < 1 || d > kMaxSpaceDim) throw error("cubical: space dimension must be 1..4");
}

}  // namespace

CubeKey pack_cube(const std::array<int, kMaxSpaceDim>& half_coords, int space_dim) {
  check_space_dim(space_dim);
  CubeKey key = 0;
  for (int i = 0; i < space_dim; ++i) {
    const int c = half_coords[i];
    if (c < 0 || c > static_cast<int>(kAxisMask))
      throw error("cubical: half-step coordinate out of range");
    key |= CubeKey(c) << (kAxisBits * i);
  }
  return key;
}

std::array<int, kMaxSpaceDim> unpack_cube(CubeKey key, int space_dim) {
  check_space_dim(space_dim);
  std::array<int, kMaxSpaceDim> out{};
  for (int i = 0; i < space_dim; ++i) {
    out[i] = static_cast<int>((key >> (kAxisBits * i)) & kAxisMask);
  }
  return out;
}

int cube_dim(CubeKey key, int space_dim) {
  check_space_dim(space_dim);
  int dim = 0;
  for (int i = 0; i < space_dim; ++i) {
    dim += static_cast<int>((key >> (kAxisBits * i)) & 1);
  }
  return dim;
}

std::vector<std::pair<CubeKey, int>> cube_faces(CubeKey key, int space_dim) {
  std::array<int, kMaxSpaceDim> c = unpack_cube(key, space_dim);
  std::vector<std::pair<CubeKey, int>> out;
  int sign = 1;
  for (int i = 0; i < space_dim; ++i) {
    if (c[i] % 2 == 1) {
      std::array<int, kMaxSpaceDim> top = c, bottom = c;
      top[i] += 1;
      bottom[i] -= 1;
      out.emplace_back(pack_cube(top, space_dim), sign);
      out.emplace_back(pack_cube(bottom, space_dim), -sign);
      sign = -sign;
    }
  }
  return out;
}

CubicalComplex::CubicalComplex(int space_dim, int resolution, std::vector<CubeKey> cells)
    : d_(space_dim), res_(resolution) {
  check_space_dim(space_dim);
  if (resolution < 1) throw error("cubical: resolution must be positive");
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  cells_.resize(d_ + 1);
  for (CubeKey key : cells) {
    std::array<int, kMaxSpaceDim> c = unpack_cube(key, d_);
    for (int i = 0; i < d_; ++i) {
      if (c[i] < 0 || c[i] > 2 * res_)
        throw error("cubical: cell outside the grid");
    }
    cells_[cube_dim(key, d_)].push_back(key);
  }
  index_.reserve(cells.size() * 2);
  for (int q = 0; q <= d_; ++q) {
    for (int i = 0; i < static_cast<int>(cells_[q].size()); ++i) {
      index_.emplace(cells_[q][i], i);
    }
  }
  // Face closure check.
  for (int q = 1; q <= d_; ++q) {
    for (CubeKey key : cells_[q]) {
      for (const auto& [face, coeff] : cube_faces(key, d_)) {
        (void)coeff;
        if (index_.find(face) == index_.end())
          throw error("cubical: cell set is not closed under faces");
      }
    }
  }
}

int CubicalComplex::cell_count(int q) const {
  if (q < 0 || q > d_) return 0;
  return static_cast<int>(cells_[q].size());
}

long long CubicalComplex::total_cells() const {
  long long total = 0;
  for (int q = 0; q <= d_; ++q) total += cell_count(q);
  return total;
}

CubeKey CubicalComplex::cell_key(int q, int index) const {
  if (q < 0 || q > d_ || index < 0 || index >= cell_count(q))
    throw error("cubical: cell reference out of range");
  return cells_[q][index];
}

int CubicalComplex::cell_index(int q, CubeKey key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return -1;
  if (cube_dim(key, d_) != q) return -1;
  return it->second;
}

bool CubicalComplex::contains(CubeKey key) const { return index_.find(key) != index_.end(); }

std::vector<std::pair<int, int>> CubicalComplex::boundary_of(int q, int index) const {
  CubeKey key = cell_key(q, index);
  std::vector<std::pair<int, int>> out;
  for (const auto& [face, coeff] : cube_faces(key, d_)) {
    auto it = index_.find(face);
    if (it == index_.end()) throw error("cubical: missing face");
    out.emplace_back(it->second, coeff);
  }
  return out;
}

ChainComplex CubicalComplex::to_chain_complex() const {
  std::vector<int> counts(d_ + 1);
  for (int q = 0; q <= d_; ++q) counts[q] = cell_count(q);
  std::vector<IntMat> boundaries;
  for (int q = 1; q <= d_; ++q) {
    IntMat m(counts[q - 1], counts[q]);
    for (int j = 0; j < counts[q]; ++j) {
      for (const auto& [i, coeff] : boundary_of(q, j)) m.at(i, j) = Int(coeff);
    }
    boundaries.push_back(std::move(m));
  }
  std::vector<std::vector<std::string>> labels(d_ + 1);
  for (int q = 0; q <= d_; ++q) {
    for (CubeKey key : cells_[q]) {
      std::array<int, kMaxSpaceDim> c = unpack_cube(key, d_);
      std::string s = "(";
      for (int i = 0; i < d_; ++i) {
        if (i) s += ",";
        s += std::to_string(c[i]);
      }
      s += ")";
      labels[q].push_back(std::move(s));
    }
  }
  return ChainComplex(counts, std::move(boundaries), std::move(labels));
}

void CubicalComplex::feed_boundary(int q, SparseReducer& reducer) const {
  if (reducer.rows() != cell_count(q - 1) || reducer.cols() != cell_count(q))
    throw error("cubical: reducer shape does not match the boundary matrix");
  for (int j = 0; j < cell_count(q); ++j) {
    for (const auto& [i, coeff] : boundary_of(q, j)) reducer.add(i, j, coeff);
  }
}

PairComplex::RelativeIndex PairComplex::relative_index(int q) const {
  RelativeIndex out;
  const int count = complex.cell_count(q);
  out.to_rel.assign(count, -1);
  std::vector<char> in_sub(count, 0);
  if (q >= 0 && q < static_cast<int>(sub_selection.size())) {
    for (int i : sub_selection[q]) in_sub[i] = 1;
  }
  for (int i = 0; i < count; ++i) {
    if (!in_sub[i]) {
      out.to_rel[i] = static_cast<int>(out.from_rel.size());
      out.from_rel.push_back(i);
    }
  }
  return out;
}

int PairComplex::relative_count(int q) const {
  const int count = complex.cell_count(q);
  if (q < 0 || q >= static_cast<int>(sub_selection.size())) return count;
  return count - static_cast<int>(sub_selection[q].size());
}

void PairComplex::feed_relative_boundary(int q, const RelativeIndex& rows,
                                         const RelativeIndex& cols,
                                         SparseReducer& reducer) const {
  if (reducer.rows() != static_cast<int>(rows.from_rel.size()) ||
      reducer.cols() != static_cast<int>(cols.from_rel.size()))
    throw error("cubical: reducer shape does not match the relative boundary");
  for (int jr = 0; jr < static_cast<int>(cols.from_rel.size()); ++jr) {
    for (const auto& [i, coeff] : complex.boundary_of(q, cols.from_rel[jr])) {
      const int ir = rows.to_rel[i];
      if (ir >= 0) reducer.add(ir, jr, coeff);
    }
  }
}

Subcomplex PairComplex::to_subcomplex(const ChainComplex& parent) const {
  return Subcomplex(parent, sub_selection);
}

PairComplex build_domain_pair(int m, int resolution) {
  check_space_dim(m);
  const int side = 2 * resolution + 1;
  long long total = 1;
  for (int i = 0; i < m; ++i) total *= side;
  std::vector<CubeKey> keys;
  keys.reserve(static_cast<std::size_t>(total));
  std::array<int, kMaxSpaceDim> c{};
  for (long long linear = 0; linear < total; ++linear) {
    long long rest = linear;
    for (int i = 0; i < m; ++i) {
      c[i] = static_cast<int>(rest % side);
      rest /= side;
    }
    keys.push_back(pack_cube(c, m));
  }
  PairComplex out{CubicalComplex(m, resolution, std::move(keys)), {}, m, 0};
  out.sub_selection.resize(m + 1);
  for (int q = 0; q <= m; ++q) {
    for (int i = 0; i < out.complex.cell_count(q); ++i) {
      std::array<int, kMaxSpaceDim> cc = unpack_cube(out.complex.cell_key(q, i), m);
      bool extreme = false;
      for (int a = 0; a < m; ++a) {
        if (cc[a] == 0 || cc[a] == 2 * resolution) extreme = true;
      }
      if (extreme) out.sub_selection[q].push_back(i);
    }
  }
  return out;
}

namespace {

// Per-axis list of admissible half-step centers: those whose (possibly
// degenerate) interval lies inside the closed radius-rho window around the
// target, where rho is measured in half-steps.
std::vector<int> axis_centers(double target_half, int rho, int max_coord) {
  std::vector<int> out;
  const double slack = 1e-9;
  int lo = static_cast<int>(std::ceil(target_half - rho - slack));
  int hi = static_cast<int>(std::floor(target_half + rho + slack));
  lo = std::max(lo, 0);
  hi = std::min(hi, max_coord);
  for (int c = lo; c <= hi; ++c) {
    const int reach = (c % 2 == 1) ? rho - 1 : rho;
    if (std::abs(c - target_half) <= reach + slack) out.push_back(c);
  }
  return out;
}

}  // namespace

PairComplex build_graph_pair(int m, int n, int resolution, int eps_steps,
                             const std::vector<GraphSample>& samples) {
  const int d = m + n;
  check_space_dim(d);
  if (m < 1 || n < 1) throw error("cubical: graph pairs need both factors");
  if (eps_steps < 1) throw error("cubical: eps must be at least one grid step");
  if (samples.empty()) throw error("cubical: no graph samples");
  const int side = 2 * resolution + 1;
  const int rho = 2 * eps_steps + 1;

  long long lattice = 1;
  for (int i = 0; i < d; ++i) lattice *= side;
  if (lattice > (1ll << 31)) throw error("cubical: lattice too large for the graph builder");
  std::vector<bool> marked(static_cast<std::size_t>(lattice), false);
  std::array<long long, kMaxSpaceDim> stride{};
  long long s = 1;
  for (int i = 0; i < d; ++i) {
    stride[i] = s;
    s *= side;
  }

  std::array<std::vector<int>, kMaxSpaceDim> axis;
  for (const GraphSample& sample : samples) {
    if (static_cast<int>(sample.x.size()) != m || static_cast<int>(sample.y.size()) != n)
      throw error("cubical: sample arity mismatch");
    bool empty = false;
    for (int i = 0; i < m; ++i) {
      if (sample.x[i] < 0 || sample.x[i] > resolution)
        throw error("cubical: sample domain vertex outside the grid");
      axis[i] = axis_centers(2.0 * sample.x[i], rho, 2 * resolution);
      empty = empty || axis[i].empty();
    }
    for (int j = 0; j < n; ++j) {
      if (!(sample.y[j] >= 0.0 && sample.y[j] <= 1.0))
        throw error("cubical: sample value outside the unit cube");
      axis[m + j] = axis_centers(2.0 * resolution * sample.y[j], rho, 2 * resolution);
      empty = empty || axis[m + j].empty();
    }
    if (empty) continue;
    // Mark the product box.
    std::array<std::size_t, kMaxSpaceDim> pos{};
    for (;;) {
      long long linear = 0;
      for (int i = 0; i < d; ++i) linear += stride[i] * axis[i][pos[i]];
      marked[static_cast<std::size_t>(linear)] = true;
      int axis_idx = 0;
      while (axis_idx < d) {
        if (++pos[axis_idx] < axis[axis_idx].size()) break;
        pos[axis_idx] = 0;
        ++axis_idx;
      }
      if (axis_idx == d) break;
    }
  }

  std::vector<CubeKey> keys;
  for (long long linear = 0; linear < lattice; ++linear) {
    if (!marked[static_cast<std::size_t>(linear)]) continue;
    std::array<int, kMaxSpaceDim> c{};
    long long rest = linear;
    for (int i = 0; i < d; ++i) {
      c[i] = static_cast<int>(rest % side);
      rest /= side;
    }
    keys.push_back(pack_cube(c, d));
  }
  if (keys.empty()) throw error("cubical: the fattened graph is empty");

  PairComplex out{CubicalComplex(d, resolution, std::move(keys)), {}, m, n};
  out.sub_selection.resize(d + 1);
  for (int q = 0; q <= d; ++q) {
    for (int i = 0; i < out.complex.cell_count(q); ++i) {
      std::array<int, kMaxSpaceDim> cc = unpack_cube(out.complex.cell_key(q, i), d);
      bool over_boundary = false;
      for (int a = 0; a < m; ++a) {
        if (cc[a] == 0 || cc[a] == 2 * resolution) over_boundary = true;
      }
      if (over_boundary) out.sub_selection[q].push_back(i);
    }
  }
  return out;
}

std::optional<CubeKey> project_cube(CubeKey key, int m, int n) {
  const int d = m + n;
  check_space_dim(d);
  std::array<int, kMaxSpaceDim> c = unpack_cube(key, d);
  for (int j = m; j < d; ++j) {
    if (c[j] % 2 == 1) return std::nullopt;
  }
  std::array<int, kMaxSpaceDim> dc{};
  for (int i = 0; i < m; ++i) dc[i] = c[i];
  return pack_cube(dc, m);
}

}  // namespace homsel
