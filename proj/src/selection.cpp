#include "homsel/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <unordered_map>

#include "homsel/metric.hpp"
#include "homsel/sparse_reduce.hpp"

namespace homsel {

namespace {

// Ints are serialized as JSON numbers while they fit in 64 bits and as
// decimal strings beyond, so reports stay lossless.
nlohmann::json json_int(const Int& v) {
  static const Int lo = std::numeric_limits<long long>::min();
  static const Int hi = std::numeric_limits<long long>::max();
  if (v >= lo && v <= hi) return nlohmann::json(v.convert_to<long long>());
  return nlohmann::json(v.str());
}

nlohmann::json group_json(const HomologyGroup& g) {
  nlohmann::json torsion = nlohmann::json::array();
  for (const Int& t : g.torsion) torsion.push_back(json_int(t));
  return {{"betti", g.betti}, {"torsion", torsion}};
}

int generator_count(const HomologyGroup& g) {
  return g.betti + static_cast<int>(g.torsion.size());
}

// Relative H_m of the domain pair, computed (not assumed): the domain complex
// has no cells above degree m, so the group is free of rank
// (relative m-cells) - rank(relative boundary).
HomologyGroup domain_pair_group_at(int m, int resolution) {
  const PairComplex dom = build_domain_pair(m, resolution);
  const auto rows = dom.relative_index(m - 1);
  const auto cols = dom.relative_index(m);
  SparseReducer red(static_cast<int>(rows.from_rel.size()),
                    static_cast<int>(cols.from_rel.size()));
  dom.feed_relative_boundary(m, rows, cols, red);
  const auto res = red.reduce();
  HomologyGroup g;
  g.betti = static_cast<int>(static_cast<long long>(cols.from_rel.size()) - res.rank);
  return g;
}

}  // namespace

CubeKey probe_cube(int m, int resolution) {
  if (m < 1 || m >= kMaxSpaceDim)
    throw error("selection: domain dimension out of range");
  if (resolution < 1) throw error("selection: resolution must be positive");
  const int c = (resolution % 2 == 1) ? resolution : resolution - 1;
  std::array<int, kMaxSpaceDim> coords{};
  for (int t = 0; t < m; ++t) coords[t] = c;
  return pack_cube(coords, m);
}

long long projected_multiplier(int m, int n, int resolution,
                               const std::vector<std::pair<CubeKey, int>>& chain) {
  const CubeKey probe = probe_cube(m, resolution);
  long long total = 0;
  for (const auto& [key, coeff] : chain) {
    const auto image = project_cube(key, m, n);
    if (image && *image == probe) total = checked_add(total, coeff);
  }
  return total;
}

std::vector<Int> SelectionTestEntry::induced_matrix() const {
  std::vector<Int> row(generator_count(graph_pair_group), 0);
  if (!row.empty()) row[0] = degree;
  return row;
}

nlohmann::json SelectionTestEntry::to_json() const {
  nlohmann::json matrix_row = nlohmann::json::array();
  for (const Int& v : induced_matrix()) matrix_row.push_back(json_int(v));
  nlohmann::json j{
      {"eps_steps", eps_steps},
      {"verdict", admits ? "ADMITS" : "FAILS"},
      {"degree", json_int(degree)},
      {"induced_matrix", nlohmann::json::array({matrix_row})},
      {"graph_pair_homology", group_json(graph_pair_group)},
      {"domain_pair_homology", group_json(domain_pair_group)},
      {"complex",
       {{"total_cells", graph_cells},
        {"relative_m_cells", relative_m_cells},
        {"rank_boundary_m", rank_m},
        {"rank_boundary_m_plus_one", rank_m_plus_one}}}};
  if (!admits) {
    // The negative verdict is certified exactly: the probe functional has gcd
    // zero over a basis of the full lattice of relative m-cycles, so every
    // relative class projects to zero.
    j["certificate"] = {
        {"kind", "probe-functional-vanishes-on-relative-cycle-lattice"},
        {"relative_cycle_rank", relative_m_cells - rank_m}};
  }
  return j;
}

nlohmann::json BoundaryClassEntry::to_json() const {
  return {{"eps_steps", eps_steps},
          {"order", order ? json_int(*order) : nlohmann::json()},
          {"graph_homology_below", group_json(graph_group)}};
}

bool SelectionReport::admits_on_all_rungs() const {
  if (entries.empty()) return false;
  return std::all_of(entries.begin(), entries.end(),
                     [](const SelectionTestEntry& e) { return e.admits; });
}

nlohmann::json SelectionReport::to_json() const {
  nlohmann::json entry_list = nlohmann::json::array();
  for (const auto& e : entries) entry_list.push_back(e.to_json());
  nlohmann::json j{{"m", m},
                   {"n", n},
                   {"resolution", resolution},
                   {"k", bound},
                   {"eps_ladder", eps_ladder},
                   {"entries", entry_list},
                   {"admits_on_all_rungs", admits_on_all_rungs()}};
  if (!boundary_classes.empty()) {
    nlohmann::json orders = nlohmann::json::array();
    for (const auto& b : boundary_classes) orders.push_back(b.to_json());
    j["boundary_classes"] = orders;
  }
  return j;
}

SelectionTestEntry homological_selection_test(const GridMultifunction& f, int eps_steps) {
  if (eps_steps < 1) throw error("selection: eps must be at least one grid step");
  const int m = f.domain_dim();
  const int n = f.codomain_dim();
  const int resolution = f.resolution();
  const PairComplex pair = build_graph_pair(m, n, resolution, eps_steps, f.graph_samples());

  SelectionTestEntry entry;
  entry.eps_steps = eps_steps;
  entry.graph_cells = pair.complex.total_cells();

  const auto below = pair.relative_index(m - 1);
  const auto level = pair.relative_index(m);
  const auto above = pair.relative_index(m + 1);
  const int m_cells = static_cast<int>(level.from_rel.size());
  entry.relative_m_cells = m_cells;

  // Degree-m relative boundary, with the probe functional carried through the
  // column operations: its gcd over the kernel generates the image lattice of
  // the projection inside H_m(domain pair) = Z. The functional is supported
  // on the relative m-cells lying directly over the probe cell.
  SparseReducer lower(static_cast<int>(below.from_rel.size()), m_cells);
  pair.feed_relative_boundary(m, below, level, lower);
  const CubeKey probe = probe_cube(m, resolution);
  std::vector<std::pair<int, long long>> functional;
  for (int j = 0; j < m_cells; ++j) {
    const CubeKey key = pair.complex.cell_key(m, level.from_rel[j]);
    const auto image = project_cube(key, m, n);
    if (image && *image == probe) functional.emplace_back(j, 1);
  }
  const int slot = lower.add_carried_row(functional);
  const auto lower_result = lower.reduce();
  entry.rank_m = lower_result.rank;
  entry.degree = lower_result.row_kernel_gcds[slot];
  if (entry.degree < 0) entry.degree = -entry.degree;
  entry.admits = entry.degree != 0;

  // Degree-(m+1) relative boundary: rank finishes the betti count and its
  // invariant factors are the torsion of relative H_m.
  SparseReducer upper(m_cells, static_cast<int>(above.from_rel.size()));
  pair.feed_relative_boundary(m + 1, level, above, upper);
  const auto upper_result = upper.reduce();
  entry.rank_m_plus_one = upper_result.rank;
  entry.graph_pair_group.betti =
      static_cast<int>(m_cells - lower_result.rank - upper_result.rank);
  entry.graph_pair_group.torsion = upper_result.nontrivial_factors();

  entry.domain_pair_group = domain_pair_group_at(m, resolution);
  return entry;
}

SelectionTestEntry homological_selection_test(const GridMultifunction& f, double eps) {
  const double steps = eps * f.resolution();
  const int eps_steps = static_cast<int>(std::floor(steps + 1e-9));
  if (eps_steps < 1) throw error("selection: eps must be at least one grid step");
  return homological_selection_test(f, eps_steps);
}

SelectionReport selection_test_ladder(const GridMultifunction& f, std::vector<int> eps_ladder) {
  if (eps_ladder.empty()) throw error("selection: empty eps ladder");
  SelectionReport report;
  report.m = f.domain_dim();
  report.n = f.codomain_dim();
  report.resolution = f.resolution();
  report.bound = f.bound();
  report.eps_ladder = eps_ladder;
  for (int e : eps_ladder) report.entries.push_back(homological_selection_test(f, e));
  return report;
}

BoundaryClassEntry boundary_class_order(const GridMultifunction& f, int eps_steps) {
  if (eps_steps < 1) throw error("selection: eps must be at least one grid step");
  const int m = f.domain_dim();
  const int n = f.codomain_dim();
  const int resolution = f.resolution();

  // The map must take one and the same single value on the whole boundary.
  const Point* constant = nullptr;
  for (long long lin = 0; lin < f.vertex_count(); ++lin) {
    const auto vertex = f.vertex_of(lin);
    const bool on_boundary = std::any_of(vertex.begin(), vertex.end(), [&](int c) {
      return c == 0 || c == resolution;
    });
    if (!on_boundary) continue;
    const FiniteSubset& value = f.value_at(lin);
    if (value.size() != 1)
      throw error("boundary class: value on the domain boundary is not a single point");
    if (constant == nullptr) {
      constant = &value.points().front();
    } else if (sup_metric(*constant, value.points().front()) > 1e-9) {
      throw error("boundary class: value is not constant on the domain boundary");
    }
  }
  if (constant == nullptr) throw error("boundary class: domain has no boundary vertices");

  const PairComplex pair = build_graph_pair(m, n, resolution, eps_steps, f.graph_samples());
  const CubicalComplex& cx = pair.complex;

  // The boundary cycle: the boundary of the full domain chain (every m-cube
  // with coefficient one), embedded at the constant height. Embedding at an
  // even height commutes with taking faces, so the result is a cycle.
  std::unordered_map<CubeKey, int> boundary_chain;
  std::array<int, kMaxSpaceDim> coords{};
  for (int t = 0; t < m; ++t) coords[t] = 1;
  while (true) {
    for (const auto& [face, coeff] : cube_faces(pack_cube(coords, m), m)) {
      auto it = boundary_chain.emplace(face, 0).first;
      it->second += coeff;
      if (it->second == 0) boundary_chain.erase(it);
    }
    int axis = m - 1;
    while (axis >= 0 && coords[axis] == 2 * resolution - 1) coords[axis--] = 1;
    if (axis < 0) break;
    coords[axis] += 2;
  }

  std::array<int, kMaxSpaceDim> height{};
  for (int j = 0; j < n; ++j) {
    const long long t = std::llround(resolution * constant->coords[j]);
    height[j] = 2 * static_cast<int>(std::clamp<long long>(t, 0, resolution));
  }

  std::vector<std::pair<int, long long>> cycle;
  for (const auto& [face, coeff] : boundary_chain) {
    const auto dcoords = unpack_cube(face, m);
    std::array<int, kMaxSpaceDim> lifted{};
    for (int t = 0; t < m; ++t) lifted[t] = dcoords[t];
    for (int j = 0; j < n; ++j) lifted[m + j] = height[j];
    const CubeKey key = pack_cube(lifted, m + n);
    const int index = cx.cell_index(m - 1, key);
    if (index < 0)
      throw error("boundary class: fattened complex misses the boundary cycle; increase eps");
    cycle.emplace_back(index, coeff);
  }

  // Order of the cycle's class modulo the image of the degree-m boundary;
  // a second reduction one degree down completes the homology group.
  SparseReducer level(cx.cell_count(m - 1), cx.cell_count(m));
  cx.feed_boundary(m, level);
  const int slot = level.add_carried_column(cycle);
  const auto level_result = level.reduce();

  long long rank_below = 0;
  if (m >= 2) {
    SparseReducer below(cx.cell_count(m - 2), cx.cell_count(m - 1));
    cx.feed_boundary(m - 1, below);
    rank_below = below.reduce().rank;
  }

  BoundaryClassEntry entry;
  entry.eps_steps = eps_steps;
  entry.order = SparseReducer::Result::order_from(level_result.column_constraints[slot]);
  entry.graph_group.betti =
      static_cast<int>(cx.cell_count(m - 1) - rank_below - level_result.rank);
  entry.graph_group.torsion = level_result.nontrivial_factors();
  return entry;
}

GridMultifunction min_selection(const GridMultifunction& f) {
  if (f.codomain_dim() != 1)
    throw error("min selection: codomain dimension must be one");
  std::vector<std::vector<Point>> values;
  values.reserve(static_cast<std::size_t>(f.vertex_count()));
  for (long long lin = 0; lin < f.vertex_count(); ++lin) {
    // FiniteSubset keeps members sorted, so the least scalar comes first.
    values.push_back({f.value_at(lin).points().front()});
  }
  return GridMultifunction(f.domain_dim(), 1, f.resolution(), 1, std::move(values));
}

PathSelection path_selection(const GridMultifunction& f, int eps_steps) {
  if (f.domain_dim() != 1) throw error("path selection: domain dimension must be one");
  if (eps_steps < 1) throw error("selection: eps must be at least one grid step");
  const int n = f.codomain_dim();
  const int space = 1 + n;
  const int resolution = f.resolution();
  const PairComplex pair = build_graph_pair(1, n, resolution, eps_steps, f.graph_samples());
  const CubicalComplex& cx = pair.complex;

  // Breadth-first search through the 1-skeleton from the fiber over 0 to the
  // fiber over 1; the tree path is automatically simple.
  const int vertex_cells = cx.cell_count(0);
  std::vector<int> parent(vertex_cells, -2);
  std::vector<std::pair<int, int>> step_into(vertex_cells);  // (axis, direction)
  std::queue<int> frontier;
  for (int i = 0; i < vertex_cells; ++i) {
    if (unpack_cube(cx.cell_key(0, i), space)[0] == 0) {
      parent[i] = -1;
      frontier.push(i);
    }
  }
  int goal = -1;
  while (!frontier.empty() && goal < 0) {
    const int current = frontier.front();
    frontier.pop();
    const auto coords = unpack_cube(cx.cell_key(0, current), space);
    if (coords[0] == 2 * resolution) {
      goal = current;
      break;
    }
    for (int axis = 0; axis < space; ++axis) {
      for (int direction : {1, -1}) {
        auto edge = coords;
        edge[axis] += direction;
        if (edge[axis] < 0 || edge[axis] > 2 * resolution) continue;
        if (!cx.contains(pack_cube(edge, space))) continue;
        auto next = coords;
        next[axis] += 2 * direction;
        const int neighbor = cx.cell_index(0, pack_cube(next, space));
        if (neighbor < 0 || parent[neighbor] != -2) continue;
        parent[neighbor] = current;
        step_into[neighbor] = {axis, direction};
        frontier.push(neighbor);
      }
    }
  }
  if (goal < 0)
    throw error(
        "path selection: the fattened graph is disconnected between the fibers "
        "over 0 and 1; increase eps");

  PathSelection path;
  int cursor = goal;
  while (cursor != -1) {
    path.vertices.push_back(cx.cell_key(0, cursor));
    if (parent[cursor] >= 0) {
      const auto [axis, direction] = step_into[cursor];
      auto edge = unpack_cube(cx.cell_key(0, cursor), space);
      edge[axis] -= direction;  // back toward the parent: the edge's center
      path.edges.emplace_back(pack_cube(edge, space), direction);
    }
    cursor = parent[cursor];
  }
  std::reverse(path.vertices.begin(), path.vertices.end());
  std::reverse(path.edges.begin(), path.edges.end());
  return path;
}

}  // namespace homsel
