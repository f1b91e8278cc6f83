#pragma once

// Homological selection testing. The fattened graph of a sampled multivalued
// map on [0,1]^m is paired with its part over the domain boundary; the map
// admits a homological selection at a given fattening radius exactly when the
// axis-forgetting projection is nonzero on relative homology in degree m.
// Because the domain pair carries no cells above degree m, that map is read
// off exactly: the image of the induced homomorphism into H_m of the domain
// pair (an infinite cyclic group) is generated by the gcd of a probe
// functional over the lattice of relative cycles.
//
// Alongside the test live the low-dimensional explicit selections (pointwise
// minimum for scalar values, edge paths for curve domains) and the order of
// the constant-height boundary cycle inside the graph complex, the
// obstruction that torsion-weighted liftable maps must satisfy.

#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "homsel/chain.hpp"
#include "homsel/common.hpp"
#include "homsel/cubical.hpp"
#include "homsel/multifunction.hpp"

namespace homsel {

// Outcome of the selection test at one fattening radius.
struct SelectionTestEntry {
  int eps_steps = 0;
  // Nonnegative generator of the image lattice inside H_m(domain pair) = Z.
  Int degree = 0;
  bool admits = false;
  HomologyGroup graph_pair_group;   // relative H_m of the fattened graph pair
  HomologyGroup domain_pair_group;  // relative H_m of the domain pair
  long long graph_cells = 0;        // cells of the fattened complex, all degrees
  long long relative_m_cells = 0;
  long long rank_m = 0;             // rank of the relative degree-m boundary
  long long rank_m_plus_one = 0;    // rank of the relative degree-(m+1) boundary

  // The projection on relative H_m as a 1 x (generator count) integer matrix,
  // written in a basis of the source adapted to the probe functional: the
  // image generator appears once, every other generator maps to zero.
  std::vector<Int> induced_matrix() const;
  nlohmann::json to_json() const;
};

// Order of the boundary cycle at the constant boundary height, taken in the
// absolute homology of the fattened graph complex in degree m-1.
struct BoundaryClassEntry {
  int eps_steps = 0;
  std::optional<Int> order;  // nullopt: the class has infinite order
  HomologyGroup graph_group;  // absolute H_{m-1} of the graph complex
  nlohmann::json to_json() const;
};

// Ladder of test outcomes over several fattening radii.
struct SelectionReport {
  int m = 0;
  int n = 0;
  int resolution = 0;
  int bound = 0;
  std::vector<int> eps_ladder;
  std::vector<SelectionTestEntry> entries;
  // Filled only for inputs whose lift feasibility was established by the
  // caller; the order must then divide the total lift weight.
  std::vector<BoundaryClassEntry> boundary_classes;

  bool admits_on_all_rungs() const;
  nlohmann::json to_json() const;
};

// Runs the relative-homology test at one radius (in grid steps, >= 1).
SelectionTestEntry homological_selection_test(const GridMultifunction& f, int eps_steps);
// Same, with the radius given as a length; it must be at least one grid step.
SelectionTestEntry homological_selection_test(const GridMultifunction& f, double eps);

// Runs the test on every rung of the ladder (default {2, 3, 4} grid steps).
SelectionReport selection_test_ladder(const GridMultifunction& f,
                                      std::vector<int> eps_ladder = {2, 3, 4});

// Computes the class order of the boundary cycle for a map taking one and the
// same single value on the whole domain boundary; throws otherwise.
BoundaryClassEntry boundary_class_order(const GridMultifunction& f, int eps_steps);

// The pointwise-minimum selection of a scalar-valued map (codomain dimension
// one): at every vertex, the least member. Single-valued, same resolution.
GridMultifunction min_selection(const GridMultifunction& f);

// A simple edge path across the fattened graph of a curve multifunction
// (domain dimension one), from a fiber vertex over 0 to one over 1.
struct PathSelection {
  std::vector<CubeKey> vertices;               // visited 0-cells, in order
  std::vector<std::pair<CubeKey, int>> edges;  // the path as a signed 1-chain
};
PathSelection path_selection(const GridMultifunction& f, int eps_steps);

// The probe cell: a fixed interior m-cube of the domain grid. Any relative
// cycle of the domain pair is an integer multiple of the fundamental chain,
// so its coefficient there reads off the multiple.
CubeKey probe_cube(int m, int resolution);

// Net coefficient of the projected chain over the probe cell. For a chain
// whose projection is a relative cycle of the domain pair this is the
// multiple of the fundamental class it carries; +/-1 certifies a generator.
long long projected_multiplier(int m, int n, int resolution,
                               const std::vector<std::pair<CubeKey, int>>& chain);

}  // namespace homsel
