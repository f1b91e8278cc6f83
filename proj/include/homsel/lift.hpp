#pragma once

// Strand decomposition of a sampled multivalued map, and exact integer
// lifting of the map to a configuration: a family of value points carrying
// nonnegative integer weights of constant total. The strand system matches
// the value points of adjacent grid vertices; where fiber cardinalities
// agree the minimum-cost bijection joins points into strands, and where they
// differ the surplus points attach to their nearest continuation, recorded
// as merge events. A lift assigns each strand component a weight that is
// constant along the component, adds up across merges, and sums to the
// requested total at every vertex; the solver either produces such weights
// or returns the exact reason none exist. Cardinality drops are what make
// pinched families obstructed, so samplings should place collision loci on
// grid vertices (see the reference constructions).

#include <string>
#include <utility>
#include <vector>

#include "homsel/common.hpp"
#include "homsel/metric.hpp"
#include "homsel/multifunction.hpp"
#include "homsel/selection.hpp"

namespace homsel {

// One value point at one grid vertex.
struct StrandSlot {
  long long node = 0;  // row-major vertex index
  int member = 0;      // index into the fiber at that vertex
};

// The flow across one grid edge, directed from the vertex with the larger
// fiber (lower vertex index when the sizes agree) to the other: member j of
// the `from` fiber continues as member target[j] of the `to` fiber. Matched
// pairs have surplus[j] false; attachments born of a cardinality change have
// surplus[j] true and are the merge events of the system.
struct EdgeFlow {
  long long from_node = 0;
  long long to_node = 0;
  std::vector<int> target;
  std::vector<bool> surplus;
};

// A grid edge whose minimum-cost matching is not unique within the reporting
// margin. The choice taken is still deterministic (lexicographic), but the
// record tells downstream consumers the data did not determine it.
struct MatchAmbiguity {
  long long node_a = 0;
  long long node_b = 0;
  double margin = 0.0;  // displacement-scale gap between the two best choices
};

// The matched strand structure of a sampled map.
struct StrandSystem {
  int components = 0;
  std::vector<std::vector<int>> component;  // per vertex: member -> component
  std::vector<EdgeFlow> edges;              // every adjacent vertex pair
  std::vector<MatchAmbiguity> ambiguities;  // near-tied matching decisions
  std::vector<StrandSlot> representative;   // least slot of each component

  int component_of(const StrandSlot& s) const {
    return component[static_cast<std::size_t>(s.node)][static_cast<std::size_t>(s.member)];
  }
  // The surplus attachments only: one entry per point absorbed at a
  // cardinality change.
  std::vector<std::pair<StrandSlot, StrandSlot>> merge_events() const;
};

// Builds the strand system of f. Fibers of equal size at adjacent vertices
// are matched by the minimum-cost bijection under squared displacement (the
// squared cost cannot profit from crossing two strands that move the same
// way, which a plain chord cost can), ties broken lexicographically in
// member order, and the matched points are joined into strand components.
// Fibers of different sizes are matched partially, and each surplus point
// attaches to its nearest continuation without joining components; the
// weight equations these events impose are what the lift solver consumes.
// Matching decisions whose two best distinct costs sit within tol/2 of each
// other (on the displacement scale) are reported as ambiguities. tol should
// be at least the observed adjacent variation of f.
StrandSystem build_strand_system(const GridMultifunction& f, double tol);

// Outcome of the weighted lift: either per-component weights witnessing a
// configuration of total weight `total`, or an exact infeasibility
// certificate. The forced-zero list is reported in both cases: those
// components carry weight zero in every lift of any positive total.
struct LiftOutcome {
  bool feasible = false;
  Int total = 0;
  std::vector<Int> weights;      // per component, empty when infeasible
  std::vector<int> forced_zero;  // components with weight zero in every lift
  std::string obstruction;       // nonempty exactly when infeasible
};

// Decides whether f admits a configuration lift of the given total weight
// over the strand system S. Weight feasibility is solved exactly: rational
// elimination pins the components forced to zero, and an integer search over
// the rest (the systems here are small and near-unimodular) produces weights
// or proves none exist. Infeasibility is a successful outcome, not an error.
LiftOutcome lift_to_configuration(const GridMultifunction& f, const StrandSystem& S, Int total);

// The lifted configuration at one vertex: each fiber point with its weight.
std::vector<std::pair<Point, Int>> lift_configuration_at(const GridMultifunction& f,
                                                         const StrandSystem& S,
                                                         const LiftOutcome& lift, long long node);

// Boundary-class order for maps that admit a weight-r configuration lift:
// verifies liftability first (throwing if no lift exists, in which case the
// plain selection test is the right instrument) and then checks that the
// computed order divides r, as it must whenever the discretization is
// faithful. Returns the underlying boundary-class entry.
BoundaryClassEntry boundary_class_order_check(const GridMultifunction& f, Int r, int eps_steps);

}  // namespace homsel
