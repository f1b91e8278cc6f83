#pragma once

// Explicit analytic multivalued maps used as reference inputs and stress
// cases: covering-style families with prescribed lift weight, the single- and
// triple-wedge maps whose graphs pinch three strands over a disk, and the
// pair of game maps whose graphs are disjoint so that no equilibrium exists.
// Alongside the samplers, exact CW models of the two wedge graphs are
// provided for integer homology checks independent of any discretization.
//
// Conventions shared by every map here: the domain and codomain are copies of
// the unit square, "centre" means (1/2, 1/2), the reference circle has radius
// 1/4 about the centre, and all three-fold structures are indexed by
// i in {1, 2, 3}.

#include <vector>

#include "homsel/chain.hpp"
#include "homsel/common.hpp"
#include "homsel/metric.hpp"
#include "homsel/multifunction.hpp"

namespace homsel {

// Radius of the reference circle about the centre of the unit square.
inline constexpr double kCircleRadius = 0.25;
// Tip radius and angular half-width (radians) of the three-petal wedge that
// the triple-wedge map carries inside its domain. The half-width is the
// largest value at which the petal interiors stay disjoint (the axes are 90
// degrees apart), and the tip radius stops short of the half-radius disk
// boundary so the complement retains a contraction span along the axes.
// Size matters for the induced game: fatter petals keep the second game
// map's values away from the first map's near-cycles, which is what makes
// the measured no-equilibrium gap comfortably positive.
inline constexpr double kPetalRadius = 0.40;
inline constexpr double kPetalHalfWidth = 45.0 * kPi / 180.0;

// Centre of the unit square.
Point square_centre();
// Point of the reference circle at the given angle (radians).
Point on_circle(double angle);
// Anchor A_i on the reference circle, at angle 90 + (i-1)*120 degrees.
Point anchor_point(int i);
// Two-thirds arc P_i traversed at constant speed: P_i(0) is the anchor
// preceding A_i, P_i(1/2) = A_i, and P_i(1) is the anchor following A_i.
Point arc_path(int i, double t);
// Axis direction (radians) of petal i: 90 * i degrees. The axes sit on grid
// directions so that sampling at any even resolution hits each petal's
// collision ray exactly; the sampled fibers degenerate there, which is what
// strand analysis needs in order to see the pinches.
double petal_axis_angle(int i);

// Single-valued identity viewed as a multivalued map with one member.
std::vector<Point> identity_map(const Point& x);
// Two-valued square-root branch pair about the centre; admits a weight-2
// configuration lift and selects with degree 2.
std::vector<Point> double_cover_map(const Point& x);
// Cyclic w-fold branch family about the centre, constant on the boundary of
// the square; admits a configuration lift of total weight w (unit weight on
// each branch). Supported weights are 1, 2, 3.
std::vector<Point> cyclic_cover_map(int weight, const Point& x);
// Three-valued map whose graph is the single pinched wedge: two fixed strands
// and one strand sweeping the arc P_i, closed off by a contraction to the
// centre outside the half-radius disk. Constant on the boundary.
std::vector<Point> single_wedge_map(int i, const Point& x);
// Three-valued map whose graph wedges three pinched spheres along a common
// strand: each petal carries the single-wedge model of its own arc, and the
// complement contracts the petal outline values to the centre. Constant on
// the boundary.
std::vector<Point> triple_wedge_map(const Point& x);
// First game map: petals as in the triple wedge, complement constant along
// rays from the centre. Every value lies on the reference circle.
std::vector<Point> game_map_one(const Point& x);
// Second game map: single-valued; sends the reference circle onto the petal
// outlines (arc about A_i onto outline i) and scales radially off the circle.
// Composing the two game maps never returns the starting point, which is the
// obstruction to an equilibrium of the induced game.
Point game_map_two(const Point& y);

// Grid samplers for the maps above (exact formula evaluation per vertex).
GridMultifunction sampled_identity(int resolution);
GridMultifunction sampled_double_cover(int resolution);
GridMultifunction sampled_cyclic_cover(int weight, int resolution);
GridMultifunction sampled_single_wedge(int resolution);
GridMultifunction sampled_triple_wedge(int resolution);
GridMultifunction sampled_game_map_one(int resolution);
GridMultifunction sampled_game_map_two(int resolution);

// Union of `branches` random smooth single-valued maps of the square into
// itself; liftable by construction with unit weight on every branch.
GridMultifunction random_liftable_map(Rng& rng, int branches, int resolution);

// Cost function induced by a sampled multivalued map: the sup distance from
// (x, y) to the sampled graph of f. Zero exactly at the graph samples, so
// the argmin field of the cost recovers f up to grid rounding.
struct DistanceCost {
  GridMultifunction graph;
  double operator()(const Point& x, const Point& y) const;
};
DistanceCost distance_cost(GridMultifunction f);

// Minimum over a circle grid of the distance from x to the composite value
// set game_map_one(game_map_two(x)). Strictly positive: the composition
// never returns the starting point, so the induced two-player distance-cost
// game has no equilibrium; the measured value should stabilize as the
// resolution grows. The circle is sampled with arc steps matching 1/resolution.
double no_fixed_point_gap(int resolution);

// Exact CW model of the single-wedge graph. Cells are labelled v, w (degree
// 0), a1, a2, alpha (degree 1), e1, e2, e3 (degree 2), and the homology is
// H0 = Z, H1 = 0, H2 = Z.
ChainComplex cw_graph_single_wedge();
// Exact CW model of the triple-wedge graph. Cells are labelled v_i, w_i
// (degree 0), a1_i, a2_i, alpha_12, alpha_23, alpha_31 (degree 1), e1, e2,
// e3 (degree 2), and the homology is H0 = Z, H1 = Z (generated freely by the
// boundary cycle alpha), H2 = 0.
ChainComplex cw_graph_triple_wedge();
// The boundary cycle alpha = alpha_12 + alpha_23 + alpha_31 of the triple
// wedge, as a degree-1 chain.
std::vector<Int> cw_triple_boundary_cycle();
// The strand loop a1_i + a2_i of wedge summand i; alpha minus this loop is a
// boundary, which pins alpha as the free generator of H1.
std::vector<Int> cw_triple_strand_loop(int i);

}  // namespace homsel
