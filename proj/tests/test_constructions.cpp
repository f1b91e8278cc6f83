#include <cmath>
#include <functional>
#include <optional>

#include <doctest.h>

#include "homsel/chain.hpp"
#include "homsel/constructions.hpp"
#include "homsel/metric.hpp"
#include "homsel/selection.hpp"

using namespace homsel;

namespace {

Point polar(double radius, double angle) {
  return Point({0.5 + radius * std::cos(angle), 0.5 + radius * std::sin(angle)});
}

// Largest Hausdorff jump of a set-valued map along a path, sampled with
// `steps` increments; small bounds certify continuity of the formulas.
double path_jump(const std::function<std::vector<Point>(const Point&)>& f,
                 const std::function<Point(double)>& path, int steps, int bound) {
  double worst = 0.0;
  std::optional<FiniteSubset> prev;
  for (int s = 0; s <= steps; ++s) {
    FiniteSubset cur(f(path(static_cast<double>(s) / steps)), bound);
    if (prev) worst = std::max(worst, hausdorff_distance(*prev, cur));
    prev = std::move(cur);
  }
  return worst;
}

double worst_circle_jump(const std::function<std::vector<Point>(const Point&)>& f, double radius,
                         int steps, int bound) {
  return path_jump(
      f, [radius](double t) { return polar(radius, 2.0 * kPi * t); }, steps, bound);
}

double distance_to_circle(const Point& p) {
  return std::abs(std::hypot(p[0] - 0.5, p[1] - 0.5) - kCircleRadius);
}

}  // namespace

TEST_CASE("reference circle geometry") {
  for (int i = 1; i <= 3; ++i) {
    CHECK(distance_to_circle(anchor_point(i)) == doctest::Approx(0.0).epsilon(1e-12));
    // The arc P_i starts at the previous anchor, passes its own at midpoint,
    // and ends at the next one.
    const int prev = i == 1 ? 3 : i - 1;
    const int next = i == 3 ? 1 : i + 1;
    CHECK(sup_metric(arc_path(i, 0.0), anchor_point(prev)) < 1e-12);
    CHECK(sup_metric(arc_path(i, 0.5), anchor_point(i)) < 1e-12);
    CHECK(sup_metric(arc_path(i, 1.0), anchor_point(next)) < 1e-12);
  }
  // Anchors are pairwise one-third of a turn apart.
  const double chord = sup_metric(anchor_point(1), anchor_point(2));
  CHECK(std::hypot(anchor_point(1)[0] - anchor_point(2)[0],
                   anchor_point(1)[1] - anchor_point(2)[1]) ==
        doctest::Approx(2.0 * kCircleRadius * std::sin(kPi / 3.0)));
  CHECK(chord > 0.2);
  // Constant speed along the arcs.
  const double step0 = std::hypot(arc_path(1, 0.1)[0] - arc_path(1, 0.0)[0],
                                  arc_path(1, 0.1)[1] - arc_path(1, 0.0)[1]);
  const double step1 = std::hypot(arc_path(1, 0.9)[0] - arc_path(1, 0.8)[0],
                                  arc_path(1, 0.9)[1] - arc_path(1, 0.8)[1]);
  CHECK(step0 == doctest::Approx(step1).epsilon(1e-9));
}

TEST_CASE("wedge maps: centre, boundary, and value ranges") {
  const FiniteSubset anchors({anchor_point(1), anchor_point(2), anchor_point(3)}, 3);
  CHECK(hausdorff_distance(FiniteSubset(triple_wedge_map(square_centre()), 3), anchors) < 1e-12);
  CHECK(hausdorff_distance(FiniteSubset(game_map_one(square_centre()), 3), anchors) < 1e-12);

  const Point corner({0.0, 0.0});
  const Point edge({1.0, 0.37});
  for (const Point& x : {corner, edge}) {
    CHECK(FiniteSubset(triple_wedge_map(x), 3).size() == 1);
    CHECK(sup_metric(triple_wedge_map(x)[0], square_centre()) < 1e-12);
    CHECK(FiniteSubset(single_wedge_map(1, x), 3).size() == 1);
    CHECK(sup_metric(single_wedge_map(1, x)[0], square_centre()) < 1e-12);
    for (int w = 1; w <= 3; ++w) {
      CHECK(FiniteSubset(cyclic_cover_map(w, x), w).size() == 1);
      CHECK(sup_metric(cyclic_cover_map(w, x)[0], square_centre()) < 1e-12);
    }
    // The first game map stays on the reference circle even on the boundary.
    for (const Point& p : game_map_one(x)) CHECK(distance_to_circle(p) < 1e-12);
  }

  // Petal interiors map onto the circle; the complement contracts inside it.
  int on_circle_count = 0, inside_count = 0;
  for (int gx = 0; gx <= 40; ++gx) {
    for (int gy = 0; gy <= 40; ++gy) {
      const Point x({gx / 40.0, gy / 40.0});
      for (const Point& p : triple_wedge_map(x)) {
        const double off = distance_to_circle(p);
        CHECK(off < kCircleRadius + 1e-12);
        if (off < 1e-9)
          ++on_circle_count;
        else
          ++inside_count;
      }
      for (const Point& p : game_map_one(x)) CHECK(distance_to_circle(p) < 1e-12);
    }
  }
  CHECK(on_circle_count > 100);
  CHECK(inside_count > 100);
}

TEST_CASE("wedge maps are continuous along probing paths") {
  const int steps = 4000;
  // Circles crossing the petals, the gaps, the tips, and the complement; the
  // pinch makes the maps steep but never discontinuous.
  for (double radius : {0.08, 0.215, 0.3, 0.45}) {
    CHECK(worst_circle_jump(triple_wedge_map, radius, steps, 3) < 0.05);
    CHECK(worst_circle_jump(game_map_one, radius, steps, 3) < 0.05);
    CHECK(worst_circle_jump([](const Point& x) { return single_wedge_map(1, x); }, radius, steps,
                            3) < 0.05);
    CHECK(worst_circle_jump([](const Point& y) { return std::vector<Point>{game_map_two(y)}; },
                            radius, steps, 1) < 0.05);
    for (int w = 1; w <= 3; ++w)
      CHECK(worst_circle_jump([w](const Point& x) { return cyclic_cover_map(w, x); }, radius,
                              steps, w) < 0.05);
  }
  // Radial rays: through a petal axis, through a gap between petals, and
  // through the slit direction of the single wedge.
  for (double angle : {0.0, petal_axis_angle(1), petal_axis_angle(2) - kPetalHalfWidth}) {
    auto ray = [angle](double t) { return polar(0.49 * t, angle); };
    CHECK(path_jump(triple_wedge_map, ray, steps, 3) < 0.05);
    CHECK(path_jump(game_map_one, ray, steps, 3) < 0.05);
    CHECK(path_jump([](const Point& x) { return single_wedge_map(1, x); }, ray, steps, 3) < 0.05);
  }
}

TEST_CASE("second game map traces the petal outlines") {
  // Anchors map to petal tips, arc midpoints to the pinch.
  for (int i = 1; i <= 3; ++i) {
    const Point tip = polar(kPetalRadius, petal_axis_angle(i));
    CHECK(sup_metric(game_map_two(anchor_point(i)), tip) < 1e-12);
  }
  const Point mid12 = polar(kCircleRadius, (150.0 / 180.0) * kPi);
  CHECK(sup_metric(game_map_two(mid12), square_centre()) < 1e-12);
  CHECK(sup_metric(game_map_two(square_centre()), square_centre()) < 1e-12);
  // Off the circle the map scales radially and stays single valued.
  const Point outside({0.95, 0.95});
  const Point value = game_map_two(outside);
  CHECK(std::hypot(value[0] - 0.5, value[1] - 0.5) <= kPetalRadius + 1e-12);
}

TEST_CASE("composing the game maps never returns the start") {
  // For an equilibrium some circle point would satisfy y in f1(f2(y)); the
  // minimum over the circle of the distance from y to f1(f2(y)) is the
  // obstruction gap and must be bounded away from zero.
  double gap = 1.0;
  const int steps = 3600;
  for (int s = 0; s < steps; ++s) {
    const Point y = polar(kCircleRadius, 2.0 * kPi * s / steps);
    const Point x = game_map_two(y);
    for (const Point& p : game_map_one(x)) gap = std::min(gap, sup_metric(y, p));
  }
  CHECK(gap > 0.1);
}

TEST_CASE("exact CW model of the single wedge graph") {
  const ChainComplex c = cw_graph_single_wedge();
  CHECK(c.basis_count(0) == 2);
  CHECK(c.basis_count(1) == 3);
  CHECK(c.basis_count(2) == 3);
  CHECK(homology(c, 0) == HomologyGroup{1, {}});
  CHECK(homology(c, 1) == HomologyGroup{0, {}});
  CHECK(homology(c, 2) == HomologyGroup{1, {}});
  // The common strand cycle alpha bounds (it is the whole of d(e1)), and the
  // difference of the two plain sheets generates H2.
  HomologyPresentation h1(c, 1);
  CHECK(h1.is_boundary({Int(0), Int(0), Int(1)}));
  HomologyPresentation h2(c, 2);
  const auto coords = h2.class_coordinates({Int(1), Int(-1), Int(0)});
  REQUIRE(coords.size() == 1);
  CHECK((coords[0] == 1 || coords[0] == -1));
}

TEST_CASE("exact CW model of the triple wedge graph") {
  const ChainComplex c = cw_graph_triple_wedge();
  CHECK(c.basis_count(0) == 6);
  CHECK(c.basis_count(1) == 9);
  CHECK(c.basis_count(2) == 3);
  CHECK(homology(c, 0) == HomologyGroup{1, {}});
  CHECK(homology(c, 1) == HomologyGroup{1, {}});
  CHECK(homology(c, 2) == HomologyGroup{0, {}});

  HomologyPresentation h1(c, 1);
  const std::vector<Int> alpha = cw_triple_boundary_cycle();
  CHECK(h1.is_cycle(alpha));
  // alpha generates H1 freely: infinite order and unit coordinate.
  CHECK(!h1.class_order(alpha).has_value());
  const auto coords = h1.class_coordinates(alpha);
  REQUIRE(coords.size() == 1);
  CHECK((coords[0] == 1 || coords[0] == -1));
  // alpha is homologous to every strand loop a1_i + a2_i.
  for (int i = 1; i <= 3; ++i) {
    std::vector<Int> z = alpha;
    const std::vector<Int> loop = cw_triple_strand_loop(i);
    for (std::size_t j = 0; j < z.size(); ++j) z[j] -= loop[j];
    CHECK(h1.is_boundary(z));
    CHECK(h1.class_coordinates(loop) == coords);
  }
}

TEST_CASE("sampled wedge maps select as the models predict") {
  // The single wedge still admits a selection: one of its sheets survives.
  const SelectionTestEntry single = homological_selection_test(sampled_single_wedge(16), 1);
  CHECK(single.admits);
  CHECK(single.degree == 1);
  // The triple wedge does not: the projection vanishes on every relative
  // cycle of the fattened graph pair.
  const SelectionTestEntry triple = homological_selection_test(sampled_triple_wedge(16), 1);
  CHECK(!triple.admits);
  CHECK(triple.degree == 0);
  // Certifying facts for the two graphs: the rim class of the single wedge
  // bounds, while the rim class of the triple wedge is free.
  const BoundaryClassEntry rim_single = boundary_class_order(sampled_single_wedge(16), 1);
  REQUIRE(rim_single.order.has_value());
  CHECK(*rim_single.order == 1);
  const BoundaryClassEntry rim_triple = boundary_class_order(sampled_triple_wedge(16), 1);
  CHECK(!rim_triple.order.has_value());
}

TEST_CASE("sampled fibers degenerate exactly on the collision rays") {
  // On the outer half of each petal axis the sweeping strand coincides with a
  // cast-off strand bit for bit, so the sampled fiber drops to two points.
  // The axes are grid directions, so even resolutions sample the rays
  // exactly; strand analysis depends on these cardinality drops.
  const int res = 32;
  const GridMultifunction triple = sampled_triple_wedge(res);
  auto fiber_size = [](const GridMultifunction& f, int gx, int gy) {
    return static_cast<int>(f.value_at(std::vector<int>{gx, gy}).size());
  };
  // Petal 1 points up, petal 2 left, petal 3 down; rho in (0.11, 0.22] is the
  // collided stretch, which at resolution 32 is grid offsets 4..7.
  for (int off = 4; off <= 7; ++off) {
    CHECK(fiber_size(triple, 16, 16 + off) == 2);
    CHECK(fiber_size(triple, 16 - off, 16) == 2);
    CHECK(fiber_size(triple, 16, 16 - off) == 2);
    // One step to the side of a ray the fiber is generic again.
    CHECK(fiber_size(triple, 15, 16 + off) == 3);
    CHECK(fiber_size(triple, 16 - off, 15) == 3);
    CHECK(fiber_size(triple, 17, 16 - off) == 3);
  }
  // Beyond the tip the contracted outline values stay collided up to the
  // square boundary, where everything lands on the centre point.
  CHECK(fiber_size(triple, 16, 16 + 8) == 2);
  CHECK(fiber_size(triple, 16, 31) == 2);
  CHECK(fiber_size(triple, 16, 32) == 1);
  // The single wedge collides along the positive horizontal ray only.
  const GridMultifunction single = sampled_single_wedge(res);
  for (int off = 1; off <= 15; ++off) {
    CHECK(fiber_size(single, 16 + off, 16) == 2);
    CHECK(fiber_size(single, 16 - off, 16) == 3);
  }
  CHECK(fiber_size(single, 16, 16) == 1);
}

TEST_CASE("cyclic cover family has the prescribed rim orders") {
  for (int w = 1; w <= 3; ++w) {
    const BoundaryClassEntry rim = boundary_class_order(sampled_cyclic_cover(w, 16), 1);
    REQUIRE(rim.order.has_value());
    CHECK(*rim.order == w);
    if (w > 1) CHECK(rim.graph_group == HomologyGroup{0, {Int(w)}});
  }
  CHECK_THROWS_AS((void)cyclic_cover_map(4, square_centre()), error);
  // The two-fold family is the plus/minus pair about the centre.
  const auto pair = cyclic_cover_map(2, Point({0.7, 0.6}));
  REQUIRE(pair.size() == 2);
  CHECK(std::abs(pair[0][0] + pair[1][0] - 1.0) < 1e-12);
  CHECK(std::abs(pair[0][1] + pair[1][1] - 1.0) < 1e-12);
}

TEST_CASE("random liftable unions admit selections") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    Rng rng(seed);
    const GridMultifunction f = random_liftable_map(rng, 2, 12);
    CHECK(f.adjacent_variation() < 0.2);
    const SelectionTestEntry entry = homological_selection_test(f, 2);
    CHECK(entry.admits);
  }
  Rng rng(7);
  CHECK_THROWS_AS((void)random_liftable_map(rng, 0, 8), error);
}

TEST_CASE("samplers are deterministic") {
  CHECK(sampled_triple_wedge(8) == sampled_triple_wedge(8));
  CHECK(sampled_game_map_one(8) == sampled_game_map_one(8));
  Rng a(99), b(99), c(100);
  CHECK(random_liftable_map(a, 3, 8) == random_liftable_map(b, 3, 8));
  CHECK(!(random_liftable_map(a, 3, 8) == random_liftable_map(c, 3, 8)));
}
