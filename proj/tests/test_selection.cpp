#include <doctest.h>

#include <cmath>
#include <vector>

#include "homsel/common.hpp"
#include "homsel/metric.hpp"
#include "homsel/multifunction.hpp"
#include "homsel/selection.hpp"

using namespace homsel;

namespace {

// Scalar-valued curve multifunction from a list of height functions.
GridMultifunction curve(int resolution, int bound,
                        const std::vector<std::function<double(double)>>& branches) {
  return sample_multifunction(1, 1, resolution, bound, [&](const Point& p) {
    std::vector<Point> out;
    for (const auto& b : branches) out.push_back(Point{{b(p.coords[0])}});
    return out;
  });
}

// The two square roots: z over the recentred domain square, values
// 0.5 +/- 0.35 sqrt(z) in the plane. Continuous as a set (the branch
// ambiguity is healed by taking both signs); one branch point at z = 0.
std::vector<Point> double_cover_value(const Point& p) {
  const double zx = 2 * p.coords[0] - 1, zy = 2 * p.coords[1] - 1;
  const double r = std::hypot(zx, zy);
  const double th = std::atan2(zy, zx);
  const double sx = std::sqrt(r) * std::cos(th / 2), sy = std::sqrt(r) * std::sin(th / 2);
  return {Point{{0.5 + 0.35 * sx, 0.5 + 0.35 * sy}},
          Point{{0.5 - 0.35 * sx, 0.5 - 0.35 * sy}}};
}

// Two-fold swap family: {c +/- rho(r) e^{i theta/2}} with rho vanishing at the
// centre and on the unit circle, so the square boundary sees the single value c.
std::vector<Point> swap_two_value(const Point& p) {
  const double zx = 2 * p.coords[0] - 1, zy = 2 * p.coords[1] - 1;
  const double r = std::min(std::hypot(zx, zy), 1.0);
  const double th = std::atan2(zy, zx);
  const double rho = 1.4 * r * (1 - r);
  const double sx = rho * std::cos(th / 2), sy = rho * std::sin(th / 2);
  return {Point{{0.5 + sx, 0.5 + sy}}, Point{{0.5 - sx, 0.5 - sy}}};
}

// A graph torn between two heights: no relative cycle crosses the domain.
GridMultifunction torn_graph(int resolution) {
  return sample_multifunction(1, 1, resolution, 2, [](const Point& p) {
    const double x = p.coords[0];
    std::vector<Point> out;
    if (x <= 0.625) out.push_back(Point{{0.0}});
    if (x >= 0.375) out.push_back(Point{{1.0}});
    return out;
  });
}

}  // namespace

TEST_CASE("identity curve admits with degree one") {
  const auto f = curve(8, 1, {[](double x) { return x; }});
  const auto entry = homological_selection_test(f, 2);
  CHECK(entry.admits);
  CHECK(entry.degree == 1);
  CHECK(entry.domain_pair_group.betti == 1);
  CHECK(entry.domain_pair_group.torsion.empty());
  CHECK(entry.graph_pair_group.betti == 1);
  CHECK(entry.graph_pair_group.torsion.empty());
  CHECK(entry.induced_matrix() == std::vector<Int>{1});
  const auto j = entry.to_json();
  CHECK(j.at("verdict") == "ADMITS");
  CHECK(j.at("degree") == 1);
  CHECK(!j.contains("certificate"));
}

TEST_CASE("two constant branches give two band classes and degree one") {
  // Heights far enough apart that the fattened bands stay disjoint at eps 2.
  const auto f = curve(8, 2, {[](double) { return 0.125; }, [](double) { return 0.875; }});
  const auto entry = homological_selection_test(f, 2);
  CHECK(entry.admits);
  CHECK(entry.degree == 1);
  CHECK(entry.graph_pair_group.betti == 2);
}

TEST_CASE("torn graph fails with an exact certificate") {
  const auto f = torn_graph(8);
  const auto entry = homological_selection_test(f, 2);
  CHECK(!entry.admits);
  CHECK(entry.degree == 0);
  const auto j = entry.to_json();
  CHECK(j.at("verdict") == "FAILS");
  CHECK(j.at("certificate").at("kind") ==
        "probe-functional-vanishes-on-relative-cycle-lattice");
  CHECK(entry.induced_matrix() == std::vector<Int>(entry.induced_matrix().size(), 0));
}

TEST_CASE("planar double cover admits with degree two") {
  const auto f = sample_multifunction(2, 2, 12, 2, double_cover_value);
  const auto entry = homological_selection_test(f, 1);
  CHECK(entry.admits);
  CHECK(entry.degree == 2);
  CHECK(entry.domain_pair_group.betti == 1);
  CHECK(entry.graph_pair_group.betti == 1);
  CHECK(entry.graph_pair_group.torsion.empty());
  CHECK(entry.induced_matrix() == std::vector<Int>{2});
}

TEST_CASE("ladder report is deterministic and complete") {
  const auto f = curve(8, 1, {[](double x) { return 0.25 + 0.5 * x; }});
  const auto report = selection_test_ladder(f, {1, 2});
  REQUIRE(report.entries.size() == 2);
  CHECK(report.admits_on_all_rungs());
  CHECK(report.m == 1);
  CHECK(report.n == 1);
  CHECK(report.resolution == 8);
  const auto j = report.to_json();
  CHECK(j.at("eps_ladder") == nlohmann::json({1, 2}));
  CHECK(j.at("entries").size() == 2);
  CHECK(j.at("admits_on_all_rungs") == true);
  CHECK(!j.contains("boundary_classes"));
  const auto again = selection_test_ladder(f, {1, 2}).to_json();
  CHECK(j.dump() == again.dump());
  CHECK_THROWS_AS(selection_test_ladder(f, {}), error&);
}

TEST_CASE("metric eps overload floors to grid steps") {
  const auto f = curve(8, 1, {[](double x) { return x; }});
  const auto by_steps = homological_selection_test(f, 2);
  const auto by_length = homological_selection_test(f, 0.25);
  CHECK(by_length.eps_steps == by_steps.eps_steps);
  CHECK(by_length.degree == by_steps.degree);
  CHECK_THROWS_AS(homological_selection_test(f, 0.05), error&);
}

TEST_CASE("min selection takes least members and keeps the modulus") {
  const auto f = curve(8, 2, {[](double x) { return x; }, [](double) { return 1.0; }});
  const auto g = min_selection(f);
  CHECK(g.bound() == 1);
  for (long long lin = 0; lin < g.vertex_count(); ++lin) {
    const double x = static_cast<double>(g.vertex_of(lin)[0]) / 8;
    CHECK(g.value_at(lin).points().front().coords[0] == doctest::Approx(x));
  }
  // Its own graph class witnesses the positive verdict.
  CHECK(homological_selection_test(g, 2).degree == 1);

  const auto c = curve(8, 2, {[](double) { return 0.8; }, [](double) { return 0.2; }});
  const auto mc = min_selection(c);
  CHECK(mc.value_at(0LL).points().front().coords[0] == doctest::Approx(0.2));

  Rng rng(20260815);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::vector<Point>> values;
    for (int v = 0; v <= 6; ++v) {
      std::vector<Point> members;
      const int count = static_cast<int>(rng.uniform_int(1, 3));
      for (int i = 0; i < count; ++i)
        members.push_back(Point{{rng.uniform_int(0, 8) / 8.0}});
      values.push_back(members);
    }
    const GridMultifunction h(1, 1, 6, 3, values);
    CHECK(min_selection(h).adjacent_variation() <= h.adjacent_variation() + 1e-12);
  }

  const auto planar = sample_multifunction(1, 2, 4, 1, [](const Point& p) {
    return std::vector<Point>{Point{{p.coords[0], 0.5}}};
  });
  CHECK_THROWS_AS(min_selection(planar), error&);
}

TEST_CASE("path selection crosses the graph and hits the probe once") {
  const auto f = curve(8, 1, {[](double x) { return x; }});
  const auto path = path_selection(f, 1);
  REQUIRE(!path.vertices.empty());
  CHECK(path.edges.size() + 1 == path.vertices.size());
  CHECK(unpack_cube(path.vertices.front(), 2)[0] == 0);
  CHECK(unpack_cube(path.vertices.back(), 2)[0] == 16);
  CHECK(projected_multiplier(1, 1, 8, path.edges) == 1);

  const auto crossing =
      curve(8, 2, {[](double x) { return x; }, [](double x) { return 1 - x; }});
  const auto through = path_selection(crossing, 1);
  CHECK(projected_multiplier(1, 1, 8, through.edges) == 1);

  CHECK_THROWS_AS(path_selection(torn_graph(8), 2), error&);
  const auto planar = sample_multifunction(2, 1, 4, 1, [](const Point&) {
    return std::vector<Point>{Point{{0.5}}};
  });
  CHECK_THROWS_AS(path_selection(planar, 1), error&);
}

TEST_CASE("boundary class of a constant map bounds") {
  const auto f = sample_multifunction(2, 2, 6, 1, [](const Point&) {
    return std::vector<Point>{Point{{0.5, 0.5}}};
  });
  const auto entry = boundary_class_order(f, 1);
  REQUIRE(entry.order.has_value());
  CHECK(*entry.order == 1);
  CHECK(entry.graph_group.betti == 0);
  CHECK(entry.graph_group.torsion.empty());
  CHECK(entry.to_json().at("order") == 1);
}

TEST_CASE("boundary class of the two-fold swap has order two") {
  const auto f = sample_multifunction(2, 2, 16, 2, swap_two_value);
  const auto entry = boundary_class_order(f, 1);
  REQUIRE(entry.order.has_value());
  CHECK(*entry.order == 2);
  CHECK(entry.graph_group.betti == 0);
  CHECK(entry.graph_group.torsion == std::vector<Int>{2});
}

TEST_CASE("boundary class preconditions are enforced") {
  const auto identity = sample_multifunction(2, 2, 4, 1, [](const Point& p) {
    return std::vector<Point>{p};
  });
  CHECK_THROWS_AS(boundary_class_order(identity, 1), error&);
  const auto doubled = sample_multifunction(2, 1, 4, 2, [](const Point&) {
    return std::vector<Point>{Point{{0.2}}, Point{{0.8}}};
  });
  CHECK_THROWS_AS(boundary_class_order(doubled, 1), error&);
}

TEST_CASE("boundary class on a curve domain sees connectivity") {
  const auto f = curve(8, 1, {[](double) { return 0.3; }});
  const auto entry = boundary_class_order(f, 1);
  REQUIRE(entry.order.has_value());
  CHECK(*entry.order == 1);
}
