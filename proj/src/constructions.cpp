#include "homsel/constructions.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <utility>

namespace homsel {

namespace {

constexpr double kDeg = kPi / 180.0;
// Amplitude profile of the cyclic cover families: zero at the centre and on
// the inscribed circle, peaking at 0.35 in between so every value stays well
// inside the square.
double cover_amplitude(double r) { return 1.4 * r * (1.0 - r); }

double wrap_to_pi(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0) a += 2.0 * kPi;
  return a - kPi;
}

// Angle as a fraction of a full turn, wrapped into [0, 1).
double unit_angle(double a) {
  double f = a / (2.0 * kPi);
  f -= std::floor(f);
  return f;
}

Point offset_from_centre(double dx, double dy) { return Point({0.5 + dx, 0.5 + dy}); }

double anchor_angle(int i) { return (90.0 + (i - 1) * 120.0) * kDeg; }

void check_wedge_index(int i) {
  if (i < 1 || i > 3) throw error("wedge index must be 1, 2, or 3");
}

// Cross-section profile of a petal: relative radius at transverse coordinate
// chi in [-1, 1], vanishing at the two edges.
double petal_profile(double chi) { return std::sqrt(std::cos(chi * kPi / 2.0)); }

// Radial reparametrization of the petal chart: a convex power keeps inner
// petal points mapped near the model wedge point, where the fibers hug the
// anchors, so the second game map sends those fibers to the far-away petal
// tips instead of chasing the inner points themselves.
constexpr double kChartRadialExponent = 1.6;

// Angular offset of direction psi from the axis of petal i, in units of the
// petal half-width. Offsets at rounding scale snap to exactly zero so that
// grid points on an axis produce bit-identical collided values; the
// degenerate fibers along the collision rays are load-bearing for strand
// analysis, which reads pinches off cardinality drops.
double petal_offset(int i, double psi) {
  const double chi = wrap_to_pi(psi - petal_axis_angle(i)) / kPetalHalfWidth;
  return std::abs(chi) < 1e-12 ? 0.0 : chi;
}

// Polar coordinates (t, a) of a point of the half-radius model disk, with a
// measured in unit turns. The three-valued wedge model reads both.
struct ModelPoint {
  double t = 0.0;
  double a = 0.0;
};

// Values of the wedge model of arc i at a model point: the two cast-off
// strand ends and the sweeping strand.
std::vector<Point> wedge_model_values(int i, const ModelPoint& mp) {
  return {arc_path(i, 0.0), arc_path(i, 2.0 * mp.t), arc_path(i, 2.0 * mp.a * mp.t)};
}

// Maps a point of petal i into the model disk: wedge-centred polar
// coordinates (u, chi) go to W + r(u)*cos(beta)*e^{i beta} with
// beta = chi*pi/2 and r(u) = u^kChartRadialExponent, about the model wedge
// point W = (-1/2, 0). At u = 1 this lands on the model circle of radius 1/2
// for any profile, pins the outline parametrization to the complement frame,
// and collapses the whole pinch edge to W.
std::optional<ModelPoint> petal_to_model(int i, const Point& x) {
  const double dx = x[0] - 0.5, dy = x[1] - 0.5;
  const double rho = std::hypot(dx, dy);
  const double chi = petal_offset(i, std::atan2(dy, dx));
  if (std::abs(chi) > 1.0) return std::nullopt;
  const double limit = kPetalRadius * petal_profile(chi);
  if (rho > limit) return std::nullopt;
  const double u = limit > 0 ? rho / limit : 0.0;
  const double r = std::pow(u, kChartRadialExponent);
  const double beta = chi * kPi / 2.0;
  const double zx = -0.5 + r * std::cos(beta) * std::cos(beta);
  const double zy = r * std::cos(beta) * std::sin(beta);
  return ModelPoint{std::hypot(zx, zy), unit_angle(std::atan2(zy, zx))};
}

// Directional data of the petal complement at angle psi from the centre: the
// petal exit radius along the ray (zero in the gaps between petals) and the
// value set on the petal outline there ({A_1, A_2, A_3} in the gaps). At
// u = 1 the model point is exactly (1/2) * e^{2 i beta}, so t = 1/2 and the
// turn fraction is chi/2.
struct RayFrame {
  double exit = 0.0;
  std::vector<Point> base;
};

RayFrame ray_frame(double psi) {
  for (int i = 1; i <= 3; ++i) {
    const double chi = petal_offset(i, psi);
    if (std::abs(chi) > 1.0) continue;
    return {kPetalRadius * petal_profile(chi),
            wedge_model_values(i, ModelPoint{0.5, unit_angle(chi * kPi)})};
  }
  return {0.0, {anchor_point(1), anchor_point(2), anchor_point(3)}};
}

// Distance from the centre to the square boundary along the direction of
// (dx, dy). Written as 0.5 * rho / max(|dx|, |dy|) so that on the boundary
// itself (where the max is exactly 1/2) it returns rho bit for bit, making
// the complement fraction reach 1 exactly there.
double boundary_radius(double rho, double dx, double dy) {
  const double m = std::max(std::abs(dx), std::abs(dy));
  return m > 0.0 ? 0.5 * rho / m : 0.5;
}

// Fraction of the way from the petal outline to the square boundary, clamped
// to [0, 1]; the contraction parameter of the complement region.
double complement_fraction(double rho, const RayFrame& frame, double dx, double dy) {
  const double span = boundary_radius(rho, dx, dy) - frame.exit;
  const double s = (rho - frame.exit) / span;
  return std::min(std::max(s, 0.0), 1.0);
}

Point contract_to_centre(const Point& p, double keep) {
  return offset_from_centre(keep * (p[0] - 0.5), keep * (p[1] - 0.5));
}

GridMultifunction sample_square_map(int resolution, int k,
                                    const std::function<std::vector<Point>(const Point&)>& f) {
  return sample_multifunction(2, 2, resolution, k, f);
}

}  // namespace

Point square_centre() { return Point({0.5, 0.5}); }

Point on_circle(double angle) {
  return offset_from_centre(kCircleRadius * std::cos(angle), kCircleRadius * std::sin(angle));
}

Point anchor_point(int i) {
  check_wedge_index(i);
  return on_circle(anchor_angle(i));
}

Point arc_path(int i, double t) {
  check_wedge_index(i);
  // Start at the anchor preceding A_i and sweep 240 degrees counterclockwise,
  // passing A_i at t = 1/2 and ending at the anchor following it.
  const double start = anchor_angle(i == 1 ? 3 : i - 1);
  return on_circle(start + t * 240.0 * kDeg);
}

double petal_axis_angle(int i) {
  check_wedge_index(i);
  return 90.0 * i * kDeg;
}

std::vector<Point> identity_map(const Point& x) { return {x}; }

std::vector<Point> double_cover_map(const Point& x) {
  // Principal square root of the recentred square, scaled to amplitude 0.35;
  // the two signs heal the branch cut into a genuine two-sheeted graph.
  const double zx = 2.0 * x[0] - 1.0, zy = 2.0 * x[1] - 1.0;
  const double r = std::sqrt(std::hypot(zx, zy));
  const double half = std::atan2(zy, zx) / 2.0;
  const double wx = 0.35 * r * std::cos(half), wy = 0.35 * r * std::sin(half);
  return {offset_from_centre(wx, wy), offset_from_centre(-wx, -wy)};
}

std::vector<Point> cyclic_cover_map(int weight, const Point& x) {
  if (weight < 1 || weight > 3) throw error("cyclic cover weight must be 1, 2, or 3");
  const double zx = 2.0 * (x[0] - 0.5), zy = 2.0 * (x[1] - 0.5);
  const double r = std::min(std::hypot(zx, zy), 1.0);
  const double theta = std::atan2(zy, zx);
  const double amp = cover_amplitude(r);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(weight));
  for (int j = 0; j < weight; ++j) {
    const double phase = (theta + 2.0 * kPi * j) / weight;
    out.push_back(offset_from_centre(amp * std::cos(phase), amp * std::sin(phase)));
  }
  return out;
}

std::vector<Point> single_wedge_map(int i, const Point& x) {
  check_wedge_index(i);
  const double zx = (x[0] - 0.5) / 0.5, zy = (x[1] - 0.5) / 0.5;
  const double t = std::min(std::hypot(zx, zy), 1.0);
  const double a = unit_angle(std::atan2(zy, zx));
  if (t <= 0.5) return wedge_model_values(i, ModelPoint{t, a});
  // Annulus: contract the rim values of the inner model linearly to the
  // centre, reaching the constant map on the boundary of the square.
  const double keep = 1.0 - (2.0 * t - 1.0);
  std::vector<Point> out;
  for (const Point& p : wedge_model_values(i, ModelPoint{0.5, a}))
    out.push_back(contract_to_centre(p, keep));
  return out;
}

std::vector<Point> triple_wedge_map(const Point& x) {
  for (int i = 1; i <= 3; ++i)
    if (auto mp = petal_to_model(i, x)) return wedge_model_values(i, *mp);
  const double dx = x[0] - 0.5, dy = x[1] - 0.5;
  const RayFrame frame = ray_frame(std::atan2(dy, dx));
  const double keep = 1.0 - complement_fraction(std::hypot(dx, dy), frame, dx, dy);
  std::vector<Point> out;
  for (const Point& p : frame.base) out.push_back(contract_to_centre(p, keep));
  return out;
}

std::vector<Point> game_map_one(const Point& x) {
  for (int i = 1; i <= 3; ++i)
    if (auto mp = petal_to_model(i, x)) return wedge_model_values(i, *mp);
  // Constant along each ray from the centre, so every value stays on the
  // reference circle instead of contracting.
  return ray_frame(std::atan2(x[1] - 0.5, x[0] - 0.5)).base;
}

Point game_map_two(const Point& y) {
  const double dx = y[0] - 0.5, dy = y[1] - 0.5;
  const double rho = std::hypot(dx, dy);
  if (rho == 0.0) return square_centre();
  const double phi = std::atan2(dy, dx);
  // Nearest anchor direction; the circle splits into three 120-degree arcs.
  int arc = 1;
  double best = 2.0 * kPi;
  for (int i = 1; i <= 3; ++i) {
    const double d = std::abs(wrap_to_pi(phi - anchor_angle(i)));
    if (d < best) {
      best = d;
      arc = i;
    }
  }
  // The arc about A_i maps onto the outline of petal `arc`, anchor to tip and
  // arc endpoints to the pinch; off the circle, scale radially.
  const double chi = wrap_to_pi(phi - anchor_angle(arc)) / (60.0 * kDeg);
  const double radius = kPetalRadius * petal_profile(chi);
  const double along = petal_axis_angle(arc) + chi * kPetalHalfWidth;
  const double scale = std::min(rho / kCircleRadius, 1.0);
  return offset_from_centre(scale * radius * std::cos(along), scale * radius * std::sin(along));
}

GridMultifunction sampled_identity(int resolution) {
  return sample_square_map(resolution, 1, identity_map);
}

GridMultifunction sampled_double_cover(int resolution) {
  return sample_square_map(resolution, 2, double_cover_map);
}

GridMultifunction sampled_cyclic_cover(int weight, int resolution) {
  return sample_square_map(resolution, weight,
                           [weight](const Point& x) { return cyclic_cover_map(weight, x); });
}

GridMultifunction sampled_single_wedge(int resolution) {
  return sample_square_map(resolution, 3, [](const Point& x) { return single_wedge_map(1, x); });
}

GridMultifunction sampled_triple_wedge(int resolution) {
  return sample_square_map(resolution, 3, triple_wedge_map);
}

GridMultifunction sampled_game_map_one(int resolution) {
  return sample_square_map(resolution, 3, game_map_one);
}

GridMultifunction sampled_game_map_two(int resolution) {
  return sample_square_map(resolution, 1, [](const Point& y) {
    return std::vector<Point>{game_map_two(y)};
  });
}

GridMultifunction random_liftable_map(Rng& rng, int branches, int resolution) {
  if (branches < 1) throw error("need at least one branch");
  // Each branch is a low-frequency sine patch per axis: amplitude at most
  // 0.35 keeps values inside the square, frequency at most 2.5 keeps the
  // sampling variation well under the fattening scale.
  struct Wave {
    double amp, fu, fv, phase;
  };
  std::vector<std::array<Wave, 2>> waves;
  waves.reserve(static_cast<std::size_t>(branches));
  for (int b = 0; b < branches; ++b) {
    std::array<Wave, 2> w;
    for (int axis = 0; axis < 2; ++axis)
      w[static_cast<std::size_t>(axis)] = {rng.uniform(0.15, 0.35), rng.uniform(0.5, 2.5),
                                           rng.uniform(0.5, 2.5), rng.uniform(0.0, 2.0 * kPi)};
    waves.push_back(w);
  }
  return sample_square_map(resolution, branches, [waves](const Point& x) {
    std::vector<Point> out;
    out.reserve(waves.size());
    for (const auto& w : waves) {
      double c[2];
      for (int axis = 0; axis < 2; ++axis) {
        const Wave& v = w[static_cast<std::size_t>(axis)];
        c[axis] = 0.5 + v.amp * std::sin(v.fu * x[0] + v.fv * x[1] + v.phase);
      }
      out.push_back(Point({c[0], c[1]}));
    }
    return out;
  });
}

double DistanceCost::operator()(const Point& x, const Point& y) const {
  double best = std::numeric_limits<double>::infinity();
  const long long nodes = graph.vertex_count();
  for (long long v = 0; v < nodes; ++v) {
    const auto c = graph.vertex_of(v);
    Point node(std::vector<double>(c.size()));
    for (std::size_t k = 0; k < c.size(); ++k)
      node.coords[k] = static_cast<double>(c[k]) / graph.resolution();
    const double dx = sup_metric(x, node);
    if (dx >= best) continue;
    best = std::min(best, std::max(dx, distance_to_subset(graph.value_at(v), y)));
  }
  return best;
}

DistanceCost distance_cost(GridMultifunction f) { return DistanceCost{std::move(f)}; }

double no_fixed_point_gap(int resolution) {
  if (resolution < 1) throw error("resolution must be positive");
  // Arc steps comparable to the grid step: circumference / step samples.
  const int samples = std::max(8, static_cast<int>(std::ceil(
                                      2.0 * kPi * kCircleRadius * resolution)));
  double gap = std::numeric_limits<double>::infinity();
  for (int j = 0; j < samples; ++j) {
    const Point x = on_circle(2.0 * kPi * j / samples);
    const std::vector<Point> values = game_map_one(game_map_two(x));
    double nearest = std::numeric_limits<double>::infinity();
    for (const Point& v : values) nearest = std::min(nearest, sup_metric(x, v));
    gap = std::min(gap, nearest);
  }
  return gap;
}

ChainComplex cw_graph_single_wedge() {
  // Cells: v, w | a1, a2, alpha | e1, e2, e3. The strands a1 and a2 run in
  // opposite directions (v to w and w to v), so a1 + a2 is the strand loop
  // and e3 attaches along alpha - a1 - a2; e1 and e2 traverse one strand both
  // ways, leaving only alpha.
  IntMat d1(2, 3);
  d1.at(0, 0) = -1;
  d1.at(1, 0) = 1;  // a1: w - v
  d1.at(0, 1) = 1;
  d1.at(1, 1) = -1;  // a2: v - w
  IntMat d2(3, 3);
  d2.at(2, 0) = 1;  // e1: alpha
  d2.at(2, 1) = 1;  // e2: alpha
  d2.at(2, 2) = 1;
  d2.at(0, 2) = -1;
  d2.at(1, 2) = -1;  // e3: alpha - a1 - a2
  return ChainComplex({2, 3, 3}, {d1, d2},
                      {{"v", "w"}, {"a1", "a2", "alpha"}, {"e1", "e2", "e3"}});
}

ChainComplex cw_graph_triple_wedge() {
  // Cells: v_i, w_i | a1_i, a2_i, alpha_12, alpha_23, alpha_31 | e1, e2, e3.
  // Strand a1_i runs v_i to w_i, a2_i runs back, and alpha_jk runs v_j to
  // v_k; each 2-cell attaches along alpha minus one strand loop, with the
  // other two loops traversed both ways and cancelling.
  const auto v = [](int i) { return i - 1; };
  const auto w = [](int i) { return 3 + i - 1; };
  const auto a1 = [](int i) { return 2 * (i - 1); };
  const auto a2 = [](int i) { return 2 * (i - 1) + 1; };
  constexpr int kAlpha[3] = {6, 7, 8};
  IntMat d1(6, 9);
  for (int i = 1; i <= 3; ++i) {
    d1.at(v(i), a1(i)) = -1;
    d1.at(w(i), a1(i)) = 1;
    d1.at(v(i), a2(i)) = 1;
    d1.at(w(i), a2(i)) = -1;
  }
  for (int j = 0; j < 3; ++j) {
    d1.at(v(j + 1), kAlpha[j]) = -1;
    d1.at(v((j + 1) % 3 + 1), kAlpha[j]) = 1;
  }
  // The 2-cell e_k absorbs the strand loop of wedge sigma(k).
  constexpr int kSigma[3] = {3, 1, 2};
  IntMat d2(9, 3);
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < 3; ++j) d2.at(kAlpha[j], k) = 1;
    d2.at(a1(kSigma[k]), k) = -1;
    d2.at(a2(kSigma[k]), k) = -1;
  }
  return ChainComplex({6, 9, 3}, {d1, d2},
                      {{"v1", "v2", "v3", "w1", "w2", "w3"},
                       {"a1_1", "a2_1", "a1_2", "a2_2", "a1_3", "a2_3", "alpha_12", "alpha_23",
                        "alpha_31"},
                       {"e1", "e2", "e3"}});
}

std::vector<Int> cw_triple_boundary_cycle() {
  std::vector<Int> z(9);
  z[6] = z[7] = z[8] = 1;
  return z;
}

std::vector<Int> cw_triple_strand_loop(int i) {
  check_wedge_index(i);
  std::vector<Int> z(9);
  z[static_cast<std::size_t>(2 * (i - 1))] = 1;
  z[static_cast<std::size_t>(2 * (i - 1) + 1)] = 1;
  return z;
}

}  // namespace homsel
