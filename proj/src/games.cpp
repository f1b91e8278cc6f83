#include "homsel/games.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <utility>

#include "homsel/constructions.hpp"
#include "homsel/dtransform.hpp"

namespace homsel {

namespace {

long long pow_ll(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void validate_game(const Game& g) {
  if (g.players < 1) throw error("game needs at least one player");
  if (static_cast<int>(g.dims.size()) != g.players)
    throw error("dims must list one cube dimension per player");
  for (int d : g.dims)
    if (d < 1) throw error("strategy cube dimensions must be positive");
  if (!g.cost) throw error("game has no cost function");
}

// Row-major decode, last axis fastest, `axes` axes of `nodes` points each.
void decode_lin(long long lin, int axes, int nodes, int* out) {
  for (int a = axes - 1; a >= 0; --a) {
    out[a] = static_cast<int>(lin % nodes);
    lin /= nodes;
  }
}

long long own_node_count(const Game& g, int player, int resolution) {
  return pow_ll(resolution + 1, g.dims[player]);
}

long long complement_node_count(const Game& g, int player, int resolution) {
  return pow_ll(resolution + 1, g.total_dim() - g.dims[player]);
}

// Assembles the full profile from a player's complement coordinates (other
// players' axes in global order) and own coordinates.
void assemble_profile(const Game& g, int player, const int* compl_coords,
                      const int* own_coords, int resolution,
                      std::vector<double>& profile) {
  const int d0 = g.total_dim();
  const int off = g.axis_offset(player);
  const int own = g.dims[player];
  profile.resize(d0);
  int c = 0;
  for (int a = 0; a < d0; ++a) {
    if (a >= off && a < off + own)
      profile[a] = static_cast<double>(own_coords[a - off]) / resolution;
    else
      profile[a] = static_cast<double>(compl_coords[c++]) / resolution;
  }
}

std::vector<float> materialize_field(const Game& g, int player,
                                     int resolution) {
  const long long ownc = own_node_count(g, player, resolution);
  const long long complc = complement_node_count(g, player, resolution);
  if (g.field) {
    std::vector<float> f = g.field(player, resolution);
    if (static_cast<long long>(f.size()) != complc * ownc)
      throw error("field provider returned a grid of the wrong size");
    return f;
  }
  const int n = resolution + 1;
  const int compl_axes = g.total_dim() - g.dims[player];
  std::vector<float> f(static_cast<std::size_t>(complc * ownc));
  std::vector<int> cc(std::max(compl_axes, 1)), oc(g.dims[player]);
  std::vector<double> profile;
  for (long long cl = 0; cl < complc; ++cl) {
    decode_lin(cl, compl_axes, n, cc.data());
    for (long long ol = 0; ol < ownc; ++ol) {
      decode_lin(ol, g.dims[player], n, oc.data());
      assemble_profile(g, player, cc.data(), oc.data(), resolution, profile);
      f[static_cast<std::size_t>(cl * ownc + ol)] =
          static_cast<float>(g.cost(player, profile, resolution));
    }
  }
  return f;
}

// Argmin clustering of one cost column. `costs` holds the player's own
// grid, row-major; qualifying nodes (within tol of the minimum) are grouped
// by grid adjacency and each cluster is represented by its cheapest node
// (smallest linear index on ties).
struct ColumnClusters {
  std::vector<long long> reps;
  std::vector<double> rep_costs;
  int clusters = 0;
  bool continuum = false;
  bool overflow = false;
};

ColumnClusters cluster_column(const std::vector<double>& costs, int own_axes,
                              int nodes, double tol) {
  const long long ownc = static_cast<long long>(costs.size());
  double lo = std::numeric_limits<double>::infinity();
  for (double c : costs) lo = std::min(lo, c);
  const double cut = lo + tol;
  std::vector<char> qualifies(costs.size());
  for (long long i = 0; i < ownc; ++i) qualifies[i] = costs[i] <= cut;

  std::vector<long long> stride(own_axes);
  long long s = 1;
  for (int a = own_axes - 1; a >= 0; --a) {
    stride[a] = s;
    s *= nodes;
  }

  ColumnClusters out;
  std::vector<char> seen(costs.size(), 0);
  std::vector<long long> stack;
  std::vector<int> coord(own_axes);
  for (long long start = 0; start < ownc; ++start) {
    if (!qualifies[start] || seen[start]) continue;
    long long best = start;
    long long size = 0;
    stack.assign(1, start);
    seen[start] = 1;
    while (!stack.empty()) {
      const long long v = stack.back();
      stack.pop_back();
      ++size;
      if (costs[v] < costs[best] || (costs[v] == costs[best] && v < best))
        best = v;
      decode_lin(v, own_axes, nodes, coord.data());
      for (int a = 0; a < own_axes; ++a) {
        if (coord[a] > 0) {
          const long long u = v - stride[a];
          if (qualifies[u] && !seen[u]) seen[u] = 1, stack.push_back(u);
        }
        if (coord[a] + 1 < nodes) {
          const long long u = v + stride[a];
          if (qualifies[u] && !seen[u]) seen[u] = 1, stack.push_back(u);
        }
      }
    }
    out.reps.push_back(best);
    out.rep_costs.push_back(costs[best]);
    ++out.clusters;
    if (2 * size >= ownc) out.continuum = true;
  }
  if (out.clusters > kResponseCardinalityBound) {
    out.overflow = true;
    std::vector<std::size_t> order(out.reps.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (out.rep_costs[a] != out.rep_costs[b])
        return out.rep_costs[a] < out.rep_costs[b];
      return out.reps[a] < out.reps[b];
    });
    std::vector<long long> reps;
    std::vector<double> costs_kept;
    for (int i = 0; i < kResponseCardinalityBound; ++i) {
      reps.push_back(out.reps[order[i]]);
      costs_kept.push_back(out.rep_costs[order[i]]);
    }
    std::sort(reps.begin(), reps.end());
    out.reps = std::move(reps);
    out.rep_costs = std::move(costs_kept);
  }
  return out;
}

std::vector<Point> reps_to_points(const std::vector<long long>& reps,
                                  int own_axes, int nodes, int resolution) {
  std::vector<Point> pts;
  std::vector<int> coord(own_axes);
  for (long long r : reps) {
    decode_lin(r, own_axes, nodes, coord.data());
    std::vector<double> xs(own_axes);
    for (int a = 0; a < own_axes; ++a)
      xs[a] = static_cast<double>(coord[a]) / resolution;
    pts.emplace_back(std::move(xs));
  }
  return pts;
}

// Cost grids for the no-equilibrium game: the exact sup distance on the
// working grid to the densely sampled, grid-snapped response graphs.
// Player 0's cost at (a1, a2) is the distance from (a2, a1) to the graph
// of the single-valued map (laid out domain-major, so complement-major for
// the player), player 1's the distance from (a1, a2) to the graph of the
// three-valued circle map.
std::vector<float> no_equilibrium_field(int player, int resolution,
                                        int oversample) {
  if (resolution < 1) throw error("resolution must be positive");
  if (player != 0 && player != 1) throw error("player index out of range");
  const int n = resolution + 1;
  const long long plane = static_cast<long long>(n) * n;
  const GridMultifunction f =
      player == 0 ? sampled_game_map_two(resolution, oversample)
                  : sampled_game_map_one(resolution, oversample);
  std::vector<char> sites(static_cast<std::size_t>(plane * plane), 0);
  for (long long d = 0; d < plane; ++d) {
    for (const Point& v : f.value_at(d).points()) {
      const long long vi = std::llround(v[0] * resolution);
      const long long vj = std::llround(v[1] * resolution);
      sites[static_cast<std::size_t>(d * plane + vi * n + vj)] = 1;
    }
  }
  const std::vector<long long> shape(4, n);
  return chebyshev_distance_field(sites, shape, 1.0 / resolution);
}

// Snapped response graphs for the pointwise cost path, cached per
// resolution so repeated evaluations at one working grid reuse them.
struct GraphCostCache {
  int oversample;
  std::map<int, std::pair<DistanceCost, DistanceCost>> by_resolution;

  explicit GraphCostCache(int factor) : oversample(factor) {}

  const std::pair<DistanceCost, DistanceCost>& at(int resolution) {
    auto it = by_resolution.find(resolution);
    if (it == by_resolution.end())
      it = by_resolution
               .emplace(resolution,
                        std::make_pair(
                            distance_cost(sampled_game_map_two(resolution,
                                                               oversample)),
                            distance_cost(sampled_game_map_one(resolution,
                                                               oversample))))
               .first;
    return it->second;
  }
};

Mat2 mat2_from_json(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 2)
    throw error(std::string("game definition needs a 2x2 matrix under ") +
                key);
  Mat2 m;
  for (int r = 0; r < 2; ++r) {
    const auto& row = j[key][r];
    if (!row.is_array() || row.size() != 2)
      throw error(std::string("game definition needs a 2x2 matrix under ") +
                  key);
    for (int c = 0; c < 2; ++c) m[r][c] = row[c].get<double>();
  }
  return m;
}

}  // namespace

int Game::total_dim() const {
  int d = 0;
  for (int x : dims) d += x;
  return d;
}

int Game::axis_offset(int player) const {
  if (player < 0 || player >= players) throw error("player index out of range");
  int off = 0;
  for (int i = 0; i < player; ++i) off += dims[i];
  return off;
}

Game bilinear_game(const Mat2& cost_one, const Mat2& cost_two) {
  Game g;
  g.players = 2;
  g.dims = {1, 1};
  g.name = "bilinear";
  g.definition = {{"kind", "bilinear"},
                  {"cost_one",
                   {{cost_one[0][0], cost_one[0][1]},
                    {cost_one[1][0], cost_one[1][1]}}},
                  {"cost_two",
                   {{cost_two[0][0], cost_two[0][1]},
                    {cost_two[1][0], cost_two[1][1]}}}};
  g.cost = [cost_one, cost_two](int player, const std::vector<double>& p,
                                int) {
    if (player < 0 || player > 1) throw error("player index out of range");
    if (p.size() != 2) throw error("profile must have two coordinates");
    const Mat2& m = player == 0 ? cost_one : cost_two;
    const double x = p[0], y = p[1];
    return x * (y * m[0][0] + (1.0 - y) * m[0][1]) +
           (1.0 - x) * (y * m[1][0] + (1.0 - y) * m[1][1]);
  };
  return g;
}

Game matching_pennies() {
  Game g = bilinear_game({{{-1.0, 1.0}, {1.0, -1.0}}},
                         {{{1.0, -1.0}, {-1.0, 1.0}}});
  g.name = "matching_pennies";
  g.definition = {{"kind", "builtin"}, {"name", "matching_pennies"}};
  return g;
}

Game no_equilibrium_game(int oversample) {
  if (oversample < 1) throw error("oversample must be positive");
  Game g;
  g.players = 2;
  g.dims = {2, 2};
  g.name = "counterexample_5_2";
  g.definition = {{"kind", "builtin"},
                  {"name", "counterexample_5_2"},
                  {"oversample", oversample}};
  auto cache = std::make_shared<GraphCostCache>(oversample);
  g.cost = [cache](int player, const std::vector<double>& p, int resolution) {
    if (resolution < 1) throw error("resolution must be positive");
    if (p.size() != 4) throw error("profile must have four coordinates");
    const auto& graphs = cache->at(resolution);
    const Point a1(std::vector<double>{p[0], p[1]});
    const Point a2(std::vector<double>{p[2], p[3]});
    if (player == 0) return graphs.first(a2, a1);
    if (player == 1) return graphs.second(a1, a2);
    throw error("player index out of range");
  };
  g.field = [oversample](int player, int resolution) {
    return no_equilibrium_field(player, resolution, oversample);
  };
  return g;
}

Game builtin_game(const std::string& name) {
  if (name == "matching_pennies") return matching_pennies();
  if (name == "counterexample_5_2") return no_equilibrium_game();
  throw error("unknown builtin game: " + name);
}

nlohmann::json game_to_json(const Game& g) {
  if (g.definition.is_null())
    throw error("game has no serializable definition");
  return {{"players", g.players},
          {"dims", g.dims},
          {"name", g.name},
          {"cost", g.definition}};
}

Game game_from_json(const nlohmann::json& j) {
  if (!j.contains("cost") || !j["cost"].is_object() ||
      !j["cost"].contains("kind"))
    throw error("game JSON needs a cost object with a kind");
  const nlohmann::json& c = j["cost"];
  const std::string kind = c["kind"].get<std::string>();
  Game g;
  if (kind == "builtin") {
    if (!c.contains("name")) throw error("builtin cost needs a name");
    const std::string name = c["name"].get<std::string>();
    if (name == "counterexample_5_2" && c.contains("oversample"))
      g = no_equilibrium_game(c["oversample"].get<int>());
    else
      g = builtin_game(name);
  } else if (kind == "bilinear") {
    g = bilinear_game(mat2_from_json(c, "cost_one"),
                      mat2_from_json(c, "cost_two"));
  } else {
    throw error("unknown cost kind: " + kind);
  }
  if (j.contains("players") && j["players"].get<int>() != g.players)
    throw error("player count does not match the cost definition");
  if (j.contains("dims") &&
      j["dims"].get<std::vector<int>>() != g.dims)
    throw error("dims do not match the cost definition");
  if (j.contains("name") && j["name"].is_string())
    g.name = j["name"].get<std::string>();
  return g;
}

BestResponse best_response(const Game& g, int player,
                           const std::vector<int>& complement_node,
                           int resolution, double tol) {
  validate_game(g);
  if (resolution < 1) throw error("resolution must be positive");
  if (tol < 0) throw error("tolerance must be nonnegative");
  const int compl_axes = g.total_dim() - g.dims[player];
  if (static_cast<int>(complement_node.size()) != compl_axes)
    throw error("complement node has the wrong number of coordinates");
  for (int c : complement_node)
    if (c < 0 || c > resolution)
      throw error("complement coordinate out of range");

  const int n = resolution + 1;
  const long long ownc = own_node_count(g, player, resolution);
  std::vector<double> costs(static_cast<std::size_t>(ownc));
  std::vector<int> oc(g.dims[player]);
  std::vector<double> profile;
  for (long long ol = 0; ol < ownc; ++ol) {
    decode_lin(ol, g.dims[player], n, oc.data());
    assemble_profile(g, player, complement_node.data(), oc.data(), resolution,
                     profile);
    costs[static_cast<std::size_t>(ol)] = g.cost(player, profile, resolution);
  }
  ColumnClusters cc = cluster_column(costs, g.dims[player], n, tol);
  std::vector<Point> pts =
      reps_to_points(cc.reps, g.dims[player], n, resolution);
  return BestResponse{
      FiniteSubset(std::move(pts),
                   std::max<int>(1, static_cast<int>(cc.reps.size()))),
      cc.clusters, cc.continuum, cc.overflow};
}

BestResponseField response_field(const Game& g, int player, int resolution,
                                 double tol) {
  validate_game(g);
  if (resolution < 1) throw error("resolution must be positive");
  if (tol < 0) throw error("tolerance must be nonnegative");
  const int n = resolution + 1;
  const long long ownc = own_node_count(g, player, resolution);
  const long long complc = complement_node_count(g, player, resolution);
  const std::vector<float> field = materialize_field(g, player, resolution);

  std::vector<int> clusters(static_cast<std::size_t>(complc));
  std::vector<char> continuum(static_cast<std::size_t>(complc));
  std::vector<char> overflow(static_cast<std::size_t>(complc));
  std::vector<std::vector<Point>> values(static_cast<std::size_t>(complc));
  std::vector<double> costs(static_cast<std::size_t>(ownc));
  int k = 1;
  for (long long cl = 0; cl < complc; ++cl) {
    const float* row = field.data() + cl * ownc;
    for (long long ol = 0; ol < ownc; ++ol)
      costs[static_cast<std::size_t>(ol)] = row[ol];
    ColumnClusters cc = cluster_column(costs, g.dims[player], n, tol);
    values[static_cast<std::size_t>(cl)] =
        reps_to_points(cc.reps, g.dims[player], n, resolution);
    clusters[static_cast<std::size_t>(cl)] = cc.clusters;
    continuum[static_cast<std::size_t>(cl)] = cc.continuum ? 1 : 0;
    overflow[static_cast<std::size_t>(cl)] = cc.overflow ? 1 : 0;
    k = std::max(k, static_cast<int>(cc.reps.size()));
  }
  return BestResponseField{
      player,
      resolution,
      tol,
      GridMultifunction(g.total_dim() - g.dims[player], g.dims[player],
                        resolution, k, std::move(values)),
      std::move(clusters),
      std::move(continuum),
      std::move(overflow)};
}

NashReport nash_search(const Game& g, int resolution, double tol) {
  validate_game(g);
  if (resolution < 1) throw error("resolution must be positive");
  if (tol < 0) throw error("tolerance must be nonnegative");
  const int n = resolution + 1;
  const int players = g.players;
  const int d0 = g.total_dim();

  std::vector<std::vector<float>> fields(players);
  std::vector<std::vector<float>> colmin(players);
  std::vector<long long> ownc(players), complc(players);
  for (int i = 0; i < players; ++i) {
    ownc[i] = own_node_count(g, i, resolution);
    complc[i] = complement_node_count(g, i, resolution);
    fields[i] = materialize_field(g, i, resolution);
    colmin[i].assign(static_cast<std::size_t>(complc[i]),
                     std::numeric_limits<float>::infinity());
    for (long long cl = 0; cl < complc[i]; ++cl) {
      const float* row = fields[i].data() + cl * ownc[i];
      float lo = row[0];
      for (long long ol = 1; ol < ownc[i]; ++ol) lo = std::min(lo, row[ol]);
      colmin[i][static_cast<std::size_t>(cl)] = lo;
    }
  }

  struct Cluster {
    std::vector<int> rep;
    double worst;
    std::vector<double> regrets;
  };
  std::vector<Cluster> clusters;
  bool truncated_updates = false;

  NashReport report;
  report.resolution = resolution;
  report.tol = tol;
  report.min_max_regret = std::numeric_limits<double>::infinity();

  std::vector<int> coords(d0);
  std::vector<double> regrets(players);
  auto consider = [&](const std::vector<int>& c, double worst,
                      const std::vector<double>& regs) {
    if (worst < report.min_max_regret) {
      report.min_max_regret = worst;
      report.best_profile.assign(c.begin(), c.end());
      report.best_regrets = regs;
    }
    if (worst > tol) return;
    for (Cluster& cl : clusters) {
      int gap = 0;
      for (int a = 0; a < d0; ++a)
        gap = std::max(gap, std::abs(c[a] - cl.rep[a]));
      if (gap <= 2) {
        if (worst < cl.worst) {
          cl.rep = c;
          cl.worst = worst;
          cl.regrets = regs;
        }
        return;
      }
    }
    if (clusters.size() >= 4096) {
      truncated_updates = true;
      return;
    }
    clusters.push_back(Cluster{c, worst, regs});
  };

  if (players == 2) {
    const long long o0n = ownc[0], o1n = ownc[1];
    const float* f0 = fields[0].data();
    const float* f1 = fields[1].data();
    for (long long o0 = 0; o0 < o0n; ++o0) {
      const float cm1 = colmin[1][static_cast<std::size_t>(o0)];
      const float* f1row = f1 + o0 * o1n;
      for (long long o1 = 0; o1 < o1n; ++o1) {
        const double r0 = static_cast<double>(f0[o1 * o0n + o0]) -
                          colmin[0][static_cast<std::size_t>(o1)];
        const double r1 = static_cast<double>(f1row[o1]) - cm1;
        const double worst = std::max(r0, r1);
        if (worst < report.min_max_regret || worst <= tol) {
          decode_lin(o0, g.dims[0], n, coords.data());
          decode_lin(o1, g.dims[1], n, coords.data() + g.dims[0]);
          regrets[0] = r0;
          regrets[1] = r1;
          consider(coords, worst, regrets);
        }
      }
    }
  } else {
    const long long total = pow_ll(n, d0);
    // Per-player multipliers mapping a global coordinate to its own-column
    // and complement linear indices.
    std::vector<std::vector<long long>> own_mult(players),
        compl_mult(players);
    for (int i = 0; i < players; ++i) {
      own_mult[i].assign(d0, 0);
      compl_mult[i].assign(d0, 0);
      const int off = g.axis_offset(i);
      long long m = 1;
      for (int a = off + g.dims[i] - 1; a >= off; --a) {
        own_mult[i][a] = m;
        m *= n;
      }
      m = 1;
      for (int a = d0 - 1; a >= 0; --a) {
        if (a >= off && a < off + g.dims[i]) continue;
        compl_mult[i][a] = m;
        m *= n;
      }
    }
    std::fill(coords.begin(), coords.end(), 0);
    for (long long node = 0; node < total; ++node) {
      double worst = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < players; ++i) {
        long long ol = 0, cl = 0;
        for (int a = 0; a < d0; ++a) {
          ol += own_mult[i][a] * coords[a];
          cl += compl_mult[i][a] * coords[a];
        }
        const double r =
            static_cast<double>(fields[i][static_cast<std::size_t>(
                cl * ownc[i] + ol)]) -
            colmin[i][static_cast<std::size_t>(cl)];
        regrets[i] = r;
        worst = std::max(worst, r);
      }
      consider(coords, worst, regrets);
      for (int a = d0 - 1; a >= 0; --a) {
        if (++coords[a] < n) break;
        coords[a] = 0;
      }
    }
  }

  report.clusters_found = clusters.size();
  report.truncated =
      truncated_updates || clusters.size() > static_cast<std::size_t>(
                                                 kMaxCertificates);
  std::sort(clusters.begin(), clusters.end(),
            [](const Cluster& a, const Cluster& b) {
              if (a.worst != b.worst) return a.worst < b.worst;
              return a.rep < b.rep;
            });
  const std::size_t keep =
      std::min<std::size_t>(clusters.size(), kMaxCertificates);
  for (std::size_t i = 0; i < keep; ++i) {
    EquilibriumCertificate cert;
    cert.point.resize(d0);
    for (int a = 0; a < d0; ++a)
      cert.point[a] = static_cast<double>(clusters[i].rep[a]) / resolution;
    cert.regrets = clusters[i].regrets;
    cert.max_regret = clusters[i].worst;
    cert.tol = tol;
    cert.resolution = resolution;
    report.certificates.push_back(std::move(cert));
  }
  for (double& v : report.best_profile) v /= resolution;
  return report;
}

std::vector<double> audit_certificate(const Game& g,
                                      const EquilibriumCertificate& cert) {
  validate_game(g);
  const int resolution = cert.resolution;
  if (resolution < 1) throw error("certificate has no resolution");
  const int d0 = g.total_dim();
  if (static_cast<int>(cert.point.size()) != d0)
    throw error("certificate profile has the wrong dimension");
  std::vector<int> node(d0);
  for (int a = 0; a < d0; ++a) {
    node[a] = static_cast<int>(std::llround(cert.point[a] * resolution));
    if (node[a] < 0 || node[a] > resolution)
      throw error("certificate profile is off the grid");
  }

  const int n = resolution + 1;
  std::vector<double> regrets(g.players);
  std::vector<int> oc;
  std::vector<double> profile;
  for (int i = 0; i < g.players; ++i) {
    const int off = g.axis_offset(i);
    std::vector<int> compl_coords;
    for (int a = 0; a < d0; ++a)
      if (a < off || a >= off + g.dims[i]) compl_coords.push_back(node[a]);
    const long long ownc = own_node_count(g, i, resolution);
    oc.resize(g.dims[i]);
    double lo = std::numeric_limits<double>::infinity();
    double at = 0.0;
    long long at_lin = 0;
    for (int a = 0; a < g.dims[i]; ++a)
      at_lin = at_lin * n + node[off + a];
    for (long long ol = 0; ol < ownc; ++ol) {
      decode_lin(ol, g.dims[i], n, oc.data());
      assemble_profile(g, i, compl_coords.data(), oc.data(), resolution,
                       profile);
      const double c = g.cost(i, profile, resolution);
      lo = std::min(lo, c);
      if (ol == at_lin) at = c;
    }
    regrets[static_cast<std::size_t>(i)] = at - lo;
  }
  return regrets;
}

RefineReport refine_intersection(const Game& g, const std::vector<double>& eps,
                                 const std::vector<int>& resolutions) {
  validate_game(g);
  if (eps.empty() || eps.size() != resolutions.size())
    throw error("refinement needs matching eps and resolution ladders");
  for (std::size_t j = 0; j < eps.size(); ++j) {
    if (eps[j] <= 0) throw error("eps must be positive");
    if (j && eps[j] > eps[j - 1]) throw error("eps must be non-increasing");
    if (resolutions[j] < 1) throw error("resolution must be positive");
    if (j && resolutions[j] < resolutions[j - 1])
      throw error("resolutions must be non-decreasing");
  }

  const int d0 = g.total_dim();
  RefineReport report;
  for (std::size_t j = 0; j < eps.size(); ++j) {
    const int resolution = resolutions[j];
    const int n = resolution + 1;
    const double step = 1.0 / resolution;
    const std::vector<long long> shape(static_cast<std::size_t>(d0), n);
    const long long total = pow_ll(n, d0);

    std::vector<float> worst;
    for (int i = 0; i < g.players; ++i) {
      const BestResponseField rf = response_field(g, i, resolution, step);
      std::vector<char> sites(static_cast<std::size_t>(total), 0);
      const int off = g.axis_offset(i);
      const int compl_axes = d0 - g.dims[i];
      const long long complc = complement_node_count(g, i, resolution);
      std::vector<int> cc(std::max(compl_axes, 1));
      std::vector<int> global(d0);
      for (long long cl = 0; cl < complc; ++cl) {
        decode_lin(cl, compl_axes, n, cc.data());
        int c = 0;
        for (int a = 0; a < d0; ++a)
          if (a < off || a >= off + g.dims[i]) global[a] = cc[c++];
        for (const Point& rep : rf.field.value_at(cl).points()) {
          for (int a = 0; a < g.dims[i]; ++a)
            global[off + a] =
                static_cast<int>(std::llround(rep[a] * resolution));
          long long lin = 0;
          for (int a = 0; a < d0; ++a) lin = lin * n + global[a];
          sites[static_cast<std::size_t>(lin)] = 1;
        }
      }
      std::vector<float> dist = chebyshev_distance_field(sites, shape, step);
      if (worst.empty()) {
        worst = std::move(dist);
      } else {
        for (std::size_t v = 0; v < worst.size(); ++v)
          worst[v] = std::max(worst[v], dist[v]);
      }
    }

    long long arg = 0;
    for (long long v = 1; v < total; ++v)
      if (worst[static_cast<std::size_t>(v)] <
          worst[static_cast<std::size_t>(arg)])
        arg = v;

    RefineRung rung;
    rung.resolution = resolution;
    rung.eps = eps[j];
    rung.response_tol = step;
    rung.witness_value =
        static_cast<double>(worst[static_cast<std::size_t>(arg)]);
    rung.witness.resize(d0);
    std::vector<int> coord(d0);
    decode_lin(arg, d0, n, coord.data());
    for (int a = 0; a < d0; ++a)
      rung.witness[a] = static_cast<double>(coord[a]) / resolution;
    rung.empty = rung.witness_value > eps[j];
    report.rungs.push_back(rung);
    if (rung.empty) {
      report.emptied_rung = static_cast<int>(j);
      break;
    }
  }

  report.converged = report.emptied_rung < 0;
  if (report.converged) report.limit = report.rungs.back().witness;
  for (std::size_t j = 1; j < report.rungs.size(); ++j) {
    const auto& a = report.rungs[j - 1].witness;
    const auto& b = report.rungs[j].witness;
    if (a.empty() || b.empty()) continue;
    double d = 0;
    for (int c = 0; c < d0; ++c) d = std::max(d, std::abs(a[c] - b[c]));
    report.cauchy_modulus = std::max(report.cauchy_modulus, d);
  }
  return report;
}

BimatrixResult bimatrix_solve(const Mat2& cost_one, const Mat2& cost_two) {
  // g1(y) = d(expected cost of player one)/dx, linear in y; player one
  // plays x = 1 when it is negative, x = 0 when positive, anything at 0.
  const Rat a1 = Rat(cost_one[0][0]) - Rat(cost_one[1][0]) -
                 (Rat(cost_one[0][1]) - Rat(cost_one[1][1]));
  const Rat b1 = Rat(cost_one[0][1]) - Rat(cost_one[1][1]);
  const Rat a2 = Rat(cost_two[0][0]) - Rat(cost_two[0][1]) -
                 (Rat(cost_two[1][0]) - Rat(cost_two[1][1]));
  const Rat b2 = Rat(cost_two[1][0]) - Rat(cost_two[1][1]);
  auto g1 = [&](const Rat& y) { return a1 * y + b1; };
  auto g2 = [&](const Rat& x) { return a2 * x + b2; };
  auto x_ok = [&](const Rat& x, const Rat& y) {
    const Rat v = g1(y);
    if (v > 0) return x == 0;
    if (v < 0) return x == 1;
    return true;
  };
  auto y_ok = [&](const Rat& x, const Rat& y) {
    const Rat v = g2(x);
    if (v > 0) return y == 0;
    if (v < 0) return y == 1;
    return true;
  };

  std::vector<Rat> xs = {Rat(0), Rat(1)};
  std::vector<Rat> ys = {Rat(0), Rat(1)};
  if (a2 != 0) {
    const Rat xstar = -b2 / a2;
    if (xstar > 0 && xstar < 1) xs.push_back(xstar);
  }
  if (a1 != 0) {
    const Rat ystar = -b1 / a1;
    if (ystar > 0 && ystar < 1) ys.push_back(ystar);
  }

  BimatrixResult out;
  for (const Rat& x : xs)
    for (const Rat& y : ys)
      if (x_ok(x, y) && y_ok(x, y)) out.equilibria.push_back({x, y});
  std::sort(out.equilibria.begin(), out.equilibria.end(),
            [](const std::array<Rat, 2>& p, const std::array<Rat, 2>& q) {
              if (p[0] != q[0]) return p[0] < q[0];
              return p[1] < q[1];
            });
  out.equilibria.erase(
      std::unique(out.equilibria.begin(), out.equilibria.end()),
      out.equilibria.end());

  // A continuum arises when one player is indifferent at some equilibrium
  // strategy of the other and the other's response condition holds on a
  // whole segment, not just at a point.
  auto segment_of_x = [&](const Rat& y) {
    // The closed set {x in [0,1] : y is a best response to x}.
    Rat lo(0), hi(1);
    if (y == 0) {
      // need g2(x) >= 0
      if (a2 == 0) return b2 >= 0 ? std::make_pair(lo, hi)
                                  : std::make_pair(Rat(1), Rat(0));
      const Rat root = -b2 / a2;
      if (a2 > 0) return std::make_pair(std::max(lo, root), hi);
      return std::make_pair(lo, std::min(hi, root));
    }
    if (y == 1) {
      if (a2 == 0) return b2 <= 0 ? std::make_pair(lo, hi)
                                  : std::make_pair(Rat(1), Rat(0));
      const Rat root = -b2 / a2;
      if (a2 > 0) return std::make_pair(lo, std::min(hi, root));
      return std::make_pair(std::max(lo, root), hi);
    }
    // interior y: need g2(x) == 0 for all x in the segment
    if (a2 == 0 && b2 == 0) return std::make_pair(lo, hi);
    return std::make_pair(Rat(1), Rat(0));
  };
  auto segment_of_y = [&](const Rat& x) {
    Rat lo(0), hi(1);
    if (x == 0) {
      if (a1 == 0) return b1 >= 0 ? std::make_pair(lo, hi)
                                  : std::make_pair(Rat(1), Rat(0));
      const Rat root = -b1 / a1;
      if (a1 > 0) return std::make_pair(std::max(lo, root), hi);
      return std::make_pair(lo, std::min(hi, root));
    }
    if (x == 1) {
      if (a1 == 0) return b1 <= 0 ? std::make_pair(lo, hi)
                                  : std::make_pair(Rat(1), Rat(0));
      const Rat root = -b1 / a1;
      if (a1 > 0) return std::make_pair(lo, std::min(hi, root));
      return std::make_pair(std::max(lo, root), hi);
    }
    if (a1 == 0 && b1 == 0) return std::make_pair(lo, hi);
    return std::make_pair(Rat(1), Rat(0));
  };
  for (const Rat& y : ys)
    if (g1(y) == 0) {
      const auto seg = segment_of_x(y);
      if (seg.first < seg.second) out.continuum = true;
    }
  for (const Rat& x : xs)
    if (g2(x) == 0) {
      const auto seg = segment_of_y(x);
      if (seg.first < seg.second) out.continuum = true;
    }
  return out;
}

PolynomialLikeReport polynomial_like_check(const BestResponseField& field,
                                           const Int& weight, double tol) {
  PolynomialLikeReport report;
  report.weight = weight;
  StrandSystem sys = build_strand_system(field.field, tol);
  report.components = sys.components;
  report.ambiguities = sys.ambiguities.size();
  report.outcome = lift_to_configuration(field.field, sys, weight);
  report.liftable = report.outcome.feasible;
  return report;
}

}  // namespace homsel
