#pragma once
// N-player games on products of unit cubes and the search machinery that
// looks for their equilibria on uniform grids.
//
// A game is a list of per-player cost functions over the shared profile
// space (the concatenation of every player's strategy cube). All search
// operations discretize each cube at a common resolution and work with
// exact column scans: a player's regret at a grid profile is the cost at
// that profile minus the true minimum over the player's own grid column,
// so a reported regret of zero means the strategy is a best response on
// the grid, not an approximation of one. An equilibrium certificate is a
// grid profile whose worst regret is at most the tolerance. When no
// profile qualifies, the search still reports the attained minimum of the
// worst regret together with its argmin, so a negative result carries the
// quantitative content "every grid profile leaves some player at least
// this much room to improve".
//
// Games whose costs are distances to sampled response graphs admit a fast
// path: the full cost grid of one player is a separable sup-metric cost
// transform of a site array (see dtransform.hpp), which turns the naive
// quartic-in-grid-size evaluation into a few linear passes. The `field`
// hook on Game lets a builder install such a provider; every consumer
// falls back to pointwise evaluation when the hook is empty, and the
// audit helpers always use the pointwise path so the two implementations
// check each other.

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "homsel/common.hpp"
#include "homsel/lift.hpp"
#include "homsel/metric.hpp"
#include "homsel/multifunction.hpp"

namespace homsel {

// A finite-player game over a product of unit cubes. Player i's strategy
// cube has dimension dims[i]; a profile concatenates the players'
// coordinates in player order. `cost(i, profile, resolution)` evaluates
// player i's cost; costs defined through sampled graphs use the resolution
// to name the sampling grid, closed-form costs ignore it. The optional
// `field` hook returns player i's full cost grid at a resolution, laid out
// complement-major: the complement axes (every other player's axes, in
// global order) vary slowest and the player's own axes vary fastest, so
// one grid column of the player is a contiguous block.
struct Game {
  int players = 0;
  std::vector<int> dims;
  std::function<double(int player, const std::vector<double>& profile,
                       int resolution)>
      cost;
  std::function<std::vector<float>(int player, int resolution)> field;
  std::string name = "custom";
  nlohmann::json definition;

  int total_dim() const;
  // First global axis owned by the player.
  int axis_offset(int player) const;
};

using Mat2 = std::array<std::array<double, 2>, 2>;

// Mixed extension of a two-player, two-strategy cost table. Each player's
// strategy cube is the interval [0,1], read as the probability assigned to
// the player's first pure strategy; the cost is the expected table cost
// under the product distribution (bilinear interpolation of the four
// corners). cost_one[r][c] and cost_two[r][c] are the players' costs when
// row r meets column c.
Game bilinear_game(const Mat2& cost_one, const Mat2& cost_two);

// Zero-sum coordination/anti-coordination table: the first player wants
// the choices to match, the second wants them to differ. Its unique
// equilibrium is the uniform mix for both players.
Game matching_pennies();

// Default densification factor for sampled response graphs: graphs are
// sampled this many times finer than the working grid and snapped onto it
// before distance transforms, keeping every distance query within one
// grid step of the continuum distance. The factor must exceed the map's
// sweep rate; the circle map sweeps much faster than the grid scale near
// the wedge pinch, so working-resolution sampling distorts the cost
// landscape there.
inline constexpr int kGraphOversample = 16;

// The two-player game on the square whose costs are the distances to the
// two designed response graphs (distance from (a2, a1) to the graph of the
// single-valued map for player one, distance from (a1, a2) to the graph of
// the three-valued circle map for player two). Its best-response structure
// reproduces those maps on the grid, and the composed selection problem
// they encode has no solution, so the game has no equilibrium at any
// tolerance below the measured gap. Registered under the builtin name
// "counterexample_5_2".
Game no_equilibrium_game(int oversample = kGraphOversample);

// Looks up a builder by interop name ("matching_pennies",
// "counterexample_5_2"). Throws on unknown names.
Game builtin_game(const std::string& name);

// Serialization of the game definition (builders above round-trip; games
// assembled by hand with bare std::function cost hooks do not serialize).
nlohmann::json game_to_json(const Game& g);
Game game_from_json(const nlohmann::json& j);

// Upper bound on how many argmin clusters a best response reports before
// flagging overflow.
inline constexpr int kResponseCardinalityBound = 8;

// Argmin structure of one player's cost column at a fixed complement
// node. Grid points within `tol` of the column minimum are grouped into
// clusters by grid adjacency; each cluster is represented by its
// cheapest point (lexicographically smallest on ties).
struct BestResponse {
  FiniteSubset points;    // one representative per cluster, in own-cube
                          // coordinates
  int clusters = 0;       // total clusters found (may exceed the bound)
  bool continuum = false; // some cluster covers at least half the column
  bool overflow = false;  // more clusters than kResponseCardinalityBound
};

// Computes one best response by scanning the player's own grid pointwise.
// `complement_node` lists the other players' grid coordinates in global
// axis order, each in 0..resolution.
BestResponse best_response(const Game& g, int player,
                           const std::vector<int>& complement_node,
                           int resolution, double tol);

// The best-response multifunction of one player sampled over the whole
// complement grid. Uses the game's field provider when present, so
// building the entire field costs little more than one pass over the cost
// grid. The per-node cluster counts, continuum flags and overflow flags
// are kept alongside the multifunction.
struct BestResponseField {
  int player = 0;
  int resolution = 0;
  double tol = 0.0;
  GridMultifunction field;      // domain: complement grid; values: own cube
  std::vector<int> clusters;    // per complement node
  std::vector<char> continuum;  // per complement node
  std::vector<char> overflow;   // per complement node
};

BestResponseField response_field(const Game& g, int player, int resolution,
                                 double tol);

// A grid profile where every player's regret is at most the tolerance.
struct EquilibriumCertificate {
  std::vector<double> point;    // full profile in unit coordinates
  std::vector<double> regrets;  // per player, against exact column minima
  double max_regret = 0.0;
  double tol = 0.0;
  int resolution = 0;
};

// Cap on the number of certificate clusters a search reports.
inline constexpr int kMaxCertificates = 64;

struct NashReport {
  int resolution = 0;
  double tol = 0.0;
  // Certificates after deduplication: qualifying profiles within two grid
  // steps (sup metric) of an earlier-found representative merge into its
  // cluster and the cheapest profile represents the cluster. Sorted by
  // worst regret, then lexicographically.
  std::vector<EquilibriumCertificate> certificates;
  std::size_t clusters_found = 0;  // before the kMaxCertificates cap
  bool truncated = false;
  // Attained minimum over the whole product grid of the worst per-player
  // regret, with its argmin profile and that profile's regrets. Reported
  // whether or not any certificate exists.
  double min_max_regret = 0.0;
  std::vector<double> best_profile;
  std::vector<double> best_regrets;
};

// Exhaustive scan of the product grid. Exact column minima are computed
// first, then every profile's worst regret is compared against them.
NashReport nash_search(const Game& g, int resolution, double tol);

// Recomputes a certificate's regrets by independent pointwise column
// scans through Game::cost, bypassing any field provider. Returns the
// per-player regrets.
std::vector<double> audit_certificate(const Game& g,
                                      const EquilibriumCertificate& cert);

// One rung of an intersection refinement: at the given resolution, every
// player's best-response graph is materialized as a site set on the
// product grid, the exact sup-distance field to each graph is computed,
// and the profile minimizing the worst distance is the witness. The rung
// is empty when even the witness sits farther than eps from some graph.
struct RefineRung {
  int resolution = 0;
  double eps = 0.0;
  double response_tol = 0.0;
  bool empty = false;
  std::vector<double> witness;
  double witness_value = 0.0;
};

struct RefineReport {
  std::vector<RefineRung> rungs;
  bool converged = false;    // no rung emptied
  int emptied_rung = -1;     // index of the first empty rung, -1 if none
  std::vector<double> limit; // witness of the last rung when converged
  // Largest sup-distance between consecutive witnesses; a Cauchy modulus
  // for the witness sequence.
  double cauchy_modulus = 0.0;
};

// Runs the rungs in order. `eps` must be positive and non-increasing and
// `resolutions` positive and non-decreasing, one entry per rung; each
// rung's best-response fields use one grid step as their cluster
// tolerance. An empty rung is recorded and the remaining rungs are
// skipped: once the fattened intersection is empty at some eps it stays
// empty at every smaller eps.
RefineReport refine_intersection(const Game& g,
                                 const std::vector<double>& eps,
                                 const std::vector<int>& resolutions);

// Exact equilibria of the mixed extension of a 2x2 cost table. The
// entries are converted to rationals exactly (every double is a rational)
// and all comparisons are exact, so the output is the complete equilibrium
// list: each entry is (x, y) with x the first player's probability on the
// first row and y the second player's on the first column. `continuum` is
// set when some player is indifferent over a whole segment of responses,
// in which case the listed points are representatives, not the full set.
struct BimatrixResult {
  std::vector<std::array<Rat, 2>> equilibria;
  bool continuum = false;
};

BimatrixResult bimatrix_solve(const Mat2& cost_one, const Mat2& cost_two);

// Whether a best-response field looks like the root set of a polynomial
// family: strands of the sampled multifunction are matched across the
// grid and the configuration-lift obstruction is solved at the given
// total weight. Liftable fields are exactly those admitting a consistent
// global root-multiplicity assignment.
struct PolynomialLikeReport {
  bool liftable = false;
  Int weight;
  int components = 0;
  std::size_t ambiguities = 0;
  LiftOutcome outcome;
};

// `tol` is the strand-matching ambiguity threshold in length units; pass
// one grid step unless the field is known to be noisy.
PolynomialLikeReport polynomial_like_check(const BestResponseField& field,
                                           const Int& weight, double tol);

}  // namespace homsel
