#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "chernum/polysys.hpp"
#include "chernum/random.hpp"

namespace chernum {

struct HomotopyConfig {
  // Unit complex for the gamma trick; drawn from the run's generator when unset.
  std::optional<Complex> gamma;
  double t_min = 1e-8;
  double step_initial = 0.02;
  double step_min = 1e-13;
  double step_max = 0.1;
  // Relative size of the last corrector update for a step to be accepted.
  double track_tol = 1e-7;
  int corrector_max_iters = 3;
  double newton_tol = 1e-10;
  int newton_max_iters = 30;
  int max_steps_per_path = 20000;
  // Re-tracking attempts with a smaller step ceiling after a step failure.
  int max_retries = 3;
  // Below this t a stalled corrector ends the path early (truncated) instead of failing it.
  double truncation_zone = 1e-4;
  // Re-patch when the patch coordinates exceed this infinity norm.
  double patch_threshold = 1e4;

  void validate() const;
};

// The chart {x : v . x = 1} of P^r.
struct AffinePatch {
  Eigen::VectorXcd v;

  static AffinePatch random(int num_vars, Rng& rng);
  int num_vars() const { return static_cast<int>(v.size()); }
  // Rescales a homogeneous representative onto the chart.
  Point to_patch(const Point& x) const;
  void validate() const;
};

enum class PathStatus { converged, truncated_at_tmin, step_failure, diverged_in_patch };
std::string_view to_string(PathStatus s);

struct PathResult {
  Point endpoint;  // unit norm, phase fixed so the largest coordinate is real positive
  PathStatus status = PathStatus::step_failure;
  double final_t = 1.0;
  // ||target(endpoint)|| / (1 + ||coefficients||)
  double newton_residual = 0.0;
  double jacobian_min_singular_value = 0.0;
  // sigma_r / sigma_1 of the target Jacobian at the endpoint.
  double jacobian_rank_ratio = 0.0;
  int path_index = 0;
  int steps = 0;
  int retries = 0;

  bool resolved() const { return status == PathStatus::converged || status == PathStatus::truncated_at_tmin; }
};

struct StartSystem {
  PolySystem system;
  std::vector<Point> solutions;  // on the patch
  Eigen::MatrixXcd coordinate_change;  // unitary U; the system is {(Ux)_i^{n_i} - (Ux)_0^{n_i}}
};

// Total-degree start system in a random unitary frame, with all prod n_i solutions.
StartSystem total_degree_start(std::span<const int> degrees, const AffinePatch& patch, Rng& rng);

// Tracks H(x,t) = gamma t start(x) + (1-t) target(x) from t = 1 to t_min, then refines
// against the target. cfg.gamma must be set. Per-path randomness (re-patching) comes from
// path_seed only.
PathResult track_path(const PolySystem& start, const PolySystem& target, const Point& start_point,
                      const HomotopyConfig& cfg, const AffinePatch& patch, std::uint64_t path_seed = 0,
                      int path_index = 0);

enum class Execution { serial, parallel };

struct SolveOptions {
  Execution execution = Execution::parallel;
  int threads = 0;  // 0: OpenMP default
};

struct SquareSolve {
  std::vector<PathResult> paths;  // ordered by path_index
  Complex gamma;
  std::vector<int> degrees;
};

// One PathResult per start solution (exactly prod n_i), ordered by path_index.
SquareSolve solve_square_system(const PolySystem& target, const HomotopyConfig& cfg, const AffinePatch& patch,
                                Rng& rng, SolveOptions opts = {});

std::uint64_t bezout_number(std::span<const int> degrees);

// Unit-norm representative with the largest-modulus coordinate rotated to the positive reals.
Point normalize_projective(const Point& x);

// Gauss-Newton with minimum-norm steps on sys restricted to the local chart through x.
// Converges to the nearest solution also where the Jacobian drops rank (positive-dimensional
// solution sets, singular isolated points).
struct PolishResult {
  Point point;
  double residual = 0.0;  // ||sys(point)|| / (1 + ||coefficients||), point at unit norm
  int iterations = 0;
};
PolishResult polish_point(const PolySystem& sys, const Point& x, int max_iters, double tol);

// ||sys(x)|| / (1 + ||coefficients||) at x scaled to unit norm.
double scaled_residual(const PolySystem& sys, const Point& x);

struct SingularValueSummary {
  double smallest = 0.0;
  double ratio = 0.0;  // smallest / largest over the first min(rows, cols - 1) values
};
// Singular values of the k x (r+1) homogeneous Jacobian at x / ||x||. Only k <= r values count:
// the Euler relation puts x in the kernel of a square system's Jacobian.
SingularValueSummary jacobian_singular_values(const PolySystem& sys, const Point& x);

}  // namespace chernum
