#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "chernum/polysys.hpp"
#include "chernum/tracker.hpp"
#include "chernum/zerodim.hpp"

namespace chernum {

using BigInt = boost::multiprecision::cpp_int;
using DegreeSchedule = std::vector<std::vector<int>>;

struct PipelineConfig {
  HomotopyConfig homotopy;
  ClassifyConfig classify;
  SolveOptions solve;
  // Permit degrees below the largest generator degree. The caller asserts that the random
  // forms still cut out Z plus a finite scheme at those degrees.
  bool allow_low_degrees = false;
  // Whole-run repeats (fresh gamma and patch) after a NumericalFailure.
  int run_retries = 2;

  void validate() const;
};

struct Relation {
  std::vector<std::int64_t> coeffs;  // [a_0, ..., a_n], a_n = 1
  std::int64_t rhs = 0;              // D
  std::vector<int> degrees_used;
};

struct StageTimings {
  double track = 0.0;
  double cluster = 0.0;
  double classify = 0.0;
};

// Everything one equivalence computation produced, for reporting.
struct EquivalenceRun {
  std::int64_t equivalence = 0;  // prod n_i - mu_S
  std::uint64_t bezout = 0;
  int residual_multiplicity = 0;  // mu_S
  int isolated_points = 0;        // |S|
  SquareSolve solve;
  std::vector<EndpointCluster> clusters;
  int attempts = 1;
  StageTimings timings;
};

// sigma_k(degrees); InputError unless 0 <= k <= degrees.size().
BigInt elementary_symmetric(std::span<const int> degrees, int k);

// a_k = sum_{i=0}^{n-k} (-1)^i C(r+i, i) sigma_{n-k-i}(degrees), k = 0..n.
std::vector<BigInt> coefficient_vector(std::span<const int> degrees, int r, int n);

// n+1 degree vectors of length r: all b, then one more entry bumped to b+1 per row,
// bumps filled in from the end.
DegreeSchedule default_schedule(int base, int r, int n);

// Exact determinant of the matrix whose rows are coefficient_vector(schedule[i], r, n).
// Throws NumericalFailure unless it is +-1.
int check_unimodular(const DegreeSchedule& schedule, int r, int n);

// Exact integer determinant (fraction-free elimination).
BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m);

// D = prod n_i - mu_S for the square system `square` whose zero scheme is Z plus finite S.
// gens are the generators of I, used for membership of endpoints.
EquivalenceRun equivalence_of_z(const PolySystem& gens, const PolySystem& square, const PipelineConfig& cfg,
                                Rng& rng);

// Square system of random ideal elements of the given degrees. When gens contain linear
// forms and degrees has r - (number of linear generators) entries, those linear forms are
// appended unchanged and Z is treated inside their common zero set.
PolySystem random_square_system(const PolySystem& gens, std::span<const int> degrees, Rng& rng);

// InputError when a degree is below the largest generator degree, unless cfg.allow_low_degrees.
void check_degree_floor(const PolySystem& gens, std::span<const int> degrees, const PipelineConfig& cfg);

// Ambient dimension of the relation: r, or r minus the number of fixed linear generators.
int relation_ambient_dim(const PolySystem& gens, std::span<const int> degrees);

Relation linear_relation(const PolySystem& gens, std::span<const int> degrees, int n, const PipelineConfig& cfg,
                         Rng& rng, EquivalenceRun* details = nullptr);

// Largest k such that k generic hyperplanes together with r - k random ideal elements of the
// base degree still meet V(I) in endpoints satisfying every generator.
int dimension_of_z(const PolySystem& gens, const PipelineConfig& cfg, Rng& rng);

struct ChernResult {
  int dimension = 0;
  std::vector<std::int64_t> chern_degrees;  // [deg Z, deg c_1, ..., deg c_n]
  std::vector<Relation> relations;
  std::vector<EquivalenceRun> runs;
  double residual_of_solve = 0.0;  // max deviation of the floating solve from the integers
  std::int64_t det_m = 0;
  std::optional<std::int64_t> genus;  // curves only
};

ChernResult chern_numbers(const PolySystem& gens, const PipelineConfig& cfg, Rng& rng,
                          std::optional<DegreeSchedule> schedule = std::nullopt);

// Solves M C = D exactly given the relations, checks every relation and the floating solve.
ChernResult solve_relations(std::vector<Relation> relations, int n);

}  // namespace chernum
