#include "doctest.h"

#include "chernum/chern.hpp"
#include "chernum/corpus.hpp"
#include "chernum/errors.hpp"
#include "oracles.hpp"

using namespace chernum;

namespace {

std::vector<std::int64_t> to_i64(const std::vector<BigInt>& v) {
  std::vector<std::int64_t> out;
  for (const auto& x : v) out.push_back(static_cast<std::int64_t>(x));
  return out;
}

PipelineConfig serial_config() {
  PipelineConfig cfg;
  cfg.solve.execution = Execution::serial;
  return cfg;
}

}  // namespace

TEST_CASE("elementary symmetric functions") {
  CHECK(elementary_symmetric(std::vector<int>{2, 2, 2}, 1) == 6);
  CHECK(elementary_symmetric(std::vector<int>{5, 5, 6, 6}, 4) == 5 * 5 * 6 * 6);
  CHECK(elementary_symmetric(std::vector<int>{5, 5, 6, 6}, 0) == 1);
  CHECK(elementary_symmetric(std::vector<int>{}, 0) == 1);
  CHECK_THROWS_AS(elementary_symmetric(std::vector<int>{2, 3}, 3), InputError);
  CHECK_THROWS_AS(elementary_symmetric(std::vector<int>{2, 3}, -1), InputError);
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> d(1 + rng() % 9);
    for (auto& x : d) x = 1 + static_cast<int>(rng() % 30);
    for (int k = 0; k <= static_cast<int>(d.size()); ++k)
      CHECK(elementary_symmetric(d, k) == oracle::sigma_bruteforce(d, k));
  }
}

TEST_CASE("coefficient vectors of the worked examples") {
  CHECK(to_i64(coefficient_vector(std::vector<int>{5, 5, 5, 6}, 4, 2)) == std::vector<std::int64_t>{75, 16, 1});
  CHECK(to_i64(coefficient_vector(std::vector<int>{4, 4, 4, 4, 4}, 5, 3)) == std::vector<std::int64_t>{44, 61, 14, 1});
  CHECK(to_i64(coefficient_vector(std::vector<int>{2, 2, 2, 2, 2, 2}, 6, 3)) ==
        std::vector<std::int64_t>{-8, 4, 5, 1});
  CHECK(to_i64(coefficient_vector(std::vector<int>{5, 5, 6, 6}, 4, 2)) == std::vector<std::int64_t>{86, 17, 1});
  CHECK(to_i64(coefficient_vector(std::vector<int>{5, 6, 6, 6}, 4, 2)) == std::vector<std::int64_t>{98, 18, 1});
  CHECK_THROWS_AS(coefficient_vector(std::vector<int>{2, 2}, 3, 1), InputError);
}

TEST_CASE("a_n = 1 and the curve and surface specializations") {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int r = 2 + static_cast<int>(rng() % 8);
    std::vector<int> d(r);
    for (auto& x : d) x = 1 + static_cast<int>(rng() % 12);
    for (int n = 0; n < r; ++n) CHECK(coefficient_vector(d, r, n).back() == 1);
    // Curves: A = [sum n_i - (r+1), 1].
    const auto a1 = coefficient_vector(d, r, 1);
    CHECK(a1[0] == oracle::sigma_bruteforce(d, 1) - (r + 1));
    // Surfaces: a_0 = sum_{i<j} n_i n_j - (r+1) sum n_i + C(r+2, 2), a_1 = sum n_i - (r+1).
    const auto a2 = coefficient_vector(d, r, 2);
    CHECK(a2[0] == oracle::sigma_bruteforce(d, 2) - (r + 1) * oracle::sigma_bruteforce(d, 1) + (r + 2) * (r + 1) / 2);
    CHECK(a2[1] == oracle::sigma_bruteforce(d, 1) - (r + 1));
  }
}

TEST_CASE("wide coefficients do not overflow at r = 16, degree 32") {
  const std::vector<int> d(16, 32);
  const auto a = coefficient_vector(d, 16, 15);
  CHECK(a.back() == 1);
  // sigma_15 alone is 16 * 32^15, beyond 64 bits; the exact value survives.
  CHECK(elementary_symmetric(d, 15) == BigInt(16) * boost::multiprecision::pow(BigInt(32), 15));
  CHECK(a[0] != 0);
}

TEST_CASE("default schedules") {
  CHECK(default_schedule(4, 5, 3) ==
        DegreeSchedule{{4, 4, 4, 4, 4}, {4, 4, 4, 4, 5}, {4, 4, 4, 5, 5}, {4, 4, 5, 5, 5}});
  CHECK(default_schedule(2, 3, 1) == DegreeSchedule{{2, 2, 2}, {2, 2, 3}});
  CHECK(default_schedule(7, 4, 0) == DegreeSchedule{{7, 7, 7, 7}});
  CHECK_THROWS_AS(default_schedule(2, 3, 3), InputError);
}

TEST_CASE("Bareiss determinant matches Laplace expansion") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n));
    for (auto& row : m)
      for (auto& x : row) x = static_cast<int>(rng() % 21) - 10;
    if (trial % 7 == 0 && n > 1) m[n - 1] = m[0];  // singular
    CHECK(bareiss_determinant(m) == oracle::laplace_det(m));
  }
}

TEST_CASE("unimodularity over 500 random schedules, checked against an independent determinant") {
  Rng rng(20090610);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int r = 2 + static_cast<int>(rng() % 9);  // 2..10
    int n = 1 + static_cast<int>(rng() % (r - 1));  // 1..r-1
    if (trial % 50 == 0) n = r - 1;
    const int b = 1 + static_cast<int>(rng() % 20);
    const DegreeSchedule s = default_schedule(b, r, n);
    std::vector<std::vector<oracle::Int>> m;
    for (const auto& row : s) {
      // Coefficients straight from the definition with brute-force sigma.
      std::vector<oracle::Int> a(n + 1);
      for (int k = 0; k <= n; ++k) {
        oracle::Int sum = 0;
        for (int i = 0; i <= n - k; ++i) {
          oracle::Int binom = 1;
          for (int j = 1; j <= i; ++j) binom = binom * (r + j) / j;
          const oracle::Int t = binom * oracle::sigma_bruteforce(row, n - k - i);
          sum += (i % 2 == 0) ? t : oracle::Int(-t);
        }
        a[k] = sum;
      }
      m.push_back(std::move(a));
    }
    const oracle::Int det = oracle::laplace_det(m);
    CHECK(abs(det) == 1);
    CHECK(check_unimodular(s, r, n) == static_cast<int>(det));
    ++checked;
  }
  CHECK(checked == 500);
  CHECK(check_unimodular(DegreeSchedule{{3, 3, 3}}, 3, 0) == 1);
  CHECK(check_unimodular(default_schedule(4, 5, 3), 5, 3) * check_unimodular(default_schedule(4, 5, 3), 5, 3) == 1);
}

TEST_CASE("non-unimodular matrices are refused") {
  // Two identical rows.
  CHECK_THROWS_AS(check_unimodular(DegreeSchedule{{2, 2, 2}, {2, 2, 2}}, 3, 1), NumericalFailure);
  std::vector<Relation> rels{{{8, 1}, 10, {}}, {{8, 1}, 12, {}}};
  CHECK_THROWS_AS(solve_relations(rels, 1), NumericalFailure);
}

TEST_CASE("solving the worked relation systems exactly") {
  // Threefold relations with the published right-hand sides.
  std::vector<Relation> rels;
  const DegreeSchedule s = default_schedule(4, 5, 3);
  const std::vector<std::int64_t> rhs{1024, 1279, 1594, 1979};
  for (std::size_t i = 0; i < s.size(); ++i) rels.push_back({to_i64(coefficient_vector(s[i], 5, 3)), rhs[i], s[i]});
  const ChernResult res = solve_relations(rels, 3);
  CHECK(res.chern_degrees == std::vector<std::int64_t>{10, 0, 45, -46});
  CHECK(std::abs(res.det_m) == 1);
  CHECK(res.residual_of_solve < 1e-6);
  CHECK_FALSE(res.genus);

  // The twisted cubic: 8 and 11.
  std::vector<Relation> curve{{{2, 1}, 8, {2, 2, 2}}, {{3, 1}, 11, {2, 2, 3}}};
  const ChernResult c = solve_relations(curve, 1);
  CHECK(c.chern_degrees == std::vector<std::int64_t>{3, 2});
  REQUIRE(c.genus);
  CHECK(*c.genus == 0);
}

TEST_CASE("twisted cubic equivalences 8 and 11 and Chern degrees [3, 2]") {
  const PolySystem gens = corpus::twisted_cubic();
  Rng rng(1);
  const PipelineConfig cfg = serial_config();
  EquivalenceRun run;
  const Relation r1 = linear_relation(gens, std::vector<int>{2, 2, 2}, 1, cfg, rng, &run);
  CHECK(r1.rhs == 8);
  CHECK(run.isolated_points == 0);
  CHECK(r1.coeffs == std::vector<std::int64_t>{2, 1});
  const Relation r2 = linear_relation(gens, std::vector<int>{2, 2, 3}, 1, cfg, rng, &run);
  CHECK(r2.rhs == 11);
  CHECK(run.isolated_points == 1);
  CHECK(run.residual_multiplicity == 1);
  CHECK(dimension_of_z(gens, cfg, rng) == 1);
  const ChernResult res = chern_numbers(gens, cfg, rng);
  CHECK(res.chern_degrees == std::vector<std::int64_t>{3, 2});
  REQUIRE(res.genus);
  CHECK(*res.genus == 0);
}

TEST_CASE("equivalence does not depend on the seed") {
  const PolySystem gens = corpus::twisted_cubic();
  const std::vector<int> d{2, 3, 3};
  Rng a(101), b(202);
  const Relation ra = linear_relation(gens, d, 1, serial_config(), a);
  const Relation rb = linear_relation(gens, d, 1, serial_config(), b);
  CHECK(ra.rhs == rb.rhs);
  CHECK(ra.coeffs == rb.coeffs);
  CHECK(ra.degrees_used == rb.degrees_used);
  // Curve formula: prod n_i - deg S = (sum n_i - 4) deg Z + 2 - 2g with deg Z = 3, g = 0.
  CHECK(ra.rhs == (8 - 4) * 3 + 2);
}

TEST_CASE("conic: legal degrees give deg Z = 2, g = 0; (3,1,1) is refused or junk") {
  const auto neg = corpus::conic_negative_case();
  Rng rng(5);
  PipelineConfig cfg = serial_config();
  const ChernResult res = chern_numbers(neg.ideal, cfg, rng, DegreeSchedule{{2, 2, 2}, {2, 2, 3}});
  CHECK(res.chern_degrees == std::vector<std::int64_t>{2, 2});
  REQUIRE(res.genus);
  CHECK(*res.genus == 0);
  // Curve relation check: sum n_i - 4 times deg Z plus 2 - 2g.
  CHECK(res.relations[0].rhs == (6 - 4) * 2 + 2);

  CHECK_THROWS_AS(linear_relation(neg.ideal, neg.degrees, 1, cfg, rng), InputError);
  cfg.allow_low_degrees = true;
  CHECK_THROWS_AS(linear_relation(neg.ideal, neg.degrees, 1, cfg, rng), AssumptionViolation);
}

TEST_CASE("a finite point set has no positive-dimensional Z") {
  // Three points in P^2: the ideal of (1:0:0), (0:1:0), (0:0:1).
  const PolySystem pts = parse_system("vars: x y z\nx*y\ny*z\nx*z\n");
  Rng rng(7);
  CHECK_THROWS_AS(dimension_of_z(pts, serial_config(), rng), AssumptionViolation);
}

TEST_CASE("Segre section (2,2,2,2,3,3): equivalence 142 with two isolated points") {
  Rng build(corpus::spec("segre_section").seed);
  const PolySystem gens = corpus::segre_section(build);
  Rng rng(3);
  EquivalenceRun run;
  const Relation rel = linear_relation(gens, std::vector<int>{2, 2, 2, 2, 3, 3}, 3, serial_config(), rng, &run);
  CHECK(rel.rhs == 142);
  CHECK(run.isolated_points == 2);
  CHECK(rel.coeffs == std::vector<std::int64_t>{-11, 11, 7, 1});
  // Known Chern degrees satisfy the relation exactly.
  const std::vector<std::int64_t> known{4, 10, 10, 6};
  std::int64_t lhs = 0;
  for (int k = 0; k < 4; ++k) lhs += rel.coeffs[k] * known[k];
  CHECK(lhs == rel.rhs);
}

TEST_CASE("degree floor and argument checks") {
  const PolySystem gens = corpus::twisted_cubic();
  Rng rng(1);
  const PipelineConfig cfg = serial_config();
  CHECK_THROWS_AS(linear_relation(gens, std::vector<int>{1, 2, 2}, 1, cfg, rng), InputError);
  CHECK_THROWS_AS(linear_relation(gens, std::vector<int>{2, 2}, 1, cfg, rng), InputError);
  CHECK_THROWS_AS(chern_numbers(gens, cfg, rng, DegreeSchedule{{2, 2, 2}}), InputError);
}
