#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "chernum/corpus.hpp"
#include "chernum/errors.hpp"
#include "chernum/zerodim.hpp"
#include "local_systems.hpp"
#include "oracles.hpp"

using namespace chernum;

namespace {

Point origin_chart(int n) {
  Point p = Point::Zero(n);
  p[0] = 1.0;
  return p;
}

PathResult fake_path(const Point& x, int index) {
  PathResult r;
  r.endpoint = normalize_projective(x);
  r.status = PathStatus::converged;
  r.path_index = index;
  return r;
}

}  // namespace

TEST_CASE("projective distance") {
  Point x(3), y(3);
  x << 1, 2, 3;
  y << 0, 0, 1;
  CHECK(projective_distance(x, Complex(0.3, -2.0) * x) < 1e-8);
  CHECK(projective_distance(x, y) == doctest::Approx(std::sqrt(1.0 - 9.0 / 14.0)));
  Point e0 = Point::Zero(3), e1 = Point::Zero(3);
  e0[0] = 1;
  e1[1] = 1;
  CHECK(projective_distance(e0, e1) == doctest::Approx(1.0));
}

TEST_CASE("repeated endpoints form one cluster") {
  Point x(3);
  x << Complex(1, 1), 2, Complex(0, -1);
  Rng rng(6);
  std::vector<PathResult> rs;
  for (int i = 0; i < 5; ++i) rs.push_back(fake_path(unit_circle(rng) * x, i));
  const auto cl = cluster_endpoints(rs, 1e-6);
  REQUIRE(cl.size() == 1);
  CHECK(cl[0].path_indices == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(projective_distance(cl[0].representative, x) < 1e-12);
}

TEST_CASE("perturbing endpoints by 1e-9 changes no cluster assignment") {
  Rng rng(31);
  std::vector<Point> centers;
  for (int c = 0; c < 6; ++c) {
    Point p(4);
    for (int i = 0; i < 4; ++i) p[i] = Complex(2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1);
    centers.push_back(p);
  }
  std::vector<PathResult> base, perturbed;
  int idx = 0;
  for (int c = 0; c < 6; ++c)
    for (int k = 0; k <= c % 3; ++k) {
      base.push_back(fake_path(centers[c], idx));
      Point q = centers[c].normalized();
      for (int i = 0; i < 4; ++i) q[i] += 1e-9 * unit_circle(rng);
      perturbed.push_back(fake_path(q, idx));
      ++idx;
    }
  const auto a = cluster_endpoints(base, 1e-6);
  const auto b = cluster_endpoints(perturbed, 1e-6);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].path_indices == b[i].path_indices);
}

TEST_CASE("Macaulay nullities of {x^2, y^2} are 1, 3, 4, 4") {
  const PolySystem sys = parse_system("vars: w x y\nx^2\ny^2\n");
  const Point p = origin_chart(3);
  CHECK(macaulay_nullity(sys, p, 1) == 1);
  CHECK(macaulay_nullity(sys, p, 2) == 3);
  CHECK(macaulay_nullity(sys, p, 3) == 4);
  CHECK(macaulay_nullity(sys, p, 4) == 4);
  CHECK_THROWS_AS(macaulay_nullity(sys, p, 0), InputError);
}

TEST_CASE("{x^2, xy, y^3} stabilizes at 4 = |{1, x, y, y^2}|") {
  const PolySystem sys = parse_system("vars: w x y\nx^2\nx*y\ny^3\n");
  const auto seq = nullity_sequence(sys, origin_chart(3), ClassifyConfig{});
  CHECK(seq.stabilized);
  CHECK(seq.values.back() == 4);
  const local_systems::Case c{"", 2, {{{1, {2, 0}}}, {{1, {1, 1}}}, {{1, {0, 3}}}}};
  CHECK(oracle::quotient_dimension(local_systems::to_rational(c), 2) == 4);
}

TEST_CASE("nullity sequences are non-decreasing and start at 1") {
  for (const auto& c : local_systems::cases()) {
    CAPTURE(c.name);
    const PolySystem sys = local_systems::homogenized(c, std::vector<double>(c.num_vars, 0.0));
    const auto seq = nullity_sequence(sys, origin_chart(c.num_vars + 1), ClassifyConfig{});
    REQUIRE(!seq.values.empty());
    CHECK(seq.values[0] == 1);
    CHECK(std::is_sorted(seq.values.begin(), seq.values.end()));
  }
}

TEST_CASE("Macaulay multiplicity agrees with the Groebner standard-monomial count") {
  Rng rng(8);
  std::set<int> seen;
  for (const auto& c : local_systems::cases()) {
    CAPTURE(c.name);
    const int oracle_mult = oracle::quotient_dimension(local_systems::to_rational(c), c.num_vars);
    REQUIRE(oracle_mult > 0);
    std::vector<double> shift(c.num_vars);
    for (auto& s : shift) s = std::round(8 * uniform01(rng) - 4) / 2;  // exact halves
    const PolySystem sys = local_systems::homogenized(c, shift);
    Point p(c.num_vars + 1);
    p[0] = 1.0;
    for (int i = 0; i < c.num_vars; ++i) p[i + 1] = shift[i];
    CHECK(sys.relative_residual(p) < 1e-14);
    const auto seq = nullity_sequence(sys, p, ClassifyConfig{});
    CHECK(seq.stabilized);
    CHECK(seq.values.back() == oracle_mult);
    seen.insert(oracle_mult);
  }
  CHECK(seen.size() >= 5);
}

TEST_CASE("nonsingular roots have nullity 1 at every order") {
  const PolySystem sys = parse_system("vars: w x y\nx - w\nx*y - w^2 + (2,0)*w*y - (2,0)*y^2\n");
  Point p(3);
  p << 1, 1, 0.5;  // x = 1; y - 1 + 2y - 2y^2 = 0 at y = 1/2
  REQUIRE(sys.relative_residual(p) < 1e-15);
  for (int k = 1; k <= 5; ++k) CHECK(macaulay_nullity(sys, p, k) == 1);
  const auto sv = jacobian_singular_values(sys, p);
  CHECK(sv.ratio > 1e-3);
}

TEST_CASE("{z1^2 L, z2} in P^2: a double point found by two paths") {
  // L = z0 + z1 + 3 z2 misses (1,0,0).
  const PolySystem sys = parse_system("vars: z0 z1 z2\nz1^2*z0 + z1^3 + (3,0)*z1^2*z2\nz2\n");
  Rng rng(4);
  const AffinePatch patch = AffinePatch::random(3, rng);
  const auto sol = solve_square_system(sys, {}, patch, rng, {Execution::serial});
  REQUIRE(sol.paths.size() == 3);
  auto clusters = cluster_endpoints(sol.paths, 1e-6, &sys);
  // The ideal is the system itself; nothing positive dimensional.
  clusters = classify_clusters(std::move(clusters), sys, sys, ClassifyConfig{}, {Execution::serial});
  REQUIRE(clusters.size() == 2);
  std::multiset<int> mults;
  for (const auto& c : clusters) {
    CHECK(c.classification == Classification::isolated_S);
    REQUIRE(c.multiplicity);
    CHECK(static_cast<int>(c.path_indices.size()) == *c.multiplicity);
    mults.insert(*c.multiplicity);
  }
  CHECK(mults == std::multiset<int>{1, 2});
  CHECK(total_residual_multiplicity(clusters) == 3);
  // Affine chart z0 = 1: the whole quotient is the double origin plus the simple root x = -1.
  const local_systems::Case chart{"", 2, {{{1, {2, 0}}, {1, {3, 0}}, {3, {2, 1}}}, {{1, {0, 1}}}}};
  CHECK(oracle::quotient_dimension(local_systems::to_rational(chart), 2) == 3);
}

TEST_CASE("twisted cubic (2,2,3): one cluster off the curve, 12 paths conserved") {
  const PolySystem gens = corpus::twisted_cubic();
  Rng rng(2024);
  PolySystem square(4);
  for (int d : {2, 2, 3}) square.push_back(random_ideal_element(gens, d, rng));
  const AffinePatch patch = AffinePatch::random(4, rng);
  const auto sol = solve_square_system(square, {}, patch, rng, {Execution::serial});
  auto clusters = cluster_endpoints(sol.paths, 1e-6, &square);
  clusters = classify_clusters(std::move(clusters), square, gens, ClassifyConfig{});
  std::size_t total = 0;
  int isolated = 0;
  std::set<int> indices;
  for (const auto& c : clusters) {
    total += c.path_indices.size();
    indices.insert(c.path_indices.begin(), c.path_indices.end());
    isolated += c.classification == Classification::isolated_S;
    CHECK(c.classification != Classification::unresolved);
    if (c.classification == Classification::isolated_S) CHECK(c.nullity_sequence.back() == 1);
  }
  CHECK(total == 12);
  CHECK(indices.size() == 12);
  CHECK(isolated == 1);
  CHECK(total_residual_multiplicity(clusters) == 1);
  for (std::size_t i = 0; i < clusters.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      CHECK(projective_distance(clusters[i].representative, clusters[j].representative) > 1e-6);
}

TEST_CASE("junk and unresolved clusters block the multiplicity sum") {
  EndpointCluster junk;
  junk.representative = origin_chart(3);
  junk.path_indices = {0};
  junk.classification = Classification::junk_positive_dimensional;
  EndpointCluster ok;
  ok.representative = origin_chart(3);
  ok.path_indices = {1};
  ok.classification = Classification::isolated_S;
  ok.multiplicity = 1;
  CHECK(total_residual_multiplicity(std::vector<EndpointCluster>{ok}) == 1);
  CHECK(total_residual_multiplicity(std::vector<EndpointCluster>{}) == 0);
  CHECK_THROWS_AS(total_residual_multiplicity(std::vector<EndpointCluster>{ok, junk}), AssumptionViolation);
  EndpointCluster unresolved = ok;
  unresolved.classification = Classification::unresolved;
  CHECK_THROWS_AS(total_residual_multiplicity(std::vector<EndpointCluster>{unresolved}), NumericalFailure);
}

TEST_CASE("conic cut by degrees (3,1,1) leaves a junk line") {
  const auto neg = corpus::conic_negative_case();
  Rng rng(77);
  PolySystem square(4);
  for (int d : neg.degrees) square.push_back(random_ideal_element(neg.ideal, d, rng));
  const AffinePatch patch = AffinePatch::random(4, rng);
  const auto sol = solve_square_system(square, {}, patch, rng);
  auto clusters = cluster_endpoints(sol.paths, 1e-6, &square);
  clusters = classify_clusters(std::move(clusters), square, neg.ideal, ClassifyConfig{});
  const bool any_junk = std::any_of(clusters.begin(), clusters.end(), [](const EndpointCluster& c) {
    return c.classification == Classification::junk_positive_dimensional;
  });
  CHECK(any_junk);
  CHECK_THROWS_AS(total_residual_multiplicity(clusters), AssumptionViolation);
}

TEST_CASE("serial and parallel classification agree") {
  const PolySystem gens = corpus::twisted_cubic();
  Rng rng(99);
  PolySystem square(4);
  for (int d : {2, 3, 3}) square.push_back(random_ideal_element(gens, d, rng));
  const AffinePatch patch = AffinePatch::random(4, rng);
  const auto sol = solve_square_system(square, {}, patch, rng, {Execution::serial});
  const auto clusters = cluster_endpoints(sol.paths, 1e-6, &square);
  const auto a = classify_clusters(clusters, square, gens, ClassifyConfig{}, {Execution::serial});
  const auto b = classify_clusters(clusters, square, gens, ClassifyConfig{}, {Execution::parallel, 2});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].classification == b[i].classification);
    CHECK(a[i].multiplicity == b[i].multiplicity);
    CHECK(a[i].nullity_sequence == b[i].nullity_sequence);
    CHECK(a[i].representative == b[i].representative);
  }
}
