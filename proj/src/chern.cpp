#include "chernum/chern.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "chernum/errors.hpp"

namespace chernum {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::int64_t narrow(const BigInt& v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw InputError(std::string(what) + " does not fit in 64 bits");
  return static_cast<std::int64_t>(v);
}

BigInt binomial(int n, int k) {
  BigInt b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

int count_linear(const PolySystem& gens) {
  return static_cast<int>(std::count_if(gens.begin(), gens.end(), [](const Polynomial& p) { return p.degree() == 1; }));
}

std::string join(std::span<const int> v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

}  // namespace

void check_degree_floor(const PolySystem& gens, std::span<const int> degrees, const PipelineConfig& cfg) {
  const int b = gens.max_degree();
  for (int d : degrees) {
    if (d < 1) throw InputError("degrees must be positive, got " + join(degrees));
    if (d < b && !cfg.allow_low_degrees)
      throw InputError("degree " + std::to_string(d) + " in " + join(degrees) +
                       " is below the largest generator degree " + std::to_string(b) +
                       "; pass the low-degree override only if the forms still cut out Z plus finitely many points");
  }
}

void PipelineConfig::validate() const {
  homotopy.validate();
  classify.validate();
  if (run_retries < 0) throw InputError("run_retries must be >= 0");
  if (solve.threads < 0) throw InputError("threads must be >= 0");
}

BigInt elementary_symmetric(std::span<const int> degrees, int k) {
  const int r = static_cast<int>(degrees.size());
  if (k < 0 || k > r) throw InputError("elementary symmetric index " + std::to_string(k) + " out of range 0.." +
                                      std::to_string(r));
  // e[j] after processing a prefix holds sigma_j of that prefix.
  std::vector<BigInt> e(k + 1, 0);
  e[0] = 1;
  for (int i = 0; i < r; ++i)
    for (int j = std::min(k, i + 1); j >= 1; --j) e[j] += e[j - 1] * degrees[i];
  return e[k];
}

std::vector<BigInt> coefficient_vector(std::span<const int> degrees, int r, int n) {
  if (static_cast<int>(degrees.size()) != r)
    throw InputError("expected " + std::to_string(r) + " degrees, got " + std::to_string(degrees.size()));
  if (n < 0 || n > r) throw InputError("dimension " + std::to_string(n) + " out of range for P^" + std::to_string(r));
  std::vector<BigInt> sigma(n + 1);
  for (int j = 0; j <= n; ++j) sigma[j] = elementary_symmetric(degrees, j);
  std::vector<BigInt> a(n + 1);
  for (int k = 0; k <= n; ++k) {
    BigInt sum = 0;
    for (int i = 0; i <= n - k; ++i) {
      const BigInt term = binomial(r + i, i) * sigma[n - k - i];
      sum += (i % 2 == 0) ? term : BigInt(-term);
    }
    a[k] = sum;
  }
  return a;
}

DegreeSchedule default_schedule(int base, int r, int n) {
  if (base < 1) throw InputError("base degree must be >= 1");
  if (n < 0 || n >= r) throw InputError("need 0 <= n < r for a degree schedule");
  DegreeSchedule s;
  for (int i = 0; i <= n; ++i) {
    std::vector<int> row(r, base);
    for (int j = 0; j < i; ++j) row[r - 1 - j] = base + 1;
    s.push_back(std::move(row));
  }
  return s;
}

BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  for (const auto& row : m)
    if (row.size() != n) throw InputError("determinant of a non-square matrix");
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

int check_unimodular(const DegreeSchedule& schedule, int r, int n) {
  if (static_cast<int>(schedule.size()) != n + 1)
    throw InputError("schedule needs " + std::to_string(n + 1) + " degree vectors, got " +
                     std::to_string(schedule.size()));
  std::vector<std::vector<BigInt>> m;
  for (const auto& degs : schedule) m.push_back(coefficient_vector(degs, r, n));
  const BigInt det = bareiss_determinant(std::move(m));
  if (det != 1 && det != -1) throw NumericalFailure("relation matrix has determinant " + det.str() + ", not +-1");
  return static_cast<int>(det);
}

int relation_ambient_dim(const PolySystem& gens, std::span<const int> degrees) {
  const int r = gens.num_vars() - 1;
  const int size = static_cast<int>(degrees.size());
  if (size == r) return r;
  const int lin = count_linear(gens);
  if (lin > 0 && size == r - lin) return size;
  throw InputError("expected " + std::to_string(r) + " degrees" +
                   (lin > 0 ? " (or " + std::to_string(r - lin) + " with the linear generators fixed)" : std::string()) +
                   ", got " + std::to_string(size));
}

PolySystem random_square_system(const PolySystem& gens, std::span<const int> degrees, Rng& rng) {
  const int r_eff = relation_ambient_dim(gens, degrees);
  PolySystem square(gens.num_vars(), gens.var_names());
  for (int d : degrees) square.push_back(random_ideal_element(gens, d, rng));
  if (r_eff < gens.num_vars() - 1)
    for (const auto& p : gens)
      if (p.degree() == 1) square.push_back(p);
  return square;
}

EquivalenceRun equivalence_of_z(const PolySystem& gens, const PolySystem& square, const PipelineConfig& cfg,
                                Rng& rng) {
  cfg.validate();
  if (gens.num_vars() != square.num_vars()) throw InputError("generators and square system live in different spaces");
  if (static_cast<int>(square.size()) != square.num_vars() - 1)
    throw InputError("square system needs " + std::to_string(square.num_vars() - 1) + " forms, got " +
                     std::to_string(square.size()));
  const int attempts = cfg.run_retries + 1;
  for (int attempt = 0;; ++attempt) {
    try {
      EquivalenceRun run;
      run.attempts = attempt + 1;
      const AffinePatch patch = AffinePatch::random(square.num_vars(), rng);
      auto t0 = Clock::now();
      run.solve = solve_square_system(square, cfg.homotopy, patch, rng, cfg.solve);
      run.timings.track = seconds_since(t0);
      run.bezout = bezout_number(run.solve.degrees);

      std::map<PathStatus, int> bad;
      for (const auto& p : run.solve.paths)
        if (!p.resolved()) ++bad[p.status];
      if (!bad.empty()) {
        std::ostringstream os;
        os << "unresolved paths:";
        for (const auto& [s, c] : bad) os << " " << to_string(s) << "=" << c;
        throw NumericalFailure(os.str());
      }

      t0 = Clock::now();
      run.clusters = cluster_endpoints(run.solve.paths, cfg.classify.cluster_tol, &square, cfg.classify.polish_iters);
      run.timings.cluster = seconds_since(t0);
      t0 = Clock::now();
      run.clusters = classify_clusters(std::move(run.clusters), square, gens, cfg.classify, cfg.solve);
      run.timings.classify = seconds_since(t0);

      run.residual_multiplicity = total_residual_multiplicity(run.clusters);
      for (const auto& c : run.clusters) {
        if (c.classification != Classification::isolated_S) continue;
        ++run.isolated_points;
        if (static_cast<int>(c.path_indices.size()) != c.multiplicity.value_or(0))
          throw NumericalFailure("isolated point of multiplicity " + std::to_string(c.multiplicity.value_or(0)) +
                                 " received " + std::to_string(c.path_indices.size()) + " paths");
      }
      run.equivalence = static_cast<std::int64_t>(run.bezout) - run.residual_multiplicity;
      return run;
    } catch (const NumericalFailure&) {
      if (attempt + 1 >= attempts) throw;
    }
  }
}

Relation linear_relation(const PolySystem& gens, std::span<const int> degrees, int n, const PipelineConfig& cfg,
                         Rng& rng, EquivalenceRun* details) {
  check_degree_floor(gens, degrees, cfg);
  const int r_eff = relation_ambient_dim(gens, degrees);
  if (n < 0 || n >= r_eff) throw InputError("dimension " + std::to_string(n) + " out of range");
  const PolySystem square = random_square_system(gens, degrees, rng);
  EquivalenceRun run = equivalence_of_z(gens, square, cfg, rng);
  Relation rel;
  for (const auto& a : coefficient_vector(degrees, r_eff, n)) rel.coeffs.push_back(narrow(a, "relation coefficient"));
  rel.rhs = run.equivalence;
  rel.degrees_used.assign(degrees.begin(), degrees.end());
  if (details) *details = std::move(run);
  return rel;
}

int dimension_of_z(const PolySystem& gens, const PipelineConfig& cfg, Rng& rng) {
  cfg.validate();
  if (gens.empty()) throw InputError("no generators");
  const int r = gens.num_vars() - 1;
  const int lin = count_linear(gens);
  const int r_eff = r - lin;
  const int b = gens.max_degree();
  for (int k = r_eff - 1; k >= 1; --k) {
    PolySystem square(gens.num_vars());
    for (int i = 0; i < r_eff - k; ++i) square.push_back(random_ideal_element(gens, b, rng));
    for (const auto& p : gens)
      if (p.degree() == 1 && lin > 0) square.push_back(p);
    for (int i = 0; i < k; ++i) square.push_back(random_form(gens.num_vars(), 1, rng));
    const AffinePatch patch = AffinePatch::random(gens.num_vars(), rng);
    const SquareSolve sol = solve_square_system(square, cfg.homotopy, patch, rng, cfg.solve);
    for (const auto& p : sol.paths) {
      if (!p.resolved()) continue;
      const Point x = polish_point(square, p.endpoint, cfg.classify.polish_iters, 1e-16).point;
      if (gens.relative_residual(x) < cfg.classify.residual_tol) return k;
    }
  }
  throw AssumptionViolation("V(I) has no positive-dimensional component");
}

ChernResult solve_relations(std::vector<Relation> relations, int n) {
  const std::size_t m = static_cast<std::size_t>(n) + 1;
  if (relations.size() != m) throw InputError("need " + std::to_string(m) + " relations");
  std::vector<std::vector<BigInt>> mat;
  for (const auto& rel : relations) {
    if (rel.coeffs.size() != m) throw InputError("relation has the wrong length");
    mat.emplace_back(rel.coeffs.begin(), rel.coeffs.end());
  }
  const BigInt det = bareiss_determinant(mat);
  if (det != 1 && det != -1) throw NumericalFailure("relation matrix has determinant " + det.str() + ", not +-1");

  // Exact Gauss-Jordan over the rationals.
  std::vector<std::vector<Rational>> aug(m, std::vector<Rational>(m + 1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) aug[i][j] = Rational(mat[i][j]);
    aug[i][m] = Rational(relations[i].rhs);
  }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t p = c;
    while (aug[p][c] == 0) ++p;  // det != 0, so a pivot exists
    std::swap(aug[p], aug[c]);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == c || aug[i][c] == 0) continue;
      const Rational f = aug[i][c] / aug[c][c];
      for (std::size_t j = c; j <= m; ++j) aug[i][j] -= f * aug[c][j];
    }
  }
  ChernResult res;
  res.dimension = n;
  res.det_m = static_cast<std::int64_t>(det);
  for (std::size_t i = 0; i < m; ++i) {
    const Rational v = aug[i][m] / aug[i][i];
    if (boost::multiprecision::denominator(v) != 1) throw NumericalFailure("non-integral Chern degree");
    res.chern_degrees.push_back(narrow(boost::multiprecision::numerator(v), "Chern degree"));
  }

  Eigen::MatrixXd a(m, m);
  Eigen::VectorXd d(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) a(i, j) = static_cast<double>(relations[i].coeffs[j]);
    d(i) = static_cast<double>(relations[i].rhs);
  }
  const Eigen::VectorXd x = a.fullPivLu().solve(d);
  for (std::size_t i = 0; i < m; ++i)
    res.residual_of_solve = std::max(res.residual_of_solve, std::abs(x(i) - static_cast<double>(res.chern_degrees[i])));
  if (!(res.residual_of_solve < 1e-6))
    throw NumericalFailure("floating solve deviates from the exact solution by " + std::to_string(res.residual_of_solve));

  for (const auto& rel : relations) {
    BigInt lhs = 0;
    for (std::size_t j = 0; j < m; ++j) lhs += BigInt(rel.coeffs[j]) * res.chern_degrees[j];
    if (lhs != rel.rhs) throw NumericalFailure("solved Chern degrees violate a relation");
  }
  if (n == 1) {
    const std::int64_t c1 = res.chern_degrees[1];
    if ((2 - c1) % 2 == 0) res.genus = (2 - c1) / 2;
  }
  res.relations = std::move(relations);
  return res;
}

ChernResult chern_numbers(const PolySystem& gens, const PipelineConfig& cfg, Rng& rng,
                          std::optional<DegreeSchedule> schedule) {
  cfg.validate();
  const int n = dimension_of_z(gens, cfg, rng);
  if (!schedule) {
    const int r_eff = gens.num_vars() - 1 - count_linear(gens);
    schedule = default_schedule(gens.max_degree(), r_eff, n);
  }
  if (static_cast<int>(schedule->size()) != n + 1)
    throw InputError("Z has dimension " + std::to_string(n) + ", so the schedule needs " + std::to_string(n + 1) +
                     " degree vectors, got " + std::to_string(schedule->size()));
  for (const auto& degs : *schedule) check_degree_floor(gens, degs, cfg);

  std::vector<Relation> relations;
  std::vector<EquivalenceRun> runs;
  for (const auto& degs : *schedule) {
    EquivalenceRun run;
    relations.push_back(linear_relation(gens, degs, n, cfg, rng, &run));
    runs.push_back(std::move(run));
  }
  ChernResult res = solve_relations(std::move(relations), n);
  res.runs = std::move(runs);
  return res;
}

}  // namespace chernum
