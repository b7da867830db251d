#include "chernum/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#ifdef CHERNUM_HAVE_OPENMP
#include <omp.h>
#endif

#include "chernum/errors.hpp"
#include "chernum/eval.hpp"

namespace chernum {

void HomotopyConfig::validate() const {
  if (!(t_min > 0.0 && t_min < 1.0)) throw InputError("t_min must lie in (0, 1)");
  if (!(step_min > 0.0 && step_min <= step_initial && step_initial <= step_max))
    throw InputError("need 0 < step_min <= step_initial <= step_max");
  if (!(track_tol > 0.0) || !(newton_tol > 0.0)) throw InputError("tolerances must be positive");
  if (corrector_max_iters < 1 || newton_max_iters < 0 || max_steps_per_path < 1 || max_retries < 0)
    throw InputError("iteration limits out of range");
  if (gamma && std::abs(std::abs(*gamma) - 1.0) > 1e-12) throw InputError("gamma must lie on the unit circle");
}

AffinePatch AffinePatch::random(int num_vars, Rng& rng) {
  AffinePatch p;
  p.v.resize(num_vars);
  for (int i = 0; i < num_vars; ++i) p.v[i] = unit_circle(rng) / std::sqrt(static_cast<double>(num_vars));
  return p;
}

Point AffinePatch::to_patch(const Point& x) const {
  const Complex s = v.transpose() * x;
  if (std::abs(s) < 1e-300) throw NumericalFailure("point lies on the hyperplane at infinity of the patch");
  return x / s;
}

void AffinePatch::validate() const {
  if (v.size() == 0 || !(v.norm() > 0.0)) throw InputError("affine patch vector must be non-zero");
}

std::string_view to_string(PathStatus s) {
  switch (s) {
    case PathStatus::converged:
      return "converged";
    case PathStatus::truncated_at_tmin:
      return "truncated_at_tmin";
    case PathStatus::step_failure:
      return "step_failure";
    case PathStatus::diverged_in_patch:
      return "diverged_in_patch";
  }
  return "unknown";
}

std::uint64_t bezout_number(std::span<const int> degrees) {
  std::uint64_t b = 1;
  for (int d : degrees) {
    if (d < 1) throw InputError("degrees must be positive");
    b *= static_cast<std::uint64_t>(d);
  }
  return b;
}

Point normalize_projective(const Point& x) {
  Eigen::Index k = 0;
  x.cwiseAbs().maxCoeff(&k);
  const Complex phase = std::abs(x[k]) > 0 ? std::conj(x[k]) / std::abs(x[k]) : Complex(1.0);
  return x * phase / x.norm();
}

namespace {

double coefficient_scale(const PolySystem& sys) {
  double s = 0.0;
  for (const auto& p : sys) s += std::pow(p.coefficient_norm(), 2);
  return 1.0 + std::sqrt(s);
}

double max_norm(const Eigen::VectorXcd& x) { return x.cwiseAbs().maxCoeff(); }

// Start and target compiled against one monomial table, so each evaluation of the
// homotopy costs a single table pass.
class Homotopy {
 public:
  Homotopy(const PolySystem& start, const PolySystem& target, Complex gamma)
      : table_(std::make_shared<MonomialTable>(target.num_vars(), std::max(start.max_degree(), target.max_degree()))),
        start_(start, table_),
        target_(target, table_),
        gamma_(gamma),
        n_(target.num_vars()),
        r_(static_cast<int>(target.size())) {
    if (start.num_vars() != target.num_vars() || start.size() != target.size())
      throw InputError("start and target systems differ in shape");
    if (r_ + 1 != n_) throw InputError("homotopy needs a square system: r forms in r+1 variables");
  }

  int num_vars() const { return n_; }
  int rows() const { return r_; }
  std::size_t table_size() const { return table_->size(); }

  struct Work {
    std::vector<Complex> mono;
    Eigen::VectorXcd fs, ft;
    Eigen::MatrixXcd js, jt;
    Eigen::VectorXcd rhs;
    Eigen::MatrixXcd jac;
  };

  Work make_work() const {
    Work w;
    w.mono.resize(table_->size());
    w.rhs.resize(n_);
    w.jac.resize(n_, n_);
    return w;
  }

  // Patch system F = [H(x,t); v.x - 1] and its Jacobian into w.rhs / w.jac. With
  // want_dt, w.rhs holds [dH/dt; 0] instead of F.
  void eval(const Point& x, double t, const Eigen::VectorXcd& v, Work& w, bool want_dt) const {
    table_->evaluate(x, w.mono);
    start_.values(w.mono, w.fs);
    target_.values(w.mono, w.ft);
    start_.jacobian(w.mono, w.js);
    target_.jacobian(w.mono, w.jt);
    const Complex gt = gamma_ * t;
    const double omt = 1.0 - t;
    w.jac.topRows(r_) = gt * w.js + omt * w.jt;
    w.jac.row(r_) = v.transpose();
    if (want_dt) {
      w.rhs.head(r_) = gamma_ * w.fs - w.ft;
      w.rhs[r_] = 0.0;
    } else {
      w.rhs.head(r_) = gt * w.fs + omt * w.ft;
      w.rhs[r_] = v.cwiseProduct(x).sum() - 1.0;
    }
  }

  const CompiledSystem& target() const { return target_; }

 private:
  std::shared_ptr<MonomialTable> table_;
  CompiledSystem start_;
  CompiledSystem target_;
  Complex gamma_;
  int n_;
  int r_;
};

bool all_finite(const Eigen::VectorXcd& x) { return x.allFinite(); }

struct Attempt {
  PathStatus status;
  Point x;
  double t;
  int steps;
  Eigen::VectorXcd v;
};

Attempt track_once(const Homotopy& h, const Point& start_point, const HomotopyConfig& cfg,
                   const AffinePatch& patch, Rng& rng) {
  auto w = h.make_work();
  Eigen::VectorXcd v = patch.v;
  Point x = patch.to_patch(start_point);
  double t = 1.0;
  double dt = cfg.step_initial;
  int successes = 0;
  int steps = 0;
  int repatches = 0;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(h.num_vars());

  while (t > cfg.t_min) {
    if (steps >= cfg.max_steps_per_path) return {PathStatus::step_failure, x, t, steps, v};
    ++steps;
    const double step = std::min(dt, t - cfg.t_min);
    const double t1 = (step == t - cfg.t_min) ? cfg.t_min : t - step;

    // Euler predictor along dx/dt = -J^{-1} dH/dt.
    h.eval(x, t, v, w, true);
    lu.compute(w.jac);
    Eigen::VectorXcd dxdt = -lu.solve(w.rhs);
    Point x1 = x - step * dxdt;

    bool ok = all_finite(x1);
    for (int it = 0; ok && it < cfg.corrector_max_iters; ++it) {
      h.eval(x1, t1, v, w, false);
      lu.compute(w.jac);
      const Eigen::VectorXcd delta = lu.solve(-w.rhs);
      if (!all_finite(delta)) {
        ok = false;
        break;
      }
      x1 += delta;
      if (delta.norm() <= cfg.track_tol * std::max(1.0, x1.norm())) break;
      if (it + 1 == cfg.corrector_max_iters) ok = false;
    }

    if (!ok) {
      dt *= 0.5;
      successes = 0;
      // Paths ending on a positive-dimensional component lose conditioning like 1/t; once the
      // corrector stalls this close to t = 0 the point is already within O(t) of its limit.
      if (t < cfg.truncation_zone && dt < 1e-2 * t) return {PathStatus::truncated_at_tmin, x, t, steps, v};
      if (dt < cfg.step_min) return {PathStatus::step_failure, x, t, steps, v};
      continue;
    }

    x = x1;
    t = t1;
    if (++successes >= 5) {
      dt = std::min(2.0 * dt, cfg.step_max);
      successes = 0;
    }

    if (max_norm(x) > cfg.patch_threshold) {
      if (++repatches > 100) return {PathStatus::diverged_in_patch, x, t, steps, v};
      const Point u = x / x.norm();
      // New random chart in which the current point is well inside.
      for (int tries = 0; tries < 16; ++tries) {
        const auto p = AffinePatch::random(h.num_vars(), rng);
        const Complex s = p.v.transpose() * u;
        if (std::abs(s) > 0.25 / std::sqrt(static_cast<double>(h.num_vars()))) {
          v = p.v;
          x = u / s;
          break;
        }
      }
    }
  }
  return {PathStatus::truncated_at_tmin, x, t, steps, v};
}

}  // namespace

double scaled_residual(const PolySystem& sys, const Point& x) {
  const Point u = x / x.norm();
  return sys.evaluate(u).norm() / coefficient_scale(sys);
}

SingularValueSummary jacobian_singular_values(const PolySystem& sys, const Point& x) {
  const Point u = x / x.norm();
  const Eigen::MatrixXcd jac = sys.jacobian(u);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(jac);
  const auto& s = svd.singularValues();
  const Eigen::Index k = std::min<Eigen::Index>(jac.rows(), jac.cols() - 1);
  if (k <= 0 || s[0] == 0.0) return {0.0, 0.0};
  return {s[k - 1], s[k - 1] / s[0]};
}

PolishResult polish_point(const PolySystem& sys, const Point& x0, int max_iters, double tol) {
  const int n = sys.num_vars();
  const int k = static_cast<int>(sys.size());
  const double scale = coefficient_scale(sys);
  const CompiledSystem compiled(sys);

  // Local chart through the starting point: v = conj(u) with u the unit representative.
  Point x = x0 / x0.norm();
  const Eigen::VectorXcd v = x.conjugate();
  Eigen::VectorXcd f;
  Eigen::MatrixXcd jac;
  Eigen::MatrixXcd a(k + 1, n);
  Eigen::VectorXcd b(k + 1);

  auto residual_at = [&](const Point& y) { return compiled.evaluate(y / y.norm()).norm() / scale; };

  PolishResult best{x, residual_at(x), 0};
  for (int it = 0; it < max_iters && best.residual > tol * 1e-6; ++it) {
    std::vector<Complex> mono(compiled.table().size());
    compiled.table().evaluate(x, mono);
    compiled.values(mono, f);
    compiled.jacobian(mono, jac);
    a.topRows(k) = jac;
    a.row(k) = v.transpose();
    b.head(k) = -f;
    b[k] = 1.0 - v.cwiseProduct(x).sum();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    const Eigen::VectorXcd delta = svd.solve(b);
    if (!delta.allFinite()) break;
    x += delta;
    const double res = residual_at(x);
    if (res < best.residual) best = {x, res, it + 1};
    if (delta.norm() <= 1e-15 * x.norm()) break;
  }
  best.point = normalize_projective(best.point);
  return best;
}

StartSystem total_degree_start(std::span<const int> degrees, const AffinePatch& patch, Rng& rng) {
  const int r = static_cast<int>(degrees.size());
  const int n = r + 1;
  if (r < 1) throw InputError("start system needs at least one equation");
  for (int d : degrees)
    if (d < 1) throw InputError("start system degrees must be >= 1");
  if (patch.num_vars() != n) throw InputError("patch dimension does not match start system");

  // Random unitary frame: Q factor of a matrix with unit-circle entries.
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = unit_circle(rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  const Eigen::MatrixXcd u = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);

  std::vector<Polynomial> frame;
  for (int i = 0; i < n; ++i) {
    Polynomial l(n, 1);
    for (int j = 0; j < n; ++j) l.add_term(Monomial::variable(n, j), u(i, j));
    frame.push_back(std::move(l));
  }
  auto power = [&](const Polynomial& p, int e) {
    Polynomial out = Polynomial::constant(n, 1.0);
    for (int k = 0; k < e; ++k) out = out * p;
    return out;
  };

  StartSystem start{PolySystem(n), {}, u};
  for (int i = 1; i <= r; ++i) start.system.push_back(power(frame[i], degrees[i - 1]) - power(frame[0], degrees[i - 1]));

  const std::uint64_t count = bezout_number(degrees);
  start.solutions.reserve(count);
  std::vector<int> k(r, 0);
  const Eigen::MatrixXcd uh = u.adjoint();
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  for (std::uint64_t s = 0; s < count; ++s) {
    Eigen::VectorXcd y(n);
    y[0] = 1.0;
    for (int i = 0; i < r; ++i) y[i + 1] = std::polar(1.0, kTwoPi * k[i] / degrees[i]);
    start.solutions.push_back(patch.to_patch(uh * y));
    for (int i = r - 1; i >= 0; --i) {
      if (++k[i] < degrees[i]) break;
      k[i] = 0;
    }
  }

  const CompiledSystem compiled(start.system);
  for (const auto& x : start.solutions) {
    const Point unit = x / x.norm();
    if (compiled.evaluate(unit).cwiseAbs().maxCoeff() > 1e-12)
      throw NumericalFailure("start solution failed verification");
  }
  return start;
}

namespace {

PathResult finish_path(const Homotopy& h, const PolySystem& target, const Attempt& a, const HomotopyConfig& cfg,
                       int path_index, int retries) {
  PathResult res;
  res.path_index = path_index;
  res.steps = a.steps;
  res.retries = retries;
  res.final_t = a.t;
  if (a.status != PathStatus::truncated_at_tmin || !a.x.allFinite()) {
    res.status = a.status;
    res.endpoint = a.x.allFinite() ? normalize_projective(a.x) : a.x;
    res.newton_residual = a.x.allFinite() ? scaled_residual(target, a.x) : INFINITY;
    return res;
  }
  (void)h;
  const Point before = normalize_projective(a.x);
  PolishResult pol = polish_point(target, before, cfg.newton_max_iters, cfg.newton_tol);
  // A refinement that wanders off to a different solution is discarded.
  const Complex ip = before.dot(pol.point);
  const double moved = std::sqrt(std::max(0.0, 1.0 - std::norm(ip)));
  if (moved > 1e-4) pol = {before, scaled_residual(target, before), 0};
  res.endpoint = pol.point;
  res.newton_residual = pol.residual;
  res.status = pol.residual <= cfg.newton_tol ? PathStatus::converged : PathStatus::truncated_at_tmin;
  const auto sv = jacobian_singular_values(target, res.endpoint);
  res.jacobian_min_singular_value = sv.smallest;
  res.jacobian_rank_ratio = sv.ratio;
  return res;
}

PathResult track_with_retries(const Homotopy& h, const PolySystem& target, const Point& start_point,
                              const HomotopyConfig& cfg, const AffinePatch& patch, std::uint64_t path_seed,
                              int path_index) {
  Rng rng(path_seed);
  Attempt last{};
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    HomotopyConfig c = cfg;
    const double shrink = std::pow(0.25, attempt);
    c.step_max = std::max(cfg.step_max * shrink, cfg.step_min);
    c.step_initial = std::clamp(cfg.step_initial * shrink, c.step_min, c.step_max);
    c.max_steps_per_path = static_cast<int>(std::min<double>(cfg.max_steps_per_path * std::pow(4.0, attempt), 1e8));
    last = track_once(h, start_point, c, patch, rng);
    if (last.status == PathStatus::truncated_at_tmin) return finish_path(h, target, last, cfg, path_index, attempt);
  }
  return finish_path(h, target, last, cfg, path_index, cfg.max_retries);
}

}  // namespace

PathResult track_path(const PolySystem& start, const PolySystem& target, const Point& start_point,
                      const HomotopyConfig& cfg, const AffinePatch& patch, std::uint64_t path_seed, int path_index) {
  cfg.validate();
  patch.validate();
  if (!cfg.gamma) throw InputError("track_path needs an explicit gamma");
  const Homotopy h(start, target, *cfg.gamma);
  return track_with_retries(h, target, start_point, cfg, patch, path_seed, path_index);
}

SquareSolve solve_square_system(const PolySystem& target, const HomotopyConfig& cfg_in, const AffinePatch& patch,
                                Rng& rng, SolveOptions opts) {
  cfg_in.validate();
  patch.validate();
  if (static_cast<int>(target.size()) + 1 != target.num_vars())
    throw InputError("square system expected: " + std::to_string(target.num_vars() - 1) + " forms in " +
                     std::to_string(target.num_vars()) + " variables, got " + std::to_string(target.size()));
  for (const auto& p : target)
    if (p.is_zero()) throw InputError("zero polynomial in target system");
  HomotopyConfig cfg = cfg_in;
  if (!cfg.gamma) cfg.gamma = unit_circle(rng);

  SquareSolve out;
  out.gamma = *cfg.gamma;
  out.degrees = target.degrees();
  const StartSystem start = total_degree_start(out.degrees, patch, rng);
  const std::uint64_t base_seed = rng();
  const Homotopy h(start.system, target, *cfg.gamma);

  const auto count = static_cast<std::int64_t>(start.solutions.size());
  out.paths.resize(start.solutions.size());
  auto run = [&](std::int64_t i) {
    try {
      out.paths[i] = track_with_retries(h, target, start.solutions[i], cfg, patch,
                                        derive_seed(base_seed, static_cast<std::uint64_t>(i)), static_cast<int>(i));
    } catch (const Error&) {
      PathResult failed;
      failed.path_index = static_cast<int>(i);
      failed.endpoint = start.solutions[i];
      out.paths[i] = failed;
    }
  };

  if (opts.execution == Execution::serial) {
    for (std::int64_t i = 0; i < count; ++i) run(i);
  } else {
#ifdef CHERNUM_HAVE_OPENMP
    const int threads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::int64_t i = 0; i < count; ++i) run(i);
#else
    for (std::int64_t i = 0; i < count; ++i) run(i);
#endif
  }
  return out;
}

}  // namespace chernum
