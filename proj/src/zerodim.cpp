#include "chernum/zerodim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "chernum/errors.hpp"

#ifdef CHERNUM_HAVE_OPENMP
#include <omp.h>
#endif

namespace chernum {

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::on_Z:
      return "on_Z";
    case Classification::isolated_S:
      return "isolated_S";
    case Classification::junk_positive_dimensional:
      return "junk_positive_dimensional";
    case Classification::unresolved:
      return "unresolved";
  }
  return "unknown";
}

void ClassifyConfig::validate() const {
  if (!(cluster_tol > 0 && residual_tol > 0 && rank_tol > 0 && junk_band_factor >= 1))
    throw InputError("classification tolerances must be positive");
  if (macaulay_max_order < 1 || macaulay_max_columns < 1) throw InputError("Macaulay caps must be >= 1");
}

double projective_distance(const Point& x, const Point& y) {
  // Norm of the part of y/|y| orthogonal to x; equals sqrt(1 - cos^2) without the
  // cancellation near zero.
  const Point u = x / x.norm();
  const Point w = y / y.norm();
  return (w - u * u.dot(w)).norm();
}

std::vector<EndpointCluster> cluster_endpoints(std::span<const PathResult> results, double tol,
                                               const PolySystem* polish_sys, int polish_iters) {
  std::vector<EndpointCluster> clusters;
  std::vector<std::vector<Point>> members;
  for (const auto& r : results) {
    const Point x = r.endpoint / r.endpoint.norm();
    bool placed = false;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      if (projective_distance(members[c].front(), x) <= tol) {
        clusters[c].path_indices.push_back(r.path_index);
        members[c].push_back(x);
        placed = true;
        break;
      }
    }
    if (!placed) {
      clusters.push_back({});
      clusters.back().path_indices.push_back(r.path_index);
      members.push_back({x});
    }
  }
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const Point& anchor = members[c].front();
    Point mean = Point::Zero(anchor.size());
    for (const auto& m : members[c]) {
      const Complex ip = m.dot(anchor);  // conj(m) . anchor
      const Complex phase = std::abs(ip) > 0 ? ip / std::abs(ip) : Complex(1.0);
      mean += m * phase;
    }
    Point rep = normalize_projective(mean);
    if (polish_sys) rep = polish_point(*polish_sys, rep, polish_iters, 1e-16).point;
    clusters[c].representative = rep;
  }
  return clusters;
}

namespace {

using LocalPoly = std::map<std::vector<int>, Complex>;

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// Taylor expansion of f at base (base[chart] == 1) in the m = n - 1 local coordinates
// y_i = z_i - base_i, i != chart, truncated at total degree max_deg.
LocalPoly local_expansion(const Polynomial& f, const Point& base, int chart, int max_deg) {
  const int n = f.num_vars();
  LocalPoly out;
  for (const auto& [mono, coef] : f.terms()) {
    LocalPoly acc;
    acc.emplace(std::vector<int>(n - 1, 0), coef);
    for (int i = 0, li = 0; i < n; ++i) {
      if (i == chart) continue;
      const int e = mono[i];
      if (e > 0) {
        LocalPoly next;
        for (const auto& [ex, c] : acc) {
          int deg = 0;
          for (int v : ex) deg += v;
          for (int k = 0; k <= e && deg + k <= max_deg; ++k) {
            auto nex = ex;
            nex[li] += k;
            next[nex] += c * binomial(e, k) * std::pow(base[i], e - k);
          }
        }
        acc = std::move(next);
      }
      ++li;
    }
    for (const auto& [ex, c] : acc) out[ex] += c;
  }
  return out;
}

std::vector<std::vector<int>> local_monomials(int m, int max_deg) {
  std::vector<std::vector<int>> out;
  for (int d = 0; d <= max_deg; ++d)
    for (const auto& mono : monomials_of_degree(m, d)) out.push_back(mono.exponents());
  return out;
}

std::size_t count_monomials(int m, int max_deg) {
  // C(m + max_deg, m)
  double c = 1.0;
  for (int i = 1; i <= m; ++i) c = c * (max_deg + i) / i;
  return static_cast<std::size_t>(std::llround(c));
}

int nullity_at(const std::vector<LocalPoly>& local, int m, int order, double rank_tol) {
  const auto cols = local_monomials(m, order - 1);
  if (order == 1) return static_cast<int>(cols.size());
  std::map<std::vector<int>, int> col_index;
  for (std::size_t i = 0; i < cols.size(); ++i) col_index.emplace(cols[i], static_cast<int>(i));
  const auto shifts = local_monomials(m, order - 2);

  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(local.size() * shifts.size()),
                                              static_cast<Eigen::Index>(cols.size()));
  Eigen::Index row = 0;
  for (const auto& g : local) {
    for (const auto& alpha : shifts) {
      int da = 0;
      for (int v : alpha) da += v;
      for (const auto& [gamma, c] : g) {
        int dg = 0;
        for (int v : gamma) dg += v;
        if (da + dg > order - 1) continue;
        auto beta = gamma;
        for (int i = 0; i < m; ++i) beta[i] += alpha[i];
        a(row, col_index.at(beta)) += c;
      }
      ++row;
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  const auto& s = svd.singularValues();
  int rank = 0;
  if (s.size() > 0 && s[0] > 0.0)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s[i] > rank_tol * s[0]) ++rank;
  return static_cast<int>(cols.size()) - rank;
}

struct LocalSystem {
  std::vector<LocalPoly> polys;
  int m;
};

LocalSystem localize(const PolySystem& sys, const Point& p, int max_deg) {
  if (p.size() != sys.num_vars()) throw InputError("point dimension does not match system");
  Eigen::Index chart = 0;
  p.cwiseAbs().maxCoeff(&chart);
  if (std::abs(p[chart]) == 0.0) throw InputError("zero vector is not a projective point");
  const Point base = p / p[chart];
  LocalSystem ls{{}, sys.num_vars() - 1};
  for (const auto& f : sys) ls.polys.push_back(local_expansion(f, base, static_cast<int>(chart), max_deg));
  return ls;
}

}  // namespace

int macaulay_nullity(const PolySystem& sys, const Point& p, int order, double rank_tol) {
  if (order < 1) throw InputError("Macaulay order must be >= 1");
  const auto ls = localize(sys, p, order - 1);
  return nullity_at(ls.polys, ls.m, order, rank_tol);
}

NullitySequence nullity_sequence(const PolySystem& sys, const Point& p, const ClassifyConfig& cfg) {
  NullitySequence seq;
  seq.values.push_back(1);
  const int m = sys.num_vars() - 1;
  int max_order = cfg.macaulay_max_order;
  while (max_order > 1 && count_monomials(m, max_order - 1) > static_cast<std::size_t>(cfg.macaulay_max_columns))
    --max_order;
  if (max_order < 2) return seq;
  const auto ls = localize(sys, p, max_order - 1);
  for (int k = 2; k <= max_order; ++k) {
    seq.values.push_back(nullity_at(ls.polys, ls.m, k, cfg.rank_tol));
    if (seq.values[k - 1] == seq.values[k - 2]) {
      seq.stabilized = true;
      break;
    }
  }
  return seq;
}

EndpointCluster classify_cluster(EndpointCluster cluster, const PolySystem& square_sys, const PolySystem& ideal_gens,
                                 const ClassifyConfig& cfg) {
  const Point& rep = cluster.representative;
  cluster.square_residual = square_sys.relative_residual(rep);
  cluster.ideal_residual = ideal_gens.relative_residual(rep);
  cluster.multiplicity.reset();
  cluster.nullity_sequence.clear();
  if (!rep.allFinite() || cluster.square_residual > cfg.residual_tol) {
    cluster.classification = Classification::unresolved;
    return cluster;
  }

  const auto sv = jacobian_singular_values(square_sys, rep);
  cluster.jacobian_rank_ratio = sv.ratio;
  if (sv.ratio > cfg.rank_tol) {
    cluster.classification = Classification::isolated_S;
    cluster.multiplicity = 1;
    cluster.nullity_sequence = {1, 1};
    return cluster;
  }

  const auto seq = nullity_sequence(square_sys, rep, cfg);
  cluster.nullity_sequence = seq.values;
  if (seq.stabilized) {
    cluster.classification = Classification::isolated_S;
    cluster.multiplicity = seq.values.back();
    return cluster;
  }

  if (cluster.ideal_residual < cfg.residual_tol)
    cluster.classification = Classification::on_Z;
  else if (cluster.ideal_residual > cfg.residual_tol * cfg.junk_band_factor)
    cluster.classification = Classification::junk_positive_dimensional;
  else
    cluster.classification = Classification::unresolved;
  return cluster;
}

std::vector<EndpointCluster> classify_clusters(std::vector<EndpointCluster> clusters, const PolySystem& square_sys,
                                               const PolySystem& ideal_gens, const ClassifyConfig& cfg,
                                               SolveOptions opts) {
  cfg.validate();
  const auto count = static_cast<std::int64_t>(clusters.size());
  if (opts.execution == Execution::serial) {
    for (std::int64_t i = 0; i < count; ++i) clusters[i] = classify_cluster(clusters[i], square_sys, ideal_gens, cfg);
  } else {
#ifdef CHERNUM_HAVE_OPENMP
    const int threads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::int64_t i = 0; i < count; ++i) {
      try {
        clusters[i] = classify_cluster(clusters[i], square_sys, ideal_gens, cfg);
      } catch (const Error&) {
        clusters[i].classification = Classification::unresolved;
      }
    }
#else
    for (std::int64_t i = 0; i < count; ++i) clusters[i] = classify_cluster(clusters[i], square_sys, ideal_gens, cfg);
#endif
  }
  return clusters;
}

int total_residual_multiplicity(std::span<const EndpointCluster> clusters) {
  int total = 0;
  std::ostringstream junk, unresolved;
  int n_junk = 0, n_unresolved = 0;
  constexpr int kListed = 10;
  auto describe = [&](std::ostringstream& os, const EndpointCluster& c) {
    const int seen = c.classification == Classification::junk_positive_dimensional ? n_junk : n_unresolved;
    if (seen > kListed + 1) return;
    if (seen == kListed + 1) {
      os << "\n  ...";
      return;
    }
    os << "\n  paths " << c.path_indices.size() << " at [";
    for (Eigen::Index i = 0; i < c.representative.size(); ++i)
      os << (i ? ", " : "") << c.representative[i].real() << (c.representative[i].imag() < 0 ? "" : "+")
         << c.representative[i].imag() << "i";
    os << "] ideal residual " << c.ideal_residual;
  };
  for (const auto& c : clusters) {
    switch (c.classification) {
      case Classification::isolated_S:
        total += c.multiplicity.value_or(0);
        break;
      case Classification::junk_positive_dimensional:
        ++n_junk;
        describe(junk, c);
        break;
      case Classification::unresolved:
        ++n_unresolved;
        describe(unresolved, c);
        break;
      case Classification::on_Z:
        break;
    }
  }
  if (n_junk > 0)
    throw AssumptionViolation("junk_positive_dimensional: " + std::to_string(n_junk) +
                              " endpoint cluster(s) lie on a positive-dimensional component outside V(I):" +
                              junk.str());
  if (n_unresolved > 0)
    throw NumericalFailure("unresolved: " + std::to_string(n_unresolved) + " endpoint cluster(s) could not be classified:" +
                           unresolved.str());
  return total;
}

}  // namespace chernum
