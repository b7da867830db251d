#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "chernum/polysys.hpp"
#include "chernum/tracker.hpp"

namespace chernum {

enum class Classification { on_Z, isolated_S, junk_positive_dimensional, unresolved };
std::string_view to_string(Classification c);

struct ClassifyConfig {
  double cluster_tol = 1e-6;   // projective distance
  double residual_tol = 1e-6;  // relative residual bands
  double rank_tol = 1e-8;      // singular-value ratio cutoff
  int macaulay_max_order = 10;
  // Secondary cap on the Macaulay search: an order whose matrix would have more columns
  // than this is not built, and the sequence counts as still growing.
  int macaulay_max_columns = 130;
  // Ideal residuals above residual_tol * junk_band_factor are junk; in between is unresolved.
  double junk_band_factor = 1e3;
  int polish_iters = 30;

  void validate() const;
};

struct EndpointCluster {
  Point representative;
  std::vector<int> path_indices;
  Classification classification = Classification::unresolved;
  std::optional<int> multiplicity;
  std::vector<int> nullity_sequence;
  // Diagnostics recorded by classify_cluster.
  double square_residual = 0.0;
  double jacobian_rank_ratio = 0.0;
  double ideal_residual = 0.0;
};

// sqrt(1 - |<x,y>|^2 / (|x|^2 |y|^2)).
double projective_distance(const Point& x, const Point& y);

// Greedy clustering in path order. The representative is the phase-aligned mean of the
// members, re-normalized and, when polish_sys is given, Newton-polished against it.
std::vector<EndpointCluster> cluster_endpoints(std::span<const PathResult> results, double tol,
                                               const PolySystem* polish_sys = nullptr, int polish_iters = 30);

// Dimension of the dual space of sys at p truncated to functionals of order <= order - 1:
// the nullity of the Macaulay matrix of all (y^a f_i), |a| <= order - 2, in local coordinates
// centered at p on the chart of p's largest coordinate.
int macaulay_nullity(const PolySystem& sys, const Point& p, int order, double rank_tol = 1e-8);

struct NullitySequence {
  std::vector<int> values;  // values[k-1] = nullity at order k
  bool stabilized = false;  // two equal consecutive values reached
};
NullitySequence nullity_sequence(const PolySystem& sys, const Point& p, const ClassifyConfig& cfg);

// Jacobian rank, then nullity stabilization, then ideal membership.
EndpointCluster classify_cluster(EndpointCluster cluster, const PolySystem& square_sys, const PolySystem& ideal_gens,
                                 const ClassifyConfig& cfg);

std::vector<EndpointCluster> classify_clusters(std::vector<EndpointCluster> clusters, const PolySystem& square_sys,
                                               const PolySystem& ideal_gens, const ClassifyConfig& cfg,
                                               SolveOptions opts = {});

// Sum of multiplicities over isolated_S clusters. AssumptionViolation on junk clusters,
// NumericalFailure on unresolved ones; both name the offending representatives.
int total_residual_multiplicity(std::span<const EndpointCluster> clusters);

}  // namespace chernum
