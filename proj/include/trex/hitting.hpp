#pragma once

#include <cstdint>
#include <vector>

#include "trex/feshbach.hpp"
#include "trex/graph.hpp"
#include "trex/protocols.hpp"

namespace trex {

inline constexpr double kDefaultRhoThreshold = 0.9;

/// Exact expected hitting times E_a[T_b] of the weight-proportional random
/// walk, one linear solve per target column.  Row = start, column = target.
Eigen::MatrixXd expected_hitting_times(const WeightedGraph& g);

/// tau_0 = sum_{a,b} pi_a pi_b E_a[T_b], pi degree-proportional.
double average_hitting_time(const WeightedGraph& g);

/// tau* = max_{a,b} (E_a[T_b] + E_b[T_a]).
double max_commute_time(const WeightedGraph& g);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t walks = 0;
};

/// Monte Carlo oracle for E_a[T_b]; per-walk generators keyed on
/// (seed, walk index), so the parallel kernel matches the serial one exactly.
McEstimate mc_hitting_time(const WeightedGraph& g, int a, int b, std::int64_t walks,
                           std::uint64_t seed);
McEstimate mc_hitting_time_serial(const WeightedGraph& g, int a, int b, std::int64_t walks,
                                  std::uint64_t seed);

/// Smallest t with f^2(t) >= rho between the attachment's pendants, scanning
/// up to horizon_factor times the route's predicted time; +infinity when the
/// threshold is never reached.
double quantum_hitting_time(const TrexAttachment& att, double rho_threshold,
                            double horizon_factor = kDefaultHorizonFactor,
                            int grid_points = kDefaultGridPoints);

/// Same crossing search on a bare graph over an explicit horizon.
double quantum_hitting_time_bare(const WeightedGraph& g, int a, int b, double rho_threshold,
                                 double horizon, int grid_points = kDefaultGridPoints);

/// How the pendant weight is chosen for a family sweep: a fixed weight, or a
/// fixed dimensionless eps with weight eps * (spectral gap at zero).
struct DeltaRule {
  enum class Kind { pendant, eps };
  Kind kind = Kind::pendant;
  double value = 0.0;
};

DeltaRule default_delta_rule(FamilyKind family);
std::vector<int> default_scaling_sizes(FamilyKind family);

/// Transfer chain a family's hitting experiment runs on (the graph itself or
/// its quotient in the scaling the asymptotics are stated for), endpoints,
/// route, pendant weight and the route's predicted time.
struct HittingSetup {
  Eigen::MatrixXd chain;
  int a = 0, b = 0;  // 1-based
  TransferRoute route = TransferRoute::feshbach;
  bool bare = false;  // hypercube: native antipodal transfer, no pendants
  double pendant = 0.0;
  double predicted_time = 0.0;
};

HittingSetup hitting_setup(FamilyKind family, int size, const DeltaRule& rule);

/// tau_Q for one family instance under the rule.
double family_quantum_hitting_time(FamilyKind family, int size, const DeltaRule& rule,
                                   double rho_threshold,
                                   double horizon_factor = kDefaultHorizonFactor);

struct ScalingPoint {
  int size = 0;
  double tau_q = 0.0;
  double predicted = 0.0;
};

struct ScalingFitResult {
  FamilyKind family = FamilyKind::path;
  double slope = 0.0;
  double residual = 0.0;  // root mean square residual of the log-log fit
  std::vector<ScalingPoint> points;
};

/// Least-squares slope of log tau_Q against log N.
ScalingFitResult scaling_fit(FamilyKind family, const std::vector<int>& sizes,
                             const DeltaRule& rule, double rho_threshold,
                             double horizon_factor = kDefaultHorizonFactor);

struct SearchResult {
  bool success = false;
  double time = 0.0;
};

/// Pendant-edge oracle search: pendants of weight delta at the oracle and
/// probe vertices, pendant-to-pendant walk.  Equal placement is a trivial
/// success at time zero.
SearchResult edge_oracle_search(const WeightedGraph& g, int oracle_v, int probe_v, double delta,
                                double rho_threshold,
                                double horizon_factor = kDefaultHorizonFactor);

}  // namespace trex
