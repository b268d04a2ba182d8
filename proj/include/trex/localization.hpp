#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "trex/protocols.hpp"

namespace trex {

/// Diagonal disorder model.  Sampling is bit-level deterministic in
/// (kind, scale, seed) across platforms: variates are derived from
/// std::mt19937_64 by fixed transforms rather than distribution objects.
struct NoiseModel {
  enum class Kind { cauchy, uniform, none };
  Kind kind = Kind::none;
  double scale = 0.0;  // Cauchy scale parameter, or uniform half-width
  std::uint64_t seed = 0;
};

NoiseModel parse_noise(const std::string& spec, std::uint64_t seed);  // "cauchy:0.06" etc.
std::string noise_to_string(const NoiseModel& model);

Eigen::VectorXd sample_disorder(const NoiseModel& model, int n);

/// Disordered Jacobi core of order n+2: the clean chain is normalized to
/// spectral norm 1 before the middle n diagonal entries receive disorder.
/// The control loop B on the first core vertex is applied per call.
struct ProtectedChain {
  Eigen::MatrixXd core;  // order n+2, disorder applied, no control loop
  int n = 0;
  double delta = 0.0;  // pendant weight
};

ProtectedChain make_protected_chain(int n, const NoiseModel& model, double delta);

/// Signed cospectrality functional (<a|H^-1|a> - <b|H^-1|b>) / <a|H^-1|b>
/// of the core with loop B at a.
double epsilon_of_B(const ProtectedChain& chain, double B);

/// Root of the affine map B -> epsilon(B) from the evaluations at 0 and 1.
double calibrate_B(const ProtectedChain& chain);

/// |epsilon| estimated from a transfer experiment at loop weight B:
/// 2*sqrt(1/f^2 - 1) of the measured peak.
double estimate_epsilon_magnitude(const ProtectedChain& chain, double B,
                                  double horizon_factor = kDefaultHorizonFactor);

/// Experimental-mode calibration from |epsilon| probes at B = 0, 1, 1/2;
/// the midpoint probe resolves the relative sign.
double calibrate_B_experimental(const ProtectedChain& chain,
                                double horizon_factor = kDefaultHorizonFactor);

struct AndersonResult {
  double b_star = 0.0;
  TransferReport report;
};

/// Full protocol: sample disorder, calibrate B*, assemble the (n+4)-chain
/// with pendants of weight delta, simulate antipodal transfer.
/// forced_B overrides the calibrated loop weight (used by controls).
AndersonResult anderson_experiment(int n, const NoiseModel& model, double delta,
                                   double horizon_factor = kDefaultHorizonFactor,
                                   std::optional<double> forced_B = std::nullopt,
                                   int grid_points = kDefaultGridPoints);

/// Negative control: bare disordered chain of order n (disorder on every
/// site, no pendants, no loop); antipodal peak over [0, horizon].
double localization_baseline(int n, const NoiseModel& model, double horizon,
                             int grid_points = kDefaultGridPoints);

struct AndersonRow {
  std::uint64_t seed = 0;
  double b_star = 0.0;
  double peak_time = 0.0;
  double peak_fidelity = 0.0;
  double baseline_fidelity = 0.0;
};

/// Seed sweep; seeds are independent jobs and the parallel schedule matches
/// the serial one bit for bit.
std::vector<AndersonRow> anderson_sweep(int n, NoiseModel::Kind kind, double scale, double delta,
                                        double horizon_factor, std::uint64_t seed0, int num_seeds,
                                        double baseline_horizon);
std::vector<AndersonRow> anderson_sweep_serial(int n, NoiseModel::Kind kind, double scale,
                                               double delta, double horizon_factor,
                                               std::uint64_t seed0, int num_seeds,
                                               double baseline_horizon);

double median(std::vector<double> values);

}  // namespace trex
