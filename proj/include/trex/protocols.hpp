#pragma once

#include <optional>

#include "trex/feshbach.hpp"
#include "trex/graph.hpp"
#include "trex/spectral.hpp"

namespace trex {

inline constexpr double kDefaultHorizonFactor = 1.5;
inline constexpr int kDefaultGridPoints = 2000;
inline constexpr double kFidelitySlack = 0.05;

/// Transfer route selected for an attachment: the 2x2 reduction for a
/// nonsingular base, the 3x3 resonant reduction when the base has a simple
/// kernel.
enum class TransferRoute { feshbach, resonant };

struct TransferReport {
  TransferRoute route = TransferRoute::feshbach;
  double predicted_time = 0.0;
  double predicted_fidelity = 0.0;
  double measured_peak_time = 0.0;
  double measured_peak_fidelity = 0.0;
  double time_ratio = 0.0;  // measured / predicted
  FidelityTrace trace;
  EffectiveHamiltonian effective;
};

/// Singular base with a simple kernel |rho>; pendants couple through the
/// kernel overlaps.  Pendant edge weight is eps * gap.
struct ResonantSetup {
  WeightedGraph base;
  Eigen::VectorXd rho;      // unit kernel vector
  int alpha = 0, beta = 0;  // 1-based
  double eps = 0.0;
  double gap = 0.0;  // min nonzero |eigenvalue|
};

ResonantSetup make_resonant(WeightedGraph base, int alpha, int beta, double eps);

/// eps*gap*tridiag(<alpha|rho>, <beta|rho>) in the {a, rho, b} basis.
/// Emits an AsymmetricOverlap warning when the overlap magnitudes differ.
EffectiveHamiltonian resonant_effective(const ResonantSetup& setup);

TransferReport run_resonant(const ResonantSetup& setup,
                            double horizon_factor = kDefaultHorizonFactor,
                            int grid_points = kDefaultGridPoints);

TransferRoute dispatch_route(const SpectralData& base);

/// Build -> predict -> simulate -> compare.  Routes on base singularity.
/// Warnings from the effective construction abort unless force is set.
TransferReport run_transfer(const TrexAttachment& att,
                            double horizon_factor = kDefaultHorizonFactor, bool force = false,
                            int grid_points = kDefaultGridPoints);

/// max over the grid of | |<b|e^{-itH}|a>| - |<b|e^{-ith}|a>| |.
double effective_vs_full(const TrexAttachment& att, const Eigen::VectorXd& grid,
                         bool force = true);

/// Loop-weight and time bounds of the strong-potential transfer scheme for
/// maximum degree m, distance d, cospectrality c and fidelity slack eps:
/// Q > 16 eps^{-1/alpha} m^{1+beta}, t0 < 2 pi (Q+m)^{d-1}.
std::pair<double, double> strong_potential_bounds(int m, int d, int c, double eps);

/// Report CSV row: family,N,delta,predicted_time,measured_time,
/// predicted_fidelity,measured_fidelity.
std::string report_csv_row(const std::string& family, int size, double delta,
                           const TransferReport& report);

std::string report_to_json(const TransferReport& report);

}  // namespace trex
