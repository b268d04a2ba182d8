#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "trex/errors.hpp"

namespace trex {

inline constexpr double kSingularTolFactor = 1e-10;   // of the spectral norm
inline constexpr double kResolventTolFactor = 1e-8;   // of the spectral norm
inline constexpr double kPeakRefineRelTol = 1e-6;     // relative time tolerance

/// Eigen-decomposition of a symmetric real matrix, eigenvalues ascending.
struct SpectralData {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // orthonormal columns
  double source_norm = 0.0;      // spectral norm of the decomposed matrix

  int order() const noexcept { return static_cast<int>(eigenvalues.size()); }
  double min_abs_eigenvalue() const { return eigenvalues.cwiseAbs().minCoeff(); }
  /// Distance from zeta to the spectrum.
  double spectrum_distance(double zeta) const {
    return (eigenvalues.array() - zeta).abs().minCoeff();
  }
};

SpectralData eigendecompose(const Eigen::MatrixXd& H);

/// H / ||H|| and the spectral norm.  Output has unit spectral norm.
std::pair<Eigen::MatrixXd, double> normalize(const Eigen::MatrixXd& H);

/// lambda_max / lambda_min of absolute eigenvalues.
double condition_number(const SpectralData& sd);

/// exp(-iHt) state, computed spectrally.
Eigen::VectorXcd propagate(const SpectralData& sd, const Eigen::VectorXcd& state, double t);

/// <u| (zeta I - H)^{-1} |v>, spectral sum.  Rejects zeta near the spectrum.
double resolvent_entry(const SpectralData& sd, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& v, double zeta);
double resolvent_entry(const SpectralData& sd, int u, int v, double zeta);  // vertices, 1-based
Eigen::MatrixXd resolvent(const SpectralData& sd, double zeta);

struct FidelityTrace {
  Eigen::VectorXd times;
  Eigen::VectorXd values;  // |<b| exp(-iHt) |a>|
  double peak_time = 0.0;
  double peak_value = 0.0;
};

/// Transfer amplitude magnitude t -> |<b| exp(-iHt) |a>| for one vertex pair,
/// with the spectral overlaps precomputed.
class TransferAmplitude {
 public:
  TransferAmplitude(const SpectralData& sd, int a, int b);  // 1-based

  double operator()(double t) const;

 private:
  Eigen::VectorXd lambda_;
  Eigen::VectorXd coeff_;  // V(a,k) V(b,k)
};

/// Grid evaluation plus golden-section refinement of the bracketed peak.
/// The parallel version distributes grid points across OpenMP threads and is
/// numerically identical to the serial reference.
FidelityTrace fidelity_trace(const SpectralData& sd, int a, int b, const Eigen::VectorXd& grid);
FidelityTrace fidelity_trace_serial(const SpectralData& sd, int a, int b,
                                    const Eigen::VectorXd& grid);

double fidelity_at(const SpectralData& sd, int a, int b, double t);

Eigen::VectorXd linspace(double lo, double hi, int n);

/// Golden-section maximization of f on [lo, hi]; returns (t*, f(t*)).
std::pair<double, double> refine_peak(const TransferAmplitude& f, double lo, double hi);

/// CSV with `t,fidelity` rows at 17 significant digits and peak metadata in
/// trailing comment lines.  The optional config block is emitted first.
void write_trace_csv(std::ostream& os, const FidelityTrace& trace,
                     const std::vector<std::pair<std::string, std::string>>& config = {});

std::string format_g17(double x);

}  // namespace trex
