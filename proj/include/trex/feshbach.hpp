#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "trex/graph.hpp"
#include "trex/spectral.hpp"

namespace trex {

inline constexpr double kWeakCouplingCap = 1.0;    // hard error on delta*kappa
inline constexpr double kWeakCouplingWarn = 0.25;  // warning threshold
inline constexpr double kStrongInverseFloor = 10.0;
inline constexpr double kLiftResidualTolFactor = 1e-8;  // of ||H||

/// Orthonormal basis of the unperturbed eigenspace the reduction projects
/// onto, together with its eigenvalue.
struct ProjectionSplit {
  Eigen::MatrixXd p0_basis;  // n x d, orthonormal columns
  double lambda0 = 0.0;

  int dim() const noexcept { return static_cast<int>(p0_basis.cols()); }
  int full_dim() const noexcept { return static_cast<int>(p0_basis.rows()); }
};

/// Validates orthonormality and that every column is an H0-eigenvector for a
/// common eigenvalue (within 1e-9 of the matrix scale).
ProjectionSplit make_split(const Eigen::MatrixXd& H0, Eigen::MatrixXd basis);

/// Split onto the pendant pair of an attachment: P0 = span{|a>, |b>}.
ProjectionSplit pendant_split(int full_order);

/// F(lambda) = lambda0 I + delta W_P0 + delta^2 W01 (lambda - H_P1)^{-1} W10
/// expressed in the p0 basis.  Requires W block-off-diagonal (W00 = W11 = 0)
/// and lambda0 = 0.
Eigen::MatrixXd feshbach_map(const Eigen::MatrixXd& H0, const Eigen::MatrixXd& W, double delta,
                             const ProjectionSplit& split, double lam);

/// [H + H P1 (lambda - H_P1)^{-1} P1 H]_P0 — the assumption-free form used to
/// check fixed points of arbitrary splits.
Eigen::MatrixXd feshbach_map_general(const Eigen::MatrixXd& H, const ProjectionSplit& split,
                                     double lam);

/// Q(lambda) psi = psi + delta P1 (lambda - H_P1)^{-1} W10 psi.
Eigen::VectorXd lift_eigvec(const Eigen::MatrixXd& H0, const Eigen::MatrixXd& W, double delta,
                            const ProjectionSplit& split, double lam, const Eigen::VectorXd& psi);

/// For each eigenpair of H whose P0 overlap exceeds 1/2, the residual
/// ||F(zeta) psi - zeta psi|| of the projected, renormalized eigenvector.
std::vector<std::pair<double, double>> fixed_point_residuals(const Eigen::MatrixXd& H,
                                                             const ProjectionSplit& split);

/// lambda0 + delta * spec(M), M = W_P0 + delta [W01 R(lambda0, H0_P1) W10].
Eigen::VectorXd second_order_eigenvalues(const Eigen::MatrixXd& H0, const Eigen::MatrixXd& W,
                                         double delta, const ProjectionSplit& split);

/// Windowed sup over B_eta(0) of |R_aa - R_bb| / |R_ab| (the cospectrality
/// ratio).  Samples is the number of equispaced points; odd counts include 0.
double gamma_cospectrality(const SpectralData& base, int alpha, int beta, double eta,
                           int samples);

/// Pendant-edge coupling: base graph, attachment vertices, coupling delta.
/// The assembled Hamiltonian is H0 (+) O_2 plus delta on (a,alpha), (b,beta).
struct TrexAttachment {
  WeightedGraph base;
  int alpha = 0, beta = 0;  // 1-based vertices of the base
  double delta = 0.0;
  int pendant_a = 0, pendant_b = 0;  // 1-based vertices of the assembled graph
};

TrexAttachment make_trex(WeightedGraph base, int alpha, int beta, double delta);
WeightedGraph assemble(const TrexAttachment& att);

/// Small reduced Hamiltonian with its derived quantities.  The 2x2 route
/// stores the traceless (diagonal-shifted) matrix; predicted_fidelity is
/// 1/sqrt(1+gamma^2).
struct EffectiveHamiltonian {
  Eigen::MatrixXd matrix;
  double gamma = 0.0;
  double omega0 = 0.0;
  double predicted_time = 0.0;
  double predicted_fidelity = 0.0;
  std::vector<std::string> warnings;
};

/// 2x2 reduction of a nonsingular-base attachment.  Hard error when
/// delta*kappa >= 1; warnings above 0.25 and when the inverse-entry floor
/// 10 delta^2 kappa^3 is not met.
EffectiveHamiltonian trex_effective(const TrexAttachment& att);

std::string effective_to_json(const EffectiveHamiltonian& eff);

}  // namespace trex
