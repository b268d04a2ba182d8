#include "trex/feshbach.hpp"

#include <cmath>
#include <json.hpp>

namespace trex {

namespace {

/// Orthonormal basis of the complement of split.p0_basis.
Eigen::MatrixXd complement_basis(const ProjectionSplit& split) {
  const int n = split.full_dim(), d = split.dim();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(split.p0_basis);
  const Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(n - d);
}

struct Blocks {
  Eigen::MatrixXd q1;   // n x (n-d)
  Eigen::MatrixXd h11;  // restriction of H to ran(P1)
  Eigen::PartialPivLU<Eigen::MatrixXd> shifted;  // lam I - h11 (symmetric indefinite)
};

Blocks restrict_blocks(const Eigen::MatrixXd& H, const ProjectionSplit& split, double lam) {
  Blocks b;
  b.q1 = complement_basis(split);
  b.h11 = b.q1.transpose() * H * b.q1;
  const SpectralData sd = eigendecompose(b.h11);
  if (sd.spectrum_distance(lam) <= kResolventTolFactor * std::max(1.0, sd.source_norm))
    fail(errc::singular_restriction,
         "lambda is within tolerance of the spectrum of the restricted block");
  const int m = static_cast<int>(b.h11.rows());
  b.shifted.compute(lam * Eigen::MatrixXd::Identity(m, m) - b.h11);
  return b;
}

}  // namespace

ProjectionSplit make_split(const Eigen::MatrixXd& H0, Eigen::MatrixXd basis) {
  if (basis.rows() != H0.rows() || basis.cols() < 1 || basis.cols() > basis.rows())
    fail(errc::dimension_mismatch, "split basis shape is invalid");
  const int d = static_cast<int>(basis.cols());
  const Eigen::MatrixXd gram = basis.transpose() * basis;
  if ((gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
    fail(errc::invalid_parameters, "split basis is not orthonormal");
  const double scale = std::max(1.0, H0.cwiseAbs().maxCoeff());
  double lambda0 = 0.0;
  for (int k = 0; k < d; ++k) lambda0 += basis.col(k).dot(H0 * basis.col(k));
  lambda0 /= d;
  for (int k = 0; k < d; ++k) {
    const double resid = (H0 * basis.col(k) - lambda0 * basis.col(k)).norm();
    if (resid > 1e-9 * scale)
      fail(errc::invalid_parameters,
           "split column " + std::to_string(k + 1) + " is not an eigenvector for lambda0");
  }
  return ProjectionSplit{std::move(basis), lambda0};
}

ProjectionSplit pendant_split(int full_order) {
  if (full_order < 3) fail(errc::invalid_parameters, "assembled order must be >= 3");
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(full_order, 2);
  basis(full_order - 2, 0) = 1.0;
  basis(full_order - 1, 1) = 1.0;
  return ProjectionSplit{std::move(basis), 0.0};
}

Eigen::MatrixXd feshbach_map(const Eigen::MatrixXd& H0, const Eigen::MatrixXd& W, double delta,
                             const ProjectionSplit& split, double lam) {
  const int n = split.full_dim(), d = split.dim();
  if (H0.rows() != n || W.rows() != n || W.cols() != n)
    fail(errc::dimension_mismatch, "operator dimensions do not match the split");
  const Eigen::MatrixXd q1 = complement_basis(split);
  const Eigen::MatrixXd w00 = split.p0_basis.transpose() * W * split.p0_basis;
  const Eigen::MatrixXd w11 = q1.transpose() * W * q1;
  const double wscale = std::max(1.0, W.cwiseAbs().maxCoeff());
  if (w00.cwiseAbs().maxCoeff() > 1e-12 * wscale)
    fail(errc::assumption_violated, "B(i) fails: W00 is nonzero");
  if (w11.cwiseAbs().maxCoeff() > 1e-12 * wscale)
    fail(errc::assumption_violated, "B(i) fails: W11 is nonzero");
  if (std::abs(split.lambda0) > 1e-12 * std::max(1.0, H0.cwiseAbs().maxCoeff()))
    fail(errc::assumption_violated, "B(ii) fails: lambda0 has not been shifted to zero");
  const Blocks blk = restrict_blocks(H0 + delta * W, split, lam);
  const Eigen::MatrixXd w10 = blk.q1.transpose() * W * split.p0_basis;
  return split.lambda0 * Eigen::MatrixXd::Identity(d, d) + delta * w00 +
         delta * delta * w10.transpose() * blk.shifted.solve(w10);
}

Eigen::MatrixXd feshbach_map_general(const Eigen::MatrixXd& H, const ProjectionSplit& split,
                                     double lam) {
  if (H.rows() != split.full_dim())
    fail(errc::dimension_mismatch, "operator dimensions do not match the split");
  const Blocks blk = restrict_blocks(H, split, lam);
  const Eigen::MatrixXd h10 = blk.q1.transpose() * H * split.p0_basis;
  return split.p0_basis.transpose() * H * split.p0_basis +
         h10.transpose() * blk.shifted.solve(h10);
}

Eigen::VectorXd lift_eigvec(const Eigen::MatrixXd& H0, const Eigen::MatrixXd& W, double delta,
                            const ProjectionSplit& split, double lam, const Eigen::VectorXd& psi) {
  if (psi.size() != split.dim())
    fail(errc::dimension_mismatch, "psi must live in the projected space");
  const Blocks blk = restrict_blocks(H0 + delta * W, split, lam);
  const Eigen::MatrixXd w10 = blk.q1.transpose() * W * split.p0_basis;
  return split.p0_basis * psi + delta * blk.q1 * blk.shifted.solve(w10 * psi);
}

std::vector<std::pair<double, double>> fixed_point_residuals(const Eigen::MatrixXd& H,
                                                             const ProjectionSplit& split) {
  const SpectralData sd = eigendecompose(H);
  std::vector<std::pair<double, double>> out;
  for (int k = 0; k < sd.order(); ++k) {
    const Eigen::VectorXd psi0 = split.p0_basis.transpose() * sd.eigenvectors.col(k);
    if (psi0.squaredNorm() <= 0.5) continue;
    const Eigen::VectorXd psi = psi0.normalized();
    const double zeta = sd.eigenvalues(k);
    const Eigen::MatrixXd f = feshbach_map_general(H, split, zeta);
    out.emplace_back(zeta, (f * psi - zeta * psi).norm());
  }
  return out;
}

Eigen::VectorXd second_order_eigenvalues(const Eigen::MatrixXd& H0, const Eigen::MatrixXd& W,
                                         double delta, const ProjectionSplit& split) {
  const Blocks blk = restrict_blocks(H0, split, split.lambda0);
  const Eigen::MatrixXd w10 = blk.q1.transpose() * W * split.p0_basis;
  const Eigen::MatrixXd m = split.p0_basis.transpose() * W * split.p0_basis +
                            delta * w10.transpose() * blk.shifted.solve(w10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver((m + m.transpose()) / 2.0);
  return (split.lambda0 + delta * solver.eigenvalues().array()).matrix();
}

double gamma_cospectrality(const SpectralData& base, int alpha, int beta, double eta,
                           int samples) {
  if (samples < 3) fail(errc::invalid_parameters, "need at least 3 window samples");
  if (alpha < 1 || alpha > base.order() || beta < 1 || beta > base.order())
    fail(errc::invalid_vertex, "attachment vertex out of range");
  const double gap = base.min_abs_eigenvalue();
  if (eta >= gap)
    fail(errc::window_on_spectrum, "window radius reaches the spectrum of the base");
  double worst = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double lam = -eta + 2.0 * eta * j / (samples - 1);
    const double raa = resolvent_entry(base, alpha, alpha, lam);
    const double rbb = resolvent_entry(base, beta, beta, lam);
    const double rab = resolvent_entry(base, alpha, beta, lam);
    if (std::abs(rab) < 1e-14)
      fail(errc::zero_cross_coupling, "cross resolvent entry vanishes in the window");
    worst = std::max(worst, std::abs(raa - rbb) / std::abs(rab));
  }
  return worst;
}

TrexAttachment make_trex(WeightedGraph base, int alpha, int beta, double delta) {
  base.check_vertex(alpha);
  base.check_vertex(beta);
  if (alpha == beta) fail(errc::invalid_parameters, "attachment vertices must differ");
  if (!(delta > 0.0)) fail(errc::invalid_weight, "coupling delta must be positive");
  const int n = base.order();
  return TrexAttachment{std::move(base), alpha, beta, delta, n + 1, n + 2};
}

WeightedGraph assemble(const TrexAttachment& att) {
  const int n = att.base.order();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n + 2, n + 2);
  h.topLeftCorner(n, n) = att.base.matrix();
  h(n, att.alpha - 1) = h(att.alpha - 1, n) = att.delta;
  h(n + 1, att.beta - 1) = h(att.beta - 1, n + 1) = att.delta;
  return WeightedGraph(std::move(h));
}

EffectiveHamiltonian trex_effective(const TrexAttachment& att) {
  const SpectralData base = eigendecompose(att.base.matrix());
  if (base.min_abs_eigenvalue() <= kSingularTolFactor * std::max(1.0, base.source_norm))
    fail(errc::singular_base, "base graph is singular; use the resonant route");
  const double kappa = condition_number(base);
  EffectiveHamiltonian eff;
  const double eps = att.delta * kappa;
  if (eps >= kWeakCouplingCap)
    fail(errc::coupling_too_strong,
         "delta*kappa = " + std::to_string(eps) + " >= " + std::to_string(kWeakCouplingCap));
  if (eps > kWeakCouplingWarn)
    eff.warnings.push_back("CouplingTooStrong: delta*kappa = " + std::to_string(eps) +
                           " exceeds " + std::to_string(kWeakCouplingWarn));
  const double raa = resolvent_entry(base, att.alpha, att.alpha, 0.0);
  const double rbb = resolvent_entry(base, att.beta, att.beta, 0.0);
  const double rab = resolvent_entry(base, att.alpha, att.beta, 0.0);
  if (std::abs(rab) < 1e-14)
    fail(errc::zero_cross_coupling, "cross resolvent entry vanishes at zero");
  eff.omega0 = std::abs(rab);
  const double floor = kStrongInverseFloor * att.delta * att.delta * kappa * kappa * kappa;
  if (eff.omega0 < floor)
    eff.warnings.push_back("InverseTooSmall: |<alpha|A^-1|beta>| = " + std::to_string(eff.omega0) +
                           " below 10 delta^2 kappa^3 = " + std::to_string(floor));
  const double eta = base.min_abs_eigenvalue() / 2.0;
  const double ratio = gamma_cospectrality(base, att.alpha, att.beta, eta, 11);
  eff.gamma = ratio / 2.0;
  const double d2 = att.delta * att.delta;
  eff.matrix.resize(2, 2);
  const double shift = (raa + rbb) / 2.0;
  eff.matrix << d2 * (raa - shift), d2 * rab, d2 * rab, d2 * (rbb - shift);
  eff.predicted_time = (M_PI / 2.0) / (d2 * eff.omega0);
  eff.predicted_fidelity = 1.0 / std::sqrt(1.0 + eff.gamma * eff.gamma);
  return eff;
}

std::string effective_to_json(const EffectiveHamiltonian& eff) {
  nlohmann::json j;
  j["gamma"] = eff.gamma;
  j["omega0"] = eff.omega0;
  j["predicted_time"] = eff.predicted_time;
  j["predicted_fidelity"] = eff.predicted_fidelity;
  nlohmann::json m = nlohmann::json::array();
  for (int r = 0; r < eff.matrix.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < eff.matrix.cols(); ++c) row.push_back(eff.matrix(r, c));
    m.push_back(std::move(row));
  }
  j["matrix"] = std::move(m);
  if (!eff.warnings.empty()) j["warnings"] = eff.warnings;
  return j.dump();
}

}  // namespace trex
