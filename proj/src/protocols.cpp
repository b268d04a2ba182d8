#include "trex/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <sstream>

namespace trex {

namespace {

/// |<last| exp(-i h t) |first>| for a small effective Hamiltonian.
class SmallAmplitude {
 public:
  explicit SmallAmplitude(const Eigen::MatrixXd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    lambda_ = solver.eigenvalues();
    const int last = static_cast<int>(h.rows()) - 1;
    coeff_ = (solver.eigenvectors().row(0).array() * solver.eigenvectors().row(last).array())
                 .matrix();
  }

  double operator()(double t) const {
    std::complex<double> amp{0.0, 0.0};
    for (int k = 0; k < lambda_.size(); ++k) {
      const double phi = -lambda_(k) * t;
      amp += coeff_(k) * std::complex<double>(std::cos(phi), std::sin(phi));
    }
    return std::abs(amp);
  }

 private:
  Eigen::VectorXd lambda_;
  Eigen::VectorXd coeff_;
};

TransferReport simulate(const WeightedGraph& full, int a, int b, EffectiveHamiltonian eff,
                        TransferRoute route, double horizon_factor, int grid_points) {
  TransferReport report;
  report.route = route;
  report.predicted_time = eff.predicted_time;
  report.predicted_fidelity = eff.predicted_fidelity;
  const SpectralData sd = eigendecompose(full.matrix());
  // degeneracy of the split eigenvalues would break the two-level picture
  const int d = static_cast<int>(eff.matrix.rows());
  std::vector<double> nearest(sd.eigenvalues.data(), sd.eigenvalues.data() + sd.order());
  std::sort(nearest.begin(), nearest.end(),
            [](double x, double y) { return std::abs(x) < std::abs(y); });
  nearest.resize(std::min<size_t>(d, nearest.size()));
  std::sort(nearest.begin(), nearest.end());
  double split_gap = std::numeric_limits<double>::infinity();
  for (size_t k = 1; k < nearest.size(); ++k)
    split_gap = std::min(split_gap, nearest[k] - nearest[k - 1]);
  if (split_gap < 1e-12)
    eff.warnings.push_back("SplitGapDegenerate: |zeta_1 - zeta_2| = " + format_g17(split_gap));
  const Eigen::VectorXd grid =
      linspace(0.0, horizon_factor * eff.predicted_time, std::max(grid_points, 2));
  report.trace = fidelity_trace(sd, a, b, grid);
  report.measured_peak_time = report.trace.peak_time;
  report.measured_peak_fidelity = report.trace.peak_value;
  report.time_ratio = report.measured_peak_time / report.predicted_time;
  report.effective = std::move(eff);
  return report;
}

}  // namespace

ResonantSetup make_resonant(WeightedGraph base, int alpha, int beta, double eps) {
  base.check_vertex(alpha);
  base.check_vertex(beta);
  if (alpha == beta) fail(errc::invalid_parameters, "attachment vertices must differ");
  if (!(eps > 0.0)) fail(errc::invalid_weight, "eps must be positive");
  const SpectralData sd = eigendecompose(base.matrix());
  const double ztol = kSingularTolFactor * std::max(1.0, sd.source_norm);
  int kernel_index = -1;
  int kernel_count = 0;
  double gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < sd.order(); ++k) {
    if (std::abs(sd.eigenvalues(k)) <= ztol) {
      kernel_index = k;
      ++kernel_count;
    } else {
      gap = std::min(gap, std::abs(sd.eigenvalues(k)));
    }
  }
  if (kernel_count != 1)
    fail(errc::degenerate_kernel,
         "zero is not a simple eigenvalue (multiplicity " + std::to_string(kernel_count) + ")");
  Eigen::VectorXd rho = sd.eigenvectors.col(kernel_index);
  int imax = 0;
  rho.cwiseAbs().maxCoeff(&imax);
  if (rho(imax) < 0.0) rho = -rho;  // deterministic sign
  if (std::abs(rho(alpha - 1)) < 1e-12)
    fail(errc::zero_overlap, "kernel vector has no weight on alpha");
  return ResonantSetup{std::move(base), std::move(rho), alpha, beta, eps, gap};
}

EffectiveHamiltonian resonant_effective(const ResonantSetup& setup) {
  const double c1 = setup.rho(setup.alpha - 1);
  const double c2 = setup.rho(setup.beta - 1);
  if (std::abs(c1) < 1e-12) fail(errc::zero_overlap, "kernel vector has no weight on alpha");
  EffectiveHamiltonian eff;
  if (std::abs(std::abs(c1) - std::abs(c2)) > 1e-9)
    eff.warnings.push_back("AsymmetricOverlap: |<alpha|rho>| = " + std::to_string(std::abs(c1)) +
                           ", |<beta|rho>| = " + std::to_string(std::abs(c2)));
  const double scale = setup.eps * setup.gap;
  eff.matrix = Eigen::MatrixXd::Zero(3, 3);
  eff.matrix(0, 1) = eff.matrix(1, 0) = scale * c1;
  eff.matrix(1, 2) = eff.matrix(2, 1) = scale * c2;
  const double s = std::hypot(c1, c2);
  eff.omega0 = s;
  eff.predicted_time = M_PI / (scale * s);
  const double s2 = c1 * c1 + c2 * c2;
  eff.predicted_fidelity = s2 > 0.0 ? 2.0 * std::abs(c1 * c2) / s2 : 0.0;
  eff.gamma = eff.predicted_fidelity > 0.0
                  ? std::sqrt(std::max(0.0, 1.0 / (eff.predicted_fidelity * eff.predicted_fidelity) - 1.0))
                  : std::numeric_limits<double>::infinity();
  return eff;
}

TransferReport run_resonant(const ResonantSetup& setup, double horizon_factor, int grid_points) {
  EffectiveHamiltonian eff = resonant_effective(setup);
  const double w = setup.eps * setup.gap;
  const WeightedGraph full =
      assemble(make_trex(setup.base, setup.alpha, setup.beta, w));
  return simulate(full, full.order() - 1, full.order(), std::move(eff), TransferRoute::resonant,
                  horizon_factor, grid_points);
}

TransferRoute dispatch_route(const SpectralData& base) {
  const double ztol = kSingularTolFactor * std::max(1.0, base.source_norm);
  return base.min_abs_eigenvalue() <= ztol ? TransferRoute::resonant : TransferRoute::feshbach;
}

TransferReport run_transfer(const TrexAttachment& att, double horizon_factor, bool force,
                            int grid_points) {
  const SpectralData base = eigendecompose(att.base.matrix());
  if (dispatch_route(base) == TransferRoute::resonant) {
    // pendant weight stays att.delta: eps = delta / gap.
    double gap = std::numeric_limits<double>::infinity();
    const double ztol = kSingularTolFactor * std::max(1.0, base.source_norm);
    for (int k = 0; k < base.order(); ++k)
      if (std::abs(base.eigenvalues(k)) > ztol) gap = std::min(gap, std::abs(base.eigenvalues(k)));
    const ResonantSetup setup = make_resonant(att.base, att.alpha, att.beta, att.delta / gap);
    return run_resonant(setup, horizon_factor, grid_points);
  }
  EffectiveHamiltonian eff = trex_effective(att);
  if (!force && !eff.warnings.empty()) {
    const std::string& w = eff.warnings.front();
    fail(w.find("InverseTooSmall") == 0 ? errc::inverse_too_small : errc::coupling_too_strong,
         w + " (pass force to proceed)");
  }
  const WeightedGraph full = assemble(att);
  return simulate(full, att.pendant_a, att.pendant_b, std::move(eff), TransferRoute::feshbach,
                  horizon_factor, grid_points);
}

double effective_vs_full(const TrexAttachment& att, const Eigen::VectorXd& grid, bool force) {
  const SpectralData base = eigendecompose(att.base.matrix());
  EffectiveHamiltonian eff;
  if (dispatch_route(base) == TransferRoute::resonant) {
    double gap = std::numeric_limits<double>::infinity();
    const double ztol = kSingularTolFactor * std::max(1.0, base.source_norm);
    for (int k = 0; k < base.order(); ++k)
      if (std::abs(base.eigenvalues(k)) > ztol) gap = std::min(gap, std::abs(base.eigenvalues(k)));
    eff = resonant_effective(make_resonant(att.base, att.alpha, att.beta, att.delta / gap));
  } else {
    eff = trex_effective(att);
    if (!force && !eff.warnings.empty())
      fail(errc::coupling_too_strong, eff.warnings.front() + " (pass force to proceed)");
  }
  const WeightedGraph full = assemble(att);
  const SpectralData sd = eigendecompose(full.matrix());
  const TransferAmplitude amp_full(sd, att.pendant_a, att.pendant_b);
  const SmallAmplitude amp_eff(eff.matrix);
  double worst = 0.0;
  for (int i = 0; i < grid.size(); ++i)
    worst = std::max(worst, std::abs(amp_full(grid(i)) - amp_eff(grid(i))));
  return worst;
}

std::pair<double, double> strong_potential_bounds(int m, int d, int c, double eps) {
  if (m < 1 || d < 1 || c < d || !(eps > 0.0) || !(eps < 1.0))
    fail(errc::invalid_parameters, "need m >= 1, d >= 1, c >= d, eps in (0,1)");
  const double alpha = std::min(2.0, static_cast<double>(c - d + 1));
  const double beta = std::max(0.5, static_cast<double>(d) / (c - d + 1));
  const double q = 16.0 / std::pow(eps, 1.0 / alpha) * std::pow(m, 1.0 + beta);
  const double t0 = 2.0 * M_PI * std::pow(q + m, d - 1.0);
  return {q, t0};
}

std::string report_csv_row(const std::string& family, int size, double delta,
                           const TransferReport& report) {
  std::ostringstream os;
  os << family << "," << size << "," << format_g17(delta) << ","
     << format_g17(report.predicted_time) << "," << format_g17(report.measured_peak_time) << ","
     << format_g17(report.predicted_fidelity) << ","
     << format_g17(report.measured_peak_fidelity);
  return os.str();
}

std::string report_to_json(const TransferReport& report) {
  nlohmann::json j;
  j["route"] = report.route == TransferRoute::feshbach ? "feshbach" : "resonant";
  j["predicted_time"] = report.predicted_time;
  j["predicted_fidelity"] = report.predicted_fidelity;
  j["measured_peak_time"] = report.measured_peak_time;
  j["measured_peak_fidelity"] = report.measured_peak_fidelity;
  j["time_ratio"] = report.time_ratio;
  j["effective"] = nlohmann::json::parse(effective_to_json(report.effective));
  return j.dump();
}

}  // namespace trex
