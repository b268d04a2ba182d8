#include "trex/spectral.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>

namespace trex {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

SpectralData eigendecompose(const Eigen::MatrixXd& H) {
  if (H.rows() != H.cols() || H.rows() < 1)
    fail(errc::dimension_mismatch, "matrix must be square");
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    fail(errc::not_symmetric, "matrix is not symmetric");
  const Eigen::MatrixXd sym = (H + H.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success)
    fail(errc::singular, "symmetric eigensolver failed to converge");
  SpectralData sd;
  sd.eigenvalues = solver.eigenvalues();
  sd.eigenvectors = solver.eigenvectors();
  sd.source_norm = sd.eigenvalues.cwiseAbs().maxCoeff();
  return sd;
}

std::pair<Eigen::MatrixXd, double> normalize(const Eigen::MatrixXd& H) {
  const SpectralData sd = eigendecompose(H);
  if (sd.source_norm == 0.0) fail(errc::zero_matrix, "cannot normalize the zero matrix");
  return {H / sd.source_norm, sd.source_norm};
}

double condition_number(const SpectralData& sd) {
  const double lo = sd.min_abs_eigenvalue();
  if (lo <= kSingularTolFactor * sd.source_norm)
    fail(errc::singular, "matrix is singular within tolerance");
  return sd.source_norm / lo;
}

Eigen::VectorXcd propagate(const SpectralData& sd, const Eigen::VectorXcd& state, double t) {
  if (state.size() != sd.order())
    fail(errc::dimension_mismatch, "state dimension does not match");
  const Eigen::VectorXcd phases =
      (-kI * t * sd.eigenvalues.array().cast<std::complex<double>>()).exp();
  const Eigen::VectorXcd coeffs = sd.eigenvectors.transpose().cast<std::complex<double>>() * state;
  return sd.eigenvectors.cast<std::complex<double>>() * phases.cwiseProduct(coeffs);
}

double resolvent_entry(const SpectralData& sd, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& v, double zeta) {
  if (u.size() != sd.order() || v.size() != sd.order())
    fail(errc::dimension_mismatch, "vector dimension does not match");
  if (sd.spectrum_distance(zeta) <= kResolventTolFactor * std::max(1.0, sd.source_norm))
    fail(errc::on_spectrum, "zeta is within tolerance of the spectrum");
  const Eigen::VectorXd cu = sd.eigenvectors.transpose() * u;
  const Eigen::VectorXd cv = sd.eigenvectors.transpose() * v;
  return (cu.array() * cv.array() / (zeta - sd.eigenvalues.array())).sum();
}

double resolvent_entry(const SpectralData& sd, int u, int v, double zeta) {
  if (u < 1 || u > sd.order() || v < 1 || v > sd.order())
    fail(errc::invalid_vertex, "resolvent vertex out of range");
  Eigen::VectorXd eu = Eigen::VectorXd::Zero(sd.order());
  Eigen::VectorXd ev = Eigen::VectorXd::Zero(sd.order());
  eu(u - 1) = 1.0;
  ev(v - 1) = 1.0;
  return resolvent_entry(sd, eu, ev, zeta);
}

Eigen::MatrixXd resolvent(const SpectralData& sd, double zeta) {
  if (sd.spectrum_distance(zeta) <= kResolventTolFactor * std::max(1.0, sd.source_norm))
    fail(errc::on_spectrum, "zeta is within tolerance of the spectrum");
  const Eigen::VectorXd inv = (zeta - sd.eigenvalues.array()).inverse();
  return sd.eigenvectors * inv.asDiagonal() * sd.eigenvectors.transpose();
}

TransferAmplitude::TransferAmplitude(const SpectralData& sd, int a, int b) {
  if (a < 1 || a > sd.order() || b < 1 || b > sd.order())
    fail(errc::invalid_vertex, "trace vertex out of range");
  lambda_ = sd.eigenvalues;
  coeff_ = (sd.eigenvectors.row(a - 1).array() * sd.eigenvectors.row(b - 1).array()).matrix();
}

double TransferAmplitude::operator()(double t) const {
  std::complex<double> amp{0.0, 0.0};
  const int n = static_cast<int>(lambda_.size());
  for (int k = 0; k < n; ++k) {
    const double phi = -lambda_(k) * t;
    amp += coeff_(k) * std::complex<double>(std::cos(phi), std::sin(phi));
  }
  return std::abs(amp);
}

Eigen::VectorXd linspace(double lo, double hi, int n) {
  if (n < 1) fail(errc::empty_grid, "grid needs at least one point");
  if (n == 1) return Eigen::VectorXd::Constant(1, lo);
  Eigen::VectorXd out(n);
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) out(i) = lo + step * i;
  return out;
}

std::pair<double, double> refine_peak(const TransferAmplitude& f, double lo, double hi) {
  constexpr double gr = 0.6180339887498949;  // (sqrt(5)-1)/2
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  const double tol = kPeakRefineRelTol * std::max(1.0, std::abs(hi));
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = f(x1);
    }
  }
  const double t = (lo + hi) / 2.0;
  return {t, f(t)};
}

namespace {

void validate_grid(const Eigen::VectorXd& grid) {
  if (grid.size() == 0) fail(errc::empty_grid, "time grid is empty");
  for (int i = 1; i < grid.size(); ++i)
    if (!(grid(i) > grid(i - 1)))
      fail(errc::invalid_parameters, "time grid must be strictly ascending");
}

FidelityTrace assemble_trace(const TransferAmplitude& amp, const Eigen::VectorXd& grid,
                             Eigen::VectorXd values) {
  FidelityTrace trace;
  trace.times = grid;
  trace.values = std::move(values);
  int imax = 0;
  trace.values.maxCoeff(&imax);
  trace.peak_time = trace.times(imax);
  trace.peak_value = trace.values(imax);
  if (grid.size() > 1) {
    const int lo_i = std::max(imax - 1, 0);
    const int hi_i = std::min<int>(imax + 1, static_cast<int>(grid.size()) - 1);
    auto [t, v] = refine_peak(amp, grid(lo_i), grid(hi_i));
    if (v >= trace.peak_value) {
      trace.peak_time = t;
      trace.peak_value = v;
    }
  }
  return trace;
}

}  // namespace

FidelityTrace fidelity_trace(const SpectralData& sd, int a, int b, const Eigen::VectorXd& grid) {
  validate_grid(grid);
  const TransferAmplitude amp(sd, a, b);
  Eigen::VectorXd values(grid.size());
  const std::ptrdiff_t n = grid.size();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) values(i) = amp(grid(i));
  return assemble_trace(amp, grid, std::move(values));
}

FidelityTrace fidelity_trace_serial(const SpectralData& sd, int a, int b,
                                    const Eigen::VectorXd& grid) {
  validate_grid(grid);
  const TransferAmplitude amp(sd, a, b);
  Eigen::VectorXd values(grid.size());
  for (std::ptrdiff_t i = 0; i < grid.size(); ++i) values(i) = amp(grid(i));
  return assemble_trace(amp, grid, std::move(values));
}

double fidelity_at(const SpectralData& sd, int a, int b, double t) {
  return TransferAmplitude(sd, a, b)(t);
}

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trace_csv(std::ostream& os, const FidelityTrace& trace,
                     const std::vector<std::pair<std::string, std::string>>& config) {
  for (const auto& [k, v] : config) os << "# " << k << "=" << v << "\n";
  os << "t,fidelity\n";
  for (int i = 0; i < trace.times.size(); ++i)
    os << format_g17(trace.times(i)) << "," << format_g17(trace.values(i)) << "\n";
  os << "# peak_time=" << format_g17(trace.peak_time) << "\n";
  os << "# peak_value=" << format_g17(trace.peak_value) << "\n";
}

}  // namespace trex
