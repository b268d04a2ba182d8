#include <doctest.h>

#include <cmath>

#include "trex/feshbach.hpp"
#include "trex/graph.hpp"

using namespace trex;

namespace {

struct Parts {
  Eigen::MatrixXd h0;  // base (+) O2
  Eigen::MatrixXd w;   // unit coupling pattern
  ProjectionSplit split;
};

/// H0 = base (+) O2 and unit W on (a,alpha), (b,beta); P0 = pendants.
Parts trex_parts(const WeightedGraph& base, int alpha, int beta) {
  const int n = base.order();
  Parts parts;
  parts.h0 = Eigen::MatrixXd::Zero(n + 2, n + 2);
  parts.h0.topLeftCorner(n, n) = base.matrix();
  parts.w = Eigen::MatrixXd::Zero(n + 2, n + 2);
  parts.w(n, alpha - 1) = parts.w(alpha - 1, n) = 1.0;
  parts.w(n + 1, beta - 1) = parts.w(beta - 1, n + 1) = 1.0;
  parts.split = pendant_split(n + 2);
  return parts;
}

/// P0 = span{|a>, |rho>, |b>} for a singular base with simple kernel.
Parts resonant_parts(const WeightedGraph& base, int alpha, int beta) {
  Parts parts = trex_parts(base, alpha, beta);
  const SpectralData sd = eigendecompose(base.matrix());
  int k0 = 0;
  sd.eigenvalues.cwiseAbs().minCoeff(&k0);
  const int n = base.order();
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n + 2, 3);
  basis(n, 0) = 1.0;
  basis.col(1).head(n) = sd.eigenvectors.col(k0);
  basis(n + 1, 2) = 1.0;
  parts.split = make_split(parts.h0, basis);
  return parts;
}

double slope_of(const std::vector<double>& xs, const std::vector<double>& ys) {
  const int n = static_cast<int>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(xs[i]), y = std::log(ys[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("feshbach map reduces to lambda0 at zero coupling") {
  const Parts parts = trex_parts(generate(FamilyKind::complete, 2), 1, 2);
  const Eigen::MatrixXd f = feshbach_map(parts.h0, parts.w, 0.0, parts.split, 0.37);
  CHECK(f.rows() == 2);
  CHECK(f.cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("feshbach map at zero equals the base resolvent block") {
  const WeightedGraph p4 = generate(FamilyKind::path, 4);
  const Parts parts = trex_parts(p4, 1, 4);
  const double delta = 0.05;
  const Eigen::MatrixXd f = feshbach_map(parts.h0, parts.w, delta, parts.split, 0.0);
  const SpectralData base = eigendecompose(p4.matrix());
  const double d2 = delta * delta;
  CHECK(f(0, 0) == doctest::Approx(d2 * resolvent_entry(base, 1, 1, 0.0)).epsilon(1e-10));
  CHECK(f(0, 1) == doctest::Approx(d2 * resolvent_entry(base, 1, 4, 0.0)).epsilon(1e-10));
  CHECK(f(1, 1) == doctest::Approx(d2 * resolvent_entry(base, 4, 4, 0.0)).epsilon(1e-10));
  CHECK(f(0, 1) == doctest::Approx(f(1, 0)));

  // K2 base: R(0) = -A^{-1} = -X, so F(0) = -delta^2 X.
  const Parts k2 = trex_parts(generate(FamilyKind::complete, 2), 1, 2);
  const Eigen::MatrixXd fk = feshbach_map(k2.h0, k2.w, delta, k2.split, 0.0);
  CHECK(fk(0, 0) == doctest::Approx(0.0));
  CHECK(fk(1, 1) == doctest::Approx(0.0));
  CHECK(std::abs(fk(0, 1)) == doctest::Approx(d2).epsilon(1e-12));
  CHECK(fk(0, 1) == doctest::Approx(-d2).epsilon(1e-12));
}

TEST_CASE("feshbach map rejects couplings acting inside the subspaces") {
  Parts parts = trex_parts(generate(FamilyKind::path, 4), 1, 4);
  parts.w(parts.w.rows() - 2, parts.w.rows() - 1) = 1.0;  // pendant-pendant term
  parts.w(parts.w.rows() - 1, parts.w.rows() - 2) = 1.0;
  CHECK_THROWS_AS(feshbach_map(parts.h0, parts.w, 0.1, parts.split, 0.0), error);
  try {
    feshbach_map(parts.h0, parts.w, 0.1, parts.split, 0.0);
  } catch (const error& e) {
    CHECK(e.code() == errc::assumption_violated);
  }
}

TEST_CASE("feshbach map rejects lambda on the restricted spectrum") {
  const Parts parts = trex_parts(generate(FamilyKind::path, 4), 1, 4);
  const double lam = eigendecompose(generate(FamilyKind::path, 4).matrix()).eigenvalues(0);
  CHECK_THROWS_AS(feshbach_map(parts.h0, parts.w, 0.05, parts.split, lam), error);
}

TEST_CASE("lift embeds at zero coupling and keeps the projected part") {
  const Parts parts = trex_parts(generate(FamilyKind::path, 4), 1, 4);
  Eigen::VectorXd psi(2);
  psi << std::sqrt(0.4), -std::sqrt(0.6);
  const Eigen::VectorXd lifted0 = lift_eigvec(parts.h0, parts.w, 0.0, parts.split, 0.1, psi);
  CHECK((lifted0 - parts.split.p0_basis * psi).norm() <= 1e-14);
  const Eigen::VectorXd lifted = lift_eigvec(parts.h0, parts.w, 0.05, parts.split, 0.01, psi);
  CHECK((parts.split.p0_basis.transpose() * lifted - psi).norm() <= 1e-14);
}

TEST_CASE("lifting a projected true eigenvector reproduces it") {
  const double delta = 0.1;
  const Parts parts = trex_parts(generate(FamilyKind::complete, 2), 1, 2);
  const Eigen::MatrixXd h = parts.h0 + delta * parts.w;
  const SpectralData sd = eigendecompose(h);
  const double hnorm = sd.source_norm;
  int checked = 0;
  for (int k = 0; k < sd.order(); ++k) {
    const Eigen::VectorXd proj = parts.split.p0_basis.transpose() * sd.eigenvectors.col(k);
    if (proj.squaredNorm() <= 0.5) continue;
    ++checked;
    const Eigen::VectorXd lifted =
        lift_eigvec(parts.h0, parts.w, delta, parts.split, sd.eigenvalues(k), proj.normalized());
    const Eigen::VectorXd residual = h * lifted - sd.eigenvalues(k) * lifted;
    CHECK(residual.norm() <= kLiftResidualTolFactor * std::max(1.0, hnorm) * lifted.norm());
  }
  CHECK(checked == 2);
}

TEST_CASE("fixed point residuals vanish for pendant attachments") {
  for (const auto& [base, delta] : std::vector<std::pair<WeightedGraph, double>>{
           {generate(FamilyKind::complete, 2), 0.1},
           {generate(FamilyKind::path, 4), 0.05}}) {
    const Parts parts = trex_parts(base, 1, base.order());
    const Eigen::MatrixXd h = parts.h0 + delta * parts.w;
    const auto residuals = fixed_point_residuals(h, parts.split);
    CHECK(residuals.size() == 2);
    for (const auto& [zeta, resid] : residuals) CHECK(resid <= 1e-9);
  }
}

TEST_CASE("fixed point residuals vanish for the resonant split") {
  const Parts parts = resonant_parts(quotient(FamilyKind::complete, 16), 1, 3);
  const Eigen::MatrixXd h = parts.h0 + 0.05 * parts.w;
  const auto residuals = fixed_point_residuals(h, parts.split);
  CHECK(residuals.size() == 3);
  for (const auto& [zeta, resid] : residuals) CHECK(resid <= 1e-9);
}

TEST_CASE("the feshbach map carries each split eigenvalue in its spectrum") {
  const double delta = 0.08;
  const Parts parts = trex_parts(generate(FamilyKind::path, 4), 1, 4);
  const Eigen::MatrixXd h = parts.h0 + delta * parts.w;
  const SpectralData sd = eigendecompose(h);
  for (int k = 0; k < sd.order(); ++k) {
    const Eigen::VectorXd proj = parts.split.p0_basis.transpose() * sd.eigenvectors.col(k);
    if (proj.squaredNorm() <= 0.5) continue;
    const double zeta = sd.eigenvalues(k);
    const Eigen::MatrixXd f = feshbach_map(parts.h0, parts.w, delta, parts.split, zeta);
    const Eigen::VectorXd eigs = eigendecompose(f).eigenvalues;
    CHECK((eigs.array() - zeta).abs().minCoeff() <= 1e-9);
  }
}

TEST_CASE("second order estimates: exchange base gives plus-minus delta squared") {
  const double delta = 0.05;
  const Parts parts = trex_parts(generate(FamilyKind::complete, 2), 1, 2);
  const Eigen::VectorXd est = second_order_eigenvalues(parts.h0, parts.w, delta, parts.split);
  CHECK(est.size() == 2);
  CHECK(est(0) == doctest::Approx(-delta * delta).epsilon(1e-12));
  CHECK(est(1) == doctest::Approx(delta * delta).epsilon(1e-12));
}

TEST_CASE("second order estimates respect the kappa bound") {
  for (const int n : {4, 6, 10}) {
    const WeightedGraph base = generate(FamilyKind::path, n);
    const double kappa = condition_number(eigendecompose(base.matrix()));
    const double delta = 0.04;
    const Parts parts = trex_parts(base, 1, n);
    const Eigen::VectorXd est = second_order_eigenvalues(parts.h0, parts.w, delta, parts.split);
    for (int i = 0; i < est.size(); ++i)
      CHECK(std::abs(est(i)) <= delta * delta * kappa + 1e-12);
  }
}

TEST_CASE("second order estimates err at cubic order in delta") {
  const std::vector<double> deltas{0.02, 0.04, 0.08};
  for (const auto& [base, alpha, beta, resonant] :
       std::vector<std::tuple<WeightedGraph, int, int, bool>>{
           {generate(FamilyKind::complete, 2), 1, 2, false},
           {generate(FamilyKind::path, 4), 1, 4, false},
           {generate(FamilyKind::path, 10), 1, 10, false},
           {quotient(FamilyKind::complete, 6), 1, 3, true},
           {quotient(FamilyKind::complete, 16), 1, 3, true}}) {
    const Parts parts = resonant ? resonant_parts(base, alpha, beta)
                                 : trex_parts(base, alpha, beta);
    std::vector<double> errs;
    for (const double delta : deltas) {
      const Eigen::VectorXd est =
          second_order_eigenvalues(parts.h0, parts.w, delta, parts.split);
      const SpectralData sd = eigendecompose((parts.h0 + delta * parts.w).eval());
      // the est.size() eigenvalues of H closest to zero, ascending
      std::vector<double> close(sd.eigenvalues.data(), sd.eigenvalues.data() + sd.order());
      std::sort(close.begin(), close.end(),
                [](double x, double y) { return std::abs(x) < std::abs(y); });
      close.resize(est.size());
      std::sort(close.begin(), close.end());
      double err = 0.0;
      for (int i = 0; i < est.size(); ++i) err = std::max(err, std::abs(est(i) - close[i]));
      errs.push_back(err);
    }
    CHECK(slope_of(deltas, errs) >= 2.5);
  }
}

TEST_CASE("gamma cospectrality vanishes on mirror-symmetric bases") {
  const SpectralData p4 = eigendecompose(generate(FamilyKind::path, 4).matrix());
  const double eta = p4.min_abs_eigenvalue() / 2.0;
  CHECK(gamma_cospectrality(p4, 1, 4, eta, 11) <= 1e-12);
  const SpectralData k2 = eigendecompose(generate(FamilyKind::complete, 2).matrix());
  CHECK(gamma_cospectrality(k2, 1, 2, 0.4, 11) <= 1e-12);
}

TEST_CASE("a loop breaks cospectrality") {
  const WeightedGraph tilted = add_loop(generate(FamilyKind::path, 4), 1, 0.3);
  const SpectralData sd = eigendecompose(tilted.matrix());
  const double eta = sd.min_abs_eigenvalue() / 2.0;
  const double ratio = gamma_cospectrality(sd, 1, 4, eta, 11);
  CHECK(ratio > 1e-3);
  // direct 4x4 inversion oracle at lambda = 0
  const Eigen::MatrixXd inv = (-tilted.matrix()).inverse();
  const double expected = std::abs(inv(0, 0) - inv(3, 3)) / std::abs(inv(0, 3));
  CHECK(ratio >= expected - 1e-9);
}

TEST_CASE("window errors") {
  const SpectralData p4 = eigendecompose(generate(FamilyKind::path, 4).matrix());
  CHECK_THROWS_AS(gamma_cospectrality(p4, 1, 4, 1.0, 11), error);
  try {
    gamma_cospectrality(p4, 1, 4, 1.0, 11);
  } catch (const error& e) {
    CHECK(e.code() == errc::window_on_spectrum);
  }
}

TEST_CASE("trex_effective on the two-site exchange") {
  const TrexAttachment att = make_trex(generate(FamilyKind::complete, 2), 1, 2, 0.1);
  const EffectiveHamiltonian eff = trex_effective(att);
  CHECK(eff.omega0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eff.gamma <= 1e-12);
  CHECK(eff.predicted_fidelity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eff.predicted_time == doctest::Approx(50.0 * M_PI).epsilon(1e-12));
  CHECK(eff.warnings.empty());
  // traceless and symmetric after the diagonal shift
  CHECK(std::abs(eff.matrix.trace()) <= 1e-15);
  CHECK(eff.matrix(0, 1) == doctest::Approx(eff.matrix(1, 0)));
}

TEST_CASE("trex_effective on the normalized even path") {
  const auto [hn, scale] = normalize(generate(FamilyKind::path, 4).matrix());
  const TrexAttachment att = make_trex(WeightedGraph{hn}, 1, 4, 0.05);
  const EffectiveHamiltonian eff = trex_effective(att);
  CHECK(eff.gamma <= 1e-12);
  CHECK(eff.predicted_fidelity == doctest::Approx(1.0).epsilon(1e-12));
  // |<1|(A/s)^{-1}|4>| = s for the unit-weight even path
  CHECK(eff.omega0 == doctest::Approx(scale).epsilon(1e-10));
}

TEST_CASE("predicted fidelity follows 1/sqrt(1+gamma^2)") {
  CHECK(1.0 / std::sqrt(2.0) == doctest::Approx(1.0 / std::sqrt(1.0 + 1.0)));
  // an asymmetric base with loop: gamma > 0 and the formula matches
  const WeightedGraph base{normalize(add_loop(generate(FamilyKind::path, 4), 1, 0.3).matrix()).first};
  const TrexAttachment att = make_trex(base, 1, 4, 0.02);
  const EffectiveHamiltonian eff = trex_effective(att);
  CHECK(eff.gamma > 0.0);
  CHECK(eff.predicted_fidelity ==
        doctest::Approx(1.0 / std::sqrt(1.0 + eff.gamma * eff.gamma)).epsilon(1e-12));
}

TEST_CASE("trex_effective raises each hypothesis violation by name") {
  CHECK_THROWS_AS(trex_effective(make_trex(generate(FamilyKind::path, 3), 1, 3, 0.05)), error);
  try {
    trex_effective(make_trex(generate(FamilyKind::path, 3), 1, 3, 0.05));
  } catch (const error& e) {
    CHECK(e.code() == errc::singular_base);
  }
  try {
    trex_effective(make_trex(generate(FamilyKind::path, 4), 1, 4, 0.9));
  } catch (const error& e) {
    CHECK(e.code() == errc::coupling_too_strong);
  }
  // warning regime: 0.25 < delta*kappa < 1
  const auto [hn, s] = normalize(generate(FamilyKind::path, 4).matrix());
  const EffectiveHamiltonian warned = trex_effective(make_trex(WeightedGraph{hn}, 1, 4, 0.15));
  CHECK(!warned.warnings.empty());
}

TEST_CASE("claims: lifted fixed points are near the projected subspace") {
  // perpendicular parts O(eps), pairwise overlaps O(eps^2), tails O(d eps^2)
  for (const auto& [base, delta] : std::vector<std::pair<WeightedGraph, double>>{
           {WeightedGraph{normalize(generate(FamilyKind::path, 6).matrix()).first}, 0.02},
           {WeightedGraph{normalize(generate(FamilyKind::path, 10).matrix()).first}, 0.02},
           {generate(FamilyKind::complete, 2), 0.05}}) {
    const double kappa = condition_number(eigendecompose(base.matrix()));
    const double eps = delta * kappa;
    const Parts parts = trex_parts(base, 1, base.order());
    const Eigen::MatrixXd h = parts.h0 + delta * parts.w;
    const SpectralData sd = eigendecompose(h);
    std::vector<Eigen::VectorXd> split_vectors;
    std::vector<Eigen::VectorXd> projections;
    for (int k = 0; k < sd.order(); ++k) {
      const Eigen::VectorXd proj = parts.split.p0_basis.transpose() * sd.eigenvectors.col(k);
      if (proj.squaredNorm() <= 0.5) continue;
      split_vectors.push_back(sd.eigenvectors.col(k));
      projections.push_back(parts.split.p0_basis * proj);
    }
    REQUIRE(split_vectors.size() == 2);
    for (size_t i = 0; i < split_vectors.size(); ++i) {
      const Eigen::VectorXd perp = split_vectors[i] - projections[i];
      CHECK(perp.norm() / projections[i].norm() <= 4.0 * eps);
    }
    const double overlap = std::abs(projections[0].normalized().dot(projections[1].normalized()));
    CHECK(overlap <= 4.0 * eps * eps);
    // tail of a normalized P0 state over the non-split eigenvectors
    Eigen::VectorXd psi = parts.split.p0_basis.col(0);
    double tail = 0.0;
    for (int k = 0; k < sd.order(); ++k) {
      const Eigen::VectorXd proj = parts.split.p0_basis.transpose() * sd.eigenvectors.col(k);
      if (proj.squaredNorm() > 0.5) continue;
      const double c = sd.eigenvectors.col(k).dot(psi);
      tail += c * c;
    }
    CHECK(tail <= 4.0 * 2.0 * eps * eps);
  }
}

TEST_CASE("effective hamiltonian serializes with its derived quantities") {
  const EffectiveHamiltonian eff =
      trex_effective(make_trex(generate(FamilyKind::complete, 2), 1, 2, 0.1));
  const std::string json = effective_to_json(eff);
  CHECK(json.find("\"gamma\"") != std::string::npos);
  CHECK(json.find("\"omega0\"") != std::string::npos);
  CHECK(json.find("\"predicted_time\"") != std::string::npos);
  CHECK(json.find("\"predicted_fidelity\"") != std::string::npos);
  CHECK(json.find("\"matrix\"") != std::string::npos);
}
