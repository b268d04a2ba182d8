#include "trex/hitting.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace trex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_connected(const WeightedGraph& g) {
  const int n = g.order();
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  const auto& w = g.matrix();
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u = 0; u < n; ++u)
      if (!seen[u] && u != v && w(v, u) != 0.0) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
  }
  if (count != n) fail(errc::disconnected, "graph is not connected");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double canonical53(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

struct WalkTables {
  std::vector<std::vector<double>> cdf;    // per-vertex cumulative weights
  std::vector<std::vector<int>> neighbor;  // matching neighbor list
};

WalkTables walk_tables(const WeightedGraph& g) {
  const int n = g.order();
  WalkTables t;
  t.cdf.resize(n);
  t.neighbor.resize(n);
  const auto& w = g.matrix();
  for (int v = 0; v < n; ++v) {
    double total = 0.0;
    for (int u = 0; u < n; ++u) {
      const double wt = w(v, u);
      if (wt != 0.0) {
        if (wt < 0.0) fail(errc::invalid_weight, "random walk needs nonnegative weights");
        total += wt;
        t.cdf[v].push_back(total);
        t.neighbor[v].push_back(u);
      }
    }
    if (t.cdf[v].empty()) fail(errc::disconnected, "isolated vertex");
    for (double& c : t.cdf[v]) c /= total;
  }
  return t;
}

std::int64_t single_walk(const WalkTables& t, int a, int b, std::mt19937_64& gen) {
  int v = a;
  std::int64_t steps = 0;
  while (v != b) {
    const double u = canonical53(gen);
    const auto& cdf = t.cdf[v];
    int lo = 0, hi = static_cast<int>(cdf.size()) - 1;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (cdf[mid] > u)
        hi = mid;
      else
        lo = mid + 1;
    }
    v = t.neighbor[v][lo];
    ++steps;
  }
  return steps;
}

McEstimate mc_from_steps(const std::vector<std::int64_t>& steps) {
  McEstimate est;
  est.walks = static_cast<std::int64_t>(steps.size());
  std::int64_t total = 0;
  for (const std::int64_t s : steps) total += s;
  est.mean = static_cast<double>(total) / est.walks;
  double var = 0.0;
  for (const std::int64_t s : steps) {
    const double d = static_cast<double>(s) - est.mean;
    var += d * d;
  }
  var /= (est.walks > 1 ? est.walks - 1 : 1);
  est.std_error = std::sqrt(var / est.walks);
  return est;
}

double gap_at_zero(const SpectralData& sd) {
  const double ztol = kSingularTolFactor * std::max(1.0, sd.source_norm);
  double gap = kInf;
  for (int k = 0; k < sd.order(); ++k)
    if (std::abs(sd.eigenvalues(k)) > ztol) gap = std::min(gap, std::abs(sd.eigenvalues(k)));
  return gap;
}

/// First grid crossing of f^2 >= rho, bisection-refined.
double first_crossing(const TransferAmplitude& amp, double rho, double horizon, int grid_points) {
  const double target = std::sqrt(rho);
  const Eigen::VectorXd grid = linspace(0.0, horizon, std::max(grid_points, 2));
  double prev_t = grid(0);
  if (amp(prev_t) >= target) return prev_t;
  for (int i = 1; i < grid.size(); ++i) {
    const double t = grid(i);
    if (amp(t) >= target) {
      double lo = prev_t, hi = t;
      const double tol = kPeakRefineRelTol * std::max(1.0, hi);
      while (hi - lo > tol) {
        const double mid = (lo + hi) / 2.0;
        (amp(mid) >= target ? hi : lo) = mid;
      }
      return (lo + hi) / 2.0;
    }
    prev_t = t;
  }
  return kInf;
}

}  // namespace

Eigen::MatrixXd expected_hitting_times(const WeightedGraph& g) {
  check_connected(g);
  const int n = g.order();
  const auto& w = g.matrix();
  Eigen::VectorXd degree = w.cwiseAbs().rowwise().sum();
  for (int v = 0; v < n; ++v)
    if (w.row(v).minCoeff() < 0.0) fail(errc::invalid_weight, "random walk needs nonnegative weights");
  const Eigen::MatrixXd p = degree.cwiseInverse().asDiagonal() * w;
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
  if (n == 1) return e;
#pragma omp parallel for schedule(dynamic)
  for (int b = 0; b < n; ++b) {
    Eigen::MatrixXd m(n - 1, n - 1);
    for (int r = 0, ri = 0; r < n; ++r) {
      if (r == b) continue;
      for (int c = 0, ci = 0; c < n; ++c) {
        if (c == b) continue;
        m(ri, ci) = (r == c ? 1.0 : 0.0) - p(r, c);
        ++ci;
      }
      ++ri;
    }
    const Eigen::VectorXd x = Eigen::PartialPivLU<Eigen::MatrixXd>(m).solve(
        Eigen::VectorXd::Ones(n - 1));
    for (int r = 0, ri = 0; r < n; ++r) {
      if (r == b) continue;
      e(r, b) = x(ri++);
    }
  }
  return e;
}

double average_hitting_time(const WeightedGraph& g) {
  const Eigen::MatrixXd e = expected_hitting_times(g);
  const Eigen::VectorXd degree = g.matrix().rowwise().sum();
  const Eigen::VectorXd pi = degree / degree.sum();
  return pi.transpose() * e * pi;
}

double max_commute_time(const WeightedGraph& g) {
  const Eigen::MatrixXd e = expected_hitting_times(g);
  return (e + e.transpose()).maxCoeff();
}

McEstimate mc_hitting_time(const WeightedGraph& g, int a, int b, std::int64_t walks,
                           std::uint64_t seed) {
  g.check_vertex(a);
  g.check_vertex(b);
  check_connected(g);
  const WalkTables tables = walk_tables(g);
  std::vector<std::int64_t> steps(walks);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < walks; ++i) {
    std::mt19937_64 gen(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(i) + 1)));
    steps[i] = single_walk(tables, a - 1, b - 1, gen);
  }
  return mc_from_steps(steps);
}

McEstimate mc_hitting_time_serial(const WeightedGraph& g, int a, int b, std::int64_t walks,
                                  std::uint64_t seed) {
  g.check_vertex(a);
  g.check_vertex(b);
  check_connected(g);
  const WalkTables tables = walk_tables(g);
  std::vector<std::int64_t> steps(walks);
  for (std::int64_t i = 0; i < walks; ++i) {
    std::mt19937_64 gen(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(i) + 1)));
    steps[i] = single_walk(tables, a - 1, b - 1, gen);
  }
  return mc_from_steps(steps);
}

double quantum_hitting_time(const TrexAttachment& att, double rho_threshold,
                            double horizon_factor, int grid_points) {
  if (!(rho_threshold > 0.0) || !(rho_threshold < 1.0))
    fail(errc::invalid_parameters, "rho threshold must lie in (0,1)");
  const SpectralData base = eigendecompose(att.base.matrix());
  double predicted = 0.0;
  if (dispatch_route(base) == TransferRoute::resonant) {
    const double gap = gap_at_zero(base);
    const ResonantSetup setup = make_resonant(att.base, att.alpha, att.beta, att.delta / gap);
    predicted = resonant_effective(setup).predicted_time;
  } else {
    TrexAttachment tmp = att;
    predicted = trex_effective(tmp).predicted_time;
  }
  const WeightedGraph full = assemble(att);
  const SpectralData sd = eigendecompose(full.matrix());
  const TransferAmplitude amp(sd, att.pendant_a, att.pendant_b);
  return first_crossing(amp, rho_threshold, horizon_factor * predicted, grid_points);
}

double quantum_hitting_time_bare(const WeightedGraph& g, int a, int b, double rho_threshold,
                                 double horizon, int grid_points) {
  if (!(rho_threshold > 0.0) || !(rho_threshold < 1.0))
    fail(errc::invalid_parameters, "rho threshold must lie in (0,1)");
  const SpectralData sd = eigendecompose(g.matrix());
  const TransferAmplitude amp(sd, a, b);
  return first_crossing(amp, rho_threshold, horizon, grid_points);
}

DeltaRule default_delta_rule(FamilyKind family) {
  switch (family) {
    case FamilyKind::path:
    case FamilyKind::cycle:
    case FamilyKind::barbell:
      return {DeltaRule::Kind::eps, 0.2};
    case FamilyKind::complete:
      return {DeltaRule::Kind::eps, 0.05};
    case FamilyKind::rook:
      return {DeltaRule::Kind::pendant, 0.015};
    default:
      return {DeltaRule::Kind::pendant, 0.05};
  }
}

std::vector<int> default_scaling_sizes(FamilyKind family) {
  switch (family) {
    case FamilyKind::path: return {21, 31, 41, 55};
    case FamilyKind::cycle: return {16, 24, 32, 48};
    case FamilyKind::complete: return {16, 32, 64, 128};
    case FamilyKind::barbell: return {45, 51, 57, 63};
    case FamilyKind::rook: return {121, 169, 225, 289};
    case FamilyKind::hypercube: return {4, 6, 8, 10};
    default: return {};
  }
}

HittingSetup hitting_setup(FamilyKind family, int size, const DeltaRule& rule) {
  HittingSetup setup;
  switch (family) {
    case FamilyKind::path: {
      if (size % 2 == 0)
        fail(errc::unsupported_size, "path hitting sweep needs odd sizes (simple kernel)");
      setup.chain = generate(FamilyKind::path, size).matrix();
      setup.a = 1;
      setup.b = size;
      setup.route = TransferRoute::resonant;
      break;
    }
    case FamilyKind::cycle: {
      // quotient of C_{2m} with m even: odd weighted path, simple kernel.
      if (size % 4 != 0)
        fail(errc::unsupported_size, "cycle hitting sweep needs sizes divisible by 4");
      setup.chain = quotient(FamilyKind::cycle, size).matrix();
      setup.a = 1;
      setup.b = size / 2 + 1;
      setup.route = TransferRoute::resonant;
      break;
    }
    case FamilyKind::complete: {
      // quotient in unit-coupling scale: the gap tracks the stated sqrt(N).
      setup.chain = quotient(FamilyKind::complete, size).matrix() / std::sqrt(size - 2.0);
      setup.a = 1;
      setup.b = 3;
      setup.route = TransferRoute::resonant;
      break;
    }
    case FamilyKind::barbell: {
      if (size % 2 == 0)
        fail(errc::unsupported_size, "barbell hitting sweep needs odd sizes (resonant route)");
      setup.chain = quotient(FamilyKind::barbell, size).matrix() / size;
      setup.a = 1;
      setup.b = size + 4;
      setup.route = TransferRoute::resonant;
      break;
    }
    case FamilyKind::rook: {
      setup.chain = generate(FamilyKind::rook, size).matrix();
      setup.a = 1;
      setup.b = size;
      setup.route = TransferRoute::feshbach;
      break;
    }
    case FamilyKind::hypercube: {
      // native antipodal transfer on the normalized cube; no pendants.
      const auto [h, norm] = normalize(generate(FamilyKind::hypercube, size).matrix());
      setup.chain = h;
      setup.a = 1;
      setup.b = 1 << size;
      setup.bare = true;
      setup.predicted_time = M_PI / 2.0 * size;
      return setup;
    }
    default: {
      const WeightedGraph g = generate(family, size);
      setup.chain = g.matrix();
      const auto [a, b] = family_endpoints(family, size);
      setup.a = a;
      setup.b = b;
      const SpectralData sd = eigendecompose(setup.chain);
      setup.route = dispatch_route(sd);
      break;
    }
  }
  const WeightedGraph chain_graph{setup.chain};
  const SpectralData sd = eigendecompose(setup.chain);
  if (setup.route == TransferRoute::resonant) {
    const double gap = gap_at_zero(sd);
    const double eps = rule.kind == DeltaRule::Kind::eps ? rule.value : rule.value / gap;
    setup.pendant = eps * gap;
    setup.predicted_time = resonant_effective(
        make_resonant(chain_graph, setup.a, setup.b, eps)).predicted_time;
  } else {
    const double kappa = condition_number(sd);
    setup.pendant = rule.kind == DeltaRule::Kind::pendant ? rule.value : rule.value / kappa;
    const TrexAttachment att = make_trex(chain_graph, setup.a, setup.b, setup.pendant);
    EffectiveHamiltonian eff = trex_effective(att);
    setup.predicted_time = eff.predicted_time;
  }
  return setup;
}

double family_quantum_hitting_time(FamilyKind family, int size, const DeltaRule& rule,
                                   double rho_threshold, double horizon_factor) {
  const HittingSetup setup = hitting_setup(family, size, rule);
  if (setup.bare) {
    return quantum_hitting_time_bare(WeightedGraph{setup.chain}, setup.a, setup.b, rho_threshold,
                                     horizon_factor * setup.predicted_time);
  }
  const TrexAttachment att = make_trex(WeightedGraph{setup.chain}, setup.a, setup.b, setup.pendant);
  const WeightedGraph full = assemble(att);
  const SpectralData sd = eigendecompose(full.matrix());
  const TransferAmplitude amp(sd, att.pendant_a, att.pendant_b);
  return first_crossing(amp, rho_threshold, horizon_factor * setup.predicted_time,
                        kDefaultGridPoints);
}

ScalingFitResult scaling_fit(FamilyKind family, const std::vector<int>& sizes,
                             const DeltaRule& rule, double rho_threshold, double horizon_factor) {
  if (sizes.size() < 4) fail(errc::insufficient_data, "scaling fit needs at least 4 sizes");
  for (size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1])
      fail(errc::insufficient_data, "scaling fit sizes must be strictly increasing");
  ScalingFitResult result;
  result.family = family;
  result.points.resize(sizes.size());
  const int count = static_cast<int>(sizes.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    const HittingSetup setup = hitting_setup(family, sizes[i], rule);
    const double tau = family_quantum_hitting_time(family, sizes[i], rule, rho_threshold,
                                                   horizon_factor);
    result.points[i] = {sizes[i], tau, setup.predicted_time};
  }
  for (const auto& p : result.points)
    if (!std::isfinite(p.tau_q))
      fail(errc::insufficient_data,
           "threshold never reached at size " + std::to_string(p.size));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : result.points) {
    const double x = std::log(static_cast<double>(p.size));
    const double y = std::log(p.tau_q);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(result.points.size());
  result.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - result.slope * sx) / n;
  double ss = 0.0;
  for (const auto& p : result.points) {
    const double r = std::log(p.tau_q) - (intercept + result.slope * std::log(double(p.size)));
    ss += r * r;
  }
  result.residual = std::sqrt(ss / n);
  return result;
}

SearchResult edge_oracle_search(const WeightedGraph& g, int oracle_v, int probe_v, double delta,
                                double rho_threshold, double horizon_factor) {
  g.check_vertex(oracle_v);
  g.check_vertex(probe_v);
  if (oracle_v == probe_v) return {true, 0.0};  // the random probe found the oracle outright
  const TrexAttachment att = make_trex(g, oracle_v, probe_v, delta);
  const double t = quantum_hitting_time(att, rho_threshold, horizon_factor);
  return {std::isfinite(t), t};
}

}  // namespace trex
