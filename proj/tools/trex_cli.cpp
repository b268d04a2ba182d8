#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <omp.h>
#include <sstream>

#include "trex/graph.hpp"
#include "trex/hitting.hpp"
#include "trex/io.hpp"
#include "trex/localization.hpp"
#include "trex/protocols.hpp"
#include "trex/spectral.hpp"

namespace {

using namespace trex;

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Expands `--config FILE` into `--key=value` tokens from a flat key=value
/// file.  Flags given explicitly on the command line win over the file.
std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  for (size_t i = 0; i < args.size(); ++i) {
    std::string file;
    size_t consumed = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      file = args[i + 1];
      consumed = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
      consumed = 1;
    }
    if (consumed == 0) continue;
    std::ifstream is(file);
    if (!is) fail(errc::config_invalid, "cannot read config file '" + file + "'");
    const auto given = [&args](const std::string& key) {
      const std::string plain = "--" + key;
      return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == plain || a.rfind(plain + "=", 0) == 0;
      });
    };
    std::vector<std::string> extra;
    std::string line;
    while (std::getline(is, line)) {
      line = trimmed(line);
      if (line.empty() || line[0] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        fail(errc::config_invalid, "config line is not key=value: '" + line + "'");
      const std::string key = trimmed(line.substr(0, eq));
      const std::string value = trimmed(line.substr(eq + 1));
      if (key.empty()) fail(errc::config_invalid, "config line has an empty key");
      if (!given(key)) extra.push_back("--" + key + "=" + value);
    }
    args.erase(args.begin() + i, args.begin() + i + consumed);
    args.insert(args.begin() + i, extra.begin(), extra.end());
    break;
  }
  return args;
}

nlohmann::json config_json(const ConfigItems& items) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : items) j[k] = v;
  return j;
}

int graph_distance(const Eigen::MatrixXd& w, int a0, int b0) {
  const int n = static_cast<int>(w.rows());
  std::vector<int> dist(n, -1);
  std::vector<int> queue{a0};
  dist[a0] = 0;
  for (size_t head = 0; head < queue.size(); ++head) {
    const int v = queue[head];
    if (v == b0) return dist[v];
    for (int u = 0; u < n; ++u)
      if (u != v && w(v, u) != 0.0 && dist[u] < 0) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
  }
  return -1;
}

struct TransferOpts {
  std::string family = "path";
  int size = 55;
  double delta = 0.05;
  int alpha = 0, beta = 0;
  bool normalize_base = false;
  bool bare = false;
  double horizon = 0.0;
  double horizon_factor = kDefaultHorizonFactor;
  int grid = kDefaultGridPoints;
  bool force = false;
  std::string out = "-";
  std::string report_out;
};

int run_transfer_cmd(const TransferOpts& o) {
  const FamilyKind kind = family_from_string(o.family);
  WeightedGraph g = generate(kind, o.size);
  auto [a, b] = family_endpoints(kind, o.size);
  if (o.alpha > 0) a = o.alpha;
  if (o.beta > 0) b = o.beta;
  ConfigItems cfg{{"command", "transfer"},
                  {"family", o.family},
                  {"size", std::to_string(o.size)},
                  {"delta", format_g17(o.delta)},
                  {"alpha", std::to_string(a)},
                  {"beta", std::to_string(b)},
                  {"normalize_base", bool_str(o.normalize_base)},
                  {"bare", bool_str(o.bare)},
                  {"horizon", format_g17(o.horizon)},
                  {"horizon_factor", format_g17(o.horizon_factor)},
                  {"grid", std::to_string(o.grid)},
                  {"force", bool_str(o.force)}};
  if (o.bare) {
    if (!(o.horizon > 0.0)) fail(errc::config_invalid, "--bare needs --horizon > 0");
    const SpectralData sd = eigendecompose(g.matrix());
    const FidelityTrace trace = fidelity_trace(sd, a, b, linspace(0.0, o.horizon, o.grid));
    std::ostringstream os;
    os << config_block(cfg);
    write_trace_csv(os, trace);
    write_text_file(o.out, os.str());
    std::cerr << "bare peak fidelity " << trace.peak_value << " at t=" << trace.peak_time << "\n";
    return 0;
  }
  if (o.normalize_base) g = WeightedGraph(normalize(g.matrix()).first);
  const TrexAttachment att = make_trex(std::move(g), a, b, o.delta);
  const TransferReport report = run_transfer(att, o.horizon_factor, o.force, o.grid);
  std::ostringstream os;
  os << config_block(cfg);
  write_trace_csv(os, report.trace);
  write_text_file(o.out, os.str());
  if (!o.report_out.empty()) {
    nlohmann::json j = nlohmann::json::parse(report_to_json(report));
    j["config"] = config_json(cfg);
    write_text_file(o.report_out, j.dump(2) + "\n");
  }
  std::cerr << (report.route == TransferRoute::feshbach ? "feshbach" : "resonant")
            << " route: peak " << report.measured_peak_fidelity << " at t="
            << report.measured_peak_time << " (predicted " << report.predicted_time
            << ", ratio " << report.time_ratio << ")\n";
  return 0;
}

struct AndersonOpts {
  int n = 51;
  std::string noise = "cauchy:0.06";
  double delta = 0.002;
  int seeds = 20;
  std::uint64_t seed0 = 1;
  double horizon_factor = kDefaultHorizonFactor;
  double baseline_horizon = 1e5;
  std::string calibration = "exact";
  std::string out = "-";
  std::string summary_out;
};

int run_anderson_cmd(const AndersonOpts& o) {
  const NoiseModel probe = parse_noise(o.noise, 0);
  ConfigItems cfg{{"command", "anderson"},
                  {"n", std::to_string(o.n)},
                  {"noise", o.noise},
                  {"delta", format_g17(o.delta)},
                  {"seeds", std::to_string(o.seeds)},
                  {"seed0", std::to_string(o.seed0)},
                  {"horizon_factor", format_g17(o.horizon_factor)},
                  {"baseline_horizon", format_g17(o.baseline_horizon)},
                  {"calibration", o.calibration}};
  std::vector<AndersonRow> rows;
  if (o.calibration == "exact") {
    rows = anderson_sweep(o.n, probe.kind, probe.scale, o.delta, o.horizon_factor, o.seed0,
                          o.seeds, o.baseline_horizon);
  } else if (o.calibration == "experimental") {
    for (int i = 0; i < o.seeds; ++i) {
      const NoiseModel model{probe.kind, probe.scale, o.seed0 + i};
      const ProtectedChain chain = make_protected_chain(o.n, model, o.delta);
      const double b_star = calibrate_B_experimental(chain, o.horizon_factor);
      const AndersonResult res =
          anderson_experiment(o.n, model, o.delta, o.horizon_factor, b_star);
      rows.push_back({model.seed, res.b_star, res.report.measured_peak_time,
                      res.report.measured_peak_fidelity,
                      localization_baseline(o.n + 4, model, o.baseline_horizon)});
    }
  } else {
    fail(errc::config_invalid, "--calibration must be exact or experimental");
  }
  std::ostringstream os;
  os << config_block(cfg) << "seed,B_star,peak_time,peak_fidelity,baseline_fidelity\n";
  std::vector<double> peaks, baselines, bstars;
  for (const auto& r : rows) {
    os << r.seed << "," << format_g17(r.b_star) << "," << format_g17(r.peak_time) << ","
       << format_g17(r.peak_fidelity) << "," << format_g17(r.baseline_fidelity) << "\n";
    peaks.push_back(r.peak_fidelity);
    baselines.push_back(r.baseline_fidelity);
    bstars.push_back(r.b_star);
  }
  write_text_file(o.out, os.str());
  auto quartiles = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto at = [&](double q) {
      const double idx = q * (v.size() - 1);
      const size_t lo = static_cast<size_t>(idx);
      const size_t hi = std::min(lo + 1, v.size() - 1);
      return v[lo] + (idx - lo) * (v[hi] - v[lo]);
    };
    return std::array<double, 3>{at(0.25), at(0.5), at(0.75)};
  };
  const auto pq = quartiles(peaks);
  const auto bq = quartiles(baselines);
  nlohmann::json summary;
  summary["config"] = config_json(cfg);
  summary["count"] = rows.size();
  summary["peak_fidelity"] = {{"q1", pq[0]}, {"median", pq[1]}, {"q3", pq[2]}};
  summary["baseline_fidelity"] = {{"q1", bq[0]}, {"median", bq[1]}, {"q3", bq[2]}};
  summary["median_B_star"] = median(bstars);
  const std::string text = summary.dump(2) + "\n";
  if (!o.summary_out.empty())
    write_text_file(o.summary_out, text);
  else if (o.out != "-")
    std::cout << text;
  return 0;
}

struct BaselineOpts {
  int n = 55;
  std::string noise = "uniform:2";
  double horizon = 1e5;
  int seeds = 20;
  std::uint64_t seed0 = 1;
  std::string out = "-";
};

int run_baseline_cmd(const BaselineOpts& o) {
  const NoiseModel probe = parse_noise(o.noise, 0);
  ConfigItems cfg{{"command", "baseline"}, {"n", std::to_string(o.n)},
                  {"noise", o.noise},      {"horizon", format_g17(o.horizon)},
                  {"seeds", std::to_string(o.seeds)}, {"seed0", std::to_string(o.seed0)}};
  std::ostringstream os;
  os << config_block(cfg) << "seed,peak_fidelity\n";
  std::vector<double> peaks;
  for (int i = 0; i < o.seeds; ++i) {
    const NoiseModel model{probe.kind, probe.scale, o.seed0 + i};
    const double peak = localization_baseline(o.n, model, o.horizon);
    peaks.push_back(peak);
    os << model.seed << "," << format_g17(peak) << "\n";
  }
  os << "# median_peak=" << format_g17(median(peaks)) << "\n";
  write_text_file(o.out, os.str());
  return 0;
}

struct HittingOpts {
  std::string family = "cycle";
  std::vector<int> sizes;
  double delta = 0.0;
  double eps = 0.0;
  double rho = kDefaultRhoThreshold;
  double horizon_factor = kDefaultHorizonFactor;
  std::string out = "-";
};

DeltaRule resolve_rule(FamilyKind kind, double delta, double eps) {
  if (delta > 0.0 && eps > 0.0)
    fail(errc::config_invalid, "give at most one of --delta and --eps");
  if (delta > 0.0) return {DeltaRule::Kind::pendant, delta};
  if (eps > 0.0) return {DeltaRule::Kind::eps, eps};
  return default_delta_rule(kind);
}

int run_hitting_cmd(const HittingOpts& o) {
  const FamilyKind kind = family_from_string(o.family);
  if (o.sizes.empty()) fail(errc::config_invalid, "--sizes is required");
  const DeltaRule rule = resolve_rule(kind, o.delta, o.eps);
  ConfigItems cfg{{"command", "hitting"},
                  {"family", o.family},
                  {"rule", rule.kind == DeltaRule::Kind::eps ? "eps" : "pendant"},
                  {"rule_value", format_g17(rule.value)},
                  {"rho", format_g17(o.rho)},
                  {"horizon_factor", format_g17(o.horizon_factor)}};
  std::ostringstream os;
  os << config_block(cfg) << "family,N,tau_star,tau_0,tau_Q,delta,rho\n";
  for (const int size : o.sizes) {
    const WeightedGraph g = generate(kind, size);
    const double tau_star = max_commute_time(g);
    const double tau_0 = average_hitting_time(g);
    double tau_q = std::numeric_limits<double>::infinity();
    double pendant = 0.0;
    std::string note;
    try {
      const HittingSetup setup = hitting_setup(kind, size, rule);
      pendant = setup.pendant;
      tau_q = family_quantum_hitting_time(kind, size, rule, o.rho, o.horizon_factor);
    } catch (const error& e) {
      note = e.what();
    }
    os << o.family << "," << g.order() << "," << format_g17(tau_star) << ","
       << format_g17(tau_0) << "," << format_g17(tau_q) << "," << format_g17(pendant) << ","
       << format_g17(o.rho) << "\n";
    if (!note.empty()) os << "# N=" << g.order() << " quantum route unavailable: " << note << "\n";
  }
  write_text_file(o.out, os.str());
  return 0;
}

struct ScalingOpts {
  std::string family = "path";
  std::vector<int> sizes;
  double delta = 0.0;
  double eps = 0.0;
  double rho = kDefaultRhoThreshold;
  double horizon_factor = kDefaultHorizonFactor;
  std::string out = "-";
};

int run_scaling_cmd(const ScalingOpts& o) {
  const FamilyKind kind = family_from_string(o.family);
  const std::vector<int> sizes = o.sizes.empty() ? default_scaling_sizes(kind) : o.sizes;
  const DeltaRule rule = resolve_rule(kind, o.delta, o.eps);
  const ScalingFitResult fit = scaling_fit(kind, sizes, rule, o.rho, o.horizon_factor);
  ConfigItems cfg{{"command", "scaling"},
                  {"family", o.family},
                  {"rule", rule.kind == DeltaRule::Kind::eps ? "eps" : "pendant"},
                  {"rule_value", format_g17(rule.value)},
                  {"rho", format_g17(o.rho)},
                  {"horizon_factor", format_g17(o.horizon_factor)}};
  nlohmann::json j;
  j["config"] = config_json(cfg);
  j["family"] = o.family;
  j["slope"] = fit.slope;
  j["residual"] = fit.residual;
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : fit.points) points.push_back({p.size, p.tau_q});
  j["points"] = std::move(points);
  write_text_file(o.out, j.dump(2) + "\n");
  std::cerr << "slope " << fit.slope << " (rms residual " << fit.residual << ")\n";
  return 0;
}

struct ResonantOpts {
  std::string family = "complete";
  int size = 16;
  double eps = 0.02;
  double horizon_factor = kDefaultHorizonFactor;
  std::string trace_out;
  std::string out = "-";
};

int run_resonant_cmd(const ResonantOpts& o) {
  const FamilyKind kind = family_from_string(o.family);
  const HittingSetup setup = hitting_setup(kind, o.size, {DeltaRule::Kind::eps, o.eps});
  if (setup.route != TransferRoute::resonant || setup.bare)
    fail(errc::degenerate_kernel, "family instance has no simple-kernel resonant route");
  const ResonantSetup rs = make_resonant(WeightedGraph{setup.chain}, setup.a, setup.b, o.eps);
  const TransferReport report = run_resonant(rs, o.horizon_factor);
  ConfigItems cfg{{"command", "resonant"},
                  {"family", o.family},
                  {"size", std::to_string(o.size)},
                  {"eps", format_g17(o.eps)},
                  {"horizon_factor", format_g17(o.horizon_factor)}};
  nlohmann::json j = nlohmann::json::parse(report_to_json(report));
  j["config"] = config_json(cfg);
  write_text_file(o.out, j.dump(2) + "\n");
  if (!o.trace_out.empty()) {
    std::ostringstream os;
    os << config_block(cfg);
    write_trace_csv(os, report.trace);
    write_text_file(o.trace_out, os.str());
  }
  return 0;
}

struct SearchOpts {
  std::string family = "complete";
  int size = 64;
  int oracle = 1;
  int probe = 2;
  double delta = 0.05;
  double rho = kDefaultRhoThreshold;
  double horizon_factor = kDefaultHorizonFactor;
  std::string out = "-";
};

int run_search_cmd(const SearchOpts& o) {
  const FamilyKind kind = family_from_string(o.family);
  const WeightedGraph g = generate(kind, o.size);
  const SearchResult result = edge_oracle_search(g, o.oracle, o.probe, o.delta, o.rho,
                                                 o.horizon_factor);
  ConfigItems cfg{{"command", "search"},  {"family", o.family},
                  {"size", std::to_string(o.size)}, {"oracle", std::to_string(o.oracle)},
                  {"probe", std::to_string(o.probe)}, {"delta", format_g17(o.delta)},
                  {"rho", format_g17(o.rho)},
                  {"horizon_factor", format_g17(o.horizon_factor)}};
  nlohmann::json j;
  j["config"] = config_json(cfg);
  j["success"] = result.success;
  j["time"] = result.success ? nlohmann::json(result.time) : nlohmann::json("inf");
  write_text_file(o.out, j.dump(2) + "\n");
  return 0;
}

struct CompareOpts {
  int m = 2, d = 3, c = 5;
  double eps = 0.1;
  std::string family;
  std::vector<int> sizes;
  double delta = 0.1;
  std::string out = "-";
};

int run_compare_cmd(const CompareOpts& o) {
  ConfigItems cfg{{"command", "compare-strong"}, {"m", std::to_string(o.m)},
                  {"d", std::to_string(o.d)},    {"c", std::to_string(o.c)},
                  {"eps", format_g17(o.eps)},    {"delta", format_g17(o.delta)}};
  if (o.family.empty()) {
    const auto [q, t0] = strong_potential_bounds(o.m, o.d, o.c, o.eps);
    nlohmann::json j;
    j["config"] = config_json(cfg);
    j["Q"] = q;
    j["t0"] = t0;
    write_text_file(o.out, j.dump(2) + "\n");
    return 0;
  }
  const FamilyKind kind = family_from_string(o.family);
  std::ostringstream os;
  os << config_block(cfg)
     << "family,N,delta,predicted_time,measured_time,predicted_fidelity,measured_fidelity,"
        "strong_Q,strong_t0\n";
  for (const int size : o.sizes) {
    const WeightedGraph g = generate(kind, size);
    const auto [a, b] = family_endpoints(kind, size);
    const TrexAttachment att = make_trex(g, a, b, o.delta);
    const TransferReport report = run_transfer(att, kDefaultHorizonFactor, true);
    const WeightedGraph full = assemble(att);
    const int dist = graph_distance(full.matrix(), full.order() - 2, full.order() - 1);
    int max_degree = 0;
    for (int v = 0; v < full.order(); ++v) {
      int deg = 0;
      for (int u = 0; u < full.order(); ++u)
        if (u != v && full.matrix()(v, u) != 0.0) ++deg;
      max_degree = std::max(max_degree, deg);
    }
    const auto [q, t0] = strong_potential_bounds(max_degree, dist, dist, o.eps);
    os << report_csv_row(o.family, size, o.delta, report) << "," << format_g17(q) << ","
       << format_g17(t0) << "\n";
  }
  write_text_file(o.out, os.str());
  return 0;
}

struct DumpOpts {
  std::string family = "path";
  int size = 5;
  bool use_quotient = false;
  std::string out = "-";
};

int run_dump_cmd(const DumpOpts& o) {
  const FamilyKind kind = family_from_string(o.family);
  const WeightedGraph g = o.use_quotient ? quotient(kind, o.size) : generate(kind, o.size);
  nlohmann::json j = nlohmann::json::parse(graph_to_json(g));
  ConfigItems cfg{{"command", "graph-dump"},
                  {"family", o.family},
                  {"size", std::to_string(o.size)},
                  {"quotient", bool_str(o.use_quotient)}};
  j["config"] = config_json(cfg);
  write_text_file(o.out, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum walk state transfer via weakly coupled pendant edges"};
  app.require_subcommand(1);
  int jobs = 0;
  std::string config_file;
  app.add_option("--jobs", jobs, "worker thread count (0 = all cores)");

  TransferOpts t;
  auto* transfer = app.add_subcommand("transfer", "pendant-edge transfer experiment");
  transfer->add_option("--family", t.family);
  transfer->add_option("--size", t.size);
  transfer->add_option("--delta", t.delta);
  transfer->add_option("--alpha", t.alpha);
  transfer->add_option("--beta", t.beta);
  transfer->add_flag("--normalize-base", t.normalize_base);
  transfer->add_flag("--bare", t.bare, "no pendants: uniform-coupling control");
  transfer->add_option("--horizon", t.horizon, "scan horizon for --bare");
  transfer->add_option("--horizon-factor", t.horizon_factor);
  transfer->add_option("--grid", t.grid);
  transfer->add_flag("--force", t.force, "proceed despite hypothesis warnings");
  transfer->add_option("-o,--out", t.out);
  transfer->add_option("--report", t.report_out, "also write a JSON report");
  transfer->add_option("--config", config_file, "flat key=value file mirroring the flags");

  AndersonOpts a;
  auto* anderson = app.add_subcommand("anderson", "disorder-robust transfer protocol");
  anderson->add_option("--n", a.n, "noisy interior sites");
  anderson->add_option("--noise", a.noise, "kind:scale, e.g. cauchy:0.06");
  anderson->add_option("--delta", a.delta);
  anderson->add_option("--seeds", a.seeds);
  anderson->add_option("--seed0", a.seed0);
  anderson->add_option("--horizon-factor", a.horizon_factor);
  anderson->add_option("--baseline-horizon", a.baseline_horizon);
  anderson->add_option("--calibration", a.calibration, "exact | experimental");
  anderson->add_option("-o,--out", a.out);
  anderson->add_option("--summary", a.summary_out);
  anderson->add_option("--config", config_file, "flat key=value file mirroring the flags");

  BaselineOpts bl;
  auto* baseline = app.add_subcommand("baseline", "bare disordered chain control");
  baseline->add_option("--n", bl.n);
  baseline->add_option("--noise", bl.noise);
  baseline->add_option("--horizon", bl.horizon);
  baseline->add_option("--seeds", bl.seeds);
  baseline->add_option("--seed0", bl.seed0);
  baseline->add_option("-o,--out", bl.out);
  baseline->add_option("--config", config_file, "flat key=value file mirroring the flags");

  HittingOpts h;
  auto* hitting = app.add_subcommand("hitting", "classical vs quantum hitting times");
  hitting->add_option("--family", h.family);
  hitting->add_option("--sizes", h.sizes)->delimiter(',');
  hitting->add_option("--delta", h.delta);
  hitting->add_option("--eps", h.eps);
  hitting->add_option("--rho", h.rho);
  hitting->add_option("--horizon-factor", h.horizon_factor);
  hitting->add_option("-o,--out", h.out);
  hitting->add_option("--config", config_file, "flat key=value file mirroring the flags");

  ScalingOpts s;
  auto* scaling = app.add_subcommand("scaling", "log-log hitting time fit");
  scaling->add_option("--family", s.family);
  scaling->add_option("--sizes", s.sizes)->delimiter(',');
  scaling->add_option("--delta", s.delta);
  scaling->add_option("--eps", s.eps);
  scaling->add_option("--rho", s.rho);
  scaling->add_option("--horizon-factor", s.horizon_factor);
  scaling->add_option("-o,--out", s.out);
  scaling->add_option("--config", config_file, "flat key=value file mirroring the flags");

  ResonantOpts r;
  auto* resonant = app.add_subcommand("resonant", "resonant tunneling transfer");
  resonant->add_option("--family", r.family);
  resonant->add_option("--size", r.size);
  resonant->add_option("--eps", r.eps);
  resonant->add_option("--horizon-factor", r.horizon_factor);
  resonant->add_option("--trace", r.trace_out);
  resonant->add_option("-o,--out", r.out);
  resonant->add_option("--config", config_file, "flat key=value file mirroring the flags");

  SearchOpts se;
  auto* search = app.add_subcommand("search", "pendant-edge oracle search");
  search->add_option("--family", se.family);
  search->add_option("--size", se.size);
  search->add_option("--oracle", se.oracle);
  search->add_option("--probe", se.probe);
  search->add_option("--delta", se.delta);
  search->add_option("--rho", se.rho);
  search->add_option("--horizon-factor", se.horizon_factor);
  search->add_option("-o,--out", se.out);
  search->add_option("--config", config_file, "flat key=value file mirroring the flags");

  CompareOpts co;
  auto* compare = app.add_subcommand("compare-strong", "strong-potential bound comparison");
  compare->add_option("--m", co.m, "maximum degree");
  compare->add_option("--d", co.d, "transfer distance");
  compare->add_option("--c", co.c, "cospectrality parameter");
  compare->add_option("--eps", co.eps);
  compare->add_option("--family", co.family, "optional family for a side-by-side table");
  compare->add_option("--sizes", co.sizes)->delimiter(',');
  compare->add_option("--delta", co.delta);
  compare->add_option("-o,--out", co.out);
  compare->add_option("--config", config_file, "flat key=value file mirroring the flags");

  DumpOpts du;
  auto* dump = app.add_subcommand("graph-dump", "serialize a family graph");
  dump->add_option("--family", du.family);
  dump->add_option("--size", du.size);
  dump->add_flag("--quotient", du.use_quotient);
  dump->add_option("-o,--out", du.out);
  dump->add_option("--config", config_file, "flat key=value file mirroring the flags");

  try {
    std::vector<std::string> args = expand_config_args(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11's vector overload wants reversed args
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }

  if (jobs > 0) omp_set_num_threads(jobs);

  try {
    if (*transfer) return run_transfer_cmd(t);
    if (*anderson) return run_anderson_cmd(a);
    if (*baseline) return run_baseline_cmd(bl);
    if (*hitting) return run_hitting_cmd(h);
    if (*scaling) return run_scaling_cmd(s);
    if (*resonant) return run_resonant_cmd(r);
    if (*search) return run_search_cmd(se);
    if (*compare) return run_compare_cmd(co);
    if (*dump) return run_dump_cmd(du);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
