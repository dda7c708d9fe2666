#include "twoeq/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>

#include "twoeq/cli/output.hpp"
#include "twoeq/cli/svg.hpp"
#include "twoeq/deterministic.hpp"
#include "twoeq/ensemble.hpp"
#include "twoeq/errors.hpp"
#include "twoeq/limits.hpp"
#include "twoeq/sde.hpp"
#include "twoeq/stochastic_approx.hpp"

namespace twoeq::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Radius used when reporting how many SA runs ended close to pi.
constexpr double kNearPiRadius = 0.05;
// Number of time points kept for ensemble-mean diffusion paths.
constexpr std::int64_t kDiffusionPathPoints = 1001;

struct Artifacts {
  fs::path dir;
  json summary;
  std::vector<std::pair<std::string, std::string>> files;  // name, content
};

void add_csv(Artifacts& art, const std::string& name, const CsvTable& table) {
  art.files.emplace_back(name, to_csv(table));
  art.summary["files"].push_back(name);
}

void add_svg(Artifacts& art, const RunConfig& cfg,
             const std::vector<Series>& series, const AxesConfig& axes) {
  if (!cfg.svg) return;
  art.files.emplace_back("plot.svg", emit_svg(series, axes));
  art.summary["files"].push_back("plot.svg");
}

CsvTable trajectory_table(const Trajectory& t, const char* index_name) {
  CsvTable table{{index_name, "value"}, {{}, {}}};
  for (const auto& p : t.points) {
    table.columns[0].push_back(p.index);
    table.columns[1].push_back(p.value);
  }
  return table;
}

Series trajectory_series(const Trajectory& t, std::string label) {
  Series s{std::move(label), {}};
  for (const auto& p : t.points) s.points.emplace_back(p.index, p.value);
  return s;
}

CsvTable indexed_table(const std::vector<double>& values) {
  CsvTable table{{"index", "value"}, {{}, values}};
  for (std::size_t i = 0; i < values.size(); ++i) {
    table.columns[0].push_back(static_cast<double>(i));
  }
  return table;
}

json moments(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double var = v.size() > 1 ? ss / static_cast<double>(v.size() - 1) : 0.0;
  return json{{"mean", mean}, {"variance", var}};
}

std::string state_label(Representation mode) {
  return mode == Representation::frequency ? "p" : "c";
}

void run_rfi(const RunConfig& cfg, const ModelParams& params, Artifacts& art) {
  const double lo = domain_lower(cfg.mode);
  const double width = domain_upper(cfg.mode) - lo;
  CsvTable table{{state_label(cfg.mode), "drift"}, {{}, {}}};
  Series curve{cfg.mode == Representation::frequency ? "V+(p)" : "-V0(c)", {}};
  std::int64_t positive = 0;
  std::int64_t negative = 0;
  for (std::int64_t i = 0; i < cfg.points; ++i) {
    const double x = i + 1 == cfg.points
                         ? domain_upper(cfg.mode)
                         : lo + width * static_cast<double>(i) /
                                    static_cast<double>(cfg.points - 1);
    const double y = drift(x, cfg.mode, params);
    table.columns[0].push_back(x);
    table.columns[1].push_back(y);
    curve.points.emplace_back(x, y);
    if (y > 0.0) ++positive;
    if (y < 0.0) ++negative;
  }
  add_csv(art, "rfi.csv", table);
  const bool freq = cfg.mode == Representation::frequency;
  art.summary["result"] = {
      {"points", cfg.points},
      {"positive", positive},
      {"negative", negative},
      {"roots", freq ? json::array({0.0, params.pi_minus(), params.pi_plus(), 1.0})
                     : json::array({-1.0, -params.gap(), params.gap(), 1.0})}};
  AxesConfig axes;
  axes.title = freq ? "Frequency regression increment" : "Binary regression increment";
  axes.x_label = state_label(cfg.mode);
  axes.y_label = "increment";
  axes.x_range = std::pair{lo, 1.0};
  axes.zero_line = true;
  add_svg(art, cfg, {curve}, axes);
}

void run_evolve(const RunConfig& cfg, const ModelParams& params, Artifacts& art) {
  const Evolution ev = evolve(cfg.initial, cfg.mode, params, cfg.steps, cfg.tol);
  add_csv(art, "trajectory.csv", trajectory_table(ev.trajectory, "index"));
  const LimitReport& r = ev.report;
  art.summary["result"] = {
      {"terminal", ev.trajectory.back().value},
      {"converged", r.converged},
      {"limit", r.limit_value},
      {"steps_used", r.steps_used},
      {"limit_kind", std::string(to_string(r.limit_kind))},
      {"residual", r.residual},
      {"initial_zone", std::string(to_string(classify_zone(cfg.initial, cfg.mode, params)))},
      {"predicted_limit", predict_limit(cfg.initial, cfg.mode, params)}};
  AxesConfig axes;
  axes.title = "Deterministic evolution";
  axes.x_label = "step";
  axes.y_label = state_label(cfg.mode);
  add_svg(art, cfg, {trajectory_series(ev.trajectory, state_label(cfg.mode))}, axes);
}

void run_simulate(const RunConfig& cfg, const ModelParams& params, Artifacts& art) {
  SimConfig sim{cfg.mode, cfg.initial, cfg.steps, false};
  std::vector<Simulation> runs = run_ensemble(
      cfg.replicates, *cfg.seed,
      [&](RngStream& rng, std::int64_t) { return simulate(sim, params, rng); });
  std::vector<double> terminals;
  terminals.reserve(runs.size());
  for (const auto& r : runs) terminals.push_back(r.terminal.value());
  add_csv(art, "trajectory.csv", trajectory_table(runs[0].trajectory, "index"));
  if (cfg.replicates > 1) add_csv(art, "terminals.csv", indexed_table(terminals));
  art.summary["result"] = {
      {"terminal", terminals[0]},
      {"terminal_moments", moments(terminals)},
      {"initial_lattice", ExperimentState::snapped(cfg.mode, cfg.initial,
                                                   params.population()).value()},
      {"deterministic_limit", predict_limit(cfg.initial, cfg.mode, params)}};
  AxesConfig axes;
  axes.title = "Exact binomial simulation (replicate 0)";
  axes.x_label = "step";
  axes.y_label = state_label(cfg.mode);
  add_svg(art, cfg, {trajectory_series(runs[0].trajectory, state_label(cfg.mode))}, axes);
}

void run_sa_command(const RunConfig& cfg, const ModelParams& params, Artifacts& art) {
  const SAConfig sa = cfg.sa_config();
  std::vector<SAReport> runs = run_ensemble(
      cfg.replicates, *cfg.seed,
      [&](RngStream& rng, std::int64_t) { return run_sa(sa, params, rng); });
  std::vector<double> terminals;
  std::map<std::string, std::int64_t> detected;
  std::int64_t near_pi = 0;
  std::int64_t below_minus_pi = 0;
  std::int64_t clamped = 0;
  for (const auto& r : runs) {
    terminals.push_back(r.terminal_alpha);
    ++detected[std::string(to_string(r.detected_limit))];
    if (std::abs(r.terminal_alpha - params.gap()) < kNearPiRadius) ++near_pi;
    if (r.terminal_alpha < -params.gap()) ++below_minus_pi;
    clamped += r.clamped_steps;
  }
  const double m = static_cast<double>(cfg.replicates);
  add_csv(art, "trajectory.csv", trajectory_table(runs[0].trajectory, "index"));
  if (cfg.replicates > 1) add_csv(art, "terminals.csv", indexed_table(terminals));
  art.summary["result"] = {
      {"terminal", runs[0].terminal_alpha},
      {"detected_limit", std::string(to_string(runs[0].detected_limit))},
      {"steps", runs[0].steps},
      {"terminal_moments", moments(terminals)},
      {"detected_counts", detected},
      {"near_pi_radius", kNearPiRadius},
      {"fraction_near_pi", static_cast<double>(near_pi) / m},
      {"fraction_below_minus_pi", static_cast<double>(below_minus_pi) / m},
      {"clamped_steps_total", clamped}};
  AxesConfig axes;
  axes.title = "Stochastic approximation (replicate 0)";
  axes.x_label = "k";
  axes.y_label = "alpha";
  add_svg(art, cfg, {trajectory_series(runs[0].trajectory, "alpha")}, axes);
}

void run_clt(const RunConfig& cfg, const ModelParams& params, Artifacts& art) {
  RngStream rng(*cfg.seed, 0);
  const DistributionSample sample =
      clt_martingale_sample(cfg.value, params, cfg.replicates, rng);
  const double sigma =
      std::sqrt(noise_variance_binary(sample.context.state, params));
  const double ks = ks_statistic_one_sample(
      sample, [sigma](double x) { return normal_cdf(x / sigma); });
  add_csv(art, "sample.csv", indexed_table(sample.values));
  art.summary["result"] = {{"state", sample.context.state},
                           {"sigma", sigma},
                           {"ks_statistic", ks},
                           {"sample_moments", moments(sample.values)}};
  if (cfg.svg) {
    std::vector<double> sorted = sample.values;
    std::sort(sorted.begin(), sorted.end());
    Series empirical{"empirical CDF", {}};
    Series normal{"normal CDF", {}};
    const std::size_t stride = std::max<std::size_t>(1, sorted.size() / 1000);
    for (std::size_t i = 0; i < sorted.size(); i += stride) {
      empirical.points.emplace_back(
          sorted[i], static_cast<double>(i + 1) / static_cast<double>(sorted.size()));
    }
    const double span = 4.0 * sigma;
    for (int i = 0; i <= 200; ++i) {
      const double x = -span + 2.0 * span * i / 200.0;
      normal.points.emplace_back(x, normal_cdf(x / sigma));
    }
    AxesConfig axes;
    axes.title = "Scaled martingale increment";
    axes.x_label = "sqrt(N) dmu";
    axes.y_label = "CDF";
    axes.x_range = std::pair{-span, span};
    axes.y_range = std::pair{0.0, 1.0};
    add_svg(art, cfg, {empirical, normal}, axes);
  }
}

struct DiffusionReplicate {
  std::vector<double> sampled;  // discrete-continuous states at sample times
  double discrete_terminal = 0.0;
  double em_terminal = 0.0;
};

void run_diffusion(const RunConfig& cfg, const ModelParams& params,
                   Artifacts& art) {
  const double dt = cfg.resolved_dt();
  const std::int64_t m = cfg.replicates;
  // Sample the discrete-continuous path on at most kDiffusionPathPoints
  // evenly spaced grid indices.
  const TimeGridPath probe = [&] {
    RngStream unused(0, 0);
    return simulate_discrete_continuous(cfg.initial, params, cfg.horizon,
                                        unused, NoiseSwitch::off);
  }();
  const std::size_t grid = probe.t_values.size();
  const std::size_t stride = std::max<std::size_t>(
      1, (grid - 1 + kDiffusionPathPoints - 2) / (kDiffusionPathPoints - 1));
  std::vector<std::size_t> picks;
  for (std::size_t i = 0; i < grid; i += stride) picks.push_back(i);
  if (picks.back() != grid - 1) picks.push_back(grid - 1);

  std::vector<DiffusionReplicate> runs = run_ensemble(
      m, *cfg.seed, [&](RngStream& rng, std::int64_t i) {
        DiffusionReplicate out;
        const TimeGridPath dc =
            simulate_discrete_continuous(cfg.initial, params, cfg.horizon, rng);
        out.sampled.reserve(picks.size());
        for (std::size_t idx : picks) out.sampled.push_back(dc.states[idx]);
        out.discrete_terminal = dc.states.back();
        RngStream em_rng(*cfg.seed, static_cast<std::uint64_t>(m + i));
        out.em_terminal =
            simulate_ou_em(cfg.initial, params, cfg.horizon, dt, em_rng).states.back();
        return out;
      });

  std::vector<double> dc_terminal;
  std::vector<double> em_terminal;
  std::vector<double> mean_path(picks.size(), 0.0);
  for (const auto& r : runs) {
    dc_terminal.push_back(r.discrete_terminal);
    em_terminal.push_back(r.em_terminal);
    for (std::size_t j = 0; j < picks.size(); ++j) mean_path[j] += r.sampled[j];
  }
  for (double& v : mean_path) v /= static_cast<double>(m);

  // Drift ODE at the sample times, integrated segment by segment.
  std::vector<double> ode_path(picks.size());
  ode_path[0] = cfg.initial;
  for (std::size_t j = 1; j < picks.size(); ++j) {
    const double seg = probe.t_values[picks[j]] - probe.t_values[picks[j - 1]];
    ode_path[j] = integrate_drift_ode(ode_path[j - 1], params, seg, 1000);
  }
  double max_dev = 0.0;
  for (std::size_t j = 0; j < picks.size(); ++j) {
    max_dev = std::max(max_dev, std::abs(mean_path[j] - ode_path[j]));
  }

  CsvTable path{{"t", "value"}, {{}, mean_path}};
  for (std::size_t idx : picks) path.columns[0].push_back(probe.t_values[idx]);
  add_csv(art, "trajectory.csv", path);
  CsvTable marg{{"index", "discrete", "em"}, {{}, dc_terminal, em_terminal}};
  for (std::int64_t i = 0; i < m; ++i) marg.columns[0].push_back(static_cast<double>(i));
  add_csv(art, "marginals.csv", marg);

  art.summary["result"] = {
      {"horizon_time", probe.t_values.back()},
      {"ks_two_sample", ks_statistic_two_sample(dc_terminal, em_terminal)},
      {"discrete_terminal_moments", moments(dc_terminal)},
      {"em_terminal_moments", moments(em_terminal)},
      {"ode_terminal", ode_path.back()},
      {"max_mean_path_deviation", max_dev}};
  if (cfg.svg) {
    Series mean{"ensemble mean", {}};
    Series ode{"drift ODE", {}};
    for (std::size_t j = 0; j < picks.size(); ++j) {
      mean.points.emplace_back(path.columns[0][j], mean_path[j]);
      ode.points.emplace_back(path.columns[0][j], ode_path[j]);
    }
    AxesConfig axes;
    axes.title = "Diffusion limit: mean path";
    axes.x_label = "t";
    axes.y_label = "c";
    add_svg(art, cfg, {mean, ode}, axes);
  }
}

void run_classify(const RunConfig& cfg, const ModelParams& params, Artifacts& art) {
  art.summary["zone"] = std::string(to_string(classify_zone(cfg.value, cfg.mode, params)));
}

}  // namespace

json run_command(const RunConfig& cfg) {
  const ModelParams params = cfg.params();
  Artifacts art;
  art.dir = cfg.out_dir;
  art.summary["command"] = std::string(to_string(cfg.command));
  art.summary["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
  art.summary["config"] = cfg.to_json();
  art.summary["files"] = json::array();
  art.summary["model"] = {{"pi_plus", params.pi_plus()},
                          {"pi_minus", params.pi_minus()},
                          {"pi", params.gap()},
                          {"V", params.amplitude()},
                          {"N", params.population()}};
  switch (cfg.command) {
    case Command::rfi: run_rfi(cfg, params, art); break;
    case Command::evolve: run_evolve(cfg, params, art); break;
    case Command::simulate: run_simulate(cfg, params, art); break;
    case Command::sa: run_sa_command(cfg, params, art); break;
    case Command::clt: run_clt(cfg, params, art); break;
    case Command::diffusion: run_diffusion(cfg, params, art); break;
    case Command::classify: run_classify(cfg, params, art); break;
  }
  art.summary["files"].push_back("summary.json");
  for (const auto& [name, content] : art.files) {
    write_file_atomic(art.dir / name, content);
  }
  write_file_atomic(art.dir / "summary.json", art.summary.dump(2) + "\n");
  return art.summary;
}

}  // namespace twoeq::cli
