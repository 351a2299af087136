#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "slm/kinetic.hpp"
#include "slm/microsim.hpp"
#include "slm/stats.hpp"
#include "slm/theory.hpp"

#ifndef SLM_VERSION
#define SLM_VERSION "0.0.0"
#endif

namespace slm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string version_string() { return std::string("slm-cli ") + SLM_VERSION; }

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::io: return 3;
    case ErrorKind::invalid_parameter: return 4;
    case ErrorKind::incompatible_grids: return 5;
    case ErrorKind::precondition: return 6;
    case ErrorKind::invalid_interval: return 7;
    case ErrorKind::no_interior_maximum: return 8;
    case ErrorKind::undefined_q: return 9;
    case ErrorKind::blow_up: return 10;
    case ErrorKind::instability: return 11;
    case ErrorKind::closure_singularity: return 12;
    case ErrorKind::horizon_violation: return 13;
  }
  return 1;
}

fs::path resolve_out_dir(const fs::path& dir) {
  const char* root = std::getenv("SLM_OUT_ROOT");
  if (dir.is_relative() && root && *root) return fs::path(root) / dir;
  return dir;
}

namespace {

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header, const std::string& preamble = "") : out_(path) {
    if (!out_) fail(ErrorKind::io, "cannot write " + path.string());
    if (!preamble.empty()) out_ << "# " << preamble << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }
  Csv& operator<<(double v) { return cell(format_double(v)); }
  Csv& operator<<(std::size_t v) { return cell(std::to_string(v)); }
  Csv& operator<<(const std::string& s) { return cell(s); }
  void end() {
    out_ << '\n';
    first_ = true;
  }
  std::ofstream& stream() { return out_; }

 private:
  Csv& cell(const std::string& s) {
    if (!first_) out_ << ',';
    out_ << s;
    first_ = false;
    return *this;
  }
  std::ofstream out_;
  bool first_ = true;
};

std::vector<std::string> coords(const char* prefix, int dim) {
  std::vector<std::string> out;
  for (int d = 0; d < dim; ++d) out.push_back(prefix + std::to_string(d));
  return out;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

void prepare(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) fail(ErrorKind::io, "cannot create output directory " + out.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) fail(ErrorKind::io, "cannot write " + path.string());
  f << text;
}

json base_manifest(const std::string& command) {
  json m;
  m["tool"] = "slm-cli";
  m["version"] = version_string();
  m["command"] = command;
  return m;
}

void finish(const fs::path& out, json manifest, const RunConfig* config) {
  if (config) {
    write_text(out / "config.ini", config->resolved_text());
    manifest["config"] = "config.ini";
  }
  write_text(out / "manifest.json", manifest.dump(2) + "\n");
}

void write_field(Csv& csv, double t, const Field& f) {
  const Grid& g = f.grid;
  for (std::size_t c = 0; c < g.size(); ++c) {
    csv << t << c;
    const Point x = g.center(c);
    for (int d = 0; d < g.dim(); ++d) csv << x[d];
    csv << f[c];
    csv.end();
  }
}

// e^{-alpha_low}: the competition witness implied by the Banach-scale horizon.
std::optional<double> theory_witness(const RunConfig& c) {
  if (c.aminus->mass() <= 0.0 || c.rho0.max() <= 0.0) return std::nullopt;
  const double up = c.alpha_up.value_or(-std::log(c.rho0.max()));
  const double low = c.alpha_low ? *c.alpha_low : optimize_alpha(up, c.aplus->mass(), c.aminus->mass()).alpha_low;
  return std::exp(-low);
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::io, "malformed " + path.string() + ": " + e.what());
  }
}

std::vector<std::vector<std::string>> read_rows(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot read " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
    rows.push_back(std::move(cols));
  }
  return rows;
}

double num(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::io, "malformed number '" + s + "' in snapshot data");
}

std::string flag_text(const SubPoissonReport& r) {
  if (r.passes()) return "none";
  std::string s;
  if (!r.flagged_cells.empty()) {
    s += "k1:";
    for (std::size_t i = 0; i < r.flagged_cells.size(); ++i) s += (i ? " " : "") + std::to_string(r.flagged_cells[i]);
  }
  if (!r.flagged_bins.empty()) {
    if (!s.empty()) s += ";";
    s += "k2:";
    for (std::size_t i = 0; i < r.flagged_bins.size(); ++i) s += (i ? " " : "") + std::to_string(r.flagged_bins[i]);
  }
  return s;
}

}  // namespace

void simulate(const RunConfig& config, const SimulateOverrides& overrides, const fs::path& out, unsigned jobs) {
  prepare(out);
  const ModelParams params = config.params();
  const auto competition = std::make_shared<const Kernel>(*config.aminus);
  RunConfig resolved = config;
  resolved.runs = overrides.runs.value_or(config.runs);
  resolved.seed = overrides.seed.value_or(config.seed);
  resolved.event_log = config.event_log || overrides.events;
  if (resolved.runs < 1) fail(ErrorKind::config, "--runs must be at least 1");

  EnsembleOptions opts;
  opts.runs = resolved.runs;
  opts.master_seed = resolved.seed;
  opts.jobs = jobs;
  opts.run.max_population = config.max_population;
  opts.run.audit_interval = config.audit_interval;
  const int dim = config.dim;
  if (resolved.event_log) {
    prepare(out / "events");
    opts.event_sink = [&, dim](std::size_t run) -> std::function<void(const Event&)> {
      std::ostringstream name;
      name << "run_" << std::setw(5) << std::setfill('0') << run << ".csv";
      auto csv = std::make_shared<Csv>(out / "events" / name.str(), concat({"time", "kind"}, coords("x", dim)));
      return [csv, dim](const Event& e) {
        static const char* kinds[] = {"birth", "death-natural", "death-competition"};
        *csv << e.time << std::string(kinds[static_cast<int>(e.kind)]);
        for (int d = 0; d < dim; ++d) *csv << e.position[d];
        csv->end();
      };
    };
  }
  const auto times = config.snapshot_times();
  const auto results = run_ensemble(
      [&](Rng& rng) { return init_poisson_field(config.rho0, 1.0, competition, rng); }, params, config.horizon, times,
      opts);

  Csv snaps(out / "snapshots.csv", concat({"run", "t"}, coords("x", dim)));
  Csv summary(out / "summary.csv", {"run", "t", "N"});
  Csv runs(out / "runs.csv", {"run", "births", "natural_deaths", "competitive_deaths", "audits", "max_audit_drift",
                              "acceptance_rate", "absorbed_at"});
  for (std::size_t r = 0; r < results.size(); ++r) {
    const RunResult& res = results[r];
    for (const Snapshot& s : res.snapshots) {
      for (const Point& p : s.points) {
        snaps << r << s.t;
        for (int d = 0; d < dim; ++d) snaps << p[d];
        snaps.end();
      }
      summary << r << s.t << s.points.size();
      summary.end();
    }
    runs << r << res.births << res.natural_deaths << res.competitive_deaths << res.audits << res.max_audit_drift
         << res.acceptance_rate << res.absorbed_at;
    runs.end();
  }

  json m = base_manifest("simulate");
  m["runs"] = resolved.runs;
  m["seed"] = resolved.seed;
  m["snapshot_times"] = times;
  m["files"] = {{"snapshots", "snapshots.csv"}, {"summary", "summary.csv"}, {"runs", "runs.csv"}};
  if (resolved.event_log) m["files"]["events"] = "events";
  finish(out, m, &resolved);
}

void kinetic(const RunConfig& config, const fs::path& out) {
  prepare(out);
  const ModelParams params = config.params();
  const auto traj = solve_kinetic(config.rho0, params, config.horizon, config.dt, config.snapshot_times());
  std::optional<double> q;
  if (params.competition.mass() > 0.0) q = bernoulli_q(BernoulliParams::from(params));

  Csv fields(out / "fields.csv", concat(concat({"t", "cell_index"}, coords("x", config.dim)), {"rho"}));
  Csv summary(out / "summary.csv", {"t", "min_rho", "max_rho", "mean_rho", "sup_error_vs_q"});
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    const Field& f = traj.fields[s];
    write_field(fields, traj.times[s], f);
    summary << traj.times[s] << f.min() << f.max() << f.mean();
    if (q) summary << std::max(std::abs(f.max() - *q), std::abs(f.min() - *q));
    else summary << std::string("");
    summary.end();
  }
  json m = base_manifest("kinetic");
  m["snapshot_times"] = traj.times;
  m["files"] = {{"fields", "fields.csv"}, {"summary", "summary.csv"}};
  if (q) m["q"] = *q;
  finish(out, m, &config);
}

void hierarchy(const RunConfig& config, std::optional<ClosureRule> closure, std::optional<double> epsilon,
               const fs::path& out) {
  prepare(out);
  RunConfig resolved = config;
  if (closure) resolved.closure = *closure;
  if (epsilon) {
    if (!(*epsilon >= 0.0 && *epsilon <= 1.0)) fail(ErrorKind::config, "--epsilon must lie in [0, 1]");
    resolved.hierarchy_epsilon = *epsilon;
  }
  ModelParams params = resolved.params();
  params.epsilon = resolved.hierarchy_epsilon.value_or(config.epsilon);
  HierarchyOptions opts;
  opts.kirkwood_floor_factor = config.kirkwood_floor;
  const auto traj = solve_hierarchy(TruncatedState::product(config.rho0), resolved.closure, params, config.horizon,
                                    config.dt, config.snapshot_times(), opts);

  Csv k1(out / "k1.csv", concat(concat({"t", "cell_index"}, coords("x", config.dim)), {"k1"}));
  Csv slice(out / "k2_slice.csv", {"t", "r", "value"});
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    write_field(k1, traj.times[s], traj.k1[s]);
    for (double r : resolved.slice_offsets) {
      slice << traj.times[s] << r << k2_slice(traj.k2[s], r);
      slice.end();
    }
  }
  json m = base_manifest("hierarchy");
  m["closure"] = closure_name(resolved.closure);
  m["epsilon"] = params.epsilon;
  m["snapshot_times"] = traj.times;
  m["max_symmetry_drift"] = traj.max_symmetry_drift;
  m["files"] = {{"k1", "k1.csv"}, {"k2_slice", "k2_slice.csv"}};
  finish(out, m, &resolved);
}

void stats(const fs::path& snapshots, const fs::path& out, unsigned jobs) {
  const json src = read_json(snapshots / "manifest.json");
  const std::string command = src.value("command", "");
  const RunConfig config = parse_config(snapshots / src.value("config", "config.ini"));
  prepare(out);
  const Grid& grid = config.grid;

  Csv density(out / "density.csv", {"t", "cell", "k1_hat", "se"});
  Csv pairs(out / "pairs.csv", {"t", "r_mid", "g_hat", "se"});
  Csv diag(out / "diagnostic.csv", {"t", "minimal_C", "flags"});
  std::optional<double> witness = config.witness ? config.witness : theory_witness(config);

  json m = base_manifest("stats");
  m["source"] = fs::absolute(snapshots).lexically_normal().string();
  m["source_command"] = command;

  if (command == "simulate") {
    const std::size_t runs = src.at("runs").get<std::size_t>();
    const auto times = src.at("snapshot_times").get<std::vector<double>>();
    std::map<double, std::size_t> slot;
    for (std::size_t s = 0; s < times.size(); ++s) slot[times[s]] = s;
    std::vector<EnsembleSnapshot> snaps(times.size());
    for (std::size_t s = 0; s < times.size(); ++s) snaps[s] = {grid.torus(), times[s], std::vector<std::vector<Point>>(runs)};
    for (const auto& row : read_rows(snapshots / src.at("files").at("snapshots").get<std::string>())) {
      if (row.size() != static_cast<std::size_t>(2 + config.dim)) fail(ErrorKind::io, "malformed snapshot row");
      const auto run = static_cast<std::size_t>(num(row[0]));
      const auto it = slot.find(num(row[1]));
      if (run >= runs || it == slot.end()) fail(ErrorKind::io, "snapshot row outside the manifest's runs or times");
      Point p{};
      for (int d = 0; d < config.dim; ++d) p[d] = num(row[2 + d]);
      snaps[it->second].runs[run].push_back(p);
    }
    const auto edges = config.rmax ? default_bin_edges(2.0 * *config.rmax, 0.0, config.bins)
                                   : default_bin_edges(config.side, std::max(config.aplus->radius(), config.aminus->radius()),
                                                       config.bins);
    for (const auto& snap : snaps) {
      const CorrelationEstimate est = estimate_correlations(snap, grid, edges, jobs);
      if (!witness) witness = subpoisson_diagnostic(est, 1.0).minimal_C;
      for (std::size_t c = 0; c < grid.size(); ++c) {
        density << snap.t << c << est.k1_hat.mean[c] << est.k1_hat.se[c];
        density.end();
      }
      for (const PairBin& b : est.pair_g) {
        pairs << snap.t << b.mid() << b.g << b.se;
        pairs.end();
      }
      const SubPoissonReport rep = subpoisson_diagnostic(est, *witness);
      diag << snap.t << rep.minimal_C << flag_text(rep);
      diag.end();
    }
    m["runs"] = runs;
  } else if (command == "kinetic" || command == "hierarchy") {
    // A deterministic field is a degenerate ensemble: k1_hat is the field itself with zero error.
    const std::string key = command == "kinetic" ? "fields" : "k1";
    std::map<double, Field> fields;
    std::vector<double> order;
    for (const auto& row : read_rows(snapshots / src.at("files").at(key).get<std::string>())) {
      const double t = num(row[0]);
      if (!fields.count(t)) {
        fields.emplace(t, Field(grid));
        order.push_back(t);
      }
      fields.at(t)[static_cast<std::size_t>(num(row[1]))] = num(row.back());
    }
    for (double t : order) {
      const Field& f = fields.at(t);
      CorrelationEstimate est;
      est.k1_hat = {f, Field(grid), 1};
      est.t = t;
      if (!witness) witness = std::max(f.max(), 1e-300);
      for (std::size_t c = 0; c < grid.size(); ++c) {
        density << t << c << f[c] << 0.0;
        density.end();
      }
      const SubPoissonReport rep = subpoisson_diagnostic(est, *witness);
      diag << t << rep.minimal_C << flag_text(rep);
      diag.end();
    }
  } else {
    fail(ErrorKind::io, "manifest in " + snapshots.string() + " does not describe snapshot data");
  }
  m["C"] = *witness;
  m["files"] = {{"density", "density.csv"}, {"pairs", "pairs.csv"}, {"diagnostic", "diagnostic.csv"}};
  finish(out, m, &config);
}

void scaling(const RunConfig& config, std::optional<ScalingMode> mode, const fs::path& out, unsigned jobs) {
  prepare(out);
  RunConfig resolved = config;
  if (mode) resolved.scaling_mode = *mode;
  ScalingOptions opts;
  opts.eps_list = config.eps_list;
  opts.horizon = config.horizon;
  opts.snapshot_times = config.snapshot_times();
  opts.dt = config.dt;
  opts.alpha_up = config.alpha_up;
  opts.alpha_low = config.alpha_low;
  opts.closure = config.closure;
  opts.runs = config.scaling_runs;
  opts.master_seed = config.seed;
  opts.jobs = jobs;
  opts.max_population = config.max_population;
  const ScalingReport report = vlasov_error(config.rho0, config.params(), resolved.scaling_mode, opts);

  const std::string norm =
      resolved.scaling_mode == ScalingMode::hierarchy
          ? "error norm: order-1 sup over cells and snapshots of |k1 - rho_t|, a truncation surrogate of the "
            "full correlation norm; order2_error is the sup of |k2 - rho_t (x) rho_t|"
          : "error norm: order-1 sup over snapshots of |spatial mean of eps * density - spatial mean of rho_t|, "
            "a truncation surrogate of the full correlation norm; ensemble means only";
  json plots = json::array();
  {
    Csv csv(out / "report.csv", {"eps", "sup_error", "mc_se", "runs", "order2_error"}, norm);
    for (const auto& e : report.entries) {
      csv << e.eps << e.sup_error << e.mc_se << e.runs << e.order2_error;
      csv.end();
    }
  }
  plots.push_back({{"file", "report.csv"}, {"x", "eps"}, {"y", "sup_error"}, {"yerr", "mc_se"}, {"xscale", "log"}});
  json files = {{"report", "report.csv"}};
  for (std::size_t k = 0; k < report.entries.size(); ++k) {
    const auto& e = report.entries[k];
    const std::string name = "trajectory_" + std::to_string(k) + ".csv";
    Csv csv(out / name, {"t", "estimate", "se", "reference", "cell_error"});
    for (const auto& p : e.trajectory) {
      csv << p.t << p.estimate << p.se << p.reference << p.cell_error;
      csv.end();
    }
    files["trajectory_" + std::to_string(k)] = name;
    plots.push_back({{"file", name},
                     {"x", "t"},
                     {"y", json::array({"estimate", "reference"})},
                     {"yerr", "se"},
                     {"label", "eps = " + format_double(e.eps)}});
  }
  json m = base_manifest("scaling");
  m["mode"] = scaling_mode_name(report.mode);
  m["norm"] = norm;
  m["alpha_up"] = report.alpha_up;
  m["alpha_low"] = std::isfinite(report.alpha_low) ? json(report.alpha_low) : json("-inf");
  m["t_star"] = std::isfinite(report.t_star) ? json(report.t_star) : json("inf");
  m["eps_list"] = report.epsilons();
  m["seed"] = config.seed;
  m["files"] = files;
  m["plots"] = plots;
  finish(out, m, &resolved);
}

void analyze(const RunConfig& config, const std::optional<fs::path>& out) {
  const Kernel& plus = *config.aplus;
  const Kernel& minus = *config.aminus;
  const auto theta = domination_theta(plus, minus);
  const double sup_rho = config.rho0.max();
  const double from_data = sup_rho > 0.0 ? -std::log(sup_rho) : HUGE_VAL;
  const double from_theta = theta ? -std::log(*theta) : HUGE_VAL;

  std::ostringstream table;
  table << std::setprecision(10);
  if (theta) table << "theta            " << *theta << "\n";
  else table << "theta            no finite theta\n";
  table << "admissible a*    a* < " << (theta ? format_double(from_theta) : std::string("inf"))
        << " (domination), a* <= " << format_double(from_data) << " (initial data)\n";

  double alpha_up = config.alpha_up.value_or(std::min(from_data, from_theta - 1e-6 * std::max(1.0, std::abs(from_theta))));
  std::optional<double> alpha_low;
  std::optional<double> t_star;
  if (!std::isfinite(alpha_up)) {
    table << "chosen a*        none (initial data vanishes and no finite theta)\n";
  } else {
    table << "chosen a*        " << alpha_up << (theta && !check_initial_space(*theta, alpha_up) ? "  (violates theta e^a* < 1)" : "")
          << "\n";
    if (config.alpha_low) {
      alpha_low = *config.alpha_low;
      t_star = horizon_T(*alpha_low, alpha_up, plus.mass(), minus.mass());
    } else if (minus.mass() > 0.0) {
      const AlphaOptimum opt = optimize_alpha(alpha_up, plus.mass(), minus.mass());
      alpha_low = opt.alpha_low;
      t_star = opt.t_max;
    }
    table << "optimal a_*      " << (alpha_low ? format_double(*alpha_low) : std::string("none (no competition)")) << "\n";
    table << "T*               " << (t_star ? format_double(*t_star) : std::string("inf")) << "\n";
  }
  if (minus.mass() > 0.0) {
    const double q = bernoulli_q(BernoulliParams::from(config.params()));
    table << "q                " << q << "\n";
    if (q > 0.0)
      table << "homogenization   " << (check_homogenization(plus, minus, config.mortality) ? "holds" : "fails") << "\n";
  }
  std::cout << table.str();

  if (!out) return;
  prepare(*out);
  {
    Csv csv(*out / "analyze.csv", {"theta", "alpha_up", "alpha_star_opt", "T_star"});
    csv << (theta ? format_double(*theta) : std::string("")) << (std::isfinite(alpha_up) ? format_double(alpha_up) : std::string(""))
        << (alpha_low ? format_double(*alpha_low) : std::string("")) << (t_star ? format_double(*t_star) : std::string(""));
    csv.end();
  }
  write_text(*out / "analyze.txt", table.str());
  json m = base_manifest("analyze");
  m["files"] = {{"analyze", "analyze.csv"}, {"table", "analyze.txt"}};
  finish(*out, m, &config);
}

int run(int argc, char** argv) {
  CLI::App app{"Spatial logistic model: microscopic simulation, kinetic limit and correlation hierarchy"};
  app.set_version_flag("--version", version_string());
  unsigned jobs = 0;
  app.add_option("--jobs", jobs, "Worker threads (0 = all cores)");
  app.require_subcommand(1);

  std::string config_path, out_dir, snapshots_dir;
  SimulateOverrides sim;
  std::size_t runs = 0;
  std::uint64_t seed = 0;
  std::string closure_arg, mode_arg;
  double epsilon_arg = -1.0;

  auto* simulate_cmd = app.add_subcommand("simulate", "Exact microscopic simulation ensemble");
  simulate_cmd->add_option("--config", config_path)->required();
  auto* runs_opt = simulate_cmd->add_option("--runs", runs);
  auto* seed_opt = simulate_cmd->add_option("--seed", seed);
  simulate_cmd->add_flag("--events", sim.events, "Write per-run event logs");
  simulate_cmd->add_option("--out", out_dir)->required();

  auto* kinetic_cmd = app.add_subcommand("kinetic", "Solve the kinetic equation");
  kinetic_cmd->add_option("--config", config_path)->required();
  kinetic_cmd->add_option("--out", out_dir)->required();

  auto* hierarchy_cmd = app.add_subcommand("hierarchy", "Solve the truncated correlation hierarchy");
  hierarchy_cmd->add_option("--config", config_path)->required();
  auto* closure_opt = hierarchy_cmd->add_option("--closure", closure_arg)->check(CLI::IsMember({"mean-field", "kirkwood"}));
  auto* epsilon_opt = hierarchy_cmd->add_option("--epsilon", epsilon_arg);
  hierarchy_cmd->add_option("--out", out_dir)->required();

  auto* stats_cmd = app.add_subcommand("stats", "Correlation estimates from a snapshot directory");
  stats_cmd->add_option("--snapshots", snapshots_dir)->required();
  stats_cmd->add_option("--out", out_dir)->required();

  auto* scaling_cmd = app.add_subcommand("scaling", "Vlasov scaling experiment");
  scaling_cmd->add_option("--config", config_path)->required();
  auto* mode_opt = scaling_cmd->add_option("--mode", mode_arg)->check(CLI::IsMember({"microsim", "hierarchy"}));
  scaling_cmd->add_option("--out", out_dir)->required();

  auto* analyze_cmd = app.add_subcommand("analyze", "Theory utilities: theta, alpha range, T*");
  analyze_cmd->add_option("--config", config_path)->required();
  auto* analyze_out = analyze_cmd->add_option("--out", out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const fs::path out = resolve_out_dir(out_dir);
    if (*simulate_cmd) {
      if (*runs_opt) sim.runs = runs;
      if (*seed_opt) sim.seed = seed;
      simulate(parse_config(config_path), sim, out, jobs);
    } else if (*kinetic_cmd) {
      kinetic(parse_config(config_path), out);
    } else if (*hierarchy_cmd) {
      hierarchy(parse_config(config_path), *closure_opt ? std::optional(parse_closure(closure_arg)) : std::nullopt,
                *epsilon_opt ? std::optional(epsilon_arg) : std::nullopt, out);
    } else if (*stats_cmd) {
      stats(snapshots_dir, out, jobs);
    } else if (*scaling_cmd) {
      scaling(parse_config(config_path), *mode_opt ? std::optional(parse_scaling_mode(mode_arg)) : std::nullopt, out,
              jobs);
    } else if (*analyze_cmd) {
      analyze(parse_config(config_path), *analyze_out ? std::optional(out) : std::nullopt);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << category_name(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace slm::cli
