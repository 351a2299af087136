#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "slm/errors.hpp"

namespace slm::cli {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

using boost::property_tree::ptree;

const std::map<std::string, std::set<std::string>> kSchema = {
    {"domain", {"dim", "side", "spacing"}},
    {"dispersal", {"shape", "height", "mass", "radius", "sigma", "cutoff", "file"}},
    {"competition", {"shape", "height", "mass", "radius", "sigma", "cutoff", "file"}},
    {"model", {"mortality", "epsilon"}},
    {"initial", {"type", "value", "file"}},
    {"time", {"horizon", "dt", "snapshots"}},
    {"simulation", {"runs", "seed", "max_population", "audit_interval", "event_log"}},
    {"theory", {"alpha_up", "alpha_low"}},
    {"hierarchy", {"closure", "epsilon", "offsets", "kirkwood_floor"}},
    {"scaling", {"mode", "eps_list", "runs"}},
    {"stats", {"bins", "rmax", "C"}},
};

[[noreturn]] void config_error(const std::string& what) { fail(ErrorKind::config, what); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
    config_error(key + ": expected a number, got '" + raw + "'");
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
    config_error(key + ": expected a nonnegative integer, got '" + raw + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  config_error(key + ": expected true or false, got '" + raw + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(to_double(key, item));
  }
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + format_double(xs[i]);
  return out;
}

class Reader {
 public:
  explicit Reader(const ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    const auto sec = tree_.get_child_optional(ptree::path_type(section, '\0'));
    if (!sec) return std::nullopt;
    const auto v = sec->get_optional<std::string>(ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return trim(*v);
  }
  template <class T, class F>
  void read(const std::string& section, const std::string& key, T& out, F convert) const {
    if (auto v = raw(section, key)) out = convert(section + "." + key, *v);
  }
  void number(const std::string& s, const std::string& k, double& out) const { read(s, k, out, to_double); }
  void number(const std::string& s, const std::string& k, std::optional<double>& out) const {
    if (auto v = raw(s, k)) out = to_double(s + "." + k, *v);
  }
  template <class I>
  void integer(const std::string& s, const std::string& k, I& out) const {
    if (auto v = raw(s, k)) out = static_cast<I>(to_unsigned(s + "." + k, *v));
  }
  void text(const std::string& s, const std::string& k, std::string& out) const {
    if (auto v = raw(s, k)) out = *v;
  }
  void list(const std::string& s, const std::string& k, std::vector<double>& out) const {
    if (auto v = raw(s, k)) out = to_list(s + "." + k, *v);
  }
  void flag(const std::string& s, const std::string& k, bool& out) const { read(s, k, out, to_bool); }

 private:
  const ptree& tree_;
};

void check_schema(const ptree& tree) {
  std::vector<std::string> unknown;
  for (const auto& [section, body] : tree) {
    const auto it = kSchema.find(section);
    if (it == kSchema.end()) {
      unknown.push_back("[" + section + "]");
      continue;
    }
    for (const auto& [key, value] : body)
      if (!it->second.count(key)) unknown.push_back(section + "." + key);
  }
  if (unknown.empty()) return;
  std::string msg = "unknown keys:";
  for (const auto& u : unknown) msg += " " + u;
  config_error(msg);
}

void read_kernel(const Reader& r, const std::string& section, KernelSpec& k, const std::filesystem::path& base) {
  r.text(section, "shape", k.shape);
  r.number(section, "height", k.height);
  r.number(section, "mass", k.mass);
  r.number(section, "radius", k.radius);
  r.number(section, "sigma", k.sigma);
  r.number(section, "cutoff", k.cutoff);
  std::string file;
  r.text(section, "file", file);
  if (!file.empty()) k.file = std::filesystem::absolute(base / file).lexically_normal();
}

std::vector<std::vector<std::string>> read_csv_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(trim(c));
    rows.push_back(std::move(cols));
  }
  return rows;
}

bool is_number(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty();
}

Kernel build_kernel(const std::string& section, const KernelSpec& k, const Grid& grid) {
  try {
    if (k.shape == "zero") return Kernel::zero(grid);
    if (k.shape == "indicator") {
      if (k.height && k.mass) config_error(section + ": give either height or mass, not both");
      const double height = k.mass ? *k.mass / ball_volume(grid.dim(), k.radius) : k.height.value_or(1.0);
      return Kernel::indicator(height, k.radius, grid);
    }
    if (k.shape == "gaussian") {
      if (k.mass) config_error(section + ": gaussian kernels take a height or are normalized to unit mass");
      return Kernel::gaussian(k.sigma, k.cutoff, k.height, grid);
    }
    if (k.shape == "tabulated") {
      if (k.file.empty()) config_error(section + ": tabulated kernels need a file");
      std::vector<double> radii, values;
      for (const auto& row : read_csv_rows(k.file)) {
        if (row.size() != 2) config_error(section + ": kernel file rows must have two columns (offset, value)");
        if (radii.empty() && values.empty() && !is_number(row[0])) continue;  // header
        radii.push_back(to_double(section + ".file", row[0]));
        values.push_back(to_double(section + ".file", row[1]));
      }
      return Kernel::radial_profile(radii, values, grid);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config || e.kind() == ErrorKind::io) throw;
    config_error(section + ": " + e.what());
  }
  config_error(section + ".shape: unknown kernel shape '" + k.shape + "' (indicator, gaussian, tabulated, zero)");
}

Field build_initial(const InitialSpec& init, const Grid& grid) {
  if (init.type == "constant") {
    if (!(init.value >= 0.0)) config_error("initial.value: density must be nonnegative");
    return Field(grid, init.value);
  }
  if (init.type == "table") {
    if (init.file.empty()) config_error("initial.file: table initial data needs a file");
    std::vector<double> values;
    for (const auto& row : read_csv_rows(init.file)) {
      if (values.empty() && !is_number(row.back())) continue;  // header
      values.push_back(to_double("initial.file", row.back()));
    }
    if (values.size() != grid.size())
      config_error("initial.file: expected " + std::to_string(grid.size()) + " cell values, found " +
                   std::to_string(values.size()));
    for (double v : values)
      if (!(v >= 0.0)) config_error("initial.file: densities must be nonnegative");
    return Field(grid, std::move(values));
  }
  config_error("initial.type: unknown initial data type '" + init.type + "' (constant, table)");
}

void check(bool ok, const std::string& what) {
  if (!ok) config_error(what);
}

void validate(RunConfig& c) {
  check(c.dim >= 1 && c.dim <= 3, "domain.dim must be 1, 2 or 3");
  check(c.side > 0.0, "domain.side must be positive");
  check(c.spacing > 0.0, "domain.spacing must be positive");
  try {
    c.grid = Grid::from_spacing(c.dim, c.side, c.spacing);
  } catch (const Error& e) {
    config_error(std::string("domain: ") + e.what());
  }
  c.aplus = build_kernel("dispersal", c.dispersal, c.grid);
  c.aminus = build_kernel("competition", c.competition, c.grid);
  check(c.mortality >= 0.0, "model.mortality must be nonnegative");
  check(c.epsilon >= 0.0 && c.epsilon <= 1.0, "model.epsilon must lie in [0, 1]");
  c.rho0 = build_initial(c.initial, c.grid);

  check(c.dt > 0.0, "time.dt must be positive");
  check(c.horizon >= 0.0, "time.horizon must be nonnegative");
  for (std::size_t i = 0; i < c.snapshots.size(); ++i) {
    check(c.snapshots[i] >= 0.0 && c.snapshots[i] <= c.horizon, "time.snapshots must lie within [0, horizon]");
    if (i > 0) check(c.snapshots[i] > c.snapshots[i - 1], "time.snapshots must be strictly increasing");
  }
  check(c.runs >= 1, "simulation.runs must be at least 1");
  check(c.max_population >= 1, "simulation.max_population must be at least 1");
  if (c.alpha_up && c.alpha_low) check(*c.alpha_low < *c.alpha_up, "theory.alpha_low must be below theory.alpha_up");
  if (c.hierarchy_epsilon)
    check(*c.hierarchy_epsilon >= 0.0 && *c.hierarchy_epsilon <= 1.0, "hierarchy.epsilon must lie in [0, 1]");
  for (double r : c.slice_offsets) check(r >= 0.0 && r < 0.5 * c.side, "hierarchy.offsets must lie in [0, L/2)");
  check(c.kirkwood_floor > 0.0, "hierarchy.kirkwood_floor must be positive");
  check(!c.eps_list.empty(), "scaling.eps_list must not be empty");
  for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
    check(c.eps_list[i] > 0.0 && c.eps_list[i] <= 1.0, "scaling.eps_list values must lie in (0, 1]");
    if (i > 0) check(c.eps_list[i] < c.eps_list[i - 1], "scaling.eps_list must be strictly decreasing");
  }
  check(c.bins >= 1, "stats.bins must be at least 1");
  if (c.rmax) check(*c.rmax > 0.0 && *c.rmax <= 0.5 * c.side, "stats.rmax must lie in (0, L/2]");
  if (c.witness) check(*c.witness > 0.0, "stats.C must be positive");
}

}  // namespace

std::vector<double> RunConfig::snapshot_times() const {
  return snapshots.empty() ? std::vector<double>{horizon} : snapshots;
}

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    config_error(std::string("malformed config: ") + e.what());
  }
  for (const auto& [key, value] : tree)
    if (value.empty() && !value.data().empty()) config_error("key '" + key + "' outside any section");
  check_schema(tree);
  // read_ini drops sections without keys; reject unknown ones anyway.
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    line = trim(line);
    if (line.size() > 2 && line.front() == '[' && line.back() == ']' && !kSchema.count(trim(line.substr(1, line.size() - 2))))
      config_error("unknown keys: " + line);
  }

  RunConfig c;
  const Reader r(tree);
  r.integer("domain", "dim", c.dim);
  r.number("domain", "side", c.side);
  r.number("domain", "spacing", c.spacing);
  read_kernel(r, "dispersal", c.dispersal, base_dir);
  read_kernel(r, "competition", c.competition, base_dir);
  r.number("model", "mortality", c.mortality);
  r.number("model", "epsilon", c.epsilon);
  r.text("initial", "type", c.initial.type);
  r.number("initial", "value", c.initial.value);
  std::string init_file;
  r.text("initial", "file", init_file);
  if (!init_file.empty()) c.initial.file = std::filesystem::absolute(base_dir / init_file).lexically_normal();
  r.number("time", "horizon", c.horizon);
  r.number("time", "dt", c.dt);
  r.list("time", "snapshots", c.snapshots);
  r.integer("simulation", "runs", c.runs);
  r.integer("simulation", "seed", c.seed);
  r.integer("simulation", "max_population", c.max_population);
  r.integer("simulation", "audit_interval", c.audit_interval);
  r.flag("simulation", "event_log", c.event_log);
  r.number("theory", "alpha_up", c.alpha_up);
  r.number("theory", "alpha_low", c.alpha_low);
  if (auto v = r.raw("hierarchy", "closure")) {
    try {
      c.closure = parse_closure(*v);
    } catch (const Error& e) {
      config_error(std::string("hierarchy.closure: ") + e.what());
    }
  }
  r.number("hierarchy", "epsilon", c.hierarchy_epsilon);
  r.list("hierarchy", "offsets", c.slice_offsets);
  r.number("hierarchy", "kirkwood_floor", c.kirkwood_floor);
  if (auto v = r.raw("scaling", "mode")) {
    try {
      c.scaling_mode = parse_scaling_mode(*v);
    } catch (const Error& e) {
      config_error(std::string("scaling.mode: ") + e.what());
    }
  }
  r.list("scaling", "eps_list", c.eps_list);
  r.integer("scaling", "runs", c.scaling_runs);
  r.integer("stats", "bins", c.bins);
  r.number("stats", "rmax", c.rmax);
  r.number("stats", "C", c.witness);
  validate(c);
  return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::filesystem::absolute(path).parent_path());
}

std::string RunConfig::resolved_text() const {
  std::ostringstream o;
  const auto opt = [&](const char* key, const std::optional<double>& v) {
    if (v) o << key << " = " << format_double(*v) << "\n";
    else o << "; " << key << " unset\n";
  };
  const auto kernel = [&](const char* name, const KernelSpec& k) {
    o << "\n[" << name << "]\nshape = " << k.shape << "\n";
    if (k.shape == "indicator") {
      if (k.mass) o << "mass = " << format_double(*k.mass) << "\n";
      else o << "height = " << format_double(k.height.value_or(1.0)) << "\n";
      o << "radius = " << format_double(k.radius) << "\n";
    } else if (k.shape == "gaussian") {
      o << "sigma = " << format_double(k.sigma) << "\ncutoff = " << format_double(k.cutoff) << "\n";
      opt("height", k.height);
    } else if (k.shape == "tabulated") {
      o << "file = " << k.file.string() << "\n";
    }
  };
  o << "[domain]\ndim = " << dim << "\nside = " << format_double(side) << "\nspacing = " << format_double(spacing)
    << "\n";
  kernel("dispersal", dispersal);
  kernel("competition", competition);
  o << "\n[model]\nmortality = " << format_double(mortality) << "\nepsilon = " << format_double(epsilon) << "\n";
  o << "\n[initial]\ntype = " << initial.type << "\n";
  if (initial.type == "constant") o << "value = " << format_double(initial.value) << "\n";
  else o << "file = " << initial.file.string() << "\n";
  o << "\n[time]\nhorizon = " << format_double(horizon) << "\ndt = " << format_double(dt)
    << "\nsnapshots = " << join(snapshot_times()) << "\n";
  o << "\n[simulation]\nruns = " << runs << "\nseed = " << seed << "\nmax_population = " << max_population
    << "\naudit_interval = " << audit_interval << "\nevent_log = " << (event_log ? "true" : "false") << "\n";
  o << "\n[theory]\n";
  opt("alpha_up", alpha_up);
  opt("alpha_low", alpha_low);
  o << "\n[hierarchy]\nclosure = " << closure_name(closure) << "\n";
  opt("epsilon", hierarchy_epsilon);
  o << "offsets = " << join(slice_offsets) << "\nkirkwood_floor = " << format_double(kirkwood_floor) << "\n";
  o << "\n[scaling]\nmode = " << scaling_mode_name(scaling_mode) << "\neps_list = " << join(eps_list)
    << "\nruns = " << scaling_runs << "\n";
  o << "\n[stats]\nbins = " << bins << "\n";
  opt("rmax", rmax);
  opt("C", witness);
  return o.str();
}

}  // namespace slm::cli
