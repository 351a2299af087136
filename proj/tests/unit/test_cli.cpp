#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status;
  std::string output;
};

Outcome cli(const std::string& args) {
  const std::string cmd = std::string(SLM_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Workspace {
  fs::path dir;
  explicit Workspace(const std::string& name) : dir(fs::temp_directory_path() / name) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return dir / name;
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

const std::string kBase = R"([domain]
side = 8
spacing = 0.125
[dispersal]
mass = 1
radius = 0.5
[competition]
mass = 1
radius = 1
[model]
mortality = 0.3
[initial]
value = 0.5
[time]
horizon = 0.5
snapshots = 0.25, 0.5
[simulation]
runs = 6
seed = 11
)";

}  // namespace

TEST_CASE("version flag") {
  const Outcome o = cli("--version");
  CHECK(o.status == 0);
  CHECK(o.output.find("slm-cli ") == 0);
}

TEST_CASE("analyze reports infinite theta without failing") {
  Workspace ws("slm_cli_analyze");
  const auto cfg = ws.write("c.ini", R"([domain]
side = 8
spacing = 0.125
[dispersal]
mass = 1
radius = 1
[competition]
mass = 1
radius = 0.5
[initial]
value = 0.5
)");
  const Outcome o = cli("analyze --config " + cfg.string() + " --out " + ws.path("out"));
  CHECK(o.status == 0);
  CHECK(o.output.find("no finite theta") != std::string::npos);
  CHECK(fs::exists(ws.dir / "out" / "analyze.csv"));
  CHECK(fs::exists(ws.dir / "out" / "manifest.json"));
}

TEST_CASE("blow-up is reported with its category") {
  Workspace ws("slm_cli_blowup");
  const auto cfg = ws.write("c.ini", R"([domain]
side = 8
spacing = 0.125
[dispersal]
mass = 3
radius = 0.5
[competition]
shape = zero
[model]
mortality = 0.1
[initial]
value = 2
[time]
horizon = 20
[simulation]
max_population = 200
)");
  const Outcome o = cli("simulate --config " + cfg.string() + " --out " + ws.path("out"));
  CHECK(o.status != 0);
  CHECK(o.output.find("error: blow-up") != std::string::npos);
}

TEST_CASE("config errors exit cleanly") {
  Workspace ws("slm_cli_bad");
  const auto cfg = ws.write("c.ini", kBase + "[simulation2]\n");
  const Outcome o = cli("kinetic --config " + cfg.string() + " --out " + ws.path("out"));
  CHECK(o.status == 2);
  CHECK(o.output.find("error: config") != std::string::npos);
  CHECK(o.output.find("simulation2") != std::string::npos);
}

TEST_CASE("simulate then stats, reproducibly") {
  Workspace ws("slm_cli_sim");
  const auto cfg = ws.write("c.ini", kBase);
  for (const char* out : {"a", "b"}) {
    REQUIRE(cli("simulate --config " + cfg.string() + " --events --out " + ws.path(out)).status == 0);
    REQUIRE(cli("stats --snapshots " + ws.path(out) + " --out " + ws.path(std::string(out) + "_stats")).status == 0);
  }
  for (const char* f : {"snapshots.csv", "summary.csv", "runs.csv", "manifest.json", "config.ini", "events/run_00003.csv"})
    CHECK(slurp(ws.dir / "a" / f) == slurp(ws.dir / "b" / f));
  for (const char* f : {"density.csv", "pairs.csv", "diagnostic.csv"}) {
    CHECK(!slurp(ws.dir / "a_stats" / f).empty());
    CHECK(slurp(ws.dir / "a_stats" / f) == slurp(ws.dir / "b_stats" / f));
  }
  const auto m = nlohmann::json::parse(slurp(ws.dir / "a" / "manifest.json"));
  CHECK(m["command"] == "simulate");
  CHECK(m["runs"] == 6);
  CHECK(m["seed"] == 11);
  CHECK(m["version"].get<std::string>().find("slm-cli") == 0);

  REQUIRE(cli("simulate --config " + cfg.string() + " --seed 12 --runs 3 --out " + ws.path("c")).status == 0);
  CHECK(slurp(ws.dir / "a" / "snapshots.csv") != slurp(ws.dir / "c" / "snapshots.csv"));
  CHECK(nlohmann::json::parse(slurp(ws.dir / "c" / "manifest.json"))["runs"] == 3);
}

TEST_CASE("kinetic, hierarchy and stats on deterministic output") {
  Workspace ws("slm_cli_det");
  const auto cfg = ws.write("c.ini", kBase);
  REQUIRE(cli("kinetic --config " + cfg.string() + " --out " + ws.path("k")).status == 0);
  REQUIRE(cli("stats --snapshots " + ws.path("k") + " --out " + ws.path("ks")).status == 0);
  CHECK(slurp(ws.dir / "ks" / "density.csv").find("0.25,0,") != std::string::npos);
  REQUIRE(cli("hierarchy --config " + cfg.string() + " --closure kirkwood --epsilon 0.5 --out " + ws.path("h")).status == 0);
  const auto m = nlohmann::json::parse(slurp(ws.dir / "h" / "manifest.json"));
  CHECK(m["closure"] == "kirkwood");
  CHECK(m["epsilon"] == 0.5);
  CHECK(slurp(ws.dir / "h" / "k2_slice.csv").find("t,r,value") == 0);
  CHECK(cli("hierarchy --config " + cfg.string() + " --closure bogus --out " + ws.path("h2")).status != 0);
}

TEST_CASE("scaling refuses horizons beyond T*") {
  Workspace ws("slm_cli_scaling");
  const auto cfg = ws.write("c.ini", kBase + "[theory]\nalpha_up = 0.5\nalpha_low = 0.4\n");
  const Outcome o = cli("scaling --config " + cfg.string() + " --out " + ws.path("s"));
  CHECK(o.status == 13);
  CHECK(o.output.find("horizon") != std::string::npos);
  const auto ok = ws.write("ok.ini", kBase + "[theory]\nalpha_up = 3\n");
  REQUIRE(cli("scaling --config " + ok.string() + " --out " + ws.path("s2")).status == 0);
  CHECK(fs::exists(ws.dir / "s2" / "report.csv"));
  CHECK(fs::exists(ws.dir / "s2" / "trajectory_3.csv"));
}
