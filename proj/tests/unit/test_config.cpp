#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>

#include "config.hpp"
#include "doctest.h"
#include "slm/errors.hpp"

using namespace slm;
using namespace slm::cli;

namespace {

const std::string kMinimal = R"([domain]
dim = 1
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
value = 0.25
)";

ErrorKind kind_of(const std::string& text) {
  try {
    parse_config_text(text, ".");
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("config was accepted");
  return ErrorKind::config;
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("minimal config materializes the model") {
  const RunConfig c = parse_config_text(kMinimal, ".");
  CHECK(c.grid.size() == 64);
  CHECK(c.aplus->mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.aminus->mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.rho0.min() == 0.25);
  CHECK(c.rho0.max() == 0.25);
  CHECK(c.snapshot_times() == std::vector<double>{1.0});
  CHECK(c.params().mortality == 0.3);
}

TEST_CASE("invalid values are config errors") {
  CHECK(kind_of(replace(kMinimal, "radius = 1", "radius = 8")) == ErrorKind::config);
  CHECK(kind_of(kMinimal + "[model2]\n") == ErrorKind::config);
  CHECK(kind_of(kMinimal + "[model]\nepsilon = 0.5\n") == ErrorKind::config);
  CHECK(kind_of(kMinimal + "[time]\ndt = 0\n") == ErrorKind::config);
  CHECK(kind_of(kMinimal + "[time]\nhorizon = 1\nsnapshots = 0.5, 0.25\n") == ErrorKind::config);
  CHECK(kind_of(replace(kMinimal, "spacing = 0.125", "spacing = 0.3")) == ErrorKind::config);
  CHECK(kind_of(replace(kMinimal, "mortality = 0.3", "mortality = abc")) == ErrorKind::config);
  CHECK(kind_of(replace(kMinimal, "value = 0.25", "value = -1")) == ErrorKind::config);
  CHECK(kind_of(kMinimal + "[scaling]\neps_list = 0.5, 1\n") == ErrorKind::config);
}

TEST_CASE("unknown keys are listed") {
  try {
    parse_config_text(replace(kMinimal, "mortality", "mortalty") + "[extra]\nx = 1\n", ".");
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    const std::string msg = e.what();
    CHECK(msg.find("model.mortalty") != std::string::npos);
    CHECK(msg.find("[extra]") != std::string::npos);
  }
}

TEST_CASE("resolved text round trips") {
  const RunConfig a = parse_config_text(kMinimal + "[time]\nhorizon = 2\nsnapshots = 0.5, 2\n[theory]\nalpha_up = 0.7\n", ".");
  const std::string text = a.resolved_text();
  const RunConfig b = parse_config_text(text, ".");
  CHECK(b.resolved_text() == text);
  CHECK(b.snapshot_times() == a.snapshot_times());
  CHECK(b.alpha_up == a.alpha_up);
  CHECK(!b.alpha_low);
  CHECK(b.rho0.values == a.rho0.values);
  CHECK(std::ranges::equal(b.aminus->table(), a.aminus->table()));
}

TEST_CASE("tabulated inputs") {
  const auto dir = std::filesystem::temp_directory_path() / "slm_test_config";
  std::filesystem::create_directories(dir);
  {
    std::ofstream k(dir / "kernel.csv");
    k << "offset,value\n0,1\n0.5,1\n0.5001,0\n";
    std::ofstream f(dir / "rho.csv");
    f << "cell,value\n";
    for (int i = 0; i < 64; ++i) f << i << "," << 0.01 * i << "\n";
  }
  const std::string text = replace(replace(kMinimal, "mass = 1\nradius = 0.5", "shape = tabulated\nfile = kernel.csv"),
                                   "value = 0.25", "type = table\nfile = rho.csv");
  const RunConfig c = parse_config_text(text, dir);
  CHECK(c.rho0[10] == doctest::Approx(0.1));
  // centers at |x| <= 0.5 on h = 0.125: nine cells of value 1
  CHECK(c.aplus->mass() == doctest::Approx(9 * 0.125).epsilon(1e-12));
  CHECK(kind_of(replace(kMinimal, "value = 0.25", "type = table\nfile = /nonexistent/rho.csv")) != ErrorKind::precondition);
}
