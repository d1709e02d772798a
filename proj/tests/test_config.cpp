#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "thermoflow/config.hpp"
#include "thermoflow/run.hpp"
#include "thermoflow/scenario.hpp"

using namespace thermoflow;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string shipped(const char* name) {
  return slurp(fs::path(THERMOFLOW_SOURCE_DIR) / "configs" / name);
}

std::string replace_line(std::string text, const std::string& key, const std::string& line) {
  const auto pos = text.find(key);
  REQUIRE(pos != std::string::npos);
  const auto end = text.find('\n', pos);
  return text.replace(pos, end - pos, line);
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("thermoflow_test_" + name);
  fs::remove_all(p);
  return p;
}

int count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  int k = 0;
  while (std::getline(in, line)) ++k;
  return k;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("shipped configurations parse") {
  const ScenarioConfig iso = parse_config(shipped("nc4_isolated.cfg"));
  CHECK(iso.substance.T_crit == 425.2);
  CHECK(iso.grid.nx == 40);
  CHECK(iso.scheme.dt == 3e-13);
  CHECK(iso.scheme.convection == ConvectionMode::skew);
  CHECK(iso.scenario.kind == ScenarioKind::isolated_square);
  CHECK(iso.run.n_steps == 500);

  const ScenarioConfig bub = parse_config(shipped("nc4_bubble.cfg"));
  CHECK(bub.scheme.dt == 5e-13);
  CHECK(bub.scenario.kind == ScenarioKind::bubble_tanh);
  CHECK(bub.scenario.T_bottom == 348.0);
  CHECK(bub.run.n_steps == 50000);
}

TEST_CASE("invalid configurations are rejected") {
  const std::string text = shipped("nc4_isolated.cfg");
  CHECK_THROWS_WITH_AS(parse_config(replace_line(text, "substance.T_crit", "")),
                       doctest::Contains("substance.T_crit"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(replace_line(text, "scheme.dt", "scheme.dt = -1")),
                       doctest::Contains("scheme.dt"), ConfigError);
  CHECK_THROWS_AS(parse_config(text + "scheme.bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(text + "grid.nx = 12\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(replace_line(text, "grid.nx", "grid.nx = 2")), ConfigError);
  CHECK_THROWS_AS(parse_config(replace_line(text, "scheme.convection", "scheme.convection = central")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(text + "this line has no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/thermoflow.cfg"), ConfigError);
}

TEST_CASE("serialization round-trips") {
  for (const char* name : {"nc4_isolated.cfg", "nc4_bubble.cfg"}) {
    const ScenarioConfig a = parse_config(shipped(name));
    const std::string once = serialize_config(a);
    const ScenarioConfig b = parse_config(once);
    CHECK(serialize_config(b) == once);
    CHECK(b.substance.theta0 == a.substance.theta0);
    CHECK(b.scheme.dt == a.scheme.dt);
    CHECK(b.scenario.n_liquid == a.scenario.n_liquid);
  }
  ScenarioConfig custom = fixtures::small_droplet();
  custom.scenario.kind = ScenarioKind::custom;
  custom.scenario.n_init = 500.0;
  custom.scenario.bc.at(Edge::left) = EdgeCondition::dirichlet(350.0);
  custom.scenario.bc.at(Edge::top) = EdgeCondition::neumann(-2.5);
  custom.grid.has_origin = true;
  custom.grid.x0 = 1e-9;
  const std::string text = serialize_config(custom);
  const ScenarioConfig back = parse_config(text);
  CHECK(serialize_config(back) == text);
  CHECK(back.scenario.bc.at(Edge::left).kind == EdgeCondition::Kind::dirichlet);
  CHECK(back.scenario.bc.at(Edge::top).value == -2.5);
  CHECK(back.grid.x0 == 1e-9);
}

TEST_CASE("isolated square initial state") {
  const PengRobinson eos(Substance::n_butane());
  const ScenarioConfig cfg = parse_config(shipped("nc4_isolated.cfg"));
  const Scenario sc = build_scenario(eos, cfg);
  const Grid& g = sc.grid;
  CHECK(sc.bc.all_adiabatic());
  int liquid = 0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      CHECK(sc.state.n(i, j) == sc.state.n(g.nx - 1 - i, j));
      CHECK(sc.state.n(i, j) == sc.state.n(j, i));
      if (sc.state.n(i, j) == cfg.scenario.n_liquid) ++liquid;
    }
  }
  // r = 0.35 * 10 nm = 3.5 nm: 14 cells of 0.5 nm per side
  CHECK(liquid == 14 * 14);
  const double mass = domain_integral(g, sc.state.n);
  const double expected = (196 * cfg.scenario.n_liquid + (1600 - 196) * cfg.scenario.n_gas) *
                          g.cell_volume();
  CHECK(mass == doctest::Approx(expected).epsilon(1e-13));
  for (double v : sc.state.T.values()) CHECK(v == 345.0);
}

TEST_CASE("bubble initial state") {
  const PengRobinson eos(Substance::n_butane());
  ScenarioConfig cfg = parse_config(shipped("nc4_bubble.cfg"));
  cfg.scenario.w = 2.0;  // resolve the profile so monotonicity is visible
  const Scenario sc = build_scenario(eos, cfg);
  const Grid& g = sc.grid;
  CHECK(sc.bc.at(Edge::top).kind == EdgeCondition::Kind::dirichlet);
  CHECK(sc.bc.at(Edge::top).value == 345.0);
  CHECK(sc.bc.at(Edge::bottom).value == 348.0);
  CHECK(sc.bc.at(Edge::left).kind == EdgeCondition::Kind::neumann);
  const int jm = g.ny / 2;
  for (int i = g.nx / 2; i + 1 < g.nx; ++i) CHECK(sc.state.n(i + 1, jm) > sc.state.n(i, jm));
  for (int i = 0; i < g.nx; ++i) CHECK(sc.state.n(i, jm) == doctest::Approx(sc.state.n(g.nx - 1 - i, jm)));

  cfg.scenario.w = 1e5;
  const Scenario sharp = build_scenario(eos, cfg);
  CHECK(sharp.state.n(0, 0) == doctest::Approx(cfg.scenario.n_liquid).epsilon(1e-12));
  CHECK(sharp.state.n(g.nx / 2, g.ny / 2) == doctest::Approx(cfg.scenario.n_gas).epsilon(1e-12));
}

TEST_CASE("run writes diagnostics and snapshots") {
  ScenarioConfig cfg = fixtures::small_droplet(10, 5);
  cfg.run.snapshot_every = 2;
  const fs::path out = scratch("run");
  cfg.run.output_dir = out.string();
  std::ostringstream log;
  CHECK(run(cfg, log) == kExitOk);
  CHECK(count_lines(out / "diagnostics.csv") == 1 + 6);
  CHECK(slurp(out / "diagnostics.csv").rfind(kDiagnosticsHeader, 0) == 0);
  for (long s : {0L, 2L, 4L, 5L}) CHECK(fs::exists(out / snapshot_name(s)));
  CHECK_FALSE(fs::exists(out / snapshot_name(1)));
  CHECK(count_lines(out / snapshot_name(5)) == 1 + 100);
  CHECK(slurp(out / snapshot_name(0)).rfind(kSnapshotHeader, 0) == 0);
  CHECK(snapshot_name(12) == "fields_000012.csv");
  fs::remove_all(out);
}

TEST_CASE("runs are deterministic") {
  ScenarioConfig cfg = fixtures::small_droplet(10, 3);
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  std::ostringstream log;
  cfg.run.output_dir = a.string();
  REQUIRE(run(cfg, log) == kExitOk);
  cfg.run.output_dir = b.string();
  REQUIRE(run(cfg, log) == kExitOk);
  CHECK(slurp(a / "diagnostics.csv") == slurp(b / "diagnostics.csv"));
  CHECK(slurp(a / snapshot_name(3)) == slurp(b / snapshot_name(3)));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("snapshot_every = 0 keeps only the initial and final snapshots") {
  ScenarioConfig cfg = fixtures::small_droplet(10, 3);
  cfg.run.snapshot_every = 0;
  const fs::path out = scratch("snap0");
  cfg.run.output_dir = out.string();
  std::ostringstream log;
  REQUIRE(run(cfg, log) == kExitOk);
  int snapshots = 0;
  for (const auto& e : fs::directory_iterator(out)) {
    if (e.path().filename().string().rfind("fields_", 0) == 0) ++snapshots;
  }
  CHECK(snapshots == 2);
  CHECK(fs::exists(out / snapshot_name(0)));
  CHECK(fs::exists(out / snapshot_name(3)));
  fs::remove_all(out);
}

TEST_CASE("invalid scenario reports a configuration error") {
  ScenarioConfig cfg = fixtures::small_droplet(10, 1);
  cfg.substance.T_crit = -1.0;
  cfg.run.output_dir = scratch("bad").string();
  std::ostringstream log;
  CHECK(run(cfg, log) == kExitConfigError);
  CHECK(log.str().find("error") != std::string::npos);
}

}  // TEST_SUITE
