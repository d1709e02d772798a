#include "thermoflow/run.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace thermoflow {

namespace {

std::string g17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

Simulation::Simulation(const ScenarioConfig& cfg)
    : cfg_(cfg),
      eos_(std::make_unique<PengRobinson>(cfg.substance)),
      scenario_(build_scenario(*eos_, cfg)),
      integrator_(std::make_unique<Integrator>(*eos_, scenario_.grid, scenario_.bc, cfg.scheme)) {
  records_.push_back(make_record(scenario_.grid, scenario_.state));
}

const DiagnosticsRecord& Simulation::advance() {
  SimState next = integrator_->step(scenario_.state, report_, ledger_);
  scenario_.state = std::move(next);
  records_.push_back(make_record(scenario_.grid, scenario_.state, &records_.back(),
                                 report_.dt_used, ledger_.boundary_heat_rate,
                                 report_.outer_iters));
  return records_.back();
}

std::string diagnostics_row(const DiagnosticsRecord& r) {
  std::ostringstream os;
  os << r.step << ',' << g17(r.time) << ',' << g17(r.mass) << ',' << g17(r.H) << ','
     << g17(r.U_scheme) << ',' << g17(r.U_physical) << ',' << g17(r.E) << ',' << g17(r.S) << ','
     << g17(r.first_law_residual) << ',' << g17(r.entropy_increment) << ','
     << g17(r.boundary_heat) << ',' << r.outer_iters;
  return os.str();
}

std::string snapshot_name(long step) {
  std::ostringstream os;
  os << "fields_" << std::setw(6) << std::setfill('0') << step << ".csv";
  return os.str();
}

void write_snapshot(const std::string& path, const PengRobinson& eos, const Grid& g,
                    const SimState& st) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write snapshot '" + path + "'");
  const auto [ux, uy] = velocity_at_cells(g, st.u);
  const CellField p = pressure_field(eos, g, st.n, st.T);
  f << kSnapshotHeader << '\n';
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      f << i << ',' << j << ',' << g17(g.xc(i)) << ',' << g17(g.yc(j)) << ',' << g17(st.n(i, j))
        << ',' << g17(st.T(i, j)) << ',' << g17(ux(i, j)) << ',' << g17(uy(i, j)) << ','
        << g17(p(i, j)) << '\n';
    }
  }
  f.flush();
}

int run(const ScenarioConfig& cfg, std::ostream& log) {
  std::unique_ptr<Simulation> sim;
  try {
    sim = std::make_unique<Simulation>(cfg);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  const std::filesystem::path dir(cfg.run.output_dir);
  std::filesystem::create_directories(dir);
  std::ofstream diag(dir / "diagnostics.csv");
  if (!diag) {
    log << "error: cannot write " << (dir / "diagnostics.csv").string() << '\n';
    return kExitConfigError;
  }
  diag << kDiagnosticsHeader << '\n' << diagnostics_row(sim->records().back()) << '\n';
  diag.flush();
  auto snapshot = [&] {
    write_snapshot((dir / snapshot_name(sim->state().step_index)).string(), sim->eos(),
                   sim->grid(), sim->state());
  };
  snapshot();

  const long every = cfg.run.snapshot_every;
  for (long k = 1; k <= cfg.run.n_steps; ++k) {
    try {
      const DiagnosticsRecord& r = sim->advance();
      diag << diagnostics_row(r) << '\n';
      diag.flush();
      if (!sim->last_report().converged) {
        log << "warning: step " << k << " outer iteration not converged in "
            << sim->last_report().outer_iters << " iterations\n";
      }
    } catch (const SolverAbort& e) {
      log << "error: " << e.what() << "; outputs up to step " << k - 1 << " retained\n";
      snapshot();
      return kExitSolverAbort;
    }
    if ((every > 0 && k % every == 0) || k == cfg.run.n_steps) snapshot();
  }
  log << "completed " << cfg.run.n_steps << " steps\n";
  return kExitOk;
}

}  // namespace thermoflow
