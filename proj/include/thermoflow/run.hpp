#ifndef THERMOFLOW_RUN_HPP_
#define THERMOFLOW_RUN_HPP_

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "thermoflow/config.hpp"
#include "thermoflow/diagnostics.hpp"
#include "thermoflow/integrator.hpp"
#include "thermoflow/scenario.hpp"

namespace thermoflow {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitSolverAbort = 3;

/// A configured scenario advanced one step at a time, keeping the ledger.
class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg);

  // Throws SolverAbort; the state and ledger stay at the last accepted step.
  const DiagnosticsRecord& advance();

  const ScenarioConfig& config() const { return cfg_; }
  const PengRobinson& eos() const { return *eos_; }
  const Grid& grid() const { return scenario_.grid; }
  const BoundarySpec& boundary() const { return scenario_.bc; }
  const SimState& state() const { return scenario_.state; }
  const std::vector<DiagnosticsRecord>& records() const { return records_; }
  const IterationReport& last_report() const { return report_; }
  const StepLedger& last_ledger() const { return ledger_; }
  Integrator& integrator() { return *integrator_; }

 private:
  ScenarioConfig cfg_;
  std::unique_ptr<PengRobinson> eos_;
  Scenario scenario_;
  std::unique_ptr<Integrator> integrator_;
  std::vector<DiagnosticsRecord> records_;
  IterationReport report_;
  StepLedger ledger_;
};

inline const char* kDiagnosticsHeader =
    "step,time,mass,H,U_scheme,U_physical,E,S,first_law_residual,entropy_increment,"
    "boundary_heat,outer_iters";
inline const char* kSnapshotHeader = "i,j,x,y,n,T,ux,uy,p";

std::string diagnostics_row(const DiagnosticsRecord& r);
std::string snapshot_name(long step);  // fields_XXXXXX.csv
void write_snapshot(const std::string& path, const PengRobinson& eos, const Grid& g,
                    const SimState& state);

// Runs cfg to completion, writing diagnostics.csv and snapshots into
// cfg.run.output_dir. Returns an exit code; messages go to log.
int run(const ScenarioConfig& cfg, std::ostream& log);

}  // namespace thermoflow

#endif  // THERMOFLOW_RUN_HPP_
