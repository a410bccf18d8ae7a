#pragma once

#include "iflab/analysis.hpp"
#include "iflab/config.hpp"
#include "iflab/solver.hpp"

#include <string>
#include <vector>

namespace iflab {

/// Everything one experiment produces in memory before serialization.
struct RunOutput {
    Field field;
    SolveResult solve;
    ContinuationTrace trace;
    double alpha = 0.0;
    double alpha_est = 0.0;
    double fit_r2 = 0.0;
    std::vector<AnalysisReport> reports;
    bool all_passed = true;
    RunConfig config;
};

/// Solve (single eps or continuation) per config; no analysis checks.
RunOutput run_solve(const RunConfig& cfg);

/// Solve plus the full report suite (oscillation, nondegeneracy,
/// flatness, gradient-at-FB, density, porosity, scaling, Lipschitz).
RunOutput run_analyze(const RunConfig& cfg);

/// Barrier supersolution verification over the configured eta list.
RunOutput run_verify_barrier(const RunConfig& cfg);

/// Radial-family ODE identity check over a log sample grid.
RunOutput run_verify_radial(const RunConfig& cfg);

/// Per-gamma continuation and exponent fit, reproducing the exponent
/// table. Uses cfg.sweep_gammas (falling back to cfg.gamma).
RunOutput run_sweep(const RunConfig& cfg);

/// Resolve the output directory (config hash unless overridden), write
/// field dump, summary.json and reports.json. Returns the directory.
std::string write_artifacts(const RunOutput& out, const std::string& out_override);

/// Field dump: header row, one row per node, 17 significant digits.
void write_field_dump(const Field& f, const std::string& path);

/// Process exit status: 0 iff every requested check passed.
int exit_status(const RunOutput& out);

}  // namespace iflab
