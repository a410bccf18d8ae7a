#include "iflab/config.hpp"
#include "iflab/run.hpp"
#include "iflab/solver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    int threads = 0;
    double h_override = 0.0;
    double gamma_override = -1.0;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->set_help_flag("--help", "print help");
    cmd->add_option("--config", a.config_path, "configuration file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", a.out_dir, "output directory (default: runs/run-<hash>)");
    cmd->add_option("--threads", a.threads, "worker threads (0 = library default)");
    cmd->add_option("--h", a.h_override, "grid spacing override");
    cmd->add_option("--gamma", a.gamma_override, "gamma override");
}

iflab::RunConfig resolve(const CommonArgs& a) {
    iflab::RunConfig cfg = iflab::load_config_file(a.config_path);
    if (a.threads > 0) cfg.threads = a.threads;
    if (a.h_override > 0.0) cfg.h = a.h_override;
    if (a.gamma_override >= 0.0) cfg.gamma = a.gamma_override;
    // revalidate overrides
    return iflab::parse_config(cfg.echo());
}

int finish(const iflab::RunOutput& out, const CommonArgs& a) {
    const std::string dir = iflab::write_artifacts(out, a.out_dir);
    std::printf("wrote %s (converged=%d, iterations=%ld, residual_sup=%.3e)\n",
                dir.c_str(), int(out.solve.converged), out.solve.iterations,
                out.solve.residual_sup);
    for (const auto& r : out.reports)
        std::printf("%-28s %s\n", r.check.c_str(), r.passed ? "pass" : "FAIL");
    if (!out.all_passed) std::printf("one or more checks failed\n");
    return iflab::exit_status(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"penalized singular infinity-Laplacian laboratory"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);

    CommonArgs args;
    auto* c_solve = app.add_subcommand("solve", "solve the penalized problem");
    auto* c_barrier = app.add_subcommand("verify-barrier",
                                         "check the radial supersolution inequality");
    auto* c_radial = app.add_subcommand("verify-radial",
                                        "check the exact radial family identity");
    auto* c_analyze = app.add_subcommand("analyze", "solve and run all theorem checks");
    auto* c_sweep = app.add_subcommand("sweep", "gamma sweep with exponent fits");
    for (auto* c : {c_solve, c_barrier, c_radial, c_analyze, c_sweep})
        add_common(c, args);

    CLI11_PARSE(app, argc, argv);

    try {
        const iflab::RunConfig cfg = resolve(args);
        iflab::RunOutput out;
        if (c_solve->parsed()) out = iflab::run_solve(cfg);
        else if (c_barrier->parsed()) out = iflab::run_verify_barrier(cfg);
        else if (c_radial->parsed()) out = iflab::run_verify_radial(cfg);
        else if (c_analyze->parsed()) out = iflab::run_analyze(cfg);
        else out = iflab::run_sweep(cfg);

        if (c_sweep->parsed()) {
            std::printf("%8s %12s %12s %10s\n", "gamma", "4/(3+gamma)", "alpha_est", "r2");
            for (const auto& r : out.reports)
                if (r.metrics.count("gamma"))
                    std::printf("%8.3f %12.6f %12.6f %10.6f\n",
                                r.metrics.at("gamma"), r.metrics.at("alpha"),
                                r.metrics.at("alpha_est"), r.metrics.at("fit_r2"));
        }
        return finish(out, args);
    } catch (const iflab::SolverError& e) {
        std::ofstream diag("iflab_diagnostics.txt");
        diag << "solver failure: " << e.what() << "\n"
             << "iterations: " << e.iterations << "\n"
             << "update_sup: " << e.update_sup << "\n"
             << "residual_sup: " << e.residual_sup << "\n";
        std::cerr << "error: " << e.what() << " (diagnostics in iflab_diagnostics.txt)\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
