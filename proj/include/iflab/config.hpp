#pragma once

#include "iflab/grid.hpp"
#include "iflab/model.hpp"
#include "iflab/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace iflab {

/// Fully resolved run configuration. Parsed from a JSON document; every
/// default is filled in so the echoed config reproduces the run.
struct RunConfig {
    double gamma = 0.0;
    std::vector<double> eps_sequence;  ///< one entry = plain solve
    std::optional<double> delta;
    RampKind ramp = RampKind::Linear;

    int dim = 1;
    Geometry geometry = Geometry::Box;
    double R = 1.0;
    double h = 0.01;
    bool wide_stencil = false;  ///< 16-direction ring (2D)

    BoundarySpec boundary;

    SolveOptions solver;

    double kappa0 = 0.25;
    double rho_max = 0.25;
    double fit_rmax = 0.25;
    std::vector<int> scaling_iotas{2, 4};
    std::vector<double> barrier_etas{1.0, 2.0, 10.0};
    std::vector<double> sweep_gammas;

    std::string out_dir;  ///< empty: derive from config hash
    int threads = 0;      ///< 0: library default

    /// Canonical JSON echo of the resolved configuration.
    std::string echo() const;
    /// FNV-1a hash of the echo, as fixed-width hex.
    std::string content_hash() const;

    ProblemParams params(double eps) const;
    GridPtr make_run_grid() const;
    DirectionSet directions() const;
};

/// Parse and validate a configuration document. Unknown keys, type
/// mismatches and constraint violations throw std::invalid_argument
/// naming the key.
RunConfig parse_config(const std::string& text);

RunConfig load_config_file(const std::string& path);

}  // namespace iflab
