#pragma once

#include "iflab/fd_operator.hpp"
#include "iflab/grid.hpp"
#include "iflab/model.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace iflab {

/// Dirichlet data kinds understood by the problem builders.
struct BoundarySpec {
    enum class Kind { RadialCompat, Constant, ProfileX, Tabulated };
    Kind kind = Kind::RadialCompat;
    double value = 0.0;             ///< Constant
    double x0 = 0.0;                ///< ProfileX offset
    std::vector<double> table;      ///< Tabulated, canonical carrier order
};

struct PenalizedProblem {
    ProblemParams params;
    GridPtr grid;
    DirectionSet dirs;
    /// Full-lattice vector; meaningful at boundary carriers.
    std::vector<double> boundary_values;
    /// Perron floor: iterates are projected onto {u >= floor}. For
    /// radial-compatible data the factory installs the closed-form
    /// radial family here, which pins the solution branch the way the
    /// paper's radial construction does.
    std::optional<std::vector<double>> floor;
    /// Initial iterate; defaults to make_subsolution / the floor.
    std::optional<std::vector<double>> initial;
};

struct IterationRecord {
    long iteration = 0;
    double update_sup = 0.0;
    double residual_sup = 0.0;
    double min_update = 0.0;  ///< most negative applied update this sweep
};

struct SolveOptions {
    double tol = 1e-10;
    long max_iters = 1'000'000;
    double damping_safety = 0.5;
    long log_every = 0;
    /// Frustrated contact-set configurations can make the Jacobi map
    /// orbit instead of settling (no stable fixed point at a few nodes).
    /// When the update stalls, the solver measures the invariant band
    /// over a window and accepts its midpoint if the band is below this
    /// width. 0 keeps strict fixed-point semantics (stall = error).
    double band_tol = 0.0;
    std::function<void(const IterationRecord&)> progress;
};

struct SolveResult {
    Field field;
    long iterations = 0;
    double final_update_sup = 0.0;
    /// Complementarity-aware residual: one-sided at clamped nodes,
    /// zero at strict-local-minimum nodes (their equation is vacuous).
    double residual_sup = 0.0;
    bool converged = false;
    /// Width of the invariant band when the run ended cycle-limited;
    /// 0 for a plain fixed-point stop.
    double cycle_band = 0.0;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, long iterations, double update_sup,
                double residual_sup)
        : std::runtime_error(what), iterations(iterations),
          update_sup(update_sup), residual_sup(residual_sup) {}
    long iterations;
    double update_sup;
    double residual_sup;
};

/// Evaluate the Dirichlet datum at every boundary carrier (interior
/// entries of the returned vector are filled with the same formula so
/// closed-form data double as floors).
std::vector<double> boundary_values(const Grid& g, const BoundarySpec& bc,
                                    const ProblemParams& p);

/// Build a problem; installs the closed-form radial floor/initial guess
/// for radial-compatible data.
PenalizedProblem make_problem(const ProblemParams& p, GridPtr grid,
                              const DirectionSet& dirs, const BoundarySpec& bc);

/// Discrete subsolution: damped solve of L_h u = S with the constant
/// source S = sup rhs (the obstacle u >= 0 may bind), started from the
/// lower cone extension of the data. The output satisfies
/// L_h u - rhs(u) >= -tol at every interior node.
Field make_subsolution(const PenalizedProblem& prob, const SolveOptions& opts);

/// Discrete infinity-harmonic extension via the weighted-midpoint
/// fixed-point form u = (lm M + lM m)/(lM + lm) (i.e. D+ = D-).
Field make_supersolution(const PenalizedProblem& prob, const SolveOptions& opts);

/// Damped explicit iteration u += tau (L_h u - rhs(u)) with node-local
/// tau, clamped to [max(0, floor), max boundary value]; strict interior
/// minima are assigned the one-sided inward ODE march (their pointwise
/// equation is vacuous in the viscosity sense). Stops on sup-norm
/// update <= tol.
SolveResult solve_penalized(const PenalizedProblem& prob, const SolveOptions& opts);

struct ContinuationTrace {
    std::vector<double> eps;
    std::vector<double> diff_sup;    ///< |u_k - u_{k-1}|_inf, k >= 1
    bool decreasing = true;          ///< flagged, not fatal
};

/// Problem family for the eps-continuation: fixed grid/stencil/data
/// kind, re-derived parameters per level.
struct ContinuationTemplate {
    double gamma = 0.0;
    std::optional<double> delta;
    RampKind ramp = RampKind::Linear;
    GridPtr grid;
    DirectionSet dirs;
    BoundarySpec bc;
};

/// Solves (P_eps) along a decreasing eps sequence. Radial-compatible
/// data gets a fresh closed-form floor per level; other data warm-starts
/// from the previous field.
std::pair<SolveResult, ContinuationTrace>
solve_limit(const ContinuationTemplate& tmpl, const std::vector<double>& eps_sequence,
            const SolveOptions& opts);

}  // namespace iflab
