"""Python interface to the penalized singular infinity-Laplacian laboratory.

The heavy lifting lives in the compiled extension ``iflab._core``; run
configurations are JSON documents with the same schema the ``iflab`` CLI
uses (see the project README).
"""

import json as _json

from ._core import (  # noqa: F401
    ProblemParams,
    RampKind,
    aronson,
    barrier_inf_laplacian,
    barrier_scaled,
    barrier_value,
    boundary_for_radius,
    derive_params,
    max_admissible_delta,
    parse_config,
    penalty_base,
    penalty_eps,
    radial_exact,
    radial_ode_residual,
    radius_for_boundary,
    rhs,
    rhs_lipschitz,
    rhs_sup,
    verify_supersolution,
)
from ._core import run_analyze as _run_analyze
from ._core import run_solve as _run_solve
from ._core import run_sweep as _run_sweep
from ._core import run_verify_barrier as _run_verify_barrier
from ._core import run_verify_radial as _run_verify_radial


def _as_text(config):
    if isinstance(config, str):
        return config
    return _json.dumps(config)


def solve(config):
    """Solve the configured problem; accepts a dict or JSON string."""
    return _run_solve(_as_text(config))


def analyze(config):
    """Solve and run the full theorem-check report suite."""
    return _run_analyze(_as_text(config))


def verify_barrier(config):
    return _run_verify_barrier(_as_text(config))


def verify_radial(config):
    return _run_verify_radial(_as_text(config))


def sweep(config):
    return _run_sweep(_as_text(config))
