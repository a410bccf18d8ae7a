"""Smoke tests for the python bindings."""

import math

import pytest

iflab = pytest.importorskip("iflab")


def test_derived_parameters():
    p = iflab.derive_params(0.0, 0.1)
    assert p.alpha == pytest.approx(4.0 / 3.0, rel=1e-14)
    assert p.sigma == pytest.approx(0.25, rel=1e-14)
    assert p.c_alpha == pytest.approx(1.0816871777305563, rel=1e-12)
    assert iflab.max_admissible_delta(0.0) == pytest.approx(0.3407101111560262, rel=1e-12)
    with pytest.raises(ValueError):
        iflab.derive_params(1.5, 0.1)


def test_penalty_and_rhs():
    p = iflab.derive_params(0.5, 1.0, delta=0.2)
    assert iflab.penalty_base(0.1, 0.2) == 0.0
    assert iflab.penalty_base(0.2, 0.2) == 1.0
    assert iflab.penalty_base(0.15, 0.2) == pytest.approx(0.5)
    assert iflab.rhs(0.25, p) == pytest.approx(2.0, rel=1e-14)
    assert iflab.rhs(0.0, p) == 0.0


def test_radial_identity():
    for gamma in (0.0, 0.5, 0.9):
        p = iflab.derive_params(gamma, 0.1)
        for s in (1e-3, 0.1, 1.0, 5.0):
            assert abs(iflab.radial_ode_residual(s, p)) <= 1e-9 * max(
                1.0, iflab.radial_exact(s, p) ** (-gamma)
            )


def test_barrier_verification():
    p = iflab.derive_params(0.5, 0.1)
    rep = iflab.verify_supersolution(2.0, p, n_samples=500)
    assert rep["passed"]
    assert rep["max_violation"] <= 1e-12
    assert iflab.barrier_value(0.0, 2.0, p) == pytest.approx(p.delta)


def test_small_solve_matches_closed_form():
    out = iflab.solve(
        {
            "gamma": 0.5,
            "epsilon": 0.1,
            "dim": 1,
            "R": 1.0,
            "h": 1.0 / 32,
            "boundary": {"kind": "radial_compat"},
            "solver": {"tol": 1e-9},
        }
    )
    assert out["converged"]
    field = out["field"]
    h = out["h"]
    p = iflab.derive_params(0.5, 0.1)
    half = out["half_span"]
    err = max(
        abs(field[i] - iflab.radial_exact(abs((i - half) * h), p))
        for i in range(len(field))
    )
    assert err <= 1e-3


def test_analyze_reports():
    out = iflab.analyze(
        {
            "gamma": 0.0,
            "eps_sequence": [0.1, 0.05, 0.025, 0.0125],
            "dim": 1,
            "R": 1.0,
            "h": 1.0 / 32,
            "boundary": {"kind": "radial_compat"},
            "solver": {"tol": 1e-9},
        }
    )
    assert out["converged"]
    checks = {r["check"] for r in out["reports"]}
    assert "oscillation" in checks
    assert "nondegeneracy" in checks
    assert math.isfinite(out["alpha_est"])


def test_config_validation():
    with pytest.raises(ValueError):
        iflab.parse_config('{"gamma": 0.0, "epsilon": 0.1, "h": 0.03125, "bogus": 1}')
