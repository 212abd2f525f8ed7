"""Smoke tests for the Python bindings on a small configuration."""

import math

import pytest

import wc4dvar as wc


def small_config():
    cfg = wc.ExperimentConfig()
    cfg.model.n = 8
    cfg.model.steps = 4
    cfg.covariance.dx = 1.0 / 8
    cfg.network_id = "f"
    cfg.spinup_steps = 200
    return cfg


def test_integrate_equilibrium():
    cfg = wc.ModelConfig()
    cfg.n = 8
    cfg.steps = 5
    x0 = [cfg.forcing] * cfg.n
    traj = wc.integrate(x0, cfg)
    assert len(traj.states) == cfg.steps + 1
    for s in traj.states:
        assert max(abs(v - cfg.forcing) for v in s) < 1e-12


def test_soar_unit_diagonal():
    spec = wc.CovarianceSpec()
    spec.sigma_b = 1.0
    spec.dx = 1.0 / 8
    B = wc.soar_matrix(8, spec)
    for i in range(8):
        assert B[i][i] == pytest.approx(1.0)


def test_sym_eig_small():
    sp = wc.sym_eig([[2.0, 1.0], [1.0, 2.0]])
    assert list(sp.eigenvalues) == pytest.approx([1.0, 3.0])
    assert (sp.n_plus, sp.n_minus, sp.n_zero) == (2, 0, 0)


def test_twin_and_bounds_pipeline():
    cfg = small_config()
    twin = wc.run_twin(cfg)
    s = cfg.model.n * (cfg.model.steps + 1)
    assert len(twin.b) == s
    assert len(twin.d) == s  # network f observes everything

    na = wc.analyze_network(cfg, twin)
    assert na.p == s
    assert (na.a3.n_plus, na.a3.n_minus, na.a3.n_zero) == (2 * s, s, 0)
    assert (na.a2.n_plus, na.a2.n_minus) == (s, s)
    assert na.a1.n_minus == 0 and na.a1.n_zero == 0
    assert na.verdict3.contained and na.verdict2.contained and na.verdict1.contained


def test_solve_agrees_across_formulations():
    cfg = small_config()
    cfg.solver = wc.SolverConfig()
    cfg.solver.tol = 1e-8
    twin = wc.run_twin(cfg)
    dx3, log3 = wc.solve(cfg, twin, wc.Formulation.A3)
    dx1, log1 = wc.solve(cfg, twin, wc.Formulation.A1)
    assert log3.converged and log1.converged
    err = math.sqrt(sum((a - b) ** 2 for a, b in zip(dx3, dx1)))
    norm = math.sqrt(sum(v * v for v in dx1))
    assert err <= 1e-5 * max(norm, 1.0)


def test_determinism():
    cfg = small_config()
    t1 = wc.run_twin(cfg)
    t2 = wc.run_twin(cfg)
    assert list(t1.observations) == list(t2.observations)
    assert list(t1.background) == list(t2.background)
