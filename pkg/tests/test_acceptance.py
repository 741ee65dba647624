"""End-to-end acceptance checks, one test per criterion.

Each test records a single PASS/FAIL line (also printed at the end of the
pytest run).  Run directly with ``python3 tests/test_acceptance.py`` to get
just the lines.
"""

import math
import sys
import time

import numpy as np
import pytest

from nlsasym import rhp, specfun
from nlsasym.data import InitialData
from nlsasym.harness import (ExperimentConfig, run_alpha_cancellation, run_appendix_a_rates,
                             run_linear_rate_experiment, run_nls_rate_experiment)
from nlsasym.pde import evolve, mass
from nlsasym.scattering import reflection_grid

RESULTS: list[str] = []


def record(n: int, title: str, ok: bool, elapsed: float, budget: float, detail: str) -> None:
    ok_all = ok and elapsed <= budget
    line = f"CRITERION {n} {'PASS' if ok_all else 'FAIL'}  {title}: {detail}; {elapsed:.1f} s of {budget:.0f} s"
    RESULTS.append(line)
    print(line)
    assert ok, detail
    assert elapsed <= budget, f"runtime {elapsed:.1f} s exceeds {budget} s"


def _sd(family, zs):
    return reflection_grid(InitialData(family, 0.5).sample(dx=0.01), zs, tol=1e-10)


def test_criterion_1_alpha_cancellation():
    t0 = time.perf_counter()
    res = run_alpha_cancellation(ExperimentConfig.from_dict(None, "alpha"))
    worst = max(c.value for c in res.checks)
    n = len(res.checks) // 2
    record(1, "alpha cancellation", res.passed and n == 5, time.perf_counter() - t0, 120,
           f"{n} z0 values, worst relative residual {worst:.1e} (bound 1e-8)")


def test_criterion_2_scalar_rhp():
    t0 = time.perf_counter()
    sd = _sd("sech", np.linspace(-6, 6, 601))
    z0 = 0.3
    rng = np.random.default_rng(2024)
    s = rng.uniform(-5.5, z0 - 0.01, 20)
    jump = float(np.max(rhp.jump_residual(sd, z0, s, method="gauss")))
    z = rng.uniform(-4, 4, 20) + 1j * rng.uniform(-3, 3, 20)
    sym = float(np.max(np.abs(rhp.delta(sd, z0, z) * np.conj(rhp.delta(sd, z0, np.conj(z))) - 1)))
    lp = rhp.local_params(sd, z0)
    creg = rhp.chi_reg(sd, z0)
    rho = np.geomspace(1e-3, 0.1, 12)
    exps = []
    for phi in (math.pi / 8, -7 * math.pi / 8):
        zz = z0 + rho * np.exp(1j * phi)
        for sign in (1, -1):
            exps.append(rhp.fit_holder(rho, np.abs(rhp.f_factor(lp, sd, zz, 2 * sign) - 1))[0])
        # delta against its local model exp(chi_reg) (z - z0)^(F(z0)/2 pi i)
        model = np.exp(creg + lp.F0 / (2j * math.pi) * np.log(zz - z0))
        exps.append(rhp.fit_holder(rho, np.abs(rhp.delta(sd, z0, zz) - model))[0])
    ok = jump <= 1e-6 and sym <= 1e-6 and min(exps) >= 0.5
    record(2, "scalar RHP", ok, time.perf_counter() - t0, 60,
           f"jump residual {jump:.1e}, symmetry {sym:.1e}, min Holder exponent {min(exps):.2f} for |f^(+-2) - 1| and delta vs its local model on two rays")


def test_criterion_3_unitarity():
    t0 = time.perf_counter()
    zs = np.linspace(-6, 6, 201)
    res = {fam: _sd(fam, zs).unitarity_residual for fam in ("sech", "gaussian")}
    record(3, "scattering unitarity", max(res.values()) <= 1e-8, time.perf_counter() - t0, 60,
           ", ".join(f"{k} {v:.1e}" for k, v in res.items()) + " (bound 1e-8)")


def test_criterion_4_linear_expansion():
    t0 = time.perf_counter()
    res = run_linear_rate_experiment(ExperimentConfig.from_dict(None, "rates-linear"),
                                     coefficient_sets=["stationary_phase"])
    fits = res.results["fits"]
    slopes = {n: fits["literal"][str(n)]["slope"] for n in (0, 1, 2)}
    agree = res.results["method_agreement"]["literal"]
    ok = slopes[0] <= -0.9 and slopes[1] <= -1.4 and slopes[2] <= -1.9 and agree <= 1e-10
    corrected = {n: fits["stationary_phase"][str(n)]["slope"] for n in (0, 1, 2)}
    try:
        record(4, "linear expansion", ok, time.perf_counter() - t0, 120,
               "slopes with the literal constants " + ", ".join(f"n={n}: {s:.2f}" for n, s in slopes.items())
               + f" (bounds -0.9, -1.4, -1.9); two-method agreement {agree:.1e}")
    finally:
        RESULTS.append("  (supplementary, not the criterion) exact stationary-phase constants give slopes "
                       + ", ".join(f"n={n}: {s:.2f}" for n, s in corrected.items()))


@pytest.mark.slow
def test_criterion_5_nls_rate():
    t0 = time.perf_counter()
    res = run_nls_rate_experiment(ExperimentConfig.from_dict(None, "rates-nls"))
    fit = res.results["fit"]
    norm = res.results["normalized"][-3:]
    record(5, "NLS leading-order rate", res.passed, time.perf_counter() - t0, 1200,
           f"slope {fit['slope']:.3f} (bound -0.70), r^2 {fit['r_squared']:.4f} (bound 0.95), "
           f"e t/ln t on top three times {', '.join(f'{v:.2e}' for v in norm)}")


@pytest.mark.slow
def test_criterion_6_remainder_rates():
    t0 = time.perf_counter()
    res = run_appendix_a_rates(ExperimentConfig.from_dict(None, "rates-appendix-a"))
    f = res.results["fits"]
    growth = next(c.value for c in res.checks if c.name == "I0_tilde_normalized_bounded")
    record(6, "remainder integral rates", res.passed, time.perf_counter() - t0, 600,
           f"slopes I2_hat {f['I2_hat']['slope']:.2f}, I2_bar2 {f['I2_bar2']['slope']:.2f} (bound -1.15), "
           f"I3 {f['I3']['slope']:.2f} (bound -0.9); I0_tilde t^1.25/ln t max/first {growth:.2f}")


def test_criterion_7_special_functions():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    z = rng.uniform(-5, 5, 100) + 1j * rng.uniform(-5, 5, 100)
    g = specfun.complex_gamma
    refl = np.max(np.abs(g(z) * g(1 - z) * np.sin(np.pi * z) / np.pi - 1))
    rec = np.max(np.abs(g(z + 1) - z * g(z)) / np.abs(z * g(z)))
    a = 0.5 + 0.6j
    y = rng.uniform(0.1, 6, 50) * np.exp(1j * rng.uniform(-1.9, 1.9, 50))
    h = 1e-4
    fd = (specfun.pc_env(a, y + h) - specfun.pc_env(a, y - h)) / (2 * h)
    rhs = -(a + 0.5) * specfun.pc_env(a + 1, y)
    pc = float(np.max(np.abs(fd - rhs) / np.maximum(1, np.abs(rhs))))
    ok = refl <= 1e-10 and rec <= 1e-10 and pc <= 1e-6
    record(7, "special functions", ok, time.perf_counter() - t0, 30,
           f"gamma reflection {refl:.1e}, recurrence {rec:.1e}; PC derivative recurrence {pc:.1e}")


def test_criterion_8_pde_oracle():
    t0 = time.perf_counter()
    q0 = InitialData("sech", 0.5).sample_periodic(40.0, 512)
    ref = evolve(q0, [3.0], dt=0.05 / 64, edge_tol=None)[0].field.vals
    e1 = np.max(np.abs(evolve(q0, [3.0], dt=0.05, edge_tol=None)[0].field.vals - ref))
    e2 = np.max(np.abs(evolve(q0, [3.0], dt=0.025, edge_tol=None)[0].field.vals - ref))
    ratio = e1 / e2
    g0 = InitialData("gaussian", 0.5).sample_periodic(4096.0, 2**15)
    states = evolve(g0, [25.0, 50.0, 75.0, 100.0], dt=0.01)
    m0 = mass(g0)
    drift = max(abs(mass(s.field) - m0) for s in states) / m0
    ok = 3.6 <= ratio <= 4.4 and drift <= 1e-8
    record(8, "PDE oracle", ok, time.perf_counter() - t0, 300,
           f"Strang halving ratio {ratio:.3f} (range 3.6 to 4.4), relative mass drift to t=100 {drift:.1e}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
