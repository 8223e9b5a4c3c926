"""Acceptance gate: one printed PASS/FAIL line per criterion.

Run on its own with ``python3 -m pytest tests/test_acceptance.py -v``; the
summary lines are printed even while output capture is on.
"""

import math
import subprocess
import sys
import time

import mpmath as mp
import numpy as np
import pytest
from scipy import special

from conftest import CANONICAL, random_params, rel
from fwcs.foxwright import FWParams, fw_derivative, fw_eval
from fwcs.measure import measure_spec, radial_integrate, weight_g_eval, weight_moment_closed
from fwcs.states import bg_coefficients, kp_coefficients, normalization_class
from fwcs.statistics import action_identity_residual, mandel_q
from fwcs.thermal import ThermalSpec, husimi_normalization_residual, husimi_q, partition_function
from fwcs.verify import (
    check_int1,
    check_int2,
    check_kp_kernel,
    check_laplace,
    check_reproducing_kernel,
)

X_GRID = [0.1, 0.5, 1.0, 2.0, 5.0]


@pytest.fixture
def report(capsys):
    def _report(number: int, title: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\nAC{number:02d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        assert ok, detail

    return _report


@pytest.fixture(scope="module")
def verify_all_runs():
    cmd = [sys.executable, "-m", "fwcs", "verify", "--suite", "all", "--seed", "42"]
    return [subprocess.run(cmd, capture_output=True) for _ in range(2)]


def test_ac01_closed_forms(report):
    cases = [
        (FWParams([], []), 1.0, math.e),
        (FWParams([(1, 1)], [(1, 2)]), 1.0, math.cosh(1.0)),
        (FWParams([], [(1, 1)]), 1.0, special.iv(0, 2.0)),
        (FWParams([(1, 1)], []), 0.5, 2.0),
    ]
    worst = max(rel(fw_eval(p, z).value, ref) for p, z, ref in cases)
    report(1, "closed-form evaluation", worst <= 1e-12, f"worst relative error {worst:.2e} (limit 1e-12)")


def test_ac02_derivative_law(report):
    rng = np.random.default_rng(2)
    h = 1e-3
    worst = 0.0
    for _ in range(20):
        params = random_params(rng, min_delta=-0.5)
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        z *= min(1.0, 1.0 / abs(z))
        f = lambda t: fw_eval(params, t, 1e-15).value
        fd = (f(z - 2 * h) - 8 * f(z - h) + 8 * f(z + h) - f(z + 2 * h)) / (12 * h)
        worst = max(worst, rel(fd, fw_derivative(params, z, 1).value))
    report(2, "derivative law", worst <= 1e-6, f"worst relative gap to 5-point differences {worst:.2e} on 20 cases")


def test_ac03_laplace(report):
    worst, slowest = 0.0, 0.0
    for params in CANONICAL.values():
        for s in (2.0, 3.0, 5.0):
            t0 = time.perf_counter()
            r = check_laplace(params, s, tol=1e-7)
            slowest = max(slowest, time.perf_counter() - t0)
            worst = max(worst, r.residual)
    ok = worst <= 1e-7 and slowest < 1.0
    report(3, "Laplace identity", ok, f"worst residual {worst:.2e}, slowest case {slowest:.3f} s")


def test_ac04_moments(report):
    worst = 0.0
    for lower in ([], [(1, 1)], [(1, 1), (2, 1)]):
        params = FWParams([], lower)
        spec = measure_spec(params)
        for n in range(6):
            num = radial_integrate(spec, lambda x, n=n: x**n, 1e-9)
            worst = max(worst, rel(num, weight_moment_closed(params, n).value))
    bessel = measure_spec(CANONICAL["C1"])
    point = max(rel(weight_g_eval(bessel, x), 2 * special.k0(2 * math.sqrt(x))) for x in (0.1, 0.5, 1.0, 2.0))
    ok = worst <= 1e-6 and point <= 1e-6
    report(4, "moment identity", ok, f"worst moment residual {worst:.2e}, Bessel pointwise {point:.2e}")


def test_ac05_reproducing_kernel(report):
    r = math.sqrt(0.5)
    g = check_reproducing_kernel(CANONICAL["C0"], r, r, tol=1e-6)
    b = check_reproducing_kernel(CANONICAL["C1"], 0.6, 0.6, tol=1e-5)
    ok = g.residual <= 1e-6 and b.residual <= 1e-5
    report(5, "reproducing kernel", ok, f"Gaussian {g.residual:.2e}, Bessel {b.residual:.2e}")


def _brute_q(params, x):
    mp.mp.dps = 40
    w = []
    for n in range(150):
        rho = mp.factorial(n)
        for b, B in params.lower:
            rho *= mp.gamma(mp.mpf(b) + B * n)
        w.append(mp.mpf(x) ** n / rho)
    s0 = mp.fsum(w)
    m1 = mp.fsum(n * t for n, t in enumerate(w)) / s0
    m2 = mp.fsum(n * n * t for n, t in enumerate(w)) / s0
    return float((m2 - m1 * m1 - m1) / m1)


def test_ac06_mandel(report):
    canon = max(abs(mandel_q(CANONICAL["C0"], x).mandel_q) for x in X_GRID)
    rng = np.random.default_rng(6)
    routes = max(mandel_q(random_params(rng), float(rng.uniform(0.1, 3.0))).route_discrepancy for _ in range(10))
    q = mandel_q(FWParams([], [(2, 1)]), 1.0).mandel_q
    brute = _brute_q(FWParams([], [(2, 1)]), 1.0)
    ok = canon <= 1e-10 and routes <= 1e-8 and q < 0 and brute < 0 and abs(q - brute) <= 1e-10
    report(6, "Mandel Q", ok, f"canonical max |Q| {canon:.1e}, route gap {routes:.1e}, Q(lower=[(2,1)], x=1) = {q:.6f} vs brute {brute:.6f}")


def test_ac07_action_identity(report):
    worst = 0.0
    for convention, seed in (("gamma", 7), ("product", 17)):
        rng = np.random.default_rng(seed)
        done = 0
        while done < 10:
            params = random_params(rng, min_delta=0.0)
            if normalization_class(params, convention).kind != "entire":
                continue
            worst = max(worst, max(action_identity_residual(params, x, convention) for x in X_GRID))
            done += 1
    report(7, "action identity", worst <= 1e-11, f"worst residual {worst:.2e} over 20 parameter sets")


def test_ac08_kp_bg_duality(report):
    rng = np.random.default_rng(8)
    worst, done = 0.0, 0
    while done < 10:
        params = random_params(rng, min_delta=-0.5)
        if normalization_class(params.swap()).kind != "entire":
            continue
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        kp = kp_coefficients(params, z).values()
        bg = bg_coefficients(params.swap(), z).values()
        m = min(len(kp), len(bg), 41)
        worst = max(worst, float(np.max(np.abs(kp[:m] - bg[:m]))))
        done += 1
    report(8, "KP/BG duality", worst <= 1e-12, f"worst entry-wise gap {worst:.1e} on 10 cases")


def test_ac09_thermal(report):
    spec = ThermalSpec(0.7, 0.3, 1.2)
    brute = math.fsum(math.exp(-spec.beta * (spec.e0 + spec.hbar_omega * n)) for n in range(2000))
    z_err = rel(partition_function(spec), brute)
    rng = np.random.default_rng(9)
    routes = 0.0
    for _ in range(10):
        params = random_params(rng, min_delta=0.0)
        x = float(rng.uniform(0, 4))
        a = husimi_q(params, spec, x, route="closed")
        b = husimi_q(params, spec, x, route="series")
        routes = max(routes, abs(a - b) / a)
    beta = ThermalSpec(math.log(2.0))
    norm = max(husimi_normalization_residual(CANONICAL[k], beta) for k in ("C0", "C1"))
    ok = z_err <= 1e-14 and routes <= 1e-10 and norm <= 1e-6
    report(9, "thermal", ok, f"Z error {z_err:.1e}, Husimi route gap {routes:.1e}, normalization {norm:.1e}")


def test_ac10_integral_identities(report):
    C0, C1, C2, C3 = (CANONICAL[k] for k in ("C0", "C1", "C2", "C3"))
    gauss = check_kp_kernel(C0, 0.4, 0.5, tol=1e-8)
    results = [
        check_int1(C0, C0, 0.5),
        check_int1(C1, C1, 0.3),
        check_int1(C2, C1, 0.3),
        check_int1(C3, C0, 0.5),
        check_int2(C0, C0, C0, 0.4, 0.5),
        check_int2(C1, C0, C0, 0.5, 0.5),
        check_int2(C2, C1, C0, 0.5, 0.5),
        check_int2(C3, C0, C0, 0.5, 0.5),
    ]
    mirror = check_kp_kernel(FWParams([(2, 1)], []), 0.5, 0.5)
    worst = max(r.residual for r in results)
    ok = gauss.residual <= 1e-8 and worst <= 1e-5 and mirror.residual <= 1e-5
    report(10, "integral identities", ok,
           f"Gaussian {gauss.residual:.1e}, single/double integrals worst {worst:.1e}, mirror {mirror.residual:.1e}")


def test_ac11_discrepancy_ledger(report, verify_all_runs):
    import json

    proc = verify_all_runs[0]
    doc = json.loads(proc.stdout)
    by_id = {r["identity_id"]: r for r in doc["results"]}
    shift = by_id["discrepancy/gamma_shift/x=1,y=2,n=2"]
    reduction = by_id["discrepancy/reduction/[1:2|]/z=0.1"]
    reduction_conv = by_id["discrepancy/reduction/[1:2|1:1]/z=0.1"]
    ratio = [r for k, r in by_id.items() if k.endswith("gamma_ratio_variation") and r["status"] == "report_only"]
    ok = (
        proc.returncode == 0
        and doc["failed"] == 0
        and shift["status"] == "report_only"
        and round(shift["lhs"]) == 24
        and round(shift["rhs"]) == 3
        and reduction["status"] == "report_only"
        and reduction_conv["residual"] > 1e-3
        and len(ratio) > 0
        and all(r["residual"] > 1e-3 for r in ratio)
    )
    report(11, "discrepancy ledger", ok,
           f"exit {proc.returncode}, failed {doc['failed']}, report_only {doc['report_only']}, "
           f"non-unit reduction residual {reduction_conv['residual']:.3f}, ratio variations {len(ratio)}")


def test_ac12_determinism(report, verify_all_runs):
    a, b = verify_all_runs
    ok = a.returncode == b.returncode == 0 and a.stdout == b.stdout and len(a.stdout) > 0
    report(12, "determinism", ok, f"two runs of verify --suite all --seed 42: {len(a.stdout)} bytes, identical={a.stdout == b.stdout}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
