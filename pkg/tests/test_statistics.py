import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CANONICAL, random_params
from fwcs.errors import DomainError
from fwcs.foxwright import FWParams
from fwcs.statistics import (
    action_identity_residual,
    classify,
    excitation_probability,
    expectation_n_power,
    mandel_q,
)

X_GRID = [0.1, 0.5, 1.0, 2.0, 5.0]


def brute_moments(params, x, terms=200):
    mp.mp.dps = 40
    w = []
    for n in range(terms):
        rho = mp.factorial(n)
        for b, B in params.lower:
            rho *= mp.gamma(mp.mpf(b) + B * n)
        for a, A in params.upper:
            rho /= mp.gamma(mp.mpf(a) + A * n)
        w.append(mp.mpf(x) ** n / rho)
    norm = mp.fsum(w)
    m1 = mp.fsum(n * t for n, t in enumerate(w)) / norm
    m2 = mp.fsum(n * n * t for n, t in enumerate(w)) / norm
    return float(m1), float(m2)


@pytest.mark.parametrize("x", X_GRID)
def test_canonical_is_poissonian(x):
    r = mandel_q(CANONICAL["C0"], x)
    assert abs(r.mandel_q) <= 1e-10
    assert r.classification == "poissonian"
    assert r.mean_n == pytest.approx(x, rel=1e-13)


def test_two_routes_agree_seeded():
    rng = np.random.default_rng(6)
    for _ in range(10):
        params = random_params(rng, min_delta=-0.5)
        x = float(rng.uniform(0.1, 3.0))
        r = mandel_q(params, x)
        assert r.route_discrepancy <= 1e-8


def test_sub_poissonian_bessel_family():
    params = FWParams([], [(2, 1)])
    r = mandel_q(params, 1.0)
    m1, m2 = brute_moments(params, 1.0)
    assert r.mean_n == pytest.approx(m1, rel=1e-12)
    assert r.second_moment == pytest.approx(m2, rel=1e-12)
    assert (m2 - m1 * m1 - m1) / m1 < 0
    assert r.mandel_q < 0 and r.classification == "sub_poissonian"


def test_super_poissonian_geometric():
    # x^n weights: geometric distribution has Q = mean > 0
    r = mandel_q(FWParams([(1, 1)], []), 0.5)
    assert r.mandel_q == pytest.approx(1.0, rel=1e-11)
    assert r.classification == "super_poissonian"


def test_product_convention_skips_route_two():
    r = mandel_q(FWParams([], [(1, 2)]), 1.0, "product")
    assert r.route2_skipped and math.isnan(r.mandel_q_route2)


def test_classify_band():
    assert classify(5e-10) == "poissonian"
    assert classify(-2e-9) == "sub_poissonian"


@pytest.mark.parametrize("x", X_GRID)
def test_canonical_pn(x):
    for n in range(6):
        assert excitation_probability(CANONICAL["C0"], x, n) == pytest.approx(math.exp(-x) * x**n / math.factorial(n), rel=1e-13)


@given(st.integers(0, 2**32 - 1), st.sampled_from(["gamma", "product"]))
def test_pn_sums_to_one(seed, convention):
    rng = np.random.default_rng(seed)
    params = random_params(rng, min_delta=0.0)
    if convention == "product" and params.q < params.p:
        return
    x = float(rng.uniform(0.05, 3.0))
    total = math.fsum(excitation_probability(params, x, n, convention) for n in range(300))
    assert total == pytest.approx(1.0, abs=1e-11)


def test_expectation_power_zero_and_origin():
    assert expectation_n_power(CANONICAL["C2"], 1.3, 0) == 1.0
    assert expectation_n_power(CANONICAL["C2"], 0.0, 2) == 0.0
    with pytest.raises(DomainError):
        mandel_q(CANONICAL["C2"], 0.0)


@pytest.mark.parametrize("convention", ["gamma", "product"])
def test_action_identity_seeded(convention):
    rng = np.random.default_rng(7 if convention == "gamma" else 17)
    done = 0
    while done < 10:
        params = random_params(rng, min_delta=0.0)
        if convention == "product" and params.q < params.p:
            continue
        for x in X_GRID:
            scale = max(1.0, x)
            assert action_identity_residual(params, x, convention) <= 1e-11 * scale
        done += 1


def test_action_identity_higher_order():
    assert action_identity_residual(CANONICAL["C3"], 1.5, m=3) <= 1e-11 * 1.5**3
