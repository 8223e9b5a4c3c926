import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CANONICAL, random_params
from fwcs.errors import DomainError, ParameterError
from fwcs.foxwright import FWParams, fw_eval
from fwcs.thermal import (
    ThermalSpec,
    fock_occupancy,
    husimi_normalization_residual,
    husimi_q,
    partition_function,
)


@given(st.floats(0.05, 20.0), st.floats(-3.0, 3.0), st.floats(0.1, 5.0))
def test_partition_function_geometric(beta, e0, hw):
    spec = ThermalSpec(beta, e0, hw)
    terms = [math.exp(-beta * (e0 + hw * n)) for n in range(20000)]
    brute = math.fsum(terms)
    assert partition_function(spec) == pytest.approx(brute, rel=1e-13)


def test_partition_function_ln2():
    assert partition_function(ThermalSpec(math.log(2.0))) == pytest.approx(2.0, rel=1e-15)


@given(st.floats(0.05, 10.0))
def test_occupancies_sum_to_one(beta):
    spec = ThermalSpec(beta)
    total = math.fsum(fock_occupancy(spec, n) for n in range(5000))
    assert total == pytest.approx(1.0, abs=1e-13)


def test_invalid_thermal_spec():
    with pytest.raises(ParameterError):
        ThermalSpec(0.0)
    with pytest.raises(ParameterError):
        ThermalSpec(1.0, hbar_omega=-1.0)
    with pytest.raises(DomainError):
        fock_occupancy(ThermalSpec(1.0), -1)


@pytest.mark.parametrize("x", [0.0, 0.3, 1.0, 4.0])
def test_canonical_husimi_closed_form(x):
    spec = ThermalSpec(math.log(2.0))
    u = 0.5
    assert husimi_q(CANONICAL["C0"], spec, x) == pytest.approx((1 - u) * math.exp(-(1 - u) * x), rel=1e-13)


@given(st.integers(0, 2**32 - 1))
def test_husimi_routes_agree(seed):
    rng = np.random.default_rng(seed)
    params = random_params(rng, min_delta=0.0)
    spec = ThermalSpec(float(rng.uniform(0.2, 4.0)), float(rng.uniform(-1, 1)))
    x = float(rng.uniform(0.0, 4.0))
    a = husimi_q(params, spec, x, route="closed")
    b = husimi_q(params, spec, x, route="series")
    assert abs(a - b) <= 1e-10 * max(abs(a), 1e-300)


def test_husimi_zero_temperature_limit():
    params = CANONICAL["C3"]
    x = 0.8
    vac = 0.5 / fw_eval(params, x).value.real
    assert husimi_q(params, ThermalSpec(60.0), x) == pytest.approx(vac, rel=1e-12)


@pytest.mark.parametrize("name", ["C0", "C1"])
def test_husimi_normalization(name):
    assert husimi_normalization_residual(CANONICAL[name], ThermalSpec(math.log(2.0))) <= 1e-6


def test_husimi_normalization_product_non_unit():
    params = FWParams([], [(1, 2)])
    assert husimi_normalization_residual(params, ThermalSpec(1.0), "product") <= 1e-6
    # gamma convention with non-unit steps is not normalized by the same measure
    assert husimi_normalization_residual(params, ThermalSpec(1.0), "gamma") > 1e-3
