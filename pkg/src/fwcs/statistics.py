"""Photon-number statistics of Fox-Wright coherent states (``x = |z|^2``)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .foxwright import DEFAULT_TOL, FWParams, ScaledSum, fw_eval_scaled, sum_log_series
from .states import check_convention, log_structure_table, normalization_class, normalization_scaled

__all__ = [
    "POISSON_BAND",
    "StatisticsReport",
    "classify",
    "expectation_n_power",
    "mandel_q",
    "excitation_probability",
    "action_identity_residual",
]

POISSON_BAND = 1e-9


@dataclass(frozen=True)
class StatisticsReport:
    mean_n: float
    second_moment: float
    mandel_q: float
    classification: str
    route_discrepancy: float
    mandel_q_route2: float = math.nan
    route2_skipped: bool = False


def classify(q: float, band: float = POISSON_BAND) -> str:
    if abs(q) <= band:
        return "poissonian"
    return "sub_poissonian" if q < 0 else "super_poissonian"


def _ratio(num: ScaledSum, den: ScaledSum) -> float:
    return (num.mantissa / den.mantissa).real * math.exp(num.log_scale - den.log_scale)


def _check_x(params: FWParams, x: float, convention: str) -> float:
    x = float(x)
    if not x >= 0 or not math.isfinite(x):
        raise DomainError(f"x = |z|^2 must be a finite nonnegative number, got {x!r}")
    normalization_class(params, convention).check(x, "normalization series")
    return x


def expectation_n_power(
    params: FWParams, x: float, s: int, convention: str = "gamma", tol: float = DEFAULT_TOL
) -> float:
    """``<n**s> = (1/N(x)) sum_n n**s x**n / rho(n)``, summed directly."""
    check_convention(convention)
    if s < 0:
        raise DomainError(f"power s must be nonnegative, got {s}")
    x = _check_x(params, x, convention)
    if s == 0:
        return 1.0
    if x == 0:
        return 0.0
    table = log_structure_table(params, convention)

    def coeffs(n: int) -> np.ndarray:
        k = np.arange(n, dtype=float)
        with np.errstate(divide="ignore"):
            return s * np.log(k) - table(n)

    num = sum_log_series(coeffs, x, tol)
    den = normalization_scaled(params, x, convention, tol)
    return _ratio(num, den)


def mandel_q(params: FWParams, x: float, convention: str = "gamma", tol: float = DEFAULT_TOL) -> StatisticsReport:
    """Mandel parameter by two routes.

    Route 1 uses the direct moments ``(<n^2> - <n>^2 - <n>) / <n>``. Route 2
    (gamma convention only) uses ``x [Psi_2/Psi_1 - Psi_1/Psi_0]`` with
    ``Psi_m`` the m-th derivative of the Fox-Wright function. In the product
    convention route 2 is skipped and its fields hold NaN.
    """
    check_convention(convention)
    x = _check_x(params, x, convention)
    if x == 0:
        raise DomainError("Mandel Q needs x > 0")
    m1 = expectation_n_power(params, x, 1, convention, tol)
    m2 = expectation_n_power(params, x, 2, convention, tol)
    q1 = (m2 - m1 * m1 - m1) / m1
    if convention == "gamma":
        psi = [fw_eval_scaled(params, x, tol)]
        for m in (1, 2):
            psi.append(_scaled_derivative(params, x, m, tol))
        q2 = x * (_ratio(psi[2], psi[1]) - _ratio(psi[1], psi[0]))
        return StatisticsReport(m1, m2, q1, classify(q1), abs(q1 - q2), q2, False)
    return StatisticsReport(m1, m2, q1, classify(q1), math.nan, math.nan, True)


def _scaled_derivative(params: FWParams, x: float, m: int, tol: float) -> ScaledSum:
    shifted = FWParams(
        tuple((a + A * m, A) for a, A in params.upper),
        tuple((b + B * m, B) for b, B in params.lower),
    )
    return fw_eval_scaled(shifted, x, tol)


def excitation_probability(
    params: FWParams, x: float, n: int, convention: str = "gamma", tol: float = DEFAULT_TOL
) -> float:
    """``P_n = x**n / (rho(n) N(x))``."""
    check_convention(convention)
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    x = _check_x(params, x, convention)
    if x == 0:
        return 1.0 if n == 0 else 0.0
    lr = float(log_structure_table(params, convention)(n + 1)[n])
    norm = normalization_scaled(params, x, convention, tol)
    return math.exp(n * math.log(x) - lr - norm.log_abs)


def _e_array(params: FWParams, size: int, convention: str) -> np.ndarray:
    """``e(n)`` for ``n = 0..size-1`` (``e(0)`` set to 0)."""
    e = np.zeros(size)
    if convention == "gamma":
        lr = log_structure_table(params, convention)(size)
        e[1:] = np.exp(np.diff(lr))
    else:
        k = np.arange(1, size, dtype=float)
        v = k.copy()
        for b, B in params.lower:
            v *= b + B * (k - 1)
        for a, A in params.upper:
            v /= a + A * (k - 1)
        e[1:] = v
    return e


def action_identity_residual(
    params: FWParams, x: float, convention: str = "gamma", tol: float = DEFAULT_TOL, m: int = 1
) -> float:
    """``|(1/N) sum_n e(n) e(n-1)...e(n-m+1) x**n / rho(n) - x**m|``.

    ``m = 1`` is the energy (action) identity; larger ``m`` telescopes the
    same way.
    """
    check_convention(convention)
    if m < 1:
        raise DomainError(f"m must be at least 1, got {m}")
    x = _check_x(params, x, convention)
    if x == 0:
        return 0.0
    table = log_structure_table(params, convention)

    def coeffs(n: int) -> np.ndarray:
        e = _e_array(params, n, convention)
        prod = np.ones(n)
        for k in range(m):
            shifted = np.zeros(n)
            shifted[k:] = e[: n - k]
            prod *= shifted
        with np.errstate(divide="ignore"):
            return np.log(prod) - table(n)

    num = sum_log_series(coeffs, x, tol)
    den = normalization_scaled(params, x, convention, tol)
    return abs(_ratio(num, den) - x**m)
