"""Coherent-state coefficients built on Fox-Wright structure constants.

Two structure-constant conventions are supported:

``gamma``
    ``rho(n) = n! prod Gamma(b + B n) / prod Gamma(a + A n)``; the
    normalization function is the Fox-Wright function itself.
``product``
    ``g(n) = n! prod (b)_{n,B} / prod (a)_{n,A}`` with k-Pochhammer
    symbols. It coincides with ``rho`` up to the constant factor
    ``prod Gamma(a) / prod Gamma(b)`` when every step is 1, and differs in
    its n-dependence otherwise.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainError, SingularDeformationError, TruncationError
from .foxwright import (
    DEFAULT_MAX_TERMS,
    DEFAULT_TOL,
    ConvergenceClass,
    FWParams,
    LogTable,
    ScaledSum,
    SeriesValue,
    convergence_class,
    log_rho_table,
    sum_log_series,
)
from .special_core import LogReal, log_gamma, pochhammer_k

__all__ = [
    "CONVENTIONS",
    "check_convention",
    "structure_constant",
    "log_structure_table",
    "normalization_class",
    "normalization",
    "normalization_scaled",
    "DeformationValues",
    "deformation_values",
    "deformation_at_zero",
    "StateCoefficients",
    "bg_coefficients",
    "kp_coefficients",
    "overlap",
    "evolve_first_order",
    "harmonic_limit_reference",
]

CONVENTIONS = ("gamma", "product")


def check_convention(convention: str) -> str:
    if convention not in CONVENTIONS:
        raise DomainError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    return convention


def _log_g_scalar(params: FWParams, n: int) -> float:
    s = log_gamma(n + 1.0)
    for b, B in params.lower:
        s += pochhammer_k(b, n, B).log_magnitude
    for a, A in params.upper:
        s -= pochhammer_k(a, n, A).log_magnitude
    return s


@lru_cache(maxsize=512)
def _g_table(params: FWParams) -> LogTable:
    return LogTable(lambda n: _log_g_scalar(params, n))


@lru_cache(maxsize=512)
def _kp_table(params: FWParams, convention: str) -> LogTable:
    base = log_structure_table(params, convention)
    return LogTable(lambda n: 2.0 * log_gamma(n + 1.0) - float(base(n + 1)[n]))


def log_structure_table(params: FWParams, convention: str) -> Callable[[int], np.ndarray]:
    """Callable ``N -> array of ln rho(k)`` (or ``ln g(k)``) for ``k < N``."""
    check_convention(convention)
    if convention == "gamma":
        return lambda n: log_rho_table(params, n)
    return _g_table(params)


def structure_constant(params: FWParams, n: int, convention: str = "gamma") -> LogReal:
    """``rho(n)`` (gamma) or ``g(n)`` (product) as a :class:`LogReal`."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    return LogReal(float(log_structure_table(params, convention)(n + 1)[n]), 1)


def normalization_class(params: FWParams, convention: str = "gamma") -> ConvergenceClass:
    """Domain of ``N(x) = sum x**n / rho(n)`` in the given convention.

    For the product convention ``g(n)/g(n-1)`` grows like
    ``n**(1+q-p) * prod B / prod A``, so the role of ``delta`` is played by
    ``q - p`` and the boundary radius is ``prod B / prod A``.
    """
    check_convention(convention)
    if convention == "gamma":
        return convergence_class(params)
    d = float(params.q - params.p)
    if d == -1.0:
        r = math.exp(math.fsum(math.log(k) for k in params.B) - math.fsum(math.log(k) for k in params.A))
        return ConvergenceClass(d, "boundary_radius", r)
    if d > -1.0:
        return ConvergenceClass(d, "entire")
    return ConvergenceClass(d, "divergent", 0.0)


def _neg(table):
    return lambda n: -table(n)


def normalization_scaled(
    params: FWParams,
    x: complex,
    convention: str = "gamma",
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> ScaledSum:
    normalization_class(params, convention).check(complex(x), "normalization series")
    return sum_log_series(_neg(log_structure_table(params, convention)), x, tol, max_terms)


def normalization(
    params: FWParams,
    x: complex,
    convention: str = "gamma",
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> SeriesValue:
    """``N(x) = sum_n x**n / rho(n)``; equals ``fw_eval`` in gamma convention."""
    return normalization_scaled(params, x, convention, tol, max_terms).as_series_value()


@dataclass(frozen=True)
class DeformationValues:
    e: dict
    f: dict
    f0: float | None = None


def deformation_at_zero(params: FWParams) -> float:
    """``f(0) = prod (b - B) / prod (a - A)``."""
    den = 1.0
    for a, A in params.upper:
        den *= a - A
    if den == 0.0:
        raise SingularDeformationError("f(0) is singular: some upper pair has a == A")
    num = 1.0
    for b, B in params.lower:
        num *= b - B
    return num / den


def deformation_values(
    params: FWParams, n_max: int, convention: str = "gamma", with_zero: bool = False
) -> DeformationValues:
    """``e(n) = rho(n) / rho(n-1)`` and ``f(n) = e(n) / n`` for ``1 <= n <= n_max``.

    In the product convention ``e(n)`` is the explicit product
    ``n * prod (b + B(n-1)) / prod (a + A(n-1))``; in the gamma convention it
    comes from the log structure constants.
    """
    check_convention(convention)
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}")
    e = {}
    if convention == "gamma":
        lr = log_rho_table(params, n_max + 1)
        for n in range(1, n_max + 1):
            e[n] = math.exp(lr[n] - lr[n - 1])
    else:
        for n in range(1, n_max + 1):
            v = float(n)
            for b, B in params.lower:
                v *= b + B * (n - 1)
            for a, A in params.upper:
                v /= a + A * (n - 1)
            e[n] = v
    f = {n: e[n] / n for n in e}
    return DeformationValues(e, f, deformation_at_zero(params) if with_zero else None)


@dataclass(frozen=True)
class StateCoefficients:
    """Fock-basis coefficients ``c_n = exp(log_magnitude) * exp(i phase)``."""

    params: FWParams
    z: complex
    kind: str
    convention: str
    coeffs: tuple[tuple[float, float], ...]
    n_max: int

    def values(self) -> np.ndarray:
        lm = np.array([c[0] for c in self.coeffs])
        ph = np.array([c[1] for c in self.coeffs])
        return np.exp(lm) * np.exp(1j * ph)

    def probabilities(self) -> np.ndarray:
        return np.exp(2.0 * np.array([c[0] for c in self.coeffs]))


def _choose_n_max(log_p: np.ndarray, tol: float) -> int | None:
    p = np.exp(log_p - log_p.max())
    cum = np.cumsum(p)
    n = len(p)
    for k in range(1, n - 3):
        if p[k] < tol * cum[k] and p[k + 1] <= p[k] and p[k + 2] <= p[k + 1] and p[k + 3] <= p[k + 2]:
            return k
    return None


def _coefficients(
    log_struct: Callable[[int], np.ndarray],
    domain: ConvergenceClass,
    params: FWParams,
    z: complex,
    kind: str,
    convention: str,
    tol: float,
    max_terms: int,
) -> StateCoefficients:
    z = complex(z)
    x = abs(z) ** 2
    domain.check(x, "normalization series")
    if z == 0:
        return StateCoefficients(params, z, kind, convention, ((0.0, 0.0),), 0)
    norm = sum_log_series(lambda n: -log_struct(n), x, tol, max_terms)
    log_norm = norm.log_abs
    theta = math.atan2(z.imag, z.real)
    log_abs_z = math.log(abs(z))
    size = min(64, max_terms)
    while True:
        lr = log_struct(size)
        idx = np.arange(size, dtype=float)
        log_c = idx * log_abs_z - 0.5 * lr - 0.5 * log_norm
        n_max = _choose_n_max(2.0 * log_c, tol)
        if n_max is not None:
            break
        if size >= max_terms:
            raise TruncationError(f"coefficient tail did not fall below tol={tol:g} within {max_terms} terms")
        size = min(2 * size, max_terms)
    coeffs = tuple((float(log_c[n]), n * theta) for n in range(n_max + 1))
    return StateCoefficients(params, z, kind, convention, coeffs, n_max)


def bg_coefficients(
    params: FWParams,
    z: complex,
    tol: float = DEFAULT_TOL,
    convention: str = "gamma",
    max_terms: int = DEFAULT_MAX_TERMS,
) -> StateCoefficients:
    """Barut-Girardello coefficients ``z**n / sqrt(rho(n) N(|z|^2))``."""
    table = log_structure_table(params, convention)
    return _coefficients(
        table, normalization_class(params, convention), params, z, "BG", convention, tol, max_terms
    )


def kp_coefficients(
    params: FWParams,
    z: complex,
    tol: float = DEFAULT_TOL,
    convention: str = "gamma",
    max_terms: int = DEFAULT_MAX_TERMS,
) -> StateCoefficients:
    """Klauder-Perelomov coefficients with ``rho~(n) = (n!)^2 / rho(n)``.

    The normalization is the series with the upper and lower lists
    exchanged; its domain is taken from the exchanged parameters.
    """
    check_convention(convention)
    table = _kp_table(params, convention)
    domain = normalization_class(params.swap(), convention)
    return _coefficients(table, domain, params, z, "KP", convention, tol, max_terms)


def _log_struct_for(params: FWParams, kind: str, convention: str):
    if kind == "BG":
        return log_structure_table(params, convention), normalization_class(params, convention)
    if kind == "KP":
        return _kp_table(params, check_convention(convention)), normalization_class(params.swap(), convention)
    raise DomainError(f"kind must be 'BG' or 'KP', got {kind!r}")


def overlap(
    params: FWParams,
    z1: complex,
    z2: complex,
    kind: str = "BG",
    convention: str = "gamma",
    tol: float = DEFAULT_TOL,
) -> complex:
    """``<z1|z2> = N(conj(z1) z2) / sqrt(N(|z1|^2) N(|z2|^2))``."""
    table, domain = _log_struct_for(params, kind, convention)
    z1 = complex(z1)
    z2 = complex(z2)
    w = z1.conjugate() * z2
    for arg in (abs(z1) ** 2, abs(z2) ** 2, w):
        domain.check(arg, "normalization series")
    coeff = lambda n: -table(n)
    cross = sum_log_series(coeff, w, tol)
    n1 = sum_log_series(coeff, abs(z1) ** 2, tol)
    n2 = sum_log_series(coeff, abs(z2) ** 2, tol)
    log_scale = cross.log_scale - 0.5 * (n1.log_abs + n2.log_abs)
    return cross.mantissa * math.exp(log_scale)


def evolve_first_order(params: FWParams, z: complex, omega: float, t: float) -> complex:
    """First-order time evolution ``z exp(-i omega t f(0))``."""
    f0 = deformation_at_zero(params)
    return complex(z) * cmath.exp(-1j * omega * t * f0)


def harmonic_limit_reference(params: FWParams, x: float) -> LogReal:
    """``prod Gamma(a)/prod Gamma(b) * exp(prod A / prod B * x)`` as a LogReal.

    Returned in log form since ``Gamma(a)`` overflows for the large ``a``
    this limit is meant for.
    """
    if x < 0:
        raise DomainError(f"x must be nonnegative, got {x!r}")
    omega = math.exp(math.fsum(math.log(k) for k in params.A) - math.fsum(math.log(k) for k in params.B))
    lg = math.fsum(log_gamma(a) for a in params.a) - math.fsum(log_gamma(b) for b in params.b)
    return LogReal(lg + omega * x, 1)
