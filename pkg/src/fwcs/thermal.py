"""Thermal (canonical) states for the linear spectrum ``E_n = e0 + hbar_omega n``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError
from .foxwright import DEFAULT_TOL, FWParams, sum_log_series
from .measure import measure_spec, radial_integrate, unity_constant
from .states import log_structure_table, normalization_class, normalization_scaled

__all__ = [
    "ThermalSpec",
    "partition_function",
    "fock_occupancy",
    "husimi_q",
    "husimi_normalization_residual",
]


@dataclass(frozen=True)
class ThermalSpec:
    beta: float
    e0: float = 0.0
    hbar_omega: float = 1.0

    def __post_init__(self):
        for name in ("beta", "hbar_omega"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ParameterError(f"{name} must be positive and finite, got {v!r}")
        if not math.isfinite(self.e0):
            raise ParameterError(f"e0 must be finite, got {self.e0!r}")

    @property
    def u(self) -> float:
        """Boltzmann ratio ``exp(-beta hbar_omega)`` between neighbouring levels."""
        return math.exp(-self.beta * self.hbar_omega)

    @property
    def one_minus_u(self) -> float:
        return -math.expm1(-self.beta * self.hbar_omega)


def partition_function(spec: ThermalSpec) -> float:
    """``Z = exp(-beta e0) / (1 - exp(-beta hbar_omega))``."""
    return math.exp(-spec.beta * spec.e0) / spec.one_minus_u


def fock_occupancy(spec: ThermalSpec, n: int) -> float:
    """``exp(-beta E_n) / Z``."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    return math.exp(-spec.beta * spec.hbar_omega * n) * spec.one_minus_u


def husimi_q(
    params: FWParams,
    spec: ThermalSpec,
    x: float,
    convention: str = "gamma",
    tol: float = DEFAULT_TOL,
    route: str = "closed",
) -> float:
    """Husimi distribution ``<z| rho_beta |z>`` at ``x = |z|^2``.

    ``route="closed"`` uses ``(1 - u) N(u x) / N(x)``; ``route="series"``
    sums ``(1/Z) (1/N(x)) sum_n exp(-beta E_n) x**n / rho(n)``.
    """
    x = float(x)
    if not x >= 0 or not math.isfinite(x):
        raise DomainError(f"x must be finite and nonnegative, got {x!r}")
    domain = normalization_class(params, convention)
    domain.check(x, "normalization series")
    n_x = normalization_scaled(params, x, convention, tol)
    if route == "closed":
        n_ux = normalization_scaled(params, spec.u * x, convention, tol)
        return spec.one_minus_u * (n_ux.mantissa / n_x.mantissa).real * math.exp(n_ux.log_scale - n_x.log_scale)
    if route == "series":
        table = log_structure_table(params, convention)
        b = spec.beta

        def coeffs(n: int) -> np.ndarray:
            energies = spec.e0 + spec.hbar_omega * np.arange(n, dtype=float)
            return -b * energies - table(n)

        s = sum_log_series(coeffs, x, tol)
        z = partition_function(spec)
        return (s.mantissa / n_x.mantissa).real * math.exp(s.log_scale - n_x.log_scale) / z
    raise DomainError(f"route must be 'closed' or 'series', got {route!r}")


def husimi_normalization_residual(
    params: FWParams,
    spec: ThermalSpec,
    convention: str = "gamma",
    tol: float = 1e-8,
) -> float:
    """``|int dmu(z) Q(|z|^2) - 1|`` with the resolution-of-unity measure.

    After the angular integration the measure is
    ``K N(x) G(omega x) dx`` with ``K`` from :func:`unity_constant`.
    """
    ms = measure_spec(params, convention)
    k = unity_constant(params, convention).value
    series_tol = min(DEFAULT_TOL, 1e-3 * tol)

    def integrand(x: float) -> float:
        n_x = normalization_scaled(params, x, convention, series_tol)
        q = husimi_q(params, spec, x, convention, series_tol)
        return n_x.mantissa.real * math.exp(n_x.log_scale) * q

    total = radial_integrate(ms, integrand, tol)
    return abs(k * total - 1.0)
