"""Resolution-of-unity measure: Meijer-G weight, its moments and radial integrals.

The weight is ``G^{q+1,0}_{p,q+1}(omega x | a/A - 1 ; 0, b/B - 1)`` with
``omega = prod A / prod B``. Its Mellin transform is

    int_0^inf G(omega x) x**n dx
        = omega**-(n+1) * n! * prod Gamma(b/B + n) / prod Gamma(a/A + n),

which equals ``g(n) * prod Gamma(b/B) / (omega prod Gamma(a/A))`` with
``g`` the product-convention structure constant. The weight itself is
computed from its Mellin-Barnes integral along a vertical line through the
saddle point of the integrand, with the trapezoid rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import digamma, loggamma, polygamma

from .errors import DomainError, QuadratureError, UnsupportedContourError
from .foxwright import FWParams
from .quadrature import DEResult, de_integrate_half_line
from .special_core import LogReal, log_gamma
from .states import check_convention

__all__ = [
    "GOrder",
    "MeasureSpec",
    "ContourSpec",
    "measure_spec",
    "measure_constant",
    "unity_constant",
    "weight_moment_closed",
    "weight_moment_stated",
    "meijer_g",
    "weight_g_eval",
    "radial_integrate",
]


@dataclass(frozen=True)
class GOrder:
    m: int
    n: int
    p_order: int
    q_order: int


def _log_prod(values) -> float:
    return math.fsum(math.log(v) for v in values)


def measure_constant(params: FWParams) -> LogReal:
    """``C = prod A prod Gamma(a/A) prod Gamma(b) / (prod B prod Gamma(a) prod Gamma(b/B))``."""
    s = _log_prod(params.A) - _log_prod(params.B)
    s += math.fsum(log_gamma(a / A) - log_gamma(a) for a, A in params.upper)
    s += math.fsum(log_gamma(b) - log_gamma(b / B) for b, B in params.lower)
    return LogReal(s, 1)


def unity_constant(params: FWParams, convention: str = "gamma") -> LogReal:
    """Constant ``K`` with ``K * int G(omega x) x**n dx = rho(n)``.

    In the product convention this holds for every parameter set with
    ``K = omega prod Gamma(a/A) / prod Gamma(b/B)``. In the gamma convention
    ``K`` is :func:`measure_constant` and the relation holds when every step
    is 1.
    """
    check_convention(convention)
    c = measure_constant(params)
    if convention == "gamma":
        return c
    shift = math.fsum(log_gamma(b) for b in params.b) - math.fsum(log_gamma(a) for a in params.a)
    return LogReal(c.log_magnitude - shift, 1)


@dataclass(frozen=True)
class MeasureSpec:
    params: FWParams
    convention: str
    c_const: LogReal
    g_order: GOrder
    scale: float
    numerator_offsets: tuple[float, ...]
    denominator_offsets: tuple[float, ...]

    @property
    def unity(self) -> LogReal:
        return unity_constant(self.params, self.convention)


def measure_spec(params: FWParams, convention: str = "gamma") -> MeasureSpec:
    check_convention(convention)
    return MeasureSpec(
        params=params,
        convention=convention,
        c_const=measure_constant(params),
        g_order=GOrder(params.q + 1, 0, params.p, params.q + 1),
        scale=math.exp(_log_prod(params.A) - _log_prod(params.B)),
        numerator_offsets=(0.0,) + tuple(b / B - 1.0 for b, B in params.lower),
        denominator_offsets=tuple(a / A - 1.0 for a, A in params.upper),
    )


def weight_moment_closed(params: FWParams, n: int) -> LogReal:
    """``int_0^inf G(omega x) x**n dx`` in closed form (the exact Mellin transform)."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    log_omega = _log_prod(params.A) - _log_prod(params.B)
    s = -(n + 1) * log_omega + log_gamma(n + 1.0)
    s += math.fsum(log_gamma(b / B + n) for b, B in params.lower)
    s -= math.fsum(log_gamma(a / A + n) for a, A in params.upper)
    return LogReal(s, 1)


def weight_moment_stated(params: FWParams, n: int) -> LogReal:
    """The moment formula as usually written, ``omega**-n n! prod Gamma(b/B+n)/prod Gamma(a/A+n)``.

    It lacks the ``1/omega`` that comes from the argument scaling and so
    differs from :func:`weight_moment_closed` unless ``omega == 1``.
    """
    log_omega = _log_prod(params.A) - _log_prod(params.B)
    exact = weight_moment_closed(params, n)
    return LogReal(exact.log_magnitude + log_omega, 1)


@dataclass(frozen=True)
class ContourSpec:
    """Quadrature policy for the Mellin-Barnes line ``Re s = c``.

    ``c_abscissa=None`` places the line through the real saddle point of
    ``|integrand|``, which keeps the quadrature free of cancellation at
    large arguments. ``half_height`` and ``step`` are starting values that
    are adapted.
    """

    c_abscissa: float | None = None
    half_height: float = 40.0
    step: float = 0.05
    tol: float = 1e-12


DEFAULT_CONTOUR = ContourSpec()
_MAX_REFINE = 8
_MAX_EXTEND = 12


def _phi(c: float, num, den, log_y: float) -> float:
    return (
        math.fsum(log_gamma(b + c) for b in num) - math.fsum(log_gamma(a + c) for a in den) - c * log_y
    )


def _dphi(c: float, num, den, log_y: float) -> float:
    v = float(np.sum(digamma(np.add(num, c))))
    if den:
        v -= float(np.sum(digamma(np.add(den, c))))
    return v - log_y


def _d2phi(c: float, num, den) -> float:
    v = float(np.sum(polygamma(1, np.add(num, c))))
    if den:
        v -= float(np.sum(polygamma(1, np.add(den, c))))
    return v


def _saddle(num, den, log_y: float, c_lo: float) -> float:
    """Global minimizer of ``phi`` on ``[c_lo, inf)``.

    ``phi`` need not be convex (a denominator Gamma close to its own pole
    pushes it up near ``c_lo``), so a coarse grid locates the basin first.
    """
    k = len(num) - len(den)
    span = 4.0 * math.exp(min(log_y / k, 700.0)) + 20.0
    grid = c_lo + span * np.expm1(np.linspace(0.0, math.log1p(1.0), 81))
    vals = [_phi(c, num, den, log_y) for c in grid]
    i = int(np.argmin(vals))
    if i == len(grid) - 1:
        raise QuadratureError("could not bracket the Mellin-Barnes saddle point")
    lo = grid[max(i - 1, 0)]
    hi = grid[i + 1]
    if i == 0 and _dphi(c_lo, num, den, log_y) >= 0.0:
        return c_lo
    res = minimize_scalar(
        _phi, bounds=(lo, hi), args=(num, den, log_y), method="bounded", options={"xatol": 1e-9}
    )
    return float(res.x)


def _log_f(s: np.ndarray, num, den) -> np.ndarray:
    out = np.zeros_like(s)
    for b in num:
        out += loggamma(b + s)
    for a in den:
        out -= loggamma(a + s)
    return out


@lru_cache(maxsize=200_000)
def meijer_g(
    num: tuple[float, ...], den: tuple[float, ...], y: float, contour: ContourSpec = DEFAULT_CONTOUR
) -> float:
    """``G^{m,0}_{p,m}(y | den ; num)`` for ``m = len(num) > p = len(den)``.

    Evaluated as ``(1/pi) int_0^inf Re[F(c+it) y**-(c+it)] dt`` with
    ``F(s) = prod Gamma(num + s) / prod Gamma(den + s)``.
    """
    if len(num) <= len(den):
        raise UnsupportedContourError(
            f"Mellin-Barnes evaluation needs more numerator than denominator Gammas "
            f"(got {len(num)} and {len(den)})"
        )
    if not y > 0 or not math.isfinite(y):
        raise DomainError(f"G-function argument must be positive and finite, got {y!r}")
    pole = -min(num)
    log_y = math.log(y)
    if contour.c_abscissa is not None:
        c = float(contour.c_abscissa)
        if c <= pole:
            raise DomainError(f"contour abscissa {c} must lie right of the pole at {pole}")
        if den and c <= -min(den):
            raise DomainError(f"contour abscissa {c} must exceed {-min(den)}")
    else:
        c_lo = max(pole, -min(den) if den else -math.inf) + 0.1
        c = _saddle(num, den, log_y, c_lo)
    gap = c - pole
    phi0 = _phi(c, num, den, log_y)
    d2 = _d2phi(c, num, den)
    sigma = 1.0 / math.sqrt(d2) if d2 > 0 else 1.0
    if phi0 + math.log(sigma) + 5.0 < -760.0:
        return 0.0
    lf0 = float(_log_f(np.array([c + 0j]), num, den)[0].real)

    def g(t: np.ndarray) -> np.ndarray:
        s = c + 1j * t
        return np.exp(_log_f(s, num, den) - lf0 - 1j * t * log_y).real

    h = min(max(contour.step, sigma / 8.0), gap / 6.0)
    T = max(contour.half_height, 10.0 * sigma)
    kmax = int(math.ceil(T / h))
    vals = g(h * np.arange(kmax + 1))
    for _ in range(_MAX_EXTEND):
        tail = np.max(np.abs(vals[-max(4, kmax // 20):]))
        if tail <= 1e-18 * np.sum(np.abs(vals)):
            break
        extra = g(h * np.arange(kmax + 1, 2 * kmax + 1))
        vals = np.concatenate([vals, extra])
        kmax = 2 * kmax
    else:
        raise QuadratureError("Mellin-Barnes integrand did not decay along the contour")

    def trap(v: np.ndarray, step: float) -> float:
        return step * (0.5 * v[0] + math.fsum(v[1:]))

    s_prev = trap(vals, h)
    for _ in range(_MAX_REFINE):
        mid = g(h * (np.arange(kmax) + 0.5))
        merged = np.empty(2 * kmax + 1)
        merged[0::2] = vals
        merged[1::2] = mid
        vals = merged
        h *= 0.5
        kmax *= 2
        s_cur = trap(vals, h)
        l1 = h * float(np.sum(np.abs(vals)))
        if abs(s_cur - s_prev) <= contour.tol * abs(s_cur) + 64 * np.finfo(float).eps * l1:
            return math.exp(phi0) * s_cur / math.pi
        s_prev = s_cur
    raise QuadratureError(f"Mellin-Barnes quadrature did not reach tol={contour.tol:g}")


def weight_g_eval(spec: MeasureSpec, x: float, contour: ContourSpec = DEFAULT_CONTOUR) -> float:
    """The weight ``G^{q+1,0}_{p,q+1}(scale * x | offsets)`` at ``x > 0``."""
    if spec.g_order.m <= spec.g_order.p_order:
        raise UnsupportedContourError(
            f"weight needs q + 1 > p (got p={spec.g_order.p_order}, q={spec.g_order.m - 1})"
        )
    if not x > 0:
        raise DomainError(f"weight argument must be positive, got {x!r}")
    return meijer_g(spec.numerator_offsets, spec.denominator_offsets, spec.scale * x, contour)


def radial_integrate(
    spec: MeasureSpec,
    integrand: Callable[[float], complex],
    tol: float = 1e-8,
    contour: ContourSpec = DEFAULT_CONTOUR,
    full: bool = False,
):
    """``int_0^inf weight(x) integrand(x) dx`` by double-exponential quadrature.

    The integrand is not evaluated where the weight underflows to zero.
    Returns a float (complex if the integrand is complex), or the
    :class:`DEResult` when ``full`` is set.
    """
    if spec.g_order.m <= spec.g_order.p_order:
        raise UnsupportedContourError(
            f"weight needs q + 1 > p (got p={spec.g_order.p_order}, q={spec.g_order.m - 1})"
        )

    def f(x: float) -> complex:
        w = weight_g_eval(spec, x, contour)
        if w == 0.0:
            return 0.0
        return w * integrand(x)

    res: DEResult = de_integrate_half_line(f, tol)
    if full:
        return res
    v = res.value
    return v.real if v.imag == 0 else v
