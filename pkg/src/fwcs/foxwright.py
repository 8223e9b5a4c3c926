"""Fox-Wright Psi function: convergence, series evaluation and relatives.

The series is

    pPsi_q(z) = sum_n  prod Gamma(a_i + A_i n) / prod Gamma(b_j + B_j n) * z**n / n!
              = sum_n  z**n / rho(n)

and every evaluation goes through :func:`sum_log_series`, which takes the
logarithms of the positive coefficients ``1/rho(n)`` and sums in a scaled
frame so that neither the coefficients nor the powers of ``z`` overflow.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DivergenceError, DomainError, ParameterError, TruncationError
from .special_core import LogReal, log_gamma

__all__ = [
    "FWParams",
    "ConvergenceClass",
    "SeriesValue",
    "ScaledSum",
    "HypergeometricReduction",
    "convergence_class",
    "log_rho",
    "log_rho_table",
    "sum_log_series",
    "fw_eval",
    "fw_eval_scaled",
    "fw_derivative",
    "reduce_to_hypergeometric",
    "hypergeometric_pfq",
    "fw_reduction_residual",
    "mittag_leffler_value",
    "laplace_closed_form",
]

DEFAULT_TOL = 1e-12
DEFAULT_MAX_TERMS = 10_000
BOUNDARY_ATOL = 1e-12


def _pairs(values, label: str) -> tuple[tuple[float, float], ...]:
    out = []
    for item in values:
        try:
            x, k = item
            x = float(x)
            k = float(k)
        except (TypeError, ValueError) as exc:
            raise ParameterError(f"{label} entries must be (value, step) pairs, got {item!r}") from exc
        if not (math.isfinite(x) and math.isfinite(k)) or x <= 0 or k <= 0:
            raise ParameterError(f"{label} entries must be finite and strictly positive, got {item!r}")
        out.append((x, k))
    return tuple(out)


@dataclass(frozen=True)
class FWParams:
    """Upper pairs ``(a_i, A_i)`` and lower pairs ``(b_j, B_j)``.

    Entries are kept in input order; two parameter sets are equal iff both
    lists are equal. Instances are hashable and immutable.
    """

    upper: tuple[tuple[float, float], ...] = ()
    lower: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "upper", _pairs(self.upper, "upper"))
        object.__setattr__(self, "lower", _pairs(self.lower, "lower"))

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)

    @property
    def a(self) -> tuple[float, ...]:
        return tuple(x for x, _ in self.upper)

    @property
    def A(self) -> tuple[float, ...]:
        return tuple(k for _, k in self.upper)

    @property
    def b(self) -> tuple[float, ...]:
        return tuple(x for x, _ in self.lower)

    @property
    def B(self) -> tuple[float, ...]:
        return tuple(k for _, k in self.lower)

    @property
    def delta(self) -> float:
        return math.fsum(self.B) - math.fsum(self.A)

    @property
    def unit_steps(self) -> bool:
        return all(k == 1.0 for k in self.A + self.B)

    def swap(self) -> "FWParams":
        """Exchange the upper and lower lists."""
        return FWParams(self.lower, self.upper)

    def to_lists(self) -> dict:
        return {"upper": [list(t) for t in self.upper], "lower": [list(t) for t in self.lower]}


@dataclass(frozen=True)
class ConvergenceClass:
    delta: float
    kind: str  # "entire", "boundary_radius" or "divergent"
    radius: float = math.inf

    def check(self, z: complex, what: str = "series") -> None:
        """Raise :class:`DivergenceError` if the series diverges at ``z``."""
        if self.kind == "divergent":
            raise DivergenceError(f"{what} diverges for every z != 0 (delta = {self.delta:.6g} < -1)")
        if self.kind == "boundary_radius" and abs(z) >= self.radius:
            raise DivergenceError(
                f"{what} diverges at |z| = {abs(z):.17g} >= radius {self.radius:.17g}"
            )


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    terms_used: int
    truncation_error: float


class ScaledSum(NamedTuple):
    """``value == mantissa * exp(log_scale)``; the error is relative."""

    mantissa: complex
    log_scale: float
    terms_used: int
    truncation_error: float

    @property
    def value(self) -> complex:
        if self.mantissa == 0:
            return 0j
        s = math.exp(self.log_scale) if self.log_scale < 709.0 else math.inf
        return complex(self.mantissa.real * s, self.mantissa.imag * s)

    @property
    def log_abs(self) -> float:
        m = abs(self.mantissa)
        return -math.inf if m == 0 else math.log(m) + self.log_scale

    def as_series_value(self) -> SeriesValue:
        return SeriesValue(self.value, self.terms_used, self.truncation_error)


def convergence_class(params: FWParams) -> ConvergenceClass:
    """Classify the series by ``delta = sum B - sum A``."""
    delta = params.delta
    if abs(delta + 1.0) <= BOUNDARY_ATOL:
        log_r = math.fsum(k * math.log(k) for k in params.B) - math.fsum(k * math.log(k) for k in params.A)
        return ConvergenceClass(delta, "boundary_radius", math.exp(log_r))
    if delta > -1.0:
        return ConvergenceClass(delta, "entire")
    return ConvergenceClass(delta, "divergent", 0.0)


class LogTable:
    """Lazily extended array ``f(0), f(1), ...`` of a scalar function of n."""

    def __init__(self, fn: Callable[[int], float]):
        self._fn = fn
        self._data = np.empty(0)
        self._lock = threading.Lock()

    def __call__(self, n: int) -> np.ndarray:
        data = self._data
        if len(data) < n:
            with self._lock:
                data = self._data
                if len(data) < n:
                    size = max(n, 2 * len(data))
                    ext = np.fromiter((self._fn(k) for k in range(len(data), size)), float, size - len(data))
                    data = np.concatenate([data, ext])
                    self._data = data
        return data[:n]


def _log_rho_scalar(params: FWParams, n: int) -> float:
    s = log_gamma(n + 1.0)
    for b, B in params.lower:
        s += log_gamma(b + B * n)
    for a, A in params.upper:
        s -= log_gamma(a + A * n)
    return s


@lru_cache(maxsize=512)
def _rho_table(params: FWParams) -> LogTable:
    return LogTable(lambda n: _log_rho_scalar(params, n))


def _coeff_table(params: FWParams) -> Callable[[int], np.ndarray]:
    rho = _rho_table(params)
    return lambda n: -rho(n)


def log_rho(params: FWParams, n: int) -> float:
    """``ln rho(n) = ln n! + sum ln Gamma(b + B n) - sum ln Gamma(a + A n)``."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    return float(_rho_table(params)(n + 1)[n])


def log_rho_table(params: FWParams, n: int) -> np.ndarray:
    """``ln rho(k)`` for ``k = 0..n-1``."""
    return _rho_table(params)(n)


def sum_log_series(
    log_coeffs: Callable[[int], np.ndarray],
    z: complex,
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> ScaledSum:
    """Sum ``sum_n exp(log_coeffs[n]) * z**n`` in ascending order.

    ``log_coeffs(N)`` must return the first ``N`` log-coefficients. Summation
    stops at the first index ``k`` past the largest term where terms
    ``k, k+1, k+2`` are each below ``tol * |partial sum|`` and twice the
    first discarded term is below ``tol * |sum|``. The partial sum is
    accumulated with :func:`math.fsum` on real and imaginary parts.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    if max_terms < 1:
        raise DomainError(f"max_terms must be at least 1, got {max_terms!r}")
    z = complex(z)
    if z == 0:
        c0 = float(log_coeffs(1)[0])
        return ScaledSum(1 + 0j, c0, 1, 0.0)
    log_r = math.log(abs(z))
    real_arg = z.imag == 0.0
    theta = math.atan2(z.imag, z.real)
    n_avail = min(64, max_terms)
    while True:
        w = log_coeffs(n_avail)
        idx = np.arange(n_avail, dtype=float)
        lt = w + idx * log_r
        top = int(np.argmax(lt))
        shift = float(lt[top])
        mag = np.exp(lt - shift)
        if real_arg:
            terms = -mag * (2 * (np.arange(n_avail) & 1) - 1) if z.real < 0 else mag
            partial = np.abs(np.cumsum(terms))
        else:
            terms = mag * np.exp(1j * theta * idx)
            partial = np.abs(np.cumsum(terms))
        thresh = tol * (partial + 1e-300)
        small = mag < thresh
        if n_avail >= 4:
            ok = small[:-3] & small[1:-2] & small[2:-1] & (2.0 * mag[3:] <= thresh[2:-1])
            ok[: top + 1] = False
            hits = np.flatnonzero(ok)
        else:
            hits = ()
        if len(hits):
            k = int(hits[0]) + 3
            used = terms[:k]
            if real_arg:
                total = complex(math.fsum(used), 0.0)
            else:
                total = complex(math.fsum(used.real), math.fsum(used.imag))
            scale = abs(total)
            err = 2.0 * float(mag[k]) / scale if scale > 0 else 2.0 * float(mag[k])
            return ScaledSum(total, shift, k, err)
        if n_avail >= max_terms:
            raise TruncationError(
                f"series did not reach tol={tol:g} within max_terms={max_terms}"
            )
        n_avail = min(2 * n_avail, max_terms)


def fw_eval_scaled(
    params: FWParams, z: complex, tol: float = DEFAULT_TOL, max_terms: int = DEFAULT_MAX_TERMS
) -> ScaledSum:
    """:func:`fw_eval` without leaving log-scaled form; useful for huge values."""
    z = complex(z)
    convergence_class(params).check(z, "Fox-Wright series")
    return sum_log_series(_coeff_table(params), z, tol, max_terms)


def fw_eval(
    params: FWParams, z: complex, tol: float = DEFAULT_TOL, max_terms: int = DEFAULT_MAX_TERMS
) -> SeriesValue:
    """Evaluate ``pPsi_q(z)`` by its power series.

    Raises
    ------
    DivergenceError
        If ``delta < -1``, or ``delta = -1`` and ``|z| >= R``.
    TruncationError
        If ``max_terms`` terms do not reach the tolerance.
    """
    return fw_eval_scaled(params, z, tol, max_terms).as_series_value()


def _shifted(params: FWParams, m: int) -> FWParams:
    return FWParams(
        tuple((a + A * m, A) for a, A in params.upper),
        tuple((b + B * m, B) for b, B in params.lower),
    )


def fw_derivative(
    params: FWParams,
    z: complex,
    m: int,
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> SeriesValue:
    """m-th derivative in ``z``: the series with ``a -> a + A m``, ``b -> b + B m``."""
    if m < 0:
        raise DomainError(f"derivative order must be nonnegative, got {m}")
    return fw_eval(_shifted(params, m), z, tol, max_terms)


class HypergeometricReduction(NamedTuple):
    prefactor: LogReal
    reduced_upper: tuple[float, ...]
    reduced_lower: tuple[float, ...]
    argument_scale: float


def reduce_to_hypergeometric(params: FWParams) -> HypergeometricReduction:
    """Return the data of the stated pFq reduction of a Fox-Wright function.

    Prefactor ``prod Gamma(a)/prod Gamma(b)``, parameters ``a/A`` and
    ``b/B``, argument scale ``prod A/prod B``. The reduction is an identity
    only when every step equals 1; use :func:`fw_reduction_residual` to
    measure how far off it is otherwise.
    """
    log_pref = math.fsum(log_gamma(a) for a in params.a) - math.fsum(log_gamma(b) for b in params.b)
    scale = math.exp(math.fsum(math.log(k) for k in params.A) - math.fsum(math.log(k) for k in params.B))
    return HypergeometricReduction(
        LogReal(log_pref, 1),
        tuple(a / A for a, A in params.upper),
        tuple(b / B for b, B in params.lower),
        scale,
    )


@lru_cache(maxsize=256)
def _pfq_table(upper: tuple[float, ...], lower: tuple[float, ...]) -> LogTable:
    lg_u = [log_gamma(x) for x in upper]
    lg_l = [log_gamma(x) for x in lower]

    def coeff(n: int) -> float:
        # ln [ prod (a)_n / prod (b)_n / n! ]
        s = -log_gamma(n + 1.0)
        for x, g in zip(upper, lg_u):
            s += log_gamma(x + n) - g
        for x, g in zip(lower, lg_l):
            s -= log_gamma(x + n) - g
        return s

    return LogTable(coeff)


def hypergeometric_pfq(
    upper: Sequence[float],
    lower: Sequence[float],
    z: complex,
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> SeriesValue:
    """Generalized hypergeometric series from its Pochhammer definition (positive parameters)."""
    upper = tuple(float(x) for x in upper)
    lower = tuple(float(x) for x in lower)
    if any(not x > 0 for x in upper + lower):
        raise DomainError("hypergeometric parameters must be positive")
    z = complex(z)
    p, q = len(upper), len(lower)
    if p > q + 1 and z != 0:
        raise DivergenceError(f"{p}F{q} diverges for every z != 0")
    if p == q + 1 and abs(z) >= 1:
        raise DivergenceError(f"{p}F{q} diverges at |z| = {abs(z):.17g} >= 1")
    return sum_log_series(_pfq_table(upper, lower), z, tol, max_terms).as_series_value()


def fw_reduction_residual(params: FWParams, z: complex, tol: float = DEFAULT_TOL) -> float:
    """Relative gap between ``pPsi_q(z)`` and ``prefactor * pFq(reduced; scale z)``."""
    lhs = fw_eval(params, z, tol).value
    red = reduce_to_hypergeometric(params)
    rhs = red.prefactor.value * hypergeometric_pfq(
        red.reduced_upper, red.reduced_lower, red.argument_scale * complex(z), tol
    ).value
    if lhs == 0:
        return abs(rhs)
    return abs(lhs - rhs) / abs(lhs)


def mittag_leffler_value(params: FWParams, z: complex, tol: float = DEFAULT_TOL) -> SeriesValue:
    """Multi-index Mittag-Leffler value ``pPsi_q(z) / prod Gamma(a_i)``."""
    s = fw_eval_scaled(params, z, tol)
    shift = math.fsum(log_gamma(a) for a in params.a)
    return ScaledSum(s.mantissa, s.log_scale - shift, s.terms_used, s.truncation_error).as_series_value()


def laplace_closed_form(
    params: FWParams, s: complex, tol: float = DEFAULT_TOL, max_terms: int = DEFAULT_MAX_TERMS
) -> SeriesValue:
    """``(1/s) * Psi`` with an extra upper pair ``(1, 1)``, evaluated at ``1/s``."""
    s = complex(s)
    if not s.real > 0:
        raise DomainError(f"Laplace variable needs a positive real part, got {s!r}")
    aug = FWParams(params.upper + ((1.0, 1.0),), params.lower)
    v = fw_eval(aug, 1.0 / s, tol, max_terms)
    return SeriesValue(v.value / s, v.terms_used, v.truncation_error)
