"""Scalar primitives: log-Gamma, k-Pochhammer symbols, compensated sums.

Everything downstream works with logarithms of Gamma products, so the
log-Gamma routine here is written to be accurate to roughly one unit in the
last place over the whole positive axis:

* ``x < 2.5`` uses the Taylor series of ``ln Gamma(1 + e)`` in terms of
  ``zeta(k) - 1`` (Abramowitz & Stegun 6.1.33 rearranged), shifted by one
  for the neighbourhood of 2 and by ``-ln x`` below 0.5;
* ``2.5 <= x < 10`` reduces to ``[1.5, 2.5)`` with the recurrence;
* ``x >= 10`` uses the Stirling series, with ``(x - 1/2) ln x - x``
  accumulated in double-double arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from scipy.special import zetac

from .errors import DomainError

__all__ = [
    "LogReal",
    "SumAccumulator",
    "log_gamma",
    "pochhammer_k",
    "log_gamma_shift",
    "gamma_shift_product_form",
    "compensated_sum",
]

_EULER_GAMMA = 0.57721566490153286061
_LN2_HI = 0.6931471805599453
_LN2_LO = 2.3190468138462996e-17
_HALF_LN_2PI_HI = 0.9189385332046728
_HALF_LN_2PI_LO = -3.878294158067242e-17
_SQRT_HALF = 0.7071067811865476

# (-1)^k (zeta(k) - 1) / k, k = 2..41; |e| <= 1/2 makes the tail < 1e-20
_ZETA_SERIES = tuple((-1) ** k * float(zetac(k)) / k for k in range(2, 42))

# B_2k / (2k (2k - 1)), k = 1..8
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    t = _SPLITTER * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLITTER * b
    bh = t - (t - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(ah: float, al: float, bh: float, bl: float) -> tuple[float, float]:
    s, e = _two_sum(ah, bh)
    e += al + bl
    return _two_sum(s, e)


def _lgamma1p(e: float) -> float:
    """ln Gamma(1 + e) for |e| <= 1/2."""
    acc = 0.0
    for c in reversed(_ZETA_SERIES):
        acc = acc * e + c
    return -math.log1p(e) + e * (1.0 - _EULER_GAMMA) + acc * e * e


def _stirling(x: float) -> float:
    m, k = math.frexp(x)
    if m < _SQRT_HALF:
        m *= 2.0
        k -= 1
    # ln x = k ln 2 + ln m as a double-double
    lh, ll = _two_prod(float(k), _LN2_HI)
    ll += k * _LN2_LO
    lh, ll = _dd_add(lh, ll, math.log(m), 0.0)
    xm = x - 0.5  # exact for 1 <= x < 2**52
    ph, pl = _two_prod(xm, lh)
    pl += xm * ll
    sh, sl = _dd_add(ph, pl, -x, 0.0)
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    for c in reversed(_STIRLING):
        series = series * inv2 + c
    sh, sl = _dd_add(sh, sl, _HALF_LN_2PI_HI, _HALF_LN_2PI_LO + series * inv)
    return sh + sl


def log_gamma(x: float) -> float:
    """Natural logarithm of the Gamma function for ``x > 0``.

    Raises
    ------
    DomainError
        If ``x`` is not a strictly positive finite number.
    """
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise DomainError(f"log_gamma requires a positive finite argument, got {x!r}")
    if x < 0.5:
        return _lgamma1p(x) - math.log(x)
    if x < 1.5:
        return _lgamma1p(x - 1.0)
    if x < 2.5:
        e = x - 2.0
        return _lgamma1p(e) + math.log1p(e)
    if x < 10.0:
        k = int(x - 1.5)
        y = x - k
        prod = 1.0
        for j in range(k):
            prod *= y + j
        e = y - 2.0
        return _lgamma1p(e) + math.log1p(e) + math.log(prod)
    return _stirling(x)


@dataclass(frozen=True)
class LogReal:
    """A real number stored as ``sign * exp(log_magnitude)``.

    ``sign == 0`` encodes an exact zero; ``log_magnitude`` is then ignored.
    """

    log_magnitude: float
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")

    @classmethod
    def from_value(cls, value: float) -> "LogReal":
        if value == 0.0:
            return cls(-math.inf, 0)
        return cls(math.log(abs(value)), 1 if value > 0 else -1)

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    def __float__(self) -> float:
        return self.value

    def __mul__(self, other: "LogReal") -> "LogReal":
        if self.sign == 0 or other.sign == 0:
            return LogReal(-math.inf, 0)
        return LogReal(self.log_magnitude + other.log_magnitude, self.sign * other.sign)

    def __truediv__(self, other: "LogReal") -> "LogReal":
        if other.sign == 0:
            raise ZeroDivisionError("division by an exact zero LogReal")
        if self.sign == 0:
            return self
        return LogReal(self.log_magnitude - other.log_magnitude, self.sign * other.sign)

    def inverse(self) -> "LogReal":
        return LogReal(0.0, 1) / self


def pochhammer_k(x: float, n: int, k: float) -> LogReal:
    """The k-Pochhammer symbol ``x (x + k) ... (x + (n - 1) k)``.

    Evaluated as ``k**n * Gamma(x/k + n) / Gamma(x/k)`` in log space.
    """
    if not x > 0 or not k > 0:
        raise DomainError(f"pochhammer_k requires x > 0 and k > 0, got x={x!r}, k={k!r}")
    if n < 0:
        raise DomainError(f"pochhammer_k requires n >= 0, got {n!r}")
    if n == 0:
        return LogReal(0.0, 1)
    r = x / k
    return LogReal(n * math.log(k) + log_gamma(r + n) - log_gamma(r), 1)


def log_gamma_shift(x: float, y: float, n: int) -> float:
    """``ln Gamma(x + y n)``, evaluated directly."""
    if not x > 0 or not y > 0:
        raise DomainError(f"log_gamma_shift requires x > 0 and y > 0, got x={x!r}, y={y!r}")
    if n < 0:
        raise DomainError(f"log_gamma_shift requires n >= 0, got {n!r}")
    return log_gamma(x + y * n)


def gamma_shift_product_form(x: float, y: float, n: int) -> float:
    """The product decomposition ``y**n (x/y)_n Gamma(x)`` of ``Gamma(x + y n)``.

    Only valid for ``y == 1``; kept so the discrepancy against
    :func:`log_gamma_shift` can be measured. Never used in computation.
    Returns the logarithm.
    """
    r = x / y
    return n * math.log(y) + log_gamma(r + n) - log_gamma(r) + log_gamma(x)


class SumAccumulator:
    """Running complex sum with Neumaier compensation.

    Real and imaginary parts are compensated independently.
    """

    __slots__ = ("_re", "_im", "_cre", "_cim", "terms")

    def __init__(self):
        self._re = 0.0
        self._im = 0.0
        self._cre = 0.0
        self._cim = 0.0
        self.terms = 0

    def add(self, term: complex) -> None:
        re = term.real
        im = term.imag
        t = self._re + re
        if abs(self._re) >= abs(re):
            self._cre += (self._re - t) + re
        else:
            self._cre += (re - t) + self._re
        self._re = t
        t = self._im + im
        if abs(self._im) >= abs(im):
            self._cim += (self._im - t) + im
        else:
            self._cim += (im - t) + self._im
        self._im = t
        self.terms += 1

    @property
    def partial(self) -> complex:
        return complex(self._re, self._im)

    @property
    def compensation(self) -> complex:
        return complex(self._cre, self._cim)

    @property
    def value(self) -> complex:
        return complex(self._re + self._cre, self._im + self._cim)


def compensated_sum(terms: Iterable[complex]) -> tuple[complex, int]:
    """Sum a finite stream in order with compensated accumulation.

    Returns the sum and the number of terms consumed.
    """
    acc = SumAccumulator()
    for t in terms:
        acc.add(complex(t))
    return acc.value, acc.terms
