"""Double-exponential quadrature on the half line.

Uses the exp-sinh map ``x = exp(pi/2 sinh t)`` with the trapezoid rule in
``t``; the step is halved until two successive levels agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import QuadratureError
from .special_core import SumAccumulator

__all__ = ["DEResult", "de_integrate_half_line"]

HALF_PI = 0.5 * math.pi
T_MAX = 6.78  # exp(pi/2 sinh 6.78) is just below the overflow threshold


@dataclass(frozen=True)
class DEResult:
    value: complex
    error_estimate: float
    evaluations: int
    level: int


def de_integrate_half_line(
    f: Callable[[float], complex],
    tol: float = 1e-8,
    max_level: int = 12,
    h0: float = 0.5,
    min_level: int = 2,
) -> DEResult:
    """Integrate ``f`` over ``(0, inf)``.

    ``f`` may return real or complex values. Each level sweeps outward from
    ``t = 0`` in both directions and stops a direction after two consecutive
    contributions that are negligible against the running total.

    Raises
    ------
    QuadratureError
        If successive levels still differ by more than ``tol`` (relative)
        after ``max_level`` halvings, or the integrand is not finite.
    """
    cache: dict[float, complex] = {}

    def contribution(t: float) -> complex:
        v = cache.get(t)
        if v is None:
            s = math.sinh(t)
            x = math.exp(HALF_PI * s)
            w = HALF_PI * math.cosh(t) * x
            if x == 0.0:
                v = 0.0
            else:
                fx = f(x)
                v = 0.0 if fx == 0 else w * fx
                if not (math.isfinite(abs(v))):
                    raise QuadratureError(f"integrand is not finite at x = {x!r}")
            cache[t] = v
        return v

    stop_rel = min(1e-3 * tol, 1e-12)

    def sweep(h: float, odd_only: bool, acc: SumAccumulator, scale: float) -> None:
        start = 1
        stride = 2 if odd_only else 1
        if not odd_only:
            acc.add(complex(contribution(0.0)))
        for sign in (1.0, -1.0):
            quiet = 0
            k = start
            while True:
                t = sign * k * h
                if abs(t) > T_MAX:
                    break
                v = complex(contribution(t))
                acc.add(v)
                ref = max(abs(acc.value), scale)
                if abs(v) <= stop_rel * ref:
                    quiet += 1
                    if quiet >= 2:
                        break
                else:
                    quiet = 0
                k += stride

    h = h0
    acc = SumAccumulator()
    sweep(h, False, acc, 0.0)
    prev = h * acc.value
    for level in range(1, max_level + 1):
        h *= 0.5
        sweep(h, True, acc, abs(acc.value))
        cur = h * acc.value
        diff = abs(cur - prev)
        if level >= min_level and diff <= tol * abs(cur):
            return DEResult(cur, diff, len(cache), level)
        if level >= min_level and cur == 0 and prev == 0:
            return DEResult(0j, 0.0, len(cache), level)
        prev = cur
    raise QuadratureError(
        f"double-exponential rule did not converge to tol={tol:g} in {max_level} levels "
        f"(last difference {diff:.3g})"
    )
