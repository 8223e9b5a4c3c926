"""Numerical verification of the series and integral identities.

Each ``check_*`` function returns :class:`IdentityResult` records. A record
is *asserted* (pass or fail) when the identity is a theorem for the given
parameters, and ``report_only`` when it is known to hold only in special
cases; report-only records never fail a run. Creation and annihilation
symbols are replaced by the scalars ``lam`` and ``eps``, and angular
integrals are done analytically, so every integral that remains is a
one-dimensional radial one.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DivergenceError, FWCSError
from .foxwright import (
    FWParams,
    _pfq_table,
    convergence_class,
    fw_eval,
    fw_eval_scaled,
    fw_reduction_residual,
    hypergeometric_pfq,
    laplace_closed_form,
    log_rho,
    reduce_to_hypergeometric,
    sum_log_series,
)
from .measure import (
    measure_constant,
    measure_spec,
    radial_integrate,
    unity_constant,
    weight_g_eval,
    weight_moment_closed,
    weight_moment_stated,
)
from .quadrature import de_integrate_half_line
from .special_core import SumAccumulator, gamma_shift_product_form, log_gamma, log_gamma_shift
from .states import harmonic_limit_reference, log_structure_table, normalization, normalization_class
from .thermal import ThermalSpec, husimi_normalization_residual

__all__ = [
    "IdentityResult",
    "SUITES",
    "CANONICAL",
    "check_unit_argument_sum",
    "check_laplace",
    "check_moment_identity",
    "check_reproducing_kernel",
    "check_int1",
    "check_int2",
    "check_kp_kernel",
    "harmonic_limit_probe",
    "run_suite",
    "report_to_json",
]

TOL_SERIES = 1e-10
TOL_QUAD = 1e-6
TOL_GAUSS = 1e-8
TOL_SECTION6 = 1e-5

CANONICAL = {
    "C0": FWParams([], []),
    "C1": FWParams([], [(1, 1)]),
    "C2": FWParams([], [(2, 1)]),
    "C3": FWParams([(2, 1)], [(3, 1)]),
}


@dataclass(frozen=True)
class IdentityResult:
    identity_id: str
    lhs: complex
    rhs: complex
    residual: float
    tolerance: float
    status: str
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "identity_id": self.identity_id,
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "residual": _jsonable(self.residual),
            "tolerance": _jsonable(self.tolerance),
            "status": self.status,
            "reason": self.reason,
        }


def _jsonable(v):
    if isinstance(v, complex) or isinstance(v, np.complexfloating):
        if v.imag == 0:
            return _jsonable(float(v.real))
        return {"re": _jsonable(float(v.real)), "im": _jsonable(float(v.imag))}
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _rel(lhs: complex, rhs: complex) -> float:
    lhs = complex(lhs)
    rhs = complex(rhs)
    if not (math.isfinite(abs(lhs)) and math.isfinite(abs(rhs))):
        return math.inf
    d = abs(lhs - rhs)
    return d / abs(rhs) if rhs != 0 else d


def _result(
    identity_id: str, lhs, rhs, tol: float, asserted: bool = True, reason: str = "", residual=None
) -> IdentityResult:
    res = _rel(lhs, rhs) if residual is None else residual
    if asserted:
        status = "pass" if res <= tol else "fail"
    else:
        status = "report_only"
    return IdentityResult(identity_id, complex(lhs), complex(rhs), float(res), tol, status, reason)


def _skipped(identity_id: str, tol: float, reason: str) -> IdentityResult:
    return IdentityResult(identity_id, complex(math.nan), complex(math.nan), math.nan, tol, "skipped", reason)


def _label(params: FWParams) -> str:
    for k, v in CANONICAL.items():
        if v == params:
            return k
    fmt = lambda pairs: ",".join(f"{x:g}:{k:g}" for x, k in pairs)
    return f"[{fmt(params.upper)}|{fmt(params.lower)}]"


def _radial_tol(tol: float) -> float:
    return min(1e-9, 1e-2 * tol)


# ---------------------------------------------------------------- series


def check_unit_argument_sum(params: FWParams, tol: float = 1e-12, identity_id: str | None = None) -> IdentityResult:
    """Term-by-term ``sum 1/rho(n)`` against ``fw_eval(params, 1)``."""
    iid = identity_id or f"unity/unit_argument_sum/{_label(params)}"
    cls = convergence_class(params)
    if cls.kind == "divergent" or (cls.kind == "boundary_radius" and cls.radius <= 1.0):
        return _skipped(iid, tol, f"z = 1 outside the domain ({cls.kind}, radius {cls.radius:g})")
    acc = SumAccumulator()
    quiet = 0
    prev = math.inf
    for n in range(100_000):
        t = math.exp(-log_rho(params, n))
        acc.add(t)
        if t <= 1e-18 * acc.value.real and t <= prev:
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
        prev = t
    lhs = acc.value
    rhs = fw_eval(params, 1.0, tol=1e-15).value
    return _result(iid, lhs, rhs, tol)


def check_laplace(params: FWParams, s: float, tol: float = 1e-7, identity_id: str | None = None) -> IdentityResult:
    """Quadrature of ``int exp(-s x) Psi(x) dx`` against the closed form.

    Raises :class:`DivergenceError` when ``1/s`` is outside the domain of
    the augmented series (the integral then diverges).
    """
    iid = identity_id or f"laplace/{_label(params)}/s={s:g}"
    rhs = laplace_closed_form(params, s).value

    # largest series term grows like exp((1+delta) (x/h)**(1/(1+delta)))
    d1 = 1.0 + params.delta
    log_h = math.fsum(B * math.log(B) for B in params.B) - math.fsum(A * math.log(A) for A in params.A)

    def f(x: float) -> float:
        growth = d1 * math.exp((math.log(x) - log_h) / d1)
        if growth - s * x + 10.0 * math.log1p(x) < -800.0:
            return 0.0
        v = fw_eval_scaled(params, x)
        e = v.log_scale - s * x
        return 0.0 if e < -745.0 else v.mantissa.real * math.exp(e)

    lhs = de_integrate_half_line(f, tol=_radial_tol(tol)).value
    return _result(iid, lhs, rhs, tol)


# ---------------------------------------------------------------- measure


def _ratio_variation(values: Sequence[float]) -> float:
    r0 = values[0]
    return max(abs(math.expm1(v - r0)) for v in values)


def check_moment_identity(
    params: FWParams, n_list: Iterable[int] = range(6), tol: float = TOL_QUAD
) -> list[IdentityResult]:
    """Numeric radial moments of the weight against the closed Mellin moments.

    Also reports how the moments compare with the gamma-convention
    structure constants divided by ``C`` and with the moment formula written
    without the ``1/omega`` scale factor.
    """
    lab = _label(params)
    ms = measure_spec(params)
    out = []
    c = measure_constant(params)
    for n in n_list:
        lhs = radial_integrate(ms, lambda x, n=n: x**n, _radial_tol(tol))
        closed = weight_moment_closed(params, n).value
        out.append(_result(f"moments/{lab}/n={n}", lhs, closed, tol))
        if params.unit_steps:
            continue
        rho_over_c = math.exp(log_rho(params, n) - c.log_magnitude)
        out.append(
            _result(
                f"moments/{lab}/n={n}/gamma_convention_rhs",
                lhs,
                rho_over_c,
                tol,
                asserted=False,
                reason="rho(n)/C; equal to the moment only when every step is 1",
            )
        )
        if ms.scale != 1.0:
            out.append(
                _result(
                    f"moments/{lab}/n={n}/stated_form",
                    lhs,
                    weight_moment_stated(params, n).value,
                    tol,
                    asserted=False,
                    reason="moment formula without the 1/omega factor",
                )
            )
    lm = [weight_moment_closed(params, n).log_magnitude for n in range(11)]
    gamma_ratio = [m - log_rho(params, n) for n, m in enumerate(lm)]
    var = _ratio_variation(gamma_ratio)
    out.append(
        _result(
            f"moments/{lab}/gamma_ratio_variation",
            var,
            0.0,
            1e-10,
            asserted=params.unit_steps,
            reason="max |r(n)/r(0) - 1| over n=0..10, r(n) = moment(n)/rho(n)",
            residual=var,
        )
    )
    g_table = log_structure_table(params, "product")(11)
    var_p = _ratio_variation([m - g for m, g in zip(lm, g_table)])
    out.append(
        _result(
            f"moments/{lab}/product_ratio_variation",
            var_p,
            0.0,
            1e-10,
            reason="max |r(n)/r(0) - 1| over n=0..10, r(n) = moment(n)/g(n)",
            residual=var_p,
        )
    )
    return out


def check_weight_pointwise(params: FWParams, xs: Sequence[float], oracle: Callable[[float], float], name: str,
                           tol: float = TOL_QUAD) -> list[IdentityResult]:
    ms = measure_spec(params)
    return [_result(f"moments/{name}_pointwise/x={x:g}", weight_g_eval(ms, x), oracle(x), tol) for x in xs]


def _series_integrand(log_coeffs, w: complex) -> Callable[[float], complex]:
    def f(x: float) -> complex:
        v = sum_log_series(log_coeffs, w * x, 1e-14)
        val = v.mantissa * math.exp(v.log_scale) if v.log_scale < 709 else complex(math.inf)
        return val.real if isinstance(w, float) else val

    return f


def check_reproducing_kernel(
    params: FWParams,
    z1: complex,
    z2: complex,
    tol: float = TOL_QUAD,
    convention: str = "gamma",
    identity_id: str | None = None,
) -> IdentityResult:
    """``N(conj(z1) z2)`` against ``K int G(omega x) sum (w x)^n / rho(n)^2 dx``."""
    iid = identity_id or f"kernel/{_label(params)}/{convention}/z1={z1:g},z2={z2:g}"
    w = complex(z1).conjugate() * complex(z2)
    if normalization_class(params, convention).kind != "entire":
        return _skipped(iid, tol, "kernel integral needs an entire normalization series")
    lhs = normalization(params, w, convention).value
    table = log_structure_table(params, convention)
    k = unity_constant(params, convention).value
    wv = w.real if w.imag == 0 else w
    integral = radial_integrate(measure_spec(params, convention), _series_integrand(lambda n: -2.0 * table(n), wv),
                                _radial_tol(tol))
    asserted = convention == "product" or params.unit_steps
    return _result(iid, lhs, k * integral, tol, asserted,
                   "" if asserted else "gamma convention with non-unit steps")


def _merged(upper_lists, lower_lists) -> FWParams:
    up = tuple(p for lst in upper_lists for p in lst)
    lo = tuple(p for lst in lower_lists for p in lst)
    return FWParams(up, lo)


def check_int1(
    g_params: FWParams, fw_params: FWParams, lam: float, tol: float = TOL_SECTION6, identity_id: str | None = None
) -> IdentityResult:
    """``int G(omega x) Psi_fw(lam x) dx`` against ``C^-1 Psi[(b,B),(1,1),(c,C); (a,A),(d,D)](lam)``."""
    iid = identity_id or f"int1/{_label(g_params)}/fw={_label(fw_params)}/lam={lam:g}"
    merged = _merged([g_params.lower, ((1.0, 1.0),), fw_params.upper], [g_params.upper, fw_params.lower])
    c = measure_constant(g_params).value
    try:
        rhs = fw_eval(merged, lam).value / c
    except DivergenceError as exc:
        return _skipped(iid, tol, f"merged series diverges: {exc}")
    if convergence_class(fw_params).kind != "entire" and lam != 0:
        return _skipped(iid, tol, "integrand factor must be entire")
    ms = measure_spec(g_params)

    def f(x: float) -> float:
        v = fw_eval_scaled(fw_params, lam * x, 1e-14)
        return v.mantissa.real * math.exp(v.log_scale)

    lhs = radial_integrate(ms, f, _radial_tol(tol))
    asserted = g_params.unit_steps
    return _result(iid, lhs, rhs, tol, asserted, "" if asserted else "weight with non-unit steps")


def _hyp_log_coeffs(fw: FWParams):
    red = reduce_to_hypergeometric(fw)
    table = _pfq_table(red.reduced_upper, red.reduced_lower)
    shift = red.prefactor.log_magnitude
    log_scale = math.log(red.argument_scale)
    return lambda n: table(n) + shift + log_scale * np.arange(n)


def check_int2(
    g_params: FWParams,
    fw1: FWParams,
    fw2: FWParams,
    lam: float,
    eps: float,
    tol: float = TOL_SECTION6,
    hypergeometric_factors: bool = False,
    identity_id: str | None = None,
) -> IdentityResult:
    """Two-factor integral against ``C^-1 Psi[(b,B),(c,C),(e,E); (a,A),(d,D),(f,F)](lam eps)``.

    The angular average of ``Psi_1(lam z) Psi_2(eps conj(z))`` keeps only the
    diagonal terms. With ``hypergeometric_factors`` the two factors are
    expanded through their pFq reductions, which requires unit steps.
    """
    tag = "int2_hyp" if hypergeometric_factors else "int2"
    iid = identity_id or (
        f"{tag}/{_label(g_params)}/fw1={_label(fw1)},fw2={_label(fw2)}/lam={lam:g},eps={eps:g}"
    )
    merged = _merged([g_params.lower, fw1.upper, fw2.upper], [g_params.upper, fw1.lower, fw2.lower])
    c = measure_constant(g_params).value
    try:
        rhs = fw_eval(merged, lam * eps).value / c
    except DivergenceError as exc:
        return _skipped(iid, tol, f"merged series diverges: {exc}")
    if hypergeometric_factors:
        if not (fw1.unit_steps and fw2.unit_steps):
            return _skipped(iid, tol, "hypergeometric factor form needs unit steps")
        h1, h2 = _hyp_log_coeffs(fw1), _hyp_log_coeffs(fw2)
        log_coeffs = lambda n: h1(n) + h2(n)
    else:
        t1 = log_structure_table(fw1, "gamma")
        t2 = log_structure_table(fw2, "gamma")
        log_coeffs = lambda n: -t1(n) - t2(n)
    lhs = radial_integrate(measure_spec(g_params), _series_integrand(log_coeffs, float(lam * eps)),
                           _radial_tol(tol))
    asserted = g_params.unit_steps
    return _result(iid, lhs, rhs, tol, asserted, "" if asserted else "weight with non-unit steps")


def check_kp_kernel(
    params: FWParams,
    lam: float,
    eps: float,
    tol: float = TOL_SECTION6,
    convention: str = "gamma",
    identity_id: str | None = None,
) -> IdentityResult:
    """Klauder-Perelomov kernel integral with the exchanged-parameter weight.

    ``LHS = int G~(omega~ x) sum (lam eps x)^n / (n!)^2 dx``. In the gamma
    convention the right side is ``C~ Psi(lam eps)`` with ``C~`` the measure
    constant of the exchanged parameters, asserted for unit steps; in the
    product convention it is ``N_product(lam eps) / K~``, always asserted.
    """
    iid = identity_id or f"kp-kernel/{_label(params)}/{convention}/lam={lam:g},eps={eps:g}"
    swapped = params.swap()
    if swapped.q + 1 <= swapped.p:
        return _skipped(iid, tol, "exchanged weight needs p + 1 > q")
    y = lam * eps
    try:
        if convention == "gamma":
            rhs = measure_constant(swapped).value * fw_eval(params, y).value
        else:
            rhs = normalization(params, y, "product").value / unity_constant(swapped, "product").value
    except DivergenceError as exc:
        return _skipped(iid, tol, f"right-hand series diverges: {exc}")
    fact = lambda n: -2.0 * np.array([log_gamma(k + 1.0) for k in range(n)])
    lhs = radial_integrate(measure_spec(swapped), _series_integrand(fact, float(y)), _radial_tol(tol))
    asserted = convention == "product" or params.unit_steps
    return _result(iid, lhs, rhs, tol, asserted, "" if asserted else "gamma convention with non-unit steps")


def harmonic_limit_probe(
    base_params: FWParams, scale_list: Sequence[float], x: float, tol: float = TOL_SERIES
) -> list[IdentityResult]:
    """Deviation of ``Psi`` (all ``a, b`` scaled by sigma) from the harmonic-limit formula.

    Values are compared in log form; every record is report-only and the
    reason notes whether the deviation decreases monotonically with sigma.
    """
    devs = []
    rows = []
    for sigma in scale_list:
        scaled = FWParams(
            tuple((sigma * a, A) for a, A in base_params.upper),
            tuple((sigma * b, B) for b, B in base_params.lower),
        )
        s = fw_eval_scaled(scaled, x)
        ref = harmonic_limit_reference(scaled, x)
        dev = abs(math.expm1(s.log_abs - ref.log_magnitude))
        devs.append(dev)
        rows.append((sigma, s.log_abs, ref.log_magnitude, dev))
    monotone = all(b <= a + 1e-12 for a, b in zip(devs, devs[1:]))
    lab = _label(base_params)
    return [
        IdentityResult(
            f"harmonic/{lab}/x={x:g}/sigma={sigma:g}",
            complex(lhs),
            complex(rhs),
            dev,
            tol,
            "report_only",
            f"log values; monotone_decrease={str(monotone).lower()}",
        )
        for sigma, lhs, rhs, dev in rows
    ]


# ---------------------------------------------------------------- suites


def _random_params(rng: np.random.Generator, min_delta: float = 0.2) -> FWParams:
    while True:
        p = int(rng.integers(0, 2))
        q = int(rng.integers(1, 3))
        upper = [(float(rng.uniform(0.5, 3.0)), float(rng.uniform(0.5, 1.5))) for _ in range(p)]
        lower = [(float(rng.uniform(0.5, 3.0)), float(rng.uniform(0.5, 1.5))) for _ in range(q)]
        prm = FWParams(upper, lower)
        if prm.delta >= min_delta:
            return prm


def _laplace_task(params, s):
    return [check_laplace(params, s)]


def _moment_task(params):
    return check_moment_identity(params)


def _pointwise_task():
    from scipy.special import k0

    return check_weight_pointwise(
        CANONICAL["C1"], [0.1, 0.5, 1.0, 2.0], lambda x: 2.0 * k0(2.0 * math.sqrt(x)), "bessel"
    ) + check_weight_pointwise(CANONICAL["C0"], [0.1, 0.5, 1.0, 2.0], lambda x: math.exp(-x), "gaussian")


def _kernel_task(params, z1, z2, tol, convention):
    return [check_reproducing_kernel(params, z1, z2, tol, convention)]


def _int1_task(g, fw, lam, tol):
    return [check_int1(g, fw, lam, tol)]


def _int2_task(g, f1, f2, lam, eps, tol, hyp):
    return [check_int2(g, f1, f2, lam, eps, tol, hyp)]


def _kp_task(params, lam, eps, tol, convention):
    return [check_kp_kernel(params, lam, eps, tol, convention)]


def _unit_sum_task(params):
    return [check_unit_argument_sum(params)]


def _diag_task(params, convention, n_max=4):
    """``K * moment(n) / rho(n) = 1`` with numerically integrated moments."""
    ms = measure_spec(params, convention)
    k = unity_constant(params, convention)
    table = log_structure_table(params, convention)(n_max + 1)
    out = []
    asserted = convention == "product" or params.unit_steps
    for n in range(n_max + 1):
        mom = radial_integrate(ms, lambda x, n=n: x**n, 1e-10)
        lhs = k.value * mom / math.exp(table[n])
        out.append(
            _result(f"unity/diagonal/{_label(params)}/{convention}/n={n}", lhs, 1.0, TOL_QUAD, asserted,
                    "" if asserted else "gamma convention with non-unit steps")
        )
    return out


def _husimi_task(params, convention, beta):
    spec = ThermalSpec(beta=beta)
    res = husimi_normalization_residual(params, spec, convention)
    asserted = convention == "product" or params.unit_steps
    return [
        _result(f"unity/husimi_normalization/{_label(params)}/{convention}/beta={beta:.6g}", 1.0 + res, 1.0,
                TOL_QUAD, asserted, "" if asserted else "gamma convention with non-unit steps", residual=res)
    ]


def _harmonic_task(params):
    return harmonic_limit_probe(params, [1e2, 1e3, 1e4], 0.5)


def _discrepancy_task():
    out = []
    lhs = math.exp(log_gamma_shift(1.0, 2.0, 2))
    rhs = math.exp(gamma_shift_product_form(1.0, 2.0, 2))
    out.append(_result("discrepancy/gamma_shift/x=1,y=2,n=2", lhs, rhs, TOL_SERIES, asserted=False,
                       reason="Gamma(x+yn) versus y^n (x/y)_n Gamma(x)"))
    lhs = math.exp(log_gamma_shift(1.7, 1.0, 5))
    rhs = math.exp(gamma_shift_product_form(1.7, 1.0, 5))
    out.append(_result("discrepancy/gamma_shift/x=1.7,y=1,n=5", lhs, rhs, 1e-12))

    p = FWParams([(1, 2)], [])
    red = reduce_to_hypergeometric(p)
    hyp = red.prefactor.value * hypergeometric_pfq(red.reduced_upper, red.reduced_lower, red.argument_scale * 0.1).value
    out.append(IdentityResult("discrepancy/reduction/[1:2|]/z=0.1", complex(math.inf), complex(hyp), math.inf,
                              TOL_SERIES, "report_only", "Fox-Wright side diverges (delta = -2); pFq side converges"))
    for prm, z in ((FWParams([(1, 2)], [(1, 1)]), 0.1), (FWParams([], [(1, 2)]), 0.5)):
        res = fw_reduction_residual(prm, z)
        out.append(_result(f"discrepancy/reduction/{_label(prm)}/z={z:g}", res, 0.0, TOL_SERIES, asserted=False,
                           reason="relative residual of the pFq reduction with non-unit steps", residual=res))
    for prm, z in ((CANONICAL["C3"], 0.7), (FWParams([(1.5, 1)], [(2.5, 1), (0.5, 1)]), 1.3)):
        res = fw_reduction_residual(prm, z)
        out.append(_result(f"discrepancy/reduction/{_label(prm)}/z={z:g}", res, 0.0, TOL_SERIES,
                           reason="unit steps: reduction is exact", residual=res))
    return out


NONUNIT_WEIGHTS = (FWParams([], [(1, 2)]), FWParams([(1, 2)], [(1, 1)]))


def _suite_tasks(name: str, seed: int, cases: int) -> list[tuple]:
    rng = np.random.default_rng(seed)
    C0, C1, C2, C3 = (CANONICAL[k] for k in ("C0", "C1", "C2", "C3"))
    if name == "laplace":
        tasks = [(_laplace_task, (p, s)) for p in CANONICAL.values() for s in (2.0, 3.0, 5.0)]
        for _ in range(cases):
            tasks.append((_laplace_task, (_random_params(rng), float(rng.uniform(2.0, 5.0)))))
        return tasks
    if name == "moments":
        sets = [C0, C1, C2, C3, FWParams([], [(1, 1), (2, 1)]), *NONUNIT_WEIGHTS]
        return [(_moment_task, (p,)) for p in sets] + [(_pointwise_task, ())]
    if name == "kernel":
        r = math.sqrt(0.5)
        return [
            (_kernel_task, (C0, r, r, TOL_QUAD, "gamma")),
            (_kernel_task, (C0, 0.0, 0.0, TOL_QUAD, "gamma")),
            (_kernel_task, (C1, 0.6, 0.6, TOL_SECTION6, "gamma")),
            (_kernel_task, (C2, 0.5, 0.8, TOL_SECTION6, "gamma")),
            (_kernel_task, (C3, 0.7, 0.5, TOL_SECTION6, "gamma")),
            (_kernel_task, (NONUNIT_WEIGHTS[0], 0.6, 0.6, TOL_SECTION6, "gamma")),
            (_kernel_task, (NONUNIT_WEIGHTS[0], 0.6, 0.6, TOL_SECTION6, "product")),
            (_kernel_task, (NONUNIT_WEIGHTS[1], 0.5, 0.5, TOL_SECTION6, "product")),
        ]
    if name == "int1":
        return [
            (_int1_task, (C0, C0, 0.5, TOL_SECTION6)),
            (_int1_task, (C0, C0, 0.0, TOL_SECTION6)),
            (_int1_task, (C1, C1, 0.3, TOL_SECTION6)),
            (_int1_task, (C2, C1, 0.3, TOL_SECTION6)),
            (_int1_task, (C3, C0, 0.5, TOL_SECTION6)),
            (_int1_task, (NONUNIT_WEIGHTS[0], FWParams([], [(1, 1), (1, 1)]), 0.2, TOL_SECTION6)),
        ]
    if name == "int2":
        return [
            (_int2_task, (C0, C0, C0, 0.4, 0.5, TOL_GAUSS, False)),
            (_int2_task, (C0, C0, C0, 0.0, 0.5, TOL_GAUSS, False)),
            (_int2_task, (C1, C0, C0, 0.5, 0.5, TOL_SECTION6, False)),
            (_int2_task, (C2, C1, C0, 0.5, 0.5, TOL_SECTION6, False)),
            (_int2_task, (C3, C0, C0, 0.5, 0.5, TOL_SECTION6, False)),
            (_int2_task, (C1, FWParams([(1, 1)], [(2, 1)]), C1, 0.5, 0.5, TOL_SECTION6, True)),
            (_int2_task, (C3, C3, C0, 0.5, 0.5, TOL_SECTION6, True)),
            (_int2_task, (NONUNIT_WEIGHTS[0], C1, C1, 0.5, 0.5, TOL_SECTION6, False)),
        ]
    if name == "kp-kernel":
        return [
            (_kp_task, (C0, 0.4, 0.5, TOL_GAUSS, "gamma")),
            (_kp_task, (C0, 0.0, 0.5, TOL_GAUSS, "gamma")),
            (_kp_task, (FWParams([(2, 1)], []), 0.5, 0.5, TOL_SECTION6, "gamma")),
            (_kp_task, (FWParams([(2, 1)], [(3, 1)]), 0.5, 0.5, TOL_SECTION6, "gamma")),
            (_kp_task, (FWParams([(1, 2)], [(1, 1)]), 0.4, 0.4, TOL_SECTION6, "gamma")),
            (_kp_task, (FWParams([(1, 2)], [(1, 1)]), 0.4, 0.4, TOL_SECTION6, "product")),
        ]
    if name == "unity":
        tasks = [(_unit_sum_task, (p,)) for p in (*CANONICAL.values(), FWParams([(1, 1)], []))]
        for _ in range(cases):
            tasks.append((_unit_sum_task, (_random_params(rng),)))
        for p in (C0, C1, C3):
            tasks.append((_diag_task, (p, "gamma")))
        tasks.append((_diag_task, (NONUNIT_WEIGHTS[0], "gamma")))
        tasks.append((_diag_task, (NONUNIT_WEIGHTS[0], "product")))
        beta = math.log(2.0)
        for p in (C0, C1, C2, C3):
            tasks.append((_husimi_task, (p, "gamma", beta)))
        tasks.append((_husimi_task, (NONUNIT_WEIGHTS[0], "gamma", beta)))
        tasks.append((_husimi_task, (NONUNIT_WEIGHTS[0], "product", beta)))
        return tasks
    if name == "harmonic":
        bases = (C0, FWParams([(1, 1)], [(1, 1)]), FWParams([(1, 1)], [(1.5, 1)]), C3)
        return [(_harmonic_task, (p,)) for p in bases]
    if name == "discrepancy":
        return [(_discrepancy_task, ())]
    raise KeyError(name)


SUITES = ("laplace", "moments", "kernel", "int1", "int2", "kp-kernel", "unity", "harmonic", "discrepancy", "all")


def _run_task(task) -> list[IdentityResult]:
    fn, args = task
    try:
        return fn(*args)
    except FWCSError as exc:
        name = getattr(fn, "__name__", "task").strip("_")
        return [IdentityResult(f"error/{name}/{args!r}", complex(math.nan), complex(math.nan), math.inf, 0.0,
                               "fail", f"{type(exc).__name__}: {exc}")]


def run_suite(name: str, seed: int = 0, cases: int = 2, workers: int = 1) -> dict:
    """Run a named suite and return the report dictionary.

    Raises :class:`KeyError` for an unknown suite name.
    """
    if name not in SUITES:
        raise KeyError(name)
    names = [s for s in SUITES if s != "all"] if name == "all" else [name]
    tasks = []
    for i, n in enumerate(names):
        # every sub-suite draws from its own stream so "all" matches the parts
        tasks.extend(_suite_tasks(n, seed + 1000 * i if name == "all" else seed, cases))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_task, tasks))
    else:
        chunks = [_run_task(t) for t in tasks]
    results = sorted((r for chunk in chunks for r in chunk), key=lambda r: r.identity_id)
    counts = {k: sum(r.status == k for r in results) for k in ("pass", "fail", "report_only", "skipped")}
    return {
        "suite": name,
        "seed": seed,
        "cases": cases,
        "results": [r.to_dict() for r in results],
        "passed": counts["pass"],
        "failed": counts["fail"],
        "report_only": counts["report_only"],
        "skipped": counts["skipped"],
    }


def report_to_json(report: dict) -> str:
    import json

    return json.dumps(report, indent=2, allow_nan=False) + "\n"
