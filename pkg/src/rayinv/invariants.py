"""Singular values of y-coordinates, their conjugates and minimal polynomials.

Also houses the numerical checks that back the generation argument: the
absolute-value inequalities comparing conjugates, the normal-basis exponent
bound, and the exceptional field Q(sqrt(-3)).
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    ConsistencyError,
    ExponentNotExactError,
    HypothesisError,
    LevelMismatchError,
    UnsupportedLevelError,
    ValidationError,
)
from .forms import CMField, ReducedForm, make_field, reduced_forms, theta_Q
from .numerics import (
    DEFAULT_INTEGRALITY_TOL,
    IntPolynomial,
    PrecisionContext,
    poly_from_roots,
    round_to_integer_poly,
)
from .qseries import IndexPair, delta, g3, j, siegel, weber_branch, weber_h, y_fn
from .reciprocity import GaloisLabel, act_on_index, galois_labels, w_group

_DEFAULT_CTX = PrecisionContext()

INEQUALITY1_THRESHOLD = 0.996
INEQUALITY2_THRESHOLD = 0.614


@dataclass(frozen=True)
class ExponentFamily:
    """Integer exponents m(r) for a finite product of Siegel functions at level N."""

    pairs: tuple[tuple[IndexPair, int], ...]
    level: int

    def __init__(self, pairs, level: int):
        pairs = tuple((r, int(m)) for r, m in pairs)
        for r, _ in pairs:
            if r.level != level:
                raise LevelMismatchError(f"index {r} has level {r.level}, expected {level}")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "level", level)


def quadratic_relation_check(fam: ExponentFamily) -> bool:
    """Kubert-Lang conditions for prod g_r^{m(r)} to lie in F_N."""
    N = fam.level
    s11 = sum(m * r.num1 * r.num1 for r, m in fam.pairs)
    s22 = sum(m * r.num2 * r.num2 for r, m in fam.pairs)
    s12 = sum(m * r.num1 * r.num2 for r, m in fam.pairs)
    total = sum(m for _, m in fam.pairs)
    mod = math.gcd(2, N) * N
    return (
        s11 % mod == 0
        and s22 % mod == 0
        and s12 % N == 0
        and (math.gcd(12, N) * total) % 12 == 0
    )


def exact_exponent_unit(N: int) -> int:
    """12N / gcd(6, N): Siegel powers with this exponent transform exactly."""
    return 12 * N // math.gcd(6, N)


def _check_level(N: int) -> None:
    if N < 3:
        raise UnsupportedLevelError(f"level N must be at least 3, got {N}")


def _check_exponent(N: int, e: int) -> None:
    if e == 0:
        raise ValidationError("exponent must be nonzero")
    unit = exact_exponent_unit(N)
    if e % unit:
        raise ExponentNotExactError(e, unit)


def _check_generation_hypothesis(fld: CMField, N: int) -> None:
    if fld.d_K > -19:
        raise HypothesisError(
            f"d_K = {fld.d_K}: the generation theorem needs d_K <= -19"
        )
    if N < 3:
        raise HypothesisError(f"N = {N}: the generation theorem needs N >= 3")


def base_index(N: int) -> IndexPair:
    return IndexPair(0, 1, N)


def singular_y(fld: CMField, N: int, e: int, ctx: PrecisionContext = _DEFAULT_CTX):
    """y_(0,1/N)(theta_K)^e."""
    _check_level(N)
    if e == 0:
        raise ValidationError("exponent must be nonzero")
    return y_fn(base_index(N), fld.theta_at(ctx), ctx) ** e


@dataclass(frozen=True)
class OrbitReport:
    labels: list
    values: list
    exponent: int
    field: CMField
    level: int


def _label_value(label: GaloisLabel, N: int, e: int, ctx: PrecisionContext):
    M = label.matrix
    top = act_on_index(IndexPair(0, 2, N), M)
    bottom = act_on_index(IndexPair(0, 1, N), M)
    tau = ctx.mp.mpc(label.theta_eval)
    if top.is_integral:
        return ctx.mp.mpc(0)
    return siegel(top, tau, ctx) ** e / siegel(bottom, tau, ctx) ** (4 * e)


def _orbit_chunk(d_K, N, e, digits, guard, indices):
    ctx = PrecisionContext(digits, guard)
    labels = galois_labels(N, make_field(d_K, ctx), ctx)
    out = []
    for i in indices:
        v = _label_value(labels[i], N, e, ctx)
        out.append((v.real._mpf_, v.imag._mpf_))
    return out


def conjugate_orbit(
    fld: CMField, N: int, e: int, ctx: PrecisionContext = _DEFAULT_CTX,
    workers: Optional[int] = None,
) -> OrbitReport:
    """All conjugates of y_(0,1/N)(theta_K)^e over K, one per Galois label.

    ``e`` must be a multiple of 12N/gcd(6,N) so that every conjugate is an
    exact Siegel-power quotient.  With ``workers > 1`` the labels are split
    across processes.
    """
    _check_level(N)
    _check_exponent(N, e)
    labels = galois_labels(N, fld, ctx)
    if workers and workers > 1 and len(labels) > 1:
        chunks = [list(range(k, len(labels), workers)) for k in range(workers)]
        chunks = [c for c in chunks if c]
        values = [None] * len(labels)
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            futures = [
                pool.submit(_orbit_chunk, fld.d_K, N, e, ctx.decimal_digits, ctx.guard_digits, c)
                for c in chunks
            ]
            for chunk, fut in zip(chunks, futures):
                for i, raw in zip(chunk, fut.result()):
                    values[i] = ctx.mp.make_mpc(raw)
    else:
        values = [_label_value(lab, N, e, ctx) for lab in labels]
    return OrbitReport(labels, values, e, fld, N)


def _is_prime_power(n: int) -> bool:
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
        p += 1
    return n > 1


def integrality_scale(N: int, e: int) -> int:
    """Factor N^(4e) making the prime-power-level invariant integral, else 1."""
    return N ** (4 * e) if _is_prime_power(N) else 1


def orbit_polynomial(report: OrbitReport, ctx: PrecisionContext = _DEFAULT_CTX,
                     scale: int = 1) -> list:
    """Complex coefficients of prod(X - scale * value) over the orbit."""
    roots = [scale * v for v in report.values] if scale != 1 else report.values
    return poly_from_roots(roots, ctx)


def min_poly_invariant(
    fld: CMField, N: int, e: int, ctx: PrecisionContext = _DEFAULT_CTX, *,
    tol=DEFAULT_INTEGRALITY_TOL, normalize: bool = False, workers: Optional[int] = None,
) -> IntPolynomial:
    """Minimal polynomial over K of y_(0,1/N)(theta_K)^e.

    With ``normalize`` and N a prime power the roots are first multiplied by
    N^(4e), which is what makes them algebraic integers at such levels.
    """
    _check_generation_hypothesis(fld, N)
    report = conjugate_orbit(fld, N, e, ctx, workers=workers)
    scale = integrality_scale(N, e) if normalize else 1
    return round_to_integer_poly(orbit_polynomial(report, ctx, scale), tol)


def field_degree(fld: CMField, N: int) -> int:
    """[K_(N) : K] = |W/{+-1}| * h(d_K)."""
    return len(w_group(N, fld)) * len(reduced_forms(fld.d_K))


@dataclass(frozen=True)
class InequalityReport:
    max_ratio: float
    threshold: float
    witnesses: list = field(repr=False)
    passed: bool

    @property
    def worst(self):
        return max(self.witnesses, key=lambda w: w[2]) if self.witnesses else None


def _sweep_pairs(N: int):
    for s in range(N // 2 + 1):
        for t in range(N):
            if s == 0 and t == 0:
                continue
            yield s, t


def _ratio_report(items, reference, threshold, ctx) -> InequalityReport:
    witnesses = []
    for (s, t), Q, tau in items:
        ratio = abs(y_fn(IndexPair(s, t, Q[1]), tau, ctx)) / reference
        witnesses.append(((s, t), Q[0], float(ratio)))
    max_ratio = max((w[2] for w in witnesses), default=0.0)
    return InequalityReport(max_ratio, threshold, witnesses, max_ratio < threshold)


def verify_inequality1(fld: CMField, N: int, ctx: PrecisionContext = _DEFAULT_CTX) -> InequalityReport:
    """Conjugates at non-principal forms are smaller than 0.996 times the base value.

    Compares |y_(s/N,t/N)(theta_Q)| for every reduced Q with a >= 2 against
    |y_(0,1/N)(theta_K)|.
    """
    if fld.d_K > -20:
        raise HypothesisError(f"d_K = {fld.d_K}: this inequality needs d_K <= -20")
    _check_level(N)
    reference = abs(y_fn(base_index(N), fld.theta_at(ctx), ctx))
    items = []
    for Q in reduced_forms(fld.d_K):
        if Q.a < 2:
            continue
        tau = theta_Q(Q, ctx)
        items.extend(((s, t), (Q, N), tau) for s, t in _sweep_pairs(N))
    return _ratio_report(items, reference, INEQUALITY1_THRESHOLD, ctx)


def verify_inequality2(fld: CMField, N: int, ctx: PrecisionContext = _DEFAULT_CTX) -> InequalityReport:
    """At theta_K, every index other than (0, +-1/N) gives a smaller |y| (factor 0.614)."""
    if fld.d_K > -11:
        raise HypothesisError(f"d_K = {fld.d_K}: this inequality needs d_K <= -11")
    _check_level(N)
    tau = fld.theta_at(ctx)
    reference = abs(y_fn(base_index(N), tau, ctx))
    items = [
        ((s, t), (None, N), tau)
        for s, t in _sweep_pairs(N)
        if not (s == 0 and t in (1, N - 1))
    ]
    return _ratio_report(items, reference, INEQUALITY2_THRESHOLD, ctx)


def normal_basis_bound(degree: int, N: int) -> Fraction | float:
    return (math.gcd(4, N) / 4) * math.log(degree) / math.log(1 / INEQUALITY1_THRESHOLD)


def normal_basis_exponent(fld: CMField, N: int) -> int:
    """Smallest s >= 1 with s >= (gcd(4,N)/4) log_{1/0.996} [K_(N):K]."""
    _check_generation_hypothesis(fld, N)
    return exponent_for_degree(field_degree(fld, N), N)


def exponent_for_degree(degree: int, N: int) -> int:
    if degree < 1:
        raise ValueError("degree must be positive")
    return max(1, math.ceil(normal_basis_bound(degree, N)))


@dataclass(frozen=True)
class ExceptionalReport:
    """Outcome of the Q(sqrt(-3)) identity +-(1/3 sqrt(-3)) y^2 = 4h + 1/27."""

    level: int
    value: object
    sign: int
    residual: object
    other_residual: object
    g3_squared_over_delta: object
    j_value: object
    branch: str


def exceptional_invariant(N: int, ctx: PrecisionContext = _DEFAULT_CTX) -> ExceptionalReport:
    """y_(0,1/N)^2 at theta = (-1 + sqrt(-3))/2 with the Weber-function identity checked."""
    if N < 2:
        raise UnsupportedLevelError(f"level N must be at least 2, got {N}")
    mp = ctx.mp
    fld = make_field(-3, ctx)
    tau = fld.theta
    r = base_index(N)
    y2 = y_fn(r, tau, ctx) ** 2
    h = weber_h(r, tau, ctx)
    rhs = 4 * h + mp.mpf(1) / 27
    c = 1 / (3 * mp.sqrt(mp.mpc(-3)))
    scale = max(abs(c * y2), abs(rhs), mp.mpf(1))
    res_plus = abs(c * y2 - rhs) / scale
    res_minus = abs(-c * y2 - rhs) / scale
    tol = ctx.tolerance * mp.mpf(10) ** 10
    plus_ok, minus_ok = res_plus < tol, res_minus < tol
    if not plus_ok and not minus_ok:
        raise ConsistencyError(
            f"N = {N}: neither sign closes the identity "
            f"(residuals {mp.nstr(res_plus, 5)}, {mp.nstr(res_minus, 5)})"
        )
    if plus_ok and minus_ok:
        sign, res, other = 0, res_plus, res_minus
    elif plus_ok:
        sign, res, other = 1, res_plus, res_minus
    else:
        sign, res, other = -1, res_minus, res_plus
    return ExceptionalReport(
        level=N,
        value=y2,
        sign=sign,
        residual=res,
        other_residual=other,
        g3_squared_over_delta=g3(tau, ctx) ** 2 / delta(tau, ctx),
        j_value=j(tau, ctx),
        branch=weber_branch(tau, ctx),
    )
