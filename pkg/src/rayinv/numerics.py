"""Precision contexts, exact root-of-unity phases and integer polynomials.

Every numerical value in the package is an ``mpc``/``mpf`` belonging to the
private mpmath context held by a :class:`PrecisionContext`.  Contexts are
cached per working precision and never mutated after creation, so values from
different contexts can be computed concurrently.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .errors import ConfigurationError, IntegralityError

MIN_DIGITS = 50
DEFAULT_DIGITS = 256
DEFAULT_GUARD = 20
DEFAULT_INTEGRALITY_TOL = Fraction(1, 10**30)


@functools.lru_cache(maxsize=None)
def _mp_context(dps: int) -> mpmath.MPContext:
    ctx = mpmath.MPContext()
    ctx.dps = dps
    return ctx


@dataclass(frozen=True)
class PrecisionContext:
    decimal_digits: int = DEFAULT_DIGITS
    guard_digits: int = DEFAULT_GUARD

    def __post_init__(self):
        if self.decimal_digits < MIN_DIGITS:
            raise ConfigurationError(
                f"precision must be at least {MIN_DIGITS} digits, got {self.decimal_digits}"
            )
        if self.guard_digits < 1:
            raise ConfigurationError("guard_digits must be positive")

    @property
    def working_digits(self) -> int:
        return self.decimal_digits + self.guard_digits

    @property
    def mp(self) -> mpmath.MPContext:
        """The mpmath context all arithmetic under this precision runs in."""
        return _mp_context(self.working_digits)

    @property
    def tolerance(self):
        return self.mp.mpf(10) ** (self.guard_digits - self.decimal_digits)

    @property
    def truncation(self):
        """Series and products stop once a term drops below this magnitude."""
        return self.mp.mpf(10) ** (-self.working_digits)

    def mpc(self, re, im=0):
        return self.mp.mpc(re, im)


def with_precision(digits: int, guard: int = DEFAULT_GUARD) -> PrecisionContext:
    return PrecisionContext(int(digits), int(guard))


@dataclass(frozen=True)
class Phase:
    """The root of unity exp(2*pi*i*t) with t an exact rational in [0, 1)."""

    t: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "t", Fraction(self.t) % 1)

    def __add__(self, other: "Phase") -> "Phase":
        return Phase(self.t + other.t)

    def __neg__(self) -> "Phase":
        return Phase(-self.t)

    def __mul__(self, k: int) -> "Phase":
        return Phase(self.t * k)

    __rmul__ = __mul__

    @property
    def is_trivial(self) -> bool:
        return self.t == 0

    def value(self, ctx: PrecisionContext):
        mp = ctx.mp
        if self.t == 0:
            return mp.mpc(1)
        # exact for the common quarter turns
        if self.t == Fraction(1, 2):
            return mp.mpc(-1)
        if self.t == Fraction(1, 4):
            return mp.mpc(0, 1)
        if self.t == Fraction(3, 4):
            return mp.mpc(0, -1)
        return mp.expjpi(2 * mp.mpf(self.t.numerator) / self.t.denominator)


@dataclass(frozen=True)
class IntPolynomial:
    """Dense univariate polynomial with integer coefficients, ascending degree."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        cs = [int(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0] == 0:
            return -1
        return len(self.coeffs) - 1

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_text(self, var: str = "X") -> str:
        """Single-line rendering such as ``X^2 - 3*X + 1``."""
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0 and self.degree >= 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            if not terms:
                terms.append(("-" if c < 0 else "") + body)
            else:
                terms.append(("- " if c < 0 else "+ ") + body)
        return " ".join(terms) if terms else "0"

    def __str__(self) -> str:
        return self.to_text()


def poly_from_roots(roots: Sequence, ctx: PrecisionContext) -> list:
    """Coefficients (ascending) of prod(X - root), leading coefficient 1."""
    if len(roots) == 0:
        raise ValueError("poly_from_roots needs at least one root")
    mp = ctx.mp
    coeffs = [mp.mpc(1)]
    for r in roots:
        r = mp.mpc(r)
        nxt = [mp.mpc(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= r * c
        coeffs = nxt
    return coeffs


def _context_of(values):
    for v in values:
        ctx = getattr(v, "context", None)
        if isinstance(ctx, mpmath.MPContext):
            return ctx
    return _mp_context(DEFAULT_DIGITS + DEFAULT_GUARD)


def _as_mpf(mp, x):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def round_to_integer_poly(coeffs: Sequence, tol=DEFAULT_INTEGRALITY_TOL) -> IntPolynomial:
    """Round complex coefficients to integers, refusing anything not within ``tol``.

    Raises :class:`IntegralityError` naming the first offending degree.
    """
    mp = _context_of(coeffs)
    tol = _as_mpf(mp, tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    out = []
    for k, c in enumerate(coeffs):
        c = mp.mpc(c)
        n = int(mp.nint(c.real))
        resid = abs(c.real - n)
        if abs(c.imag) >= tol or resid >= tol:
            raise IntegralityError(k, mp.nstr(resid, 5), mp.nstr(abs(c.imag), 5))
        out.append(n)
    return IntPolynomial(out)


def integrality_residuals(coeffs: Sequence) -> list:
    """Per-coefficient ``(|imag|, distance to nearest integer)``."""
    mp = _context_of(coeffs)
    out = []
    for c in coeffs:
        c = mp.mpc(c)
        out.append((abs(c.imag), abs(c.real - mp.nint(c.real))))
    return out
