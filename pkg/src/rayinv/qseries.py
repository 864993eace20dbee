"""Modular forms and functions evaluated through their q-expansions.

All evaluations use products or Lambert/divisor-sum series in ``q = e^{2 pi i tau}``
and ``q_z = e^{2 pi i z}``; fractional powers ``q^x`` always mean
``e^{2 pi i tau x}``.  Series are cut once the geometric tail drops below
``ctx.truncation``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import DomainError
from .numerics import PrecisionContext, Phase

_DEFAULT_CTX = PrecisionContext()


@dataclass(frozen=True)
class IndexPair:
    """The rational pair ``(num1/level, num2/level)`` indexing Siegel functions."""

    num1: int
    num2: int
    level: int

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be positive")

    @property
    def r1(self) -> Fraction:
        return Fraction(self.num1, self.level)

    @property
    def r2(self) -> Fraction:
        return Fraction(self.num2, self.level)

    @property
    def is_integral(self) -> bool:
        return self.num1 % self.level == 0 and self.num2 % self.level == 0

    @property
    def is_canonical(self) -> bool:
        return 0 <= self.num1 < self.level and 0 <= self.num2 < self.level

    def canonical(self) -> "IndexPair":
        return IndexPair(self.num1 % self.level, self.num2 % self.level, self.level)

    def scaled(self, k: int) -> "IndexPair":
        return IndexPair(k * self.num1, k * self.num2, self.level)

    def __neg__(self) -> "IndexPair":
        return IndexPair(-self.num1, -self.num2, self.level)

    def __str__(self) -> str:
        return f"({self.r1}, {self.r2})"


def _point(tau, ctx: PrecisionContext):
    tau = ctx.mp.mpc(tau)
    if tau.imag <= 0:
        raise DomainError(f"tau must lie in the upper half-plane, got Im(tau) = {tau.imag}")
    return tau


def _nterms(tau, ctx: PrecisionContext, offset: float = 0.0) -> int:
    """Smallest M with |q|^(M - offset) below the truncation bound."""
    decay = 2 * math.pi * float(tau.imag)
    return max(1, math.ceil(ctx.working_digits * math.log(10) / decay + offset))


def _qpow(tau, x, ctx: PrecisionContext):
    """q^x = exp(2 pi i tau x) for rational or real x."""
    mp = ctx.mp
    if isinstance(x, Fraction):
        x = mp.mpf(x.numerator) / x.denominator
    return mp.expjpi(2 * tau * x)


def _euler_product(tau, ctx: PrecisionContext):
    """prod_{n>=1} (1 - q^n)."""
    mp = ctx.mp
    q = mp.expjpi(2 * tau)
    acc = mp.mpc(1)
    qn = q
    for _ in range(_nterms(tau, ctx)):
        acc *= 1 - qn
        qn *= q
    return acc


@functools.lru_cache(maxsize=64)
def _divisor_sigma_table(k: int, upto: int) -> tuple[int, ...]:
    sig = [0] * (upto + 1)
    for d in range(1, upto + 1):
        dk = d**k
        for m in range(d, upto + 1, d):
            sig[m] += dk
    return tuple(sig)


def _divisor_series(tau, k: int, ctx: PrecisionContext):
    """sum_{n>=1} sigma_k(n) q^n."""
    mp = ctx.mp
    q = mp.expjpi(2 * tau)
    m = _nterms(tau, ctx)
    sig = _divisor_sigma_table(k, m)
    acc = mp.mpc(0)
    qn = q
    for n in range(1, m + 1):
        acc += sig[n] * qn
        qn *= q
    return acc


def eta(tau, ctx: PrecisionContext = _DEFAULT_CTX):
    """Dedekind eta: sqrt(2 pi) * zeta_8 * q^(1/24) * prod(1 - q^n)."""
    tau = _point(tau, ctx)
    mp = ctx.mp
    pref = mp.sqrt(2 * mp.pi) * Phase(Fraction(1, 8)).value(ctx)
    return pref * _qpow(tau, Fraction(1, 24), ctx) * _euler_product(tau, ctx)


def g2(tau, ctx: PrecisionContext = _DEFAULT_CTX):
    tau = _point(tau, ctx)
    mp = ctx.mp
    return (2 * mp.pi) ** 4 / 12 * (1 + 240 * _divisor_series(tau, 3, ctx))


def g3(tau, ctx: PrecisionContext = _DEFAULT_CTX):
    tau = _point(tau, ctx)
    mp = ctx.mp
    return (2 * mp.pi) ** 6 / 216 * (1 - 504 * _divisor_series(tau, 5, ctx))


def delta(tau, ctx: PrecisionContext = _DEFAULT_CTX):
    """Discriminant (2 pi i)^12 q prod(1 - q^n)^24."""
    tau = _point(tau, ctx)
    mp = ctx.mp
    return (2 * mp.pi) ** 12 * mp.expjpi(2 * tau) * _euler_product(tau, ctx) ** 24


def j(tau, ctx: PrecisionContext = _DEFAULT_CTX):
    tau = _point(tau, ctx)
    return 1728 * g2(tau, ctx) ** 3 / delta(tau, ctx)


def _require_nonzero(r: IndexPair, what: str):
    if r.is_integral:
        raise DomainError(f"{what} is undefined at the integral index {r}")


def wp(r: IndexPair, tau, ctx: PrecisionContext = _DEFAULT_CTX):
    """Weierstrass p at z = r1*tau + r2 on the lattice [tau, 1].

    The double series over (m, n) is summed in n in closed form,
    sum_n n x^n = x / (1 - x)^2, leaving a single sum over m.
    """
    _require_nonzero(r, "wp")
    tau = _point(tau, ctx)
    mp = ctx.mp
    c = r.canonical()
    r1 = mp.mpf(c.num1) / c.level
    r2 = mp.mpf(c.num2) / c.level
    q = mp.expjpi(2 * tau)
    w = mp.expjpi(2 * (r1 * tau + r2))
    winv = 1 / w
    acc = mp.mpf(1) / 12 + w / (1 - w) ** 2
    qm = q
    for _ in range(_nterms(tau, ctx, offset=1)):
        a = qm * w
        b = qm * winv
        acc += a / (1 - a) ** 2 + b / (1 - b) ** 2 - 2 * qm / (1 - qm) ** 2
        qm *= q
    return -4 * mp.pi**2 * acc


def fricke(r: IndexPair, tau, ctx: PrecisionContext = _DEFAULT_CTX):
    """Fricke function -(2^7 3^5 g2 g3 / Delta) * wp."""
    tau = _point(tau, ctx)
    return -(2**7 * 3**5) * g2(tau, ctx) * g3(tau, ctx) / delta(tau, ctx) * wp(r, tau, ctx)


def _epsilon(c: IndexPair, s1: int, s2: int) -> tuple[int, Phase]:
    """Sign and phase of g_{c+s} / g_c for an integral shift s."""
    sign = -1 if (s1 * s2 + s1 + s2) % 2 else 1
    phase = Phase(-Fraction(s1 * c.num2 - s2 * c.num1, 2 * c.level))
    return sign, phase


def reduce_index(r: IndexPair) -> tuple[IndexPair, Phase, int]:
    """Canonical representative of ``r`` and the exact factor relating them.

    Returns ``(canon, phase, sign)`` with
    ``g_r = sign * exp(2 pi i phase.t) * g_canon``.
    """
    _require_nonzero(r, "Siegel function")
    canon = r.canonical()
    s1 = (r.num1 - canon.num1) // r.level
    s2 = (r.num2 - canon.num2) // r.level
    sign, phase = _epsilon(canon, s1, s2)
    return canon, phase, sign


def _siegel_product(r1: Fraction, r2: Fraction, tau, ctx: PrecisionContext):
    """Infinite product for g_(r1, r2); valid for -1 < r1 < 1."""
    mp = ctx.mp
    b2 = r1 * r1 - r1 + Fraction(1, 6)
    pref = -_qpow(tau, b2 / 2, ctx) * Phase(r2 * (r1 - 1) / 2).value(ctx)
    q = mp.expjpi(2 * tau)
    z = tau * (mp.mpf(r1.numerator) / r1.denominator) + mp.mpf(r2.numerator) / r2.denominator
    qz = mp.expjpi(2 * z)
    qzinv = 1 / qz
    acc = 1 - qz
    qn = q
    for _ in range(_nterms(tau, ctx, offset=float(abs(r1)))):
        acc *= (1 - qn * qz) * (1 - qn * qzinv)
        qn *= q
    return pref * acc


def siegel(r: IndexPair, tau, ctx: PrecisionContext = _DEFAULT_CTX):
    tau = _point(tau, ctx)
    canon, phase, sign = reduce_index(r)
    val = _siegel_product(canon.r1, canon.r2, tau, ctx)
    if not phase.is_trivial:
        val *= phase.value(ctx)
    return -val if sign < 0 else val


def klein(r: IndexPair, tau, ctx: PrecisionContext = _DEFAULT_CTX):
    tau = _point(tau, ctx)
    return siegel(r, tau, ctx) / eta(tau, ctx) ** 2


def siegel_order(r: IndexPair) -> Fraction:
    """Order in q of g_r: B2(<r1>)/2 with B2(x) = x^2 - x + 1/6."""
    _require_nonzero(r, "Siegel function")
    x = r.r1 % 1
    return (x * x - x + Fraction(1, 6)) / 2


def y_fn(r: IndexPair, tau, ctx: PrecisionContext = _DEFAULT_CTX):
    """y_r = g_{2r} / g_r^4; identically zero when 2r is integral."""
    _require_nonzero(r, "y-coordinate")
    tau = _point(tau, ctx)
    if r.scaled(2).is_integral:
        return ctx.mp.mpc(0)
    return siegel(r.scaled(2), tau, ctx) / siegel(r, tau, ctx) ** 4


def weber_h(r: IndexPair, tau, ctx: PrecisionContext = _DEFAULT_CTX):
    """Weber function of the point wp(r1 tau + r2), branch chosen by j(tau)."""
    tau = _point(tau, ctx)
    mp = ctx.mp
    jv = j(tau, ctx)
    near = mp.mpf(10) ** (-(ctx.decimal_digits // 2))
    p = wp(r, tau, ctx)
    if abs(jv) < near:
        return g3(tau, ctx) / delta(tau, ctx) * p**3
    if abs(jv - 1728) < near:
        return g2(tau, ctx) ** 2 / delta(tau, ctx) * p**2
    return g2(tau, ctx) * g3(tau, ctx) / delta(tau, ctx) * p


def weber_branch(tau, ctx: PrecisionContext = _DEFAULT_CTX) -> str:
    """Which branch weber_h uses at tau: 'generic', 'j1728' or 'j0'."""
    tau = _point(tau, ctx)
    jv = j(tau, ctx)
    near = ctx.mp.mpf(10) ** (-(ctx.decimal_digits // 2))
    if abs(jv) < near:
        return "j0"
    if abs(jv - 1728) < near:
        return "j1728"
    return "generic"


def fourier_coefficients(
    func: Callable, count: int, ctx: PrecisionContext = _DEFAULT_CTX, *,
    start: int = 0, im_tau: float = 1.0, samples: int = 128,
) -> list:
    """Numerically extract c_start, ..., c_{start+count-1} of func = sum c_n q^n.

    Uses a discrete Fourier transform over ``samples`` points on the
    horizontal line Im(tau) = im_tau; aliasing is of order |q|^samples.
    """
    if samples <= count:
        raise ValueError("samples must exceed the number of coefficients")
    mp = ctx.mp
    y = mp.mpf(im_tau)
    vals = []
    for k in range(samples):
        tau = mp.mpc(mp.mpf(k) / samples, y)
        vals.append((tau, func(tau, ctx)))
    out = []
    for n in range(start, start + count):
        acc = mp.mpc(0)
        for tau, v in vals:
            acc += v * mp.expjpi(-2 * n * tau)
        out.append(acc / samples)
    return out
