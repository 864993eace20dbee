"""Imaginary quadratic fields, CM points and reduced binary quadratic forms."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from .errors import ValidationError
from .numerics import PrecisionContext

_DEFAULT_CTX = PrecisionContext()


def _squarefree(n: int) -> bool:
    n = abs(n)
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def is_fundamental_discriminant(d: int) -> bool:
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _check_discriminant(d: int) -> None:
    if d >= 0:
        raise ValidationError(f"discriminant must be negative, got {d}")
    if not is_fundamental_discriminant(d):
        raise ValidationError(f"{d} is not a fundamental discriminant")


@dataclass(frozen=True)
class CMField:
    """Q(sqrt(d_K)) with its generator theta_K of the ring of integers.

    ``theta`` is the root of X^2 + B_theta X + C_theta in the upper half-plane.
    """

    d_K: int
    theta: object
    B_theta: int
    C_theta: int

    def theta_at(self, ctx: PrecisionContext):
        """theta_K recomputed at another precision."""
        mp = ctx.mp
        root = mp.sqrt(mp.mpc(self.d_K))
        return root / 2 if self.B_theta == 0 else (root - 1) / 2


def make_field(d_K: int, ctx: PrecisionContext = _DEFAULT_CTX) -> CMField:
    _check_discriminant(d_K)
    mp = ctx.mp
    root = mp.sqrt(mp.mpc(d_K))
    if d_K % 4 == 0:
        return CMField(d_K, root / 2, 0, -d_K // 4)
    return CMField(d_K, (root - 1) / 2, 1, (1 - d_K) // 4)


@dataclass(frozen=True, order=True)
class ReducedForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        return (-a < b <= a < c) or (0 <= b <= a == c)

    def as_list(self) -> list[int]:
        return [self.a, self.b, self.c]

    def __str__(self) -> str:
        return f"[{self.a},{self.b},{self.c}]"


def reduced_forms(d_K: int) -> list[ReducedForm]:
    """All reduced primitive positive definite forms of discriminant d_K, by (a, b)."""
    _check_discriminant(d_K)
    out = []
    a = 1
    while 3 * a * a <= -d_K:
        for b in range(-a + 1, a + 1):
            if (b - d_K) % 2:
                continue
            num = b * b - d_K
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            out.append(ReducedForm(a, b, c))
        a += 1
    return out


def class_number(d_K: int) -> int:
    return len(reduced_forms(d_K))


def theta_Q(Q: ReducedForm, ctx: PrecisionContext = _DEFAULT_CTX):
    """CM point (-b + sqrt(d_K)) / 2a."""
    mp = ctx.mp
    return (-Q.b + mp.sqrt(mp.mpc(Q.discriminant))) / (2 * Q.a)


def unit_form(d_K: int) -> ReducedForm:
    _check_discriminant(d_K)
    if d_K % 4 == 0:
        return ReducedForm(1, 0, -d_K // 4)
    return ReducedForm(1, 1, (1 - d_K) // 4)


def a_bound(d_K: int) -> int:
    """floor(sqrt(-d_K / 3)), the largest leading coefficient a reduced form can have."""
    return isqrt(-d_K // 3)
