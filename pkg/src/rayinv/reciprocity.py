"""Explicit Shimura reciprocity: W_{N,theta}, Stevenhagen's u_Q and Galois labels.

Matrices act on index pairs from the right, ``(r1, r2) -> (r1, r2) M``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import LevelMismatchError, UnsupportedFieldError, UnsupportedLevelError
from .forms import CMField, ReducedForm, reduced_forms, theta_Q, unit_form
from .numerics import PrecisionContext
from .qseries import IndexPair

_DEFAULT_CTX = PrecisionContext()


@dataclass(frozen=True)
class MatModN:
    """2x2 matrix ((a, b), (c, d)) over Z/NZ."""

    a: int
    b: int
    c: int
    d: int
    level: int

    def __post_init__(self):
        n = self.level
        for name in "abcd":
            object.__setattr__(self, name, getattr(self, name) % n)

    @classmethod
    def from_rows(cls, rows, level: int) -> "MatModN":
        (a, b), (c, d) = rows
        return cls(a, b, c, d, level)

    @classmethod
    def identity(cls, level: int) -> "MatModN":
        return cls(1, 0, 0, 1, level)

    @property
    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.level

    def is_invertible(self) -> bool:
        return gcd(self.det, self.level) == 1

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def __neg__(self) -> "MatModN":
        return MatModN(-self.a, -self.b, -self.c, -self.d, self.level)

    def __matmul__(self, other: "MatModN") -> "MatModN":
        if other.level != self.level:
            raise LevelMismatchError(f"levels {self.level} and {other.level} differ")
        return MatModN(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            self.level,
        )

    def __str__(self) -> str:
        return f"({self.a},{self.b};{self.c},{self.d})"


def _check_level(N: int) -> None:
    if N < 3:
        raise UnsupportedLevelError(f"level N must be at least 3, got {N}")


def _check_field(fld: CMField) -> None:
    if fld.d_K in (-3, -4):
        raise UnsupportedFieldError(
            f"d_K = {fld.d_K}: W_(N, theta) does not describe Gal(K_(N)/H) for Q(i) or Q(sqrt(-3))"
        )


def pm_representative(s: int, t: int, N: int) -> tuple[int, int]:
    """Canonical member of {(s, t), (-s, -t)} mod N.

    The first nonzero coordinate is taken in [1, N/2]; when that leaves a
    tie (the coordinate equals N/2) the lexicographically smaller pair wins.
    """
    s, t = s % N, t % N
    ns, nt = (-s) % N, (-t) % N
    lead, nlead = (s, ns) if s else (t, nt)
    if lead == 0:
        return (s, t)
    if 2 * lead < N:
        return (s, t)
    if 2 * lead > N:
        return (ns, nt)
    return min((s, t), (ns, nt))


def w_matrix(s: int, t: int, fld: CMField, N: int) -> MatModN:
    return MatModN(t - fld.B_theta * s, -fld.C_theta * s, s, t, N)


def w_group(N: int, fld: CMField) -> list[MatModN]:
    """W_{N,theta_K} / {+-1}, one representative per class, ordered by (s, t)."""
    _check_level(N)
    _check_field(fld)
    out = []
    for s in range(N):
        for t in range(N):
            if pm_representative(s, t, N) != (s, t):
                continue
            m = w_matrix(s, t, fld, N)
            if m.is_invertible():
                out.append(m)
    return out


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _half(x: int) -> int:
    if x % 2:
        raise ArithmeticError(f"expected an even integer, got {x}")
    return x // 2


def u_p_matrix(Q: ReducedForm, p: int, d_K: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """The local matrix u_p over Z (before reduction mod p^k)."""
    a, b, c = Q.a, Q.b, Q.c
    if d_K % 4 == 0:
        if a % p:
            return ((a, _half(b)), (0, 1))
        if c % p:
            return ((-_half(b), -c), (1, 0))
        return ((-a - _half(b), -_half(b) - c), (1, -1))
    if a % p:
        return ((a, _half(b - 1)), (0, 1))
    if c % p:
        return ((-_half(b + 1), -c), (1, 0))
    return ((-a - _half(b + 1), _half(1 - b) - c), (1, -1))


def u_Q(Q: ReducedForm, N: int, fld: CMField) -> MatModN:
    """Stevenhagen's matrix for Q, glued across the prime powers of N by CRT."""
    if Q.discriminant != fld.d_K:
        raise ValueError(f"form {Q} does not have discriminant {fld.d_K}")
    entries = [0, 0, 0, 0]
    for p, k in _factor(N).items():
        pk = p**k
        cofactor = N // pk
        lift = cofactor * pow(cofactor, -1, pk)
        local = u_p_matrix(Q, p, fld.d_K)
        flat = [local[0][0], local[0][1], local[1][0], local[1][1]]
        for i in range(4):
            entries[i] += flat[i] * lift
    return MatModN(*entries, N)


@dataclass(frozen=True)
class GaloisLabel:
    """(alpha, Q) labelling one element of Gal(K_(N)/K)."""

    alpha: MatModN
    form: ReducedForm
    u: MatModN
    theta_eval: object = field(compare=False, repr=False)

    @property
    def matrix(self) -> MatModN:
        """alpha * u_Q, the matrix acting on indices."""
        return self.alpha @ self.u

    @property
    def st(self) -> tuple[int, int]:
        return (self.alpha.c, self.alpha.d)


def galois_labels(N: int, fld: CMField, ctx: PrecisionContext = _DEFAULT_CTX) -> list[GaloisLabel]:
    """W/{+-1} x C(d_K); the first label is (identity, unit form)."""
    ws = w_group(N, fld)
    forms = reduced_forms(fld.d_K)
    assert forms[0] == unit_form(fld.d_K)
    labels = []
    for Q in forms:
        u = u_Q(Q, N, fld)
        th = theta_Q(Q, ctx)
        for alpha in ws:
            labels.append(GaloisLabel(alpha, Q, u, th))
    return labels


def act_on_index(r: IndexPair, M: MatModN) -> IndexPair:
    """(r1, r2) M reduced to the canonical representative."""
    if r.level != M.level:
        raise LevelMismatchError(f"index level {r.level} differs from matrix level {M.level}")
    x, y = r.num1, r.num2
    return IndexPair(x * M.a + y * M.c, x * M.b + y * M.d, M.level).canonical()
