"""Exact integer, rational and integer-matrix primitives.

Everything here is arbitrary precision and float-free.  Rationals are
``fractions.Fraction`` (always normalized, positive denominator), which is
exactly the representation the rest of the package relies on.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor, gcd, isqrt
from typing import Iterable, Sequence


class NotInvertible(ValueError):
    """gcd(a, n) != 1, so a has no inverse modulo n."""


class NotASquare(ValueError):
    """The integer is not a perfect square."""


def mod_inv(a: int, n: int) -> int:
    """Inverse of a modulo n, in [1, n)."""
    if n <= 1:
        raise ValueError(f"modulus must exceed 1, got {n}")
    try:
        return pow(a, -1, n)
    except ValueError:
        raise NotInvertible(f"{a} is not invertible modulo {n}") from None


def round_nearest(x: Fraction | int) -> int:
    """Nearest integer to x; exact halves round toward +infinity."""
    return floor(Fraction(x) + Fraction(1, 2))


def exact_sqrt(n: int) -> int:
    """Integer square root of a perfect square."""
    if n < 0:
        raise NotASquare(f"{n} is negative")
    s = isqrt(n)
    if s * s != n:
        raise NotASquare(f"{n} is not a perfect square")
    return s


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Miller-Rabin, deterministic for n < 3.3 * 10**24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    n += 1
    while not is_prime(n):
        n += 1
    return n


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (desk scale only)."""
    if n <= 0:
        raise ValueError("can only factor positive integers")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def largest_prime_factor(n: int) -> int:
    return max(factorize(n))


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a modulo an odd prime p, or None. Tonelli-Shanks."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p-1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t * t % p, 1
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


class IntMatrix:
    """Immutable rectangular integer matrix; rows are lattice vectors."""

    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[Sequence[int]]):
        rws = tuple(tuple(int(e) for e in row) for row in rows)
        if not rws or not rws[0]:
            raise ValueError("matrix must be nonempty")
        width = len(rws[0])
        if any(len(r) != width for r in rws):
            raise ValueError("matrix rows must all have the same length")
        object.__setattr__(self, "_rows", rws)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return len(self._rows[0])

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def __iter__(self):
        return iter(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        return f"IntMatrix({list(map(list, self._rows))})"


def matrix_det(m: IntMatrix) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    if not m.is_square:
        raise ValueError("determinant requires a square matrix")
    n = m.nrows
    a = [list(row) for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # all divisions below are exact
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    if len(u) != len(v):
        raise ValueError("dot product needs equal lengths")
    return sum(a * b for a, b in zip(u, v))


def vec_gcd(v: Sequence[int]) -> int:
    g = 0
    for e in v:
        g = gcd(g, e)
    return g
