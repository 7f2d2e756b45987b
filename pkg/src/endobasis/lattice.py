"""Exact lattice algebra for scalar-decomposition lattices.

The lattice of interest is the kernel of the map sending an integer vector
(z_1, ..., z_r) to z_1 + z_2*lam_2 + ... + z_r*lam_r mod N.  Everything here
works on exact integers and rationals; there is no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import IntMatrix, dot, matrix_det, round_nearest, vec_gcd


class DimensionMismatch(ValueError):
    """Vector or coefficient length does not match the problem dimension."""


class RankDeficient(ValueError):
    """The basis matrix does not have full rank."""


class NoSuperlattice(ValueError):
    """No index-ell superlattice exists inside the decomposition lattice."""


@dataclass(frozen=True)
class DecompositionProblem:
    """Subgroup order N and the eigenvalues lam_2..lam_r (lam_1 = 1)."""

    modulus: int
    eigenvalues: tuple[int, ...] = ()

    def __post_init__(self):
        if self.modulus <= 1:
            raise ValueError(f"modulus must exceed 1, got {self.modulus}")
        norm = tuple(int(e) % self.modulus for e in self.eigenvalues)
        object.__setattr__(self, "eigenvalues", norm)

    @property
    def r(self) -> int:
        return len(self.eigenvalues) + 1


@dataclass(frozen=True)
class Decomposition:
    """Coefficients (a_1, ..., a_r) with a_1 + sum a_i lam_i = m mod N."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(a) for a in self.coefficients))

    def max_bits(self) -> int:
        return max(abs(a) for a in self.coefficients).bit_length()


@dataclass(frozen=True)
class Basis:
    """Square integer matrix whose rows are lattice vectors."""

    rows: IntMatrix
    scheme: str = "custom"

    def __post_init__(self):
        if not isinstance(self.rows, IntMatrix):
            object.__setattr__(self, "rows", IntMatrix(self.rows))
        if not self.rows.is_square:
            raise ValueError("a basis must be square")

    @property
    def r(self) -> int:
        return self.rows.nrows

    def row(self, i: int) -> tuple[int, ...]:
        return self.rows[i]

    def __iter__(self):
        return iter(self.rows)


def membership(v: Sequence[int], prob: DecompositionProblem) -> bool:
    """Does v_1 + sum_{i>=2} v_i * lam_i vanish mod N?"""
    if len(v) != prob.r:
        raise DimensionMismatch(f"vector length {len(v)}, expected {prob.r}")
    acc = v[0] + sum(vi * li for vi, li in zip(v[1:], prob.eigenvalues))
    return acc % prob.modulus == 0


def basis_det(b: Basis) -> int:
    return matrix_det(b.rows)


def norm_bits(b: Basis | IntMatrix | Sequence[Sequence[int]]) -> int:
    """Bitlength of the largest absolute entry (0 for an all-zero matrix)."""
    rows = b.rows if isinstance(b, Basis) else b
    return max(abs(e) for row in rows for e in row).bit_length()


def hnf(b: Basis) -> Basis:
    """Row-style Hermite normal form.

    Upper triangular with positive diagonal; every entry above a pivot is
    reduced into [0, pivot).  Two bases generate the same lattice exactly
    when their normal forms are equal.
    """
    rows = [list(r) for r in b.rows]
    n, m = len(rows), len(rows[0])
    pr = 0
    for col in range(m):
        while True:
            nz = [i for i in range(pr, n) if rows[i][col] != 0]
            if len(nz) <= 1:
                break
            imin = min(nz, key=lambda i: abs(rows[i][col]))
            for i in nz:
                if i == imin:
                    continue
                f = rows[i][col] // rows[imin][col]
                rows[i] = [a - f * p for a, p in zip(rows[i], rows[imin])]
        if not nz:
            continue
        rows[pr], rows[nz[0]] = rows[nz[0]], rows[pr]
        if rows[pr][col] < 0:
            rows[pr] = [-a for a in rows[pr]]
        pivot = rows[pr][col]
        for i in range(pr):
            f = rows[i][col] // pivot
            if f:
                rows[i] = [a - f * p for a, p in zip(rows[i], rows[pr])]
        pr += 1
    if pr < n:
        raise RankDeficient("basis rows are linearly dependent")
    return Basis(IntMatrix(rows), b.scheme)


def gauss_reduce(b: Basis) -> Basis:
    """Lagrange-reduce a 2-dimensional basis under the Euclidean norm."""
    if b.r != 2:
        raise DimensionMismatch("Gauss reduction is two-dimensional only")
    b1, b2 = b.rows[0], b.rows[1]
    if matrix_det(b.rows) == 0:
        raise RankDeficient("basis rows are linearly dependent")
    if dot(b1, b1) > dot(b2, b2):
        b1, b2 = b2, b1
    while True:
        mu = round_nearest(Fraction(dot(b1, b2), dot(b1, b1)))
        b2 = tuple(x - mu * y for x, y in zip(b2, b1))
        if dot(b2, b2) >= dot(b1, b1):
            break
        b1, b2 = b2, b1
    return Basis(IntMatrix([b1, b2]), b.scheme)


def babai_decompose(b: Basis, prob: DecompositionProblem, m: int) -> Decomposition:
    """Short decomposition of m by Babai rounding against the given basis.

    Solves (m, 0, ..., 0) = sum alpha_i * b_i exactly over Q (Cramer), rounds
    each alpha_i to the nearest integer, and subtracts.  The result a
    satisfies (m,0,...,0) - a in the row span, and
    ||a||_inf <= (r/2) * max_i ||b_i||_inf.
    """
    r = b.r
    if r != prob.r:
        raise DimensionMismatch(f"basis dimension {r}, problem dimension {prob.r}")
    det = matrix_det(b.rows)
    if det == 0:
        raise RankDeficient("basis rows are linearly dependent")
    target = (m,) + (0,) * (r - 1)
    coeffs = []
    for i in range(r):
        replaced = IntMatrix(
            [target if k == i else b.rows[k] for k in range(r)]
        )
        alpha = Fraction(matrix_det(replaced), det)
        coeffs.append(round_nearest(alpha))
    a = list(target)
    for i in range(r):
        for j in range(r):
            a[j] -= coeffs[i] * b.rows[i][j]
    return Decomposition(tuple(a))


def shrink_gcd(b: Basis, prob: DecompositionProblem) -> Basis:
    """Divide both rows by the gcd of the first row when that is legal.

    Legal means: the gcd also divides every entry of the second row and both
    scaled rows still lie in the decomposition lattice.  Otherwise the basis
    is returned unchanged.
    """
    if b.r != 2:
        raise DimensionMismatch("gcd shrinking is two-dimensional only")
    b1, b2 = b.rows[0], b.rows[1]
    g = vec_gcd(b1)
    if g <= 1:
        return b
    if any(e % g for e in b2):
        return b
    s1 = tuple(e // g for e in b1)
    s2 = tuple(e // g for e in b2)
    if membership(s1, prob) and membership(s2, prob):
        return Basis(IntMatrix([s1, s2]), b.scheme)
    return b


def _divided(v: tuple[int, ...], ell: int) -> tuple[int, ...] | None:
    if any(e % ell for e in v):
        return None
    return tuple(e // ell for e in v)


def shrink_prime(b: Basis, ell: int, prob: DecompositionProblem) -> Basis:
    """Pass to a superlattice of index ell (ell a small prime).

    Candidates are tried in order: for ell = 2, halving both rows at once
    (removes index 4 in one step); then b2/ell; then b1/ell; then
    (b1 + i*b2)/ell for 0 < i < ell, replacing b1.  A candidate is accepted
    when its entries are integral and every new row passes membership.
    """
    if b.r != 2:
        raise DimensionMismatch("prime shrinking is two-dimensional only")
    b1, b2 = b.rows[0], b.rows[1]

    def ok(v: tuple[int, ...]) -> bool:
        return membership(v, prob)

    if ell == 2:
        h1, h2 = _divided(b1, 2), _divided(b2, 2)
        if h1 is not None and h2 is not None and ok(h1) and ok(h2):
            return Basis(IntMatrix([h1, h2]), b.scheme)
    cand = _divided(b2, ell)
    if cand is not None and ok(cand):
        return Basis(IntMatrix([b1, cand]), b.scheme)
    cand = _divided(b1, ell)
    if cand is not None and ok(cand):
        return Basis(IntMatrix([cand, b2]), b.scheme)
    for i in range(1, ell):
        mixed = tuple(x + i * y for x, y in zip(b1, b2))
        cand = _divided(mixed, ell)
        if cand is not None and ok(cand):
            return Basis(IntMatrix([cand, b2]), b.scheme)
    raise NoSuperlattice(f"no index-{ell} superlattice found")


def shrink_to_order(b: Basis, prob: DecompositionProblem) -> Basis:
    """Shrink a 2-dimensional basis until |det| equals the subgroup order.

    Runs the gcd step once, then removes the remaining cofactor prime by
    prime.  Requires N to divide |det| at every stage.
    """
    b = shrink_gcd(b, prob)
    n = prob.modulus
    while True:
        d = abs(basis_det(b))
        if d == n:
            return b
        if d % n != 0:
            raise NoSuperlattice(f"determinant {d} is not a multiple of {n}")
        h = d // n
        b = shrink_prime(b, _small_factor(h), prob)


def _small_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n
