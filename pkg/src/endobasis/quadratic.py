"""Quadratic-ring bookkeeping.

A generator xi of a quadratic ring Z[xi] is recorded by its trace and norm;
its minimal polynomial is T^2 - trace*T + norm.  When Z[xi] sits inside
Z[xi'], the inclusion is witnessed by integers (b, c) with xi = c*xi' + b,
and that single relation is what all the short-basis constructions consume.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .exact import NotASquare, exact_sqrt, is_prime, mod_inv, sqrt_mod


class DegenerateOrder(ValueError):
    """The generator is rational: its discriminant vanishes."""


class NotIncluded(ValueError):
    """No inclusion Z[sub] <= Z[sup]: discriminant ratio is not a square."""


class ParityError(ValueError):
    """trace(sub) - c*trace(sup) is odd, so b is not an integer."""


class NoSolution(ValueError):
    """t^2 + |D| c^2 = 4q has no integer solutions."""


@dataclass(frozen=True)
class QuadraticGenerator:
    """Trace and norm of a quadratic-ring generator."""

    trace: int
    norm: int

    def discriminant(self) -> int:
        d = self.trace * self.trace - 4 * self.norm
        if d == 0:
            raise DegenerateOrder(
                f"generator with trace {self.trace}, norm {self.norm} is rational"
            )
        return d

    def char_poly_at(self, x: int) -> int:
        """T^2 - trace*T + norm evaluated at x."""
        return x * x - self.trace * x + self.norm

    def eigenvalues_mod(self, n: int) -> tuple[int, ...]:
        """Roots of the minimal polynomial modulo a prime n."""
        if n == 2:
            return tuple(x for x in (0, 1) if self.char_poly_at(x) % 2 == 0)
        disc = self.trace * self.trace - 4 * self.norm
        s = sqrt_mod(disc, n)
        if s is None:
            return ()
        half = mod_inv(2, n)
        roots = {(self.trace + s) * half % n, (self.trace - s) * half % n}
        return tuple(sorted(roots))


@dataclass(frozen=True)
class OrderInclusion:
    """Integers (b, c) with sub = c*sup + b for a pair of generators."""

    b: int
    c: int

    def __post_init__(self):
        if self.c == 0:
            raise ValueError("relative conductor c must be nonzero")


@dataclass(frozen=True)
class RelationRow:
    """Coefficients (k1, k_sup, k_sub, k_cross) of a congruence

    k1 + k_sup*lam' + k_sub*lam + k_cross*lam*lam' = 0 (mod N),
    where lam, lam' are the eigenvalues of the included and including
    generators on a cyclic subgroup of order N.
    """

    k1: int
    k_sup: int
    k_sub: int
    k_cross: int

    def residue(self, lam_sup: int, lam_sub: int, modulus: int) -> int:
        v = (
            self.k1
            + self.k_sup * lam_sup
            + self.k_sub * lam_sub
            + self.k_cross * lam_sub * lam_sup
        )
        return v % modulus

    def coefficients(self) -> tuple[int, int, int, int]:
        return (self.k1, self.k_sup, self.k_sub, self.k_cross)


def relation_bc(sub: QuadraticGenerator, sup: QuadraticGenerator) -> OrderInclusion:
    """Solve sub = c*sup + b with c > 0.

    The conjugate solution is (b + c*trace(sup), -c); see conjugate().
    """
    dsub = sub.discriminant()
    dsup = sup.discriminant()
    if dsub % dsup != 0:
        raise NotIncluded(f"discriminant ratio {dsub}/{dsup} is not integral")
    ratio = dsub // dsup
    if ratio <= 0:
        raise NotIncluded(f"discriminant ratio {dsub}/{dsup} is negative")
    try:
        c = exact_sqrt(ratio)
    except NotASquare:
        raise NotIncluded(f"discriminant ratio {ratio} is not a square") from None
    num = sub.trace - c * sup.trace
    if num % 2 != 0:
        raise ParityError(f"trace difference {num} is odd")
    return OrderInclusion(num // 2, c)


def conjugate(inc: OrderInclusion, sup: QuadraticGenerator) -> OrderInclusion:
    """The other solution (b', -c) of the same inclusion."""
    return OrderInclusion(inc.b + inc.c * sup.trace, -inc.c)


def lemma_relations(
    inc: OrderInclusion, sup: QuadraticGenerator
) -> tuple[RelationRow, RelationRow]:
    """The two eigenvalue congruences implied by sub = c*sup + b.

    Row one encodes lam - c*lam' - b = 0; row two is the same relation
    multiplied through by the conjugate of sup.
    """
    b, c = inc.b, inc.c
    row1 = RelationRow(-b, -c, 1, 0)
    row2 = RelationRow(c * sup.norm + b * sup.trace, -b, -sup.trace, 1)
    return row1, row2


def transfer_eigenvalue(inc: OrderInclusion, lambda_sub: int, modulus: int) -> int:
    """Given lam(sub), recover lam(sup) = (lam(sub) - b) / c mod N."""
    inv_c = mod_inv(inc.c, modulus)
    return (lambda_sub - inc.b) * inv_c % modulus


def _descend(a: int, b: int, limit: int) -> int:
    # gcd-style descent: first remainder at or below the limit
    while b > limit:
        a, b = b, a % b
    return b


def _cornacchia_classic(abs_d: int, q: int) -> set[tuple[int, int]]:
    """Primitive-style solutions of x^2 + abs_d*y^2 = q, q an odd prime."""
    sols: set[tuple[int, int]] = set()
    r = sqrt_mod(-abs_d, q)
    if r is None:
        return sols
    for x0 in {r, q - r}:
        b = _descend(q, x0, isqrt(q))
        rem = q - b * b
        if rem > 0 and rem % abs_d == 0:
            c2 = rem // abs_d
            c = isqrt(c2)
            if c * c == c2:
                sols.add((b, c))
    return sols


def _cornacchia_4q(d: int, q: int) -> set[tuple[int, int]]:
    """Solutions of t^2 + |d|*c^2 = 4q for a discriminant d (0 or 1 mod 4)."""
    abs_d = -d
    sols: set[tuple[int, int]] = set()
    r = sqrt_mod(d % q, q)
    if r is None:
        return sols
    for root in {r, (q - r) % q}:
        # lift to a square root of d mod 4q: match parity of d
        x0 = root if (root - d) % 2 == 0 else root + q
        b = _descend(2 * q, x0, isqrt(4 * q))
        rem = 4 * q - b * b
        if rem > 0 and rem % abs_d == 0:
            c2 = rem // abs_d
            c = isqrt(c2)
            if c * c == c2:
                sols.add((b, c))
    return sols


def _unit_orbit(d: int, seeds: set[tuple[int, int]]) -> set[tuple[int, int]]:
    # close the signed solution set under the units of the order of
    # discriminant d (extra units exist only for d = -3 and d = -4)
    # and under conjugation, then keep the nonnegative quadrant
    todo = list(seeds)
    seen: set[tuple[int, int]] = set()
    while todo:
        t, c = todo.pop()
        if (t, c) in seen:
            continue
        seen.add((t, c))
        todo.append((-t, -c))
        todo.append((t, -c))
        if d == -4:
            todo.append((-2 * c, t // 2))
        elif d == -3:
            todo.append((-(t + 3 * c) // 2, (t - c) // 2))
    return {(t, c) for t, c in seen if t >= 0 and c >= 0}


def cornacchia_4q(d: int, q: int) -> set[tuple[int, int]]:
    """All (t, c) with t >= 0, c >= 0 and t^2 + |d|*c^2 = 4q.

    d is a negative discriminant and q a prime.  Callers apply signs; the
    sign ambiguity is resolved on a curve, not here.
    """
    if d >= 0:
        raise ValueError(f"d must be negative, got {d}")
    if not is_prime(q):
        raise ValueError(f"q must be prime, got {q}")
    abs_d = -d

    if q <= 3 or abs_d % q == 0:
        # tiny or ramified: direct scan over c is exact and instant
        sols = set()
        c = 0
        while abs_d * c * c <= 4 * q:
            t2 = 4 * q - abs_d * c * c
            t = isqrt(t2)
            if t * t == t2:
                sols.add((t, c))
            c += 1
        if not sols:
            raise NoSolution(f"t^2 + {abs_d}c^2 = 4*{q} has no solutions")
        return sols

    if d % 4 in (0, 1):
        seeds = _cornacchia_4q(d, q)
    else:
        # not a discriminant: any solution has t, c both even
        seeds = {(2 * x, 2 * y) for x, y in _cornacchia_classic(abs_d, q)}
    sols = _unit_orbit(d, seeds)
    if not sols:
        raise NoSolution(f"t^2 + {abs_d}c^2 = 4*{q} has no solutions")
    return sols
