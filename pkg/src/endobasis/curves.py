"""Desk-scale curve arithmetic: the ground truth everything is checked against.

Supports short Weierstrass curves over F_p and F_p^2 with affine group law,
naive point counting, degree 2 and 3 quotient-isogeny endomorphisms, the
twist-Frobenius endomorphism on base-extended curves, and decomposed scalar
multiplication.  Correctness is the only goal; nothing here trades exactness
for speed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import random
from typing import Callable, Sequence

from .exact import is_prime, largest_prime_factor, mod_inv, sqrt_mod
from .lattice import (
    Basis,
    DecompositionProblem,
    DimensionMismatch,
    babai_decompose,
)
from .quadratic import QuadraticGenerator


class TooLarge(ValueError):
    """Field too large for exhaustive counting."""


class SingularCurve(ValueError):
    """4*a4^3 + 27*a6^2 = 0."""


class Supersingular(ValueError):
    """Trace divisible by the characteristic; no twist endomorphism here."""


class ConstantMissing(ValueError):
    """A required field constant (i, zeta_3, sqrt of -d) does not exist."""


class NoIsomorphism(ValueError):
    """The quotient curve is not isomorphic to the domain over this field."""


class BadKernel(ValueError):
    """The supplied x-coordinate does not cut out a subgroup of the right order."""


class NoRoot(ValueError):
    """The minimal polynomial has no root modulo the subgroup order."""


class InconsistentEigenvalue(ValueError):
    """Neither root of the minimal polynomial matches the action on the point."""


NAIVE_COUNT_LIMIT = 1 << 26


class Field:
    """F_p for an odd prime p, or F_p^2 = F_p[u]/(u^2 - ns)."""

    __slots__ = ("p", "degree", "ns")

    def __init__(self, p: int, ns: int | None = None):
        if p == 2 or not is_prime(p):
            raise ValueError(f"characteristic must be an odd prime, got {p}")
        self.p = p
        if ns is None:
            self.degree = 1
            self.ns = None
        else:
            ns %= p
            if pow(ns, (p - 1) // 2, p) != p - 1:
                raise ValueError(f"{ns} is a square mod {p}, not a valid extension")
            self.degree = 2
            self.ns = ns

    @classmethod
    def quadratic_extension(cls, p: int) -> "Field":
        """F_p^2 built with the smallest positive nonresidue."""
        ns = 2
        while pow(ns, (p - 1) // 2, p) != p - 1:
            ns += 1
        return cls(p, ns)

    @property
    def order(self) -> int:
        return self.p if self.degree == 1 else self.p * self.p

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is not self and (
                value.field.p != self.p or value.field.degree != self.degree
            ):
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, Fraction):
            return self.from_fraction(value)
        if isinstance(value, tuple):
            if self.degree != 2:
                raise ValueError("pairs only make sense in a quadratic extension")
            a, b = value
            return FieldElement(self, a % self.p, b % self.p)
        return FieldElement(self, int(value) % self.p, 0)

    def from_fraction(self, fr: Fraction) -> "FieldElement":
        num = fr.numerator % self.p
        den = mod_inv(fr.denominator % self.p, self.p)
        return FieldElement(self, num * den % self.p, 0)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1, 0)

    def u(self) -> "FieldElement":
        if self.degree != 2:
            raise ValueError("no generator u in a prime field")
        return FieldElement(self, 0, 1)

    def random_element(self, rng: random.Random) -> "FieldElement":
        if self.degree == 1:
            return FieldElement(self, rng.randrange(self.p), 0)
        return FieldElement(self, rng.randrange(self.p), rng.randrange(self.p))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Field)
            and other.p == self.p
            and other.degree == self.degree
            and other.ns == self.ns
        )

    def __hash__(self) -> int:
        return hash((self.p, self.degree, self.ns))

    def __repr__(self) -> str:
        if self.degree == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^2 (u^2 = {self.ns})"


class FieldElement:
    """a + b*u with u^2 = ns (b = 0 in a prime field)."""

    __slots__ = ("field", "a", "b")

    def __init__(self, fld: Field, a: int, b: int = 0):
        self.field = fld
        self.a = a % fld.p
        self.b = b % fld.p

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, int):
            return FieldElement(self.field, other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FieldElement(self.field, -self.a, -self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.field.p
        if self.field.degree == 1:
            return FieldElement(self.field, self.a * o.a % p, 0)
        ns = self.field.ns
        a = (self.a * o.a + ns * self.b * o.b) % p
        b = (self.a * o.b + self.b * o.a) % p
        return FieldElement(self.field, a, b)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        p = self.field.p
        if self.field.degree == 1:
            return FieldElement(self.field, mod_inv(self.a, p), 0)
        # (a + bu)^-1 = (a - bu) / (a^2 - ns b^2)
        nrm = (self.a * self.a - self.field.ns * self.b * self.b) % p
        inv = mod_inv(nrm, p)
        return FieldElement(self.field, self.a * inv % p, -self.b * inv % p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return self.inverse() ** (-e)
        result = FieldElement(self.field, 1, 0)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def frobenius(self) -> "FieldElement":
        """x -> x^p; constant time in the extension since u^p = -u."""
        if self.field.degree == 1:
            return self
        return FieldElement(self.field, self.a, -self.b)

    def is_square(self) -> bool:
        if self.is_zero():
            return True
        e = (self.field.order - 1) // 2
        return (self**e).a == 1 and (self**e).b == 0

    def sqrt(self) -> "FieldElement | None":
        """A square root in this field, or None."""
        fld = self.field
        p = fld.p
        if fld.degree == 1:
            r = sqrt_mod(self.a, p)
            return None if r is None else FieldElement(fld, r, 0)
        if self.is_zero():
            return fld.zero()
        # norm to F_p first; self is a square iff its norm is
        nrm = (self.a * self.a - fld.ns * self.b * self.b) % p
        m = sqrt_mod(nrm, p)
        if m is None:
            return None
        if self.b == 0:
            r = sqrt_mod(self.a, p)
            if r is not None:
                return FieldElement(fld, r, 0)
            # a is a nonsquare in F_p: sqrt lies on the u-axis
            r = sqrt_mod(self.a * mod_inv(fld.ns, p) % p, p)
            if r is None:
                return None
            return FieldElement(fld, 0, r)
        inv2 = mod_inv(2, p)
        for sign in (m, p - m):
            alpha = (self.a + sign) * inv2 % p
            r0 = sqrt_mod(alpha, p)
            if r0 is None or r0 == 0:
                continue
            r1 = self.b * mod_inv(2 * r0 % p, p) % p
            cand = FieldElement(fld, r0, r1)
            if cand * cand == self:
                return cand
        return None

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = FieldElement(self.field, other, 0)
        return (
            isinstance(other, FieldElement)
            and self.a == other.a
            and self.b == other.b
            and self.field == other.field
        )

    def __hash__(self) -> int:
        return hash((self.field, self.a, self.b))

    def __repr__(self) -> str:
        if self.field.degree == 1 or self.b == 0:
            return str(self.a)
        return f"({self.a} + {self.b}u)"


@dataclass(frozen=True)
class CurveInstance:
    """y^2 = x^3 + a4*x + a6 over the given field."""

    field: Field
    a4: FieldElement
    a6: FieldElement
    order: int | None = None
    catalog_id: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "a4", self.field(self.a4))
        object.__setattr__(self, "a6", self.field(self.a6))
        disc = 4 * self.a4**3 + 27 * self.a6**2
        if disc.is_zero():
            raise SingularCurve("4*a4^3 + 27*a6^2 = 0")

    def rhs(self, x: FieldElement) -> FieldElement:
        return x**3 + self.a4 * x + self.a6

    def contains(self, x: FieldElement, y: FieldElement) -> bool:
        return y * y == self.rhs(x)

    def infinity(self) -> "Point":
        return Point(self, None, None)

    def point(self, x, y) -> "Point":
        xe, ye = self.field(x), self.field(y)
        if not self.contains(xe, ye):
            raise ValueError(f"({xe}, {ye}) is not on {self}")
        return Point(self, xe, ye)

    def random_point(self, rng: random.Random) -> "Point":
        while True:
            x = self.field.random_element(rng)
            y = self.rhs(x).sqrt()
            if y is not None:
                if rng.randrange(2):
                    y = -y
                return Point(self, x, y)

    def __repr__(self) -> str:
        tag = f" [{self.catalog_id}]" if self.catalog_id else ""
        return f"y^2 = x^3 + {self.a4}x + {self.a6} over {self.field}{tag}"


class Point:
    """Affine point or the point at infinity."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: CurveInstance, x: FieldElement | None, y=None):
        self.curve = curve
        self.x = x
        self.y = y

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __neg__(self) -> "Point":
        if self.is_infinity:
            return self
        return Point(self.curve, self.x, -self.y)

    def __add__(self, other: "Point") -> "Point":
        if self.is_infinity:
            return other
        if other.is_infinity:
            return self
        if self.x == other.x:
            if (self.y + other.y).is_zero():
                return self.curve.infinity()
            slope = (3 * self.x * self.x + self.curve.a4) / (2 * self.y)
        else:
            slope = (other.y - self.y) / (other.x - self.x)
        x3 = slope * slope - self.x - other.x
        y3 = slope * (self.x - x3) - self.y
        return Point(self.curve, x3, y3)

    def __sub__(self, other: "Point") -> "Point":
        return self + (-other)

    def __rmul__(self, m: int) -> "Point":
        return scalar_mul(m, self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Point):
            return NotImplemented
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return self.x == other.x and self.y == other.y

    def __hash__(self) -> int:
        if self.is_infinity:
            return hash((id(self.curve.field), "inf"))
        return hash((self.x, self.y))

    def __repr__(self) -> str:
        if self.is_infinity:
            return "O"
        return f"({self.x}, {self.y})"


def scalar_mul(m: int, pt: Point) -> Point:
    """[m]P by double-and-add; [-m]P = -[m]P and [0]P is infinity."""
    if m < 0:
        return scalar_mul(-m, -pt)
    result = pt.curve.infinity()
    addend = pt
    while m:
        if m & 1:
            result = result + addend
        addend = addend + addend
        m >>= 1
    return result


def msm(points: Sequence[Point], coeffs: Sequence[int]) -> Point:
    """Interleaved multi-scalar multiplication sum [a_i]P_i (r <= 4)."""
    if len(points) != len(coeffs):
        raise DimensionMismatch("points and coefficients differ in length")
    if not points:
        raise DimensionMismatch("need at least one point")
    if len(points) > 4:
        raise DimensionMismatch("interleaving supports at most four points")
    pairs = [
        (pt if a >= 0 else -pt, abs(a)) for pt, a in zip(points, coeffs)
    ]
    nbits = max(a.bit_length() for _, a in pairs)
    result = points[0].curve.infinity()
    for i in range(nbits - 1, -1, -1):
        result = result + result
        for pt, a in pairs:
            if (a >> i) & 1:
                result = result + pt
    return result


def naive_count(curve: CurveInstance) -> int:
    """#E(F_p) by a quadratic-character sweep (prime fields only)."""
    if curve.field.degree != 1:
        raise TooLarge("naive counting only runs over prime fields")
    p = curve.field.p
    if p >= NAIVE_COUNT_LIMIT:
        raise TooLarge(f"p = {p} exceeds the counting limit 2^26")
    qr = bytearray(p)
    for x in range(1, (p - 1) // 2 + 1):
        qr[x * x % p] = 1
    a4, a6 = curve.a4.a, curve.a6.a
    count = 1
    for x in range(p):
        v = (x * x * x + a4 * x + a6) % p
        if v == 0:
            count += 1
        elif qr[v]:
            count += 2
    return count


@dataclass(frozen=True)
class Endomorphism:
    """A curve-to-itself map with known minimal polynomial.

    kind is one of "coordinate-map", "velu-composite", "twist-frobenius" or
    "composite" (a product of two of the others, minimal polynomial unknown).
    """

    curve: CurveInstance
    kind: str
    char_poly: QuadraticGenerator | None
    map: Callable[[Point], Point] = field(repr=False)

    def __call__(self, pt: Point) -> Point:
        if pt.is_infinity:
            return pt
        return self.map(pt)

    def compose(self, other: "Endomorphism") -> "Endomorphism":
        def composed(pt: Point) -> Point:
            return self(other(pt))

        return Endomorphism(self.curve, "composite", None, composed)

    def satisfies_char_poly(self, pt: Point) -> bool:
        """phi^2(P) - [t]phi(P) + [n]P = O for this sample point."""
        cp = self.char_poly
        if cp is None:
            raise ValueError("no minimal polynomial recorded")
        q1 = self(pt)
        q2 = self(q1)
        acc = q2 + scalar_mul(-cp.trace, q1) + scalar_mul(cp.norm, pt)
        return acc.is_infinity


def _division_poly_3(curve: CurveInstance, x: FieldElement) -> FieldElement:
    a, b = curve.a4, curve.a6
    return 3 * x**4 + 6 * a * x**2 + 12 * b * x - a * a


def velu_endo(
    curve: CurveInstance,
    kernel_x: FieldElement,
    degree: int,
    target: QuadraticGenerator,
    sample_rng: random.Random | None = None,
) -> Endomorphism:
    """Quotient by a rational subgroup of order 2 or 3, mapped back to the curve.

    The kernel is Galois-stable because only kernel_x and the square of the
    kernel y-coordinate enter the formulas.  The codomain must be isomorphic
    to the domain; the scaling (x, y) -> (w^2 x, w^3 y) is recovered from the
    coefficient ratios and its sign fixed by checking the target minimal
    polynomial on random points.
    """
    fld = curve.field
    x0 = fld(kernel_x)
    a, b = curve.a4, curve.a6
    if degree == 2:
        if not curve.rhs(x0).is_zero():
            raise BadKernel(f"x = {x0} is not a 2-torsion abscissa")
        gx = 3 * x0 * x0 + a
        v, w = gx, x0 * gx

        def x_map(x):
            return x + v / (x - x0)

        def dx_map(x):
            return 1 - v / ((x - x0) ** 2)

    elif degree == 3:
        if not _division_poly_3(curve, x0).is_zero():
            raise BadKernel(f"x = {x0} is not a 3-torsion abscissa")
        gx = 3 * x0 * x0 + a
        u_q = 4 * curve.rhs(x0)
        v = 2 * gx
        w = u_q + x0 * v

        def x_map(x):
            return x + v / (x - x0) + u_q / ((x - x0) ** 2)

        def dx_map(x):
            return 1 - v / ((x - x0) ** 2) - 2 * u_q / ((x - x0) ** 3)

    else:
        raise ValueError("only degrees 2 and 3 are supported")

    a_quo = a - 5 * v
    b_quo = b - 7 * w
    if a_quo.is_zero() or b_quo.is_zero():
        raise NoIsomorphism("quotient has j-invariant 0 or 1728, domain does not")
    w2 = (b * a_quo) / (b_quo * a)
    if w2 * w2 != a / a_quo or w2**3 != b / b_quo:
        raise NoIsomorphism("quotient curve is not isomorphic to the domain")
    ws = w2.sqrt()
    if ws is None:
        raise NoIsomorphism("isomorphism to the domain is only defined over an extension")

    def make(w3: FieldElement) -> Endomorphism:
        def phi(pt: Point) -> Point:
            if pt.x == x0:
                return curve.infinity()
            return Point(curve, w2 * x_map(pt.x), w3 * pt.y * dx_map(pt.x))

        return Endomorphism(curve, "velu-composite", target, phi)

    rng = sample_rng or random.Random(0xE11)
    samples = [curve.random_point(rng) for _ in range(8)]
    for w3 in (w2 * ws, -(w2 * ws)):
        endo = make(w3)
        if all(endo.satisfies_char_poly(pt) for pt in samples):
            return endo
    raise NoIsomorphism("neither sign of the isomorphism satisfies the target polynomial")


def gls_setup(
    curve0: CurveInstance,
) -> tuple[CurveInstance, Endomorphism, int]:
    """Quadratic twist of the base extension, with its Frobenius conjugate.

    Returns (E', psi, t0) where #E'(F_p^2) = (p-1)^2 + t0^2 and psi has
    minimal polynomial T^2 - t0*T + p.  On rational points psi^2 = -1.
    """
    if curve0.field.degree != 1:
        raise ValueError("the base curve must live over a prime field")
    p = curve0.field.p
    n0 = curve0.order if curve0.order is not None else naive_count(curve0)
    t0 = p + 1 - n0
    if t0 % p == 0:
        raise Supersingular(f"trace {t0} is divisible by p = {p}")

    ext = Field.quadratic_extension(p)
    # smallest nonsquare of the shape k + u: deterministic and reproducible
    v = ext((0, 1))
    while v.is_square():
        v = v + 1
    a4 = ext(curve0.a4.a) * v**2
    a6 = ext(curve0.a6.a) * v**3
    twisted = CurveInstance(ext, a4, a6, order=(p - 1) ** 2 + t0 * t0)

    # psi = (twist) o (p-power Frobenius) o (untwist): the scaling factors
    # v^(1-p) and v^(3(1-p)/2) are themselves elements of F_p^2
    cx = v ** (1 - p)
    cy = v ** (3 * (1 - p) // 2)

    def psi_map(pt: Point) -> Point:
        return Point(twisted, cx * pt.x.frobenius(), cy * pt.y.frobenius())

    psi = Endomorphism(twisted, "twist-frobenius", QuadraticGenerator(t0, p), psi_map)
    return twisted, psi, t0


def resolve_eigenvalue(endo: Endomorphism, pt: Point, order: int) -> int:
    """The root lam of the minimal polynomial with endo(P) = [lam]P."""
    if endo.char_poly is None:
        raise ValueError("endomorphism has no minimal polynomial recorded")
    roots = endo.char_poly.eigenvalues_mod(order)
    if not roots:
        raise NoRoot(
            f"minimal polynomial of {endo.kind} has no root modulo {order}"
        )
    image = endo(pt)
    for lam in roots:
        if scalar_mul(lam, pt) == image:
            return lam
    raise InconsistentEigenvalue(
        f"no root of the minimal polynomial matches the action modulo {order}"
    )


def point_of_order(curve: CurveInstance, n: int, rng: random.Random) -> Point:
    """A point of exact order n (n must divide the cached curve order)."""
    if curve.order is None:
        raise ValueError("curve order is not known")
    if curve.order % n != 0:
        raise ValueError(f"{n} does not divide the curve order")
    cofactor = curve.order // n
    while True:
        pt = scalar_mul(cofactor, curve.random_point(rng))
        if not pt.is_infinity and scalar_mul(n, pt).is_infinity:
            return pt


def decomposed_mul(
    m: int,
    pt: Point,
    basis: Basis,
    prob: DecompositionProblem,
    endos: Sequence[Endomorphism],
) -> Point:
    """[m]P through a short decomposition and interleaved multiexponentiation."""
    if len(endos) != prob.r - 1:
        raise DimensionMismatch(
            f"need {prob.r - 1} endomorphisms for dimension {prob.r}"
        )
    dec = babai_decompose(basis, prob, m % prob.modulus)
    points = [pt] + [e(pt) for e in endos]
    return msm(points, dec.coefficients)


def frobenius_inclusion(
    curve: CurveInstance,
    endo: Endomorphism,
    rng: random.Random | None = None,
    samples: int = 8,
) -> tuple[int, int, int]:
    """Recover (b, c, t) with pi = c*phi + b on an ordinary curve.

    Candidate traces and conductors come from the norm equation
    t^2 + |disc(phi)| c^2 = 4q; signs are fixed on the curve by checking
    [t']-order annihilation and [c']phi(P) + [b']P = P on random points.
    """
    from .quadratic import cornacchia_4q

    if endo.char_poly is None:
        raise ValueError("endomorphism has no minimal polynomial recorded")
    q = curve.field.order
    disc = endo.char_poly.discriminant()
    t_phi = endo.char_poly.trace
    rng = rng or random.Random(0xB0C)

    candidates = []
    for t_abs, c_abs in cornacchia_4q(disc, q):
        traces = {t_abs, -t_abs}
        conductors = {c_abs, -c_abs} if c_abs else {0}
        for t in traces:
            for c in conductors:
                if c == 0 or (t - c * t_phi) % 2 != 0:
                    continue
                candidates.append((t, c, (t - c * t_phi) // 2))

    pts = [curve.random_point(rng) for _ in range(samples)]
    survivors = []
    for t, c, b in candidates:
        n_cand = q + 1 - t
        good = True
        for pt in pts:
            if not scalar_mul(n_cand, pt).is_infinity:
                good = False
                break
            if scalar_mul(c, endo(pt)) + scalar_mul(b, pt) != pt:
                good = False
                break
        if good:
            survivors.append((b, c, t))
    if len(survivors) != 1:
        raise InconsistentEigenvalue(
            f"{len(survivors)} candidate inclusions survived the curve tests"
        )
    return survivors[0]


def subgroup_problem(
    curve: CurveInstance,
    endos: Sequence[Endomorphism],
    rng: random.Random,
    modulus: int | None = None,
) -> tuple[DecompositionProblem, Point, list[int]]:
    """Pick a prime-order subgroup and resolve all eigenvalues on it.

    The eigenvalue list follows the map ordering (1, e_1, .., e_k, products
    are the caller's business).  Uses the largest prime factor of the curve
    order unless a modulus is supplied.
    """
    if curve.order is None:
        raise ValueError("curve order is not known")
    n = modulus if modulus is not None else largest_prime_factor(curve.order)
    pt = point_of_order(curve, n, rng)
    lams = [resolve_eigenvalue(e, pt, n) for e in endos]
    return DecompositionProblem(n, tuple(lams)), pt, lams
