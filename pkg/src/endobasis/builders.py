"""Ready-made short bases for every supported construction.

Each builder writes its basis down directly from the defining ring relation;
there is no search and no reduction step.  The 2-dimensional general form
takes an inclusion pi = c*phi + b and emits

    (b - 1, c)  and  (c*n_phi + (b - 1)*t_phi, 1 - b),

whose determinant is the group order.  The GLS, Q-curve, 4-dimensional and
genus-2 real-multiplication variants below are specializations or analogues
of the same two congruences.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .exact import IntMatrix, NotASquare, exact_sqrt, matrix_det
from .lattice import Basis, DecompositionProblem
from .quadratic import QuadraticGenerator


class DegenerateInclusion(ValueError):
    """c = 0: the included generator is rational, no 2-dim basis exists."""


class DegenerateConfiguration(ValueError):
    """The four constructed rows are linearly dependent."""


class WeilViolation(ValueError):
    """The trace parameter falls outside the Weil interval."""


class NonPositiveArg(ValueError):
    """Logarithm of a non-positive quantity requested."""


def long_basis(prob: DecompositionProblem) -> Basis:
    """The textbook full-rank basis (N,0,..,0), (-lam_i, .., 1, .., 0)."""
    r = prob.r
    rows = [[prob.modulus] + [0] * (r - 1)]
    for i, lam in enumerate(prob.eigenvalues):
        row = [-lam] + [0] * (r - 1)
        row[i + 1] = 1
        rows.append(row)
    return Basis(IntMatrix(rows), "long")


def ec2d_basis(b: int, c: int, phi: QuadraticGenerator) -> Basis:
    """Two-dimensional basis from the inclusion pi = c*phi + b."""
    if c == 0:
        raise DegenerateInclusion("c = 0")
    rows = [
        (b - 1, c),
        (c * phi.norm + (b - 1) * phi.trace, 1 - b),
    ]
    return Basis(IntMatrix(rows), "glv-2d")


def gls_basis(p: int, t0: int) -> Basis:
    """Orthogonal basis (p-1, -t0), (-t0, 1-p) for the twisted extension.

    t0 is the base-curve Frobenius trace; the determinant is the twist order
    (p-1)^2 + t0^2.
    """
    if t0 == 0 or t0 * t0 > 4 * p:
        raise WeilViolation(f"need 0 < |t0| <= 2*sqrt(p), got t0={t0}, p={p}")
    rows = [(p - 1, -t0), (-t0, 1 - p)]
    return Basis(IntMatrix(rows), "gls")


def qcurve_basis(p: int, d: int, eps: int, r_param: int) -> Basis:
    """Basis for a degree-d quadratic curve reduction with pi = r*psi - eps*p."""
    if eps not in (-1, 1):
        raise ValueError("eps must be +1 or -1")
    t_e = eps * (d * r_param * r_param - 2 * p)
    if abs(t_e) > 2 * p:
        raise WeilViolation(f"|t_E| = {abs(t_e)} exceeds 2p = {2 * p}")
    rows = [
        (-(1 + eps * p), r_param),
        (-eps * r_param * d, 1 + eps * p),
    ]
    return Basis(IntMatrix(rows), "q-curve")


def glvgls_basis(b: int, c: int, phi: QuadraticGenerator) -> Basis:
    """Four-dimensional basis for a twisted curve carrying both phi and psi.

    (b, c) witness psi = c*phi + b; the eigenvalue of psi squares to -1.
    """
    if c == 0:
        raise DegenerateInclusion("c = 0")
    rows = [
        (1, 0, b, c),
        (0, 1, -c * phi.norm, c * phi.trace + b),
        (-b, -c, 1, 0),
        (c * phi.norm, -c * phi.trace - b, 0, 1),
    ]
    m = IntMatrix(rows)
    if matrix_det(m) == 0:
        raise DegenerateConfiguration("rows are linearly dependent")
    return Basis(m, "glv+gls")


def gi_basis(b: int, c: int, phi: QuadraticGenerator, d: int, sign: int) -> Basis:
    """Four-dimensional basis when the second endomorphism squares to [sign*d]pi."""
    if c == 0:
        raise DegenerateInclusion("c = 0")
    if d < 1:
        raise ValueError("d must be >= 1")
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    sd = sign * d
    rows = [
        (sd, 0, -b, -c),
        (0, sd, c * phi.norm, -c * phi.trace - b),
        (-b, -c, 1, 0),
        (c * phi.norm, -c * phi.trace - b, 0, 1),
    ]
    m = IntMatrix(rows)
    if matrix_det(m) == 0:
        raise DegenerateConfiguration("rows are linearly dependent")
    return Basis(m, "gi")


def g2rm_basis(q: int, b: int, c: int, phi: QuadraticGenerator) -> Basis:
    """Basis from a real-multiplication inclusion pi + pi_dual = c*phi + b.

    phi generates a real quadratic order; the eigenvalue of pi + pi_dual on
    rational subgroups is q + 1.
    """
    if c == 0:
        raise DegenerateInclusion("c = 0")
    k = q + 1 - b
    rows = [
        (k, -c),
        (c * phi.norm - k * phi.trace, k),
    ]
    return Basis(IntMatrix(rows), "g2-rm")


def bound_trivial(
    q: int, t_e: int, phi: QuadraticGenerator
) -> tuple[int, Fraction]:
    """(|c|, bound on |b|) from the discriminant and triangle inequalities."""
    disc = phi.discriminant()
    num = t_e * t_e - 4 * q
    if disc == 0 or num % disc != 0 or num // disc < 0:
        raise NotASquare(f"({num})/({disc}) is not a nonnegative integer")
    c_abs = exact_sqrt(num // disc)
    b_bound = Fraction(abs(t_e) + abs(phi.trace) * c_abs, 2)
    return c_abs, b_bound


def bound_csq(modulus: int, phi: QuadraticGenerator) -> Fraction:
    """Generic decomposition bitlength bound, as an exact dyadic rational.

    Returns an upper approximation of

        (1/2)*log2(N) + (1/2)*log2(1 + |t_phi| + n_phi)

    that exceeds the true value by at most 1/64 of a bit, keeping the whole
    correctness path float-free.
    """
    m = 1 + abs(phi.trace) + phi.norm
    if m <= 0:
        raise NonPositiveArg(f"1 + |t_phi| + n_phi = {m} is not positive")
    if modulus < 1:
        raise NonPositiveArg(f"modulus {modulus} is not positive")
    x = modulus * m
    y = x**32
    t = y.bit_length() - 1
    if (1 << t) < y:
        t += 1
    # t is minimal with 2^t >= x^32, so t/64 >= (1/2) log2 x, within 1/64
    return Fraction(t, 64)


def g2_validate(q: int, s: int, n_pi: int) -> bool:
    """Admissibility of (s, n_pi) = (Tr, N) of pi + pi_dual on a surface.

    Checks |s| <= 4*sqrt(q), |n_pi| <= 4q, s^2 - 4*n_pi > 0 and
    n_pi + 4q > 2|s|*sqrt(q), all compared exactly by squaring.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    if s * s > 16 * q:
        return False
    if abs(n_pi) > 4 * q:
        return False
    if s * s - 4 * n_pi <= 0:
        return False
    lhs = n_pi + 4 * q
    if lhs <= 0:
        return False
    return lhs * lhs > 4 * s * s * q


@dataclass(frozen=True)
class GLVScheme:
    p: int
    curve_id: str
    b: int
    c: int
    t_phi: int
    n_phi: int

    def build(self) -> Basis:
        return ec2d_basis(self.b, self.c, QuadraticGenerator(self.t_phi, self.n_phi))


@dataclass(frozen=True)
class GLSScheme:
    p: int
    t0: int

    def build(self) -> Basis:
        return gls_basis(self.p, self.t0)


@dataclass(frozen=True)
class QCurveScheme:
    p: int
    d: int
    eps: int
    r_param: int

    def build(self) -> Basis:
        return qcurve_basis(self.p, self.d, self.eps, self.r_param)

    @property
    def trace(self) -> int:
        return self.eps * (self.d * self.r_param * self.r_param - 2 * self.p)


@dataclass(frozen=True)
class GLVGLSScheme:
    p: int
    t0: int
    b: int
    c: int
    t_phi: int
    n_phi: int

    def build(self) -> Basis:
        return glvgls_basis(self.b, self.c, QuadraticGenerator(self.t_phi, self.n_phi))


@dataclass(frozen=True)
class GIScheme:
    b: int
    c: int
    t_phi: int
    n_phi: int
    d: int
    sign: int

    def build(self) -> Basis:
        return gi_basis(
            self.b, self.c, QuadraticGenerator(self.t_phi, self.n_phi), self.d, self.sign
        )


@dataclass(frozen=True)
class G2RMScheme:
    q: int
    s: int
    n_pi: int
    b: int
    c: int
    t_phi: int
    n_phi: int

    def build(self) -> Basis:
        return g2rm_basis(self.q, self.b, self.c, QuadraticGenerator(self.t_phi, self.n_phi))


SchemeDescriptor = Union[
    GLVScheme, GLSScheme, QCurveScheme, GLVGLSScheme, GIScheme, G2RMScheme
]


def basis_to_json(
    basis: Basis, prob: DecompositionProblem | None = None
) -> str:
    """Serialize a basis; all big integers travel as decimal strings."""
    obj = {
        "scheme": basis.scheme,
        "r": basis.r,
        "modulus": str(prob.modulus) if prob is not None else None,
        "eigenvalues": [str(e) for e in prob.eigenvalues] if prob is not None else [],
        "rows": [[str(e) for e in row] for row in basis.rows],
    }
    return json.dumps(obj)


def basis_from_json(text: str) -> tuple[Basis, DecompositionProblem | None]:
    obj = json.loads(text)
    rows = [[int(e) for e in row] for row in obj["rows"]]
    basis = Basis(IntMatrix(rows), obj.get("scheme") or "custom")
    if basis.r != obj.get("r", basis.r):
        raise ValueError("declared dimension does not match the rows")
    prob = None
    if obj.get("modulus") is not None:
        prob = DecompositionProblem(
            int(obj["modulus"]), tuple(int(e) for e in obj.get("eigenvalues", []))
        )
    return basis, prob
