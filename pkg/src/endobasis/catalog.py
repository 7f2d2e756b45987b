"""Built-in curves with low-degree complex multiplication.

Six classical families, one per CM discriminant, each carrying an explicit
endomorphism of degree at most 3.  Models given with rational coefficients
or a leading cubic coefficient are normalized to y^2 = x^3 + Ax + B inside
the target field; kernel abscissae are transformed along the way.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import NotInvertible
from .quadratic import QuadraticGenerator
from .curves import (
    ConstantMissing,
    CurveInstance,
    Endomorphism,
    Field,
    FieldElement,
    Point,
    SingularCurve,
    velu_endo,
)


@dataclass(frozen=True)
class CatalogEntry:
    curve_id: str
    j: int
    cm_disc: int                       # discriminant whose square root must exist
    char_poly: QuadraticGenerator
    lead: Fraction                     # y^2 = lead*x^3 + c2*x^2 + c1*x + c0
    c2: Fraction
    c1: Fraction
    c0: Fraction
    endo_kind: str                     # "coordinate" or "velu"
    kernel_x: Fraction | None = None   # raw-model abscissa, when rational
    kernel_uses_root: bool = False     # j = 32768: abscissa involves sqrt(-11)
    parametrized: bool = False         # free coefficient a (j = 0 and j = 1728)


_F = Fraction

CATALOG: dict[str, CatalogEntry] = {
    e.curve_id: e
    for e in (
        CatalogEntry(
            "j1728", 1728, -1, QuadraticGenerator(0, 1),
            _F(1), _F(0), _F(1), _F(0),
            "coordinate", parametrized=True,
        ),
        CatalogEntry(
            "j0", 0, -3, QuadraticGenerator(-1, 1),
            _F(1), _F(0), _F(0), _F(1),
            "coordinate", parametrized=True,
        ),
        CatalogEntry(
            "j-3375", -3375, -7, QuadraticGenerator(1, 2),
            _F(1), _F(-3, 4), _F(-2), _F(-1),
            "velu", kernel_uses_root=True,
        ),
        CatalogEntry(
            "j8000", 8000, -2, QuadraticGenerator(0, 2),
            _F(4), _F(0), _F(-30), _F(-28),
            "velu", kernel_x=_F(-2),
        ),
        CatalogEntry(
            "j32768", 32768, -11, QuadraticGenerator(1, 3),
            _F(1), _F(0), _F(-13824, 539), _F(27648, 539),
            "velu", kernel_uses_root=True,
        ),
        CatalogEntry(
            "j54000", 54000, -3, QuadraticGenerator(0, 3),
            _F(1), _F(0), _F(-3375, 121), _F(6750, 121),
            "velu", kernel_x=_F(45, 11),
        ),
    )
}

CURVE_IDS = tuple(CATALOG)


def _normalized_coeffs(
    entry: CatalogEntry, fld: Field, a_param: int
) -> tuple[FieldElement, FieldElement]:
    """(A, B) of the monic depressed model in the field."""
    s = entry.lead
    c2 = entry.c2
    c1 = entry.c1
    c0 = entry.c0
    if entry.parametrized:
        if entry.curve_id == "j1728":
            c1 = _F(a_param)
        else:
            c0 = _F(a_param)
    a_frac = c1 * s - c2 * c2 / 3
    b_frac = 2 * c2**3 / 27 - c1 * s * c2 / 3 + c0 * s * s
    try:
        return fld.from_fraction(a_frac), fld.from_fraction(b_frac)
    except NotInvertible:
        raise SingularCurve(
            f"{entry.curve_id} model is undefined over {fld}"
        ) from None


def _normalized_x(entry: CatalogEntry, fld: Field, x_raw: FieldElement) -> FieldElement:
    # X = lead * x + c2/3 tracks the monicize-then-depress substitution
    return fld.from_fraction(entry.lead) * x_raw + fld.from_fraction(entry.c2 / 3)


def catalog_curve(curve_id: str, fld: Field, a_param: int = 1) -> CurveInstance:
    """Instantiate a catalog curve over the field (a_param only matters for
    the two parametrized families)."""
    entry = CATALOG[curve_id]
    if entry.parametrized and a_param % fld.p == 0:
        raise SingularCurve("the free coefficient must be nonzero")
    a, b = _normalized_coeffs(entry, fld, a_param)
    return CurveInstance(fld, a, b, catalog_id=curve_id)


def _required_root(entry: CatalogEntry, fld: Field) -> FieldElement:
    root = fld(entry.cm_disc).sqrt()
    if root is None:
        raise ConstantMissing(
            f"{entry.curve_id} needs a square root of {entry.cm_disc} in {fld}"
        )
    return root


def catalog_endo(curve_id: str, curve: CurveInstance) -> Endomorphism:
    """The catalog endomorphism of the given instantiated curve."""
    entry = CATALOG[curve_id]
    fld = curve.field
    root = _required_root(entry, fld)

    if entry.curve_id == "j1728":
        i_elem = root  # i^2 = -1

        def phi_map(pt: Point) -> Point:
            return Point(curve, -pt.x, -(i_elem * pt.y))

        return Endomorphism(curve, "coordinate-map", entry.char_poly, phi_map)

    if entry.curve_id == "j0":
        zeta = (root - 1) / 2  # primitive cube root of unity

        def phi_map(pt: Point) -> Point:
            return Point(curve, zeta * pt.x, pt.y)

        return Endomorphism(curve, "coordinate-map", entry.char_poly, phi_map)

    if entry.kernel_uses_root:
        # both square roots give a kernel; they cut out the two conjugate
        # degree-n primes, and either quotient is isomorphic to the curve
        if entry.curve_id == "j-3375":
            # 2-torsion abscissae (-5 +- sqrt(-7))/8
            candidates = [(r - 5) / 8 for r in (root, -root)]
        else:
            # j = 32768: x = (24/7)(1 - 1/sqrt(-11))
            scale = fld.from_fraction(_F(24, 7))
            candidates = [scale * (fld.one() - r.inverse()) for r in (root, -root)]
    else:
        candidates = [fld.from_fraction(entry.kernel_x)]

    last_error: Exception | None = None
    for x_raw in candidates:
        x0 = _normalized_x(entry, fld, x_raw)
        try:
            return velu_endo(curve, x0, entry.char_poly.norm, entry.char_poly)
        except (ValueError, ArithmeticError) as err:
            last_error = err
    assert last_error is not None
    raise last_error
