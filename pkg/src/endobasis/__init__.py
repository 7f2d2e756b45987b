"""Short lattice bases for endomorphism-accelerated scalar multiplication.

The package constructs the ready-made short bases attached to the classical
efficient-endomorphism families (low-degree CM curves, twisted base
extensions, quadratic curve reductions, their 4-dimensional combinations and
genus-2 real multiplication), decomposes scalars by Babai rounding, and
verifies every construction with exact lattice algebra and real curve
arithmetic at desk scale.
"""

from .exact import (
    IntMatrix,
    NotASquare,
    NotInvertible,
    exact_sqrt,
    is_prime,
    largest_prime_factor,
    matrix_det,
    mod_inv,
    round_nearest,
    sqrt_mod,
)
from .quadratic import (
    DegenerateOrder,
    NoSolution,
    NotIncluded,
    OrderInclusion,
    ParityError,
    QuadraticGenerator,
    RelationRow,
    conjugate,
    cornacchia_4q,
    lemma_relations,
    relation_bc,
    transfer_eigenvalue,
)
from .lattice import (
    Basis,
    Decomposition,
    DecompositionProblem,
    DimensionMismatch,
    NoSuperlattice,
    RankDeficient,
    babai_decompose,
    basis_det,
    gauss_reduce,
    hnf,
    membership,
    norm_bits,
    shrink_gcd,
    shrink_prime,
    shrink_to_order,
)
from .builders import (
    DegenerateConfiguration,
    DegenerateInclusion,
    NonPositiveArg,
    WeilViolation,
    basis_from_json,
    basis_to_json,
    bound_csq,
    bound_trivial,
    ec2d_basis,
    g2_validate,
    g2rm_basis,
    gi_basis,
    glvgls_basis,
    gls_basis,
    long_basis,
    qcurve_basis,
)
from .curves import (
    BadKernel,
    ConstantMissing,
    CurveInstance,
    Endomorphism,
    Field,
    FieldElement,
    InconsistentEigenvalue,
    NoIsomorphism,
    NoRoot,
    Point,
    SingularCurve,
    Supersingular,
    TooLarge,
    decomposed_mul,
    frobenius_inclusion,
    gls_setup,
    msm,
    naive_count,
    point_of_order,
    resolve_eigenvalue,
    scalar_mul,
    velu_endo,
)
from .catalog import CATALOG, CURVE_IDS, catalog_curve, catalog_endo

__version__ = "0.1.0"
