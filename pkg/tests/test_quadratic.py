import random
from math import isqrt

import pytest

from endobasis.quadratic import (
    DegenerateOrder,
    NoSolution,
    NotIncluded,
    OrderInclusion,
    QuadraticGenerator,
    RelationRow,
    conjugate,
    cornacchia_4q,
    lemma_relations,
    relation_bc,
    transfer_eigenvalue,
)
from endobasis.exact import NotInvertible, is_prime


def test_discriminant_examples():
    assert QuadraticGenerator(0, 1).discriminant() == -4
    assert QuadraticGenerator(-1, 1).discriminant() == -3
    with pytest.raises(DegenerateOrder):
        QuadraticGenerator(2, 1).discriminant()


def test_relation_bc_examples():
    # trace -6 comes from the exhaustive count of y^2 = x^3 + x over F_13
    # (see test_curves); (-3)^2 + 2^2 = 13 checks the norm
    inc = relation_bc(QuadraticGenerator(-6, 13), QuadraticGenerator(0, 1))
    assert (inc.b, inc.c) == (-3, 2)
    assert inc.b**2 + inc.c**2 == 13

    g = QuadraticGenerator(-6, 13)
    assert relation_bc(g, g) == OrderInclusion(0, 1)

    inc = relation_bc(QuadraticGenerator(-10, 169), QuadraticGenerator(-6, 13))
    assert (inc.b, inc.c) == (13, 6)


def test_relation_bc_roundtrip():
    rng = random.Random(10)
    for _ in range(300):
        t = rng.randrange(-20, 21)
        n = rng.randrange(-40, 41)
        sup = QuadraticGenerator(t, n)
        if t * t == 4 * n:
            continue
        b = rng.randrange(-100, 101)
        c = rng.randrange(1, 30)
        sub = QuadraticGenerator(c * t + 2 * b, c * c * n + b * c * t + b * b)
        inc = relation_bc(sub, sup)
        assert (inc.b, inc.c) == (b, c)
        assert sub.trace == inc.c * sup.trace + 2 * inc.b
        assert inc.c**2 * sup.discriminant() == sub.discriminant()
        conj = conjugate(inc, sup)
        assert sub.trace == conj.c * sup.trace + 2 * conj.b


def test_relation_bc_not_included():
    with pytest.raises(NotIncluded):
        relation_bc(QuadraticGenerator(0, 2), QuadraticGenerator(0, 1))  # ratio 2
    with pytest.raises(NotIncluded):
        relation_bc(QuadraticGenerator(0, 1), QuadraticGenerator(0, 2))  # ratio 1/2
    with pytest.raises(NotIncluded):
        relation_bc(QuadraticGenerator(0, -1), QuadraticGenerator(0, 1))  # ratio < 0


def test_lemma_relations_examples():
    r1, r2 = lemma_relations(OrderInclusion(-3, 2), QuadraticGenerator(0, 1))
    assert r1.coefficients() == (3, -2, 1, 0)
    assert r2.coefficients() == (2, 3, 0, 1)
    # both rows vanish mod 5 on (1, lam', lam, lam*lam') = (1, 2, 1, 2)
    assert r1.residue(2, 1, 5) == 0
    assert r2.residue(2, 1, 5) == 0

    r1, _ = lemma_relations(OrderInclusion(0, 1), QuadraticGenerator(7, 3))
    assert r1.coefficients() == (0, -1, 1, 0)

    r1, _ = lemma_relations(OrderInclusion(13, 6), QuadraticGenerator(-6, 13))
    assert r1.coefficients() == (-13, -6, 1, 0)


def test_lemma_relations_vanish():
    # row 1 vanishes for any eigenvalue pair with lam = c*lam' + b; row 2
    # additionally needs lam' to satisfy the including generator's minimal
    # polynomial mod N (always true for real endomorphisms acting on G)
    rng = random.Random(11)
    for _ in range(400):
        n = rng.randrange(2, 10**6)
        lam_sup = rng.randrange(n)
        t = rng.randrange(-9, 10)
        norm = (t * lam_sup - lam_sup * lam_sup) % n
        sup = QuadraticGenerator(t, norm)
        assert sup.char_poly_at(lam_sup) % n == 0
        b = rng.randrange(-50, 51)
        c = rng.randrange(1, 20)
        inc = OrderInclusion(b, c)
        lam_sub = (c * lam_sup + b) % n
        for row in lemma_relations(inc, sup):
            assert row.residue(lam_sup, lam_sub, n) == 0


def test_lemma_row2_residue_identity():
    # for arbitrary lam' the second row evaluates to c * chi_sup(lam')
    rng = random.Random(14)
    for _ in range(200):
        sup = QuadraticGenerator(rng.randrange(-9, 10), rng.randrange(-20, 21))
        b, c = rng.randrange(-50, 51), rng.randrange(1, 20)
        n = rng.randrange(2, 10**6)
        lam_sup = rng.randrange(n)
        lam_sub = (c * lam_sup + b) % n
        _, row2 = lemma_relations(OrderInclusion(b, c), sup)
        assert row2.residue(lam_sup, lam_sub, n) == c * sup.char_poly_at(lam_sup) % n


def brute_4q(d: int, q: int) -> set:
    """Independent oracle: scan all t with t^2 <= 4q."""
    sols = set()
    t = 0
    while t * t <= 4 * q:
        rem = 4 * q - t * t
        if rem % (-d) == 0:
            c2 = rem // (-d)
            c = isqrt(c2)
            if c * c == c2:
                sols.add((t, c))
        t += 1
    return sols


def test_cornacchia_examples():
    # frozen from brute_4q: the unit orbit of (6,2) under i contains (4,3)
    assert brute_4q(-4, 13) == {(6, 2), (4, 3)}
    assert cornacchia_4q(-4, 13) == {(6, 2), (4, 3)}

    assert brute_4q(-3, 7) == {(5, 1), (4, 2), (1, 3)}
    assert cornacchia_4q(-3, 7) == {(5, 1), (4, 2), (1, 3)}

    assert brute_4q(-4, 11) == set()
    with pytest.raises(NoSolution):
        cornacchia_4q(-4, 11)


def test_cornacchia_matches_exhaustive_search():
    for d in (-3, -4, -7, -8, -11):
        for q in range(2, 10**4):
            if not is_prime(q):
                continue
            want = brute_4q(d, q)
            if want:
                assert cornacchia_4q(d, q) == want, (d, q)
            else:
                with pytest.raises(NoSolution):
                    cornacchia_4q(d, q)


def test_cornacchia_solutions_satisfy_equation():
    rng = random.Random(12)
    for _ in range(100):
        q = rng.randrange(5, 1 << 24)
        if not is_prime(q):
            continue
        d = rng.choice((-3, -4, -7, -8, -11, -19, -20, -24, -43))
        try:
            sols = cornacchia_4q(d, q)
        except NoSolution:
            continue
        for t, c in sols:
            assert t >= 0 and c >= 0
            assert t * t + (-d) * c * c == 4 * q


def test_transfer_eigenvalue():
    assert transfer_eigenvalue(OrderInclusion(-3, 2), 1, 5) == 2
    assert transfer_eigenvalue(OrderInclusion(0, 1), 7, 19) == 7
    with pytest.raises(NotInvertible):
        transfer_eigenvalue(OrderInclusion(1, 5), 1, 10)

    rng = random.Random(13)
    for _ in range(300):
        n = rng.randrange(2, 10**9)
        b = rng.randrange(-50, 51)
        c = rng.randrange(1, 40)
        lam_sub = rng.randrange(n)
        try:
            lam = transfer_eigenvalue(OrderInclusion(b, c), lam_sub, n)
        except NotInvertible:
            continue
        assert (lam_sub - c * lam - b) % n == 0
        assert 0 <= lam < n


def test_eigenvalues_mod():
    g = QuadraticGenerator(0, 1)  # T^2 + 1
    assert g.eigenvalues_mod(5) == (2, 3)
    assert g.eigenvalues_mod(7) == ()
    g2 = QuadraticGenerator(-6, 13)
    for n in (5, 13, 101):
        for lam in g2.eigenvalues_mod(n):
            assert g2.char_poly_at(lam) % n == 0
