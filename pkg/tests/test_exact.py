import random
from fractions import Fraction
from math import gcd

import pytest
import sympy

from endobasis.exact import (
    IntMatrix,
    NotASquare,
    NotInvertible,
    exact_sqrt,
    factorize,
    is_prime,
    largest_prime_factor,
    matrix_det,
    mod_inv,
    round_nearest,
    sqrt_mod,
)


def test_mod_inv_examples():
    assert mod_inv(2, 5) == 3
    assert mod_inv(1, 7) == 1
    with pytest.raises(NotInvertible):
        mod_inv(2, 4)


def test_mod_inv_random():
    rng = random.Random(0)
    for _ in range(300):
        n = rng.randrange(2, 1 << 64)
        a = rng.randrange(1, n)
        if gcd(a, n) != 1:
            with pytest.raises(NotInvertible):
                mod_inv(a, n)
            continue
        x = mod_inv(a, n)
        assert 1 <= x < n
        assert a * x % n == 1


def test_round_nearest_examples():
    assert round_nearest(Fraction(-6, 5)) == -1
    assert round_nearest(0) == 0
    # ties go toward +infinity
    assert round_nearest(Fraction(1, 2)) == 1
    assert round_nearest(Fraction(-1, 2)) == 0
    assert round_nearest(Fraction(3, 2)) == 2


def test_round_nearest_bound():
    rng = random.Random(1)
    for _ in range(500):
        x = Fraction(rng.randrange(-10**9, 10**9), rng.randrange(1, 10**6))
        r = round_nearest(x)
        assert abs(x - r) <= Fraction(1, 2)


def test_exact_sqrt_examples():
    assert exact_sqrt(4) == 2
    assert exact_sqrt(0) == 0
    with pytest.raises(NotASquare):
        exact_sqrt(5)
    with pytest.raises(NotASquare):
        exact_sqrt(-4)


def test_exact_sqrt_roundtrip():
    rng = random.Random(2)
    for _ in range(200):
        s = rng.randrange(0, 1 << 130)
        assert exact_sqrt(s * s) == s


def test_is_prime_against_sympy():
    for n in range(2000):
        assert is_prime(n) == sympy.isprime(n), n
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randrange(1 << 40, 1 << 44)
        assert is_prime(n) == sympy.isprime(n), n


def test_factorize():
    rng = random.Random(4)
    for _ in range(100):
        n = rng.randrange(2, 1 << 40)
        fac = factorize(n)
        prod = 1
        for p, e in fac.items():
            assert is_prime(p)
            prod *= p**e
        assert prod == n
    assert largest_prime_factor(180) == 5
    assert largest_prime_factor(2**5) == 2


def test_sqrt_mod():
    rng = random.Random(5)
    primes = [3, 5, 7, 13, 17, 101, 1009, 65537, 104729]
    for p in primes:
        for _ in range(20):
            a = rng.randrange(p)
            r = sqrt_mod(a, p)
            if r is not None:
                assert r * r % p == a % p
            else:
                assert pow(a, (p - 1) // 2, p) == p - 1
    assert sqrt_mod(0, 13) == 0


def _det_by_permutations(rows):
    n = len(rows)
    import itertools

    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = sign
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total


def test_matrix_det_examples_and_oracle():
    assert matrix_det(IntMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])) == 1
    assert matrix_det(IntMatrix([[12, 6], [6, -12]])) == -180
    rng = random.Random(6)
    for _ in range(150):
        n = rng.randrange(1, 5)
        rows = [[rng.randrange(-50, 50) for _ in range(n)] for _ in range(n)]
        assert matrix_det(IntMatrix(rows)) == _det_by_permutations(rows)
    # big-entry cross-check against sympy
    for _ in range(20):
        rows = [[rng.randrange(-(1 << 130), 1 << 130) for _ in range(4)] for _ in range(4)]
        assert matrix_det(IntMatrix(rows)) == sympy.Matrix(rows).det()


def test_intmatrix_validation():
    with pytest.raises(ValueError):
        IntMatrix([[1, 2], [3]])
    with pytest.raises(ValueError):
        IntMatrix([])
    m = IntMatrix([[1, 2], [3, 4]])
    with pytest.raises(AttributeError):
        m._rows = ()
    assert m[1] == (3, 4)
    assert m == IntMatrix([(1, 2), (3, 4)])
    assert m.is_square
