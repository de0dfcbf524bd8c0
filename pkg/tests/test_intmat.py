import random
from fractions import Fraction

from moonframe import intmat


def rand_matrix(rng, n, m, lo=-6, hi=6):
    return [[rng.randint(lo, hi) for _ in range(m)] for _ in range(n)]


def test_det_bareiss_matches_fraction_elimination():
    rng = random.Random(2)
    for _ in range(40):
        n = rng.randint(1, 5)
        a = rand_matrix(rng, n, n)
        det = intmat.det_bareiss(a)
        # reference: fraction Gaussian elimination
        b = [[Fraction(x) for x in row] for row in a]
        ref = Fraction(1)
        for c in range(n):
            piv = next((i for i in range(c, n) if b[i][c]), None)
            if piv is None:
                ref = Fraction(0)
                break
            if piv != c:
                b[c], b[piv] = b[piv], b[c]
                ref = -ref
            ref *= b[c][c]
            for i in range(c + 1, n):
                f = b[i][c] / b[c][c]
                b[i] = [x - f * y for x, y in zip(b[i], b[c])]
        assert det == ref


def test_hnf_properties():
    rng = random.Random(3)
    for _ in range(30):
        n, m = rng.randint(1, 5), rng.randint(1, 5)
        a = rand_matrix(rng, n, m)
        h, u = intmat.hnf_with_transform(a)
        # u is unimodular and u*a == h
        assert abs(intmat.det_bareiss(u)) == 1
        assert intmat.mat_mul(u, a) == h
        # echelon with positive pivots, reduced above
        last = -1
        for row in h:
            nz = [j for j, x in enumerate(row) if x]
            if not nz:
                continue
            j = nz[0]
            assert j > last
            last = j
            assert row[j] > 0


def test_hnf_span_invariance():
    rng = random.Random(4)
    for _ in range(25):
        n, m = rng.randint(2, 4), rng.randint(2, 4)
        a = rand_matrix(rng, n, m)
        b = [list(r) for r in a]
        # random unimodular row ops
        for _ in range(10):
            i, j = rng.randrange(n), rng.randrange(n)
            if i != j:
                c = rng.randint(-3, 3)
                b[i] = [x + c * y for x, y in zip(b[i], b[j])]
            if rng.random() < 0.3:
                b[i] = [-x for x in b[i]]
        assert intmat.hnf(a) == intmat.hnf(b)


def test_left_kernel():
    rng = random.Random(5)
    for _ in range(30):
        n, m = rng.randint(1, 5), rng.randint(1, 5)
        a = rand_matrix(rng, n, m)
        kern = intmat.left_kernel(a)
        for row in kern:
            assert all(v == 0 for v in intmat.mat_vec(
                [list(x) for x in zip(*a)], row))
        h = intmat.hnf(a)
        assert len(kern) == n - len(h)


def test_snf_diagonal_properties():
    rng = random.Random(6)
    for _ in range(30):
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        a = rand_matrix(rng, n, m)
        diag = intmat.snf_diagonal(a)
        # divisibility chain
        for x, y in zip(diag, diag[1:]):
            if x and y:
                assert y % x == 0
            if x == 0:
                assert y == 0
        if n == m:
            prod = 1
            for x in diag:
                prod *= x
            assert prod == abs(intmat.det_bareiss(a))


def test_snf_known_case():
    assert intmat.snf_diagonal([[2, 0], [0, 3]]) == [1, 6]
    assert intmat.snf_diagonal([[2, 4], [6, 8]]) == [2, 4]


def test_rank_mod2():
    assert intmat.rank_mod2([0b101, 0b011, 0b110]) == 2
    assert intmat.rank_mod2([0, 0]) == 0
    assert intmat.rank_mod2([1, 2, 4]) == 3


def test_rational_inverse_roundtrip():
    rng = random.Random(7)
    for _ in range(20):
        n = rng.randint(1, 4)
        a = rand_matrix(rng, n, n)
        if intmat.det_bareiss(a) == 0:
            continue
        inv = intmat.rational_inverse(a)
        prod = intmat.mat_mul([[Fraction(x) for x in r] for r in a], inv)
        assert prod == [[Fraction(int(i == j)) for j in range(n)]
                        for i in range(n)]
