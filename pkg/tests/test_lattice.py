import math
import random
from fractions import Fraction

import numpy as np
import pytest

from moonframe.errors import (
    BudgetExceededError,
    MoonframeError,
    NotSublatticeError,
    ParseError,
)
from moonframe.lattice import (
    Frame,
    IntegralLattice,
    construction_a,
    enumerate_gram,
    frame_to_code,
    ldl_exact,
    snf_index,
    standard_leech,
    verify_leech,
)
from moonframe.zkcode import ZkCode, euclidean_weight, verify_type_ii


# -- independent oracle: naive box enumeration ---------------------------------

def box_limits(gram, bound):
    """Coordinate bounds |x_i| <= sqrt(bound * (G^-1)_ii) for the box oracle."""
    n = len(gram)
    ginv = np.linalg.inv(np.array(gram, dtype=float))
    return [int(math.floor(math.sqrt(bound * ginv[i][i] + 1e-9))) + 1
            for i in range(n)]


def box_enumerate(gram, bound):
    """Counts by norm <= bound via a plain integer box search."""
    n = len(gram)
    counts = {}
    import itertools
    for x in itertools.product(*[range(-l, l + 1)
                                 for l in box_limits(gram, bound)]):
        q = 0
        for i in range(n):
            if x[i]:
                q += x[i] * sum(gram[i][j] * x[j] for j in range(n))
        if 0 < q <= bound:
            counts[q] = counts.get(q, 0) + 1
    return counts


def rand_pd_gram(rng, n, bound, spread=3, box_cap=300_000):
    """Random positive definite integer Gram with a tractable oracle box."""
    while True:
        b = [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)]
        g = [[sum(bi[t] * bj[t] for t in range(n)) for bj in b] for bi in b]
        try:
            ldl_exact(g)
        except MoonframeError:
            continue
        vol = 1
        for l in box_limits(g, bound):
            vol *= 2 * l + 1
        if vol <= box_cap:
            return g


@pytest.mark.parametrize("backend", ["pure", "fast"])
def test_enumeration_vs_box_oracle(backend):
    rng = random.Random(12)
    for trial in range(50):
        n = rng.randint(1, 4)
        bound = rng.randint(1, 3 * n + 4)
        g = rand_pd_gram(rng, n, bound)
        counts, _ = enumerate_gram(g, bound, backend=backend)
        expected = box_enumerate(g, bound)
        got = {q: int(c) for q, c in enumerate(counts) if c}
        assert got == expected, f"trial {trial}: {g} bound {bound}"


def test_enumeration_simple_grams():
    # Z^2: 4 vectors of norm 1 (2 up to sign)
    counts, _ = enumerate_gram([[1, 0], [0, 1]], 1)
    assert counts[1] == 4
    # hexagonal A2: 6 vectors of norm 2
    counts, _ = enumerate_gram([[2, 1], [1, 2]], 2)
    assert counts[2] == 6


def test_enumeration_collect_layer():
    counts, vecs = enumerate_gram([[1, 0], [0, 1]], 4, collect_norm=4)
    assert counts[4] == 4  # (+-2, 0), (0, +-2)
    assert vecs.shape == (2, 2)
    norms = (vecs.astype(np.int64) ** 2).sum(axis=1)
    assert set(norms.tolist()) == {4}


def test_enumeration_budget():
    with pytest.raises(BudgetExceededError):
        enumerate_gram([[1, 0], [0, 1]], 100, max_nodes=5)


def test_ldl_exact_reconstructs():
    rng = random.Random(13)
    for _ in range(10):
        n = rng.randint(1, 5)
        g = rand_pd_gram(rng, n, bound=10)
        d, r = ldl_exact(g)
        n = len(g)
        recon = [[sum(d[t] * r[t][i] * r[t][j] for t in range(n))
                  for j in range(n)] for i in range(n)]
        assert recon == [[Fraction(x) for x in row] for row in g]


# -- construction A --------------------------------------------------------------

def test_construction_a_klemm():
    code = ZkCode([[1, 1, 1, 1], [0, 2, 0, 2], [0, 0, 2, 2]], 4)
    lat = construction_a(code)
    assert lat.scale == Fraction(1, 4)
    # self-dual code -> unimodular lattice
    assert lat.det() == 1
    # standard frame vector 4 e_0 has norm 4
    assert lat.contains([4, 0, 0, 0])
    assert lat.norm_of([4, 0, 0, 0]) == 4
    # code is self-dual but not Type II -> lattice is odd
    assert not lat.is_even()


def test_construction_a_octacode_even():
    rows = [
        [1, 0, 0, 0, 3, 1, 2, 1],
        [0, 1, 0, 0, 1, 2, 3, 1],
        [0, 0, 1, 0, 3, 3, 3, 2],
        [0, 0, 0, 1, 2, 3, 1, 1],
    ]
    code = ZkCode(rows, 4)
    assert verify_type_ii(code).type_ii
    lat = construction_a(code)
    assert lat.det() == 1
    assert lat.is_even()
    # the octacode gives E8: 240 roots of norm 2
    counts = lat.vector_counts(2)
    assert counts[Fraction(2)] == 240


def test_construction_a_min_norm_matches_code_min_ewt():
    # min Ewt over nonzero codewords = 2k * min norm of non-frame vectors
    rng = random.Random(44)
    code = ZkCode([[1, 1, 1, 1], [0, 2, 0, 2], [0, 0, 2, 2]], 4)
    lat = construction_a(code)
    min_ewt = min(euclidean_weight(w, 4) for w in code.words() if any(w))
    counts = lat.vector_counts(6)
    min_norm = min(q for q in counts if counts[q])
    assert min_ewt == 4  # (0,2,0,2)
    assert min_norm == Fraction(min_ewt, 4)


# -- Leech ------------------------------------------------------------------------

def test_standard_leech_certificates():
    lat = standard_leech()
    assert lat.rank == 24
    assert lat.scale == Fraction(1, 8)
    cert = verify_leech(lat)
    assert cert.ok()
    assert cert.determinant == 1


def test_leech_file_roundtrip(tmp_path):
    lat = standard_leech()
    p = tmp_path / "leech.txt"
    p.write_text(lat.to_text())
    again = IntegralLattice.from_file(p)
    assert again.basis == lat.basis
    assert again.scale == lat.scale


def test_lattice_parse_errors():
    with pytest.raises(ParseError):
        IntegralLattice.from_text("")
    with pytest.raises(ParseError):
        IntegralLattice.from_text("2 1\n1 0\n0 1\n")
    with pytest.raises(ParseError):
        IntegralLattice.from_text("3 1 8\n1 0\n0 1\n")


# -- frames -----------------------------------------------------------------------

@pytest.fixture(scope="module")
def leech():
    return standard_leech()


def test_frame_verify_and_code_extraction(leech):
    from moonframe.catalog import builtin_frame
    frame = builtin_frame(2)
    frame.verify(leech)
    code = frame_to_code(leech, frame)
    assert code.card == 4 ** 12
    rep = verify_type_ii(code)
    assert rep.self_dual and rep.type_ii
    # image of a frame vector is the zero codeword
    assert code.contains([0] * 24)
    word = []
    f0 = frame.vectors[0]
    for f in frame.vectors:
        word.append(int(leech.inner(f0, f)) % 4)
    assert not any(word)


def test_frame_rejects_wrong_size(leech):
    from moonframe.catalog import builtin_frame
    frame = builtin_frame(2)
    clipped = Frame(frame.vectors[:23], 2)
    with pytest.raises(MoonframeError):
        clipped.verify(leech)


def test_frame_rejects_non_orthogonal(leech):
    from moonframe.catalog import builtin_frame
    frame = builtin_frame(2)
    bad = list(frame.vectors[:23]) + [frame.vectors[0]]
    with pytest.raises(MoonframeError):
        Frame(bad, 2).verify(leech)


def test_frame_file_roundtrip(tmp_path, leech):
    from moonframe.catalog import builtin_frame
    frame = builtin_frame(3)
    p = tmp_path / "f.txt"
    p.write_text(frame.to_text())
    again = Frame.from_file(p)
    assert again == frame
    again.verify(leech)


def test_frame_roundtrip_through_code(leech):
    # frame -> code -> construction A must be even, unimodular, rootless
    from moonframe.catalog import builtin_frame
    code = frame_to_code(leech, builtin_frame(2))
    lat = construction_a(code)
    cert = verify_leech(lat)
    assert cert.ok()


def test_snf_index_of_frame_sublattice(leech):
    from moonframe.catalog import builtin_frame
    frame = builtin_frame(2)
    sub = frame.sublattice(leech)
    rep = snf_index(sub, leech)
    assert rep.index == 4 ** 12
    # SNF divisibility chain
    for a, b in zip(rep.diagonal, rep.diagonal[1:]):
        assert b % a == 0
    assert rep.two_quotient_order == 2 ** (24 - 12)


def test_snf_index_rejects_non_sublattice(leech):
    bad = IntegralLattice([[1 if j == i else 0 for j in range(24)]
                           for i in range(24)], Fraction(1, 8))
    with pytest.raises(NotSublatticeError):
        snf_index(bad, leech)
