"""Exact integral lattices: construction A, the Leech lattice, enumeration.

A lattice is held as an integer basis in ambient coordinates together with
a positive rational scale s, so that the true Gram matrix is
(basis . basis^T) * s, exactly.  All certificates (evenness, determinant,
membership, frame verification) are computed in exact arithmetic; vector
enumeration uses the compiled kernel with an exact leaf check, see
``_kernels.pure.fp_enumerate`` for the soundness argument.
"""

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import intmat
from ._kernels import get_backend
from .errors import (
    BudgetExceededError,
    MoonframeError,
    NotSublatticeError,
    ParseError,
)


def ldl_exact(gram):
    """Exact rational LDL^T of a symmetric positive-definite matrix.

    Returns (d, r) with d a list of positive Fractions and r unit upper
    triangular (list of lists of Fractions), such that
    gram = r^T diag(d) r.  Raises if the matrix is not positive definite.
    """
    n = len(gram)
    d = [Fraction(0)] * n
    r = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for i in range(n):
        acc = Fraction(gram[i][i])
        for t in range(i):
            acc -= d[t] * r[t][i] * r[t][i]
        if acc <= 0:
            raise MoonframeError("matrix is not positive definite")
        d[i] = acc
        for j in range(i + 1, n):
            v = Fraction(gram[i][j])
            for t in range(i):
                v -= d[t] * r[t][i] * r[t][j]
            r[i][j] = v / d[i]
    return d, r


def enumerate_gram(gram, bound, collect_norm=None, max_nodes=None,
                   max_collect=None, backend=None):
    """All vectors x != 0 (up to sign) with x^T gram x <= bound.

    gram is an exact integer matrix; bound an integer.  Returns
    (counts, vectors): counts[q] holds the number of vectors of exact
    norm q counting both signs; vectors is an int32 array of coordinate
    rows of exact norm == collect_norm (one per +-pair) or None.
    Raises BudgetExceededError when max_nodes/max_collect is hit.
    """
    n = len(gram)
    d, r = ldl_exact(gram)
    dvec = [float(x) for x in d]
    rmat = [[float(x) for x in row] for row in r]
    kern = get_backend(backend)
    counts, vectors, nodes, complete = kern.fp_enumerate(
        [list(row) for row in gram], dvec, rmat, int(bound),
        -1 if collect_norm is None else int(collect_norm),
        max_nodes, max_collect)
    if not complete:
        raise BudgetExceededError(
            "vector enumeration budget exhausted",
            {"nodes": nodes, "bound": int(bound)})
    return counts, vectors


class IntegralLattice:
    """Integer basis rows in ambient coordinates with a rational scale."""

    __slots__ = ("basis", "scale", "_gram_int", "_inv")

    def __init__(self, basis, scale):
        scale = Fraction(scale)
        if scale <= 0:
            raise ValueError("scale must be positive")
        basis = tuple(tuple(int(x) for x in row) for row in basis)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "_gram_int", None)
        object.__setattr__(self, "_inv", None)

    def __setattr__(self, *_):
        raise AttributeError("IntegralLattice is immutable")

    @property
    def rank(self):
        return len(self.basis)

    @property
    def dim(self):
        return len(self.basis[0])

    def gram_int(self):
        if self._gram_int is None:
            object.__setattr__(self, "_gram_int",
                               intmat.gram_matrix([list(r) for r in self.basis]))
        return self._gram_int

    def gram(self):
        """The exact rational Gram matrix."""
        return [[Fraction(x) * self.scale for x in row]
                for row in self.gram_int()]

    def det(self):
        """Exact determinant of the Gram matrix."""
        return Fraction(intmat.det_bareiss(self.gram_int())) \
            * self.scale ** self.rank

    def is_even(self):
        """Integral with even diagonal, so every vector has even norm."""
        g = self.gram()
        for i, row in enumerate(g):
            for j, v in enumerate(row):
                if v.denominator != 1:
                    return False
                if i == j and v.numerator % 2:
                    return False
        return True

    def is_unimodular(self):
        g = self.gram()
        integral = all(v.denominator == 1 for row in g for v in row)
        return integral and self.det() == 1

    def _basis_inv(self):
        if self._inv is None:
            if self.rank != self.dim:
                raise MoonframeError("membership needs a full square basis")
            object.__setattr__(self, "_inv",
                               intmat.rational_inverse([list(r) for r in self.basis]))
        return self._inv

    def coords_of(self, vec):
        """Coordinates of an ambient vector in this basis (Fractions)."""
        return intmat.solve_right_rational(self._basis_inv(), list(vec))

    def contains(self, vec):
        return all(c.denominator == 1 for c in self.coords_of(vec))

    def norm_of(self, vec):
        """Exact norm of an ambient vector under this lattice's scale."""
        return sum(x * x for x in vec) * self.scale

    def inner(self, u, v):
        return sum(x * y for x, y in zip(u, v)) * self.scale

    def scaled_bound(self, bound):
        """Integer enumeration threshold for true-norm bound."""
        t = Fraction(bound) / self.scale
        return int(t) if t.denominator == 1 else math.floor(t)

    def vector_counts(self, bound, max_nodes=None, backend=None):
        """{true norm: count (both signs)} for 0 < norm <= bound."""
        counts, _ = enumerate_gram(self.gram_int(), self.scaled_bound(bound),
                                   max_nodes=max_nodes, backend=backend)
        out = {}
        for q, c in enumerate(counts):
            if q and c:
                out[Fraction(q) * self.scale] = int(c)
        return out

    def vectors_of_norm(self, norm, max_collect=None, max_nodes=None,
                        backend=None, dtype=np.int64):
        """Ambient coordinate rows of all vectors of the exact norm, up to sign."""
        t = Fraction(norm) / self.scale
        if t.denominator != 1:
            return np.zeros((0, self.dim), dtype=dtype)
        _, coeffs = enumerate_gram(self.gram_int(), int(t), collect_norm=int(t),
                                   max_nodes=max_nodes, max_collect=max_collect,
                                   backend=backend)
        basis = np.asarray(self.basis, dtype=np.int64)
        out = np.empty((coeffs.shape[0], self.dim), dtype=dtype)
        step = 1 << 18
        for a in range(0, coeffs.shape[0], step):
            block = coeffs[a:a + step].astype(np.int64) @ basis
            out[a:a + step] = block
            if not np.array_equal(out[a:a + step].astype(np.int64), block):
                raise MoonframeError("ambient coordinates overflow the dtype")
        return out

    # -- files: "rank scale_num scale_den" header + basis rows ---------------

    @classmethod
    def from_text(cls, text):
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise ParseError("empty lattice file")
        head = lines[0].split()
        if len(head) != 3:
            raise ParseError("header must be 'rank scale_num scale_den'")
        try:
            rank, num, den = (int(x) for x in head)
            rows = [[int(x) for x in ln.split()] for ln in lines[1:]]
        except ValueError as exc:
            raise ParseError(f"bad integer in lattice file: {exc}") from None
        if len(rows) != rank:
            raise ParseError(f"expected {rank} basis rows, found {len(rows)}")
        return cls(rows, Fraction(num, den))

    @classmethod
    def from_file(cls, path):
        with open(path, "r", encoding="ascii") as fh:
            return cls.from_text(fh.read())

    def to_text(self):
        s = self.scale
        out = [f"{self.rank} {s.numerator} {s.denominator}"]
        out += [" ".join(str(x) for x in row) for row in self.basis]
        return "\n".join(out) + "\n"


# -- construction A and the Leech lattice -------------------------------------


def construction_a(code):
    """The lattice of integer vectors reducing mod 2k into the code.

    Scale 1/(2k), so the norm of a lift x is sum(x_i^2)/(2k); the standard
    frame vectors 2k e_i always belong to it.
    """
    m, n = code.modulus, code.length
    rows = [list(g) for g in code.gens]
    rows += [[m if i == j else 0 for j in range(n)] for i in range(n)]
    basis = intmat.hnf(rows)
    if len(basis) != n:
        raise MoonframeError("construction A basis is not full rank")
    return IntegralLattice(basis, Fraction(1, m))


def leech_from_golay(golay):
    """The Leech lattice at scale 1/8 built from a binary Golay code.

    Generators: doubled Golay words 2*chi_c, the sublattice
    {4y : sum y_i even}, and the odd vector (-3, 1, ..., 1); the basis is
    their Hermite normal form.  Certificates (evenness, determinant 1,
    rootlessness) are checked by the caller / test-suite rather than
    assumed from the construction.
    """
    n = golay.n
    rows = []
    for mask in golay.masks:
        rows.append([2 * ((mask >> i) & 1) for i in range(n)])
    for j in range(1, n):
        row = [0] * n
        row[0] = 4
        row[j] = 4
        rows.append(row)
    row = [0] * n
    row[0] = 8
    rows.append(row)
    rows.append([-3] + [1] * (n - 1))
    basis = intmat.hnf(rows)
    if len(basis) != n:
        raise MoonframeError("Leech generator set is not full rank")
    return IntegralLattice(basis, Fraction(1, 8))


@dataclass(frozen=True)
class LeechCertificate:
    even: bool
    determinant: Fraction
    rootless: bool
    norm4_count: int | None = None
    norm6_count: int | None = None

    def ok(self):
        return self.even and self.determinant == 1 and self.rootless


def verify_leech(lat, deep=False, backend=None):
    """Even + unimodular + rootless; optionally the norm-4/6 counts."""
    even = lat.is_even()
    det = lat.det()
    bound = 6 if deep else 2
    counts = lat.vector_counts(bound, backend=backend) if even and det == 1 \
        else {}
    rootless = counts.get(Fraction(2), 0) == 0 and even and det == 1
    return LeechCertificate(
        even, det, rootless,
        counts.get(Fraction(4)) if deep else None,
        counts.get(Fraction(6)) if deep else None)


def standard_leech(golay=None):
    """The Golay-based Leech lattice, shallow-verified on construction."""
    if golay is None:
        from .catalog import golay_fixture
        golay = golay_fixture()
    lat = leech_from_golay(golay)
    cert = verify_leech(lat)
    if not cert.ok():
        raise MoonframeError(f"Leech construction failed its certificate: {cert}")
    return lat


# -- sublattice index ----------------------------------------------------------


@dataclass(frozen=True)
class IndexReport:
    index: int
    diagonal: tuple
    two_quotient_order: int


def snf_index(sub, super_):
    """Smith-normal-form data of sub inside super.

    Returns the index [super : sub], the SNF diagonal of the coordinate
    matrix, and |sub / (2*super intersect sub)| = 2^rank_2(M), the order
    of the elementary abelian quotient used by the frame bookkeeping.
    """
    if sub.scale != super_.scale:
        raise NotSublatticeError("scales differ")
    coords = []
    for row in sub.basis:
        c = super_.coords_of(row)
        if any(x.denominator != 1 for x in c):
            raise NotSublatticeError("vector outside the superlattice")
        coords.append([int(x) for x in c])
    diag = intmat.snf_diagonal(coords)
    if any(d == 0 for d in diag):
        raise NotSublatticeError("sublattice has lower rank")
    index = 1
    for x in diag:
        index *= x
    masks = [sum((v & 1) << i for i, v in enumerate(row)) for row in coords]
    two_rank = intmat.rank_mod2(masks)
    return IndexReport(index, tuple(diag), 1 << two_rank)


# -- frames --------------------------------------------------------------------


class Frame:
    """24 mutually orthogonal lattice vectors of norm 2k (one per +- pair)."""

    __slots__ = ("vectors", "k")

    def __init__(self, vectors, k):
        object.__setattr__(self, "vectors",
                           tuple(tuple(int(x) for x in row) for row in vectors))
        object.__setattr__(self, "k", int(k))

    def __setattr__(self, *_):
        raise AttributeError("Frame is immutable")

    def __eq__(self, other):
        return (isinstance(other, Frame) and self.k == other.k
                and self.vectors == other.vectors)

    def verify(self, lat):
        """Exact certificate: membership and <f_i, f_j> = 2k delta_ij."""
        n = lat.dim
        if len(self.vectors) != n:
            raise MoonframeError(f"frame has {len(self.vectors)} vectors, "
                                 f"expected {n}")
        for v in self.vectors:
            if not lat.contains(v):
                raise MoonframeError("frame vector outside the lattice")
        for i, u in enumerate(self.vectors):
            for j in range(i, n):
                ip = lat.inner(u, self.vectors[j])
                want = 2 * self.k if i == j else 0
                if ip != want:
                    raise MoonframeError(
                        f"<f_{i}, f_{j}> = {ip}, expected {want}")
        return True

    def sublattice(self, lat):
        return IntegralLattice(self.vectors, lat.scale)

    @classmethod
    def from_text(cls, text):
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines or len(lines[0].split()) != 2 or lines[0].split()[0] != "k":
            raise ParseError("frame file must start with 'k <value>'")
        try:
            k = int(lines[0].split()[1])
            rows = [[int(x) for x in ln.split()] for ln in lines[1:]]
        except ValueError as exc:
            raise ParseError(f"bad integer in frame file: {exc}") from None
        return cls(rows, k)

    @classmethod
    def from_file(cls, path):
        with open(path, "r", encoding="ascii") as fh:
            return cls.from_text(fh.read())

    def to_text(self):
        out = [f"k {self.k}"]
        out += [" ".join(str(x) for x in row) for row in self.vectors]
        return "\n".join(out) + "\n"


def frame_to_code(lat, frame):
    """The code Lambda/N of a verified frame: lambda -> (<lambda, f_i> mod 2k)."""
    from .zkcode import ZkCode
    m = 2 * frame.k
    gens = []
    for b in lat.basis:
        word = []
        for f in frame.vectors:
            ip = lat.inner(b, f)
            if ip.denominator != 1:
                raise MoonframeError("non-integral inner product in frame map")
            word.append(int(ip) % m)
        gens.append(word)
    return ZkCode(gens, m, lat.dim)


def frame_search(lat, k, seed=0, budget_seconds=600.0, log=None,
                 lookahead=6, level_tries=24, backend=None):
    """Randomized backtracking search for a 2k-frame of the lattice.

    The full norm-2k layer is enumerated once (one vector per +- pair),
    then an orthogonal set is grown depth-first: the candidate pool is
    filtered by exact orthogonality at every level, candidate order is
    randomized, and among the next `lookahead` candidates the one keeping
    the largest pool is chosen.  Dead ends backtrack, capped at
    `level_tries` picks per level; an exhausted tree reshuffles and
    restarts.  Deterministic for a fixed seed; the wall-clock budget only
    bounds the failure case.
    """
    t0 = time.monotonic()
    n = lat.dim
    target = 2 * k
    pool0 = lat.vectors_of_norm(target, backend=backend, dtype=np.int16)
    if pool0.shape[0] == 0:
        raise MoonframeError(f"lattice has no vectors of norm {target}")
    pool0 = np.ascontiguousarray(pool0)

    rng = np.random.default_rng(seed)
    restarts = 0
    nodes = 0
    while True:
        if time.monotonic() - t0 > budget_seconds:
            raise BudgetExceededError(
                "frame search budget exhausted",
                {"restarts": restarts, "nodes": nodes,
                 "seconds": time.monotonic() - t0})
        pool0 = pool0[rng.permutation(pool0.shape[0])]
        pools = [pool0]
        ptrs = [0]
        chosen = []
        while pools:
            if time.monotonic() - t0 > budget_seconds:
                break
            pool = pools[-1]
            ptr = ptrs[-1]
            need = n - len(chosen)
            if ptr >= min(level_tries, pool.shape[0]) or pool.shape[0] < need:
                pools.pop()
                ptrs.pop()
                if chosen:
                    chosen.pop()
                continue
            # pick the candidate keeping the largest orthogonal pool
            best_t, best_sub = None, None
            upto = min(ptr + lookahead, pool.shape[0], level_tries)
            for t in range(ptr, upto):
                sub = pool[(pool @ pool[t].astype(np.int32)) == 0]
                if best_sub is None or sub.shape[0] > best_sub.shape[0]:
                    best_t, best_sub = t, sub
            nodes += 1
            ptrs[-1] = best_t + 1
            chosen.append(pool[best_t])
            if len(chosen) == n:
                frame = Frame([list(map(int, v)) for v in chosen], k)
                frame.verify(lat)
                if log:
                    log(f"frame found: restarts={restarts} nodes={nodes} "
                        f"elapsed={time.monotonic() - t0:.1f}s")
                return frame
            pools.append(best_sub)
            ptrs.append(0)
        restarts += 1
        if log:
            log(f"restart {restarts}: nodes={nodes} "
                f"elapsed={time.monotonic() - t0:.1f}s")
