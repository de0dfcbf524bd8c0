"""Linear codes over Z_2k: canonical forms, duals, weights, enumeration.

Codes are held in Howell canonical form, which is span-canonical over the
residue ring (two generator sets with the same row span produce the same
matrix), so equality, membership, and cardinality are all cheap.  The
symmetrized weight enumerator is computed by streaming over all codewords
with a mixed-radix Gray walk (one generator increment per step) and is
never materialized as a codeword list.
"""

import math
import os
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import intmat
from ._kernels import get_backend
from .errors import BudgetExceededError, ParseError

# -- arithmetic helpers -------------------------------------------------------


def xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def unit_for(a, m):
    """A unit u mod m with u*a == gcd(a, m) (mod m)."""
    a %= m
    if a == 0:
        return 1
    g = math.gcd(a, m)
    b = a // g
    m2 = m // g
    u = pow(b, -1, m2) if m2 > 1 else 1
    while math.gcd(u, m) != 1:
        u += m2
    return u % m


def min_residue(v, m):
    """The representative of v in (-m/2, m/2]."""
    v %= m
    return v if v <= m // 2 else v - m


def euclidean_weight(word, m):
    """Sum of squared minimal residues."""
    return sum(min_residue(v, m) ** 2 for v in word)


def residue_class(v, m):
    """|minimal residue|, in 0..m/2."""
    v %= m
    return min(v, m - v)


# -- Howell canonical form ----------------------------------------------------


def howell_form(rows, m, length=None):
    """Howell canonical form of the row span of `rows` over Z_m.

    Every generator set with the same span yields the identical matrix:
    pivots are divisors of m in strictly increasing column positions,
    entries above a pivot are reduced below it, and the span is closed
    under the annihilator rows (m/pivot times each row), which is what
    distinguishes the Howell form from a mere echelon form over Z_m.
    """
    if length is None:
        if not rows:
            raise ValueError("need explicit length for an empty generator set")
        length = len(rows[0])
    a = [[x % m for x in row] for row in rows]
    a = [row for row in a if any(row)]
    r = 0
    for col in range(length):
        piv_row = None
        for i in range(r, len(a)):
            if a[i][col]:
                piv_row = i
                break
        if piv_row is None:
            continue
        a[r], a[piv_row] = a[piv_row], a[r]
        for i in range(r + 1, len(a)):
            if a[i][col]:
                x, y = a[r][col], a[i][col]
                g, s, t = xgcd(x, y)
                u, v = -(y // g), x // g
                top = [(s * p + t * q) % m for p, q in zip(a[r], a[i])]
                bot = [(u * p + v * q) % m for p, q in zip(a[r], a[i])]
                a[r], a[i] = top, bot
        u = unit_for(a[r][col], m)
        if u != 1:
            a[r] = [(u * x) % m for x in a[r]]
        piv = a[r][col]
        ann = m // math.gcd(piv, m)
        extra = [(ann * x) % m for x in a[r]]
        if any(extra):
            a.append(extra)
        r += 1
    a = [row for row in a[:r] if any(row)]
    # reduce entries above each pivot
    for i, row in enumerate(a):
        col = next(j for j, x in enumerate(row) if x)
        piv = row[col]
        for i2 in range(i):
            q = a[i2][col] // piv
            if q:
                a[i2] = [(x - q * y) % m for x, y in zip(a[i2], row)]
    return [tuple(row) for row in a]


@dataclass(frozen=True)
class TypeIIReport:
    self_orthogonal: bool
    self_dual: bool
    type_ii: bool
    witness: dict


class ZkCode:
    """A linear code over Z_2k in Howell canonical form."""

    __slots__ = ("modulus", "length", "gens", "card", "_pivots")

    def __init__(self, rows, modulus, length=None):
        if modulus < 4 or modulus % 2:
            raise ValueError("modulus must be an even integer >= 4")
        gens = howell_form(rows, modulus, length)
        if length is None:
            length = len(rows[0])
        pivots = []
        card = 1
        for row in gens:
            col = next(j for j, x in enumerate(row) if x)
            pivots.append((col, row[col]))
            card *= modulus // math.gcd(row[col], modulus)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "length", length)
        object.__setattr__(self, "gens", tuple(gens))
        object.__setattr__(self, "card", card)
        object.__setattr__(self, "_pivots", tuple(pivots))

    def __setattr__(self, *_):
        raise AttributeError("ZkCode is immutable")

    @property
    def k(self):
        return self.modulus // 2

    def __eq__(self, other):
        return (isinstance(other, ZkCode) and self.modulus == other.modulus
                and self.length == other.length and self.gens == other.gens)

    def __hash__(self):
        return hash((self.modulus, self.length, self.gens))

    def __repr__(self):
        return (f"ZkCode(length={self.length}, modulus={self.modulus}, "
                f"card={self.card})")

    def reduce(self, word):
        """Residue of `word` modulo the code (zero iff member)."""
        m = self.modulus
        v = [x % m for x in word]
        for row, (col, piv) in zip(self.gens, self._pivots):
            q = v[col] // piv
            if q:
                v = [(x - q * y) % m for x, y in zip(v, row)]
        return v

    def contains(self, word):
        return not any(self.reduce(word))

    def words(self):
        """Iterate all codewords (use only for small codes)."""
        orders = [self.modulus // math.gcd(p, self.modulus)
                  for _, p in self._pivots]
        idx = [0] * len(orders)
        while True:
            w = [0] * self.length
            for c, row in zip(idx, self.gens):
                if c:
                    w = [(x + c * y) % self.modulus for x, y in zip(w, row)]
            yield tuple(w)
            i = 0
            while i < len(orders):
                idx[i] += 1
                if idx[i] < orders[i]:
                    break
                idx[i] = 0
                i += 1
            else:
                break

    def dual(self):
        """The dual code under the standard inner product mod 2k."""
        m, n = self.modulus, self.length
        r = len(self.gens)
        if r == 0:
            return ZkCode([[1 if i == j else 0 for j in range(n)]
                           for i in range(n)], m, n)
        stacked = [[self.gens[j][i] for j in range(r)] for i in range(n)]
        stacked += [[m if i == j else 0 for j in range(r)] for i in range(r)]
        kernel = intmat.left_kernel(stacked)
        rows = [row[:n] for row in kernel]
        return ZkCode(rows, m, n)

    # -- file format: line 1 "n modulus", then generator rows ---------------

    @classmethod
    def from_text(cls, text):
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise ParseError("empty code file")
        head = lines[0].split()
        if len(head) != 2:
            raise ParseError("header must be 'length modulus'")
        try:
            n, m = int(head[0]), int(head[1])
            rows = [[int(x) for x in ln.split()] for ln in lines[1:]]
        except ValueError as exc:
            raise ParseError(f"bad integer in code file: {exc}") from None
        for row in rows:
            if len(row) != n:
                raise ParseError(f"row of length {len(row)}, expected {n}")
        try:
            return cls(rows, m, n)
        except ValueError as exc:
            raise ParseError(str(exc)) from None

    @classmethod
    def from_file(cls, path):
        with open(path, "r", encoding="ascii") as fh:
            return cls.from_text(fh.read())

    def to_text(self):
        out = [f"{self.length} {self.modulus}"]
        out += [" ".join(str(x) for x in row) for row in self.gens]
        return "\n".join(out) + "\n"


def verify_type_ii(code):
    """Self-orthogonality, self-duality and the Type II property.

    The Type II verdict is decided from generators alone: over a
    self-orthogonal code, Ewt(x+y) = Ewt(x) + Ewt(y) + 2<x,y> (mod 4k),
    because minimal residues of x+y differ from the sums of minimal
    residues by multiples of 2k whose cross terms are even.  Hence all
    codewords have Euclidean weight divisible by 4k as soon as all
    generators do.
    """
    m = code.modulus
    witness = {}
    self_orth = True
    for i, gi in enumerate(code.gens):
        for j in range(i, len(code.gens)):
            ip = sum(x * y for x, y in zip(gi, code.gens[j])) % m
            if ip:
                self_orth = False
                witness = {"kind": "inner_product", "rows": (i, j),
                           "value": ip}
                break
        if not self_orth:
            break
    self_dual = self_orth and code.card ** 2 == m ** code.length
    type_ii = self_dual
    if self_dual:
        for i, g in enumerate(code.gens):
            w = euclidean_weight(g, m)
            if w % (2 * m):
                type_ii = False
                witness = {"kind": "generator_weight", "row": i, "ewt": w}
                break
    return TypeIIReport(self_orth, self_dual, type_ii, witness)


# -- binary codes -------------------------------------------------------------


class BinaryCode:
    """A binary linear code, rows kept as bitmasks in reduced echelon form."""

    __slots__ = ("n", "masks")

    def __init__(self, masks, n):
        basis = []
        for r in masks:
            for b in basis:
                r = min(r, r ^ b)
            if r:
                basis.append(r)
                basis.sort(reverse=True)
        # back-reduce for a canonical reduced form
        for i in range(len(basis)):
            lead = 1 << (basis[i].bit_length() - 1)
            for j in range(len(basis)):
                if j != i and basis[j] & lead:
                    basis[j] ^= basis[i]
        basis.sort(reverse=True)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "masks", tuple(basis))

    def __setattr__(self, *_):
        raise AttributeError("BinaryCode is immutable")

    @classmethod
    def from_rows(cls, rows):
        n = len(rows[0])
        masks = [sum(1 << i for i, x in enumerate(row) if x % 2) for row in rows]
        return cls(masks, n)

    @property
    def dim(self):
        return len(self.masks)

    def __eq__(self, other):
        return (isinstance(other, BinaryCode) and self.n == other.n
                and self.masks == other.masks)

    def __hash__(self):
        return hash((self.n, self.masks))

    def words(self):
        for bits in range(1 << self.dim):
            w = 0
            b = bits
            i = 0
            while b:
                if b & 1:
                    w ^= self.masks[i]
                b >>= 1
                i += 1
            yield w

    def contains(self, mask):
        for b in self.masks:
            mask = min(mask, mask ^ b)
        return mask == 0

    def dual(self):
        """Kernel of the generator matrix over GF(2), column-reduced."""
        basis = []
        pivots = {}  # pivot bit -> (syndrome, combination)
        for j in range(self.n):
            v = sum(((row >> j) & 1) << i for i, row in enumerate(self.masks))
            c = 1 << j
            while v:
                t = v.bit_length() - 1
                if t not in pivots:
                    pivots[t] = (v, c)
                    break
                vp, cp = pivots[t]
                v ^= vp
                c ^= cp
            if not v:
                basis.append(c)
        return BinaryCode(basis, self.n)

    def weight_distribution(self):
        dist = [0] * (self.n + 1)
        for w in self.words():
            dist[bin(w).count("1")] += 1
        return dist

    def min_weight(self):
        best = None
        for w in self.words():
            if w:
                c = bin(w).count("1")
                if best is None or c < best:
                    best = c
        return best

    def is_self_orthogonal(self):
        for i, a in enumerate(self.masks):
            for b in self.masks[i:]:
                if bin(a & b).count("1") % 2:
                    return False
        return True

    def is_doubly_even(self):
        # weights divisible by 4 propagate from a generator set when the
        # code is self-orthogonal: wt(x+y) = wt(x)+wt(y)-2|x&y|
        if not self.is_self_orthogonal():
            return all(bin(w).count("1") % 4 == 0 for w in self.words())
        return all(bin(g).count("1") % 4 == 0 for g in self.masks)

    def is_type_ii(self):
        """Binary Type II: self-dual with all weights divisible by 4."""
        return (2 * self.dim == self.n and self.is_self_orthogonal()
                and self.is_doubly_even())


# -- symmetrized weight enumerator --------------------------------------------


@dataclass(frozen=True)
class SweHistogram:
    """Codeword counts by residue-type composition (n_0, ..., n_k)."""

    modulus: int
    length: int
    counts: dict

    def total(self):
        return sum(self.counts.values())

    def min_euclidean_weight(self):
        """Minimal Ewt over nonzero codewords, from compositions."""
        k = self.modulus // 2
        best = None
        zero = (self.length,) + (0,) * k
        for comp, cnt in self.counts.items():
            if comp == zero or not cnt:
                continue
            w = sum(c * c * n for c, n in enumerate(comp))
            if best is None or w < best:
                best = w
        return best

    def evaluate(self, values):
        """Sum of count * prod_c values[c]^(n_c) over all compositions.

        values[0..k] live in any commutative ring with int scalars; shared
        prefix products are cached so series arithmetic is done once per
        distinct partial composition, not once per codeword.
        """
        k = self.modulus // 2
        pows = [{0: 1} for _ in range(k + 1)]

        def power(c, e):
            tab = pows[c]
            if e not in tab:
                tab[e] = power(c, e - 1) * values[c]
            return tab[e]

        comps = sorted(self.counts, key=lambda t: t[::-1])
        total = 0
        stack = [1] * (k + 2)  # stack[j] = product over classes >= j
        prev = None
        for comp in comps:
            start = k
            if prev is not None:
                while start >= 0 and comp[start] == prev[start]:
                    start -= 1
            # recompute products for classes start..0
            for c in range(start, -1, -1):
                stack[c] = stack[c + 1] * power(c, comp[c])
            total = total + self.counts[comp] * stack[0]
            prev = comp
        return total

    def compositions_and_products(self, values):
        """Yield (composition, count, prod_c values[c]^(n_c))."""
        k = self.modulus // 2
        pows = [{0: 1} for _ in range(k + 1)]

        def power(c, e):
            tab = pows[c]
            if e not in tab:
                tab[e] = power(c, e - 1) * values[c]
            return tab[e]

        comps = sorted(self.counts, key=lambda t: t[::-1])
        stack = [1] * (k + 2)
        prev = None
        for comp in comps:
            start = k
            if prev is not None:
                while start >= 0 and comp[start] == prev[start]:
                    start -= 1
            for c in range(start, -1, -1):
                stack[c] = stack[c + 1] * power(c, comp[c])
            yield comp, self.counts[comp], stack[0]
            prev = comp


@dataclass(frozen=True)
class SweData:
    """Full enumeration result: histogram plus optional per-coordinate data.

    odd_counts maps composition -> tuple of length n whose i-th entry is
    the number of codewords in that composition class whose i-th
    coordinate is odd; from it the signed weight enumerator for any
    coordinate follows without re-enumeration.
    """

    histogram: SweHistogram
    odd_counts: dict
    min_ewt: int
    words: int

    def signed_histograms(self, i):
        """(even, odd) histograms split by the parity of coordinate i."""
        if self.odd_counts is None:
            raise ValueError("enumeration ran without signed data")
        even = {}
        odd = {}
        for comp, cnt in self.histogram.counts.items():
            o = self.odd_counts.get(comp, (0,) * self.histogram.length)[i]
            if cnt - o:
                even[comp] = cnt - o
            if o:
                odd[comp] = o
        m, n = self.histogram.modulus, self.histogram.length
        return (SweHistogram(m, n, even), SweHistogram(m, n, odd))


def _enumeration_layout(code):
    """Rows sorted for the Gray walk (fewest nonzeros walk fastest)."""
    m = code.modulus
    rows = []
    for row, (_, piv) in zip(code.gens, code._pivots):
        order = m // math.gcd(piv, m)
        nz = [(i, v) for i, v in enumerate(row) if v]
        rows.append((len(nz), nz, order, row))
    rows.sort(key=lambda t: (t[0], t[3]))
    pos = [[i for i, _ in nz] for _, nz, _, _ in rows]
    vplus = [[v for _, v in nz] for _, nz, _, _ in rows]
    vminus = [[m - v for _, v in nz] for _, nz, _, _ in rows]
    orders = [order for _, _, order, _ in rows]
    plain = [row for _, _, _, row in rows]
    return pos, vplus, vminus, orders, plain


def _chunk_prefixes(orders, target_chunks):
    """Split the digit box by freezing trailing digits."""
    fixed = 0
    total = 1
    while fixed < len(orders) - 1 and total < target_chunks:
        total *= orders[len(orders) - 1 - fixed]
        fixed += 1
    acts = len(orders) - fixed
    prefixes = [[]]
    for d in orders[acts:]:
        prefixes = [p + [v] for p in prefixes for v in range(d)]
    return acts, prefixes


def _run_chunk(args):
    (backend_name, pos, vplus, vminus, orders, act, word0, m, k, signed) = args
    backend = get_backend(backend_name)
    return backend.swe_walk(pos, vplus, vminus, orders, act, word0, m, k,
                            signed)


def enumerate_swe(code, signed=False, workers=1, budget_seconds=None,
                  backend=None, min_chunks=None, progress=None):
    """Stream all codewords and histogram them by residue composition.

    signed=True additionally collects, per composition, the number of
    words with odd i-th coordinate for every coordinate i at once.  The
    walk is split into chunks by freezing trailing digits of the
    information-set box; chunks merge associatively, run on worker
    processes when workers > 1, and the wall-clock budget is checked
    between chunks.
    """
    m, n, k = code.modulus, code.length, code.modulus // 2
    if (n + 1) ** k > 1 << 24:
        raise ValueError("composition histogram too large for this modulus")
    pos, vplus, vminus, orders, plain = _enumeration_layout(code)
    if min_chunks is None:
        min_chunks = max(workers * 8, 16) if code.card > 1 << 22 else 1
    act, prefixes = _chunk_prefixes(orders, min_chunks)
    backend_name = backend or get_backend().BACKEND_NAME

    jobs = []
    for pref in prefixes:
        word0 = [0] * n
        for v, row in zip(pref, plain[act:]):
            if v:
                word0 = [(x + v * y) % m for x, y in zip(word0, row)]
        jobs.append((backend_name, pos[:act], vplus[:act], vminus[:act],
                     orders[:act], act, word0, m, k, signed))

    size = (n + 1) ** k
    cnt = np.zeros(size, dtype=np.int64)
    odd = np.zeros(size * n, dtype=np.int64) if signed else None
    words = 0
    min_ewt = n * k * k + 1
    t0 = time.monotonic()
    deadline = None if budget_seconds is None else t0 + budget_seconds

    def merge(result):
        nonlocal words, min_ewt
        ccnt, codd, visited, mewt = result
        cnt[:] += ccnt
        if signed:
            odd[:] += codd
        words += visited
        min_ewt = min(min_ewt, mewt)

    if workers > 1 and len(jobs) > 1:
        import multiprocessing as mp
        ctx = mp.get_context("fork")
        with ctx.Pool(workers) as pool:
            for res in pool.imap_unordered(_run_chunk, jobs):
                merge(res)
                if progress:
                    progress(words, code.card)
                if deadline and time.monotonic() > deadline:
                    pool.terminate()
                    raise BudgetExceededError(
                        "swe enumeration budget exhausted",
                        {"words_done": words, "total": code.card,
                         "partial_min_ewt": min_ewt})
    else:
        for job in jobs:
            merge(_run_chunk(job))
            if progress:
                progress(words, code.card)
            if deadline and time.monotonic() > deadline:
                raise BudgetExceededError(
                    "swe enumeration budget exhausted",
                    {"words_done": words, "total": code.card,
                     "partial_min_ewt": min_ewt})

    if words != code.card:
        raise AssertionError("enumeration word count disagrees with |C|")

    counts = {}
    odd_map = {} if signed else None
    base = n + 1
    for key in np.nonzero(cnt)[0]:
        rest = int(key)
        comp = []
        for _ in range(k):
            comp.append(rest % base)
            rest //= base
        n0 = n - sum(comp)
        comp = (n0,) + tuple(comp)
        counts[comp] = int(cnt[key])
        if signed:
            row = odd[int(key) * n:(int(key) + 1) * n]
            odd_map[comp] = tuple(int(x) for x in row)
    hist = SweHistogram(m, n, counts)
    return SweData(hist, odd_map, int(min_ewt), words)


# -- C2 analysis ---------------------------------------------------------------


@dataclass(frozen=True)
class C2Analysis:
    c2: BinaryCode
    m: int
    c2_dual: BinaryCode
    all_ones_in_c2: bool
    c2_type_ii: bool
    c2_words_mod2: tuple


def c2_analysis(code):
    """The binary subcode {c in C : all entries divisible by k} and friends.

    C2 is computed as (C + 2 Z_2k^n)^perp inside Z_2k^n, which equals
    C intersect {0, k}^n for self-dual C; entries k map to binary 1.
    """
    m, n, k = code.modulus, code.length, code.modulus // 2
    doubles = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    big = ZkCode(list(code.gens) + doubles, m, n)
    c2_zk = big.dual()
    for row in c2_zk.gens:
        if any(v % k for v in row):
            raise AssertionError("C2 extraction produced entries not in {0,k}")
    binary = BinaryCode.from_rows([[v // k for v in row] for row in c2_zk.gens]) \
        if c2_zk.gens else BinaryCode([], n)
    all_ones = code.contains([k] * n)
    type_ii = binary.is_type_ii()
    words = tuple(binary.words())
    return C2Analysis(binary, binary.dim, binary.dual(), all_ones, type_ii,
                      words)
