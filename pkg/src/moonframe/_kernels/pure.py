"""Pure-Python kernels: reference twins of the compiled inner loops.

Both entry points match the signatures and exact outputs of the Cython
versions in ``_fast.pyx``; they are selected as a fallback at import time
and used directly in tests and benchmarks.
"""

import math

import numpy as np

BACKEND_NAME = "pure"


def swe_walk(pos, vplus, vminus, orders, act, word0, modulus, k, signed):
    """Walk a sub-box of the codeword space in mixed-radix Gray order.

    pos/vplus/vminus: per-generator nonzero coordinate positions and the
    values to add for a +1 / -1 digit step (lists of lists).  orders: the
    digit radices d_i (cyclic orders of the generators).  Digits 0..act-1
    are walked; the remaining digits are frozen inside word0, the starting
    codeword.  Every visited word updates a dense composition histogram
    keyed by sum n_c * (n+1)^(c-1) over residue classes c = 1..k, where
    n_c counts coordinates with minimal residue +-c.

    Returns (cnt, odd, visited, min_ewt):
      cnt:  int64 array of size (n+1)^k, counts per composition key
      odd:  int64 array of size (n+1)^k * n with per-coordinate odd-parity
            counts (all coordinates at once), or None when signed is False
      visited: number of codewords visited
      min_ewt: minimal Euclidean weight over visited nonzero words
               (a value > n*k*k when none was seen)
    """
    n = len(word0)
    m = modulus
    size = (n + 1) ** k
    cnt = np.zeros(size, dtype=np.int64)
    odd = np.zeros(size * n, dtype=np.int64) if signed else None

    cls = [min(v, m - v) for v in range(m)]
    wkey = [0] + [(n + 1) ** (c - 1) for c in range(1, k + 1)]
    keyof = [wkey[cls[v]] for v in range(m)]
    sqof = [cls[v] * cls[v] for v in range(m)]

    word = list(word0)
    key = sum(keyof[v] for v in word)
    ewt = sum(sqof[v] for v in word)
    parity = 0
    for j, v in enumerate(word):
        if v & 1:
            parity |= 1 << j
    min_ewt = n * k * k + 1
    visited = 0

    a = [0] * (act + 1)
    f = list(range(act + 2))
    o = [1] * (act + 1)

    while True:
        cnt[key] += 1
        visited += 1
        if key and ewt < min_ewt:
            min_ewt = ewt
        if signed and parity:
            p = parity
            base = key * n
            while p:
                b = p & -p
                odd[base + b.bit_length() - 1] += 1
                p ^= b
        j = f[0]
        f[0] = 0
        if j >= act:
            break
        aj = a[j] + o[j]
        a[j] = aj
        vals = vplus[j] if o[j] > 0 else vminus[j]
        for t, p in enumerate(pos[j]):
            w = word[p]
            nw = w + vals[t]
            if nw >= m:
                nw -= m
            word[p] = nw
            key += keyof[nw] - keyof[w]
            ewt += sqof[nw] - sqof[w]
            if (nw ^ w) & 1:
                parity ^= 1 << p
        if aj == 0 or aj == orders[j] - 1:
            o[j] = -o[j]
            f[j] = f[j + 1]
            f[j + 1] = j + 1

    return cnt, odd, visited, min_ewt


def fp_enumerate(gram, dvec, rmat, bound, collect_norm=-1, max_nodes=None,
                 max_collect=None):
    """Enumerate lattice vectors of scaled norm <= bound, up to sign.

    gram: exact integer Gram matrix (list of lists).  dvec/rmat: float64
    approximations of the exact rational LDL^T factors computed by the
    caller.  The float factors steer the search only: the admissible range
    at every level is widened by a slack that exceeds the worst-case
    rounding error by many orders of magnitude (see below), and every leaf
    is re-checked with exact integer arithmetic against `gram`, so the
    output is exactly {x != 0 : x^T gram x <= bound} up to sign.

    Pruning-bound analysis: every float quantity here is a sum of at most
    n=len(gram) products of LDL entries and integer coordinates.  With
    magnitudes at most ~2^40 the accumulated relative rounding error is
    below 2^-10 ulps ~ 1e-12 of the bound; the search uses the radius
    bound * (1 + 1e-9) + 1e-6 and additionally widens each integer range
    by one on both ends, so no admissible vector can be excluded.

    Returns (counts, vectors, nodes, complete):
      counts:  int64 array, counts[q] = number of vectors (both signs) of
               exact scaled norm q, 1 <= q <= bound
      vectors: int32 array (N x n) of coordinate rows with exact norm ==
               collect_norm, one per +-pair, or None
      nodes:   number of search-tree nodes visited
      complete: False when max_nodes was exhausted
    """
    n = len(gram)
    t_f = bound * (1.0 + 1e-9) + 1e-6
    counts = np.zeros(bound + 1, dtype=np.int64)
    collect = [] if collect_norm >= 0 else None

    x = [0] * n
    cvec = [0.0] * n
    rem = [0.0] * n
    lo = [0] * n
    hi = [0] * n
    nodes = 0
    limit = math.inf if max_nodes is None else max_nodes

    def ranges(i, budget):
        c = sum(rmat[i][j] * x[j] for j in range(i + 1, n))
        cvec[i] = c
        if budget < 0:
            return 1, 0
        s = math.sqrt(budget / dvec[i]) if dvec[i] > 0 else 0.0
        return math.ceil(-c - s) - 1, math.floor(-c + s) + 1

    level = n - 1
    rem[level] = t_f
    lo[level], hi[level] = ranges(level, t_f)
    lo[level] = max(lo[level], 0)  # half-space: outermost nonzero positive
    x[level] = lo[level] - 1
    only_zeros_above = [True] * (n + 1)

    complete = True
    while level < n:
        x[level] += 1
        if x[level] > hi[level]:
            level += 1
            continue
        nodes += 1
        if nodes > limit:
            complete = False
            break
        d = dvec[level]
        t = x[level] + cvec[level]
        budget = rem[level] - d * t * t
        if budget < -1e-6 * (bound + 1):
            # the term can only grow further out; once hopeless on the
            # widened bound, skip ahead
            continue
        if level == 0:
            q = 0
            for i2 in range(n):
                xi = x[i2]
                if xi:
                    row = gram[i2]
                    s2 = 0
                    for j2 in range(n):
                        if x[j2]:
                            s2 += row[j2] * x[j2]
                    q += xi * s2
            if 0 < q <= bound:
                counts[q] += 2
                if q == collect_norm and collect is not None:
                    if max_collect is not None and len(collect) >= max_collect:
                        complete = False
                        break
                    collect.append(list(x))
            continue
        level -= 1
        rem[level] = budget
        lo[level], hi[level] = ranges(level, budget)
        only_zeros_above[level] = (only_zeros_above[level + 1]
                                   and x[level + 1] == 0)
        if only_zeros_above[level]:
            lo[level] = max(lo[level], 0)
        x[level] = lo[level] - 1

    vectors = None
    if collect is not None:
        vectors = np.array(collect, dtype=np.int32) if collect else \
            np.zeros((0, n), dtype=np.int32)
    return counts, vectors, nodes, complete
