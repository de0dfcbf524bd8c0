# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: the two inner loops that dominate runtime.

Semantics, argument layout and return values match the pure-Python twins
in ``pure.py`` exactly; see that module for the full contracts, including
the pruning-bound analysis for the enumeration kernel.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport ceil, floor, sqrt

cnp.import_array()

BACKEND_NAME = "fast"


def swe_walk(pos, vplus, vminus, orders, int act, word0, int modulus, int k,
             bint signed):
    cdef int n = len(word0)
    cdef int m = modulus
    cdef int r = len(orders)
    if n > 63:
        raise ValueError("word length above 63 is not supported")

    cdef int maxnnz = max((len(p) for p in pos), default=0)
    cdef cnp.ndarray[cnp.int32_t, ndim=2] cpos = np.zeros((max(r, 1), max(maxnnz, 1)), dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=2] cvp = np.zeros_like(cpos)
    cdef cnp.ndarray[cnp.int32_t, ndim=2] cvm = np.zeros_like(cpos)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] cnnz = np.zeros(max(r, 1), dtype=np.int32)
    cdef int i, t
    for i in range(r):
        cnnz[i] = len(pos[i])
        for t in range(len(pos[i])):
            cpos[i, t] = pos[i][t]
            cvp[i, t] = vplus[i][t]
            cvm[i, t] = vminus[i][t]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cord = np.asarray(orders, dtype=np.int64)

    cdef long long size = (n + 1) ** k
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cnt = np.zeros(size, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] odd = np.zeros(size * n if signed else 1, dtype=np.int64)

    cdef cnp.ndarray[cnp.int64_t, ndim=1] keyof = np.zeros(m, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] sqof = np.zeros(m, dtype=np.int64)
    cdef int v, c
    for v in range(m):
        c = v if v <= m - v else m - v
        keyof[v] = 0 if c == 0 else (n + 1) ** (c - 1)
        sqof[v] = c * c

    cdef cnp.ndarray[cnp.int32_t, ndim=1] word = np.asarray(word0, dtype=np.int32).copy()
    cdef long long key = 0, ewt = 0
    cdef unsigned long long parity = 0
    for i in range(n):
        v = word[i]
        key += keyof[v]
        ewt += sqof[v]
        if v & 1:
            parity |= (<unsigned long long>1) << i

    cdef long long min_ewt = <long long>n * k * k + 1
    cdef long long visited = 0

    cdef cnp.ndarray[cnp.int32_t, ndim=1] a = np.zeros(act + 2, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] f = np.arange(act + 2, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] o = np.ones(act + 2, dtype=np.int32)

    cdef int j, p, w, nw, nz
    cdef long long base
    cdef unsigned long long pbits, lsb
    cdef int aj

    while True:
        cnt[key] += 1
        visited += 1
        if key != 0 and ewt < min_ewt:
            min_ewt = ewt
        if signed and parity:
            pbits = parity
            base = key * n
            while pbits:
                lsb = pbits & (~pbits + 1)
                j = 0
                while not (lsb & 1):
                    lsb >>= 1
                    j += 1
                odd[base + j] += 1
                pbits &= pbits - 1
        j = f[0]
        f[0] = 0
        if j >= act:
            break
        aj = a[j] + o[j]
        a[j] = aj
        nz = cnnz[j]
        if o[j] > 0:
            for t in range(nz):
                p = cpos[j, t]
                w = word[p]
                nw = w + cvp[j, t]
                if nw >= m:
                    nw -= m
                word[p] = nw
                key += keyof[nw] - keyof[w]
                ewt += sqof[nw] - sqof[w]
                if (nw ^ w) & 1:
                    parity ^= (<unsigned long long>1) << p
        else:
            for t in range(nz):
                p = cpos[j, t]
                w = word[p]
                nw = w + cvm[j, t]
                if nw >= m:
                    nw -= m
                word[p] = nw
                key += keyof[nw] - keyof[w]
                ewt += sqof[nw] - sqof[w]
                if (nw ^ w) & 1:
                    parity ^= (<unsigned long long>1) << p
        if aj == 0 or aj == cord[j] - 1:
            o[j] = -o[j]
            f[j] = f[j + 1]
            f[j + 1] = j + 1

    return cnt, (odd if signed else None), visited, min_ewt


def fp_enumerate(gram, dvec, rmat, long long bound, long long collect_norm=-1,
                 max_nodes=None, max_collect=None):
    cdef int n = len(gram)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] G = np.asarray(gram, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] d = np.asarray(dvec, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] R = np.asarray(rmat, dtype=np.float64)

    cdef double t_f = bound * (1.0 + 1e-9) + 1e-6
    cdef double neg_slack = -1e-6 * (bound + 1)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] counts = np.zeros(bound + 1, dtype=np.int64)

    cdef cnp.ndarray[cnp.int64_t, ndim=1] x = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cvec = np.zeros(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rem = np.zeros(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] lo = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] hi = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] zeros_above = np.ones(n + 1, dtype=np.int8)

    cdef long long nodes = 0
    cdef long long limit = max_nodes if max_nodes is not None else -1
    cdef long long cap = max_collect if max_collect is not None else -1

    cdef bint do_collect = collect_norm >= 0
    cdef cnp.ndarray[cnp.int32_t, ndim=2] buf = np.zeros(
        (1024 if do_collect else 1, n), dtype=np.int32)
    cdef long long nbuf = 0

    cdef int level, i2, j2
    cdef double cc, s, budget, dd, tt
    cdef long long q, s2, xi
    cdef bint complete = True

    level = n - 1
    rem[level] = t_f
    cc = 0.0
    cvec[level] = cc
    s = sqrt(t_f / d[level]) if d[level] > 0 else 0.0
    lo[level] = <long long>ceil(-cc - s) - 1
    hi[level] = <long long>floor(-cc + s) + 1
    if lo[level] < 0:
        lo[level] = 0
    x[level] = lo[level] - 1

    while level < n:
        x[level] += 1
        if x[level] > hi[level]:
            level += 1
            continue
        nodes += 1
        if limit >= 0 and nodes > limit:
            complete = False
            break
        dd = d[level]
        tt = x[level] + cvec[level]
        budget = rem[level] - dd * tt * tt
        if budget < neg_slack:
            continue
        if level == 0:
            q = 0
            for i2 in range(n):
                xi = x[i2]
                if xi != 0:
                    s2 = 0
                    for j2 in range(n):
                        if x[j2] != 0:
                            s2 += G[i2, j2] * x[j2]
                    q += xi * s2
            if 0 < q <= bound:
                counts[q] += 2
                if do_collect and q == collect_norm:
                    if cap >= 0 and nbuf >= cap:
                        complete = False
                        break
                    if nbuf == buf.shape[0]:
                        newbuf = np.zeros((buf.shape[0] * 2, n), dtype=np.int32)
                        newbuf[:nbuf] = buf
                        buf = newbuf
                    for j2 in range(n):
                        if x[j2] > 2147483647 or x[j2] < -2147483647:
                            raise OverflowError("coordinate exceeds int32")
                        buf[nbuf, j2] = <cnp.int32_t>x[j2]
                    nbuf += 1
            continue
        level -= 1
        rem[level] = budget
        cc = 0.0
        for j2 in range(level + 1, n):
            if x[j2] != 0:
                cc += R[level, j2] * x[j2]
        cvec[level] = cc
        if budget < 0:
            lo[level] = 1
            hi[level] = 0
        else:
            s = sqrt(budget / d[level]) if d[level] > 0 else 0.0
            lo[level] = <long long>ceil(-cc - s) - 1
            hi[level] = <long long>floor(-cc + s) + 1
        zeros_above[level] = zeros_above[level + 1] and x[level + 1] == 0
        if zeros_above[level] and lo[level] < 0:
            lo[level] = 0
        x[level] = lo[level] - 1

    vectors = None
    if do_collect:
        vectors = np.array(buf[:nbuf], dtype=np.int32, copy=True)
    return counts, vectors, nodes, complete
