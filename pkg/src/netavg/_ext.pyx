# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled counting and BDeu kernels.

Same contract as ``netavg._fallback``; ``netavg.kernels`` picks one at import.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport lgamma

cnp.import_array()


cdef Py_ssize_t _strides(const Py_ssize_t[:] cols, const Py_ssize_t[:] cards,
                         Py_ssize_t[:] out):
    # row-major: last column varies fastest
    cdef Py_ssize_t j, q = 1
    for j in range(cols.shape[0] - 1, -1, -1):
        out[j] = q
        q *= cards[cols[j]]
    return q


def config_index(const int[:, :] codes, cols, cards):
    """Joint configuration index of ``cols`` for every row (row-major)."""
    cdef Py_ssize_t[:] c = np.ascontiguousarray(cols, dtype=np.intp)
    cdef Py_ssize_t[:] r = np.ascontiguousarray(cards, dtype=np.intp)
    cdef Py_ssize_t n = codes.shape[0], m = c.shape[0], i, j, acc
    cdef Py_ssize_t[:] st = np.empty(m, dtype=np.intp)
    _strides(c, r, st)
    out = np.zeros(n, dtype=np.intp)
    cdef Py_ssize_t[:] o = out
    for i in range(n):
        acc = 0
        for j in range(m):
            acc += codes[i, c[j]] * st[j]
        o[i] = acc
    return out


def family_counts(const int[:, :] codes, Py_ssize_t child, parents, cards):
    """Counts of shape (parent configurations, child levels)."""
    cdef Py_ssize_t[:] pa = np.ascontiguousarray(parents, dtype=np.intp)
    cdef Py_ssize_t[:] r = np.ascontiguousarray(cards, dtype=np.intp)
    cdef Py_ssize_t n = codes.shape[0], m = pa.shape[0], i, j, acc
    cdef Py_ssize_t[:] st = np.empty(m, dtype=np.intp)
    cdef Py_ssize_t q = _strides(pa, r, st)
    cdef Py_ssize_t rc = r[child]
    out = np.zeros((q, rc), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] o = out
    for i in range(n):
        acc = 0
        for j in range(m):
            acc += codes[i, pa[j]] * st[j]
        o[acc, codes[i, child]] += 1
    return out


def cross_counts(const int[:, :] codes, Py_ssize_t x, Py_ssize_t y, z, cards):
    """Counts of shape (levels of x, levels of y, joint levels of z)."""
    cdef Py_ssize_t[:] zc = np.ascontiguousarray(z, dtype=np.intp)
    cdef Py_ssize_t[:] r = np.ascontiguousarray(cards, dtype=np.intp)
    cdef Py_ssize_t n = codes.shape[0], m = zc.shape[0], i, j, acc
    cdef Py_ssize_t[:] st = np.empty(m, dtype=np.intp)
    cdef Py_ssize_t q = _strides(zc, r, st)
    out = np.zeros((r[x], r[y], q), dtype=np.int64)
    cdef cnp.int64_t[:, :, ::1] o = out
    for i in range(n):
        acc = 0
        for j in range(m):
            acc += codes[i, zc[j]] * st[j]
        o[codes[i, x], codes[i, y], acc] += 1
    return out


def bdeu_from_counts(const cnp.int64_t[:, :] counts, double ess):
    """BDeu local log marginal likelihood of a (q, r) count table."""
    cdef Py_ssize_t q = counts.shape[0], rc = counts.shape[1], j, k
    cdef double a_j = ess / q
    cdef double a_jk = ess / (q * rc)
    cdef double lg_aj = lgamma(a_j), lg_ajk = lgamma(a_jk)
    cdef double total = 0.0, row
    cdef cnp.int64_t nj, c
    for j in range(q):
        nj = 0
        row = 0.0
        for k in range(rc):
            c = counts[j, k]
            if c > 0:
                nj += c
                row += lgamma(a_jk + c) - lg_ajk
        if nj > 0:
            total += lg_aj - lgamma(a_j + nj) + row
    return total


def bdeu_score(const int[:, :] codes, Py_ssize_t child, parents, cards, double ess):
    """Count a family and score it in one call."""
    return bdeu_from_counts(family_counts(codes, child, parents, cards), ess)
