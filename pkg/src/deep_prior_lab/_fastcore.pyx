# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled core: Gram assembly, composition chains, stabilized products.

Algorithmic twin of `_purepy`; both backends must apply identical
rescaling and sign conventions so results agree to rounding error.
The re-orthogonalized product here uses a hand-rolled Householder QR,
intended for small factor sizes (D <= 32); larger problems are routed
to the LAPACK-backed fallback by `_backend`.
"""

import numpy as np

cimport cython
from cython.parallel cimport prange
from libc.math cimport exp, fabs, log, sqrt


def gram_product_se(const double[:, ::1] points, const double[::1] lengthscales,
                    double variance, int num_threads):
    """Product-SE Gram matrix, upper triangle computed then mirrored."""
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double acc, diff
    out_arr = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double[::1] inv2w2 = np.empty(d, dtype=np.float64)
    for k in range(d):
        inv2w2[k] = 1.0 / (2.0 * lengthscales[k] * lengthscales[k])
    with nogil:
        for i in prange(n, schedule='static', num_threads=num_threads):
            out[i, i] = variance
            for j in range(i + 1, n):
                acc = 0.0
                for k in range(d):
                    diff = points[i, k] - points[j, k]
                    acc = acc + diff * diff * inv2w2[k]
                out[i, j] = variance * exp(-acc)
        for i in prange(n, schedule='static', num_threads=num_threads):
            for j in range(i + 1, n):
                out[j, i] = out[i, j]
    return out_arr


def se_chain(const double[::1] values, int depth, int num_threads):
    """k <- exp(k - 1), applied depth times to a flat copy of values."""
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t i
    cdef int step
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double v
    with nogil:
        for i in prange(n, schedule='static', num_threads=num_threads):
            v = values[i]
            for step in range(depth):
                v = exp(v - 1.0)
            out[i] = v
    return out_arr


def se_chain_connected(const double[::1] values, const double[::1] sq_dist,
                       int depth, int num_threads):
    """k <- exp(k - 1 - r^2/2), applied depth times elementwise."""
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t i
    cdef int step
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double v, shift
    with nogil:
        for i in prange(n, schedule='static', num_threads=num_threads):
            shift = 1.0 + 0.5 * sq_dist[i]
            v = values[i]
            for step in range(depth):
                v = exp(v - shift)
            out[i] = v
    return out_arr


cdef void _matmul(const double[:, ::1] a, double[:, ::1] b, double[:, ::1] out,
                  Py_ssize_t n) noexcept:
    cdef Py_ssize_t i, j, k
    cdef double acc
    for i in range(n):
        for j in range(n):
            acc = 0.0
            for k in range(n):
                acc += a[i, k] * b[k, j]
            out[i, j] = acc


cdef void _householder_qr(double[:, ::1] r, double[:, ::1] q, double[::1] v,
                          double[::1] work, Py_ssize_t n) noexcept:
    """In-place QR: on entry r holds W and q is overwritten with Q.

    On exit W = Q @ R with diag(R) >= 0 (sign-normalized, matching the
    pure backend's convention).
    """
    cdef Py_ssize_t i, j, k
    cdef double norm, alpha, tau, dot, sign
    for i in range(n):
        for j in range(n):
            q[i, j] = 1.0 if i == j else 0.0
    for k in range(n):
        norm = 0.0
        for i in range(k, n):
            norm += r[i, k] * r[i, k]
        norm = sqrt(norm)
        if norm == 0.0:
            continue
        alpha = -norm if r[k, k] >= 0.0 else norm
        for i in range(k, n):
            v[i] = r[i, k]
        v[k] -= alpha
        dot = 0.0
        for i in range(k, n):
            dot += v[i] * v[i]
        if dot == 0.0:
            continue
        tau = 2.0 / dot
        # R rows k.. get the reflection; column k becomes (alpha, 0, ...).
        for j in range(k, n):
            dot = 0.0
            for i in range(k, n):
                dot += v[i] * r[i, j]
            work[j] = tau * dot
        for i in range(k, n):
            for j in range(k, n):
                r[i, j] -= v[i] * work[j]
        r[k, k] = alpha
        for i in range(k + 1, n):
            r[i, k] = 0.0
        # Q <- Q H_k (right multiplication accumulates Q = H_1 ... H_m).
        for i in range(n):
            dot = 0.0
            for j in range(k, n):
                dot += q[i, j] * v[j]
            work[i] = tau * dot
        for i in range(n):
            for j in range(k, n):
                q[i, j] -= work[i] * v[j]
    for k in range(n):
        if r[k, k] < 0.0:
            for j in range(k, n):
                r[k, j] = -r[k, j]
            for i in range(n):
                q[i, k] = -q[i, k]


def reorth_product(const double[:, :, ::1] factors, int block):
    """Stabilized product of square factors; see the fallback's docstring.

    Returns (tri, logscale) with product = Q @ tri * exp(logscale).
    """
    cdef Py_ssize_t length = factors.shape[0]
    cdef Py_ssize_t n = factors.shape[1]
    cdef Py_ssize_t pos = 0, stop, i, j, k
    cdef double c1, c2, acc, logscale = 0.0
    if factors.shape[2] != n:
        raise ValueError("reorth_product expects square factors")
    q_arr = np.eye(n)
    tri_arr = np.eye(n)
    w_arr = np.empty((n, n))
    tmp_arr = np.empty((n, n))
    v_arr = np.empty(n)
    work_arr = np.empty(n)
    cdef double[:, ::1] q = q_arr
    cdef double[:, ::1] tri = tri_arr
    cdef double[:, ::1] w = w_arr
    cdef double[:, ::1] tmp = tmp_arr
    cdef double[::1] v = v_arr
    cdef double[::1] work = work_arr
    cdef double[:, ::1] swap
    while pos < length:
        stop = pos + block
        if stop > length:
            stop = length
        # w <- (F_{stop-1} ... F_{pos}) @ q
        for i in range(n):
            for j in range(n):
                w[i, j] = q[i, j]
        for k in range(pos, stop):
            _matmul(factors[k], w, tmp, n)
            swap = w
            w = tmp
            tmp = swap
        pos = stop
        # QR in place: w becomes R, q becomes the new frame.
        _householder_qr(w, q, v, work, n)
        c1 = 0.0
        for i in range(n):
            for j in range(i, n):
                if fabs(w[i, j]) > c1:
                    c1 = fabs(w[i, j])
        if c1 == 0.0 or c1 != c1:
            from .errors import NumericsError
            raise NumericsError(
                f"matrix product degenerated at factor {pos} (scale {c1!r})")
        # tri <- (w / c1) @ tri, both upper triangular.
        for i in range(n):
            for j in range(i, n):
                acc = 0.0
                for k in range(i, j + 1):
                    acc += w[i, k] * tri[k, j]
                tmp[i, j] = acc / c1
        c2 = 0.0
        for i in range(n):
            for j in range(i, n):
                if fabs(tmp[i, j]) > c2:
                    c2 = fabs(tmp[i, j])
        for i in range(n):
            for j in range(n):
                tri[i, j] = tmp[i, j] / c2 if j >= i else 0.0
        logscale += log(c1) + log(c2)
    out = np.empty((n, n))
    cdef double[:, ::1] out_mv = out
    for i in range(n):
        for j in range(n):
            out_mv[i, j] = tri[i, j]
    return out, logscale
