"""Pure NumPy implementations of the numerical hot paths.

This module is the fallback backend; `_fastcore` (Cython) implements the
same contracts. Both are dispatched through `_backend`. Keep the two in
algorithmic lockstep: tests assert cross-backend agreement to tight
tolerances, and the re-orthogonalized product must use identical
rescaling and sign conventions in both.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "gram_product_se",
    "se_chain",
    "se_chain_connected",
    "reorth_product",
    "connected_product",
]


def gram_product_se(points: np.ndarray, lengthscales: np.ndarray, variance: float) -> np.ndarray:
    """Gram matrix of the product squared-exp kernel.

    points is (N, D); lengthscales is (D,). Returns
    variance * exp(-sum_d (x_id - x_jd)^2 / (2 w_d^2)), exactly symmetric
    (outer differences are antisymmetric, squares symmetric).
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    n, d = pts.shape
    acc = np.zeros((n, n), dtype=np.float64)
    for k in range(d):
        diff = np.subtract.outer(pts[:, k], pts[:, k])
        np.square(diff, out=diff)
        diff *= 1.0 / (2.0 * lengthscales[k] * lengthscales[k])
        acc += diff
    np.negative(acc, out=acc)
    np.exp(acc, out=acc)
    if variance != 1.0:
        acc *= variance
    return acc


def se_chain(values: np.ndarray, depth: int) -> np.ndarray:
    """Apply the normalized SE composition k <- exp(k - 1) elementwise, depth times."""
    out = np.array(values, dtype=np.float64, copy=True)
    for _ in range(depth):
        out -= 1.0
        np.exp(out, out=out)
    return out


def se_chain_connected(values: np.ndarray, sq_dist: np.ndarray, depth: int) -> np.ndarray:
    """Input-connected composition k <- exp(k - 1 - r^2/2) elementwise, depth times.

    sq_dist holds the squared input distances r^2 (same shape as values,
    or broadcastable to it).
    """
    out = np.array(values, dtype=np.float64, copy=True)
    half_sq = 0.5 * np.asarray(sq_dist, dtype=np.float64)
    shift = 1.0 + half_sq
    for _ in range(depth):
        out -= shift
        np.exp(out, out=out)
    return out


def _fix_qr_signs(q: np.ndarray, r: np.ndarray) -> None:
    """Make diag(R) >= 0 in place; fixes the QR sign ambiguity deterministically."""
    sign = np.sign(np.diag(r))
    sign[sign == 0.0] = 1.0
    r *= sign[:, None]
    q *= sign[None, :]


def reorth_product(factors: np.ndarray, block: int = 10):
    """Stabilized product of square factors for singular-spectrum work.

    factors is (L, D, D); the product factors[L-1] @ ... @ factors[0] is
    accumulated with QR re-orthogonalization every `block` factors. The
    running orthogonal frame absorbs the rotation; the triangular part is
    accumulated separately with max-abs rescaling so its entries stay
    representable while the true magnitude lives in the returned log scale.

    Returns (tri, logscale): the product equals Q @ tri * exp(logscale)
    for some orthogonal Q, so the singular values of the product are
    svd(tri) * exp(logscale). Ratios s_i/s_1 below roughly machine epsilon
    are saturated by double-precision roundoff and not resolvable.
    """
    factors = np.asarray(factors, dtype=np.float64)
    length, d, d2 = factors.shape
    if d != d2:
        raise ValueError("reorth_product expects square factors")
    q = np.eye(d)
    tri = np.eye(d)
    logscale = 0.0
    pos = 0
    while pos < length:
        w = q
        stop = min(pos + block, length)
        for i in range(pos, stop):
            w = factors[i] @ w
        pos = stop
        q, r = np.linalg.qr(w)
        _fix_qr_signs(q, r)
        c1 = np.max(np.abs(r))
        if not np.isfinite(c1) or c1 == 0.0:
            from .errors import NumericsError

            raise NumericsError(
                f"matrix product degenerated at factor {pos} (scale {c1!r})"
            )
        r = r / c1
        tri = r @ tri
        c2 = np.max(np.abs(tri))
        tri = tri / c2
        logscale += np.log(c1) + np.log(c2)
    return tri, logscale


def connected_product(first: np.ndarray, rest: np.ndarray):
    """Input-connected Jacobian product with per-step rescaling.

    first is the (D, D_in) first-layer Jacobian; rest is (L-1, D, D + D_in),
    each factor multiplying the vertical stack of the running Jacobian and
    the D_in identity. Returns (jac, logscale) with the true Jacobian equal
    to jac * exp(logscale). The identity block enters at absolute scale, so
    once exp(logscale) exceeds about 1/eps its incremental contribution is
    below double-precision resolution (exactly as it would be in a naive
    unscaled computation).
    """
    jac = np.array(first, dtype=np.float64, copy=True)
    d, d_in = jac.shape
    eye = np.eye(d_in)
    logscale = 0.0
    c = np.max(np.abs(jac))
    if c > 0.0:
        jac /= c
        logscale += np.log(c)
    for factor in np.asarray(rest, dtype=np.float64):
        stack = np.vstack((jac, np.exp(-logscale) * eye))
        jac = factor @ stack
        c = np.max(np.abs(jac))
        if not np.isfinite(c) or c == 0.0:
            from .errors import NumericsError

            raise NumericsError(f"connected product degenerated (scale {c!r})")
        jac /= c
        logscale += np.log(c)
    return jac, logscale
