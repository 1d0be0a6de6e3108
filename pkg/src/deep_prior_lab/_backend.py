"""Backend selection: compiled core when available, NumPy fallback otherwise.

The environment variable DEEP_PRIOR_LAB_BACKEND forces a choice ("cython"
or "python"); unset or "auto" prefers the compiled extension. Thread use
of the compiled Gram/chain kernels is capped by DEEP_PRIOR_LAB_THREADS
(0 or unset means automatic).

Both backends implement the same algorithms with the same rescaling and
sign conventions; results agree to rounding error, not bit-for-bit. The
compiled re-orthogonalized product uses a hand-rolled Householder QR that
beats LAPACK overheads only for small matrices, so it is engaged for
factor sizes up to QR_COMPILED_MAX_DIM and the fallback is used above.
"""

from __future__ import annotations

import os

import numpy as np

from . import _purepy

__all__ = [
    "backend_name",
    "thread_count",
    "gram_product_se",
    "se_chain",
    "se_chain_connected",
    "reorth_product",
    "connected_product",
    "QR_COMPILED_MAX_DIM",
]

QR_COMPILED_MAX_DIM = 32

_choice = os.environ.get("DEEP_PRIOR_LAB_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "cython", "python", ""):
    raise ValueError(
        f"DEEP_PRIOR_LAB_BACKEND must be 'auto', 'cython' or 'python', got {_choice!r}"
    )

_fastcore = None
if _choice in ("auto", "cython", ""):
    try:
        from . import _fastcore  # type: ignore[attr-defined]
    except ImportError:
        _fastcore = None
        if _choice == "cython":
            raise ImportError(
                "DEEP_PRIOR_LAB_BACKEND=cython but the compiled extension is "
                "not importable; rebuild the package or unset the variable"
            )


def backend_name() -> str:
    """'cython' when the compiled core is active, else 'python'."""
    return "cython" if _fastcore is not None else "python"


def thread_count() -> int:
    """Resolved thread cap for compiled kernels (>= 1)."""
    raw = os.environ.get("DEEP_PRIOR_LAB_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"DEEP_PRIOR_LAB_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise ValueError(f"DEEP_PRIOR_LAB_THREADS must be >= 0, got {n}")
    if n == 0:
        n = os.cpu_count() or 1
    return n


def gram_product_se(points, lengthscales, variance: float) -> np.ndarray:
    pts = np.ascontiguousarray(points, dtype=np.float64)
    ls = np.ascontiguousarray(lengthscales, dtype=np.float64)
    if _fastcore is not None:
        return _fastcore.gram_product_se(pts, ls, float(variance), thread_count())
    return _purepy.gram_product_se(pts, ls, float(variance))


def se_chain(values, depth: int) -> np.ndarray:
    vals = np.asarray(values, dtype=np.float64)
    if _fastcore is not None:
        flat = np.ascontiguousarray(vals.reshape(-1))
        return _fastcore.se_chain(flat, int(depth), thread_count()).reshape(vals.shape)
    return _purepy.se_chain(vals, int(depth))


def se_chain_connected(values, sq_dist, depth: int) -> np.ndarray:
    vals = np.asarray(values, dtype=np.float64)
    sq = np.broadcast_to(np.asarray(sq_dist, dtype=np.float64), vals.shape)
    if _fastcore is not None:
        flat = np.ascontiguousarray(vals.reshape(-1))
        sq_flat = np.ascontiguousarray(sq.reshape(-1))
        out = _fastcore.se_chain_connected(flat, sq_flat, int(depth), thread_count())
        return out.reshape(vals.shape)
    return _purepy.se_chain_connected(vals, sq, int(depth))


def reorth_product(factors, block: int = 10):
    facs = np.ascontiguousarray(factors, dtype=np.float64)
    if _fastcore is not None and facs.shape[1] <= QR_COMPILED_MAX_DIM:
        return _fastcore.reorth_product(facs, int(block))
    return _purepy.reorth_product(facs, block=int(block))


def connected_product(first, rest):
    return _purepy.connected_product(first, rest)
