"""Kernel composition: closed form, repeated chains, and the fixed point.

Composing a unit squared-exp layer with feature maps whose covariance is k
has the closed form

    (se o k)(x, x') = exp(-1/2 [k(x,x) - 2 k(x,x') + k(x',x')]),

the bracket being the squared feature distance. Repeated composition of
normalized stationary kernels drives every off-diagonal value to 1 (the
degenerate constant limit, error falling like 2/depth). Re-attaching the
original input at each layer adds ||x - x'||^2 to the bracket and the
chain instead converges to the root of k - log k = 1 + r^2/2, a strictly
positive stationary kernel with lighter-than-exponential tails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from ._fixed_point import fixed_point_from_r
from .errors import NumericsError
from .kernels import KernelSpec, eval_kernel

__all__ = [
    "ComposedKernelChain",
    "FixedPointQuery",
    "compose_se",
    "deep_kernel_chain",
    "input_connected_deep_kernel",
    "fixed_point_kernel",
    "alternative_architecture_limit",
]

_NEG_DIST_TOL = -1e-12


@dataclass(frozen=True)
class ComposedKernelChain:
    """A base kernel with `depth` unit-SE compositions stacked on top.

    depth counts compositions applied to the base (depth 0 is the base
    kernel itself). The base must be normalized, k(x, x) = 1, which the
    degeneracy analysis assumes throughout.
    """

    base: KernelSpec
    depth: int
    input_connected: bool = False

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError(f"depth must be >= 0, got {self.depth}")
        if self.base.variance != 1.0:
            raise ValueError(
                f"chain base must be normalized (variance = 1), got {self.base.variance}"
            )


@dataclass(frozen=True)
class FixedPointQuery:
    """Distance and convergence control for the infinite-depth kernel."""

    r: float
    tol: float = 1e-12
    max_iter: int = 200

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r >= 0.0):
            raise ValueError(f"r must be a nonnegative finite real, got {self.r}")
        if self.tol <= 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


def compose_se(k_xx: float, k_xxp: float, k_xpxp: float) -> float:
    """One unit-SE composition from three kernel evaluations.

    The implied squared feature distance k_xx - 2 k_xxp + k_xpxp must be
    nonnegative up to rounding; values in [-1e-12, 0) are clamped to 0,
    anything lower signals an invalid base kernel and raises.
    """
    for name, v in (("k_xx", k_xx), ("k_xxp", k_xxp), ("k_xpxp", k_xpxp)):
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v!r}")
    if k_xx < 0.0 or k_xpxp < 0.0:
        raise ValueError(f"diagonal kernel values must be >= 0, got ({k_xx}, {k_xpxp})")
    sq_dist = k_xx - 2.0 * k_xxp + k_xpxp
    if sq_dist < _NEG_DIST_TOL:
        raise NumericsError(
            f"implied squared feature distance {sq_dist:.3e} is negative beyond "
            "tolerance; the base kernel is not a valid covariance"
        )
    return math.exp(-0.5 * max(0.0, sq_dist))


def deep_kernel_chain(chain: ComposedKernelChain, x, xp) -> float:
    """k after chain.depth standard compositions of the normalized base.

    For normalized stationary bases the diagonal stays exactly 1 at every
    level, so the recurrence reduces to k <- exp(k - 1) elementwise.
    """
    if chain.input_connected:
        raise ValueError("deep_kernel_chain is the standard chain; "
                         "use input_connected_deep_kernel for connected chains")
    k0 = eval_kernel(chain.base, x, xp)
    out = _backend.se_chain(np.asarray(k0, dtype=np.float64), chain.depth)
    return float(out)


def input_connected_deep_kernel(chain: ComposedKernelChain, x, xp) -> float:
    """k after chain.depth input-connected compositions.

    Each level sees the previous feature vector concatenated with the raw
    input, adding ||x - x'||^2 to the squared feature distance:
    k <- exp(k - 1 - ||x - x'||^2 / 2) for normalized bases.
    """
    if not chain.input_connected:
        raise ValueError("chain is not marked input_connected")
    k0 = eval_kernel(chain.base, x, xp)
    a = np.asarray(x, dtype=np.float64).reshape(-1)
    b = np.asarray(xp, dtype=np.float64).reshape(-1)
    sq = float(np.sum((a - b) ** 2))
    out = _backend.se_chain_connected(
        np.asarray(k0, dtype=np.float64), np.asarray(sq, dtype=np.float64), chain.depth
    )
    return float(out)


def fixed_point_kernel(q: FixedPointQuery) -> float:
    """Infinite-depth input-connected kernel value at distance q.r.

    The unique k in (0, 1] with k - log k = 1 + r^2/2, converged until the
    residual drops below q.tol (Halley iteration with bisection fallback;
    raises NumericsError with the final residual on non-convergence).
    """
    return float(fixed_point_from_r(q.r, tol=q.tol, max_iter=q.max_iter))


def alternative_architecture_limit(arch: str, x, xp) -> float:
    """Infinite-depth limit for output-connected and fully-connected stacks.

    Both collapse to white noise: 1 when x equals x' element-exactly,
    otherwise 0. Encoded analytically; finite iteration never reaches the
    limit and would mislead tests.
    """
    if arch not in ("output-connected", "fully-connected"):
        raise ValueError(
            f"arch must be 'output-connected' or 'fully-connected', got {arch!r}"
        )
    a = np.asarray(x, dtype=np.float64).reshape(-1)
    b = np.asarray(xp, dtype=np.float64).reshape(-1)
    if a.shape != b.shape:
        raise ValueError(f"x and x' have different lengths ({a.shape[0]}, {b.shape[0]})")
    return 1.0 if bool(np.all(a == b)) else 0.0
