"""Dropout on GP network weights and the induced input-layer kernel.

Dropping hidden units of an infinitely wide network multiplies the
hidden-layer weight variance by the keep probability p; rescaling the
kept weights by 1/sqrt(p) restores it exactly, so hidden dropout leaves
the prior unchanged in the wide limit.

Dropping input coordinates is different: with a product kernel over
input dimensions, keeping each coordinate independently with probability
p mixes product kernels over subsets, giving the closed form

    k_dropout(x, x') = prod_d [(1 - p) + p * k_d(x_d, x'_d)]

whose expansion in p groups interactions by order via elementary
symmetric polynomials of the per-dimension kernel values. The dropout
prior is therefore a mixture of GPs, not a GP: every single-point
marginal is exactly N(0, 1) for normalized bases, and non-Gaussianity
shows up only in joint statistics such as increments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import KernelSpec, PointSet, JitterPolicy, kernel_matrix, psd_factorize
from .rng import RngStream

__all__ = [
    "DropoutInputKernel",
    "dropout_hidden_variance",
    "dropout_input_kernel_bruteforce",
    "dropout_input_kernel",
    "additive_order_term",
    "sample_dropout_mixture",
    "sample_dropout_mixture_batch",
    "spike_slab_lengthscale_view",
]

BRUTEFORCE_MAX_DIM = 25

_DISTANCE_SCALED = ("SquaredExp", "ProductSquaredExp")


@dataclass(frozen=True)
class DropoutInputKernel:
    """Product kernel over input dimensions with independent coordinate dropout.

    base_kernels holds one normalized one-dimensional KernelSpec per input
    dimension (unit diagonal, so dropped coordinates contribute factor 1
    to the diagonal and the mixture marginals stay standard). p is the
    keep probability, strictly inside (0, 1); the p -> 0 and p -> 1
    limits are exercised through the scalar helpers, which accept p = 1.
    """

    base_kernels: tuple
    p: float

    def __post_init__(self):
        kernels = tuple(self.base_kernels)
        object.__setattr__(self, "base_kernels", kernels)
        if not kernels:
            raise ValueError("need at least one base kernel")
        for i, spec in enumerate(kernels):
            if not isinstance(spec, KernelSpec):
                raise ValueError(f"base kernel {i} is not a KernelSpec")
            if spec.dim != 1:
                raise ValueError(f"base kernel {i} must be one-dimensional, got dim {spec.dim}")
            if spec.variance != 1.0:
                raise ValueError(
                    f"base kernel {i} must be normalized (variance 1), got {spec.variance}"
                )
        if not (0.0 < self.p < 1.0):
            raise ValueError(f"keep probability must lie in (0, 1), got {self.p}")

    @property
    def dim(self) -> int:
        return len(self.base_kernels)

    def coordinate_values(self, x, xp) -> np.ndarray:
        """Per-dimension kernel values k_d(x_d, x'_d) as a vector."""
        from .kernels import eval_kernel

        x = np.asarray(x, dtype=np.float64).reshape(-1)
        xp = np.asarray(xp, dtype=np.float64).reshape(-1)
        if x.shape[0] != self.dim or xp.shape[0] != self.dim:
            raise ValueError(
                f"points must have {self.dim} coordinates, got {x.shape[0]} and {xp.shape[0]}"
            )
        return np.array([
            eval_kernel(spec, x[d : d + 1], xp[d : d + 1])
            for d, spec in enumerate(self.base_kernels)
        ])


def dropout_hidden_variance(p: float, sigma_w2: float, rescale: bool) -> float:
    """Effective hidden-weight variance under dropout with keep probability p.

    Without rescaling the variance shrinks to p * sigma_w2; with the
    1/sqrt(p) compensation on kept weights it is sigma_w2 exactly (the
    factors cancel symbolically, so no roundoff is introduced).
    """
    if not (0.0 < p <= 1.0):
        raise ValueError(f"keep probability must lie in (0, 1], got {p}")
    if not (math.isfinite(sigma_w2) and sigma_w2 > 0.0):
        raise ValueError(f"weight variance must be positive finite, got {sigma_w2}")
    if rescale:
        return float(sigma_w2)
    return float(p * sigma_w2)


def _check_k_values(k_values) -> np.ndarray:
    k = np.asarray(k_values, dtype=np.float64).reshape(-1)
    if k.shape[0] < 1:
        raise ValueError("need at least one coordinate kernel value")
    if not np.all(np.isfinite(k)):
        raise ValueError("coordinate kernel values must be finite")
    return k


def dropout_input_kernel_bruteforce(k_values, p: float) -> float:
    """Input-dropout kernel by explicit enumeration of all 2^D keep masks.

    Each mask r contributes weight prod_d [p if r_d else 1-p] times the
    product of kept coordinate values. Exponential work, capped at
    D <= 25; exists as the independent oracle for dropout_input_kernel.
    """
    k = _check_k_values(k_values)
    if k.shape[0] > BRUTEFORCE_MAX_DIM:
        raise ValueError(
            f"brute force enumerates 2^D masks; D = {k.shape[0]} exceeds {BRUTEFORCE_MAX_DIM}"
        )
    if not (0.0 < p <= 1.0):
        raise ValueError(f"keep probability must lie in (0, 1], got {p}")
    # Doubling accumulator: after dimension d the array holds the weighted
    # product for every mask of the first d coordinates.
    acc = np.ones(1)
    for kd in k:
        acc = np.concatenate(((1.0 - p) * acc, (p * kd) * acc))
    return float(acc.sum())


def dropout_input_kernel(k_values, p: float) -> float:
    """Closed-form input-dropout kernel prod_d [(1-p) + p * k_d] in O(D)."""
    k = _check_k_values(k_values)
    if not (0.0 < p <= 1.0):
        raise ValueError(f"keep probability must lie in (0, 1], got {p}")
    return float(np.prod((1.0 - p) + p * k))


def additive_order_term(k_values, order: int) -> float:
    """Elementary symmetric polynomial e_order of the coordinate kernel values.

    Computed by the Newton-Girard recurrence from power sums in
    O(D * order). Order 0 returns 1; orders outside [0, D] are rejected.
    Weighting e_d by p^d (1-p)^(D-d) and summing over d recovers
    dropout_input_kernel, which is how the additive decomposition is
    validated.
    """
    k = _check_k_values(k_values)
    d_total = k.shape[0]
    if not (0 <= order <= d_total):
        raise ValueError(f"order must lie in [0, {d_total}], got {order}")
    if order == 0:
        return 1.0
    power_sums = np.array([np.sum(k**j) for j in range(1, order + 1)])
    e = np.zeros(order + 1)
    e[0] = 1.0
    for d in range(1, order + 1):
        signs = (-1.0) ** np.arange(d)
        e[d] = np.sum(signs * e[d - 1 :: -1][:d] * power_sums[:d]) / d
    return float(e[order])


def _masked_gram(kernel: DropoutInputKernel, pts: PointSet,
                 keep: np.ndarray) -> np.ndarray:
    """Gram matrix of the product kernel restricted to kept coordinates.

    An all-dropped mask leaves the constant kernel 1 (a single shared
    standard normal draw across all points).
    """
    n = pts.points.shape[0]
    gram = np.ones((n, n))
    for d in np.flatnonzero(keep):
        sub = PointSet(pts.points[:, d : d + 1])
        gram *= kernel_matrix(kernel.base_kernels[d], sub)
    return gram


def sample_dropout_mixture(kernel: DropoutInputKernel, pts: PointSet,
                           rng: RngStream,
                           policy: JitterPolicy | None = None) -> np.ndarray:
    """One draw from the dropout mixture at the given points.

    The generator first draws the keep mask (D uniforms), then the
    standard normal vector (N values); the kept-coordinate product kernel
    is factored and applied. Returns shape (N,).
    """
    if pts.points.shape[1] != kernel.dim:
        raise ValueError(
            f"points have dim {pts.points.shape[1]}, kernel has dim {kernel.dim}"
        )
    gen = rng.generator()
    keep = gen.random(kernel.dim) < kernel.p
    z = gen.standard_normal(pts.points.shape[0])
    factor = psd_factorize(_masked_gram(kernel, pts, keep), policy)
    return factor.lower @ z


def sample_dropout_mixture_batch(kernel: DropoutInputKernel, pts: PointSet,
                                 n_draws: int, rng: RngStream,
                                 policy: JitterPolicy | None = None) -> np.ndarray:
    """n_draws mixture draws, vectorized over repeated masks.

    Draw layout: all n_draws keep masks first (n_draws x D uniforms),
    then all normal vectors (n_draws x N), so the stream consumption is
    independent of how masks repeat. Each distinct mask's Gram matrix is
    factored once and applied to all rows that drew it. A batch of one
    consumes the stream exactly like sample_dropout_mixture. Returns
    shape (n_draws, N).
    """
    if n_draws < 1:
        raise ValueError(f"n_draws must be >= 1, got {n_draws}")
    if pts.points.shape[1] != kernel.dim:
        raise ValueError(
            f"points have dim {pts.points.shape[1]}, kernel has dim {kernel.dim}"
        )
    gen = rng.generator()
    masks = gen.random((n_draws, kernel.dim)) < kernel.p
    z = gen.standard_normal((n_draws, pts.points.shape[0]))
    out = np.empty_like(z)
    patterns, inverse = np.unique(masks, axis=0, return_inverse=True)
    for idx, keep in enumerate(patterns):
        rows = np.flatnonzero(inverse == idx)
        factor = psd_factorize(_masked_gram(kernel, pts, keep), policy)
        out[rows] = z[rows] @ factor.lower.T
    return out


def spike_slab_lengthscale_view(kernel: DropoutInputKernel, mask) -> list:
    """Per-coordinate lengthscales under a fixed keep mask.

    A kept coordinate reports its base lengthscale; a dropped coordinate
    reports math.inf (the kernel no longer varies along it, equivalently
    an infinite lengthscale). Mixture components are therefore indexed by
    spike-and-slab lengthscale vectors. Only distance-scaled bases have a
    lengthscale to report; other variants raise ValueError.
    """
    keep = np.asarray(mask)
    if keep.dtype != np.bool_:
        raise ValueError(f"mask must be boolean, got dtype {keep.dtype}")
    if keep.shape != (kernel.dim,):
        raise ValueError(f"mask must have shape ({kernel.dim},), got {keep.shape}")
    out = []
    for d, spec in enumerate(kernel.base_kernels):
        if spec.variant not in _DISTANCE_SCALED:
            raise ValueError(
                f"base kernel {d} ({spec.variant}) has no lengthscale to report"
            )
        out.append(float(spec.lengthscales[0]) if keep[d] else math.inf)
    return out
