"""Kernel specifications, evaluation, Gram matrices, and PSD factorization.

A KernelSpec is a declarative, immutable description of a covariance
function. Base variants (SquaredExp, ProductSquaredExp, Constant,
WhiteNoise) are evaluated directly; derived variants (ComposedSE,
InputConnectedDeep, FixedPointConnected, DropoutAdditive) are declared
here too so that a single dispatch point evaluates every kernel the
package knows about. All evaluation is double precision.

Every evaluation path routes through one vectorized Gram routine:
eval_kernel builds the two-point Gram of its canonically ordered pair and
reads the off-diagonal entry. That makes eval and kernel_matrix agree to
the last bit and makes symmetry exact by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import _backend
from ._fixed_point import solve_fixed_point
from .errors import NumericsError

__all__ = [
    "VARIANTS",
    "KernelSpec",
    "PointSet",
    "JitterPolicy",
    "PsdFactor",
    "eval_kernel",
    "kernel_matrix",
    "psd_factorize",
    "derivative_covariance",
]

VARIANTS = (
    "SquaredExp",
    "ProductSquaredExp",
    "Constant",
    "WhiteNoise",
    "ComposedSE",
    "InputConnectedDeep",
    "FixedPointConnected",
    "DropoutAdditive",
)

_NORMALIZED_VARIANTS = (
    "ComposedSE",
    "InputConnectedDeep",
    "FixedPointConnected",
    "DropoutAdditive",
)


@dataclass(frozen=True)
class KernelSpec:
    """Immutable kernel description.

    variance is the output scale sigma^2; lengthscales has one entry per
    input dimension (the input dimension is their count); depth counts
    compositions applied on top of the base kernel (0 for base variants);
    keep_prob is the per-dimension keep probability of the DropoutAdditive
    variant and is ignored elsewhere.
    """

    variant: str
    variance: float = 1.0
    lengthscales: tuple = (1.0,)
    depth: int = 0
    keep_prob: float = 1.0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown kernel variant {self.variant!r}")
        object.__setattr__(self, "lengthscales", tuple(float(w) for w in self.lengthscales))
        object.__setattr__(self, "variance", float(self.variance))
        object.__setattr__(self, "depth", int(self.depth))
        object.__setattr__(self, "keep_prob", float(self.keep_prob))
        if not self.lengthscales:
            raise ValueError("at least one lengthscale is required")
        if not all(math.isfinite(w) and w > 0.0 for w in self.lengthscales):
            raise ValueError(f"lengthscales must be positive finite, got {self.lengthscales}")
        if not (math.isfinite(self.variance) and self.variance > 0.0):
            raise ValueError(f"variance must be positive finite, got {self.variance}")
        if self.depth < 0:
            raise ValueError(f"depth must be >= 0, got {self.depth}")
        if self.variant == "SquaredExp" and len(set(self.lengthscales)) > 1:
            raise ValueError(
                "SquaredExp is isotropic; use ProductSquaredExp for "
                "per-dimension lengthscales"
            )
        if self.variant in _NORMALIZED_VARIANTS and self.variance != 1.0:
            raise ValueError(
                f"{self.variant} requires a normalized base (variance = 1), "
                f"got {self.variance}"
            )
        if not (0.0 < self.keep_prob <= 1.0):
            raise ValueError(f"keep_prob must be in (0, 1], got {self.keep_prob}")

    @property
    def dim(self) -> int:
        return len(self.lengthscales)

    @classmethod
    def squared_exp(cls, variance: float = 1.0, lengthscale: float = 1.0, dim: int = 1):
        return cls("SquaredExp", variance, (float(lengthscale),) * dim)

    @classmethod
    def product_se(cls, variance: float, lengthscales) -> "KernelSpec":
        return cls("ProductSquaredExp", variance, tuple(lengthscales))

    def to_config_text(self) -> str:
        """Plain-text key=value block; floats round-trip exactly via repr."""
        lines = [
            f"variant={self.variant}",
            f"variance={self.variance!r}",
            "lengthscales=" + ",".join(repr(w) for w in self.lengthscales),
            f"depth={self.depth}",
            f"keep_prob={self.keep_prob!r}",
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_config_text(cls, text: str) -> "KernelSpec":
        items = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"malformed kernel config line {line!r}")
            key, _, value = line.partition("=")
            items[key.strip()] = value.strip()
        missing = {"variant", "variance", "lengthscales", "depth"} - set(items)
        if missing:
            raise ValueError(f"kernel config missing keys: {sorted(missing)}")
        return cls(
            variant=items["variant"],
            variance=float(items["variance"]),
            lengthscales=tuple(float(v) for v in items["lengthscales"].split(",")),
            depth=int(items["depth"]),
            keep_prob=float(items.get("keep_prob", "1.0")),
        )


class PointSet:
    """Ordered set of N points in R^D, immutable after construction."""

    __slots__ = ("dim", "points")

    def __init__(self, points):
        arr = np.array(points, dtype=np.float64, copy=True)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"points must be an (N, D) array with N, D >= 1, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("points must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "points", arr)
        object.__setattr__(self, "dim", int(arr.shape[1]))

    def __setattr__(self, name, value):
        raise AttributeError("PointSet is immutable")

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def __repr__(self) -> str:
        return f"PointSet(n={len(self)}, dim={self.dim})"


@dataclass(frozen=True)
class JitterPolicy:
    """Escalating diagonal jitter for Gram factorization.

    Starting value and cap are expressed relative to the matrix's maximum
    diagonal entry when the absolute fields are None. Escalation is
    geometric; deep-layer Gram matrices collapse toward rank one, so a
    fixed jitter either fails there or pollutes well-behaved ones.
    """

    initial: float | None = None
    max: float | None = None
    factor: float = 10.0

    REL_INITIAL = 1e-10
    REL_MAX = 1e-4

    def resolve(self, max_diag: float):
        scale = max_diag if max_diag > 0.0 else 1.0
        initial = self.REL_INITIAL * scale if self.initial is None else self.initial
        cap = self.REL_MAX * scale if self.max is None else self.max
        if initial <= 0.0 or cap < initial:
            raise ValueError(f"invalid jitter policy bounds ({initial}, {cap})")
        if self.factor <= 1.0:
            raise ValueError(f"jitter escalation factor must exceed 1, got {self.factor}")
        return initial, cap


@dataclass(frozen=True)
class PsdFactor:
    """Lower-triangular factor of a jittered matrix."""

    lower: np.ndarray
    jitter_used: float


def _pairwise_sq_dist(points: np.ndarray) -> np.ndarray:
    """Exact-symmetric matrix of squared Euclidean distances."""
    n, d = points.shape
    acc = np.zeros((n, n), dtype=np.float64)
    for k in range(d):
        diff = np.subtract.outer(points[:, k], points[:, k])
        np.square(diff, out=diff)
        acc += diff
    return acc


def _gram(spec: KernelSpec, points: np.ndarray) -> np.ndarray:
    """Gram matrix for any variant; the single evaluation path."""
    ls = np.asarray(spec.lengthscales, dtype=np.float64)
    if spec.variant in ("SquaredExp", "ProductSquaredExp"):
        return _backend.gram_product_se(points, ls, spec.variance)
    if spec.variant == "Constant":
        return np.full((len(points), len(points)), spec.variance, dtype=np.float64)
    if spec.variant == "WhiteNoise":
        eq = np.all(points[:, None, :] == points[None, :, :], axis=-1)
        return spec.variance * eq.astype(np.float64)
    if spec.variant == "ComposedSE":
        base = _backend.gram_product_se(points, ls, 1.0)
        return _backend.se_chain(base, spec.depth)
    if spec.variant == "InputConnectedDeep":
        base = _backend.gram_product_se(points, ls, 1.0)
        sq = _pairwise_sq_dist(points)
        return _backend.se_chain_connected(base, sq, spec.depth)
    if spec.variant == "FixedPointConnected":
        sq = _pairwise_sq_dist(points)
        return solve_fixed_point(1.0 + 0.5 * sq)
    if spec.variant == "DropoutAdditive":
        p = spec.keep_prob
        out = np.ones((len(points), len(points)), dtype=np.float64)
        for k in range(points.shape[1]):
            diff = np.subtract.outer(points[:, k], points[:, k])
            np.square(diff, out=diff)
            diff *= -1.0 / (2.0 * ls[k] * ls[k])
            np.exp(diff, out=diff)
            out *= (1.0 - p) + p * diff
        return out
    raise ValueError(f"unknown kernel variant {spec.variant!r}")


def _check_vector(x, dim: int, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64).reshape(-1)
    if arr.shape[0] != dim:
        raise ValueError(f"{name} has length {arr.shape[0]}, kernel expects {dim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


def eval_kernel(spec: KernelSpec, x, xp) -> float:
    """k(x, x') for any variant.

    The pair is ordered canonically (lexicographic on coordinates) before
    evaluation, so eval_kernel(spec, a, b) and eval_kernel(spec, b, a)
    are the same computation, hence bit-identical.
    """
    a = _check_vector(x, spec.dim, "x")
    b = _check_vector(xp, spec.dim, "x'")
    if tuple(b) < tuple(a):
        a, b = b, a
    gram = _gram(spec, np.ascontiguousarray(np.vstack((a, b))))
    return float(gram[0, 1])


def kernel_matrix(spec: KernelSpec, pts: PointSet) -> np.ndarray:
    """Gram matrix M[i, j] = k(p_i, p_j), exactly symmetric."""
    if pts.dim != spec.dim:
        raise ValueError(f"PointSet dim {pts.dim} does not match kernel dim {spec.dim}")
    return _gram(spec, pts.points)


def psd_factorize(matrix, policy: JitterPolicy | None = None) -> PsdFactor:
    """Cholesky factor of matrix + jitter * I with escalating jitter.

    The first attempt already carries policy.initial on the diagonal (all
    sampling paths account for the additive variance). Escalates by
    policy.factor up to policy.max; failure at the cap raises
    NumericsError naming the smallest eigenvalue estimate.
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix must be finite")
    if not np.array_equal(m, m.T):
        raise ValueError("matrix must be exactly symmetric")
    if policy is None:
        policy = JitterPolicy()
    jitter, cap = policy.resolve(float(np.max(np.diag(m))) if m.size else 1.0)
    idx = np.arange(m.shape[0])
    while True:
        attempt = m.copy()
        attempt[idx, idx] += jitter
        try:
            lower = scipy.linalg.cholesky(attempt, lower=True, overwrite_a=True,
                                          check_finite=False)
            return PsdFactor(lower=lower, jitter_used=jitter)
        except scipy.linalg.LinAlgError:
            if jitter >= cap:
                eigmin = float(np.linalg.eigvalsh(m)[0])
                raise NumericsError(
                    f"factorization failed at jitter {jitter:.3e} (cap {cap:.3e}); "
                    f"smallest eigenvalue is about {eigmin:.6e}"
                )
            jitter = min(jitter * policy.factor, cap)


def derivative_covariance(spec: KernelSpec, d1: int, d2: int) -> float:
    """Cov of partial derivatives of a product-SE GP at coincident inputs.

    Equals sigma^2 / w_{d1}^2 when d1 = d2 and 0 otherwise (distinct
    partials of a product kernel are independent at a point).
    """
    if spec.variant not in ("SquaredExp", "ProductSquaredExp"):
        raise ValueError(f"derivative covariance needs a product kernel, got {spec.variant}")
    if not (0 <= d1 < spec.dim and 0 <= d2 < spec.dim):
        raise ValueError(f"dimension index out of range: ({d1}, {d2}) for dim {spec.dim}")
    if d1 != d2:
        return 0.0
    w = spec.lengthscales[d1]
    return spec.variance / (w * w)
