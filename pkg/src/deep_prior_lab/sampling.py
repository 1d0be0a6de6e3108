"""Sampling from layered GP priors and random-feature networks.

A deep composition draws each layer's output dimensions as independent GP
functions evaluated at the previous layer's outputs (optionally
concatenated with the raw input). Every (layer, dimension) pair draws
from its own substream, so results do not depend on evaluation order and
single layers reduce exactly to independent sample_gp calls.

Random-feature networks build f = (1/sqrt(K)) sum_i w_i h_i with bounded
fixed features h and iid zero-mean weights of variance sigma_w^2, giving
network covariance (sigma_w^2 / K) sum_i h_i(x) h_i(x') for the realized
features; weight distributions beyond the Gaussian (uniform, Rademacher)
exercise the central-limit construction's indifference to them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericsError
from .kernels import JitterPolicy, KernelSpec, PointSet, kernel_matrix, psd_factorize
from .rng import RngStream, layer_dim_stream_id

__all__ = [
    "DeepArchitecture",
    "LayerTrace",
    "GridSpec",
    "FeatureSet",
    "sample_gp",
    "sample_deep_composition",
    "feature_map_grid",
    "make_feature_set",
    "random_feature_network",
    "random_feature_network_batch",
    "network_covariance",
    "WEIGHT_FAMILIES",
]

MAX_FACTOR_POINTS = 10000
WEIGHT_FAMILIES = ("gaussian", "uniform", "rademacher")
FEATURE_KINDS = ("cosine", "step", "constant")


@dataclass(frozen=True)
class DeepArchitecture:
    """Shape of a layered GP prior.

    depth 0 is the identity (no layers, used by the feature-map identity
    panel); every hidden layer has layer_width output dimensions; when
    input_connected, layers past the first see the previous output
    concatenated with the original input. layer_kernel is a template: its
    variance is kept and its first lengthscale is replicated across each
    layer's input width. output_width overrides the final layer's width.
    """

    depth: int
    layer_width: int
    input_connected: bool = False
    layer_kernel: KernelSpec = KernelSpec.squared_exp()
    output_width: int | None = None

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError(f"depth must be >= 0, got {self.depth}")
        if self.layer_width < 1:
            raise ValueError(f"layer_width must be >= 1, got {self.layer_width}")
        if self.output_width is not None and self.output_width < 1:
            raise ValueError(f"output_width must be >= 1, got {self.output_width}")
        if self.layer_kernel.variant not in ("SquaredExp", "ProductSquaredExp"):
            raise ValueError(
                f"layer kernel template must be a product-SE variant, got "
                f"{self.layer_kernel.variant}"
            )

    def final_width(self) -> int:
        return self.layer_width if self.output_width is None else self.output_width


@dataclass(frozen=True)
class LayerTrace:
    """Per-layer values of one deep-composition draw at a point set.

    layers[l] is N x width with the values after l+1 layers; the final
    entry may have a distinct output width. jitter_per_layer records the
    diagonal jitter the factorization actually used at each layer.
    """

    input_points: PointSet
    layers: tuple
    jitter_per_layer: tuple

    def final(self) -> np.ndarray:
        if not self.layers:
            return self.input_points.points
        return self.layers[-1]


@dataclass(frozen=True)
class GridSpec:
    """Square 2-D lattice: resolution points per axis over [x_min, x_max]."""

    x_min: float
    x_max: float
    resolution: int

    def __post_init__(self):
        if not (self.x_min < self.x_max):
            raise ValueError(f"need x_min < x_max, got ({self.x_min}, {self.x_max})")
        if self.resolution < 2:
            raise ValueError(f"resolution must be >= 2, got {self.resolution}")

    def points(self) -> PointSet:
        """Row-major lattice: the first coordinate varies fastest."""
        axis = np.linspace(self.x_min, self.x_max, self.resolution)
        xx, yy = np.meshgrid(axis, axis)
        return PointSet(np.column_stack((xx.ravel(), yy.ravel())))


def _layer_spec(template: KernelSpec, width_in: int) -> KernelSpec:
    return KernelSpec(
        "ProductSquaredExp",
        variance=template.variance,
        lengthscales=(template.lengthscales[0],) * width_in,
    )


def sample_gp(spec: KernelSpec, pts: PointSet, rng: RngStream,
              policy: JitterPolicy | None = None) -> np.ndarray:
    """One GP draw at pts: lower-factor times standard normals.

    Pure in rng: the same stream reproduces the same draw. The marginal
    variance at each point is spec's diagonal plus the jitter actually
    used by the factorization.
    """
    gram = kernel_matrix(spec, pts)
    factor = psd_factorize(gram, policy)
    z = rng.generator().standard_normal(len(pts))
    return factor.lower @ z


def sample_deep_composition(arch: DeepArchitecture, pts: PointSet,
                            rng: RngStream) -> LayerTrace:
    """Layer-by-layer draw of a deep GP composition at pts.

    Output dimension d of layer l draws from substream
    layer_dim_stream_id(l, d) of rng; layers share one factorization of
    their common input Gram. Raises NumericsError naming the layer when a
    factorization fails even at maximal jitter.
    """
    if pts.dim < 1:
        raise ValueError("point set must have dimension >= 1")
    n = len(pts)
    if n > MAX_FACTOR_POINTS:
        raise ValueError(
            f"point count {n} exceeds the N x N factorization guard "
            f"({MAX_FACTOR_POINTS})"
        )
    layers = []
    jitters = []
    current = pts.points
    for layer in range(1, arch.depth + 1):
        width = arch.final_width() if layer == arch.depth else arch.layer_width
        if arch.input_connected and layer >= 2:
            inputs = np.hstack((current, pts.points))
        else:
            inputs = current
        spec_l = _layer_spec(arch.layer_kernel, inputs.shape[1])
        try:
            factor = psd_factorize(kernel_matrix(spec_l, PointSet(inputs)))
        except NumericsError as exc:
            raise NumericsError(f"sampling: layer {layer}: {exc}") from exc
        values = np.empty((n, width))
        for d in range(width):
            stream = rng.substream(layer_dim_stream_id(layer, d))
            values[:, d] = factor.lower @ stream.generator().standard_normal(n)
        layers.append(values)
        jitters.append(factor.jitter_used)
        current = values
    return LayerTrace(pts, tuple(layers), tuple(jitters))


def feature_map_grid(arch: DeepArchitecture, grid: GridSpec,
                     rng: RngStream) -> LayerTrace:
    """Deep composition evaluated on a full 2-D lattice.

    Needs a 2-D input and a 2-D final layer so the outputs can be mapped
    to colors. depth 0 returns the identity trace (no layers; the map is
    the input itself).
    """
    if arch.depth > 0 and arch.final_width() != 2:
        raise ValueError(
            f"feature maps need a 2-D final layer, got width {arch.final_width()}"
        )
    return sample_deep_composition(arch, grid.points(), rng)


class FeatureSet:
    """K fixed bounded basis functions, realized once from a stream.

    Networks drawn against the same FeatureSet share these functions;
    only their weights differ. evaluate returns the (K, N) matrix of
    feature values at a point set.
    """

    def __init__(self, kind: str, count: int, dim: int, params: dict):
        self.kind = kind
        self.count = count
        self.dim = dim
        self._params = params

    def evaluate(self, pts: PointSet) -> np.ndarray:
        if pts.dim != self.dim:
            raise ValueError(f"feature set is {self.dim}-dimensional, points are {pts.dim}-dimensional")
        x = pts.points
        if self.kind == "cosine":
            phase = self._params["freq"] @ x.T + self._params["offset"][:, None]
            return math.sqrt(2.0) * np.cos(phase)
        if self.kind == "step":
            proj = self._params["direction"] @ x.T
            sign = np.where(proj >= self._params["threshold"][:, None], 1.0, -1.0)
            return self._params["sign"][:, None] * sign
        if self.kind == "constant":
            return np.ones((self.count, len(pts)))
        raise ValueError(f"unknown feature kind {self.kind!r}")


def make_feature_set(kind: str, count: int, dim: int, rng: RngStream,
                     lengthscale: float = 1.0) -> FeatureSet:
    """Realize K fixed features.

    cosine: random-phase cosines sqrt(2) cos(w.x + b) with w ~ N(0, I/l^2)
    and b uniform on [0, 2pi); their expected product is the squared-exp
    kernel at lengthscale l. step: random-sign two-level steps along a
    random direction. constant: h = 1, handy in tests.
    """
    if kind not in FEATURE_KINDS:
        raise ValueError(f"feature kind must be one of {FEATURE_KINDS}, got {kind!r}")
    if count < 1:
        raise ValueError(f"feature count must be >= 1, got {count}")
    if dim < 1:
        raise ValueError(f"feature dim must be >= 1, got {dim}")
    if lengthscale <= 0.0:
        raise ValueError(f"lengthscale must be positive, got {lengthscale}")
    gen = rng.generator()
    if kind == "cosine":
        params = {
            "freq": gen.standard_normal((count, dim)) / lengthscale,
            "offset": gen.uniform(0.0, 2.0 * math.pi, size=count),
        }
    elif kind == "step":
        params = {
            "direction": gen.standard_normal((count, dim)),
            "threshold": gen.standard_normal(count),
            "sign": gen.choice(np.array([-1.0, 1.0]), size=count),
        }
    else:
        params = {}
    return FeatureSet(kind, count, dim, params)


def _draw_weights(gen: np.random.Generator, shape, weight_variance: float,
                  family: str) -> np.ndarray:
    sigma = math.sqrt(weight_variance)
    if family == "gaussian":
        return sigma * gen.standard_normal(shape)
    if family == "uniform":
        half = math.sqrt(3.0 * weight_variance)
        return gen.uniform(-half, half, size=shape)
    if family == "rademacher":
        return sigma * gen.choice(np.array([-1.0, 1.0]), size=shape)
    raise ValueError(f"weight family must be one of {WEIGHT_FAMILIES}, got {family!r}")


def random_feature_network(K: int, weight_variance: float, feature: FeatureSet,
                           pts: PointSet, rng: RngStream,
                           weight_family: str = "gaussian",
                           keep_prob: float = 1.0,
                           rescale: bool = False) -> np.ndarray:
    """One network draw f(x) = (1/sqrt(K)) sum_i w_i h_i(x) at pts.

    Weights are iid zero-mean with variance weight_variance from the
    chosen family. keep_prob < 1 masks each weight independently
    (Bernoulli keep); rescale divides kept weights by sqrt(keep_prob),
    which restores the unmasked covariance exactly in expectation.
    """
    values = random_feature_network_batch(
        1, K, weight_variance, feature, pts, rng,
        weight_family=weight_family, keep_prob=keep_prob, rescale=rescale,
    )
    return values[0]


def random_feature_network_batch(n_networks: int, K: int, weight_variance: float,
                                 feature: FeatureSet, pts: PointSet,
                                 rng: RngStream,
                                 weight_family: str = "gaussian",
                                 keep_prob: float = 1.0,
                                 rescale: bool = False) -> np.ndarray:
    """n_networks independent draws sharing one realized FeatureSet.

    Returns (n_networks, N). Deterministic layout: all weights are drawn
    first (row-major over networks), then the keep masks when
    keep_prob < 1.
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if n_networks < 1:
        raise ValueError(f"n_networks must be >= 1, got {n_networks}")
    if weight_variance <= 0.0:
        raise ValueError(f"weight_variance must be positive, got {weight_variance}")
    if not (0.0 < keep_prob <= 1.0):
        raise ValueError(f"keep_prob must be in (0, 1], got {keep_prob}")
    if feature.count != K:
        raise ValueError(f"feature set holds {feature.count} features, K = {K}")
    h = feature.evaluate(pts)
    gen = rng.generator()
    weights = _draw_weights(gen, (n_networks, K), weight_variance, weight_family)
    if keep_prob < 1.0:
        mask = gen.random((n_networks, K)) < keep_prob
        weights = weights * mask
        if rescale:
            weights = weights / math.sqrt(keep_prob)
    return (weights @ h) / math.sqrt(K)


def network_covariance(feature: FeatureSet, weight_variance: float,
                       pts: PointSet) -> np.ndarray:
    """Exact covariance of the network for the realized features.

    (weight_variance / K) sum_i h_i(x) h_i(x'), the finite-K analogue of
    the limiting kernel.
    """
    h = feature.evaluate(pts)
    return (weight_variance / feature.count) * (h.T @ h)
