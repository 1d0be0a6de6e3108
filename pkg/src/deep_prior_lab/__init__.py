"""Numerical laboratory for layered Gaussian-process priors.

Kernels and their PSD factorization, deep-kernel composition with its
fixed points, layered GP sampling (standard and input-connected),
Jacobian spectra of layered maps, one-dimensional derivative statistics,
dropout-induced additive kernels, and a deterministic CLI that
regenerates every demonstration artifact from a seed.

Hot kernels run through a compiled extension when it is present and
through a pure NumPy fallback otherwise; results agree to rounding.
"""

from ._backend import backend_name
from .deep_kernels import (
    ComposedKernelChain,
    FixedPointQuery,
    alternative_architecture_limit,
    compose_se,
    deep_kernel_chain,
    fixed_point_kernel,
    input_connected_deep_kernel,
)
from .dropout import (
    DropoutInputKernel,
    additive_order_term,
    dropout_hidden_variance,
    dropout_input_kernel,
    dropout_input_kernel_bruteforce,
    sample_dropout_mixture,
    sample_dropout_mixture_batch,
    spike_slab_lengthscale_view,
)
from .errors import NumericsError
from .jacobian import (
    EULER_GAMMA,
    DerivMomentReport,
    SpectrumSummary,
    analytic_log_moments,
    closed_form_log_moments,
    deep_derivative_log_sum,
    deep_jacobian,
    mc_log_derivative_moments,
    sample_layer_jacobian,
    spectrum_distribution,
)
from .kernels import (
    JitterPolicy,
    KernelSpec,
    PointSet,
    PsdFactor,
    derivative_covariance,
    eval_kernel,
    kernel_matrix,
    psd_factorize,
)
from .rng import RngStream, layer_dim_stream_id
from .sampling import (
    DeepArchitecture,
    FeatureSet,
    GridSpec,
    LayerTrace,
    feature_map_grid,
    make_feature_set,
    network_covariance,
    random_feature_network,
    random_feature_network_batch,
    sample_deep_composition,
    sample_gp,
)
from .svg import render_svg

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend_name",
    "NumericsError",
    "RngStream",
    "layer_dim_stream_id",
    "KernelSpec",
    "PointSet",
    "JitterPolicy",
    "PsdFactor",
    "eval_kernel",
    "kernel_matrix",
    "psd_factorize",
    "derivative_covariance",
    "ComposedKernelChain",
    "FixedPointQuery",
    "compose_se",
    "deep_kernel_chain",
    "input_connected_deep_kernel",
    "fixed_point_kernel",
    "alternative_architecture_limit",
    "DeepArchitecture",
    "LayerTrace",
    "GridSpec",
    "FeatureSet",
    "make_feature_set",
    "sample_gp",
    "sample_deep_composition",
    "feature_map_grid",
    "random_feature_network",
    "random_feature_network_batch",
    "network_covariance",
    "EULER_GAMMA",
    "DerivMomentReport",
    "SpectrumSummary",
    "closed_form_log_moments",
    "analytic_log_moments",
    "mc_log_derivative_moments",
    "deep_derivative_log_sum",
    "sample_layer_jacobian",
    "deep_jacobian",
    "spectrum_distribution",
    "DropoutInputKernel",
    "dropout_hidden_variance",
    "dropout_input_kernel",
    "dropout_input_kernel_bruteforce",
    "additive_order_term",
    "sample_dropout_mixture",
    "sample_dropout_mixture_batch",
    "spike_slab_lengthscale_view",
    "render_svg",
]
