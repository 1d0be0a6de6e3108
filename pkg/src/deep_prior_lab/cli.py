"""Command line front end.

Eight subcommands regenerate the library's demonstration artifacts from
a seed: layered one-dimensional samples, two-dimensional warps of a
point cloud, feature maps over a grid, Jacobian spectrum quantiles,
log-derivative moment audits, composed-kernel profiles, input-dropout
kernel slices, and finite-width feature sums converging to their GP
limit.

Every run is deterministic: outputs depend only on the resolved
configuration, never on time or machine. Each run writes CSV artifacts
(``# schema=1`` plus ``# key=value`` metadata, then a header and data
rows with full-precision floats), optional SVG renderings, and a
``manifest.txt`` capturing every resolved field. Replaying a manifest
with ``deep-prior-lab --config <manifest>`` reproduces the CSV bytes.

Exit codes: 0 on success, 1 on a numerical failure (NumericsError), 2
on an argument error. A failed run removes whatever files it had
already written.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import _backend
from .deep_kernels import fixed_point_kernel, FixedPointQuery
from .dropout import additive_order_term, dropout_input_kernel
from .errors import NumericsError
from .jacobian import mc_log_derivative_moments, spectrum_distribution
from .kernels import KernelSpec, PointSet
from .rng import RngStream
from .sampling import (
    DeepArchitecture,
    GridSpec,
    WEIGHT_FAMILIES,
    feature_map_grid,
    make_feature_set,
    network_covariance,
    random_feature_network_batch,
    sample_deep_composition,
)
from .svg import render_svg

__all__ = ["RunConfig", "run", "main", "COMMANDS"]

VERSION = "0.1.0"

COMMANDS = (
    "sample-1d",
    "warp-2d",
    "feature-map",
    "spectrum",
    "derivative-stats",
    "kernel-compose",
    "dropout-kernel",
    "feature-clt",
)

_FORMATS = ("csv", "svg")


@dataclass
class RunConfig:
    """Fully resolved run parameters; exactly what the manifest records.

    List-valued fields (depth for spectrum and kernel-compose, dims for
    feature-clt) are kept as their comma-separated text form so one
    schema serves every command; commands parse what they need and
    ignore fields that do not apply to them.
    """

    command: str
    seed: int = 0
    depth: str = "1"
    dims: str = "1"
    grid_n: int = 100
    n_draws: int = 1000
    p: float = 0.5
    sigma: float = 1.0
    lengthscale: float = 1.0
    connected: bool = False
    output_dir: str = "."
    formats: str = "csv,svg"


_CONFIG_FIELDS = tuple(f.name for f in fields(RunConfig))

_COMMON_DEFAULTS = {
    "seed": 0,
    "p": 0.5,
    "sigma": 1.0,
    "lengthscale": 1.0,
    "connected": False,
    "output_dir": ".",
    "formats": "csv,svg",
    "n_draws": 1000,
    "grid_n": 100,
    "depth": "1",
    "dims": "1",
}

_DEFAULTS = {
    "sample-1d": {"depth": "10", "dims": "1", "grid_n": 300,
                  "lengthscale": math.sqrt(2.0 / math.pi)},
    "warp-2d": {"depth": "6", "dims": "2", "grid_n": 1000},
    "feature-map": {"depth": "10", "dims": "2", "grid_n": 64},
    "spectrum": {"depth": "2,6,25,50", "dims": "5", "n_draws": 1000},
    "derivative-stats": {"n_draws": 1000000},
    "kernel-compose": {"depth": "1,2,3,5,10,inf", "grid_n": 100},
    "dropout-kernel": {"dims": "3", "grid_n": 41},
    "feature-clt": {"dims": "10,100,1000", "n_draws": 2000, "grid_n": 20},
}

_HELP = {
    "sample-1d": "layered 1-d samples on a line grid, one column per layer",
    "warp-2d": "push a Gaussian point cloud through a layered 2-d map",
    "feature-map": "two-output feature map over a 2-d lattice",
    "spectrum": "Jacobian singular-spectrum quantiles per depth",
    "derivative-stats": "Monte Carlo audit of 1-d log-derivative moments",
    "kernel-compose": "composed kernel vs distance for several depths",
    "dropout-kernel": "input-dropout kernel slice and its additive orders",
    "feature-clt": "finite-width feature sums against the GP limit",
}


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


_FIELD_PARSERS = {
    "command": str,
    "seed": int,
    "depth": str,
    "dims": str,
    "grid_n": int,
    "n_draws": int,
    "p": float,
    "sigma": float,
    "lengthscale": float,
    "connected": _parse_bool,
    "output_dir": str,
    "formats": str,
}


def _read_config_file(path: str) -> dict:
    """Parse a key=value config or manifest file into typed field values."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from exc
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key = key.strip()
        value = value.strip()
        if key == "version" or key.startswith("kernel_") or key.startswith("jitter_"):
            continue
        if key not in _FIELD_PARSERS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            values[key] = _FIELD_PARSERS[key](value)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def _int_list(text: str, what: str, min_value: int, allow_inf: bool = False) -> list:
    out = []
    for piece in str(text).split(","):
        piece = piece.strip()
        if not piece:
            continue
        if allow_inf and piece == "inf":
            out.append(math.inf)
            continue
        try:
            value = int(piece)
        except ValueError:
            raise ValueError(f"{what} must be a comma list of integers, got {piece!r}")
        if value < min_value:
            raise ValueError(f"{what} entries must be >= {min_value}, got {value}")
        out.append(value)
    if not out:
        raise ValueError(f"{what} must not be empty")
    return out


def _single_int(text: str, what: str, min_value: int) -> int:
    values = _int_list(text, what, min_value)
    if len(values) != 1:
        raise ValueError(f"{what} takes a single integer here, got {text!r}")
    return values[0]


def _check_positive(value: float, what: str) -> float:
    if not (math.isfinite(value) and value > 0.0):
        raise ValueError(f"{what} must be positive finite, got {value}")
    return float(value)


def _formats(cfg: RunConfig) -> set:
    chosen = {piece.strip() for piece in cfg.formats.split(",") if piece.strip()}
    if not chosen or not chosen.issubset(set(_FORMATS)):
        raise ValueError(f"formats must be a nonempty subset of {_FORMATS}, got {cfg.formats!r}")
    return chosen


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv_text(meta: dict, header: list, rows: list) -> str:
    lines = ["# schema=1"]
    for key, value in meta.items():
        lines.append(f"# {key}={_cell(value)}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"


class _Emitter:
    """Writes artifacts under the output directory, undoing them on failure."""

    def __init__(self, output_dir: str):
        self.root = Path(output_dir)
        self.written = []

    def write(self, name: str, text: str) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.root / name
        path.write_text(text)
        self.written.append(path)
        return path

    def cleanup(self) -> None:
        for path in self.written:
            try:
                path.unlink()
            except OSError:
                pass
        self.written.clear()


def _emit(cfg: RunConfig, emitter: _Emitter, stem: str, meta: dict,
          header: list, rows: list, svg_kind: str | None) -> None:
    chosen = _formats(cfg)
    text = _csv_text(meta, header, rows)
    if "csv" in chosen:
        emitter.write(stem + ".csv", text)
    if "svg" in chosen and svg_kind is not None:
        emitter.write(stem + ".svg", render_svg(text, svg_kind))


def _base_meta(cfg: RunConfig) -> dict:
    return {"command": cfg.command, "seed": cfg.seed}


def _trace_table(pts: PointSet, trace) -> tuple:
    """Header and rows for a layer trace: x columns then per-layer outputs."""
    x = pts.points
    header = [f"x_{d + 1}" for d in range(x.shape[1])]
    blocks = [x]
    for layer_index, layer in enumerate(trace.layers, start=1):
        header.extend(f"f_layer{layer_index}_dim{d + 1}" for d in range(layer.shape[1]))
        blocks.append(layer)
    table = np.hstack(blocks)
    rows = [[float(v) for v in row] for row in table]
    return header, rows


def _layer_kernel(cfg: RunConfig) -> KernelSpec:
    variance = _check_positive(cfg.sigma, "sigma") ** 2
    lengthscale = _check_positive(cfg.lengthscale, "lengthscale")
    return KernelSpec.squared_exp(variance=variance, lengthscale=lengthscale)


def _kernel_meta(spec: KernelSpec) -> dict:
    return {
        "kernel_variant": spec.variant,
        "kernel_variance": spec.variance,
        "kernel_lengthscale": spec.lengthscales[0],
    }


def _jitter_meta(trace) -> dict:
    return {
        f"jitter_layer_{i + 1}": jitter
        for i, jitter in enumerate(trace.jitter_per_layer)
    }


def _cmd_sample_1d(cfg: RunConfig, emitter: _Emitter) -> None:
    depth = _single_int(cfg.depth, "depth", min_value=0)
    grid_n = cfg.grid_n
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2, got {grid_n}")
    arch = DeepArchitecture(
        depth=depth, layer_width=1, input_connected=cfg.connected,
        layer_kernel=_layer_kernel(cfg),
    )
    pts = PointSet(np.linspace(-5.0, 5.0, grid_n))
    trace = sample_deep_composition(arch, pts, RngStream(cfg.seed))
    header, rows = _trace_table(pts, trace)
    meta = _base_meta(cfg)
    meta.update(depth=depth, grid_n=grid_n, connected=cfg.connected)
    meta.update(_kernel_meta(arch.layer_kernel))
    meta.update(_jitter_meta(trace))
    _emit(cfg, emitter, "sample1d", meta, header, rows,
          "line" if depth >= 1 else None)


def _cmd_warp_2d(cfg: RunConfig, emitter: _Emitter) -> None:
    depth = _single_int(cfg.depth, "depth", min_value=0)
    dims = _single_int(cfg.dims, "dims", min_value=2)
    n_points = cfg.grid_n
    if n_points < 2:
        raise ValueError(f"grid_n (cloud size) must be >= 2, got {n_points}")
    arch = DeepArchitecture(
        depth=depth, layer_width=dims, input_connected=cfg.connected,
        layer_kernel=_layer_kernel(cfg),
    )
    cloud = RngStream(cfg.seed).substream(0).generator().standard_normal((n_points, dims))
    pts = PointSet(cloud)
    trace = sample_deep_composition(arch, pts, RngStream(cfg.seed))
    header, rows = _trace_table(pts, trace)
    if depth >= 1:
        final = f"f_layer{depth}_dim1,f_layer{depth}_dim2"
    else:
        final = "x_1,x_2"
    meta = _base_meta(cfg)
    meta.update(depth=depth, dims=dims, grid_n=n_points, connected=cfg.connected,
                scatter_xy=final)
    meta.update(_kernel_meta(arch.layer_kernel))
    meta.update(_jitter_meta(trace))
    _emit(cfg, emitter, "warp2d", meta, header, rows, "scatter")


def _cmd_feature_map(cfg: RunConfig, emitter: _Emitter) -> None:
    depth = _single_int(cfg.depth, "depth", min_value=0)
    dims = _single_int(cfg.dims, "dims", min_value=2)
    if dims != 2:
        raise ValueError(f"feature-map draws a 2-d lattice; dims must be 2, got {dims}")
    grid_n = cfg.grid_n
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2, got {grid_n}")
    arch = DeepArchitecture(
        depth=depth, layer_width=2, input_connected=cfg.connected,
        layer_kernel=_layer_kernel(cfg), output_width=2,
    )
    grid = GridSpec(x_min=-3.0, x_max=3.0, resolution=grid_n)
    trace = feature_map_grid(arch, grid, RngStream(cfg.seed))
    pts = grid.points()
    header, rows = _trace_table(pts, trace)
    if depth >= 1:
        values = f"f_layer{depth}_dim1,f_layer{depth}_dim2"
    else:
        values = "x_1,x_2"
    meta = _base_meta(cfg)
    meta.update(depth=depth, grid_n=grid_n, connected=cfg.connected,
                map_values=values)
    meta.update(_kernel_meta(arch.layer_kernel))
    meta.update(_jitter_meta(trace))
    _emit(cfg, emitter, "featuremap", meta, header, rows, "map")


def _cmd_spectrum(cfg: RunConfig, emitter: _Emitter) -> None:
    depths = _int_list(cfg.depth, "depth", min_value=1)
    dims = _single_int(cfg.dims, "dims", min_value=1)
    sigma = _check_positive(cfg.sigma, "sigma")
    w = _check_positive(cfg.lengthscale, "lengthscale")
    multiple = len(depths) > 1
    for depth in depths:
        summary = spectrum_distribution(
            L=depth, D=dims, sigma=sigma, lengthscales=(w,) * dims,
            input_connected=cfg.connected, n_draws=cfg.n_draws,
            rng=RngStream(cfg.seed, stream_id=depth),
        )
        header = ["index", "q10", "q50", "q90"]
        rows = [
            [i + 1] + [float(q) for q in summary.quantiles[i]]
            for i in range(summary.quantiles.shape[0])
        ]
        meta = _base_meta(cfg)
        meta.update(depth=depth, dims=dims, n_draws=cfg.n_draws,
                    connected=cfg.connected, sigma=sigma, lengthscale=w)
        stem = f"spectrum_depth{depth}" if multiple else "spectrum"
        _emit(cfg, emitter, stem, meta, header, rows, "line")


def _cmd_derivative_stats(cfg: RunConfig, emitter: _Emitter) -> None:
    sigma = _check_positive(cfg.sigma, "sigma")
    w = _check_positive(cfg.lengthscale, "lengthscale")
    report = mc_log_derivative_moments(sigma, w, cfg.n_draws, RngStream(cfg.seed))
    header = list(report.FIELDS)
    rows = [[getattr(report, name) for name in header]]
    meta = _base_meta(cfg)
    meta.update(n_draws=cfg.n_draws, sigma=sigma, lengthscale=w)
    _emit(cfg, emitter, "derivative_stats", meta, header, rows, None)


def _cmd_kernel_compose(cfg: RunConfig, emitter: _Emitter) -> None:
    depths = _int_list(cfg.depth, "depth", min_value=1, allow_inf=True)
    grid_n = cfg.grid_n
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2, got {grid_n}")
    sigma = _check_positive(cfg.sigma, "sigma")
    if sigma != 1.0:
        raise ValueError("composed kernels need a normalized base; sigma must be 1")
    w = _check_positive(cfg.lengthscale, "lengthscale")
    r = np.linspace(0.0, 5.0, grid_n)
    base = np.exp(-(r**2) / (2.0 * w * w))
    sq = r**2
    fixed = np.array([
        fixed_point_kernel(FixedPointQuery(r=float(ri))) for ri in r
    ])
    header = ["r", "depth", "k_chain", "k_connected", "k_fixed_point"]
    rows = []
    for depth in depths:
        if math.isinf(depth):
            chain = np.ones_like(r)
            connected = fixed
            label = "inf"
        else:
            chain = _backend.se_chain(base.copy(), int(depth))
            connected = _backend.se_chain_connected(base.copy(), sq, int(depth))
            label = str(int(depth))
        for i in range(grid_n):
            rows.append([float(r[i]), label, float(chain[i]),
                         float(connected[i]), float(fixed[i])])
    meta = _base_meta(cfg)
    meta.update(grid_n=grid_n, lengthscale=w, depths=cfg.depth)
    _emit(cfg, emitter, "kernel_compose", meta, header, rows, "line")


def _cmd_dropout_kernel(cfg: RunConfig, emitter: _Emitter) -> None:
    dims = _single_int(cfg.dims, "dims", min_value=2)
    grid_n = cfg.grid_n
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2, got {grid_n}")
    p = cfg.p
    if not (0.0 < p < 1.0):
        raise ValueError(f"keep probability p must lie in (0, 1), got {p}")
    w = _check_positive(cfg.lengthscale, "lengthscale")
    axis = np.linspace(-3.0, 3.0, grid_n)
    header = [f"x_{d + 1}" for d in range(dims)]
    header += [f"k_order_{d}" for d in range(dims + 1)]
    header += ["k_dropout"]
    rows = []
    for o2 in axis:
        for o1 in axis:
            offsets = np.zeros(dims)
            offsets[0] = o1
            offsets[1] = o2
            k_values = np.exp(-(offsets**2) / (2.0 * w * w))
            row = [float(v) for v in offsets]
            for order in range(dims + 1):
                weight = p**order * (1.0 - p) ** (dims - order)
                row.append(weight * additive_order_term(k_values, order))
            row.append(dropout_input_kernel(k_values, p))
            rows.append(row)
    meta = _base_meta(cfg)
    meta.update(dims=dims, grid_n=grid_n, p=p, lengthscale=w,
                map_values="k_dropout")
    _emit(cfg, emitter, "dropout_kernel", meta, header, rows, "map")


def _cmd_feature_clt(cfg: RunConfig, emitter: _Emitter) -> None:
    from scipy import stats

    widths = _int_list(cfg.dims, "dims (feature counts)", min_value=1)
    repeats = cfg.grid_n
    if repeats < 1:
        raise ValueError(f"grid_n (feature redraws) must be >= 1, got {repeats}")
    n_networks = cfg.n_draws
    if n_networks < 100:
        raise ValueError(f"n_draws (networks) must be >= 100, got {n_networks}")
    sigma = _check_positive(cfg.sigma, "sigma")
    w = _check_positive(cfg.lengthscale, "lengthscale")
    weight_variance = sigma * sigma
    pts = PointSet(np.array([0.0, 1.0]))
    header = ["K", "family", "ks_median", "cov_dev_se_units"]
    rows = []
    for count in widths:
        per_family = {family: ([], []) for family in WEIGHT_FAMILIES}
        for repeat in range(repeats):
            feat_rng = RngStream(cfg.seed, stream_id=repeat).substream(count)
            feature = make_feature_set("cosine", count, dim=1, rng=feat_rng,
                                       lengthscale=w)
            target = network_covariance(feature, weight_variance, pts)
            scale = math.sqrt(weight_variance)
            for fi, family in enumerate(WEIGHT_FAMILIES):
                w_rng = feat_rng.substream(fi + 1)
                values = random_feature_network_batch(
                    n_networks, count, weight_variance, feature, pts, w_rng,
                    weight_family=family,
                )
                ks = stats.kstest(values[:, 0], "norm", args=(0.0, scale)).statistic
                emp = values.T @ values / n_networks
                dev = 0.0
                for a in range(2):
                    for b in range(a, 2):
                        se = math.sqrt(
                            (target[a, a] * target[b, b] + target[a, b] ** 2)
                            / n_networks
                        )
                        dev = max(dev, abs(emp[a, b] - target[a, b]) / se)
                per_family[family][0].append(float(ks))
                per_family[family][1].append(float(dev))
        for family in WEIGHT_FAMILIES:
            ks_list, dev_list = per_family[family]
            rows.append([
                count, family,
                float(np.median(ks_list)), float(np.median(dev_list)),
            ])
    meta = _base_meta(cfg)
    meta.update(n_draws=n_networks, repeats=repeats, sigma=sigma, lengthscale=w)
    _emit(cfg, emitter, "feature_clt", meta, header, rows, "line")


_COMMAND_IMPL = {
    "sample-1d": _cmd_sample_1d,
    "warp-2d": _cmd_warp_2d,
    "feature-map": _cmd_feature_map,
    "spectrum": _cmd_spectrum,
    "derivative-stats": _cmd_derivative_stats,
    "kernel-compose": _cmd_kernel_compose,
    "dropout-kernel": _cmd_dropout_kernel,
    "feature-clt": _cmd_feature_clt,
}


def _manifest_text(cfg: RunConfig) -> str:
    lines = ["# run manifest; replay with: deep-prior-lab --config <this file>"]
    lines.append(f"version={VERSION}")
    for field in _CONFIG_FIELDS:
        lines.append(f"{field}={_cell(getattr(cfg, field))}")
    return "\n".join(lines) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deep-prior-lab",
        description="deterministic artifacts for layered GP priors",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in COMMANDS:
        p = sub.add_parser(name, help=_HELP[name])
        p.add_argument("--config", metavar="FILE",
                       help="key=value file applied before explicit flags")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--depth", type=str, default=None,
                       help="layer count; comma list for spectrum and "
                            "kernel-compose (inf allowed there)")
        p.add_argument("--dims", type=str, default=None,
                       help="width or dimension; comma list of feature "
                            "counts for feature-clt")
        p.add_argument("--grid-n", dest="grid_n", type=int, default=None,
                       help="grid resolution / cloud size / repeat count")
        p.add_argument("--n-draws", dest="n_draws", type=int, default=None)
        p.add_argument("--p", type=float, default=None,
                       help="keep probability for dropout commands")
        p.add_argument("--sigma", type=float, default=None,
                       help="kernel amplitude; variance is sigma squared")
        p.add_argument("--lengthscale", type=float, default=None)
        p.add_argument("--connected", action="store_true", default=None,
                       help="re-attach the input at every layer")
        p.add_argument("--output-dir", dest="output_dir", type=str, default=None)
        p.add_argument("--formats", type=str, default=None,
                       help="comma subset of csv,svg (default both)")
    return parser


def _resolve_config(ns: argparse.Namespace) -> RunConfig:
    resolved = dict(_COMMON_DEFAULTS)
    resolved.update(_DEFAULTS.get(ns.command, {}))
    if ns.config is not None:
        file_values = _read_config_file(ns.config)
        file_command = file_values.pop("command", None)
        if file_command is not None and file_command != ns.command:
            raise ValueError(
                f"config file is for {file_command!r}, invoked command is {ns.command!r}"
            )
        resolved.update(file_values)
    for field in _CONFIG_FIELDS:
        if field == "command":
            continue
        value = getattr(ns, field, None)
        if value is not None:
            resolved[field] = value
    return RunConfig(command=ns.command, **resolved)


def _inject_config_command(argv: list) -> list:
    """Allow `deep-prior-lab --config manifest.txt` with the command in the file."""
    if not argv or argv[0] != "--config":
        return argv
    if len(argv) < 2:
        raise ValueError("--config requires a file path")
    values = _read_config_file(argv[1])
    command = values.get("command")
    if command is None:
        raise ValueError(f"config file {argv[1]} does not name a command")
    if command not in COMMANDS:
        raise ValueError(f"config file {argv[1]} names unknown command {command!r}")
    return [command] + argv


def run(argv=None) -> int:
    """Run the command line with explicit arguments; returns the exit code."""
    if argv is None:
        argv = sys.argv[1:]
    try:
        argv = _inject_config_command(list(argv))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    emitter = None
    try:
        cfg = _resolve_config(ns)
        _formats(cfg)
        emitter = _Emitter(cfg.output_dir)
        _COMMAND_IMPL[cfg.command](cfg, emitter)
        emitter.write("manifest.txt", _manifest_text(cfg))
        return 0
    except NumericsError as exc:
        if emitter is not None:
            emitter.cleanup()
        print(f"numerics error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        if emitter is not None:
            emitter.cleanup()
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
