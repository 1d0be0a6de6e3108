"""Deterministic SVG rendering of the CSV artifacts.

Three plot kinds cover every artifact the command line emits:

* ``line``: first column on the horizontal axis, every other numeric
  column as a polyline. A ``depth`` or ``family`` column, when present,
  splits rows into groups (one polyline per group and series, groups in
  first-appearance order).
* ``scatter``: points positioned by the two columns named in the
  ``scatter_xy`` metadata entry (defaulting to the last two columns),
  colored by the original ``x_1``/``x_2`` coordinates so the warp is
  visible as color transport.
* ``map``: a lattice over ``x_1``/``x_2`` with cells colored from the
  column(s) named in ``map_values``: hue from atan2(f2, f1), lightness
  from the radius. A single value column uses the f2 = 0 convention
  (hue flips at the sign change, lightness tracks magnitude); with no
  value columns the coordinates color themselves (identity map).

Rendering is pure text assembly with fixed formatting; identical CSV
bytes produce identical SVG bytes.
"""

from __future__ import annotations

import math
from pathlib import Path

__all__ = ["render_svg", "read_artifact_csv"]

PLOT_KINDS = ("line", "scatter", "map")

_GROUP_COLUMNS = ("depth", "family")

_WIDTH = 840
_HEIGHT = 560
_MARGIN_L = 64
_MARGIN_R = 16
_MARGIN_T = 34
_MARGIN_B = 44

_PALETTE = (
    "#1f6fb2", "#d1495b", "#1a9c76", "#8a5bb8", "#c77f1e",
    "#3ba5c9", "#b23f8c", "#5d8a28", "#845c3c", "#52586b",
    "#1f3f77", "#9c2f2f", "#13724f", "#5d3d86", "#8f5d10",
    "#2389a5", "#7e2c63", "#42681b", "#5f4430", "#35394a",
)


def read_artifact_csv(source):
    """Parse an artifact CSV into (metadata, header, string rows).

    source is a path to a CSV file, or the CSV text itself (anything
    containing a newline is treated as text). Leading ``# key=value``
    lines become the metadata dict; the first non-comment line is the
    header.
    """
    text = str(source)
    if "\n" not in text:
        text = Path(source).read_text()
    metadata = {}
    header = None
    rows = []
    for line in text.splitlines():
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                metadata[key.strip()] = value.strip()
            continue
        cells = line.split(",")
        if header is None:
            header = cells
        else:
            rows.append(cells)
    if header is None:
        raise ValueError("no header row found in CSV input")
    return metadata, header, rows


def _as_float_column(rows, index):
    out = []
    for cells in rows:
        try:
            out.append(float(cells[index]))
        except ValueError:
            return None
    return out


def _numeric_columns(header, rows):
    columns = {}
    for i, name in enumerate(header):
        values = _as_float_column(rows, i)
        if values is not None:
            columns[name] = values
    return columns


def _fmt(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError(f"cannot place non-finite value {value} on a plot axis")
    text = format(value, ".2f")
    return "0.00" if text == "-0.00" else text


def _axis_range(values):
    lo = min(values)
    hi = max(values)
    if hi == lo:
        pad = 1.0 if lo == 0.0 else abs(lo) * 0.1
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


def _x_pixel(v, lo, hi):
    span = _WIDTH - _MARGIN_L - _MARGIN_R
    return _MARGIN_L + (v - lo) / (hi - lo) * span


def _y_pixel(v, lo, hi):
    span = _HEIGHT - _MARGIN_T - _MARGIN_B
    return _HEIGHT - _MARGIN_B - (v - lo) / (hi - lo) * span


def _hsl_to_hex(h: float, s: float, lightness: float) -> str:
    h = h % 1.0
    c = (1.0 - abs(2.0 * lightness - 1.0)) * s
    hp = h * 6.0
    x = c * (1.0 - abs(hp % 2.0 - 1.0))
    sector = int(hp) % 6
    r, g, b = (
        (c, x, 0.0), (x, c, 0.0), (0.0, c, x),
        (0.0, x, c), (x, 0.0, c), (c, 0.0, x),
    )[sector]
    m = lightness - c / 2.0
    return "#{:02x}{:02x}{:02x}".format(
        min(255, max(0, round((r + m) * 255.0))),
        min(255, max(0, round((g + m) * 255.0))),
        min(255, max(0, round((b + m) * 255.0))),
    )


def _svg_open(title: str) -> list:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="#ffffff"/>',
        f'<text x="{_MARGIN_L}" y="20" font-family="monospace" '
        f'font-size="13" fill="#333333">{title}</text>',
    ]


def _axes(parts, x_lo, x_hi, y_lo, y_hi):
    x0, x1 = _MARGIN_L, _WIDTH - _MARGIN_R
    y0, y1 = _HEIGHT - _MARGIN_B, _MARGIN_T
    parts.append(
        f'<path d="M {x0} {y1} L {x0} {y0} L {x1} {y0}" '
        'fill="none" stroke="#888888" stroke-width="1"/>'
    )
    for frac in (0.0, 0.5, 1.0):
        xv = x_lo + frac * (x_hi - x_lo)
        yv = y_lo + frac * (y_hi - y_lo)
        xp = _fmt(_x_pixel(xv, x_lo, x_hi))
        yp = _fmt(_y_pixel(yv, y_lo, y_hi))
        parts.append(
            f'<text x="{xp}" y="{_HEIGHT - _MARGIN_B + 16}" font-family="monospace" '
            f'font-size="10" fill="#555555" text-anchor="middle">{_fmt(xv)}</text>'
        )
        parts.append(
            f'<text x="{_MARGIN_L - 6}" y="{yp}" font-family="monospace" '
            f'font-size="10" fill="#555555" text-anchor="end">{_fmt(yv)}</text>'
        )


def _render_line(metadata, header, rows) -> str:
    columns = _numeric_columns(header, rows)
    if header[0] not in columns:
        raise ValueError(f"line plot needs a numeric first column, got {header[0]!r}")
    x_name = header[0]
    group_name = next(
        (name for name in _GROUP_COLUMNS if name in header[1:]), None
    )
    series = [
        name for name in header[1:]
        if name in columns and name != group_name
    ]
    if not series:
        raise ValueError("line plot needs at least one numeric series column")
    group_index = header.index(group_name) if group_name is not None else None
    groups = []
    if group_index is None:
        groups.append((None, list(range(len(rows)))))
    else:
        seen = {}
        for r, cells in enumerate(rows):
            seen.setdefault(cells[group_index], []).append(r)
        groups.extend(seen.items())

    x_all = columns[x_name]
    y_all = [v for name in series for v in columns[name]]
    x_lo, x_hi = _axis_range(x_all)
    y_lo, y_hi = _axis_range(y_all)

    parts = _svg_open(metadata.get("command", "line"))
    _axes(parts, x_lo, x_hi, y_lo, y_hi)
    color = 0
    legend_y = _MARGIN_T + 8
    for name in series:
        for label, idx in groups:
            points = " ".join(
                f"{_fmt(_x_pixel(x_all[r], x_lo, x_hi))},"
                f"{_fmt(_y_pixel(columns[name][r], y_lo, y_hi))}"
                for r in idx
            )
            stroke = _PALETTE[color % len(_PALETTE)]
            parts.append(
                f'<polyline points="{points}" fill="none" '
                f'stroke="{stroke}" stroke-width="1.2"/>'
            )
            text = name if label is None else f"{name} {group_name}={label}"
            parts.append(
                f'<text x="{_WIDTH - _MARGIN_R - 4}" y="{legend_y}" '
                f'font-family="monospace" font-size="10" fill="{stroke}" '
                f'text-anchor="end">{text}</text>'
            )
            legend_y += 12
            color += 1
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _position_color(x, y, x_lo, x_hi, y_lo, y_hi):
    cx = 0.5 * (x_lo + x_hi)
    cy = 0.5 * (y_lo + y_hi)
    rx = max(x_hi - cx, 1e-12)
    ry = max(y_hi - cy, 1e-12)
    u = (x - cx) / rx
    v = (y - cy) / ry
    hue = math.atan2(v, u) / (2.0 * math.pi)
    radius = min(math.hypot(u, v), 1.0)
    return _hsl_to_hex(hue, 0.75, 0.72 - 0.42 * radius)


def _render_scatter(metadata, header, rows) -> str:
    columns = _numeric_columns(header, rows)
    names = metadata.get("scatter_xy")
    if names is not None:
        pos_names = [n.strip() for n in names.split(",")]
    else:
        pos_names = [n for n in header if n in columns][-2:]
    if len(pos_names) != 2 or any(n not in columns for n in pos_names):
        raise ValueError(f"scatter plot needs two numeric position columns, got {pos_names}")
    if "x_1" not in columns or "x_2" not in columns:
        raise ValueError("scatter plot needs original x_1 and x_2 columns for coloring")
    px = columns[pos_names[0]]
    py = columns[pos_names[1]]
    cx = columns["x_1"]
    cy = columns["x_2"]
    x_lo, x_hi = _axis_range(px)
    y_lo, y_hi = _axis_range(py)
    c_xlo, c_xhi = _axis_range(cx)
    c_ylo, c_yhi = _axis_range(cy)
    parts = _svg_open(metadata.get("command", "scatter"))
    _axes(parts, x_lo, x_hi, y_lo, y_hi)
    for i in range(len(rows)):
        fill = _position_color(cx[i], cy[i], c_xlo, c_xhi, c_ylo, c_yhi)
        parts.append(
            f'<circle cx="{_fmt(_x_pixel(px[i], x_lo, x_hi))}" '
            f'cy="{_fmt(_y_pixel(py[i], y_lo, y_hi))}" r="2" fill="{fill}"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _render_map(metadata, header, rows) -> str:
    columns = _numeric_columns(header, rows)
    if "x_1" not in columns or "x_2" not in columns:
        raise ValueError("map plot needs lattice columns x_1 and x_2")
    names = metadata.get("map_values")
    if names is not None:
        value_names = [n.strip() for n in names.split(",")]
    else:
        value_names = [n for n in header if n in columns and not n.startswith("x_")][-2:]
    if not value_names:
        value_names = ["x_1", "x_2"]
    if len(value_names) > 2 or any(n not in columns for n in value_names):
        raise ValueError(f"map plot needs one or two numeric value columns, got {value_names}")
    f1 = columns[value_names[0]]
    f2 = columns[value_names[1]] if len(value_names) == 2 else [0.0] * len(f1)

    xs = sorted(set(columns["x_1"]))
    ys = sorted(set(columns["x_2"]))
    if len(xs) * len(ys) != len(rows):
        raise ValueError(
            f"map plot needs a full lattice: {len(xs)} x {len(ys)} != {len(rows)} rows"
        )
    x_index = {v: i for i, v in enumerate(xs)}
    y_index = {v: i for i, v in enumerate(ys)}
    span_x = _WIDTH - _MARGIN_L - _MARGIN_R
    span_y = _HEIGHT - _MARGIN_T - _MARGIN_B
    cell_w = span_x / len(xs)
    cell_h = span_y / len(ys)
    max_radius = max(math.hypot(a, b) for a, b in zip(f1, f2))
    if max_radius == 0.0:
        max_radius = 1.0

    parts = _svg_open(metadata.get("command", "map"))
    for i in range(len(rows)):
        col = x_index[columns["x_1"][i]]
        row = y_index[columns["x_2"][i]]
        hue = math.atan2(f2[i], f1[i]) / (2.0 * math.pi)
        radius = math.hypot(f1[i], f2[i]) / max_radius
        fill = _hsl_to_hex(hue, 0.8, 0.92 - 0.62 * radius)
        x_px = _MARGIN_L + col * cell_w
        y_px = _HEIGHT - _MARGIN_B - (row + 1) * cell_h
        parts.append(
            f'<rect x="{_fmt(x_px)}" y="{_fmt(y_px)}" '
            f'width="{_fmt(cell_w + 0.5)}" height="{_fmt(cell_h + 0.5)}" fill="{fill}"/>'
        )
    parts.append(
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{_fmt(span_x)}" '
        f'height="{_fmt(span_y)}" fill="none" stroke="#888888" stroke-width="1"/>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_svg(csv, kind: str) -> str:
    """Render one artifact CSV (path or text) to a standalone SVG string.

    kind selects the layout (line, scatter, map); a CSV whose columns do
    not fit the requested kind raises ValueError.
    """
    if kind not in PLOT_KINDS:
        raise ValueError(f"unknown plot kind {kind!r}; choose from {PLOT_KINDS}")
    metadata, header, rows = read_artifact_csv(csv)
    if not rows:
        raise ValueError("no data rows in CSV input")
    if kind == "line":
        return _render_line(metadata, header, rows)
    if kind == "scatter":
        return _render_scatter(metadata, header, rows)
    return _render_map(metadata, header, rows)
