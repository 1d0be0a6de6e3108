"""Command line contract: artifacts, determinism, replay, exit codes."""

import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

from deep_prior_lab import NumericsError, cli
from deep_prior_lab.svg import PLOT_KINDS, read_artifact_csv, render_svg


def read(path: Path) -> str:
    return path.read_text()


def test_every_command_produces_csv_svg_and_manifest(tmp_path):
    jobs = {
        "sample-1d": ["--depth", "3", "--grid-n", "40"],
        "warp-2d": ["--depth", "2", "--grid-n", "60"],
        "feature-map": ["--depth", "2", "--grid-n", "12"],
        "spectrum": ["--depth", "4", "--dims", "3", "--n-draws", "100"],
        "derivative-stats": ["--n-draws", "10000"],
        "kernel-compose": ["--depth", "1,3,inf", "--grid-n", "25"],
        "dropout-kernel": ["--dims", "2", "--grid-n", "9"],
        "feature-clt": ["--dims", "10,40", "--n-draws", "150", "--grid-n", "3"],
    }
    assert set(jobs) == set(cli.COMMANDS)
    for command, extra in jobs.items():
        out = tmp_path / command
        code = cli.run([command, "--seed", "1", "--output-dir", str(out)] + extra)
        assert code == 0, command
        files = sorted(f.name for f in out.iterdir())
        assert "manifest.txt" in files, command
        csvs = [f for f in files if f.endswith(".csv")]
        assert csvs, command
        svgs = [f for f in files if f.endswith(".svg")]
        if command == "derivative-stats":
            assert not svgs
        else:
            assert svgs, command
            for name in svgs:
                ET.fromstring(read(out / name))
        for name in csvs:
            text = read(out / name)
            assert text.startswith("# schema=1\n"), command
            metadata, header, rows = read_artifact_csv(text)
            assert metadata["command"] == command
            assert rows, command


def test_reruns_are_byte_identical(tmp_path):
    args = ["sample-1d", "--seed", "5", "--depth", "4", "--grid-n", "50"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.run(args + ["--output-dir", str(a)]) == 0
    assert cli.run(args + ["--output-dir", str(b)]) == 0
    for name in ("sample1d.csv", "sample1d.svg"):
        assert read(a / name) == read(b / name), name
    # The manifest embeds the resolved output directory; everything else in
    # it must agree between the two runs.
    strip = lambda text: [ln for ln in text.splitlines()
                          if not ln.startswith("output_dir=")]
    assert strip(read(a / "manifest.txt")) == strip(read(b / "manifest.txt"))


def test_manifest_replays_identically(tmp_path):
    first = tmp_path / "first"
    assert cli.run(["warp-2d", "--seed", "9", "--grid-n", "80",
                    "--output-dir", str(first)]) == 0
    replay = tmp_path / "replay"
    assert cli.run(["--config", str(first / "manifest.txt"),
                    "--output-dir", str(replay)]) == 0
    assert read(first / "warp2d.csv") == read(replay / "warp2d.csv")
    assert read(first / "warp2d.svg") == read(replay / "warp2d.svg")


def test_config_flag_overrides_and_mismatch(tmp_path):
    out = tmp_path / "run"
    assert cli.run(["spectrum", "--seed", "2", "--dims", "3", "--depth", "5",
                    "--n-draws", "100", "--output-dir", str(out)]) == 0
    manifest = out / "manifest.txt"
    # Explicit flags take precedence over config file values.
    over = tmp_path / "over"
    assert cli.run(["spectrum", "--config", str(manifest), "--depth", "7",
                    "--output-dir", str(over)]) == 0
    meta, _, _ = read_artifact_csv(read(over / "spectrum.csv"))
    assert meta["depth"] == "7"
    # A config naming another command is rejected.
    assert cli.run(["sample-1d", "--config", str(manifest),
                    "--output-dir", str(tmp_path / "bad")]) == 2


def test_argument_errors_leave_no_artifacts(tmp_path):
    out = tmp_path / "nothing"
    assert cli.run(["sample-1d", "--depth", "-1",
                    "--output-dir", str(out)]) == 2
    assert cli.run(["spectrum", "--n-draws", "5",
                    "--output-dir", str(out)]) == 2
    assert cli.run(["feature-map", "--dims", "3",
                    "--output-dir", str(out)]) == 2
    assert cli.run(["sample-1d", "--formats", "png",
                    "--output-dir", str(out)]) == 2
    assert not out.exists()


def test_unknown_command_and_flags():
    assert cli.run(["frobnicate"]) == 2
    assert cli.run(["sample-1d", "--what"]) == 2
    assert cli.run([]) == 2
    assert cli.run(["--version"]) == 0
    assert cli.run(["sample-1d", "--help"]) == 0


def test_missing_config_file_path():
    assert cli.run(["--config"]) == 2
    assert cli.run(["--config", "/nonexistent/manifest.txt"]) == 2


def test_numerics_failure_cleans_partial_outputs(tmp_path, monkeypatch):
    calls = {"n": 0}
    real = cli.spectrum_distribution

    def flaky(*args, **kwargs):
        calls["n"] += 1
        if calls["n"] == 2:
            raise NumericsError("synthetic failure")
        return real(*args, **kwargs)

    monkeypatch.setattr(cli, "spectrum_distribution", flaky)
    out = tmp_path / "broken"
    code = cli.run(["spectrum", "--depth", "2,4", "--dims", "3",
                    "--n-draws", "100", "--output-dir", str(out)])
    assert code == 1
    assert calls["n"] == 2
    # The first depth's artifacts were written before the failure and must
    # have been removed again.
    assert not list(out.iterdir())


def test_csv_only_and_svg_only(tmp_path):
    out_csv = tmp_path / "csvonly"
    assert cli.run(["sample-1d", "--grid-n", "30", "--formats", "csv",
                    "--output-dir", str(out_csv)]) == 0
    names = {f.name for f in out_csv.iterdir()}
    assert names == {"sample1d.csv", "manifest.txt"}
    out_svg = tmp_path / "svgonly"
    assert cli.run(["sample-1d", "--grid-n", "30", "--formats", "svg",
                    "--output-dir", str(out_svg)]) == 0
    names = {f.name for f in out_svg.iterdir()}
    assert names == {"sample1d.svg", "manifest.txt"}


def test_spectrum_multi_depth_stems(tmp_path):
    out = tmp_path / "multi"
    assert cli.run(["spectrum", "--depth", "2,6", "--dims", "3",
                    "--n-draws", "100", "--output-dir", str(out)]) == 0
    names = {f.name for f in out.iterdir() if f.suffix == ".csv"}
    assert names == {"spectrum_depth2.csv", "spectrum_depth6.csv"}


def test_sample_1d_csv_layout(tmp_path):
    out = tmp_path / "layout"
    assert cli.run(["sample-1d", "--seed", "3", "--depth", "2",
                    "--grid-n", "20", "--output-dir", str(out)]) == 0
    meta, header, rows = read_artifact_csv(read(out / "sample1d.csv"))
    assert header == ["x_1", "f_layer1_dim1", "f_layer2_dim1"]
    assert len(rows) == 20
    assert meta["kernel_variant"] == "SquaredExp"
    assert "jitter_layer_1" in meta and "jitter_layer_2" in meta
    # Values round-trip exactly through repr.
    x = np.array([float(r[0]) for r in rows])
    assert np.array_equal(x, np.linspace(-5, 5, 20))


def test_derivative_stats_row_matches_report_fields(tmp_path):
    out = tmp_path / "stats"
    assert cli.run(["derivative-stats", "--n-draws", "10000",
                    "--output-dir", str(out)]) == 0
    _, header, rows = read_artifact_csv(read(out / "derivative_stats.csv"))
    from deep_prior_lab import DerivMomentReport

    assert header == list(DerivMomentReport.FIELDS)
    assert len(rows) == 1


def test_kernel_compose_includes_infinite_depth(tmp_path):
    out = tmp_path / "compose"
    assert cli.run(["kernel-compose", "--depth", "2,inf", "--grid-n", "15",
                    "--output-dir", str(out)]) == 0
    _, header, rows = read_artifact_csv(read(out / "kernel_compose.csv"))
    assert header == ["r", "depth", "k_chain", "k_connected", "k_fixed_point"]
    depths = {r[1] for r in rows}
    assert depths == {"2", "inf"}
    for row in rows:
        if row[1] == "inf":
            # Chain limit is the constant kernel; connected limit is the
            # fixed point column.
            assert float(row[2]) == 1.0
            assert row[3] == row[4]


def test_render_svg_kinds_and_errors():
    line_csv = "# schema=1\nx,y\n0.0,1.0\n1.0,2.0\n"
    for kind in PLOT_KINDS:
        assert kind in ("line", "scatter", "map") or False
    svg = render_svg(line_csv, "line")
    ET.fromstring(svg)
    assert svg == render_svg(line_csv, "line")
    with pytest.raises(ValueError):
        render_svg(line_csv, "histogram")
    with pytest.raises(ValueError):
        render_svg("# schema=1\nx,y\n", "line")  # no data rows
    with pytest.raises(ValueError):
        render_svg("# schema=1\nname,y\nrun,1.0\n", "line")  # non-numeric x
    # A map needs a 2-D lattice.
    with pytest.raises(ValueError):
        render_svg(line_csv, "map")


def test_render_line_groups_by_depth_column():
    csv = (
        "# schema=1\n"
        "r,depth,k\n"
        "0.0,1,1.0\n0.5,1,0.8\n1.0,1,0.5\n"
        "0.0,2,1.0\n0.5,2,0.9\n1.0,2,0.7\n"
    )
    svg = render_svg(csv, "line")
    root = ET.fromstring(svg)
    texts = [el.text for el in root.iter() if el.tag.endswith("text")]
    assert any(t and "depth=1" in t for t in texts)
    assert any(t and "depth=2" in t for t in texts)


def test_render_scatter_uses_metadata_columns():
    # Positions come from the metadata-named columns; colors always come
    # from the original x_1/x_2 coordinates.
    csv = (
        "# schema=1\n"
        "# scatter_xy=u,v\n"
        "x_1,x_2,u,v\n"
        "0.0,0.0,0.2,0.1\n1.0,1.0,-0.4,0.9\n-1.0,0.5,0.0,0.3\n"
    )
    ET.fromstring(render_svg(csv, "scatter"))
    with pytest.raises(ValueError):
        render_svg(csv.replace("scatter_xy=u,v", "scatter_xy=u,missing"), "scatter")
    without_coords = csv.replace("x_1,x_2", "a_1,a_2")
    with pytest.raises(ValueError):
        render_svg(without_coords, "scatter")


def test_render_map_scalar_and_vector_values():
    rows = []
    for b in (-1.0, 0.0, 1.0):
        for a in (-1.0, 0.0, 1.0):
            rows.append(f"{a},{b},{a * b},{a + b}")
    body = "x_1,x_2,f1,f2\n" + "\n".join(rows) + "\n"
    vector = "# schema=1\n# map_values=f1,f2\n" + body
    ET.fromstring(render_svg(vector, "map"))
    scalar = "# schema=1\n# map_values=f1\n" + body
    ET.fromstring(render_svg(scalar, "map"))
    # An incomplete lattice is rejected.
    broken = "# schema=1\n# map_values=f1\n" + body.replace("1.0,1.0,1.0,2.0", "")
    with pytest.raises(ValueError):
        render_svg(broken.rstrip() + "\n", "map")


def test_read_artifact_csv_from_path(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("# schema=1\n# command=demo\na,b\n1,2\n")
    meta, header, rows = read_artifact_csv(path)
    assert meta == {"schema": "1", "command": "demo"}
    assert header == ["a", "b"]
    assert rows == [["1", "2"]]
