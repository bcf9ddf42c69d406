import xml.etree.ElementTree as ET

import numpy as np
import pytest

from app.cli.svg import RAMP_HIGH, RAMP_LOW, emit_svg, ramp_color
from app.diagnostics.record import record_from_iterates
from app.exceptions import EmptyDataError, InvalidArgumentError
from app.harness.experiments import run_training
from app.harness.models import CellResult, RecoveryReport
from app.model.models import NoiseSpec
from tests.oracles import hypercube_point

SVG = "{http://www.w3.org/2000/svg}"


def report(*cells):
    return RecoveryReport(
        cells=[
            CellResult(n=n, ratio=r, N=round(n * r), trials=10, successes=s,
                       ergodic_successes=s, last_iterate_successes=0)
            for n, r, s in cells
        ]
    )


def hex_of(rgb):
    return "#" + "".join(f"{c:02x}" for c in rgb)


def test_ramp_endpoints_and_monotone():
    assert ramp_color(0.0) == hex_of(RAMP_LOW) == "#ececec"
    assert ramp_color(1.0) == hex_of(RAMP_HIGH) == "#2166ac"
    reds = [int(ramp_color(r)[1:3], 16) for r in np.linspace(0, 1, 11)]
    assert reds == sorted(reds, reverse=True)


def test_single_cell_heatmap(tmp_path):
    path = emit_svg(report((25, 4, 7)), "heatmap", tmp_path / "grid.svg")
    root = ET.parse(path).getroot()
    cells = root.findall(f".//{SVG}rect[@class='cell']")
    assert len(cells) == 1
    labels = [t.text for t in root.iter(f"{SVG}text") if t.get("class") == "axis-label"]
    assert labels == ["N/n", "n"]


def test_rate_extremes_use_ramp_ends(tmp_path):
    path = emit_svg(report((5, 2, 0), (5, 4, 10)), "heatmap", tmp_path / "grid.svg")
    fills = [c.get("fill") for c in ET.parse(path).getroot().findall(f".//{SVG}rect[@class='cell']")]
    assert fills == ["#ececec", "#2166ac"]


def test_heatmap_bytes_are_deterministic(tmp_path):
    grid = report((5, 2, 3), (5, 4, 8), (10, 2, 1), (10, 4, 6))
    a = emit_svg(grid, "heatmap", tmp_path / "a.svg").read_bytes()
    b = emit_svg(grid, "heatmap", tmp_path / "b.svg").read_bytes()
    assert a == b


def test_recurrence_lines(tmp_path):
    result = run_training(6, 4, 30, NoiseSpec(kind="gaussian", sigma=1.0), T=40, seed=3)
    path = emit_svg(result.record, "lines", tmp_path / "lines.svg")
    root = ET.parse(path).getroot()
    paths = root.findall(f".//{SVG}path[@class='series']")
    assert len(paths) == 2
    assert all(p.get("d").count("L") == 39 for p in paths)
    panels = [g.get("id") for g in root.iter(f"{SVG}g") if g.get("class") == "panel"]
    assert panels == ["distance", "loss"]
    assert path.read_bytes() == emit_svg(result.record, "lines", tmp_path / "again.svg").read_bytes()


def test_empty_inputs(tmp_path):
    with pytest.raises(EmptyDataError):
        emit_svg(RecoveryReport(), "heatmap", tmp_path / "x.svg")
    no_loss = record_from_iterates(np.tile(hypercube_point([1, -1]), (3, 1)), hypercube_point([1, 1]))
    with pytest.raises(EmptyDataError):
        emit_svg(no_loss, "lines", tmp_path / "y.svg")


def test_kind_must_fit_input(tmp_path):
    with pytest.raises(InvalidArgumentError):
        emit_svg(report((5, 2, 1)), "lines", tmp_path / "z.svg")
