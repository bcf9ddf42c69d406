"""Standalone SVG plots rendered from Jinja2 templates.

Heatmap cells are colored on a linear ramp from light gray ``#ececec``
(rate 0) to blue ``#2166ac`` (rate 1); each RGB channel moves
monotonically between the endpoints. Coordinates are written with fixed
precision so identical input gives identical bytes.
"""

from pathlib import Path
from typing import Literal

import numpy as np
from jinja2 import Environment, FileSystemLoader

from app.diagnostics.record import RunRecord
from app.exceptions import EmissionError, EmptyDataError, InvalidArgumentError
from app.harness.models import RecoveryReport

RAMP_LOW = (236, 236, 236)
RAMP_HIGH = (33, 102, 172)

CELL_SIZE = 40
MARGIN_LEFT = 80
MARGIN_TOP = 30
MARGIN_BOTTOM = 90

PANEL_WIDTH = 560
PANEL_HEIGHT = 180
PANEL_GAP = 60


def ramp_color(rate: float) -> str:
    """Hex color of a success rate; values outside [0, 1] are clipped."""
    rate = min(1.0, max(0.0, float(rate)))
    channels = (round(lo + (hi - lo) * rate) for lo, hi in zip(RAMP_LOW, RAMP_HIGH))
    return "#" + "".join(f"{c:02x}" for c in channels)


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _polyline(values: np.ndarray, left: float, top: float, width: float, height: float) -> tuple[str, float, float]:
    values = np.asarray(values, dtype=np.float64)
    lo, hi = float(values.min()), float(values.max())
    span = hi - lo if hi > lo else 1.0
    steps = max(len(values) - 1, 1)
    xs = left + width * np.arange(len(values)) / steps
    ys = top + height - height * (values - lo) / span
    points = [f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, ys)]
    return "M" + " L".join(points), lo, hi


class SvgRenderer:
    """Renders recovery heatmaps and recurrence line charts."""

    def __init__(self, template_dir: str | None = None):
        """Initialize renderer with Jinja2 templates.

        Args:
            template_dir: Path to template directory (defaults to ./templates)
        """
        if template_dir is None:
            template_dir = Path(__file__).parent / "templates"

        self.template_dir = Path(template_dir)
        self.env = Environment(
            loader=FileSystemLoader(str(self.template_dir)),
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )

    def heatmap(self, report: RecoveryReport) -> str:
        """Grid of cells, rows n (ascending downward), columns N/n.

        Raises:
            EmptyDataError: If the report has no cells
        """
        if not report.cells:
            raise EmptyDataError("recovery report has no cells")

        dims = sorted({c.n for c in report.cells})
        ratios = sorted({c.ratio for c in report.cells})
        width = MARGIN_LEFT + CELL_SIZE * len(ratios) + 20
        grid_bottom = MARGIN_TOP + CELL_SIZE * len(dims)
        height = grid_bottom + MARGIN_BOTTOM

        cells = []
        for c in sorted(report.cells, key=lambda c: (c.n, c.ratio)):
            cells.append(
                {
                    "x": MARGIN_LEFT + CELL_SIZE * ratios.index(c.ratio),
                    "y": MARGIN_TOP + CELL_SIZE * dims.index(c.n),
                    "fill": ramp_color(c.rate),
                    "n": c.n,
                    "N": c.N,
                    "rate": repr(c.rate),
                }
            )
        x_ticks = [
            {"x": MARGIN_LEFT + CELL_SIZE * i + CELL_SIZE // 2, "y": grid_bottom + 16, "label": f"{r:g}"}
            for i, r in enumerate(ratios)
        ]
        y_ticks = [
            {"x": MARGIN_LEFT - 6, "y": MARGIN_TOP + CELL_SIZE * i + CELL_SIZE // 2, "label": str(n)}
            for i, n in enumerate(dims)
        ]

        legend_steps = 10
        legend_step = 12
        legend = [
            {"x": MARGIN_LEFT + legend_step * i, "fill": ramp_color(i / (legend_steps - 1))}
            for i in range(legend_steps)
        ]
        legend_y = grid_bottom + 50

        template = self.env.get_template("heatmap.svg.jinja2")
        return template.render(
            title="Recovery rate",
            width=width,
            height=height,
            cell_size=CELL_SIZE,
            cells=cells,
            x_ticks=x_ticks,
            y_ticks=y_ticks,
            x_label={"x": MARGIN_LEFT + CELL_SIZE * len(ratios) // 2, "y": grid_bottom + 34},
            y_label={"x": MARGIN_LEFT - 44, "y": MARGIN_TOP + CELL_SIZE * len(dims) // 2},
            legend=legend,
            legend_step=legend_step,
            legend_y=legend_y,
            legend_x0=MARGIN_LEFT + legend_step // 2,
            legend_x1=MARGIN_LEFT + legend_step * (legend_steps - 1) + legend_step // 2,
        )

    def lines(self, record: RunRecord) -> str:
        """Two stacked panels sharing t: ||w^t - w*|| and L(w^t).

        Raises:
            EmptyDataError: If the record is empty or carries no loss series
        """
        if record.T == 0:
            raise EmptyDataError("record has no iterations")
        if not record.has_loss:
            raise EmptyDataError("record carries no loss series")

        panels = []
        series = [
            ("distance", "||w^t - w*||", record.dist_l2, "#2166ac"),
            ("loss", "L(w^t)", record.loss, "#b2182b"),
        ]
        for i, (name, label, values, color) in enumerate(series):
            top = MARGIN_TOP + i * (PANEL_HEIGHT + PANEL_GAP)
            path, lo, hi = _polyline(values, MARGIN_LEFT, top, PANEL_WIDTH, PANEL_HEIGHT)
            panels.append(
                {
                    "name": name,
                    "label": label,
                    "color": color,
                    "path": path,
                    "left": MARGIN_LEFT,
                    "top": top,
                    "width": PANEL_WIDTH,
                    "height": PANEL_HEIGHT,
                    "y_min": f"{lo:.4g}",
                    "y_max": f"{hi:.4g}",
                }
            )

        template = self.env.get_template("lines.svg.jinja2")
        return template.render(
            title="Distance to w* and loss",
            width=MARGIN_LEFT + PANEL_WIDTH + 30,
            height=MARGIN_TOP + 2 * (PANEL_HEIGHT + PANEL_GAP),
            panels=panels,
            T=record.T,
        )


def emit_svg(
    result: RecoveryReport | RunRecord,
    kind: Literal["heatmap", "lines"],
    path: Path,
    renderer: SvgRenderer | None = None,
) -> Path:
    """Render ``result`` and write it to ``path``.

    Raises:
        EmptyDataError: If there is nothing to draw
        InvalidArgumentError: If ``kind`` does not fit ``result``
        EmissionError: If the file cannot be written
    """
    renderer = renderer or SvgRenderer()
    if kind == "heatmap" and isinstance(result, RecoveryReport):
        document = renderer.heatmap(result)
    elif kind == "lines" and isinstance(result, RunRecord):
        document = renderer.lines(result)
    else:
        raise InvalidArgumentError(f"cannot draw {type(result).__name__} as '{kind}'")

    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(document)
    except OSError as e:
        raise EmissionError(str(e), path) from e
    return path
