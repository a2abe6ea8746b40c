"""Standalone SVG line charts and grouped histograms.

Output depends only on the inputs: no timestamps, ids or random colours.
"""

import logging
import math
import xml.etree.ElementTree as ET
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

from neurashed.errors import EmptySeries, ReportingError
from neurashed.reporting.tables import write_atomic

logger = logging.getLogger(__name__)

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf")
MARGIN = {"left": 64, "right": 160, "top": 40, "bottom": 48}
TICKS = 5


@dataclass(frozen=True)
class Series:
    label: str
    x: Sequence[float]
    y: Sequence[float | None]

    def __post_init__(self) -> None:
        if len(self.x) != len(self.y):
            raise ReportingError(f"series {self.label!r}: x and y differ in length")


@dataclass(frozen=True)
class PlotStyle:
    kind: Literal["line", "histogram"] = "line"
    title: str = ""
    x_label: str = ""
    y_label: str = ""
    categories: Sequence[str] = field(default_factory=tuple)
    width: int = 720
    height: int = 420


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _tick_label(value: float) -> str:
    return f"{value:.3g}"


def _finite(values: Sequence[float | None]) -> list[float]:
    return [v for v in values if v is not None and math.isfinite(v)]


def _range(values: list[float], *, include_zero: bool) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if include_zero:
        lo, hi = min(lo, 0.0), max(hi, 0.0)
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


class _Canvas:
    def __init__(self, style: PlotStyle) -> None:
        self.style = style
        self.root = ET.Element(
            "svg",
            {
                "xmlns": "http://www.w3.org/2000/svg",
                "width": str(style.width),
                "height": str(style.height),
                "viewBox": f"0 0 {style.width} {style.height}",
                "font-family": "sans-serif",
                "font-size": "12",
            },
        )
        self.left = MARGIN["left"]
        self.right = style.width - MARGIN["right"]
        self.top = MARGIN["top"]
        self.bottom = style.height - MARGIN["bottom"]

    def text(self, x: float, y: float, body: str, **attrs: str) -> None:
        node = ET.SubElement(self.root, "text", {"x": _fmt(x), "y": _fmt(y), **attrs})
        node.text = body

    def line(self, x1: float, y1: float, x2: float, y2: float, stroke: str = "#000") -> None:
        ET.SubElement(
            self.root,
            "line",
            {"x1": _fmt(x1), "y1": _fmt(y1), "x2": _fmt(x2), "y2": _fmt(y2), "stroke": stroke},
        )

    def y_pixel(self, value: float, lo: float, hi: float) -> float:
        return self.bottom - (value - lo) / (hi - lo) * (self.bottom - self.top)

    def frame(self, y_lo: float, y_hi: float) -> None:
        style = self.style
        self.text(style.width / 2, self.top / 2 + 4, style.title, **{"text-anchor": "middle", "font-size": "14"})
        self.line(self.left, self.bottom, self.right, self.bottom)
        self.line(self.left, self.top, self.left, self.bottom)
        for i in range(TICKS + 1):
            value = y_lo + (y_hi - y_lo) * i / TICKS
            y = self.y_pixel(value, y_lo, y_hi)
            self.line(self.left - 4, y, self.left, y)
            self.text(self.left - 6, y + 4, _tick_label(value), **{"text-anchor": "end"})
        self.text((self.left + self.right) / 2, style.height - 10, style.x_label, **{"text-anchor": "middle"})
        self.text(
            14,
            (self.top + self.bottom) / 2,
            style.y_label,
            **{"text-anchor": "middle", "transform": f"rotate(-90 14 {_fmt((self.top + self.bottom) / 2)})"},
        )

    def legend(self, labels: Sequence[str]) -> None:
        group = ET.SubElement(self.root, "g", {"class": "legend"})
        for i, label in enumerate(labels):
            y = self.top + 18 * i
            entry = ET.SubElement(group, "g", {"class": "legend-entry"})
            ET.SubElement(
                entry,
                "rect",
                {"x": _fmt(self.right + 16), "y": _fmt(y), "width": "12", "height": "12", "fill": PALETTE[i % len(PALETTE)]},
            )
            text = ET.SubElement(entry, "text", {"x": _fmt(self.right + 34), "y": _fmt(y + 10)})
            text.text = label

    def render(self) -> str:
        return ET.tostring(self.root, encoding="unicode") + "\n"


def _line_chart(series: Sequence[Series], style: PlotStyle) -> str:
    canvas = _Canvas(style)
    xs = [float(x) for s in series for x, y in zip(s.x, s.y, strict=True) if y is not None]
    ys = _finite([y for s in series for y in s.y])
    if not xs or not ys:
        raise EmptySeries("no finite points to plot")
    x_lo, x_hi = _range(xs, include_zero=False)
    y_lo, y_hi = _range(ys, include_zero=False)
    canvas.frame(y_lo, y_hi)
    for i in range(TICKS + 1):
        value = x_lo + (x_hi - x_lo) * i / TICKS
        x = canvas.left + (value - x_lo) / (x_hi - x_lo) * (canvas.right - canvas.left)
        canvas.line(x, canvas.bottom, x, canvas.bottom + 4)
        canvas.text(x, canvas.bottom + 16, _tick_label(value), **{"text-anchor": "middle"})
    for i, s in enumerate(series):
        points = " ".join(
            f"{_fmt(canvas.left + (x - x_lo) / (x_hi - x_lo) * (canvas.right - canvas.left))},"
            f"{_fmt(canvas.y_pixel(y, y_lo, y_hi))}"
            for x, y in zip(s.x, s.y, strict=True)
            if y is not None and math.isfinite(y)
        )
        ET.SubElement(
            canvas.root,
            "polyline",
            {"points": points, "fill": "none", "stroke": PALETTE[i % len(PALETTE)], "stroke-width": "1.5"},
        )
    canvas.legend([s.label for s in series])
    return canvas.render()


def _histogram(series: Sequence[Series], style: PlotStyle) -> str:
    """Grouped bars: one group per category, one bar per series."""
    categories = list(style.categories) or [str(i) for i in range(len(series[0].y))]
    ys = _finite([y for s in series for y in s.y])
    if not ys:
        raise EmptySeries("no finite values to plot")
    canvas = _Canvas(style)
    y_lo, y_hi = _range(ys, include_zero=True)
    canvas.frame(y_lo, y_hi)
    slot = (canvas.right - canvas.left) / len(categories)
    bar = slot * 0.8 / len(series)
    zero = canvas.y_pixel(0.0, y_lo, y_hi)
    for c, category in enumerate(categories):
        x0 = canvas.left + c * slot + slot * 0.1
        canvas.text(x0 + slot * 0.4, canvas.bottom + 16, category, **{"text-anchor": "middle"})
        for i, s in enumerate(series):
            value = s.y[c] if c < len(s.y) else None
            if value is None or not math.isfinite(value):
                continue
            y = canvas.y_pixel(value, y_lo, y_hi)
            ET.SubElement(
                canvas.root,
                "rect",
                {
                    "class": "bar",
                    "x": _fmt(x0 + i * bar),
                    "y": _fmt(min(y, zero)),
                    "width": _fmt(bar),
                    "height": _fmt(abs(zero - y)),
                    "fill": PALETTE[i % len(PALETTE)],
                },
            )
    canvas.legend([s.label for s in series])
    return canvas.render()


def render_svg(series: Sequence[Series], style: PlotStyle) -> str:
    if not series:
        raise EmptySeries("at least one series is required")
    if style.kind == "histogram":
        return _histogram(series, style)
    return _line_chart(series, style)


def emit_svg_plot(series: Sequence[Series], style: PlotStyle, path: Path) -> None:
    write_atomic(path=path, data=render_svg(series, style))
    logger.info(f"Wrote {style.kind} plot with {len(series)} series to {path}")
