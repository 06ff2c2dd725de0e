"""Planar figure data: points, the circle through A2 A3 A4, and framework styling.

The CSV table is the primary output; the SVG is a static rendering of the
same rows.  Both are byte-stable for identical input.
"""

from __future__ import annotations

import io

import numpy as np

from .dependence import Label
from .errors import UnsupportedDimension, ValidationError
from .geometry import PointConfiguration, Space
from .invariants import circumsphere
from .reports import csv_text, face_key

SVG_SALT = "unyielding"
STYLE = {
    Label.CABLE: {"linestyle": "--", "color": "#1f4e9c"},
    Label.STRUT: {"linestyle": "-", "color": "#b22222"},
    Label.BAR: {"linestyle": "-", "color": "#333333"},
}


def figure_rows(config: PointConfiguration, framework) -> list:
    """Rows ``(kind, name, x, y, value, style)`` describing the figure."""
    if config.space is not Space.EUCLIDEAN:
        raise ValidationError("figures are drawn for planar Euclidean configurations")
    if config.n != 2:
        raise UnsupportedDimension(f"figures need n = 2, got n = {config.n}")
    if config.m < 4:
        raise ValidationError("figures need at least four points")
    pts = config.points
    rows = []
    for i, p in enumerate(pts):
        rows.append(("point", config.labels[i], float(p[0]), float(p[1]), "", ""))
    centre, radius = circumsphere(pts[1:4])
    rows.append(("circle", "".join(config.labels[1:4]), float(centre[0]), float(centre[1]), float(radius), "dotted"))
    d = float(np.linalg.norm(pts[0] - centre))
    where = "on" if abs(d - radius) < 1e-9 * max(radius, 1.0) else ("outside" if d > radius else "inside")
    rows.append(("apex", config.labels[0], float(pts[0][0]), float(pts[0][1]), d - radius, where))
    for face, lab in framework.labels.items():
        cx, cy = pts[list(face)].mean(axis=0)
        rows.append(("face", face_key(face), float(cx), float(cy), framework.k, lab.value))
    return rows


def figure_csv(rows) -> str:
    return csv_text(rows, header=["kind", "name", "x", "y", "value", "style"])


def render_svg(config: PointConfiguration, framework, rows=None) -> str:
    """Static SVG of the configuration, its circumcircle and the labelled faces."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Circle, Polygon

    rows = figure_rows(config, framework) if rows is None else rows
    pts = config.points
    with matplotlib.rc_context({"svg.hashsalt": SVG_SALT, "svg.fonttype": "none", "font.size": 10}):
        fig, ax = plt.subplots(figsize=(4.5, 4.5))
        circle = next(r for r in rows if r[0] == "circle")
        ax.add_patch(Circle((circle[2], circle[3]), circle[4], fill=False, linestyle=":", color="0.4"))
        for face, lab in framework.labels.items():
            style = STYLE[lab]
            if framework.k == 1:
                a, b = pts[list(face)]
                ax.plot([a[0], b[0]], [a[1], b[1]], linewidth=1.6, **style)
            else:
                ax.add_patch(Polygon(pts[list(face)], closed=True, alpha=0.12, facecolor=style["color"],
                                     edgecolor=style["color"], linestyle=style["linestyle"]))
        ax.scatter(pts[:, 0], pts[:, 1], s=18, color="black", zorder=3)
        for label, p in zip(config.labels, pts):
            ax.annotate(label, p, textcoords="offset points", xytext=(5, 5))
        cx, cy, r = circle[2], circle[3], circle[4]
        pad = 0.15 * max(r, float(np.abs(pts).max()))
        ax.set_xlim(min(cx - r, pts[:, 0].min()) - pad, max(cx + r, pts[:, 0].max()) + pad)
        ax.set_ylim(min(cy - r, pts[:, 1].min()) - pad, max(cy + r, pts[:, 1].max()) + pad)
        ax.set_aspect("equal")
        ax.set_title(f"k = {framework.k}, {framework.flavor.value}: cables dashed, struts solid")
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buf.getvalue()


def circle_check(rows) -> tuple:
    """``(centre, radius, apex position verdict)`` read back from figure rows."""
    circle = next(r for r in rows if r[0] == "circle")
    apex = next(r for r in rows if r[0] == "apex")
    return (circle[2], circle[3]), circle[4], apex[5]


__all__ = ["figure_rows", "figure_csv", "render_svg", "circle_check"]
