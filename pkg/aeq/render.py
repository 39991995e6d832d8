"""
SVG drawing of a planar point set and its unit-distance graph.

Each point is a circle with gid "point-<i>", each unit edge a line with gid
"unit-edge-<i>-<j>"; non-edges are not drawn. The layout is the input
coordinates on an equal-aspect axis with a fixed margin, and the SVG carries
no date and a fixed hash salt, so the same input gives the same file.
"""

import logging

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.lines import Line2D  # noqa: E402
from matplotlib.patches import Circle  # noqa: E402

from aeq.config import TolerancePolicy  # noqa: E402
from aeq.errors import InputError  # noqa: E402
from aeq.geometry import build_unit_distance_graph  # noqa: E402

logger = logging.getLogger(__name__)

FIGURE_SIZE = (6.0, 6.0)
MARGIN = 0.25
POINT_RADIUS = 0.03
EDGE_COLOUR = "tab:blue"
POINT_COLOUR = "black"


def _limits(values):
    low, high = float(values.min()), float(values.max())
    centre, half = (low + high) / 2, max(high - low, 1.0) / 2
    return centre - half - MARGIN, centre + half + MARGIN


def render_svg(ps, path, tol=None):
    """
    Draw ps (dim 2) with its unit edges to an SVG file.

    Returns:
        UnitDistanceGraph that was drawn

    Raises:
        InputError: when ps is not planar
    """
    if ps.dim != 2:
        raise InputError(f"only planar point sets can be rendered, got dim {ps.dim}", field="dim")
    tol = tol or TolerancePolicy()
    g = build_unit_distance_graph(ps, tol)
    x = ps.points

    with plt.rc_context({"svg.hashsalt": "aeq", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=FIGURE_SIZE)
        try:
            for i, j in g.sorted_edges():
                ax.add_line(Line2D(
                    [x[i, 0], x[j, 0]], [x[i, 1], x[j, 1]],
                    color=EDGE_COLOUR, linewidth=1.2, zorder=1, gid=f"unit-edge-{i}-{j}",
                ))
            for i, (px, py) in enumerate(x):
                ax.add_patch(Circle((px, py), POINT_RADIUS, color=POINT_COLOUR, zorder=2, gid=f"point-{i}"))

            if ps.n:
                ax.set_xlim(*_limits(x[:, 0]))
                ax.set_ylim(*_limits(x[:, 1]))
            ax.set_aspect("equal")
            ax.set_axis_off()
            fig.savefig(path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)

    logger.info("Rendered %d points and %d unit edges to %s", ps.n, len(g.edges), path)
    return g
