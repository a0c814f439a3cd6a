"""SVG figures: the workspace cross-section and the sweep zone map."""

import os

import numpy as np
from jinja2 import Environment, FileSystemLoader, select_autoescape

TEMPLATES_DIR = os.path.join(os.path.dirname(os.path.realpath(__file__)), "templates")

FOUR_IKS = "#404040"
TWO_IKS = "#C0C0C0"
UNDETERMINED = "#FFFFFF"

# one color per group of a case; groups are drawn by their index inside the case
ZONE_PALETTE = ("#8DD3C7", "#FFFFB3", "#BEBADA", "#FB8072", "#80B1D3")

env = Environment(
    loader=FileSystemLoader(TEMPLATES_DIR),
    autoescape=select_autoescape(enabled_extensions=("svg.j2",)),
    keep_trailing_newline=True,
)


def _px(value):
    return f"{value:.3f}"


def _runs(row):
    """(start, stop, value) for every run of equal values in a 1-d array."""
    edges = np.flatnonzero(np.diff(row)) + 1
    starts = np.concatenate([[0], edges])
    stops = np.concatenate([edges, [len(row)]])
    return zip(starts, stops, row[starts])


def _iks_fill(count):
    if count >= 3:
        return FOUR_IKS
    if count >= 1:
        return TWO_IKS
    return None


def cross_section_svg(analysis, width=400, margin=30):
    """Half-plane rho >= 0; one polyline per traced section curve."""
    field = analysis.field
    g = field.grid
    scale = width / g.rmax
    cell = g.cell * scale
    height = 2 * width

    def x_of(rho):
        return margin + rho * scale

    def y_of(z):
        return margin + (g.rmax - z) * scale

    cells = []
    # rows are stored bottom to top
    for row_index, row in enumerate(field.counts):
        top = y_of(g.z_centers[row_index] + 0.5 * g.cell)
        for start, stop, count in _runs(row):
            fill = _iks_fill(count)
            if fill is None:
                continue
            cells.append(dict(
                x=_px(margin + start * cell), y=_px(top), w=_px((stop - start) * cell), h=_px(cell), fill=fill,
            ))

    curves = []
    for curve in analysis.curves:
        rho, z = curve.rho, curve.z
        if curve.closed and len(curve) > 2:
            rho, z = np.append(rho, rho[0]), np.append(z, z[0])
        curves.append(" ".join(f"{_px(x_of(r))},{_px(y_of(h))}" for r, h in zip(rho, z)))

    nodes = [dict(x=round(x_of(n.location.rho), 3), y=round(y_of(n.location.z), 3)) for n in analysis.nodes]
    cusps = [dict(x=round(x_of(c.location.rho), 3), y=round(y_of(c.location.z), 3)) for c in analysis.cusps]
    template = env.get_template("cross_section.svg.j2")
    return template.render(
        width=width + 2 * margin,
        height=height + 2 * margin,
        margin=margin,
        origin=dict(x=x_of(0.0), y=y_of(0.0)),
        params=str(analysis.params),
        cells=cells,
        curves=curves,
        nodes=nodes,
        cusps=cusps,
    )


def zone_colors(labels):
    return {label: ZONE_PALETTE[i % len(ZONE_PALETTE)] for i, label in enumerate(labels)}


def zone_map_svg(sweep, width=480, margin=40, legend_width=70):
    """sweep: a Sweep from views, holding the axes, the per-cell rows and the transition points."""
    colors = zone_colors([str(label) for label in sweep.labels])
    nx, ny = len(sweep.xs), len(sweep.ys)
    cell_w, cell_h = width / nx, width / ny
    cells = []
    for row in sweep.rows:
        label = row["label"]
        cells.append(dict(
            x=_px(margin + row["i"] * cell_w),
            y=_px(margin + (ny - 1 - row["j"]) * cell_h),
            w=_px(cell_w),
            h=_px(cell_h),
            fill=colors.get(label, UNDETERMINED),
            label=label,
            hatched=row["indeterminate"],
        ))

    x_lo, x_hi = sweep.xs[0], sweep.xs[-1]
    y_lo, y_hi = sweep.ys[0], sweep.ys[-1]
    transitions = []
    for x, y in sweep.transitions:
        fx = 0.5 if x_hi == x_lo else (x - x_lo) / (x_hi - x_lo)
        fy = 0.5 if y_hi == y_lo else (y - y_lo) / (y_hi - y_lo)
        # cell centers sit half a cell inside the plot edges
        transitions.append(dict(
            x=_px(margin + 0.5 * cell_w + fx * (width - cell_w)),
            y=_px(margin + width - 0.5 * cell_h - fy * (width - cell_h)),
        ))

    template = env.get_template("zone_map.svg.j2")
    return template.render(
        width=width + 2 * margin + legend_width,
        height=width + 2 * margin,
        margin=margin,
        right=margin + width,
        bottom=margin + width,
        case=sweep.case.name,
        cells=cells,
        transitions=transitions,
        x_name=sweep.x_name,
        y_name=sweep.y_name,
        x_range=f"{x_lo:g}..{x_hi:g}",
        y_range=f"{y_lo:g}..{y_hi:g}",
        legend=[dict(label=label, fill=fill) for label, fill in colors.items()],
    )
