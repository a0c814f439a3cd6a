import logging

import attrs
import numpy as np

from ..singular import default_node_tol, find_cusps, find_nodes, trace
from .aspects import aspects
from .field import cavities, iks_field, region_summary, singular_mask

logger = logging.getLogger(__name__)

ALL_THE_WORKSPACE = "All the workspace"
BIG = "Big"
INTERMEDIATE = "Intermediate"
SMALL = "Small"
SIZE_ORDER = (SMALL, INTERMEDIATE, BIG, ALL_THE_WORKSPACE)


def _ratio(instance, attribute, value):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{attribute.name} must lie in [0, 1], got {value}")


def _count(instance, attribute, value):
    if value < 0:
        raise ValueError(f"{attribute.name} must be nonnegative")


@attrs.frozen
class WorkspaceMetrics:
    node_count: int = attrs.field(validator=_count)
    cusp_count: int = attrs.field(validator=_count)
    void_count: int = attrs.field(validator=_count)
    quaternary_ratio: float = attrs.field(validator=_ratio)
    hole_ratio: float = attrs.field(validator=_ratio)
    feasible_ratio: float = attrs.field(validator=_ratio)

    @property
    def buckets(self):
        return dict(
            quaternary=size_bucket(self.quaternary_ratio),
            holes=hole_bucket(self.hole_ratio),
            feasible=size_bucket(self.feasible_ratio),
        )


@attrs.frozen(eq=False)
class WorkspaceAnalysis:
    """Everything measured for one design; the report and the figure are drawn from it."""

    params: object
    field: object
    cavities: object
    aspects: object
    curves: list
    nodes: list
    cusps: list
    regions: dict
    metrics: WorkspaceMetrics
    trace_resolution: int
    aspect_resolution: int


def size_bucket(ratio):
    if ratio >= 0.99:
        return ALL_THE_WORKSPACE
    if ratio >= 0.60:
        return BIG
    if ratio >= 0.25:
        return INTERMEDIATE
    return SMALL


def hole_bucket(ratio):
    if ratio > 0.35:
        return BIG
    if ratio >= 0.15:
        return INTERMEDIATE
    return SMALL


def quaternary_ratio(field, excluded):
    considered = field.reachable & ~excluded
    total = int(considered.sum())
    if not total:
        return 0.0
    return float(np.sum((field.counts == 4) & considered) / total)


def analyze(p, g, trace_resolution=1024, aspect_resolution=256, min_void_cells=4):
    field = iks_field(p, g)
    found = cavities(field, min_void_cells)
    curves = trace(p, trace_resolution)
    nodes = find_nodes(p, curves, default_node_tol(p))
    cusps = find_cusps(p, curves)
    summary = aspects(p, aspect_resolution)
    measured = WorkspaceMetrics(
        node_count=len(nodes),
        cusp_count=len(cusps),
        void_count=found.void_count,
        quaternary_ratio=quaternary_ratio(field, singular_mask(curves, g)),
        hole_ratio=found.hole_ratio,
        feasible_ratio=min(1.0, summary.feasible_ratio),
    )
    logger.info("metrics for %s: %s", p, measured)
    return WorkspaceAnalysis(
        params=p,
        field=field,
        cavities=found,
        aspects=summary,
        curves=curves,
        nodes=nodes,
        cusps=cusps,
        regions=region_summary(field, min_void_cells),
        metrics=measured,
        trace_resolution=trace_resolution,
        aspect_resolution=aspect_resolution,
    )


def metrics(p, g, trace_resolution=1024, aspect_resolution=256, min_void_cells=4):
    return analyze(p, g, trace_resolution, aspect_resolution, min_void_cells).metrics
