import logging
import math

import attrs
import numpy as np
from scipy import optimize
from scipy.spatial import cKDTree

from ..ikquartic import CLUSTER_TOL, quartic_at, quartic_roots, theta3_candidates
from ..models import (
    SectionPoint,
    image_partners,
    reach_bounds,
    reduced_singularity,
    section_coordinates,
    section_map,
    singularity_scale,
)
from ..utils import torus_distance, wrap_angle
from ..utils.errors import RESOLUTION_WARNING

logger = logging.getLogger(__name__)

# image segments crossing at a smaller angle are treated as overlapping, not intersecting
MIN_CROSSING_SINE = 0.02
AXIS_FRACTION = 1e-3
# refined node and cusp equations are normalized to order one
NODE_RESIDUAL = 1e-7
NODE_LOCATION_TOL = 1e-6
NODE_CLUSTER_TOL = 1e-4
NODE_DEGENERACY_TOL = 1e-8
ROOT_ANGLE_TOL = 1e-3
CUSP_SPEED_FRACTION = 1e-2
CUSP_RESIDUAL = 1e-7
CUSP_CLUSTER_TOL = 5e-3
CUSP_ANGLE_TOL = 2e-2
CUSP_STEP = 1e-6
CUSP_DRIFT = 0.1


@attrs.frozen
class NodePoint:
    location: SectionPoint
    preimages: tuple  # ((theta2, theta3), (theta2, theta3))
    residual: float
    warnings: tuple = ()


@attrs.frozen
class CuspPoint:
    location: SectionPoint
    preimage: tuple
    # theta3 roots (as t) merged into the triple cluster
    witness: tuple = ()


def default_node_tol(p):
    return 1e-4 * 2.0 * reach_bounds(p)[1]


def _segment_table(curves, span):
    rows = []
    for index, curve in enumerate(curves):
        if len(curve) < 2:
            continue
        i, j = curve.segments()
        rows.append(
            np.column_stack(
                [
                    curve.rho[i], curve.z[i], curve.rho[j], curve.z[j],
                    curve.source.theta2[i], curve.source.theta3[i],
                    curve.source.theta2[j], curve.source.theta3[j],
                    np.full(i.size, index),
                ]
            )
        )
    if not rows:
        return np.empty((0, 9))
    table = np.concatenate(rows)
    length = np.hypot(table[:, 2] - table[:, 0], table[:, 3] - table[:, 1])
    # degenerate images (a whole joint branch collapsing onto one point) carry no crossing
    return table[length > 1e-9 * span]


def _segment_crossings(table, sine_min):
    """Candidate transversal crossings between image segments: (i, j, s, t, point)."""
    start, end = table[:, 0:2], table[:, 2:4]
    direction = end - start
    length = np.hypot(direction[:, 0], direction[:, 1])
    tree = cKDTree(0.5 * (start + end))
    pairs = tree.query_pairs(r=float(length.max()), output_type="ndarray")
    if pairs.size == 0:
        return np.empty((0, 2), dtype=int), np.empty(0), np.empty(0), np.empty((0, 2))
    a, b = pairs[:, 0], pairs[:, 1]
    d1, d2 = direction[a], direction[b]
    cross = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
    transversal = np.abs(cross) > sine_min * length[a] * length[b]
    offset = start[b] - start[a]
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (offset[:, 0] * d2[:, 1] - offset[:, 1] * d2[:, 0]) / cross
        t = (offset[:, 0] * d1[:, 1] - offset[:, 1] * d1[:, 0]) / cross
    hit = transversal & (s >= 0) & (s <= 1) & (t >= 0) & (t <= 1)
    points = start[a[hit]] + s[hit, None] * d1[hit]
    return pairs[hit], s[hit], t[hit], points


def _joint_at(row, s):
    """Point on the joint-space segment of a table row, following the short way on the torus."""
    th2 = row[4] + s * wrap_angle(row[6] - row[4])
    th3 = row[5] + s * wrap_angle(row[7] - row[5])
    return wrap_angle(th2), wrap_angle(th3)


def _same_place(p, first, second, radius):
    """True when two preimages are one configuration or images of each other under a symmetry."""
    if torus_distance(first[0], first[1], second[0], second[1]) <= radius:
        return True
    return any(torus_distance(q[0], q[1], second[0], second[1]) <= radius for q in image_partners(p, *first))


def _refine_node(p, first, second):
    scale = singularity_scale(p)
    span2 = max(p.span, 1e-300) ** 2

    def equations(v):
        Xa, Ya, Za = section_coordinates(p, v[0], v[1])
        Xb, Yb, Zb = section_coordinates(p, v[2], v[3])
        return [
            reduced_singularity(p, v[0], v[1]) / scale,
            reduced_singularity(p, v[2], v[3]) / scale,
            (Xa * Xa + Ya * Ya - Xb * Xb - Yb * Yb) / span2,
            (Za - Zb) / max(p.span, 1e-300),
        ]

    start = np.array([*first, *second], dtype=float)
    solution = optimize.root(equations, start, method="hybr", options=dict(xtol=1e-13))
    residual = float(np.linalg.norm(equations(solution.x)))
    # hybr may stop short of `success` where the node preimages are not isolated; the residual decides
    if residual <= float(np.linalg.norm(equations(start))):
        v = solution.x
        return (wrap_angle(v[0]), wrap_angle(v[1])), (wrap_angle(v[2]), wrap_angle(v[3])), residual
    return tuple(first), tuple(second), float(np.linalg.norm(equations(start)))


def theta3_root_set(p, rho, z, cluster_tol, degeneracy_tol=NODE_DEGENERACY_TOL):
    """The theta3 roots at (rho, z): the quartic when d2 > 0, the trigonometric form otherwise."""
    if p.d2 == 0:
        return theta3_candidates(p, rho * rho, z, cluster_tol)
    return quartic_roots(quartic_at(p, rho * rho, z), cluster_tol, degeneracy_tol)


def _matching_root(roots, theta3, tol):
    best = min(roots, key=lambda root: abs(wrap_angle(root.theta3 - theta3)), default=None)
    if best is None or abs(wrap_angle(best.theta3 - theta3)) > tol:
        return None
    return best


def _two_pair_witness(p, first, second, location):
    """
    Two coincident pairs of solutions at the node. For d2 > 0 the quartic has two distinct double
    clusters holding the preimage roots. For d2 = 0 each preimage is a pair on its own: a double
    theta3 root, or X = 0 where the twin configurations meet.
    """
    span = max(p.span, 1e-300)
    roots = theta3_root_set(p, location.rho, location.z, NODE_CLUSTER_TOL)
    if roots.all_theta3:
        return False
    if p.d2 > 0 and sum(1 for root in roots if root.multiplicity >= 2) < 2:
        return False
    for th2, th3 in (first, second):
        X, Y, Z = section_coordinates(p, th2, th3)
        if math.hypot(math.hypot(X, Y) - location.rho, Z - location.z) > NODE_LOCATION_TOL * span:
            return False
        root = _matching_root(roots, th3, ROOT_ANGLE_TOL)
        if root is None:
            return False
        twins_meet = p.d2 == 0 and abs(X) <= 1e-5 * span
        if root.multiplicity < 2 and not twins_meet:
            return False
    return not _same_place(p, first, second, 10.0 * CLUSTER_TOL)


def find_nodes(p, curves, tol=None, trace_step=None):
    """Transversal self- and pairwise intersections of the singular images, off the z-axis."""
    tol = default_node_tol(p) if tol is None else tol
    span = max(p.span, 1e-300)
    table = _segment_table(curves, span)
    if table.shape[0] < 2:
        return []
    pairs, s, t, points = _segment_crossings(table, MIN_CROSSING_SINE)
    if trace_step is None:
        # joint-space sample spacing of the trace
        trace_step = float(np.median(torus_distance(table[:, 4], table[:, 5], table[:, 6], table[:, 7])))
    exclusion = 8.0 * max(trace_step, 1e-6)

    candidates = []
    for (i, j), si, tj, point in zip(pairs, s, t, points):
        if point[0] <= AXIS_FRACTION * span:
            continue
        first, second = _joint_at(table[i], si), _joint_at(table[j], tj)
        if _same_place(p, first, second, exclusion):
            continue
        a, b, residual = _refine_node(p, first, second)
        drift = max(torus_distance(*a, *first), torus_distance(*b, *second))
        X, Y, Z = section_coordinates(p, a[0], a[1])
        location = SectionPoint(float(math.hypot(X, Y)), float(Z))
        if (
            residual > NODE_RESIDUAL
            or drift > exclusion
            or location.rho <= AXIS_FRACTION * span
            or _same_place(p, a, b, exclusion)
            or not _two_pair_witness(p, a, b, location)
        ):
            logger.debug("rejecting node candidate near (%.6f, %.6f)", point[0], point[1])
            continue
        candidates.append((location, (a, b), residual))

    candidates.sort(key=lambda c: (c[0].rho, c[0].z))
    merged = []
    for location, preimages, residual in candidates:
        if any(math.hypot(location.rho - m[0].rho, location.z - m[0].z) <= tol for m in merged):
            continue
        merged.append((location, preimages, residual))

    lengths = np.hypot(table[:, 2] - table[:, 0], table[:, 3] - table[:, 1])
    near = 3.0 * float(np.median(lengths))
    nodes = []
    for location, preimages, residual in merged:
        crowded = any(
            other is not location and 0 < math.hypot(location.rho - other.rho, location.z - other.z) < near
            for other, _, _ in merged
        )
        warnings = (RESOLUTION_WARNING,) if crowded else ()
        if crowded:
            logger.warning("%s: nodes of %s closer than three trace steps near (%.6g, %.6g)",
                           RESOLUTION_WARNING, p, location.rho, location.z)
        nodes.append(NodePoint(location, preimages, residual, warnings))
    return nodes


def cusp_candidates(p, curves, tol=CUSP_SPEED_FRACTION):
    """Vertices where the image of a singular branch stops and turns back."""
    span = max(p.span, 1e-300)
    found = []
    for curve in curves:
        count = len(curve)
        if count < 3:
            continue
        i, j = curve.segments()
        d_image = np.column_stack([curve.rho[j] - curve.rho[i], curve.z[j] - curve.z[i]])
        d_joint = torus_distance(curve.source.theta2[i], curve.source.theta3[i],
                                 curve.source.theta2[j], curve.source.theta3[j])
        with np.errstate(divide="ignore", invalid="ignore"):
            speed = np.hypot(d_image[:, 0], d_image[:, 1]) / d_joint
        typical = np.nanmedian(speed)
        if not typical > 0:
            continue
        for k in range(1, i.size):
            before, after = d_image[k - 1], d_image[k]
            if np.dot(before, after) >= 0:
                continue
            vertex = i[k]
            if curve.rho[vertex] <= AXIS_FRACTION * span:
                continue
            if min(speed[k - 1], speed[k]) < tol * typical:
                found.append((curve, int(vertex)))
    return found


def _refine_cusp(p, theta2, theta3):
    """
    Stationary point of the image of a singular branch: S = 0 and grad S orthogonal to the
    kernel of d(rho^2, z)/d(theta2, theta3), whose rows are parallel there.
    """
    scale = singularity_scale(p)
    span = max(p.span, 1e-300)
    h = CUSP_STEP

    def gradient(fn, v):
        return np.array([
            (fn(v[0] + h, v[1]) - fn(v[0] - h, v[1])) / (2.0 * h),
            (fn(v[0], v[1] + h) - fn(v[0], v[1] - h)) / (2.0 * h),
        ])

    def singularity(th2, th3):
        return reduced_singularity(p, th2, th3) / scale

    def rho2(th2, th3):
        X, Y, _ = section_coordinates(p, th2, th3)
        return (X * X + Y * Y) / (span * span)

    def height(th2, th3):
        return section_coordinates(p, th2, th3)[2] / span

    start = np.array([theta2, theta3], dtype=float)
    # the rank-one map is followed through its larger row
    row = max((rho2, height), key=lambda fn: float(np.linalg.norm(gradient(fn, start))))

    def equations(v):
        r, g = gradient(row, v), gradient(singularity, v)
        return [singularity(*v), r[0] * g[1] - r[1] * g[0]]

    solution = optimize.root(equations, start, method="hybr", options=dict(xtol=1e-12))
    v = solution.x
    if float(np.linalg.norm(equations(v))) > CUSP_RESIDUAL or torus_distance(*v, *start) > CUSP_DRIFT:
        return None
    return wrap_angle(float(v[0])), wrap_angle(float(v[1]))


def _symmetric_fold(p, theta2, theta3):
    """
    A configuration fixed by an image symmetry: the branch retraces its own image there and the
    coincident roots come in symmetric pairs.
    """
    return any(torus_distance(q[0], q[1], theta2, theta3) <= CUSP_ANGLE_TOL for q in image_partners(p, theta2, theta3))


def _triple_root(p, theta3, rho, z):
    """The root cluster of multiplicity >= 3 holding theta3 at (rho, z), as its merged t values."""
    roots = theta3_root_set(p, rho, z, CUSP_CLUSTER_TOL)
    if roots.all_theta3:
        return None
    root = _matching_root(roots, theta3, CUSP_ANGLE_TOL)
    if root is None or root.multiplicity < 3:
        return None
    return (root.t,) * root.multiplicity


def find_cusps(p, curves, tol=CUSP_SPEED_FRACTION):
    cusps = []
    candidates = cusp_candidates(p, curves, tol)
    for curve, vertex in candidates:
        refined = _refine_cusp(p, float(curve.source.theta2[vertex]), float(curve.source.theta3[vertex]))
        if refined is None or _symmetric_fold(p, *refined):
            continue
        rho, z = (float(v) for v in section_map(p, *refined))
        witness = _triple_root(p, refined[1], rho, z)
        if witness is not None:
            cusps.append(CuspPoint(SectionPoint(rho, z), refined, witness))
    logger.debug("%d cusp candidates, %d confirmed for %s", len(candidates), len(cusps), p)
    return cusps
