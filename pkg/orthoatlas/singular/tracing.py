"""
Singularity curves in joint space and their images in the half cross-section.

S(theta2, theta3) is sampled on a torus grid of n theta3 rows and 4n theta2 columns, offset by
half a step so that the lines theta3 = 0, pi and theta2 = +-pi/2 never carry samples. Every
grid edge whose end values differ in sign holds one crossing, refined by bisection. Crossings
along rows are the theta3-slice roots; crossings along columns catch the pieces of curve that
run at constant theta3 (for instance sin(theta3) = 0 when d2 = r2 = r3 = 0). Crossings are
linked cell by cell, marching-squares style; saddle cells are split according to the sign of
S at the cell center. On the torus every linked chain closes.
"""

import logging

import attrs
import numpy as np
from scipy import optimize

from ..models import reduced_singularity, section_map, singularity_scale
from ..utils import wrap_angle
from ..utils.errors import SINGULAR_SET_EMPTY

logger = logging.getLogger(__name__)

BISECTION_WIDTH = 1e-10
TANGENT_TOL = 1e-12
ROW_BLOCK = 128


@attrs.frozen(eq=False)
class JointCurve:
    theta2: np.ndarray
    theta3: np.ndarray
    branch: int
    closed: bool = True

    def __len__(self):
        return len(self.theta2)

    @property
    def points(self):
        return np.column_stack([self.theta2, self.theta3])


@attrs.frozen(eq=False)
class SectionCurve:
    rho: np.ndarray
    z: np.ndarray
    source: JointCurve

    def __len__(self):
        return len(self.rho)

    @property
    def closed(self):
        return self.source.closed

    @property
    def branch(self):
        return self.source.branch

    @property
    def points(self):
        return np.column_stack([self.rho, self.z])

    def segments(self):
        """Index pairs (i, i + 1) of the polyline, including the closing one."""
        count = len(self)
        first = np.arange(count if self.closed and count > 2 else count - 1)
        return first, (first + 1) % count


@attrs.frozen(eq=False)
class TraceGrid:
    theta2: np.ndarray
    theta3: np.ndarray
    values: np.ndarray  # values[k, j] = S(theta2[j], theta3[k])

    @property
    def steps(self):
        return (2.0 * np.pi / self.theta2.size, 2.0 * np.pi / self.theta3.size)


def sample_grid(p, n):
    rows, columns = n, 4 * n
    theta3 = -np.pi + (np.arange(rows) + 0.5) * 2.0 * np.pi / rows
    theta2 = -np.pi + (np.arange(columns) + 0.5) * 2.0 * np.pi / columns
    values = np.empty((rows, columns))
    for start in range(0, rows, ROW_BLOCK):
        block = theta3[start:start + ROW_BLOCK, None]
        values[start:start + ROW_BLOCK] = reduced_singularity(p, theta2[None, :], block)
    return TraceGrid(theta2, theta3, values)


def _bisect(fn, lo, hi, sign_lo):
    """Vectorized bisection; sign_lo is the sign of fn at lo (never zero)."""
    lo, hi = lo.copy(), hi.copy()
    while np.max(hi - lo, initial=0.0) > BISECTION_WIDTH:
        mid = 0.5 * (lo + hi)
        same = np.where(fn(mid) >= 0, 1.0, -1.0) == sign_lo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def _crossings(p, grid):
    sign = np.where(grid.values >= 0, 1.0, -1.0)
    step2, step3 = grid.steps
    rows, columns = sign.shape

    # along rows: between (k, j) and (k, j + 1)
    row_hits = sign != np.roll(sign, -1, axis=1)
    k, j = np.nonzero(row_hits)
    lo = grid.theta2[j]
    th3 = grid.theta3[k]
    row_theta2 = _bisect(lambda t: reduced_singularity(p, t, th3), lo, lo + step2, sign[k, j])
    row_points = (wrap_angle(row_theta2), th3)

    # along columns: between (k, j) and (k + 1, j)
    column_hits = sign != np.roll(sign, -1, axis=0)
    k2, j2 = np.nonzero(column_hits)
    lo = grid.theta3[k2]
    th2 = grid.theta2[j2]
    column_theta3 = _bisect(lambda t: reduced_singularity(p, th2, t), lo, lo + step3, sign[k2, j2])
    column_points = (th2, wrap_angle(column_theta3))

    index = np.full((2, rows, columns), -1, dtype=np.int64)
    index[0][row_hits] = np.arange(k.size)
    index[1][column_hits] = k.size + np.arange(k2.size)
    theta2 = np.concatenate([row_points[0], column_points[0]])
    theta3 = np.concatenate([row_points[1], column_points[1]])
    return index, theta2, theta3, sign


def _links(p, grid, index, sign):
    """Pairs of crossing ids joined inside each grid cell."""
    rows, columns = sign.shape
    bottom = index[0]
    top = np.roll(index[0], -1, axis=0)
    left = index[1]
    right = np.roll(index[1], -1, axis=1)
    hits = (bottom >= 0).astype(int) + (top >= 0) + (left >= 0) + (right >= 0)

    pairs = []
    k, j = np.nonzero(hits == 2)
    edges = np.stack([bottom[k, j], top[k, j], left[k, j], right[k, j]], axis=1)
    for row in edges:
        a, b = row[row >= 0]
        pairs.append((a, b))

    k, j = np.nonzero(hits == 4)
    if k.size:
        step2, step3 = grid.steps
        center = reduced_singularity(p, grid.theta2[j] + 0.5 * step2, grid.theta3[k] + 0.5 * step3)
        corner = sign[k, j]
        for kk, jj, c, s00 in zip(k, j, center, corner):
            b, t, l, r = bottom[kk, jj], top[kk, jj], left[kk, jj], right[kk, jj]
            if (1.0 if c >= 0 else -1.0) == s00:
                # the (k, j) and (k+1, j+1) corners are joined; cut off the other two
                pairs.extend([(b, r), (l, t)])
            else:
                pairs.extend([(b, l), (t, r)])
    return pairs


def _chains(count, pairs):
    neighbours = [[] for _ in range(count)]
    for a, b in pairs:
        neighbours[a].append(b)
        neighbours[b].append(a)
    visited = np.zeros(count, dtype=bool)
    chains = []
    for start in range(count):
        if visited[start]:
            continue
        chain, previous, current = [start], -1, start
        visited[start] = True
        closed = False
        while True:
            ahead = [v for v in neighbours[current] if v != previous]
            if not ahead:
                break
            following = ahead[0]
            if following == start:
                closed = True
                break
            if visited[following]:
                break
            chain.append(following)
            visited[following] = True
            previous, current = current, following
        chains.append((chain, closed))
    return chains


def _tangential_zeros(p, grid):
    """Zeros of S without a sign change: local minima of |S| refined below TANGENT_TOL."""
    magnitude = np.abs(grid.values)
    sign = np.where(grid.values >= 0, 1.0, -1.0)
    is_min = np.ones_like(magnitude, dtype=bool)
    uniform = np.ones_like(magnitude, dtype=bool)
    for dk in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if dk == 0 and dj == 0:
                continue
            shifted = np.roll(np.roll(magnitude, dk, axis=0), dj, axis=1)
            is_min &= magnitude < shifted
            uniform &= sign == np.roll(np.roll(sign, dk, axis=0), dj, axis=1)
    scale = singularity_scale(p)
    # a nearby tangential zero makes |S| tiny compared with its neighbourhood
    small = magnitude < 1e-4 * scale
    found = []
    for k, j in zip(*np.nonzero(is_min & uniform & small)):
        start = np.array([grid.theta2[j], grid.theta3[k]])
        result = optimize.minimize(
            lambda v: abs(reduced_singularity(p, v[0], v[1])) / scale,
            start,
            method="Nelder-Mead",
            options=dict(xatol=1e-12, fatol=1e-16, maxiter=400),
        )
        if result.fun < TANGENT_TOL:
            found.append((wrap_angle(result.x[0]), wrap_angle(result.x[1])))
    return found


def singular_branches(p, n=1024):
    if n < 64:
        raise ValueError("trace resolution n must be at least 64")
    grid = sample_grid(p, n)
    index, theta2, theta3, sign = _crossings(p, grid)
    pairs = _links(p, grid, index, sign)
    curves = []
    for chain, closed in _chains(theta2.size, pairs):
        chain = np.asarray(chain)
        curves.append(JointCurve(theta2[chain], theta3[chain], branch=len(curves), closed=closed))
    for th2, th3 in _tangential_zeros(p, grid):
        logger.debug("tangential zero of S at (%.6f, %.6f)", th2, th3)
        curves.append(JointCurve(np.array([th2]), np.array([th3]), branch=len(curves), closed=False))
    if not curves:
        logger.warning("%s: %s for %s", SINGULAR_SET_EMPTY, "no zero of S on the trace grid", p)
    logger.debug("traced %d singular branches for %s at n=%d", len(curves), p, n)
    return curves


def section_image(curve, p):
    rho, z = section_map(p, curve.theta2, curve.theta3)
    return SectionCurve(np.asarray(rho, dtype=float), np.asarray(z, dtype=float), curve)


def trace(p, n=1024):
    """Singular branches and their images, in matching order."""
    return [section_image(curve, p) for curve in singular_branches(p, n)]
