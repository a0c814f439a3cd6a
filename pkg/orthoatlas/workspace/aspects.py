"""
Aspects: connected components of the singularity-free joint torus. Inside one aspect every
path avoiding the singular set is feasible, so the share of the workspace an aspect reaches
measures the region of feasible paths.
"""

import logging

import attrs
import numpy as np
from scipy import ndimage

from ..ikquartic import batch_solutions
from ..models import reduced_singularity, singularity_scale
from .field import FOUR_CONNECTED, GridSpec

logger = logging.getLogger(__name__)

BAND_TOL = 1e-9


@attrs.frozen(eq=False)
class AspectSummary:
    labels: np.ndarray  # (m, m) over (theta3 rows, theta2 columns); 0 marks the singular band
    joint_fractions: tuple
    coverage: tuple
    band_fraction: float

    @property
    def count(self):
        return len(self.joint_fractions)

    @property
    def feasible_ratio(self):
        return max(self.coverage, default=0.0)


def _find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


def periodic_label(mask):
    """4-connected components of a boolean array on the torus (both axes wrap)."""
    labels, count = ndimage.label(mask, structure=FOUR_CONNECTED)
    parent = list(range(count + 1))
    for a, b in ((labels[0], labels[-1]), (labels[:, 0], labels[:, -1])):
        for x, y in zip(a, b):
            if x and y:
                rx, ry = _find(parent, x), _find(parent, y)
                if rx != ry:
                    parent[max(rx, ry)] = min(rx, ry)
    roots = np.array([_find(parent, label) for label in range(count + 1)])
    # renumber roots 1..k in order of first appearance
    unique = np.unique(roots[1:]) if count else np.array([], dtype=int)
    renumber = np.zeros(count + 1, dtype=int)
    for new, root in enumerate(unique, start=1):
        renumber[roots == root] = new
    return renumber[labels], unique.size


def joint_aspects(p, m):
    centers = -np.pi + (np.arange(m) + 0.5) * 2.0 * np.pi / m
    values = reduced_singularity(p, centers[None, :], centers[:, None])
    band = np.abs(values) <= BAND_TOL * singularity_scale(p)
    positive, n_positive = periodic_label((values > 0) & ~band)
    negative, n_negative = periodic_label((values < 0) & ~band)
    labels = np.where(negative > 0, negative + n_positive, positive)
    return labels, n_positive + n_negative, float(band.mean())


def aspects(p, m=256, grid=None, field=None):
    if m < 128:
        raise ValueError("aspect grid resolution must be at least 128")
    labels, count, band_fraction = joint_aspects(p, m)
    fractions = tuple(float(np.mean(labels == k)) for k in range(1, count + 1))

    if field is not None:
        grid = field.grid
    grid = grid or GridSpec.for_params(p, max(64, m // 2))
    rho, z = np.meshgrid(grid.rho_centers, grid.z_centers)
    rho, z = rho.ravel(), z.ravel()
    if field is not None:
        keep = field.reachable.ravel()
        rho, z = rho[keep], z[keep]
    theta2, theta3 = batch_solutions(p, rho ** 2, z)
    found = ~np.isnan(theta2)
    column = np.floor((np.nan_to_num(theta2) + np.pi) / (2.0 * np.pi) * m).astype(int) % m
    row = np.floor((np.nan_to_num(theta3) + np.pi) / (2.0 * np.pi) * m).astype(int) % m
    solution_labels = np.where(found, labels[row, column], 0)

    covered = np.any(solution_labels > 0, axis=1)
    total = int(covered.sum())
    coverage = tuple(
        float(np.any(solution_labels == k, axis=1).sum() / total) if total else 0.0
        for k in range(1, count + 1)
    )
    logger.debug("%d aspects for %s, coverage %s", count, p, ["%.3f" % c for c in coverage])
    return AspectSummary(labels, fractions, coverage, band_fraction)
