import logging

import attrs
import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from ..ikquartic import batch_count
from ..utils.errors import GridTooSmall

logger = logging.getLogger(__name__)

CHUNK = 1 << 16
FOUR_CONNECTED = ndimage.generate_binary_structure(2, 1)


def _resolution(instance, attribute, value):
    if value < 64:
        raise GridTooSmall(f"grid resolution must be at least 64 cells, got {value}")


# GRID SPEC
@attrs.frozen
class GridSpec:
    """rho in [0, rmax] with `resolution` cells, z in [-rmax, rmax] with twice as many."""

    rmax: float = attrs.field(converter=float, validator=attrs.validators.gt(0.0))
    resolution: int = attrs.field(converter=int, validator=_resolution)

    @classmethod
    def for_params(cls, p, resolution=512, margin=0.02):
        # the summed link lengths bound the reach; the margin keeps the outer ring empty
        return cls(p.span * (1.0 + margin), resolution)

    @property
    def cell(self):
        return self.rmax / self.resolution

    @property
    def rho_centers(self):
        return (np.arange(self.resolution) + 0.5) * self.cell

    @property
    def z_centers(self):
        return -self.rmax + (np.arange(2 * self.resolution) + 0.5) * self.cell

    def cell_of(self, rho, z):
        """(row, column) indices of the cells containing the points; may fall outside."""
        column = np.floor(np.asarray(rho) / self.cell).astype(int)
        row = np.floor((np.asarray(z) + self.rmax) / self.cell).astype(int)
        return row, column


# IKS FIELD
@attrs.frozen(eq=False)
class IksField:
    """counts[row, column]: rows run along z (bottom to top), columns along rho (axis first)."""

    counts: np.ndarray
    grid: GridSpec

    @property
    def reachable(self):
        return self.counts > 0

    def border_ring(self):
        # the rho = 0 column is the axis of revolution, not a border of the workspace
        return np.concatenate([self.counts[0], self.counts[-1], self.counts[:, -1]])


def iks_field(p, g):
    rho, z = np.meshgrid(g.rho_centers, g.z_centers)
    rho2, z = (rho ** 2).ravel(), z.ravel()
    counts = np.zeros(rho2.size, dtype=np.int8)
    for start in range(0, rho2.size, CHUNK):
        counts[start:start + CHUNK] = batch_count(p, rho2[start:start + CHUNK], z[start:start + CHUNK])
    field = IksField(counts.reshape(2 * g.resolution, g.resolution), g)
    if np.any(field.border_ring()):
        raise GridTooSmall(f"reachable cells on the border of a grid with rmax={g.rmax:g} for {p}")
    logger.debug("iks field %dx%d for %s: %d reachable cells", g.resolution, 2 * g.resolution, p,
                 int(field.reachable.sum()))
    return field


# CAVITIES
@attrs.frozen
class Void:
    area: float
    cells: int
    representative: tuple  # (row, column)


@attrs.frozen(eq=False)
class Cavities:
    voids: tuple
    hole_profile: np.ndarray  # columns: z, rho_min
    hole_ratio: float

    @property
    def void_count(self):
        return len(self.voids)


def cavities(field, min_cells=4):
    """Voids are unreachable components clear of the grid ring and of the axis column.

    Components reaching rho = 0 belong to the hole around the z-axis.
    """
    g = field.grid
    unreachable = ~field.reachable
    labels, count = ndimage.label(unreachable, structure=FOUR_CONNECTED)
    ring = np.concatenate([labels[0], labels[-1], labels[:, -1], labels[:, 0]])
    exterior = set(np.unique(ring)) - {0}
    voids = []
    if count:
        sizes = ndimage.sum_labels(unreachable, labels, index=np.arange(1, count + 1))
        for label in range(1, count + 1):
            if label in exterior or sizes[label - 1] < min_cells:
                continue
            rows, columns = np.nonzero(labels == label)
            first = int(np.lexsort((columns, rows))[0])
            voids.append(Void(float(sizes[label - 1] * g.cell ** 2), int(sizes[label - 1]),
                              (int(rows[first]), int(columns[first]))))

    reached_rows = np.flatnonzero(field.reachable.any(axis=1))
    if reached_rows.size:
        first_column = np.argmax(field.reachable[reached_rows], axis=1)
        profile = np.column_stack([g.z_centers[reached_rows], g.rho_centers[first_column]])
        hole_ratio = float(min(1.0, profile[:, 1].max() / g.rmax))
    else:
        profile = np.empty((0, 2))
        hole_ratio = 0.0
    return Cavities(tuple(voids), profile, hole_ratio)


def region_summary(field, min_cells=4):
    """Connected regions per IKS count, e.g. {2: 2, 4: 1} for two 2-IKS regions and one 4-IKS region."""
    summary = {}
    for value in np.unique(field.counts):
        if value == 0:
            continue
        mask = field.counts == value
        labels, count = ndimage.label(mask, structure=FOUR_CONNECTED)
        if not count:
            continue
        sizes = ndimage.sum_labels(mask, labels, index=np.arange(1, count + 1))
        regions = int(np.sum(sizes >= min_cells))
        if regions:
            summary[int(value)] = regions
    return summary


def singular_mask(curves, g):
    """Cells whose center lies within half a cell diagonal of a singular image curve."""
    mask = np.zeros((2 * g.resolution, g.resolution), dtype=bool)
    pieces = []
    for curve in curves:
        if len(curve) == 0:
            continue
        if len(curve) == 1:
            pieces.append(curve.points)
            continue
        i, j = curve.segments()
        start, end = curve.points[i], curve.points[j]
        length = np.hypot(*(end - start).T)
        steps = np.maximum(1, np.ceil(length / (0.5 * g.cell))).astype(int)
        # densify every segment to half-cell spacing
        owner = np.repeat(np.arange(i.size), steps)
        fraction = (np.arange(owner.size) - np.repeat(np.cumsum(steps) - steps, steps)) / np.repeat(steps, steps)
        pieces.append(start[owner] + fraction[:, None] * (end - start)[owner])
    if not pieces:
        return mask
    tree = cKDTree(np.concatenate(pieces))
    rho, z = np.meshgrid(g.rho_centers, g.z_centers)
    distance, _ = tree.query(np.column_stack([rho.ravel(), z.ravel()]),
                             distance_upper_bound=0.5 * np.sqrt(2.0) * g.cell)
    return np.isfinite(distance).reshape(mask.shape)
