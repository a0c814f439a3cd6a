import numpy as np
import pytest
from scipy import ndimage

from . import UnitTestCase
from ..models import DesignParams
from ..singular import trace
from ..utils.errors import GridTooSmall
from ..workspace import (
    ALL_THE_WORKSPACE,
    BIG,
    INTERMEDIATE,
    SMALL,
    GridSpec,
    IksField,
    aspects,
    cavities,
    hole_bucket,
    iks_field,
    periodic_label,
    region_summary,
    singular_mask,
    size_bucket,
)

GRID = 128


class GridTestCase(UnitTestCase):
    # testing grid validation and the default extent
    def test_grid_spec(self):
        with pytest.raises(GridTooSmall):
            GridSpec(1.0, 32)
        p = DesignParams(1, 2, 1.5, 0, 0)
        g = GridSpec.for_params(p, GRID)
        assert g.rmax == pytest.approx(4.5 * 1.02)
        assert g.rho_centers.size == GRID
        assert g.z_centers.size == 2 * GRID
        assert g.cell_of(0.5 * g.cell, -g.rmax + 0.5 * g.cell) == (0, 0)

    # testing that the outer ring of the raster is empty
    def test_border_ring(self):
        p = DesignParams(1, 2, 1.5, 0, 0)
        field = iks_field(p, GridSpec.for_params(p, GRID))
        assert field.counts.shape == (2 * GRID, GRID)
        assert not field.border_ring().any()
        assert set(np.unique(field.counts)) <= {0, 1, 2, 3, 4}
        assert field.reachable.any()

    # testing that a too small extent is reported
    def test_clipped_workspace(self):
        p = DesignParams(1, 2, 1.5, 0, 0)
        with pytest.raises(GridTooSmall):
            iks_field(p, GridSpec(3.0, 64))


class CavityTestCase(UnitTestCase):
    # testing the void of group J
    def test_group_j_void(self):
        p = DesignParams(1, 0, 2, 0, 1)
        found = cavities(iks_field(p, GridSpec.for_params(p, GRID)))
        assert found.void_count == 1

    # testing a design without voids
    def test_group_b1_no_void(self):
        p = DesignParams(0, 2, 1, 0, 0)
        found = cavities(iks_field(p, GridSpec.for_params(p, GRID)))
        assert found.void_count == 0
        assert 0.0 <= found.hole_ratio <= 1.0

    # testing an empty field
    def test_all_zero_field(self):
        field = IksField(np.zeros((128, 64), dtype=int), GridSpec(1.0, 64))
        found = cavities(field)
        assert found.void_count == 0
        assert found.hole_ratio == 0.0
        assert region_summary(field) == {}

    # testing a synthetic void and the size filter
    def test_synthetic_void(self):
        counts = np.full((128, 64), 2, dtype=int)
        counts[0], counts[-1], counts[:, -1] = 0, 0, 0
        counts[60:63, 30:33] = 0
        counts[20, 10] = 0
        found = cavities(IksField(counts, GridSpec(1.0, 64)))
        assert found.void_count == 1
        assert found.voids[0].cells == 9
        assert cavities(IksField(counts, GridSpec(1.0, 64)), min_cells=1).void_count == 2
        assert region_summary(IksField(counts, GridSpec(1.0, 64))) == {2: 1}

    # testing that unreachable cells reaching the axis form the hole, not a void
    def test_axis_component_is_hole(self):
        counts = np.full((128, 64), 2, dtype=int)
        counts[0], counts[-1], counts[:, -1] = 0, 0, 0
        counts[50:78, 0:12] = 0
        found = cavities(IksField(counts, GridSpec(1.0, 64)))
        assert found.void_count == 0
        g = GridSpec(1.0, 64)
        assert found.hole_ratio == pytest.approx(g.rho_centers[12] / g.rmax)
        assert found.hole_profile[:, 1].min() == pytest.approx(0.5 * g.cell)

    # testing designs whose axis hole is enclosed by the workspace
    def test_enclosed_axis_hole(self):
        for p in (DesignParams(0, 0, 2, 1.5, 0), DesignParams(1, 0, 1.5, 0, 0), DesignParams(1, 1.4, 0.7, 0, 0)):
            with self.subTest(p=p):
                found = cavities(iks_field(p, GridSpec.for_params(p, 2 * GRID)))
                assert found.void_count == (1 if p.d3 == 1.4 else 0)
                for row, column in (v.representative for v in found.voids):
                    assert column > 0

    # testing the mirror symmetry of the field about z = 0 when r3 = 0
    def test_field_symmetry(self):
        for p in (DesignParams(1, 2, 1.5, 0, 0), DesignParams(0, 2, 3, 1, 0), DesignParams(0, 2, 1, 0, 0)):
            with self.subTest(p=p):
                counts = iks_field(p, GridSpec.for_params(p, GRID)).counts
                near = ndimage.binary_dilation(singular_mask(trace(p, 512), GridSpec.for_params(p, GRID)))
                off = ~(near | near[::-1])
                assert np.array_equal(counts[off], counts[::-1][off])


class AspectTestCase(UnitTestCase):
    # testing torus labelling across the seam
    def test_periodic_label(self):
        mask = np.zeros((16, 16), dtype=bool)
        mask[:, 0] = mask[:, -1] = True
        _, count = periodic_label(mask)
        assert count == 1
        mask[:, 7] = True
        _, count = periodic_label(mask)
        assert count == 2

    # testing feasible path ratios
    def test_feasible_ratio(self):
        c = aspects(DesignParams(0, 0, 2, 1.5, 0), self.config.ASPECT_GRID)
        assert c.feasible_ratio >= 0.99
        d3 = aspects(DesignParams(1, 2, 2.5, 0, 0), self.config.ASPECT_GRID)
        assert d3.feasible_ratio < 0.99
        assert d3.count >= 2

    # testing the minimum aspect resolution
    def test_too_coarse(self):
        with pytest.raises(ValueError):
            aspects(DesignParams(0, 2, 1, 0, 0), 64)


class BucketTestCase(UnitTestCase):
    # testing bucket thresholds
    def test_buckets(self):
        assert size_bucket(0.995) == ALL_THE_WORKSPACE
        assert size_bucket(0.99) == ALL_THE_WORKSPACE
        assert size_bucket(0.6) == BIG
        assert size_bucket(0.25) == INTERMEDIATE
        assert size_bucket(0.2) == SMALL
        assert hole_bucket(0.36) == BIG
        assert hole_bucket(0.35) == INTERMEDIATE
        assert hole_bucket(0.15) == INTERMEDIATE
        assert hole_bucket(0.1) == SMALL
