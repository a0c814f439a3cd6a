import numpy as np
import pytest

from . import UnitTestCase
from ..atlas.suite import REFERENCE_DESIGNS
from ..classify import class_rank, numeric_verdict
from ..config.config import config_dict
from ..ikquartic import batch_count, ik
from ..models import FamilyCase, JointConfig, fk, image_partners, reduced_singularity, singularity_scale
from ..singular import default_node_tol, find_cusps, find_nodes, trace
from ..utils import torus_distance
from ..workspace import GridSpec, analyze, cavities, iks_field

pytestmark = pytest.mark.slow


def orbit_size(p, theta2, theta3):
    """Distinct configurations sharing the image of (theta2, theta3) through the exact symmetries."""
    members = [(theta2, theta3)]
    for partner in image_partners(p, theta2, theta3):
        if all(torus_distance(*partner, *known) > 1e-6 for known in members):
            members.append(partner)
    return len(members)


class AcceptanceTestCase(UnitTestCase):
    def setUp(self):
        super().setUp()
        self.settings = config_dict["prod"]

    def grid_for(self, p, n=None):
        return GridSpec.for_params(p, n or self.settings.GRID, self.settings.REACH_MARGIN)

    # testing every example design at the default resolutions
    def test_reference_designs(self):
        settings = self.settings
        for entry in REFERENCE_DESIGNS:
            with self.subTest(group=entry.label):
                g = self.grid_for(entry.params)
                verdict = numeric_verdict(entry.params, g, settings.TRACE, settings.ASPECT_GRID,
                                          settings.MIN_VOID_CELLS)
                assert str(verdict.label) == entry.label
                assert verdict.metrics.node_count == entry.nodes
                assert verdict.metrics.void_count == entry.voids
                assert verdict.metrics.cusp_count == 0
                assert class_rank(verdict.label) in (1, 2, 3)
                if not verdict.analytic.provisional and verdict.analytic.label is not None:
                    assert verdict.agreement

    # testing ik(fk(q)) on random designs of every family
    def test_ik_round_trip(self):
        for case in FamilyCase:
            for _ in range(10):
                p = self.random_design(case)
                for row in self.random_joints(100):
                    q = JointConfig(*row)
                    if abs(reduced_singularity(p, q.theta2, q.theta3)) < 1e-3 * singularity_scale(p):
                        continue
                    point, section = fk(p, q)
                    if section.rho < 1e-3 * p.span:
                        continue
                    solutions = ik(p, point)
                    assert solutions.contains(q, tol=1e-6), (p, q)
                    assert max(solutions.residuals) <= 1e-9 * (1 + point.norm)

    # testing that random designs with a null parameter have no cusp
    def test_random_designs_without_cusps(self):
        for case in FamilyCase:
            for _ in range(100):
                p = self.random_design(case)
                assert find_cusps(p, trace(p, 256)) == [], p

    # testing that singular points do not change when the trace resolution doubles
    def test_trace_stability(self):
        n = self.settings.TRACE
        for entry in REFERENCE_DESIGNS:
            with self.subTest(group=entry.label):
                p = entry.params
                for curves in (trace(p, n), trace(p, 2 * n)):
                    assert len(find_nodes(p, curves, default_node_tol(p))) == entry.nodes
                    assert find_cusps(p, curves) == []

    # testing that voids do not change when the grid resolution doubles
    def test_grid_stability(self):
        n = self.settings.GRID
        for entry in REFERENCE_DESIGNS:
            with self.subTest(group=entry.label):
                p = entry.params
                coarse = cavities(iks_field(p, self.grid_for(p, n)), self.settings.MIN_VOID_CELLS)
                fine = cavities(iks_field(p, self.grid_for(p, 2 * n)), self.settings.MIN_VOID_CELLS)
                assert coarse.void_count == fine.void_count == entry.voids
                assert abs(coarse.hole_ratio - fine.hole_ratio) < 0.02

    # testing that crossing a singular curve changes the count by twice its symmetric preimages
    def test_crossing_parity(self):
        for entry in REFERENCE_DESIGNS:
            with self.subTest(group=entry.label):
                p = entry.params
                eps = 2e-3 * p.span
                pieces = [(curve, k) for curve in trace(p, self.settings.TRACE) for k in range(len(curve.segments()[0]))]
                crossings = 0
                for pick in self.rng.permutation(len(pieces)):
                    curve, k = pieces[pick]
                    first, second = curve.segments()
                    a, b = curve.points[first[k]], curve.points[second[k]]
                    length = float(np.hypot(*(b - a)))
                    middle = 0.5 * (a + b)
                    if length == 0 or middle[0] < 4 * eps:
                        continue
                    normal = np.array([a[1] - b[1], b[0] - a[0]]) / length
                    offsets = np.array([-2 * eps, -eps, eps, 2 * eps])
                    sides = middle + offsets[:, None] * normal
                    counts = batch_count(p, sides[:, 0] ** 2, sides[:, 1])
                    # another curve within 2 eps
                    if counts[0] != counts[1] or counts[2] != counts[3]:
                        continue
                    assert np.all(counts % 2 == 0), (p, counts)
                    change = abs(int(counts[2]) - int(counts[1]))
                    if change == 0:
                        continue
                    theta2, theta3 = curve.source.theta2[first[k]], curve.source.theta3[first[k]]
                    assert change == 2 * orbit_size(p, theta2, theta3), (p, middle, counts)
                    crossings += 1
                    if crossings == 100:
                        break
                assert crossings >= 50

    # testing that metrics and labels do not depend on the length unit
    def test_scale_invariance(self):
        settings = self.settings
        for entry in REFERENCE_DESIGNS[::3]:
            with self.subTest(group=entry.label):
                results = []
                for p in (entry.params, entry.params.scaled(2.0)):
                    results.append(numeric_verdict(p, self.grid_for(p), settings.TRACE, settings.ASPECT_GRID,
                                                   settings.MIN_VOID_CELLS))
                base, scaled = results
                assert scaled.label == base.label
                for name in ("node_count", "cusp_count", "void_count"):
                    assert getattr(scaled.metrics, name) == getattr(base.metrics, name)
                for name in ("quaternary_ratio", "hole_ratio", "feasible_ratio"):
                    assert abs(getattr(scaled.metrics, name) - getattr(base.metrics, name)) < 0.02


class ResolutionTestCase(UnitTestCase):
    # testing that a whole analysis at double resolution keeps the example groups
    def test_double_resolution(self):
        settings = config_dict["prod"]
        for entry in REFERENCE_DESIGNS:
            with self.subTest(group=entry.label):
                p = entry.params
                g = GridSpec.for_params(p, 2 * settings.GRID, settings.REACH_MARGIN)
                result = analyze(p, g, 2 * settings.TRACE, settings.ASPECT_GRID, settings.MIN_VOID_CELLS)
                assert result.metrics.node_count == entry.nodes
                assert result.metrics.void_count == entry.voids
                assert result.metrics.cusp_count == 0
