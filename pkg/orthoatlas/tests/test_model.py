import math

import numpy as np
import pytest

from . import UnitTestCase
from ..models import (
    DesignParams,
    FamilyCase,
    JointConfig,
    SectionPoint,
    family_case,
    fk,
    image_partners,
    jacobian,
    max_reach,
    min_reach,
    reach_bounds,
    reduced_singularity,
    section_map,
    singularity_scale,
    twin_theta2,
)
from ..utils import wrap_angle
from ..utils.errors import InvalidParameters, NonFinite, OutOfFamily

FAMILY_DESIGNS = [
    DesignParams(0, 2, 1.5, 1, 0),
    DesignParams(0, 2, 1, 0, 0),
    DesignParams(0, 0, 2, 1.5, 0),
    DesignParams(1, 1.4, 0.7, 0, 0),
    DesignParams(1, 0, 1.5, 0, 0),
    DesignParams(0, 1, 2, 1, 1),
    DesignParams(0, 1, 3, 0, 1),
    DesignParams(0, 0, 1, 3, 1),
    DesignParams(1, 3, 0.7, 0, 0.5),
    DesignParams(1, 0, 2, 0, 1),
]


class DesignParamsTestCase(UnitTestCase):
    # testing family case lookup on one design of each case
    def test_family_case(self):
        examples = {
            (0, 2, 1.5, 1, 0): FamilyCase.A,
            (0, 2, 1, 0, 0): FamilyCase.B,
            (0, 0, 2, 1.5, 0): FamilyCase.C,
            (1, 2, 1.5, 0, 0): FamilyCase.D,
            (1, 0, 1.5, 0, 0): FamilyCase.E,
            (0, 1, 2, 1, 1): FamilyCase.F,
            (0, 1, 3, 0, 1): FamilyCase.G,
            (0, 0, 1, 3, 1): FamilyCase.H,
            (1, 3, 0.7, 0, 0.5): FamilyCase.I,
            (1, 0, 2, 0, 1): FamilyCase.J,
        }
        for values, case in examples.items():
            assert family_case(DesignParams(*values)) is case

    # testing that d2 > 0 together with r2 > 0 is rejected
    def test_out_of_family(self):
        with pytest.raises(OutOfFamily) as error:
            family_case(DesignParams(1, 1, 1, 1, 0))
        assert error.value.exit_code == 2

    # testing parameter validation
    def test_invalid_parameters(self):
        with pytest.raises(InvalidParameters):
            DesignParams(-1, 1, 1, 0, 0)
        with pytest.raises(InvalidParameters):
            DesignParams(1, 1, 0, 0, 0)
        with pytest.raises(NonFinite):
            DesignParams(0, math.nan, 1, 0, 0)
        with pytest.raises(NonFinite):
            DesignParams(0, 1, math.inf, 0, 0)

    # testing the free parameters of a case
    def test_free_parameters(self):
        assert FamilyCase.B.free_parameters == ("d3", "d4")
        assert FamilyCase.I.free_parameters == ("d2", "d3", "d4", "r3")

    # testing section point lift
    def test_section_point(self):
        assert SectionPoint(2.0, -1.0).lift().as_tuple() == (2.0, 0.0, -1.0)
        with pytest.raises(ValueError):
            SectionPoint(-1.0, 0.0)


class KinematicsTestCase(UnitTestCase):
    # testing forward kinematics at the home configuration
    def test_fk_home(self):
        p = DesignParams(1, 2, 1.5, 0, 0.5)
        point, section = fk(p, JointConfig(0, 0, 0))
        assert point.as_tuple() == pytest.approx((4.5, 0.0, 0.5))
        assert section.rho == pytest.approx(4.5)
        assert section.z == pytest.approx(0.5)

    # testing that theta1 only rotates the wrist center
    def test_fk_theta1(self):
        p = DesignParams(0, 2, 2.2, 1.5, 0)
        _, first = fk(p, JointConfig(0.0, 0.4, -1.1))
        _, second = fk(p, JointConfig(2.3, 0.4, -1.1))
        assert first.rho == pytest.approx(second.rho)
        assert first.z == pytest.approx(second.z)

    # testing the analytic jacobian against central differences on every family
    def test_jacobian(self):
        h = 1e-5
        for p in FAMILY_DESIGNS:
            for row in self.random_joints(100):
                q = JointConfig(*row)
                numeric = np.zeros((3, 3))
                for k in range(3):
                    step = np.zeros(3)
                    step[k] = h
                    ahead = np.array(fk(p, JointConfig(*(row + step)))[0].as_tuple())
                    behind = np.array(fk(p, JointConfig(*(row - step)))[0].as_tuple())
                    numeric[:, k] = (ahead - behind) / (2 * h)
                analytic = jacobian(p, q)
                error = np.abs(analytic - numeric).max() / max(np.abs(analytic).max(), 1.0)
                assert error <= 1e-6, (p, row)

    # testing det(J) = S / 2 up to sign
    def test_determinant(self):
        p = DesignParams(0, 2, 3, 1, 0.5)
        for row in self.random_joints(20):
            q = JointConfig(*row)
            det = np.linalg.det(jacobian(p, q))
            s = reduced_singularity(p, q.theta2, q.theta3)
            assert abs(det) == pytest.approx(abs(s) / 2, rel=1e-8, abs=1e-10)

    # testing that scaling all lengths scales the section and S
    def test_scale_invariance(self):
        p = DesignParams(1, 0.5, 2, 0, 0.5)
        q = self.random_joints(10)
        rho, z = section_map(p, q[:, 1], q[:, 2])
        rho3, z3 = section_map(p.scaled(3.0), q[:, 1], q[:, 2])
        assert np.allclose(rho3, 3.0 * rho)
        assert np.allclose(z3, 3.0 * z)
        s = reduced_singularity(p, q[:, 1], q[:, 2])
        assert np.allclose(reduced_singularity(p.scaled(3.0), q[:, 1], q[:, 2]), 27.0 * s)
        assert singularity_scale(p.scaled(3.0)) == pytest.approx(27.0 * singularity_scale(p))

    # testing the twin configuration for d2 = 0
    def test_twin(self):
        p = DesignParams(0, 1, 2, 1, 1)
        q = self.random_joints(20)
        twin = twin_theta2(p, q[:, 1], q[:, 2])
        rho, z = section_map(p, q[:, 1], q[:, 2])
        rho_t, z_t = section_map(p, twin, q[:, 2])
        assert np.allclose(rho, rho_t)
        assert np.allclose(z, z_t)
        s = reduced_singularity(p, q[:, 1], q[:, 2])
        s_t = reduced_singularity(p, twin, q[:, 2])
        assert np.allclose(s, -s_t, atol=1e-9)

    # testing that symmetric partners reach the same point
    def test_image_partners(self):
        expected = dict(A=1, B=3, C=3, D=1, E=3, F=1, G=3, H=3, I=1, J=3)
        for case in FamilyCase:
            p = self.random_design(case)
            for _, theta2, theta3 in self.random_joints(20):
                partners = image_partners(p, theta2, theta3)
                assert len(partners) == expected[case.name], (case, p)
                rho, z = section_map(p, theta2, theta3)
                for partner in partners:
                    assert section_map(p, *partner) == pytest.approx((rho, z), abs=1e-9 * p.span)
                    assert abs(reduced_singularity(p, *partner)) == pytest.approx(
                        abs(reduced_singularity(p, theta2, theta3)), abs=1e-9 * singularity_scale(p))

    # testing the reach bounds
    def test_reach_bounds(self):
        p = DesignParams(1, 2, 1.5, 0, 0)
        near, far = reach_bounds(p)
        assert far == pytest.approx(4.5)
        # nearest point at theta3 = pi: |d2 - (d3 - d4)|
        assert near == pytest.approx(0.5, abs=1e-6)
        assert min_reach(p) == near
        assert max_reach(p) == far

    # testing angle wrapping
    def test_wrap_angle(self):
        assert wrap_angle(-math.pi) == pytest.approx(math.pi)
        assert wrap_angle(3 * math.pi / 2) == pytest.approx(-math.pi / 2)
        wrapped = wrap_angle(np.array([-math.pi, 0.0, 7.0]))
        assert wrapped[0] == pytest.approx(math.pi)
        assert wrapped[2] == pytest.approx(7.0 - 2 * math.pi)
