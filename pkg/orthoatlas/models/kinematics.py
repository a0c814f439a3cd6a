"""
Position kinematics of the wrist center.

With L = d3 + d4 cos(theta3) the chain reduces to

    X = d2 + cos(theta2) L + sin(theta2) r3
    Y = r2 + d4 sin(theta3)
    Z = cos(theta2) r3 - sin(theta2) L

and theta1 rotates (X, Y) about the base z-axis, so rho = hypot(X, Y) and z = Z do not
depend on theta1. All helpers here accept scalars or numpy arrays for theta2/theta3.
"""

import math

import numpy as np

from ..utils import torus_distance, wrap_angle
from .design import CartesianPoint, SectionPoint


def section_coordinates(p, theta2, theta3):
    """Return (X, Y, Z), the wrist center in the frame rotated by -theta1."""
    c2, s2 = np.cos(theta2), np.sin(theta2)
    c3, s3 = np.cos(theta3), np.sin(theta3)
    L = p.d3 + p.d4 * c3
    X = p.d2 + c2 * L + s2 * p.r3
    Y = p.r2 + p.d4 * s3
    Z = c2 * p.r3 - s2 * L
    return X, Y, Z


def section_map(p, theta2, theta3):
    """(rho, z) of the configurations (theta2, theta3)."""
    X, Y, Z = section_coordinates(p, theta2, theta3)
    return np.hypot(X, Y), Z


def fk(p, q):
    X, Y, Z = (float(v) for v in section_coordinates(p, q.theta2, q.theta3))
    c1, s1 = np.cos(q.theta1), np.sin(q.theta1)
    point = CartesianPoint(c1 * X - s1 * Y, s1 * X + c1 * Y, Z)
    return point, SectionPoint(float(np.hypot(X, Y)), Z)


def _partials(p, theta2, theta3):
    c2, s2 = np.cos(theta2), np.sin(theta2)
    c3, s3 = np.cos(theta3), np.sin(theta3)
    L = p.d3 + p.d4 * c3
    X = p.d2 + c2 * L + s2 * p.r3
    Y = p.r2 + p.d4 * s3
    Z = c2 * p.r3 - s2 * L
    # d/dtheta2 of (X, Y, Z) and d/dtheta3 of (X, Y, Z)
    dX2, dY2, dZ2 = Z, 0.0 * Z, -(X - p.d2)
    dX3, dY3, dZ3 = -c2 * p.d4 * s3, p.d4 * c3, s2 * p.d4 * s3
    return (X, Y, Z), (dX2, dY2, dZ2), (dX3, dY3, dZ3)


def jacobian(p, q):
    """Analytic 3x3 position Jacobian d(x, y, z)/d(theta1, theta2, theta3)."""
    (X, Y, Z), (dX2, dY2, dZ2), (dX3, dY3, dZ3) = _partials(p, q.theta2, q.theta3)
    c1, s1 = np.cos(q.theta1), np.sin(q.theta1)
    x, y = c1 * X - s1 * Y, s1 * X + c1 * Y
    return np.array(
        [
            [-y, c1 * dX2 - s1 * dY2, c1 * dX3 - s1 * dY3],
            [x, s1 * dX2 + c1 * dY2, s1 * dX3 + c1 * dY3],
            [0.0, dZ2, dZ3],
        ],
        dtype=float,
    )


def reduced_singularity(p, theta2, theta3):
    """
    Determinant of d(rho^2, z)/d(theta2, theta3).

    det(jacobian) equals S/2 up to sign, so S vanishes exactly on the singular
    configurations, including those whose image lies on the z-axis.
    """
    (X, Y, _), (dX2, _, dZ2), (dX3, dY3, dZ3) = _partials(p, theta2, theta3)
    drho2_2 = 2.0 * X * dX2
    drho2_3 = 2.0 * (X * dX3 + Y * dY3)
    return drho2_2 * dZ3 - drho2_3 * dZ2


def singularity_scale(p):
    """Magnitude of S for lengths of order p.span; S is homogeneous of degree 3."""
    return max(p.span, 1e-300) ** 3


def twin_theta2(p, theta2, theta3):
    """
    For d2 = 0 the configuration (twin, theta3) reaches the same (rho, z) as (theta2, theta3),
    with X mirrored; singular configurations therefore come in twins with one image.
    """
    L = p.d3 + p.d4 * np.cos(theta3)
    return 2.0 * np.arctan2(p.r3, L) - np.pi - np.asarray(theta2)


def image_partners(p, theta2, theta3):
    """
    Configurations other than (theta2, theta3) with the same (rho, z), from the exact symmetries
    of the null parameters: the twin when d2 = 0, theta3 -> -theta3 when r2 = 0 (Y changes sign
    only), and (theta2 + psi, pi - theta3) when d3 = 0 (L changes sign only).
    """
    moves = []
    if p.d2 == 0:
        moves.append(lambda th2, th3: (wrap_angle(twin_theta2(p, th2, th3)), th3))
    if p.r2 == 0:
        moves.append(lambda th2, th3: (th2, wrap_angle(-th3)))
    if p.d3 == 0:
        def flip(th2, th3):
            L = p.d4 * math.cos(th3)
            psi = math.atan2(p.r3, -L) - math.atan2(p.r3, L)
            return wrap_angle(th2 + psi), wrap_angle(math.pi - th3)
        moves.append(flip)

    start = (wrap_angle(float(theta2)), wrap_angle(float(theta3)))
    orbit, frontier = [start], [start]
    # the moves are commuting involutions, so the orbit has at most 8 members
    while frontier and len(orbit) < 8:
        found = []
        for q in frontier:
            for move in moves:
                image = move(*q)
                if all(torus_distance(*image, *known) > 1e-12 for known in orbit):
                    orbit.append(image)
                    found.append(image)
        frontier = found
    return orbit[1:]


def reach_bounds(p, samples=4096):
    """Smallest and largest distance from the base origin over the whole workspace."""
    theta3 = np.linspace(-np.pi, np.pi, samples, endpoint=False)
    L = p.d3 + p.d4 * np.cos(theta3)
    Y = p.r2 + p.d4 * np.sin(theta3)
    M = np.hypot(L, p.r3)
    far = np.sqrt((p.d2 + M) ** 2 + Y ** 2)
    near = np.sqrt((p.d2 - M) ** 2 + Y ** 2)
    return float(near.min()), float(far.max())


def max_reach(p):
    return reach_bounds(p)[1]


def min_reach(p):
    return reach_bounds(p)[0]
