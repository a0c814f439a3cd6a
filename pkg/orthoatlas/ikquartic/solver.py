import logging
import math

import attrs
import numpy as np

from ..models import CartesianPoint, JointConfig, fk, jacobian, reach_bounds, section_coordinates
from ..utils import wrap_angle
from ..utils.errors import InvalidParameters
from .quartic import (
    CLUSTER_TOL,
    DEGENERACY_TOL,
    quartic_at,
    quartic_roots,
    theta3_candidates,
)

logger = logging.getLogger(__name__)

SOLVE_TOL = 1e-9
# two joint solutions closer than this are the same solution
MERGE_TOL = 1e-7


@attrs.frozen
class IkSolutionSet:
    solutions: tuple = ()
    residuals: tuple = ()
    # solutions merged at a singular query or theta2/theta1 left free
    degenerate: bool = False

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def contains(self, q, tol=1e-6):
        return any(solution.distance(q) <= tol for solution in self.solutions)


def _theta2_from(p, theta3, X, z):
    """Solve cos(theta2) L + sin(theta2) r3 = X - d2, cos(theta2) r3 - sin(theta2) L = z."""
    L = p.d3 + p.d4 * math.cos(theta3)
    M2 = L * L + p.r3 * p.r3
    if M2 <= DEGENERACY_TOL * max(p.span, 1e-300) ** 2:
        return None
    u = X - p.d2
    return math.atan2((p.r3 * u - L * z) / M2, (u * L + p.r3 * z) / M2)


def _refine(p, q, target, steps=2):
    """Gauss-Newton polish of a closed-form solution against the forward kinematics."""
    goal = np.array(target.as_tuple())
    for _ in range(steps):
        error = goal - np.array(fk(p, q)[0].as_tuple())
        if not np.any(error):
            break
        step = np.linalg.lstsq(jacobian(p, q), error, rcond=None)[0]
        candidate = JointConfig(*(np.array(q.as_tuple()) + step))
        new_error = goal - np.array(fk(p, candidate)[0].as_tuple())
        if np.linalg.norm(new_error) >= np.linalg.norm(error):
            break
        q = candidate
    return q


def _candidates(p, rho2, z):
    """(theta3, X, multiplicity) triples, X being the in-plane radial coordinate before theta1."""
    degenerate = False
    triples = []
    if p.d2 > 0:
        roots = quartic_roots(quartic_at(p, rho2, z))
        for root in roots:
            theta3 = root.theta3
            L = p.d3 + p.d4 * math.cos(theta3)
            Y = p.r2 + p.d4 * math.sin(theta3)
            R = rho2 + z * z
            u = (R - p.d2 ** 2 - L * L - p.r3 ** 2 - Y * Y) / (2.0 * p.d2)
            triples.append((theta3, p.d2 + u, root.multiplicity))
    else:
        roots = theta3_candidates(p, rho2, z)
        for root in roots:
            theta3 = root.theta3
            Y = p.r2 + p.d4 * math.sin(theta3)
            X2 = rho2 - Y * Y
            if X2 < -CLUSTER_TOL * max(p.span, 1.0) ** 2:
                continue
            X = math.sqrt(max(X2, 0.0))
            if X <= CLUSTER_TOL * max(p.span, 1.0):
                triples.append((theta3, 0.0, 2 * root.multiplicity))
            else:
                triples.append((theta3, X, root.multiplicity))
                triples.append((theta3, -X, root.multiplicity))
    if roots.all_theta3:
        logger.warning("every theta3 solves the inverse kinematics of %s; returning no isolated solution", p)
        degenerate = True
    return triples, degenerate


def ik(p, point, tol=SOLVE_TOL):
    if not tol > 0:
        raise InvalidParameters("tol must be positive")
    if not isinstance(point, CartesianPoint):
        point = CartesianPoint(*point)
    rho2 = point.x ** 2 + point.y ** 2
    if math.sqrt(rho2 + point.z ** 2) > p.span * (1.0 + 1e-9):
        return IkSolutionSet()

    triples, degenerate = _candidates(p, rho2, point.z)
    heading = math.atan2(point.y, point.x)
    limit = tol * (1.0 + point.norm)
    solutions, residuals = [], []
    for theta3, X, multiplicity in triples:
        theta2 = _theta2_from(p, theta3, X, point.z)
        if theta2 is None:
            # L = r3 = 0: theta2 does not move the wrist center
            theta2, degenerate = 0.0, True
        X_, Y_, _ = section_coordinates(p, theta2, theta3)
        q = _refine(p, JointConfig(heading - math.atan2(Y_, X_), theta2, theta3), point)
        residual = float(np.linalg.norm(np.subtract(fk(p, q)[0].as_tuple(), point.as_tuple())))
        if residual > limit:
            logger.debug("dropping candidate %s with residual %.3g", q, residual)
            continue
        if multiplicity > 1:
            degenerate = True
        if any(q.distance(other) <= MERGE_TOL for other in solutions):
            degenerate = True
            continue
        solutions.append(q)
        residuals.append(residual)
    if rho2 <= (CLUSTER_TOL * max(p.span, 1.0)) ** 2 and solutions:
        # on the z-axis theta1 is free
        degenerate = True

    order = sorted(range(len(solutions)), key=lambda i: (solutions[i].theta3, solutions[i].theta2))
    return IkSolutionSet(
        solutions=tuple(solutions[i] for i in order),
        residuals=tuple(residuals[i] for i in order),
        degenerate=degenerate,
    )


def iks_count(p, s, tol=SOLVE_TOL):
    return len(ik(p, s.lift(), tol))


def _dedupe_sorted(values, tol=CLUSTER_TOL):
    """Blank out (nan) values equal to their left neighbour in each sorted row."""
    values = np.sort(values, axis=1)
    same = np.abs(np.diff(values, axis=1)) <= tol * (1.0 + np.abs(values[:, 1:]))
    values[:, 1:][same] = np.nan
    return values


def _batch_quartic(p, rho2, z):
    K = rho2 + z * z - p.d2 ** 2 - p.d3 ** 2 - p.d4 ** 2 - p.r2 ** 2 - p.r3 ** 2
    alpha = K + 2.0 * p.d3 * p.d4
    beta = -4.0 * p.d4 * p.r2
    gamma = K - 2.0 * p.d3 * p.d4
    w = z * z - p.r3 ** 2
    m, n, k = p.d3 - p.d4, p.d3 + p.d4, 4.0 * p.d2 ** 2
    coefficients = np.stack(
        [
            alpha ** 2 + k * (w - m * m),
            2.0 * alpha * beta * np.ones_like(K),
            beta ** 2 + 2.0 * alpha * gamma + k * (2.0 * w - 2.0 * m * n),
            2.0 * beta * gamma,
            gamma ** 2 + k * (w - n * n),
        ],
        axis=1,
    )
    theta3 = np.full((rho2.size, 4), np.nan)
    scale = np.max(np.abs(coefficients), axis=1)
    regular = np.abs(coefficients[:, 0]) > DEGENERACY_TOL * scale
    rows = np.flatnonzero(regular)
    if rows.size:
        monic = coefficients[rows, 1:] / coefficients[rows, :1]
        companion = np.zeros((rows.size, 4, 4))
        companion[:, 0, :] = -monic
        companion[:, 1, 0] = companion[:, 2, 1] = companion[:, 3, 2] = 1.0
        eig = np.linalg.eigvals(companion)
        t = np.where(np.abs(eig.imag) <= CLUSTER_TOL * (1.0 + np.abs(eig.real)), eig.real, np.nan)
        theta3[rows] = 2.0 * np.arctan(_dedupe_sorted(t))
    for row in np.flatnonzero(~regular):
        # rare: theta3 = pi is a root
        found = quartic_roots(quartic_at(p, float(rho2[row]), float(z[row]))).theta3_values
        theta3[row, : len(found)] = found[:4]
    L = p.d3 + p.d4 * np.cos(theta3)
    Y = p.r2 + p.d4 * np.sin(theta3)
    R = (rho2 + z * z)[:, None]
    X = p.d2 + (R - p.d2 ** 2 - L * L - p.r3 ** 2 - Y * Y) / (2.0 * p.d2)
    return theta3, X


def _batch_trig(p, rho2, z):
    A = 2.0 * p.d3 * p.d4
    B = 2.0 * p.r2 * p.d4
    C = p.d3 ** 2 + p.d4 ** 2 + p.r2 ** 2 + p.r3 ** 2 - rho2 - z * z
    H = math.hypot(A, B)
    theta3 = np.full((rho2.size, 4), np.nan)
    X = np.full((rho2.size, 4), np.nan)
    if H == 0:
        return theta3, X
    ratio = -C / H
    ok = np.abs(ratio) <= 1.0 + DEGENERACY_TOL
    spread = np.arccos(np.clip(ratio, -1.0, 1.0))
    phi = math.atan2(B, A)
    first = np.where(ok, phi + spread, np.nan)
    second = np.where(ok & (2.0 * spread > CLUSTER_TOL), phi - spread, np.nan)
    for column, th3 in ((0, first), (2, second)):
        Y = p.r2 + p.d4 * np.sin(th3)
        X2 = rho2 - Y * Y
        valid = X2 >= -CLUSTER_TOL * max(p.span, 1.0) ** 2
        root = np.sqrt(np.clip(X2, 0.0, None))
        split = root > CLUSTER_TOL * max(p.span, 1.0)
        theta3[:, column] = np.where(valid, th3, np.nan)
        X[:, column] = np.where(valid, root, np.nan)
        theta3[:, column + 1] = np.where(valid & split, th3, np.nan)
        X[:, column + 1] = np.where(valid & split, -root, np.nan)
    return theta3, X


def batch_solutions(p, rho2, z):
    """
    Vectorized inverse kinematics on many section points at once.

    Returns (theta2, theta3) arrays of shape (M, 4); absent solutions are nan. theta1 is
    omitted since it only rotates the solution about the base axis.
    """
    rho2 = np.ravel(np.asarray(rho2, dtype=float))
    z = np.ravel(np.asarray(z, dtype=float))
    theta2 = np.full((rho2.size, 4), np.nan)
    theta3 = np.full((rho2.size, 4), np.nan)
    R = rho2 + z * z
    near, far = _reach_window(p)
    inside = np.flatnonzero((R <= far * far) & (R >= near * near))
    if inside.size == 0:
        return theta2, theta3
    if p.d2 > 0:
        th3, X = _batch_quartic(p, rho2[inside], z[inside])
    else:
        th3, X = _batch_trig(p, rho2[inside], z[inside])
    L = p.d3 + p.d4 * np.cos(th3)
    M2 = L * L + p.r3 ** 2
    u = X - p.d2
    zc = z[inside][:, None]
    with np.errstate(invalid="ignore", divide="ignore"):
        th2 = np.arctan2((p.r3 * u - L * zc) / M2, (u * L + p.r3 * zc) / M2)
    th2 = np.where(M2 > 0, th2, np.where(np.isnan(th3), np.nan, 0.0))
    theta2[inside] = th2
    theta3[inside] = wrap_angle(th3)
    return theta2, theta3


def _reach_window(p):
    near, far = reach_bounds(p)
    pad = 1e-3 * max(p.span, 1e-300)
    return max(near - pad, 0.0), far + pad


def batch_count(p, rho2, z):
    theta2, _ = batch_solutions(p, rho2, z)
    return np.sum(~np.isnan(theta2), axis=1)
