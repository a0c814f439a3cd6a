"""
The inverse kinematic polynomial in t = tan(theta3 / 2).

For d2 > 0, rho^2 + z^2 and z are linear in (cos theta2, sin theta2); eliminating theta2 with
cos^2 + sin^2 = 1 leaves

    (K - 2 d4 (d3 c3 + r2 s3))^2 + 4 d2^2 (z^2 - r3^2 - (d3 + d4 c3)^2) = 0,
    K = rho^2 + z^2 - d2^2 - d3^2 - d4^2 - r2^2 - r3^2,

which becomes a quartic after the half-angle substitution. Its leading coefficient is the
left-hand side evaluated at theta3 = pi, so a vanishing `a` means theta3 = pi is a root.

For d2 = 0 the same elimination collapses to A cos theta3 + B sin theta3 + C = 0.
"""

import math

import attrs
import numpy as np

from ..utils import wrap_angle
from ..utils.errors import DegenerateElimination

CLUSTER_TOL = 1e-7
DEGENERACY_TOL = 1e-10
AT_INFINITY = math.inf


@attrs.frozen
class Quartic:
    a: float
    b: float
    c: float
    d: float
    e: float

    @property
    def coefficients(self):
        return np.array([self.a, self.b, self.c, self.d, self.e], dtype=float)

    @property
    def scale(self):
        return float(np.max(np.abs(self.coefficients)))

    def __call__(self, t):
        return np.polyval(self.coefficients, t)

    def derivative(self, order=1):
        return np.polyder(self.coefficients, order)


@attrs.frozen
class Root:
    """A root in t; t = AT_INFINITY stands for theta3 = pi."""

    t: float
    multiplicity: int = 1

    @property
    def at_infinity(self):
        return math.isinf(self.t)

    @property
    def theta3(self):
        return math.pi if self.at_infinity else wrap_angle(2.0 * math.atan(self.t))


@attrs.frozen
class RootSet:
    roots: tuple = ()
    # every theta3 solves the equation (constant zero polynomial)
    all_theta3: bool = False

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    @property
    def total_multiplicity(self):
        return sum(root.multiplicity for root in self.roots)

    @property
    def max_multiplicity(self):
        return max((root.multiplicity for root in self.roots), default=0)

    @property
    def theta3_values(self):
        return [root.theta3 for root in self.roots]


def _theta3_to_t(theta3):
    theta3 = wrap_angle(theta3)
    if abs(theta3 - math.pi) <= 1e-12:
        return AT_INFINITY
    return math.tan(theta3 / 2.0)


def quartic_at(p, rho2, z):
    if p.d2 == 0:
        raise DegenerateElimination("quartic elimination divides by d2; use theta3_candidates when d2 = 0")
    if rho2 < 0:
        raise ValueError("rho^2 must be nonnegative")
    K = rho2 + z * z - p.d2 ** 2 - p.d3 ** 2 - p.d4 ** 2 - p.r2 ** 2 - p.r3 ** 2
    alpha = K + 2.0 * p.d3 * p.d4
    beta = -4.0 * p.d4 * p.r2
    gamma = K - 2.0 * p.d3 * p.d4
    w = z * z - p.r3 ** 2
    m = p.d3 - p.d4
    n = p.d3 + p.d4
    k = 4.0 * p.d2 ** 2
    return Quartic(
        a=alpha ** 2 + k * (w - m * m),
        b=2.0 * alpha * beta,
        c=beta ** 2 + 2.0 * alpha * gamma + k * (2.0 * w - 2.0 * m * n),
        d=2.0 * beta * gamma,
        e=gamma ** 2 + k * (w - n * n),
    )


def _polish(coefficients, t, steps=3):
    """A few Newton steps, kept only while they reduce |P|."""
    deriv = np.polyder(coefficients)
    best, best_value = t, abs(np.polyval(coefficients, t))
    for _ in range(steps):
        slope = np.polyval(deriv, best)
        if slope == 0:
            break
        candidate = best - np.polyval(coefficients, best) / slope
        value = abs(np.polyval(coefficients, candidate))
        if not value < best_value:
            break
        best, best_value = candidate, value
    return float(best)


def cluster_values(values, tol=CLUSTER_TOL):
    """Merge sorted reals closer than tol * (1 + |t|); returns [(mean, count)]."""
    clusters = []
    for value in sorted(values):
        if clusters and abs(value - clusters[-1][-1]) <= tol * (1.0 + abs(value)):
            clusters[-1].append(value)
        else:
            clusters.append([value])
    return [(float(np.mean(group)), len(group)) for group in clusters]


def quartic_roots(quartic, cluster_tol=CLUSTER_TOL, degeneracy_tol=DEGENERACY_TOL):
    """Real roots of the quartic with multiplicities, including the one at infinity."""
    coefficients = quartic.coefficients
    scale = quartic.scale
    if scale == 0:
        return RootSet(all_theta3=True)
    # every vanishing leading coefficient is one root at theta3 = pi
    leading = 0
    while leading < 4 and abs(coefficients[leading]) <= degeneracy_tol * scale:
        leading += 1
    trimmed = coefficients[leading:]
    raw = np.roots(trimmed) if trimmed.size > 1 else np.array([])
    real = [
        _polish(trimmed, float(r.real))
        for r in raw
        if abs(r.imag) <= cluster_tol * (1.0 + abs(r.real))
    ]
    roots = [Root(t, count) for t, count in cluster_values(real, cluster_tol)]
    if leading:
        roots.append(Root(AT_INFINITY, leading))
    return RootSet(tuple(roots))


def trig_coefficients(p, rho2, z):
    A = 2.0 * p.d3 * p.d4
    B = 2.0 * p.r2 * p.d4
    C = p.d3 ** 2 + p.d4 ** 2 + p.r2 ** 2 + p.r3 ** 2 - rho2 - z * z
    return A, B, C


def trig_residual(p, rho2, z, theta3):
    A, B, C = trig_coefficients(p, rho2, z)
    return A * math.cos(theta3) + B * math.sin(theta3) + C


def theta3_candidates(p, rho2, z, cluster_tol=CLUSTER_TOL):
    if p.d2 != 0:
        raise DegenerateElimination("theta3_candidates applies to d2 = 0 only; use quartic_at")
    A, B, C = trig_coefficients(p, rho2, z)
    scale = max(abs(A), abs(B), abs(C), p.span ** 2, 1e-300)
    H = math.hypot(A, B)
    if H <= DEGENERACY_TOL * scale:
        if abs(C) <= DEGENERACY_TOL * scale:
            return RootSet(all_theta3=True)
        return RootSet()
    ratio = -C / H
    if abs(ratio) > 1.0 + DEGENERACY_TOL:
        return RootSet()
    phi = math.atan2(B, A)
    spread = math.acos(max(-1.0, min(1.0, ratio)))
    first = _theta3_to_t(phi + spread)
    second = _theta3_to_t(phi - spread)
    if abs(wrap_angle(2.0 * spread)) <= cluster_tol or first == second:
        return RootSet((Root(first, 2),))
    return RootSet(tuple(sorted((Root(first), Root(second)), key=lambda r: r.t)))
