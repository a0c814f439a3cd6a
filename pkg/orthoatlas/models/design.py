import math
from enum import Enum

import attrs

from ..utils import wrap_angle
from ..utils.errors import InvalidParameters, NonFinite, OutOfFamily

PARAM_NAMES = ("d2", "d3", "d4", "r2", "r3")


def _length(instance, attribute, value):
    if not math.isfinite(value):
        raise NonFinite(f"{attribute.name} must be finite, got {value!r}")
    if value < 0:
        raise InvalidParameters(f"{attribute.name} must be nonnegative, got {value!r}")


def _finite(instance, attribute, value):
    if not math.isfinite(value):
        raise NonFinite(f"{attribute.name} must be finite, got {value!r}")


# DESIGN PARAMETERS
@attrs.frozen
class DesignParams:
    """DH lengths of a 3R orthogonal manipulator; alpha2 = -90 deg and alpha3 = 90 deg are fixed."""

    d2: float = attrs.field(converter=float, validator=_length)
    d3: float = attrs.field(converter=float, validator=_length)
    d4: float = attrs.field(converter=float, validator=_length)
    r2: float = attrs.field(converter=float, validator=_length)
    r3: float = attrs.field(converter=float, validator=_length)

    def __attrs_post_init__(self):
        # with d4 = 0 every configuration is singular
        if self.d4 <= 0:
            raise InvalidParameters("d4 must be strictly positive")

    def as_tuple(self):
        return (self.d2, self.d3, self.d4, self.r2, self.r3)

    def as_dict(self):
        return dict(zip(PARAM_NAMES, self.as_tuple()))

    def scaled(self, factor):
        return DesignParams(*(factor * v for v in self.as_tuple()))

    @property
    def span(self):
        """Sum of all link lengths, an upper bound on the reach."""
        return sum(self.as_tuple())

    def __str__(self):
        return "(" + ", ".join(f"{name}={value:g}" for name, value in self.as_dict().items()) + ")"


# Zero patterns of (d2, r2, d3, r3): True means strictly positive
class FamilyCase(Enum):
    A = (False, True, True, False)
    B = (False, False, True, False)
    C = (False, True, False, False)
    D = (True, False, True, False)
    E = (True, False, False, False)
    F = (False, True, True, True)
    G = (False, False, True, True)
    H = (False, True, False, True)
    I = (True, False, True, True)  # noqa: E741
    J = (True, False, False, True)

    @property
    def pattern(self):
        return dict(zip(("d2", "r2", "d3", "r3"), self.value))

    @property
    def free_parameters(self):
        """Parameters that are strictly positive in this case (d4 always is)."""
        return tuple(name for name in PARAM_NAMES if name == "d4" or self.pattern.get(name))


def family_case(p):
    """Locate the manipulator in the ten-case tree; zero means exactly zero."""
    if p.d2 > 0 and p.r2 > 0:
        raise OutOfFamily(
            f"{p} has d2 > 0 and r2 > 0; this family is outside the ten null-parameter cases"
        )
    return FamilyCase((p.d2 > 0, p.r2 > 0, p.d3 > 0, p.r3 > 0))


# JOINT CONFIGURATION
@attrs.frozen
class JointConfig:
    theta1: float = attrs.field(converter=wrap_angle, validator=_finite)
    theta2: float = attrs.field(converter=wrap_angle, validator=_finite)
    theta3: float = attrs.field(converter=wrap_angle, validator=_finite)

    def as_tuple(self):
        return (self.theta1, self.theta2, self.theta3)

    def distance(self, other):
        """Largest wrapped angular difference between two configurations."""
        return max(abs(wrap_angle(a - b)) for a, b in zip(self.as_tuple(), other.as_tuple()))


@attrs.frozen
class CartesianPoint:
    x: float = attrs.field(converter=float, validator=_finite)
    y: float = attrs.field(converter=float, validator=_finite)
    z: float = attrs.field(converter=float, validator=_finite)

    def as_tuple(self):
        return (self.x, self.y, self.z)

    @property
    def norm(self):
        return math.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2)


@attrs.frozen
class SectionPoint:
    """Point of the half cross-section; rho is the distance to the base z-axis."""

    rho: float = attrs.field(converter=float, validator=[_finite, attrs.validators.ge(0.0)])
    z: float = attrs.field(converter=float, validator=_finite)

    def lift(self):
        return CartesianPoint(self.rho, 0.0, self.z)

    def as_tuple(self):
        return (self.rho, self.z)
