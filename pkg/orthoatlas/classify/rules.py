"""
Analytic group rules. They are advisory: several transition formulas in the source
classification are known to be unreliable, and the numeric verdict has the final word.
"""

import math

import attrs

from ..models import PARAM_NAMES, DesignParams, FamilyCase, family_case
from ..utils.errors import PROVISIONAL_RULE
from .groups import GroupLabel

EQUALITY_TOL = 1e-9


@attrs.frozen
class TransitionAux:
    a: float
    b: float
    # case I threshold for d4 / d2; None where d3 <= d2
    delta: float = None


@attrs.frozen
class RuleOutcome:
    label: GroupLabel = None
    rule: str = ""
    warnings: tuple = ()

    @property
    def indeterminate(self):
        return self.label is None

    @property
    def provisional(self):
        return PROVISIONAL_RULE in self.warnings


@attrs.frozen
class TransitionCurve:
    """Implicit transition curve: the zero set of `fn(params)`; nan where the curve does not apply."""

    name: str
    equation: str
    fn: object = attrs.field(eq=False, repr=False)


def _delta_squared(p):
    d3, r3 = p.d3 / p.d2, p.r3 / p.d2
    if d3 == 1.0:
        return math.nan
    return 1.0 + r3 * r3 / (d3 * d3 - 1.0)


def transition_aux(p):
    a = math.hypot(p.d3 + p.d2, p.r2)
    b = math.hypot(p.d3 - p.d2, p.r2)
    delta = None
    if p.d2 > 0 and p.d3 > p.d2:
        delta = math.sqrt(_delta_squared(p))
    return TransitionAux(a, b, delta)


def _compare(x, y):
    """-1, 0 or 1; values within EQUALITY_TOL (relative) compare equal."""
    if abs(x - y) <= EQUALITY_TOL * max(abs(x), abs(y), 1e-300):
        return 0
    return -1 if x < y else 1


def _two_way(value, threshold, below, above, rule):
    order = _compare(value, threshold)
    if order == 0:
        return RuleOutcome(None, f"on {rule}")
    return RuleOutcome(GroupLabel(below if order < 0 else above), rule)


def analytic_rule(p):
    case = family_case(p)
    if case in (FamilyCase.C, FamilyCase.E, FamilyCase.G, FamilyCase.H, FamilyCase.J):
        return RuleOutcome(GroupLabel(case.name), "single group")

    if case is FamilyCase.A:
        e3 = math.hypot(p.d3, p.r2)
        if _compare(p.d4, p.d3) == 0 or _compare(p.d4, e3) == 0:
            return RuleOutcome(None, "on E2: d4 = d3 or E3: d4 = sqrt(d3^2 + r2^2)")
        if p.d4 < p.d3:
            return RuleOutcome(GroupLabel.A1, "d4 < d3")
        if p.d4 < e3:
            return RuleOutcome(GroupLabel.A2, "d3 < d4 < sqrt(d3^2 + r2^2)")
        return RuleOutcome(GroupLabel.A3, "d4 > sqrt(d3^2 + r2^2)")

    if case is FamilyCase.B:
        return _two_way(p.d4, p.d3, "B1", "B2", "E1: d4 = d3")

    if case is FamilyCase.F:
        return _two_way(p.d4, math.hypot(p.d3, p.r2), "F1", "F2", "E1: d4 = sqrt(d3^2 + r2^2)")

    if case is FamilyCase.D:
        d2, d3, d4 = p.d2, p.d3, p.d4
        if 0 in (_compare(d2, d3), _compare(d2, d4), _compare(d3, d4)):
            return RuleOutcome(None, "on a transition: two of d2, d3, d4 are equal")
        if d4 < d2 < d3:
            return RuleOutcome(GroupLabel.D1, "d4 < d2 < d3")
        if d2 < d4 < d3:
            return RuleOutcome(GroupLabel.D2, "d2 < d4 < d3")
        if d2 < d3 < d4:
            return RuleOutcome(GroupLabel.D3, "d2 < d3 < d4")
        if d3 < d2 < d4:
            return RuleOutcome(GroupLabel.D4, "d3 < d2 < d4")
        return RuleOutcome(GroupLabel.D5, "max(d3, d4) < d2")

    # case I, lengths normalized by d2
    d3, d4 = p.d3 / p.d2, p.d4 / p.d2
    side = _compare(d3, 1.0)
    if side == 0:
        return RuleOutcome(None, "on E2: d3 = d2")
    if side > 0:
        return _two_way(d4, transition_aux(p).delta, "I2", "I1", "E1: d4 = delta")
    delta2 = _delta_squared(p)
    if not delta2 > 0:
        return RuleOutcome(None, "delta undefined for d3 < d2", (PROVISIONAL_RULE,))
    outcome = _two_way(d4, math.sqrt(delta2), "I4", "I3", "E1: d4 = delta (d3 < d2)")
    return attrs.evolve(outcome, warnings=(PROVISIONAL_RULE,))


def analytic_group(p):
    """GroupLabel, or None when p sits on a transition curve (indeterminate)."""
    return analytic_rule(p).label


def _nan_unless(condition, value):
    return value if condition else math.nan


def transition_curves(case):
    case = case if isinstance(case, FamilyCase) else FamilyCase[str(case)]
    if case is FamilyCase.A:
        return [
            TransitionCurve("E2", "d4 = d3", lambda q: q["d4"] - q["d3"]),
            TransitionCurve("E3", "d4 = sqrt(d3^2 + r2^2)", lambda q: q["d4"] - math.hypot(q["d3"], q["r2"])),
        ]
    if case is FamilyCase.B:
        return [TransitionCurve("E1", "d4 = d3", lambda q: q["d4"] - q["d3"])]
    if case is FamilyCase.D:
        return [
            TransitionCurve("E1", "d4 = d2", lambda q: q["d4"] - q["d2"]),
            TransitionCurve(
                "E2", "d4 = d3 (d3, d4 > d2)",
                lambda q: _nan_unless(q["d3"] > q["d2"] and q["d4"] > q["d2"], q["d4"] - q["d3"]),
            ),
            TransitionCurve("E3", "d3 = d2", lambda q: q["d3"] - q["d2"]),
        ]
    if case is FamilyCase.F:
        return [TransitionCurve("E1", "d4 = sqrt(d3^2 + r2^2)", lambda q: q["d4"] - math.hypot(q["d3"], q["r2"]))]
    if case is FamilyCase.I:
        def e1(q):
            aux = transition_aux(DesignParams(**{name: q.get(name, 0.0) for name in PARAM_NAMES}))
            return math.nan if aux.delta is None else q["d4"] / q["d2"] - aux.delta

        return [
            TransitionCurve("E1", "d4 = delta", e1),
            TransitionCurve("E2", "d3 = d2", lambda q: q["d3"] - q["d2"]),
        ]
    return []
