from enum import Enum

import attrs

from ..models import FamilyCase
from ..workspace import ALL_THE_WORKSPACE, BIG, INTERMEDIATE, SMALL


class GroupLabel(Enum):
    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    B1 = "B1"
    B2 = "B2"
    C = "C"
    D1 = "D1"
    D2 = "D2"
    D3 = "D3"
    D4 = "D4"
    D5 = "D5"
    E = "E"
    F1 = "F1"
    F2 = "F2"
    G = "G"
    H = "H"
    I1 = "I1"
    I2 = "I2"
    I3 = "I3"
    I4 = "I4"
    J = "J"

    @property
    def case(self):
        return FamilyCase[self.value[0]]

    def __str__(self):
        return self.value


# GROUP RECORD
@attrs.frozen
class GroupRecord:
    label: GroupLabel
    voids: int
    nodes: int
    quaternary_zone: str
    holes: str
    feasible_zone: str


def _row(label, voids, nodes, quaternary, holes, feasible):
    return GroupRecord(GroupLabel(label), voids, nodes, quaternary, holes, feasible)


ALL = ALL_THE_WORKSPACE

# groups, void, node points, 4 IKS zone, holes, feasible paths zone
GROUP_TABLE = {
    record.label: record
    for record in (
        _row("A1", 0, 0, INTERMEDIATE, SMALL, ALL),
        _row("A2", 0, 2, SMALL, SMALL, ALL),
        _row("A3", 0, 4, SMALL, INTERMEDIATE, ALL),
        _row("B1", 0, 0, ALL, INTERMEDIATE, ALL),
        _row("B2", 0, 1, ALL, BIG, ALL),
        _row("C", 0, 0, ALL, SMALL, ALL),
        _row("D1", 1, 2, SMALL, SMALL, BIG),
        _row("D2", 0, 0, BIG, SMALL, INTERMEDIATE),
        _row("D3", 0, 1, SMALL, INTERMEDIATE, INTERMEDIATE),
        _row("D4", 0, 2, SMALL, SMALL, BIG),
        _row("D5", 0, 0, SMALL, SMALL, ALL),
        _row("E", 0, 0, ALL, SMALL, ALL),
        _row("F1", 0, 0, INTERMEDIATE, SMALL, ALL),
        _row("F2", 0, 2, INTERMEDIATE, SMALL, BIG),
        _row("G", 0, 0, ALL, BIG, ALL),
        _row("H", 0, 0, ALL, INTERMEDIATE, ALL),
        _row("I1", 0, 0, SMALL, INTERMEDIATE, BIG),
        _row("I2", 1, 2, SMALL, INTERMEDIATE, INTERMEDIATE),
        _row("I3", 1, 0, SMALL, SMALL, ALL),
        _row("I4", 1, 2, SMALL, SMALL, ALL),
        _row("J", 1, 0, ALL, SMALL, ALL),
    )
}

FIRST_CLASS = frozenset({GroupLabel.C, GroupLabel.E})
THIRD_CLASS = frozenset(GroupLabel(name) for name in ("B2", "D1", "G", "I2", "I3", "I4"))


def group_record(label):
    return GROUP_TABLE[GroupLabel(label)]


def class_rank(label):
    """1: single 4-IKS region, every path feasible; 3: voids, big holes or split feasible regions."""
    label = GroupLabel(label)
    if label in FIRST_CLASS:
        return 1
    if label in THIRD_CLASS:
        return 3
    return 2


def groups_of_case(case):
    case = case if isinstance(case, FamilyCase) else FamilyCase[str(case)]
    return [label for label in GroupLabel if label.case is case]
