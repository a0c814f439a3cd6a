"""The example manipulators of the classification, one or more per group."""

import attrs

from ..models import DesignParams


@attrs.frozen
class SuiteEntry:
    params: DesignParams
    label: str
    nodes: int
    voids: int

    @property
    def case(self):
        return self.label[0]


def _entry(values, label, nodes, voids):
    return SuiteEntry(DesignParams(*values), label, nodes, voids)


# (d2, d3, d4, r2, r3), group, node points, voids
REFERENCE_DESIGNS = (
    _entry((0, 2, 1.5, 1, 0), "A1", 0, 0),
    _entry((0, 2, 2.2, 1.5, 0), "A2", 2, 0),
    _entry((0, 2, 3, 1, 0), "A3", 4, 0),
    _entry((0, 2, 1, 0, 0), "B1", 0, 0),
    _entry((0, 2, 3, 0, 0), "B2", 1, 0),
    _entry((0, 0, 2, 1.5, 0), "C", 0, 0),
    _entry((1, 1.4, 0.7, 0, 0), "D1", 2, 1),
    _entry((1, 2, 1.5, 0, 0), "D2", 0, 0),
    _entry((1, 2, 2.5, 0, 0), "D3", 1, 0),
    _entry((1, 0.5, 2, 0, 0), "D4", 2, 0),
    _entry((1, 0.6, 0.7, 0, 0), "D5", 0, 0),
    _entry((1, 0, 1.5, 0, 0), "E", 0, 0),
    _entry((0, 2, 1.5, 1, 1), "F1", 0, 0),
    _entry((0, 1, 2, 1, 1), "F2", 2, 0),
    _entry((0, 1, 3, 0, 1), "G", 0, 0),
    _entry((0, 0, 1, 3, 1), "H", 0, 0),
    _entry((1, 2.5, 1.5, 0, 0.5), "I1", 0, 0),
    _entry((1, 3, 0.7, 0, 0.5), "I2", 2, 1),
    _entry((1, 0.5, 0.7, 0, 0.5), "I3", 0, 1),
    _entry((1, 0.3, 2, 0, 0.5), "I4", 2, 1),
    _entry((1, 0, 2, 0, 1), "J", 0, 1),
)

# groups whose 4-IKS zone is the whole workspace; a miss here fails the table check
FULL_QUATERNARY = frozenset({"C", "E", "B1", "G", "H", "J"})


def select(only=None):
    if not only:
        return list(REFERENCE_DESIGNS)
    wanted = {item.strip().upper() for item in only.split(",")}
    return [entry for entry in REFERENCE_DESIGNS if entry.case in wanted or entry.label in wanted]
