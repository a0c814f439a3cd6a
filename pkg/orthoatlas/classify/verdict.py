import logging

import attrs

from ..models import FamilyCase, family_case
from ..utils.errors import ANALYTIC_DISAGREEMENT, NoSignatureMatch
from ..workspace import SIZE_ORDER, analyze
from .groups import GROUP_TABLE, GroupLabel, groups_of_case
from .rules import analytic_rule

logger = logging.getLogger(__name__)


@attrs.frozen(eq=False)
class Verdict:
    analytic: object  # RuleOutcome
    numeric: GroupLabel
    agreement: bool
    warnings: tuple
    analysis: object  # WorkspaceAnalysis

    @property
    def label(self):
        return self.numeric

    @property
    def metrics(self):
        return self.analysis.metrics


def _bucket_distance(measured, record):
    return abs(SIZE_ORDER.index(measured) - SIZE_ORDER.index(record))


def match_signature(p, measured):
    """Group of p's case whose (node, void) counts match; ties resolved as in the group table."""
    case = family_case(p)
    matches = [
        GROUP_TABLE[label]
        for label in groups_of_case(case)
        if GROUP_TABLE[label].nodes == measured.node_count and GROUP_TABLE[label].voids == measured.void_count
    ]
    if not matches:
        raise NoSignatureMatch(
            f"no group of case {case.name} has {measured.node_count} nodes and {measured.void_count} voids",
            metrics=attrs.asdict(measured),
        )
    if len(matches) == 1:
        return matches[0].label
    labels = {record.label for record in matches}
    if case is FamilyCase.I and labels == {GroupLabel.I2, GroupLabel.I4}:
        return GroupLabel.I2 if p.d3 > p.d2 else GroupLabel.I4
    bucket = measured.buckets["quaternary"]
    if case is FamilyCase.D and labels == {GroupLabel.D2, GroupLabel.D5}:
        # D2 keeps d2 < d4; D5 has both d3 and d4 below d2
        label = GroupLabel.D2 if p.d4 > p.d2 else GroupLabel.D5
        if GROUP_TABLE[label].quaternary_zone != bucket:
            logger.info("%s: 4-IKS zone measured %s, group table lists %s", label.value, bucket,
                        GROUP_TABLE[label].quaternary_zone)
        return label
    ranked = sorted(
        matches,
        key=lambda record: (
            _bucket_distance(bucket, record.quaternary_zone),
            # equally close: a mostly 4-IKS workspace takes the larger zone
            -SIZE_ORDER.index(record.quaternary_zone) if measured.quaternary_ratio >= 0.5
            else SIZE_ORDER.index(record.quaternary_zone),
        ),
    )
    return ranked[0].label


def numeric_verdict(p, g, trace_resolution=1024, aspect_resolution=256, min_void_cells=4):
    analytic = analytic_rule(p)
    analysis = analyze(p, g, trace_resolution, aspect_resolution, min_void_cells)
    numeric = match_signature(p, analysis.metrics)
    warnings = list(analytic.warnings)
    agreement = analytic.label is numeric
    if analytic.label is not None and not agreement:
        warnings.append(ANALYTIC_DISAGREEMENT)
        logger.warning("%s: analytic rule gives %s, workspace counts give %s for %s",
                       ANALYTIC_DISAGREEMENT, analytic.label, numeric, p)
    return Verdict(analytic, numeric, agreement, tuple(warnings), analysis)
