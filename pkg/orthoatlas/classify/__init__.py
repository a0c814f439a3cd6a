from .groups import (
    FIRST_CLASS,
    GROUP_TABLE,
    THIRD_CLASS,
    GroupLabel,
    GroupRecord,
    class_rank,
    group_record,
    groups_of_case,
)
from .rules import (
    RuleOutcome,
    TransitionAux,
    TransitionCurve,
    analytic_group,
    analytic_rule,
    transition_aux,
    transition_curves,
)
from .verdict import Verdict, match_signature, numeric_verdict
