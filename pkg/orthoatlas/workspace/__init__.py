from .aspects import AspectSummary, aspects, joint_aspects, periodic_label
from .field import (
    Cavities,
    GridSpec,
    IksField,
    Void,
    cavities,
    iks_field,
    region_summary,
    singular_mask,
)
from .metrics import (
    ALL_THE_WORKSPACE,
    BIG,
    INTERMEDIATE,
    SIZE_ORDER,
    SMALL,
    WorkspaceAnalysis,
    WorkspaceMetrics,
    analyze,
    hole_bucket,
    metrics,
    quaternary_ratio,
    size_bucket,
)
