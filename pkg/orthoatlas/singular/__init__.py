from .points import (
    CuspPoint,
    NodePoint,
    cusp_candidates,
    default_node_tol,
    find_cusps,
    find_nodes,
    theta3_root_set,
)
from .tracing import JointCurve, SectionCurve, sample_grid, section_image, singular_branches, trace
