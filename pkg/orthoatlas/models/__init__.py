from .design import (
    PARAM_NAMES,
    CartesianPoint,
    DesignParams,
    FamilyCase,
    JointConfig,
    SectionPoint,
    family_case,
)
from .kinematics import (
    fk,
    image_partners,
    jacobian,
    max_reach,
    min_reach,
    reach_bounds,
    reduced_singularity,
    section_coordinates,
    section_map,
    singularity_scale,
    twin_theta2,
)
