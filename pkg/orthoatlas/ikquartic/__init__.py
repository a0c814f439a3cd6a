from .quartic import (
    AT_INFINITY,
    CLUSTER_TOL,
    DEGENERACY_TOL,
    Quartic,
    Root,
    RootSet,
    quartic_at,
    quartic_roots,
    theta3_candidates,
    trig_residual,
)
from .solver import IkSolutionSet, batch_count, batch_solutions, ik, iks_count
