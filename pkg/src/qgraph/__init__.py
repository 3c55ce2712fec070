"""Regular q-ary graphs and subspace designs from transitive group actions."""

from .analysis import (
    Classification,
    ClassicalGraph,
    NotRegular,
    check_regular,
    classify,
    classify_all_transitive_regular,
    is_automorphism,
    to_classical,
    transitive_automorphisms_exist,
    verify_design,
    verify_gdd,
)
from .config import BoundExceeded
from .constructions import (
    ConstructionError,
    GroupAction,
    desarguesian_spread,
    invariant_subspaces,
    neighborhood_design,
    quasi_srg_union,
    spread_graph,
    symplectic_graph,
    theorem1_design,
    theorem2_design,
    theorem3_graph,
)
from .fieldcore import FieldSpec, field_of_order, make_field
from .permgroup import Perm, StabChain, orbit, schreier_sims
from .projective import PointTable, build_point_table
from .semilinear import GroupSpec, SemilinearMap, gens_gl, gens_sl, gens_sp, spread_stabilizer
from .structures import ConstructionReport, QaryGraph, Spread, SubspaceDesign
from .subspaces import Subspace, gaussian_binomial, q_number

__version__ = "0.1.0"
