"""Classification of finite-dimensional linear flows x' = Ax up to
topological (C0) and smooth (C1) equivalence.

The library computes the complete invariants of both relations: the
stable/central/unstable dimensions, the (real or complex) Jordan
structure up to a positive scale, the core / zero-core / iterated-core
subspaces whose dimensions encode the central block counts, and the
rational classes and minimal periods of bounded flows.  Equivalence
verdicts come with explicit conjugacy certificates that are verified
numerically, never assumed.
"""

__version__ = "0.1.0"

from .linalg import (  # noqa: F401
    DEFAULT_TOL,
    Tolerance,
    kernel_basis,
    matexp,
    rank,
    realify,
    solve,
)
from .spectral import (  # noqa: F401
    EigCluster,
    JordanStructure,
    ScuSplit,
    eigen_clusters,
    jordan_structure,
    real_jordan_basis,
    scu_split,
)
from .special import (  # noqa: F401
    DeltaSpec,
    delta_matrix,
    diag_powers,
    exp_block_partition,
    lower_bound_nu,
    nilpotent_block,
    recip_gamma,
)
from .cores import (  # noqa: F401
    BinaryIndex,
    CoreProfile,
    Subspace,
    bounded_subspace,
    core,
    core_profile,
    iterated_core,
    zero_core,
)
from .rational import (  # noqa: F401
    RationalClass,
    RationalPartition,
    best_rational,
    class_period,
    periodic_dim,
    rational_partition,
)
from .equivalence import (  # noqa: F401
    ScaledSimilarity,
    Verdict,
    bounded_verdict,
    similar_up_to_scale,
    smooth_verdict,
    topological_verdict,
)
from .canonical import (  # noqa: F401
    CatalogEntry,
    ClassDescriptor,
    catalog_2x2,
    descriptor,
    representative,
)
from .witness import (  # noqa: F401
    ResidualReport,
    core_witness,
    orbit_bounded,
    verify_conjugacy,
)
from .errors import (  # noqa: F401
    EigenConvergenceError,
    FieldError,
    IllConditionedBasisError,
    InputFormatError,
    InternalConsistencyError,
    LinflowError,
    NonFiniteError,
    NotBoundedError,
    ShapeError,
    SingularMatrixError,
)
