"""Exact rational arithmetic for finite metric spaces: admissible one-point
extensions, isometry groups, equivariant orbit extensions, staged universal
constructions (general and Toeplitz), billiard chains, and globalization of
partial isometries with verifiable certificates.
"""

from .admissibility import (
    AdmissibleVector,
    UniversalityAuditReport,
    check_admissible,
    chebyshev,
    enumerate_admissible,
    hk_embed,
    is_admissible,
    katetov_extension,
    realize,
    universality_audit,
)
from .builder import GrowthResult, GrowthSchedule, build_rational_urysohn, grow
from .core import (
    FiniteMetricSpace,
    ValidationReport,
    Violation,
    format_rational,
    rational,
    restrict,
    validate_metric,
)
from .equivariant import (
    EquivariantEmbedding,
    OrbitExtension,
    equivariant_embed,
    find_isometric_embedding,
    key_inequality_check,
    orbit_extension,
)
from .errors import (
    BudgetExceeded,
    ChainConstructionFailure,
    DegenerateVector,
    NotAdmissible,
    NotIsometryGroup,
    NotSubgroup,
    ParameterError,
    ShapeError,
    SpaceMismatch,
    UrysohnError,
)
from .globalization import (
    CertificateReport,
    GlobalizationCertificate,
    TowerStage,
    extend_partial_to_global,
    globalize,
    locally_finite_tower,
    verify_certificate,
    verify_tower,
)
from .isometry import (
    GroupAction,
    HallStage,
    Isometry,
    PartialIsometry,
    compose_partial,
    compose_perms,
    cosets,
    hall_embed,
    hall_stage,
    identity_perm,
    inverse_partial,
    invert_perm,
    isometry_group,
    partial_isometries,
    preserves_metric,
    stabilizer,
)
from .toeplitz import (
    BilliardChain,
    ToeplitzBuildResult,
    ToeplitzExtraction,
    ToeplitzMetric,
    adm_membership,
    billiard_chain,
    build_toeplitz_universal,
    ladder_bound,
    phi_append_interval,
    phi_of,
)

__version__ = "0.1.0"
