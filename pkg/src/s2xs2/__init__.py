"""Numerical extrinsic geometry of hypersurfaces of S^2 x S^2."""

from .ambient import (
    AmbientIsometry,
    ProductPoint,
    ProductTangent,
    SpherePoint,
    apply_isometry,
    apply_isometry_tangent,
    apply_J1,
    apply_J2,
    apply_P,
    curvature_R,
    identity_isometry,
    product_exp,
    random_isometry,
    sphere_exp,
    swap_isometry,
    tangent,
)
from .catalog import Family, make_family, random_interior_point, transform_family
from .errors import (
    DegenerateSpectrumError,
    DomainError,
    EvaluationError,
    FrameContinuityError,
    GeometryError,
    PreconditionError,
    SingularChartError,
    TangencyError,
)
from .flow import (
    FocalResult,
    QData,
    detq_closed,
    focal_radius,
    parallel_chart,
    q_matrix,
    taylor_detq,
)
from .jets import Chart, Jet2, jet2
from .shape import (
    ShapeData,
    StructureResiduals,
    codazzi_residual,
    diff_fields,
    gauss_sectional,
    lambda_system,
    lemma_residuals,
    ricci,
    shape_at,
)

__version__ = "0.1.0"

__all__ = [
    "AmbientIsometry",
    "Chart",
    "DegenerateSpectrumError",
    "DomainError",
    "EvaluationError",
    "Family",
    "FocalResult",
    "FrameContinuityError",
    "GeometryError",
    "Jet2",
    "PreconditionError",
    "ProductPoint",
    "ProductTangent",
    "QData",
    "ShapeData",
    "SingularChartError",
    "SpherePoint",
    "StructureResiduals",
    "TangencyError",
    "apply_isometry",
    "apply_isometry_tangent",
    "apply_J1",
    "apply_J2",
    "apply_P",
    "codazzi_residual",
    "curvature_R",
    "detq_closed",
    "diff_fields",
    "focal_radius",
    "gauss_sectional",
    "identity_isometry",
    "jet2",
    "lambda_system",
    "lemma_residuals",
    "make_family",
    "parallel_chart",
    "product_exp",
    "q_matrix",
    "random_interior_point",
    "random_isometry",
    "ricci",
    "shape_at",
    "sphere_exp",
    "swap_isometry",
    "tangent",
    "taylor_detq",
    "transform_family",
]
