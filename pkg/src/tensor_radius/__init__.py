"""Tensor radii of operators between finite-dimensional normed spaces.

Injective and projective tensor norms, operator and nuclear norms, John and
Loewner ellipsoids, and certified bounds on ``tau_k(T) = ||T^{(x)k}||^{1/k}``
from the k-fold injective power of the domain to the k-fold projective power
of the codomain.
"""

from ._exact import Surd
from .caps import Caps, get_caps
from .convex import HPolytope, VPolytope, enumerate_vertices, polar
from .ellipsoids import (
    Bound,
    BoundInterval,
    Ellipsoid,
    IdentityDecomposition,
    bm_distance_euclidean,
    contact_points,
    identity_decomposition,
    john,
    loewner,
    mvee,
)
from .errors import (
    DimensionCapExceeded,
    DimensionMismatch,
    InfeasibleBody,
    InfeasibleDecomposition,
    NoConvergence,
    NotCertifiable,
    NotPolyhedral,
    NotSupported,
    SizeCapExceeded,
    TensorRadiusError,
    ToleranceAmbiguous,
    UnboundedBody,
)
from .operators import LinearOperator, adjoint, nuclear_norm, operator_norm
from .radius import (
    RadiusReport,
    TauResult,
    factorization_bound,
    factorization_splits,
    identity,
    ntp_gap,
    rho_k,
    rho_report,
    schoenberg_search,
    square_construction,
    tau_infty_bounds,
    tau_k,
)
from .spaces import (
    EllipsoidBall,
    Lp,
    NormedSpace,
    PolyH,
    PolyV,
    Schatten,
    dual,
    extreme_points,
    facet_normals,
    norm_eval,
    space_from_json,
)
from .tensors import Tensor, entangled_witness, hs_norm, injective_norm, projective_norm

__version__ = "0.1.0"
