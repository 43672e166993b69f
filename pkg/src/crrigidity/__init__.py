"""Pseudo-Hermitian curvature of hypersurfaces of revolution and rigidity
checks for CR maps into spheres and holomorphic maps between space forms."""

__version__ = "0.1.0"

from .errors import CRRigidityError, NumericDomainError, SchemaError  # noqa: E402
from .jets import BidegreeJet, HermitianDefiningFunction, eval_jet  # noqa: E402
from .webster import embeddability_verdict, gauss_curvature, scan_domain, webster_invariants  # noqa: E402

__all__ = [
    "BidegreeJet",
    "CRRigidityError",
    "HermitianDefiningFunction",
    "NumericDomainError",
    "SchemaError",
    "embeddability_verdict",
    "eval_jet",
    "gauss_curvature",
    "scan_domain",
    "webster_invariants",
]
