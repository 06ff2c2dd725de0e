"""Tensegrity frameworks on Radon configurations: invariants, curved-space analogues and rigidity tests."""

__version__ = "0.1.0"

from .dependence import (
    AffineDependence,
    Flavor,
    Label,
    TensegrityFramework,
    affine_dependence,
    build_framework,
    radon_partition,
)
from .errors import DegeneracyError, SolverFailure, UnyieldingError, ValidationError
from .geometry import MetricSignature, PointConfiguration, Space
from .invariants import InvariantProfile, c_direct, c_matrix, cosphericity, invariant_profile
from .curved import curved_c, curved_charpoly, d_pair, simplex_volume
from .flex import MotionPath, Verdict, first_order_flex, global_rigidity_falsifier, inequality_sign_check
from .analysis import analyze
from .reports import parse_document

__all__ = [
    "AffineDependence",
    "DegeneracyError",
    "Flavor",
    "InvariantProfile",
    "Label",
    "MetricSignature",
    "MotionPath",
    "PointConfiguration",
    "SolverFailure",
    "Space",
    "TensegrityFramework",
    "UnyieldingError",
    "ValidationError",
    "Verdict",
    "affine_dependence",
    "analyze",
    "build_framework",
    "c_direct",
    "c_matrix",
    "cosphericity",
    "curved_c",
    "curved_charpoly",
    "d_pair",
    "first_order_flex",
    "global_rigidity_falsifier",
    "inequality_sign_check",
    "invariant_profile",
    "parse_document",
    "radon_partition",
    "simplex_volume",
    "__version__",
]
