# ================================================================================================
# 🚨 DOMAIN EXCEPTIONS - funcint
# ================================================================================================

from .funcint_exceptions import (
    FuncIntException,
    InvalidParameterException,
    DimensionMismatchException,
    NonSymmetricException,
    MeshException,
    NonMonotonePositionsException,
    TooFewNodesException,
    InvalidMeshException,
    DanglingNodeReferenceException,
    PointOutsideDomainException,
    MeshParseException,
    MalformedHeaderException,
    UnsupportedVersionException,
    UnsupportedElementTypeException,
    DofMapException,
    DuplicateConstraintException,
    UnknownNodeException,
    NotAClosedDofException,
    DofMapMismatchException,
    ElementException,
    NonPositiveLengthException,
    DegenerateTriangleException,
    NumericalException,
    SingularAfterBCException,
    NotPositiveDefiniteException,
    NonFiniteEnergyException,
    SamplerException,
    EmptyChainException,
    ModelException,
    BondOffMeshException,
    InvalidSweepException,
)

__all__ = [
    "FuncIntException",
    "InvalidParameterException",
    "DimensionMismatchException",
    "NonSymmetricException",
    "MeshException",
    "NonMonotonePositionsException",
    "TooFewNodesException",
    "InvalidMeshException",
    "DanglingNodeReferenceException",
    "PointOutsideDomainException",
    "MeshParseException",
    "MalformedHeaderException",
    "UnsupportedVersionException",
    "UnsupportedElementTypeException",
    "DofMapException",
    "DuplicateConstraintException",
    "UnknownNodeException",
    "NotAClosedDofException",
    "DofMapMismatchException",
    "ElementException",
    "NonPositiveLengthException",
    "DegenerateTriangleException",
    "NumericalException",
    "SingularAfterBCException",
    "NotPositiveDefiniteException",
    "NonFiniteEnergyException",
    "SamplerException",
    "EmptyChainException",
    "ModelException",
    "BondOffMeshException",
    "InvalidSweepException",
]
