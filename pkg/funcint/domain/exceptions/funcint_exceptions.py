# ================================================================================================
# 🚨 FUNCINT EXCEPTIONS - DOMAIN LAYER
# ================================================================================================
# Excepciones específicas del dominio: mallas, grados de libertad, elementos,
# factorizaciones y cadenas de Markov. Cada una lleva su error_code estable.

from typing import Optional, Sequence


class FuncIntException(Exception):
    """
    Base exception para todas las excepciones de funcint.

    Carries a human-readable message and a stable machine-readable code.
    """

    def __init__(self, message: str, error_code: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or "FUNCINT_ERROR"


class InvalidParameterException(FuncIntException):
    """
    ⚠️ EXCEPCIÓN DE VALIDACIÓN - Parámetro fuera de rango.

    Raised by value-object invariants (negative tension, beta <= 0, ...).
    """

    def __init__(self, field: str, value: object, reason: str):
        message = f"Invalid parameter {field}={value!r}: {reason}"
        super().__init__(message, "INVALID_PARAMETER")
        self.field = field
        self.value = value
        self.reason = reason


class DimensionMismatchException(FuncIntException):
    """Vector/matrix shape does not match the number of open DOFs."""

    def __init__(self, what: str, expected: object, actual: object):
        message = f"Dimension mismatch for {what}: expected {expected}, got {actual}"
        super().__init__(message, "DIMENSION_MISMATCH")
        self.what = what
        self.expected = expected
        self.actual = actual


class NonSymmetricException(FuncIntException):
    """Matrix argument required to be symmetric is not."""

    def __init__(self, what: str, asymmetry: float):
        message = f"Matrix {what} is not symmetric (max |A - A^T| = {asymmetry:.3e})"
        super().__init__(message, "NON_SYMMETRIC")
        self.what = what
        self.asymmetry = asymmetry


# ================================================================================================
# 🕸️ MESH
# ================================================================================================

class MeshException(FuncIntException):
    """Base for mesh construction and query failures."""

    def __init__(self, message: str, error_code: Optional[str] = None):
        super().__init__(message, error_code or "MESH_ERROR")


class NonMonotonePositionsException(MeshException):
    """Interval node positions are not strictly increasing from 0 to length."""

    def __init__(self, positions: Sequence[float], reason: str = "positions must be strictly increasing"):
        message = f"Non-monotone interval positions {list(positions)!r}: {reason}"
        super().__init__(message, "NON_MONOTONE_POSITIONS")
        self.positions = list(positions)
        self.reason = reason


class TooFewNodesException(MeshException):
    """An interval mesh needs at least two nodes."""

    def __init__(self, count: int, minimum: int = 2):
        message = f"Interval mesh needs at least {minimum} nodes, got {count}"
        super().__init__(message, "TOO_FEW_NODES")
        self.count = count
        self.minimum = minimum


class InvalidMeshException(MeshException):
    """Structural invariant of a Mesh is violated."""

    def __init__(self, reason: str):
        super().__init__(f"Invalid mesh: {reason}", "INVALID_MESH")
        self.reason = reason


class DanglingNodeReferenceException(MeshException):
    """An element references a node id that does not exist."""

    def __init__(self, element_id: int, node_id: int, line_number: Optional[int] = None):
        where = f" (line {line_number})" if line_number is not None else ""
        message = f"Element {element_id} references unknown node {node_id}{where}"
        super().__init__(message, "DANGLING_NODE_REFERENCE")
        self.element_id = element_id
        self.node_id = node_id
        self.line_number = line_number


class PointOutsideDomainException(MeshException):
    """No element of the mesh contains the requested point."""

    def __init__(self, point: Sequence[float]):
        message = f"Point {tuple(point)!r} lies outside the mesh domain"
        super().__init__(message, "POINT_OUTSIDE_DOMAIN")
        self.point = tuple(point)


class MeshParseException(MeshException):
    """
    📄 EXCEPCIÓN DE PARSEO - Archivo MSH inválido.

    Always carries the 1-based line number where reading stopped.
    """

    def __init__(self, reason: str, line_number: int, error_code: Optional[str] = None):
        message = f"line {line_number}: {reason}"
        super().__init__(message, error_code or "MESH_PARSE_ERROR")
        self.reason = reason
        self.line_number = line_number


class MalformedHeaderException(MeshParseException):
    """Missing or broken $MeshFormat / section markers."""

    def __init__(self, reason: str, line_number: int):
        super().__init__(reason, line_number, "MALFORMED_HEADER")


class UnsupportedVersionException(MeshParseException):
    """Anything other than MSH 2.2 ASCII."""

    def __init__(self, version: str, line_number: int):
        super().__init__(f"unsupported MSH version {version!r} (need 2.2 ASCII)", line_number, "UNSUPPORTED_VERSION")
        self.version = version


class UnsupportedElementTypeException(MeshParseException):
    """Element type code other than 1 (line), 2 (triangle) or 15 (point)."""

    def __init__(self, code: int, line_number: int):
        super().__init__(f"unsupported element type code {code}", line_number, "UNSUPPORTED_ELEMENT_TYPE")
        self.code = code


# ================================================================================================
# 🔢 DOF MAP
# ================================================================================================

class DofMapException(FuncIntException):
    """Base for DOF numbering failures."""

    def __init__(self, message: str, error_code: Optional[str] = None):
        super().__init__(message, error_code or "DOF_MAP_ERROR")


class DuplicateConstraintException(DofMapException):
    """The same (node, local dof) pair is constrained twice."""

    def __init__(self, node_id: int, local_dof: int):
        message = f"Node {node_id} local dof {local_dof} is constrained more than once"
        super().__init__(message, "DUPLICATE_CONSTRAINT")
        self.node_id = node_id
        self.local_dof = local_dof


class UnknownNodeException(DofMapException):
    """A node selector matched no node of the mesh."""

    def __init__(self, selector: str):
        super().__init__(f"Node selector {selector} matches no mesh node", "UNKNOWN_NODE")
        self.selector = selector


class NotAClosedDofException(DofMapException):
    """A sensitivity was requested for a DOF that is not prescribed."""

    def __init__(self, node_id: int, local_dof: int):
        message = f"Node {node_id} local dof {local_dof} is not a closed (prescribed) DOF"
        super().__init__(message, "NOT_A_CLOSED_DOF")
        self.node_id = node_id
        self.local_dof = local_dof


class DofMapMismatchException(DofMapException):
    """DofMap layout does not fit the mesh or element kind."""

    def __init__(self, reason: str):
        super().__init__(f"DofMap mismatch: {reason}", "DOF_MAP_MISMATCH")
        self.reason = reason


# ================================================================================================
# 🧱 ELEMENTS
# ================================================================================================

class ElementException(FuncIntException):
    """Base for element-level geometry failures."""

    def __init__(self, message: str, error_code: Optional[str] = None):
        super().__init__(message, error_code or "ELEMENT_ERROR")


class NonPositiveLengthException(ElementException):
    """Line element with h_e <= 0."""

    def __init__(self, length: float):
        super().__init__(f"Element length must be positive, got {length!r}", "NON_POSITIVE_LENGTH")
        self.length = length


class DegenerateTriangleException(ElementException):
    """Triangle with non-positive signed area."""

    def __init__(self, area: float):
        super().__init__(f"Degenerate or clockwise triangle (signed area {area!r})", "DEGENERATE_TRIANGLE")
        self.area = area


# ================================================================================================
# 🧮 NUMERICAL FAILURES (CLI exit status 2)
# ================================================================================================

class NumericalException(FuncIntException):
    """Base for failures of the numerical kernels."""

    def __init__(self, message: str, error_code: Optional[str] = None):
        super().__init__(message, error_code or "NUMERICAL_ERROR")


class SingularAfterBCException(NumericalException):
    """
    🔴 Global stiffness is not SPD after Dirichlet elimination.

    Typical cause: no prescribed DOF removes a zero-energy mode.
    """

    def __init__(self, n_open: int, detail: str = ""):
        message = f"Stiffness matrix with {n_open} open DOFs is singular after boundary conditions"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message, "SINGULAR_AFTER_BC")
        self.n_open = n_open
        self.detail = detail


class NotPositiveDefiniteException(NumericalException):
    """Cholesky factorization of K failed inside the Gaussian kernel."""

    def __init__(self, n: int, detail: str = ""):
        message = f"Matrix of size {n} is not positive definite"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message, "NOT_POSITIVE_DEFINITE")
        self.n = n
        self.detail = detail


class NonFiniteEnergyException(NumericalException):
    """The energy callback returned NaN or inf; carries the chain state."""

    def __init__(self, step: int, energy: float, state: object, spin: Optional[int] = None):
        message = f"Energy is not finite ({energy!r}) at step {step}"
        if spin is not None:
            message = f"{message}, spin={spin}"
        super().__init__(message, "NON_FINITE_ENERGY")
        self.step = step
        self.energy = energy
        self.state = state
        self.spin = spin


# ================================================================================================
# 🎲 SAMPLER / MODELS
# ================================================================================================

class SamplerException(FuncIntException):
    """Base for chain configuration failures."""

    def __init__(self, message: str, error_code: Optional[str] = None):
        super().__init__(message, error_code or "SAMPLER_ERROR")


class EmptyChainException(SamplerException):
    """No samples remain after burn-in and thinning."""

    def __init__(self, n_steps: int, burn_in: int):
        message = f"Chain keeps no samples: n_steps={n_steps}, burn_in={burn_in}"
        super().__init__(message, "EMPTY_CHAIN")
        self.n_steps = n_steps
        self.burn_in = burn_in


class ModelException(FuncIntException):
    """Base for model construction failures."""

    def __init__(self, message: str, error_code: Optional[str] = None):
        super().__init__(message, error_code or "MODEL_ERROR")


class BondOffMeshException(ModelException):
    """An adhesion bond position is not an open value DOF of the mesh."""

    def __init__(self, position: float, reason: str = "no mesh node at bond position"):
        super().__init__(f"Bond at x={position!r}: {reason}", "BOND_OFF_MESH")
        self.position = position
        self.reason = reason


class InvalidSweepException(ModelException):
    """Sweep variable not supported by the model."""

    def __init__(self, model: str, variable: str):
        super().__init__(f"Model {model!r} cannot be swept over {variable!r}", "INVALID_SWEEP")
        self.model = model
        self.variable = variable
