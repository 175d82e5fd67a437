# ================================================================================================
# 🏛️ BEAM MODEL - Viga de Euler-Bernoulli con elementos de Hermite
# ================================================================================================
# E[u] = K_B/2 int u_xx^2 dx - int f u dx, clamped at x = 0 (u and u_x
# prescribed). With ``end_support`` the deflection at x = L is prescribed too,
# which is the bare geometry of the adhesion model.

from dataclasses import dataclass
from typing import Optional, Tuple

from ...entities.mesh import Constraint, DofMap, ElementKind, Mesh, NodeSelector, build_dof_map
from ...entities.quadratic_form import QuadraticForm
from ...exceptions.funcint_exceptions import InvalidParameterException
from ..assembly import assemble
from .string import LoadSpec, interval_line_mesh


@dataclass(frozen=True)
class BeamParams:
    L: float = 1.0
    K_B: float = 1.0
    f: LoadSpec = 0.0
    clamp_u: float = 0.0
    clamp_slope: float = 0.0
    end_support: Optional[float] = None

    def __post_init__(self):
        if not self.L > 0:
            raise InvalidParameterException("L", self.L, "must be positive")
        if not self.K_B > 0:
            raise InvalidParameterException("K_B", self.K_B, "must be positive")


def beam_mesh(p: BeamParams, mesh: Mesh) -> Mesh:
    return interval_line_mesh(p.L, mesh, ElementKind.HERMITE_LINE2)


def beam_dofmap(p: BeamParams, mesh: Mesh) -> DofMap:
    constraints = [
        Constraint(NodeSelector.point(0.0), 1, p.clamp_u),
        Constraint(NodeSelector.point(0.0), 2, p.clamp_slope),
    ]
    if p.end_support is not None:
        constraints.append(Constraint(NodeSelector.point(p.L), 1, p.end_support))
    return build_dof_map(mesh, 2, constraints)


def supported_end(p: BeamParams, mesh: Mesh) -> Tuple[int, int]:
    if p.end_support is None:
        raise InvalidParameterException("end_support", None, "beam has no prescribed end deflection")
    return NodeSelector.point(p.L).resolve(mesh)[0], 1


def build_beam(p: BeamParams, mesh: Mesh) -> QuadraticForm:
    """HermiteLine2 assembly, 2 DOFs per node (deflection, slope), clamped at x = 0."""
    mesh = beam_mesh(p, mesh)
    return assemble(mesh, beam_dofmap(p, mesh), p.K_B, p.f)
