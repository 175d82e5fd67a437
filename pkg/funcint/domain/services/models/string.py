# ================================================================================================
# 🎻 STRING MODEL - Cuerda tensa con extremos prescritos
# ================================================================================================
# E[u] = sigma/2 int u_x^2 dx - int f u dx on [0, L], u(0) and u(L) prescribed,
# discretized with Line2 elements.

from dataclasses import dataclass
from typing import Callable, Sequence, Tuple, Union

import numpy as np

from ...entities.mesh import Constraint, DofMap, ElementKind, Mesh, NodeSelector, build_dof_map
from ...entities.quadratic_form import QuadraticForm
from ...exceptions.funcint_exceptions import InvalidParameterException
from ..assembly import assemble

LoadSpec = Union[float, Sequence[float], Callable[[np.ndarray], float]]


@dataclass(frozen=True)
class StringParams:
    """Length L, tension sigma, load f (constant, nodal values or callable) and end values."""
    L: float = 1.0
    sigma: float = 1.0
    f: LoadSpec = 0.0
    u_left: float = 0.0
    u_right: float = 0.0

    def __post_init__(self):
        if not self.L > 0:
            raise InvalidParameterException("L", self.L, "must be positive")
        if not self.sigma > 0:
            raise InvalidParameterException("sigma", self.sigma, "must be positive")


def interval_line_mesh(p_length: float, mesh: Mesh, kind: ElementKind) -> Mesh:
    """Check that ``mesh`` spans [0, L] and reinterpret it with ``kind``."""
    if mesh.spatial_dim != 1:
        raise InvalidParameterException("mesh.spatial_dim", mesh.spatial_dim, "1-D model needs a 1-D mesh")
    (lo,), (hi,) = mesh.bounding_box()
    tol = 1e-10 * p_length
    if abs(lo) > tol or abs(hi - p_length) > tol:
        raise InvalidParameterException("mesh", (lo, hi), f"mesh must span [0, {p_length}]")
    return mesh if mesh.domain_kind is kind else mesh.with_kind(kind)


def string_mesh(p: StringParams, mesh: Mesh) -> Mesh:
    return interval_line_mesh(p.L, mesh, ElementKind.LINE2)


def string_dofmap(p: StringParams, mesh: Mesh) -> DofMap:
    return build_dof_map(mesh, 1, [
        Constraint(NodeSelector.point(0.0), 1, p.u_left),
        Constraint(NodeSelector.point(p.L), 1, p.u_right),
    ])


def right_end(p: StringParams, mesh: Mesh) -> Tuple[int, int]:
    """(node, dof) of the prescribed value at x = L."""
    return NodeSelector.point(p.L).resolve(mesh)[0], 1


def build_string(p: StringParams, mesh: Mesh) -> QuadraticForm:
    """
    Line2 assembly with both ends prescribed.

    Raises:
        SingularAfterBCException: propagated from assembly
    """
    mesh = string_mesh(p, mesh)
    return assemble(mesh, string_dofmap(p, mesh), p.sigma, p.f)
