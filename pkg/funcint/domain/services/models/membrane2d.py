# ================================================================================================
# 🥁 MEMBRANE MODEL - Membrana 2-D sobre triangulaciones
# ================================================================================================
# E[u] = sigma/2 int |grad u|^2 dA - int f u dA with Tri3 elements; Dirichlet
# values are attached to physical groups of the mesh.

from dataclasses import dataclass, field
from typing import Dict, List, Mapping

import numpy as np
import structlog

from ...entities.mesh import (
    Constraint,
    DofMap,
    Element,
    ElementKind,
    Mesh,
    Node,
    NodeSelector,
    build_dof_map,
)
from ...entities.quadratic_form import QuadraticForm
from ...exceptions.funcint_exceptions import InvalidParameterException, UnknownNodeException
from ..assembly import assemble
from .string import LoadSpec

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class MembraneParams:
    """
    Tension ``sigma``, load ``f`` and ``bc``: physical group tag -> prescribed value.

    When groups share nodes (corners) the lowest tag wins.
    """
    mesh: Mesh
    sigma: float = 1.0
    f: LoadSpec = 0.0
    bc: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.mesh.spatial_dim != 2:
            raise InvalidParameterException("mesh.spatial_dim", self.mesh.spatial_dim, "membrane needs a 2-D mesh")
        if not self.sigma > 0:
            raise InvalidParameterException("sigma", self.sigma, "must be positive")


def membrane_dofmap(p: MembraneParams) -> DofMap:
    constraints: List[Constraint] = []
    taken: Dict[int, int] = {}
    for tag in sorted(p.bc):
        nodes = p.mesh.nodes_in_group(tag)
        if not nodes:
            raise UnknownNodeException(str(NodeSelector.physical(tag)))
        for node_id in nodes:
            if node_id in taken:
                if p.bc[taken[node_id]] != p.bc[tag]:
                    logger.debug("membrane_bc_overlap", node_id=node_id, kept_group=taken[node_id], dropped_group=tag)
                continue
            taken[node_id] = tag
            constraints.append(Constraint(NodeSelector.node(node_id), 1, p.bc[tag]))
    return build_dof_map(p.mesh, 1, constraints)


def build_membrane(p: MembraneParams) -> QuadraticForm:
    """Tri3 assembly with Dirichlet values on the physical groups of ``p.bc``."""
    return assemble(p.mesh, membrane_dofmap(p), p.sigma, p.f)


def unit_square_mesh(n: int, boundary_tag: int = 1, side: float = 1.0) -> Mesh:
    """
    Structured n x n triangulation of [0, side]^2, each cell cut along its
    rising diagonal. Boundary edges are Line2 elements in group ``boundary_tag``.
    """
    if n < 1:
        raise InvalidParameterException("n", n, "must be at least 1")
    xs = np.linspace(0.0, side, n + 1)

    def node_id(i: int, j: int) -> int:
        return j * (n + 1) + i + 1

    nodes = [Node(node_id(i, j), (xs[i], xs[j])) for j in range(n + 1) for i in range(n + 1)]
    elements: List[Element] = []
    for j in range(n):
        for i in range(n):
            a, b = node_id(i, j), node_id(i + 1, j)
            c, d = node_id(i + 1, j + 1), node_id(i, j + 1)
            elements.append(Element(len(elements) + 1, ElementKind.TRI3, (a, b, c)))
            elements.append(Element(len(elements) + 1, ElementKind.TRI3, (a, c, d)))

    edges = (
        [(node_id(i, 0), node_id(i + 1, 0)) for i in range(n)]
        + [(node_id(n, j), node_id(n, j + 1)) for j in range(n)]
        + [(node_id(i + 1, n), node_id(i, n)) for i in range(n)]
        + [(node_id(0, j + 1), node_id(0, j)) for j in range(n)]
    )
    for a, b in edges:
        elements.append(Element(len(elements) + 1, ElementKind.LINE2, (a, b), (boundary_tag, boundary_tag)))
    return Mesh(tuple(nodes), tuple(elements), 2)
