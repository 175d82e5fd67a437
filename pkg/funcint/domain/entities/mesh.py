# ================================================================================================
# 🕸️ MESH ENTITIES - Dominio discretizado y numeración de grados de libertad
# ================================================================================================
# Nodes, elements and meshes for 1-D intervals and 2-D triangulations, plus the
# DOF map that splits (node, local dof) pairs into open unknowns and closed,
# prescribed values.

from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..exceptions.funcint_exceptions import (
    DanglingNodeReferenceException,
    DofMapMismatchException,
    DuplicateConstraintException,
    InvalidMeshException,
    InvalidParameterException,
    NonMonotonePositionsException,
    NotAClosedDofException,
    PointOutsideDomainException,
    TooFewNodesException,
    UnknownNodeException,
)

DofPair = Tuple[int, int]


class ElementKind(Enum):
    """Element kinds. Hermite shares Line2 geometry; only interpolation differs."""
    LINE2 = "line2"
    HERMITE_LINE2 = "hermite_line2"
    TRI3 = "tri3"

    @property
    def n_nodes(self) -> int:
        return 3 if self is ElementKind.TRI3 else 2

    @property
    def dim(self) -> int:
        return 2 if self is ElementKind.TRI3 else 1

    @property
    def ndof_per_node(self) -> int:
        return 2 if self is ElementKind.HERMITE_LINE2 else 1

    @property
    def n_funcs(self) -> int:
        return self.n_nodes * self.ndof_per_node


def triangle_signed_area(coords: np.ndarray) -> float:
    """Signed area of a triangle given as a 3x2 array (positive if counter-clockwise)."""
    (x1, y1), (x2, y2), (x3, y3) = coords
    return 0.5 * ((x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1))


@dataclass(frozen=True)
class Node:
    """Mesh node with a 1- or 2-component coordinate."""
    id: int
    coords: Tuple[float, ...]

    def __post_init__(self):
        if self.id < 1:
            raise InvalidParameterException("node.id", self.id, "node ids start at 1")
        if len(self.coords) not in (1, 2):
            raise InvalidParameterException("node.coords", self.coords, "expected 1 or 2 coordinates")
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))


@dataclass(frozen=True)
class Element:
    """
    Element connectivity.

    ``tags`` keeps the Gmsh tags; the first one is the physical group used to
    select boundary nodes.
    """
    id: int
    kind: ElementKind
    node_ids: Tuple[int, ...]
    tags: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "node_ids", tuple(int(n) for n in self.node_ids))
        object.__setattr__(self, "tags", tuple(int(t) for t in self.tags))
        if len(self.node_ids) != self.kind.n_nodes:
            raise InvalidParameterException(
                "element.node_ids", self.node_ids,
                f"{self.kind.value} needs {self.kind.n_nodes} nodes"
            )
        if len(set(self.node_ids)) != len(self.node_ids):
            raise InvalidParameterException("element.node_ids", self.node_ids, "repeated node")

    @property
    def physical(self) -> Optional[int]:
        return self.tags[0] if self.tags else None


@dataclass(frozen=True)
class Mesh:
    """
    🕸️ ENTIDAD - Malla inmutable de un dominio 1-D o 2-D.

    Domain elements are those whose dimension equals ``spatial_dim``; lower
    dimensional elements (boundary lines of a triangulation) only carry
    physical tags for boundary-condition selection.
    """
    nodes: Tuple[Node, ...]
    elements: Tuple[Element, ...]
    spatial_dim: int
    _index: Mapping[int, Node] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "elements", tuple(self.elements))
        self._validate_domain_invariants()

    def _validate_domain_invariants(self) -> None:
        if self.spatial_dim not in (1, 2):
            raise InvalidMeshException(f"spatial_dim must be 1 or 2, got {self.spatial_dim}")

        index: Dict[int, Node] = {}
        for node in self.nodes:
            if node.id in index:
                raise InvalidMeshException(f"duplicate node id {node.id}")
            if len(node.coords) != self.spatial_dim:
                raise InvalidMeshException(
                    f"node {node.id} has {len(node.coords)} coordinates, mesh is {self.spatial_dim}-D"
                )
            index[node.id] = node
        object.__setattr__(self, "_index", MappingProxyType(index))

        referenced = set()
        for element in self.elements:
            if element.kind.dim > self.spatial_dim:
                raise InvalidMeshException(f"{element.kind.value} element {element.id} in a 1-D mesh")
            for nid in element.node_ids:
                if nid not in index:
                    raise DanglingNodeReferenceException(element.id, nid)
                referenced.add(nid)

        orphans = sorted(set(index) - referenced)
        if orphans:
            raise InvalidMeshException(f"nodes {orphans} are not referenced by any element")

        domain = self.domain_elements
        if not domain:
            raise InvalidMeshException("mesh has no domain elements")

        if self.spatial_dim == 1:
            intervals = []
            for element in domain:
                a, b = (index[n].coords[0] for n in element.node_ids)
                if not b > a:
                    raise InvalidMeshException(
                        f"element {element.id} coordinates must increase along the line"
                    )
                intervals.append((a, b))
            intervals.sort()
            for (a0, b0), (a1, b1) in zip(intervals, intervals[1:]):
                if a1 < b0 - 1e-12 * max(1.0, abs(b0)):
                    raise InvalidMeshException(f"intervals [{a0}, {b0}] and [{a1}, {b1}] overlap")
        else:
            for element in domain:
                area = triangle_signed_area(self.coords_of(element))
                if area <= 0.0:
                    raise InvalidMeshException(
                        f"triangle {element.id} has non-positive signed area {area!r}"
                    )

    # ================================================================================================
    # 🔍 CONSULTAS
    # ================================================================================================

    def node(self, node_id: int) -> Node:
        try:
            return self._index[node_id]
        except KeyError:
            raise UnknownNodeException(f"node_id={node_id}") from None

    def has_node(self, node_id: int) -> bool:
        return node_id in self._index

    def coords_of(self, element: Element) -> np.ndarray:
        """Node coordinates of ``element`` as an (n_nodes, spatial_dim) array."""
        return np.array([self._index[n].coords for n in element.node_ids], dtype=float)

    @property
    def domain_elements(self) -> Tuple[Element, ...]:
        return tuple(e for e in self.elements if e.kind.dim == self.spatial_dim)

    @property
    def domain_kind(self) -> ElementKind:
        kinds = {e.kind for e in self.domain_elements}
        if len(kinds) != 1:
            raise InvalidMeshException(f"mixed domain element kinds {sorted(k.value for k in kinds)}")
        return kinds.pop()

    def element_diameter(self, element: Element) -> float:
        xy = self.coords_of(element)
        return max(
            float(np.linalg.norm(xy[i] - xy[j]))
            for i in range(len(xy)) for j in range(i + 1, len(xy))
        )

    @property
    def h(self) -> float:
        """Mesh parameter: largest domain-element diameter."""
        return max(self.element_diameter(e) for e in self.domain_elements)

    def measure(self) -> float:
        """Total length (1-D) or area (2-D) of the domain elements."""
        if self.spatial_dim == 1:
            return sum(self.element_diameter(e) for e in self.domain_elements)
        return sum(triangle_signed_area(self.coords_of(e)) for e in self.domain_elements)

    def bounding_box(self) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
        xy = np.array([n.coords for n in self.nodes], dtype=float)
        return tuple(xy.min(axis=0).tolist()), tuple(xy.max(axis=0).tolist())

    def element_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for element in self.elements:
            counts[element.kind.value] = counts.get(element.kind.value, 0) + 1
        return dict(sorted(counts.items()))

    def nodes_in_group(self, tag: int) -> Tuple[int, ...]:
        """Node ids of all elements whose physical tag is ``tag``."""
        ids = {n for e in self.elements if e.physical == tag for n in e.node_ids}
        return tuple(sorted(ids))

    def node_at(self, point: Sequence[float], tol: float = 1e-10) -> Optional[int]:
        target = np.asarray(point, dtype=float)
        if target.shape != (self.spatial_dim,):
            return None
        scale = max(1.0, float(np.max(np.abs(target))))
        for node in self.nodes:
            if np.max(np.abs(np.asarray(node.coords) - target)) <= tol * scale:
                return node.id
        return None

    def locate(self, point: Sequence[float], tol: float = 1e-10) -> Element:
        """First domain element containing ``point`` (closed, with slack ``tol``)."""
        x = np.atleast_1d(np.asarray(point, dtype=float))
        if x.shape != (self.spatial_dim,):
            raise PointOutsideDomainException(tuple(x.tolist()))
        for element in self.domain_elements:
            xy = self.coords_of(element)
            if self.spatial_dim == 1:
                a, b = xy[0, 0], xy[1, 0]
                slack = tol * max(1.0, b - a)
                if a - slack <= x[0] <= b + slack:
                    return element
            else:
                lam = barycentric(xy, x)
                if np.all(lam >= -tol):
                    return element
        raise PointOutsideDomainException(tuple(x.tolist()))

    def with_kind(self, kind: ElementKind) -> "Mesh":
        """Reinterpret 1-D domain elements as ``kind`` (Line2 <-> HermiteLine2)."""
        if kind.dim != self.spatial_dim:
            raise InvalidParameterException("kind", kind.value, "dimension differs from mesh")
        elements = tuple(
            Element(e.id, kind, e.node_ids, e.tags) if e.kind.dim == self.spatial_dim else e
            for e in self.elements
        )
        return Mesh(self.nodes, elements, self.spatial_dim)


def barycentric(vertices: np.ndarray, point: np.ndarray) -> np.ndarray:
    """Barycentric coordinates of ``point`` with respect to a triangle."""
    (x1, y1), (x2, y2), (x3, y3) = vertices
    det = (y2 - y3) * (x1 - x3) + (x3 - x2) * (y1 - y3)
    l1 = ((y2 - y3) * (point[0] - x3) + (x3 - x2) * (point[1] - y3)) / det
    l2 = ((y3 - y1) * (point[0] - x3) + (x1 - x3) * (point[1] - y3)) / det
    return np.array([l1, l2, 1.0 - l1 - l2])


# ================================================================================================
# 📏 CONSTRUCCIÓN DE MALLAS 1-D
# ================================================================================================

def build_interval_mesh(
    length: float,
    node_positions: Sequence[float],
    kind: ElementKind = ElementKind.LINE2,
) -> Mesh:
    """
    Build a 1-D mesh over [0, length] with nodes at ``node_positions``.

    Raises:
        TooFewNodesException: fewer than two positions
        NonMonotonePositionsException: positions not strictly increasing or
            not spanning exactly [0, length]
    """
    if not length > 0:
        raise InvalidParameterException("length", length, "must be positive")
    if kind.dim != 1:
        raise InvalidParameterException("kind", kind.value, "interval meshes need a 1-D element kind")

    positions = [float(p) for p in node_positions]
    if len(positions) < 2:
        raise TooFewNodesException(len(positions))
    if any(b <= a for a, b in zip(positions, positions[1:])):
        raise NonMonotonePositionsException(positions)

    tol = 1e-12 * length
    if abs(positions[0]) > tol or abs(positions[-1] - length) > tol:
        raise NonMonotonePositionsException(positions, f"positions must start at 0 and end at {length}")
    positions[0], positions[-1] = 0.0, float(length)

    nodes = tuple(Node(i + 1, (x,)) for i, x in enumerate(positions))
    elements = tuple(Element(i + 1, kind, (i + 1, i + 2)) for i in range(len(positions) - 1))
    return Mesh(nodes, elements, 1)


def uniform_interval_mesh(length: float, n_elements: int, kind: ElementKind = ElementKind.LINE2) -> Mesh:
    if n_elements < 1:
        raise TooFewNodesException(n_elements + 1)
    return build_interval_mesh(length, np.linspace(0.0, length, n_elements + 1), kind)


# ================================================================================================
# 🔢 DOF MAP - nodos abiertos (η) y cerrados (η_u)
# ================================================================================================

@dataclass(frozen=True)
class OpenDof:
    index: int


@dataclass(frozen=True)
class ClosedDof:
    value: float


DofStatus = Union[OpenDof, ClosedDof]


@dataclass(frozen=True)
class NodeSelector:
    """Selects nodes by id, by coordinate, or by physical group. Exactly one is set."""
    node_id: Optional[int] = None
    at: Optional[Tuple[float, ...]] = None
    group: Optional[int] = None

    def __post_init__(self):
        chosen = sum(v is not None for v in (self.node_id, self.at, self.group))
        if chosen != 1:
            raise InvalidParameterException("selector", self, "set exactly one of node_id, at, group")
        if self.at is not None:
            object.__setattr__(self, "at", tuple(float(c) for c in np.atleast_1d(self.at)))

    @classmethod
    def node(cls, node_id: int) -> "NodeSelector":
        return cls(node_id=node_id)

    @classmethod
    def point(cls, *coords: float) -> "NodeSelector":
        return cls(at=tuple(coords))

    @classmethod
    def physical(cls, tag: int) -> "NodeSelector":
        return cls(group=tag)

    def resolve(self, mesh: Mesh, tol: float = 1e-10) -> Tuple[int, ...]:
        if self.node_id is not None:
            ids: Tuple[int, ...] = (self.node_id,) if mesh.has_node(self.node_id) else ()
        elif self.at is not None:
            found = mesh.node_at(self.at, tol)
            ids = (found,) if found is not None else ()
        else:
            ids = mesh.nodes_in_group(self.group)
        if not ids:
            raise UnknownNodeException(str(self))
        return ids

    def __str__(self) -> str:
        if self.node_id is not None:
            return f"node_id={self.node_id}"
        if self.at is not None:
            return f"at={self.at}"
        return f"group={self.group}"


@dataclass(frozen=True)
class Constraint:
    """Prescribe ``value`` on ``local_dof`` (1-based) of every selected node."""
    selector: NodeSelector
    local_dof: int = 1
    value: float = 0.0


@dataclass(frozen=True)
class DofMap:
    """
    🔢 ENTIDAD - Estado abierto/cerrado de cada par (nodo, dof local).

    Open pairs are numbered 0..N-1 in (node id, local dof) order; closed pairs
    carry their prescribed value and get their own contiguous numbering in
    the same order (used by assembly for the closed block).
    """
    ndof_per_node: int
    status: Mapping[DofPair, DofStatus]
    labels: Tuple[DofPair, ...] = field(init=False)
    closed_pairs: Tuple[DofPair, ...] = field(init=False)

    def __post_init__(self):
        if self.ndof_per_node not in (1, 2):
            raise InvalidParameterException("ndof_per_node", self.ndof_per_node, "must be 1 or 2")
        status = dict(sorted(self.status.items()))
        object.__setattr__(self, "status", MappingProxyType(status))

        opened = sorted((s.index, pair) for pair, s in status.items() if isinstance(s, OpenDof))
        if [i for i, _ in opened] != list(range(len(opened))):
            raise DofMapMismatchException("open indices are not contiguous from 0")
        object.__setattr__(self, "labels", tuple(pair for _, pair in opened))
        object.__setattr__(
            self, "closed_pairs",
            tuple(pair for pair, s in status.items() if isinstance(s, ClosedDof))
        )

    @property
    def n_open(self) -> int:
        return len(self.labels)

    @property
    def n_closed(self) -> int:
        return len(self.closed_pairs)

    def status_of(self, node_id: int, local_dof: int = 1) -> DofStatus:
        try:
            return self.status[(node_id, local_dof)]
        except KeyError:
            raise DofMapMismatchException(f"no DOF ({node_id}, {local_dof}) in map") from None

    def index_of(self, node_id: int, local_dof: int = 1) -> Optional[int]:
        s = self.status_of(node_id, local_dof)
        return s.index if isinstance(s, OpenDof) else None

    def closed_index(self, node_id: int, local_dof: int = 1) -> int:
        pair = (node_id, local_dof)
        if not isinstance(self.status.get(pair), ClosedDof):
            raise NotAClosedDofException(node_id, local_dof)
        return self.closed_pairs.index(pair)

    def closed_values(self) -> np.ndarray:
        return np.array([self.status[p].value for p in self.closed_pairs], dtype=float)

    def element_dofs(self, element: Element) -> List[DofPair]:
        """(node, local dof) pairs of ``element`` in local order (u1, u1_x, u2, u2_x for Hermite)."""
        return [(n, d) for n in element.node_ids for d in range(1, self.ndof_per_node + 1)]

    def with_closed_value(self, node_id: int, local_dof: int, value: float) -> "DofMap":
        """Copy with a new prescribed value on an existing closed DOF."""
        if not isinstance(self.status.get((node_id, local_dof)), ClosedDof):
            raise NotAClosedDofException(node_id, local_dof)
        status = dict(self.status)
        status[(node_id, local_dof)] = ClosedDof(float(value))
        return DofMap(self.ndof_per_node, status)

    def full_vector(self, d: np.ndarray) -> Dict[DofPair, float]:
        """Value of every pair given the open vector ``d``."""
        return {
            pair: (float(d[s.index]) if isinstance(s, OpenDof) else s.value)
            for pair, s in self.status.items()
        }


def build_dof_map(mesh: Mesh, ndof_per_node: int, constraints: Iterable[Constraint]) -> DofMap:
    """
    Number the DOFs of ``mesh``.

    Raises:
        UnknownNodeException: a selector matches nothing
        DuplicateConstraintException: a (node, dof) pair is constrained twice
    """
    if ndof_per_node not in (1, 2):
        raise InvalidParameterException("ndof_per_node", ndof_per_node, "must be 1 or 2")

    closed: Dict[DofPair, ClosedDof] = {}
    for constraint in constraints:
        if not 1 <= constraint.local_dof <= ndof_per_node:
            raise InvalidParameterException(
                "local_dof", constraint.local_dof, f"must be in 1..{ndof_per_node}"
            )
        for node_id in constraint.selector.resolve(mesh):
            pair = (node_id, constraint.local_dof)
            if pair in closed:
                raise DuplicateConstraintException(*pair)
            closed[pair] = ClosedDof(float(constraint.value))

    status: Dict[DofPair, DofStatus] = {}
    next_index = 0
    for node in sorted(mesh.nodes, key=lambda n: n.id):
        for dof in range(1, ndof_per_node + 1):
            pair = (node.id, dof)
            if pair in closed:
                status[pair] = closed[pair]
            else:
                status[pair] = OpenDof(next_index)
                next_index += 1
    return DofMap(ndof_per_node, status)
