# ================================================================================================
# 🏗️ ASSEMBLY - De matrices elementales a la forma cuadrática global
# ================================================================================================
# Scatter element blocks over all (node, dof) pairs, then condense the closed
# DOFs exactly:
#
#   K = K_oo,  b = K_oc u_bar - F_o,  c = 1/2 u_bar^T K_cc u_bar - F_c . u_bar
#
# Dense storage; the SPD factorization costs O(N^3), which is fine up to a few
# thousand open DOFs.

from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from ..entities.mesh import DofMap, DofPair, Mesh
from ..entities.quadratic_form import QuadraticForm
from ..exceptions.funcint_exceptions import (
    DofMapMismatchException,
    InvalidParameterException,
    NotPositiveDefiniteException,
    SingularAfterBCException,
)
from .elements import element_matrices
from .gaussian import cholesky_factor

logger = structlog.get_logger(__name__)

Material = Union[float, Sequence[float], Mapping[int, float]]
Load = Union[None, float, Sequence[float], Mapping[int, float], Callable[[np.ndarray], float]]


@dataclass(frozen=True)
class _Blocks:
    K_oo: np.ndarray
    K_oc: np.ndarray
    K_cc: np.ndarray
    F_o: np.ndarray
    F_c: np.ndarray
    u_bar: np.ndarray


def nodal_load_values(mesh: Mesh, load: Load) -> Optional[Dict[int, float]]:
    """
    Normalize a load description to f values per node id.

    Accepts a constant, a sequence in ascending node-id order, a mapping
    node id -> value, or a callable of the node coordinates.
    """
    if load is None:
        return None
    ids = sorted(n.id for n in mesh.nodes)
    if callable(load):
        return {nid: float(load(np.asarray(mesh.node(nid).coords))) for nid in ids}
    if isinstance(load, Mapping):
        missing = [nid for nid in ids if nid not in load]
        if missing:
            raise InvalidParameterException("load", f"{len(load)} values", f"no value for nodes {missing[:5]}")
        return {nid: float(load[nid]) for nid in ids}
    if np.ndim(load) == 0:
        return {nid: float(load) for nid in ids}
    values = [float(v) for v in load]
    if len(values) != len(ids):
        raise InvalidParameterException("load", f"{len(values)} values", f"expected {len(ids)} nodal values")
    return dict(zip(ids, values))


def _material_of(material: Material, position: int, element_id: int) -> float:
    if isinstance(material, Mapping):
        return float(material[element_id])
    if np.ndim(material) == 0:
        return float(material)
    return float(material[position])


def _assemble_blocks(mesh: Mesh, dofmap: DofMap, material: Material, load: Load) -> _Blocks:
    kind = mesh.domain_kind
    if dofmap.ndof_per_node != kind.ndof_per_node:
        raise DofMapMismatchException(
            f"{kind.value} needs {kind.ndof_per_node} dof(s) per node, map has {dofmap.ndof_per_node}"
        )
    expected = {(n.id, d) for n in mesh.nodes for d in range(1, dofmap.ndof_per_node + 1)}
    if expected != set(dofmap.status):
        raise DofMapMismatchException("(node, dof) pairs differ from the mesh nodes")

    domain = mesh.domain_elements
    if not isinstance(material, Mapping) and np.ndim(material) == 1 and len(material) != len(domain):
        raise InvalidParameterException(
            "material", f"{len(material)} values", f"expected one per domain element ({len(domain)})"
        )

    n_open, n_closed = dofmap.n_open, dofmap.n_closed
    position: Dict[DofPair, int] = {pair: i for i, pair in enumerate(dofmap.labels)}
    position.update({pair: n_open + j for j, pair in enumerate(dofmap.closed_pairs)})

    n_total = n_open + n_closed
    K_full = np.zeros((n_total, n_total))
    F_full = np.zeros(n_total)
    f_nodes = nodal_load_values(mesh, load)

    for i, element in enumerate(domain):
        nodal_f = [f_nodes[n] for n in element.node_ids] if f_nodes is not None else None
        em = element_matrices(element.kind, mesh.coords_of(element), _material_of(material, i, element.id), nodal_f)
        idx = np.array([position[pair] for pair in dofmap.element_dofs(element)])
        K_full[np.ix_(idx, idx)] += em.k
        if em.f_vec is not None:
            F_full[idx] += em.f_vec

    o, c = slice(0, n_open), slice(n_open, n_total)
    return _Blocks(
        K_oo=K_full[o, o],
        K_oc=K_full[o, c],
        K_cc=K_full[c, c],
        F_o=F_full[o],
        F_c=F_full[c],
        u_bar=dofmap.closed_values(),
    )


def assemble(mesh: Mesh, dofmap: DofMap, material: Material, load: Load = None) -> QuadraticForm:
    """
    🏗️ Global quadratic energy over the open DOFs.

    Args:
        material: sigma (strings, membranes) or K_B (beams); one value, one
            per domain element, or a mapping element id -> value
        load: nodal values of f, see ``nodal_load_values``

    Raises:
        SingularAfterBCException: K is not positive definite after the
            closed DOFs are removed
    """
    blocks = _assemble_blocks(mesh, dofmap, material, load)
    b = blocks.K_oc @ blocks.u_bar - blocks.F_o
    c = 0.5 * blocks.u_bar @ blocks.K_cc @ blocks.u_bar - blocks.F_c @ blocks.u_bar

    K = 0.5 * (blocks.K_oo + blocks.K_oo.T)
    try:
        cholesky_factor(K)
    except NotPositiveDefiniteException as exc:
        logger.warning("assembly_singular", n_open=dofmap.n_open, n_closed=dofmap.n_closed, detail=exc.detail)
        raise SingularAfterBCException(dofmap.n_open, exc.detail) from exc

    logger.debug(
        "assembled_quadratic_form",
        kind=mesh.domain_kind.value,
        n_elements=len(mesh.domain_elements),
        n_open=dofmap.n_open,
        n_closed=dofmap.n_closed,
    )
    return QuadraticForm(K=K, b=b, c=float(c), labels=dofmap.labels, dofmap=dofmap)


def assemble_sensitivity(
    mesh: Mesh,
    dofmap: DofMap,
    material: Material,
    load: Load,
    wrt: Tuple[int, int],
) -> Tuple[np.ndarray, float]:
    """
    Exact derivatives (db, dc) of (b, c) with respect to the prescribed value
    of the closed DOF ``wrt`` = (node id, local dof).

    Raises:
        NotAClosedDofException: ``wrt`` is open or unknown
    """
    j = dofmap.closed_index(*wrt)
    blocks = _assemble_blocks(mesh, dofmap, material, load)
    db = blocks.K_oc[:, j].copy()
    dc = float(blocks.K_cc[j] @ blocks.u_bar - blocks.F_c[j])
    return db, dc


def energy(q: QuadraticForm, d: Sequence[float]) -> float:
    """E(d) = 1/2 d^T K d + b.d + c."""
    return q.energy(d)
