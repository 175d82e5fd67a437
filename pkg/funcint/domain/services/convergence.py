# ================================================================================================
# 📉 CONVERGENCE - Error L² del campo medio y orden de convergencia
# ================================================================================================

from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np
import structlog

from ..entities.mesh import ClosedDof, DofMap, Mesh, uniform_interval_mesh
from ..exceptions.funcint_exceptions import InvalidParameterException
from ..value_objects.statistics import EnsembleSpec, GaussianStats
from .elements import gauss_line, interpolation_weights
from .gaussian import moments
from .models.string import StringParams, build_string, string_dofmap

logger = structlog.get_logger(__name__)


def l2_error(
    stats: GaussianStats,
    mesh: Mesh,
    dofmap: DofMap,
    exact: Callable[[float], float],
    n_points: int = 5,
) -> float:
    """|| <u^h> - u ||_L2 over a 1-D mesh by Gauss-Legendre quadrature per element."""
    if mesh.spatial_dim != 1:
        raise InvalidParameterException("mesh.spatial_dim", mesh.spatial_dim, "L2 error is computed on 1-D meshes")
    s, w = gauss_line(n_points)
    total = 0.0
    for element in mesh.domain_elements:
        coords = mesh.coords_of(element)
        a, b = coords[0, 0], coords[1, 0]
        local = np.array([
            stats.mean[st.index] if not isinstance(st, ClosedDof) else st.value
            for st in (dofmap.status_of(*pair) for pair in dofmap.element_dofs(element))
        ])
        for si, wi in zip(s, w):
            x = a + si * (b - a)
            uh = float(interpolation_weights(element.kind, coords, x) @ local)
            total += wi * (b - a) * (uh - exact(x)) ** 2
    return float(np.sqrt(total))


@dataclass(frozen=True)
class ConvergenceResult:
    """Errors e(h) and the least-squares slope of log e against log h."""
    hs: Tuple[float, ...]
    errors: Tuple[float, ...]
    rate: float


def fit_rate(hs: Sequence[float], errors: Sequence[float]) -> float:
    slope, _ = np.polyfit(np.log(hs), np.log(errors), 1)
    return float(slope)


def convergence_study(
    n_elements: Sequence[int],
    load: Callable[[np.ndarray], float],
    exact: Callable[[float], float],
    length: float = 1.0,
    sigma: float = 1.0,
    beta: float = 1.0,
) -> ConvergenceResult:
    """
    L² error of the string mean field on uniform meshes; the rate alpha
    fits ||u - u^h|| = C h^alpha.
    """
    if len(n_elements) < 2:
        raise InvalidParameterException("n_elements", n_elements, "need at least two meshes")
    params = StringParams(L=length, sigma=sigma, f=load, u_left=exact(0.0), u_right=exact(length))
    hs, errors = [], []
    for n in n_elements:
        mesh = uniform_interval_mesh(length, n)
        stats = moments(EnsembleSpec(beta, build_string(params, mesh)))
        hs.append(mesh.h)
        errors.append(l2_error(stats, mesh, string_dofmap(params, mesh), exact))
    rate = fit_rate(hs, errors)
    logger.info("convergence_study", meshes=len(hs), rate=round(rate, 4))
    return ConvergenceResult(tuple(hs), tuple(errors), rate)
