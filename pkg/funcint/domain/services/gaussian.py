# ================================================================================================
# 🔔 GAUSSIAN - Estadística exacta de energías cuadráticas
# ================================================================================================
# One Cholesky factorization of K gives the mean, the log-partition function
# and (lazily) the covariance of p(d) ~ exp(-beta E(d)).

from typing import Optional, Sequence, Tuple

import numpy as np
import structlog
from scipy.linalg import LinAlgError, cholesky, solve_triangular

from ..entities.mesh import ClosedDof, DofMap, Mesh
from ..exceptions.funcint_exceptions import (
    DimensionMismatchException,
    NonSymmetricException,
    NotPositiveDefiniteException,
)
from ..value_objects.statistics import EnsembleSpec, GaussianStats
from .elements import interpolation_weights

logger = structlog.get_logger(__name__)


def cholesky_factor(K: np.ndarray) -> np.ndarray:
    """
    Lower Cholesky factor of a symmetric matrix.

    Raises:
        NotPositiveDefiniteException: factorization fails, or a pivot is
            zero up to round-off
    """
    n = K.shape[0]
    if n == 0:
        return np.zeros((0, 0))
    try:
        L = cholesky(K, lower=True, check_finite=True)
    except (LinAlgError, ValueError) as exc:
        raise NotPositiveDefiniteException(n, str(exc)) from exc

    pivots = np.diag(L) ** 2
    if pivots.min() <= n * np.finfo(float).eps * np.max(np.abs(np.diag(K))):
        raise NotPositiveDefiniteException(n, f"numerically singular (smallest pivot {pivots.min():.3e})")
    return L


def moments(spec: EnsembleSpec) -> GaussianStats:
    """
    🔔 Mean, log Z and energies of the ensemble.

    mu = -K^-1 b, log_Z = n/2 ln(2 pi / beta) - 1/2 logdet K - beta (c - 1/2 b^T K^-1 b).
    An ensemble with no open DOF has log_Z = -beta c.
    """
    q, beta = spec.form, spec.beta
    n = q.n
    L = cholesky_factor(q.K)

    if n == 0:
        mean = np.zeros(0)
        min_energy = q.c
        log_det = 0.0
    else:
        y = solve_triangular(L, q.b, lower=True)
        mean = -solve_triangular(L, y, lower=True, trans="T")
        min_energy = q.c - 0.5 * float(y @ y)
        log_det = 2.0 * float(np.sum(np.log(np.diag(L))))

    log_Z = 0.5 * n * np.log(2.0 * np.pi / beta) - 0.5 * log_det - beta * min_energy
    mean.setflags(write=False)
    return GaussianStats(
        mean=mean,
        log_Z=float(log_Z),
        min_energy=float(min_energy),
        mean_energy=float(min_energy + 0.5 * n / beta),
        beta=beta,
        chol=L,
    )


def _vector(name: str, a: Sequence[float], n: int) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != (n,):
        raise DimensionMismatchException(name, (n,), a.shape)
    return a


def expect_linear(stats: GaussianStats, a: Sequence[float], a0: float = 0.0) -> float:
    """<a.d + a0>."""
    a = _vector("a", a, stats.n)
    return float(a @ stats.mean + a0)


def expect_quadratic(
    stats: GaussianStats,
    A: np.ndarray,
    a: Optional[Sequence[float]] = None,
    a0: float = 0.0,
) -> float:
    """<d^T A d + a.d + a0> = mu^T A mu + tr(A C) + a.mu + a0."""
    n = stats.n
    A = np.asarray(A, dtype=float)
    if A.shape != (n, n):
        raise DimensionMismatchException("A", (n, n), A.shape)
    if n:
        asymmetry = float(np.max(np.abs(A - A.T)))
        if asymmetry > 1e-12 * max(1.0, float(np.max(np.abs(A)))):
            raise NonSymmetricException("A", asymmetry)
    mu = stats.mean
    value = float(mu @ A @ mu + np.sum(A * stats.covariance)) + a0
    if a is not None:
        value += float(_vector("a", a, n) @ mu)
    return value


def conjugate_force(stats: GaussianStats, db: np.ndarray, dc: float) -> float:
    """
    Mean force conjugate to one prescribed value: -(1/beta) d(log Z)/d(u_bar) = dc + db.mu.
    """
    return float(dc + _vector("db", db, stats.n) @ stats.mean)


# ================================================================================================
# 📍 POINT FUNCTIONALS ON THE MESH
# ================================================================================================

def point_functional(
    mesh: Mesh,
    dofmap: DofMap,
    x: Sequence[float],
    tol: float = 1e-10,
) -> Tuple[np.ndarray, float]:
    """
    (a, a0) with u^h(x) = a.d + a0 for the open vector d.

    Raises:
        PointOutsideDomainException: no element contains x
    """
    element = mesh.locate(x, tol)
    weights = interpolation_weights(element.kind, mesh.coords_of(element), x)
    a = np.zeros(dofmap.n_open)
    a0 = 0.0
    for w, pair in zip(weights, dofmap.element_dofs(element)):
        status = dofmap.status_of(*pair)
        if isinstance(status, ClosedDof):
            a0 += w * status.value
        else:
            a[status.index] += w
    return a, a0


def mean_field(stats: GaussianStats, mesh: Mesh, dofmap: DofMap, x: Sequence[float], tol: float = 1e-10) -> float:
    a, a0 = point_functional(mesh, dofmap, x, tol)
    return expect_linear(stats, a, a0)


def field_covariance(
    stats: GaussianStats,
    mesh: Mesh,
    dofmap: DofMap,
    x: Sequence[float],
    y: Sequence[float],
    tol: float = 1e-10,
) -> float:
    """Cov(u^h(x), u^h(y)); prescribed values carry no variance."""
    ax, _ = point_functional(mesh, dofmap, x, tol)
    ay, _ = point_functional(mesh, dofmap, y, tol)
    return stats.covariance_between(ax, ay)


def field_variance(stats: GaussianStats, mesh: Mesh, dofmap: DofMap, x: Sequence[float], tol: float = 1e-10) -> float:
    return field_covariance(stats, mesh, dofmap, x, x, tol)
