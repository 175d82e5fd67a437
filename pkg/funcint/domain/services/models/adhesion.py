# ================================================================================================
# 🧲 ADHESION MODEL - Viga con N enlaces que se rompen y reconectan
# ================================================================================================
# A clamped beam whose end deflection u_bar is prescribed, glued by N springs
# of stiffness k at x_A. The spin xi in {0..N} counts the connected bonds,
# always the xi closest to the clamp:
#
#   E(d; xi) = E_beam(d) + sum_{A <= xi} k/2 u(x_A)^2 + (N - xi) k U^2 / 2
#
# For fixed xi the energy is quadratic, so xi is marginalized exactly with
# one Gaussian partition function per spin state.

from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np
import structlog
from scipy.special import logsumexp

from ...entities.mesh import DofMap, ElementKind, Mesh, build_interval_mesh
from ...entities.quadratic_form import QuadraticForm
from ...exceptions.funcint_exceptions import BondOffMeshException, InvalidParameterException
from ...value_objects.statistics import ChainConfig, EnsembleSpec, Estimate, GaussianStats
from ..assembly import assemble, assemble_sensitivity
from ..gaussian import conjugate_force, moments
from ..sampler import metropolis_with_spin
from .beam import BeamParams, beam_dofmap, beam_mesh, supported_end

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class AdhesionParams:
    """
    🧲 Parámetros del modelo de adhesión.

    Defaults are the reference set: L = K_B = U = 1 (so E0 = 1), k U^2 / E0 = 5
    and N = 6 bonds equally spaced at x_A = A L / (N + 1), none at the ends.
    """
    L: float = 1.0
    K_B: float = 1.0
    n_bonds: int = 6
    k: float = 5.0
    U: float = 1.0
    u_bar: float = 0.0
    bond_positions: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        for name in ("L", "K_B", "k", "U"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidParameterException(name, value, "must be positive")
        if int(self.n_bonds) != self.n_bonds or self.n_bonds < 1:
            raise InvalidParameterException("n_bonds", self.n_bonds, "must be an integer >= 1")
        if self.bond_positions is not None:
            positions = tuple(float(x) for x in self.bond_positions)
            if len(positions) != self.n_bonds:
                raise InvalidParameterException(
                    "bond_positions", positions, f"expected {self.n_bonds} positions"
                )
            if len(set(positions)) != len(positions):
                raise InvalidParameterException("bond_positions", positions, "positions must be distinct")
            object.__setattr__(self, "bond_positions", positions)

    @property
    def E0(self) -> float:
        """Energy scale K_B U^2 / L^3."""
        return self.K_B * self.U**2 / self.L**3

    @property
    def positions(self) -> Tuple[float, ...]:
        """Bond positions sorted from the clamped end."""
        if self.bond_positions is not None:
            return tuple(sorted(self.bond_positions))
        return tuple(a * self.L / (self.n_bonds + 1) for a in range(1, self.n_bonds + 1))

    def beam(self) -> BeamParams:
        return BeamParams(L=self.L, K_B=self.K_B, f=0.0, end_support=self.u_bar)

    def with_u_bar(self, u_bar: float) -> "AdhesionParams":
        return replace(self, u_bar=float(u_bar))


def adhesion_mesh(p: AdhesionParams, refine: int = 1) -> Mesh:
    """Nodes at the clamp, at every bond and at the supported end; each gap split ``refine`` times."""
    if refine < 1:
        raise InvalidParameterException("refine", refine, "must be at least 1")
    breaks = sorted({0.0, p.L, *p.positions})
    points = [
        a + (b - a) * i / refine
        for a, b in zip(breaks, breaks[1:])
        for i in range(refine)
    ] + [p.L]
    return build_interval_mesh(p.L, points, ElementKind.HERMITE_LINE2)


def bond_dofs(p: AdhesionParams, mesh: Mesh, dofmap: DofMap) -> Tuple[int, ...]:
    """
    Open value-DOF index of each bond, in bond order.

    Raises:
        BondOffMeshException: no node at a bond position, or its deflection
            is prescribed
    """
    indices = []
    for x in p.positions:
        node_id = mesh.node_at((x,), tol=1e-10)
        if node_id is None:
            raise BondOffMeshException(x)
        index = dofmap.index_of(node_id, 1)
        if index is None:
            raise BondOffMeshException(x, "deflection at the bond is prescribed")
        indices.append(index)
    return tuple(indices)


@dataclass(frozen=True)
class SpinEnsemble:
    """N + 1 quadratic forms sharing DOFs; ``forms[xi]`` has bonds 1..xi connected."""
    forms: Tuple[QuadraticForm, ...]
    beta: float
    bond_dofs: Tuple[int, ...]
    params: AdhesionParams
    mesh: Mesh = field(repr=False, compare=False)
    dofmap: DofMap = field(repr=False, compare=False)

    def __post_init__(self):
        if not self.beta > 0:
            raise InvalidParameterException("beta", self.beta, "must be positive")
        first = self.forms[0]
        for form in self.forms[1:]:
            if form.n != first.n or form.labels != first.labels:
                raise InvalidParameterException("forms", len(self.forms), "spin forms must share their DOFs")

    @property
    def n_bonds(self) -> int:
        return len(self.forms) - 1

    def energy(self, d: np.ndarray, xi: int) -> float:
        return self.forms[xi].energy(d)

    def energies(self, d: np.ndarray) -> np.ndarray:
        """E(d; xi) for every xi at once."""
        k, U = self.params.k, self.params.U
        d = np.asarray(d, dtype=float)
        increments = 0.5 * k * (d[list(self.bond_dofs)] ** 2 - U**2)
        return self.forms[0].energy(d) + np.concatenate(([0.0], np.cumsum(increments)))


def build_spin_ensemble(p: AdhesionParams, beta: float, mesh: Optional[Mesh] = None) -> SpinEnsemble:
    """
    One QuadraticForm per spin state: the bare supported beam plus k on the
    diagonal at the first xi bond DOFs, plus (N - xi) k U^2 / 2 in c.
    """
    beam = p.beam()
    mesh = beam_mesh(beam, mesh if mesh is not None else adhesion_mesh(p))
    dofmap = beam_dofmap(beam, mesh)
    base = assemble(mesh, dofmap, p.K_B, None)
    bonds = bond_dofs(p, mesh, dofmap)

    forms = []
    for xi in range(p.n_bonds + 1):
        springs = np.zeros(base.n)
        springs[list(bonds[:xi])] = p.k
        forms.append(base.shifted(dK=np.diag(springs), dc=0.5 * (p.n_bonds - xi) * p.k * p.U**2))
    return SpinEnsemble(tuple(forms), float(beta), bonds, p, mesh, dofmap)


@dataclass(frozen=True)
class SpinObservables:
    log_Z_total: float
    mean_xi: float
    xi_distribution: np.ndarray
    log_Z: np.ndarray
    stats: Tuple[GaussianStats, ...] = field(repr=False, compare=False)


def spin_observables(se: SpinEnsemble) -> SpinObservables:
    """
    Marginalize xi: log Z = logsumexp(log Z_xi), w_xi = exp(log Z_xi - log Z),
    <xi> = sum xi w_xi.
    """
    stats = tuple(moments(EnsembleSpec(se.beta, form)) for form in se.forms)
    log_Z = np.array([s.log_Z for s in stats])
    log_Z_total = float(logsumexp(log_Z))
    weights = np.exp(log_Z - log_Z_total)
    weights /= weights.sum()
    mean_xi = float(np.clip(np.arange(weights.size) @ weights, 0.0, se.n_bonds))
    return SpinObservables(log_Z_total, mean_xi, weights, log_Z, stats)


def ground_state(se: SpinEnsemble) -> int:
    """argmin over xi of min_d E(d; xi)."""
    minima = [moments(EnsembleSpec(se.beta, form)).min_energy for form in se.forms]
    return int(np.argmin(minima))


@dataclass(frozen=True)
class AdhesionResult:
    """One point of the adhesion response, raw and in (E0, U) units."""
    u_bar: float
    beta: float
    mean_force: float
    mean_xi: float
    log_Z: float
    xi_distribution: np.ndarray = field(repr=False, compare=False)
    E0: float = 1.0
    U: float = 1.0

    @property
    def u_bar_nd(self) -> float:
        return self.u_bar / self.U

    @property
    def beta_E0(self) -> float:
        return self.beta * self.E0

    @property
    def mean_force_nd(self) -> float:
        return self.mean_force * self.U / self.E0


def evaluate_adhesion(p: AdhesionParams, beta: float, mesh: Optional[Mesh] = None) -> AdhesionResult:
    """
    Exact <xi>, log Z and the mean end force <f> = -(1/beta) d(log Z)/d(u_bar).

    Per spin state d(log Z_xi)/d(u_bar) = -beta (dc + db.mu_xi); the springs
    do not depend on u_bar so (db, dc) come from the bare beam.
    """
    se = build_spin_ensemble(p, beta, mesh)
    obs = spin_observables(se)
    wrt = supported_end(p.beam(), se.mesh)
    db, dc = assemble_sensitivity(se.mesh, se.dofmap, p.K_B, None, wrt)
    forces = np.array([conjugate_force(s, db, dc) for s in obs.stats])
    force = float(obs.xi_distribution @ forces)
    logger.debug("adhesion_point", u_bar=p.u_bar, beta=beta, mean_xi=obs.mean_xi, mean_force=force)
    return AdhesionResult(
        u_bar=p.u_bar,
        beta=float(beta),
        mean_force=force,
        mean_xi=obs.mean_xi,
        log_Z=obs.log_Z_total,
        xi_distribution=obs.xi_distribution,
        E0=p.E0,
        U=p.U,
    )


def mean_force(p: AdhesionParams, beta: float, mesh: Optional[Mesh] = None) -> float:
    return evaluate_adhesion(p, beta, mesh).mean_force


def sample_adhesion(
    p: AdhesionParams,
    beta: float,
    cfg: ChainConfig,
    mesh: Optional[Mesh] = None,
    precondition: bool = True,
) -> Estimate:
    """
    MCMC estimate of <xi>.

    The chain starts at the most probable spin state and its mean; with
    ``precondition`` the random walk is shaped by that state's covariance.
    """
    se = build_spin_ensemble(p, beta, mesh)
    obs = spin_observables(se)
    xi0 = int(np.argmax(obs.xi_distribution))
    start = obs.stats[xi0]
    factor = start.sampling_factor() if precondition else None

    return metropolis_with_spin(
        joint_energy=se.energy,
        beta=beta,
        init_d=start.mean,
        init_xi=xi0,
        n_spin_states=se.n_bonds + 1,
        observable=lambda d, xi: float(xi),
        cfg=cfg,
        xi_log_weights=lambda d: -se.beta * se.energies(d),
        proposal_factor=factor,
    )
