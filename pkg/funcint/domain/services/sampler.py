# ================================================================================================
# 🎲 SAMPLER - Metropolis de paseo aleatorio con baño térmico para el espín
# ================================================================================================
# Each chain owns its own PCG64 generator built from a 64-bit seed, so a
# chain is deterministic per seed and chains share no mutable state.

from typing import Callable, List, Optional, Sequence, Union

import numpy as np
import structlog
from scipy.special import logsumexp

from ..exceptions.funcint_exceptions import (
    DimensionMismatchException,
    InvalidParameterException,
    NonFiniteEnergyException,
)
from ..value_objects.statistics import ChainConfig, Estimate

logger = structlog.get_logger(__name__)

Observable = Callable[..., Union[float, np.ndarray]]


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def spawn_seeds(seed: int, n_chains: int) -> List[int]:
    """Independent 64-bit child seeds for ``n_chains`` concurrent chains."""
    children = np.random.SeedSequence(seed).spawn(n_chains)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


class BatchMeans:
    """
    Streaming sample mean with a batch-means standard error.

    The number of samples is known up front; it is split into floor(sqrt(M))
    batches of equal size, any remainder only enters the overall mean.
    """

    def __init__(self, n_samples: int):
        self.n_samples = n_samples
        self.n_batches = max(1, int(np.floor(np.sqrt(n_samples))))
        self.batch_size = n_samples // self.n_batches
        self._count = 0
        self._total = None
        self._batch_sums = None

    def push(self, x: Union[float, np.ndarray]) -> None:
        x = np.asarray(x, dtype=float)
        if self._total is None:
            self._total = np.zeros_like(x)
            self._batch_sums = np.zeros((self.n_batches,) + x.shape)
        self._total += x
        batch = self._count // self.batch_size
        if batch < self.n_batches:
            self._batch_sums[batch] += x
        self._count += 1

    def result(self):
        mean = self._total / self._count
        if self.n_batches < 2:
            se = np.full_like(mean, np.inf)
        else:
            batch_means = self._batch_sums / self.batch_size
            se = np.std(batch_means, axis=0, ddof=1) / np.sqrt(self.n_batches)
        if mean.ndim == 0:
            return float(mean), float(se)
        return mean, se


def _check_energy(step: int, value: float, state: np.ndarray, spin: Optional[int] = None) -> float:
    value = float(value)
    if not np.isfinite(value):
        logger.error("non_finite_energy", step=step, energy=value, spin=spin)
        raise NonFiniteEnergyException(step, value, state.copy(), spin)
    return value


class _RandomWalk:
    """Symmetric Gaussian proposal d' = d + scale * (L z)."""

    def __init__(self, cfg: ChainConfig, n: int, proposal_factor: Optional[np.ndarray]):
        self.scale = cfg.scale_vector(n)
        self.factor = None
        if proposal_factor is not None:
            self.factor = np.asarray(proposal_factor, dtype=float)
            if self.factor.shape != (n, n):
                raise DimensionMismatchException("proposal_factor", (n, n), self.factor.shape)

    def step(self, rng: np.random.Generator, d: np.ndarray) -> np.ndarray:
        z = rng.standard_normal(d.shape[0])
        if self.factor is not None:
            z = self.factor @ z
        return d + self.scale * z


def _accept(rng: np.random.Generator, beta: float, delta_e: float) -> bool:
    if delta_e <= 0.0:
        return True
    return rng.random() < np.exp(-beta * delta_e)


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not (np.isfinite(beta) and beta > 0.0):
        raise InvalidParameterException("beta", beta, "must be positive and finite")
    return beta


def metropolis(
    energy_fn: Callable[[np.ndarray], float],
    beta: float,
    init: Sequence[float],
    observable: Callable[[np.ndarray], Union[float, np.ndarray]],
    cfg: ChainConfig,
    proposal_factor: Optional[np.ndarray] = None,
) -> Estimate:
    """
    🎲 Random-walk Metropolis estimate of <observable(d)>.

    Proposals d + proposal_scale * (L z), z ~ N(0, I) with L = ``proposal_factor``
    (identity when omitted), accepted with probability min(1, exp(-beta dE)).

    Raises:
        EmptyChainException: no step is kept after burn-in
        NonFiniteEnergyException: the energy is NaN or infinite
    """
    beta = _check_beta(beta)
    rng = make_rng(cfg.seed)
    d = np.array(init, dtype=float, ndmin=1)
    walk = _RandomWalk(cfg, d.shape[0], proposal_factor)
    e = _check_energy(0, energy_fn(d), d)

    stats = BatchMeans(cfg.n_kept)
    accepted = 0
    for t in range(cfg.n_steps):
        proposal = walk.step(rng, d)
        e_new = _check_energy(t + 1, energy_fn(proposal), proposal)
        if _accept(rng, beta, e_new - e):
            d, e = proposal, e_new
            accepted += 1
        if t >= cfg.burn_in and (t - cfg.burn_in) % cfg.thin == 0:
            stats.push(observable(d))

    value, se = stats.result()
    rate = accepted / cfg.n_steps
    logger.info(
        "metropolis_finished",
        n_steps=cfg.n_steps,
        n_kept=cfg.n_kept,
        acceptance_rate=round(rate, 4),
        seed=cfg.seed,
    )
    return Estimate(value, se, stats.n_batches, rate, cfg.n_kept)


def heat_bath(rng: np.random.Generator, log_weights: np.ndarray) -> int:
    """Draw an index with probability proportional to exp(log_weights)."""
    log_weights = np.asarray(log_weights, dtype=float)
    if np.any(np.isnan(log_weights) | (log_weights == np.inf)) or not np.any(np.isfinite(log_weights)):
        raise InvalidParameterException(
            "log_weights", log_weights.tolist(), "entries must be finite or -inf, at least one finite"
        )
    p = np.exp(log_weights - logsumexp(log_weights))
    return int(min(np.searchsorted(np.cumsum(p), rng.random() * p.sum(), side="right"), p.size - 1))


def metropolis_with_spin(
    joint_energy: Callable[[np.ndarray, int], float],
    beta: float,
    init_d: Sequence[float],
    init_xi: int,
    n_spin_states: int,
    observable: Callable[[np.ndarray, int], Union[float, np.ndarray]],
    cfg: ChainConfig,
    xi_log_weights: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    proposal_factor: Optional[np.ndarray] = None,
) -> Estimate:
    """
    Metropolis-within-Gibbs over (d, xi).

    Every step makes one random-walk move on d at fixed xi and then redraws
    xi in {0, ..., n_spin_states - 1} exactly from exp(-beta E(d, xi)).
    ``xi_log_weights(d)`` may supply those log-weights directly; by default
    they come from ``joint_energy``.
    """
    beta = _check_beta(beta)
    if not 0 <= init_xi < n_spin_states:
        raise InvalidParameterException("init_xi", init_xi, f"must lie in 0..{n_spin_states - 1}")

    def default_log_weights(d: np.ndarray) -> np.ndarray:
        return np.array([-beta * joint_energy(d, xi) for xi in range(n_spin_states)])

    log_weights_fn = xi_log_weights or default_log_weights

    rng = make_rng(cfg.seed)
    d = np.array(init_d, dtype=float, ndmin=1)
    xi = int(init_xi)
    walk = _RandomWalk(cfg, d.shape[0], proposal_factor)
    e = _check_energy(0, joint_energy(d, xi), d, xi)

    stats = BatchMeans(cfg.n_kept)
    accepted = 0
    for t in range(cfg.n_steps):
        proposal = walk.step(rng, d)
        e_new = _check_energy(t + 1, joint_energy(proposal, xi), proposal, xi)
        if _accept(rng, beta, e_new - e):
            d, e = proposal, e_new
            accepted += 1

        log_w = np.asarray(log_weights_fn(d), dtype=float)
        if log_w.shape != (n_spin_states,):
            raise DimensionMismatchException("xi_log_weights", (n_spin_states,), log_w.shape)
        invalid = np.isnan(log_w) | (log_w == np.inf)
        if np.any(invalid) or not np.any(np.isfinite(log_w)):
            bad = int(np.flatnonzero(invalid if np.any(invalid) else ~np.isfinite(log_w))[0])
            raise NonFiniteEnergyException(t + 1, float(log_w[bad]), d.copy(), bad)
        xi = heat_bath(rng, log_w)
        e = _check_energy(t + 1, joint_energy(d, xi), d, xi)

        if t >= cfg.burn_in and (t - cfg.burn_in) % cfg.thin == 0:
            stats.push(observable(d, xi))

    value, se = stats.result()
    rate = accepted / cfg.n_steps
    logger.info(
        "metropolis_with_spin_finished",
        n_steps=cfg.n_steps,
        n_kept=cfg.n_kept,
        acceptance_rate=round(rate, 4),
        seed=cfg.seed,
    )
    return Estimate(value, se, stats.n_batches, rate, cfg.n_kept)


def merge_estimates(estimates: Sequence[Estimate]) -> Estimate:
    """
    Inverse-variance weighted combination of independent chains.

    Chains with zero standard error dominate; if every chain has zero error
    the values are averaged. When no chain has a finite error (too few
    samples for two batches) the values are averaged as well and the
    standard error stays inf.
    """
    if not estimates:
        raise InvalidParameterException("estimates", estimates, "need at least one estimate")
    values = np.array([np.asarray(e.value, dtype=float) for e in estimates])
    errors = np.array([np.asarray(e.std_error, dtype=float) for e in estimates])
    n_samples = sum(e.n_samples for e in estimates)
    rate = float(np.average([e.acceptance_rate for e in estimates],
                            weights=[max(e.n_samples, 1) for e in estimates]))
    batches = sum(e.n_effective_batches for e in estimates)

    exact = errors == 0.0
    with np.errstate(divide="ignore"):
        weights = np.where(exact.any(axis=0), exact.astype(float), 1.0 / errors**2)
    unweighted = np.sum(weights, axis=0) == 0.0
    weights = np.where(unweighted, 1.0, weights)
    total = np.sum(weights, axis=0)
    value = np.sum(weights * values, axis=0) / total
    se = np.where(exact.any(axis=0), 0.0, np.where(unweighted, np.inf, 1.0 / np.sqrt(total)))

    if value.ndim == 0:
        return Estimate(float(value), float(se), batches, rate, n_samples)
    return Estimate(value, se, batches, rate, n_samples)
