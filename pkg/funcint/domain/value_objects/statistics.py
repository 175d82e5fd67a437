# ================================================================================================
# 💎 STATISTICS VALUE OBJECTS - Ensambles, momentos y estimadores
# ================================================================================================
# Immutable inputs and outputs of the analytic (Gaussian) and sampled (MCMC)
# routes to the ensemble averages.

from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from ..entities.quadratic_form import QuadraticForm
from ..exceptions.funcint_exceptions import (
    DimensionMismatchException,
    EmptyChainException,
    InvalidParameterException,
)

ArrayOrFloat = Union[float, np.ndarray]


@dataclass(frozen=True)
class EnsembleSpec:
    """
    Boltzmann ensemble exp(-beta E(d)) / Z for a quadratic energy.

    ``beta`` is the inverse temperature 1/(k_B T) in inverse energy units.
    """
    beta: float
    form: QuadraticForm

    def __post_init__(self):
        beta = float(self.beta)
        if not (np.isfinite(beta) and beta > 0.0):
            raise InvalidParameterException("beta", self.beta, "must be positive and finite")
        object.__setattr__(self, "beta", beta)


@dataclass(frozen=True)
class GaussianStats:
    """
    📊 VALUE OBJECT - Momentos exactos de la densidad gaussiana.

    Only the Cholesky factor of K is stored; the dense covariance
    C = K^-1 / beta is built on first access.
    """
    mean: np.ndarray
    log_Z: float
    min_energy: float
    mean_energy: float
    beta: float
    chol: np.ndarray = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.mean.shape[0]

    @cached_property
    def covariance(self) -> np.ndarray:
        if self.n == 0:
            return np.zeros((0, 0))
        C = cho_solve((self.chol, True), np.eye(self.n)) / self.beta
        return 0.5 * (C + C.T)

    def whiten(self, a: np.ndarray) -> np.ndarray:
        """L^-1 a, so that a^T C b = whiten(a) . whiten(b) / beta."""
        return solve_triangular(self.chol, a, lower=True)

    def covariance_between(self, a: np.ndarray, b: np.ndarray) -> float:
        """a^T C b without forming C."""
        if self.n == 0:
            return 0.0
        return float(self.whiten(a) @ self.whiten(b)) / self.beta

    def variances(self) -> np.ndarray:
        if self.n == 0:
            return np.zeros(0)
        W = solve_triangular(self.chol, np.eye(self.n), lower=True)
        return np.sum(W * W, axis=0) / self.beta

    def sampling_factor(self) -> np.ndarray:
        """Matrix S with S S^T = C; mean + S z is a draw from the ensemble."""
        if self.n == 0:
            return np.zeros((0, 0))
        return solve_triangular(self.chol, np.eye(self.n), lower=True, trans="T") / np.sqrt(self.beta)


# ================================================================================================
# 🎲 MCMC
# ================================================================================================

@dataclass(frozen=True)
class ChainConfig:
    """
    Random-walk Metropolis settings.

    ``proposal_scale`` is either one step width for every coordinate or a
    per-coordinate vector. As a rule of thumb pick it so that 20-50% of
    proposals are accepted. Samples are kept at steps
    ``burn_in, burn_in + thin, ...`` below ``n_steps``.
    """
    n_steps: int
    burn_in: int = 0
    proposal_scale: ArrayOrFloat = 0.1
    seed: int = 0
    thin: int = 1

    def __post_init__(self):
        if self.n_steps < 0:
            raise InvalidParameterException("n_steps", self.n_steps, "must be non-negative")
        if self.burn_in < 0:
            raise InvalidParameterException("burn_in", self.burn_in, "must be non-negative")
        if self.thin < 1:
            raise InvalidParameterException("thin", self.thin, "must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise InvalidParameterException("seed", self.seed, "must be an unsigned 64-bit integer")
        scale = np.asarray(self.proposal_scale, dtype=float)
        if scale.ndim > 1 or not np.all(np.isfinite(scale)) or not np.all(scale > 0.0):
            raise InvalidParameterException("proposal_scale", self.proposal_scale, "must be positive")
        if self.n_steps <= self.burn_in:
            raise EmptyChainException(self.n_steps, self.burn_in)

    @property
    def n_kept(self) -> int:
        return -(-(self.n_steps - self.burn_in) // self.thin)

    def scale_vector(self, n: int) -> np.ndarray:
        scale = np.asarray(self.proposal_scale, dtype=float)
        if scale.ndim == 0:
            return np.full(n, float(scale))
        if scale.shape != (n,):
            raise DimensionMismatchException("proposal_scale", (n,), scale.shape)
        return scale


@dataclass(frozen=True)
class Estimate:
    """Sample mean of an observable with its batch-means standard error."""
    value: ArrayOrFloat
    std_error: ArrayOrFloat
    n_effective_batches: int
    acceptance_rate: float
    n_samples: int = 0

    def __post_init__(self):
        if not 0.0 <= self.acceptance_rate <= 1.0:
            raise InvalidParameterException("acceptance_rate", self.acceptance_rate, "must lie in [0, 1]")
        if np.any(np.asarray(self.std_error) < 0.0):
            raise InvalidParameterException("std_error", self.std_error, "must be non-negative")

    def z_score(self, expected: ArrayOrFloat) -> ArrayOrFloat:
        """|value - expected| in units of std_error (0 where both coincide exactly)."""
        diff = np.abs(np.asarray(self.value, dtype=float) - np.asarray(expected, dtype=float))
        se = np.asarray(self.std_error, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.where(diff == 0.0, 0.0, diff / se)
        return float(z) if z.ndim == 0 else z
