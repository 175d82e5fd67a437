# ================================================================================================
# 🧪 SAMPLER TESTS
# ================================================================================================

import numpy as np
import pytest

from funcint.domain.entities.mesh import uniform_interval_mesh
from funcint.domain.exceptions import (
    EmptyChainException,
    InvalidParameterException,
    NonFiniteEnergyException,
)
from funcint.domain.services.gaussian import moments
from funcint.domain.services.models.string import StringParams, build_string
from funcint.domain.services.sampler import (
    BatchMeans,
    heat_bath,
    make_rng,
    merge_estimates,
    metropolis,
    metropolis_with_spin,
    spawn_seeds,
)
from funcint.domain.value_objects.statistics import ChainConfig, EnsembleSpec, Estimate

Z_BOUND = 3.0
# three multinomial frequencies checked at once
FREQUENCY_Z_BOUND = 4.0


def _one_dof_energy(d):
    # K = [4], b = [-0.5], c = 0: mean 1/8, variance 1/(4 beta)
    return 2.0 * d[0] ** 2 - 0.5 * d[0]


@pytest.mark.unit
class TestChainConfig:

    def test_burn_in_consuming_every_step_is_empty(self):
        with pytest.raises(EmptyChainException):
            ChainConfig(n_steps=100, burn_in=100)

    def test_kept_samples_with_thinning(self):
        assert ChainConfig(n_steps=105, burn_in=5, thin=3).n_kept == 34

    def test_non_positive_proposal_scale_is_rejected(self):
        with pytest.raises(InvalidParameterException):
            ChainConfig(n_steps=10, proposal_scale=0.0)


@pytest.mark.unit
class TestBatchMeans:

    def test_constant_stream_has_zero_error(self):
        bm = BatchMeans(100)
        for _ in range(100):
            bm.push(3.0)

        assert bm.result() == (3.0, 0.0)
        assert bm.n_batches == 10

    def test_single_sample_has_infinite_error(self):
        bm = BatchMeans(1)
        bm.push(1.5)

        value, se = bm.result()

        assert value == 1.5
        assert se == float("inf")

    def test_vector_observable(self):
        bm = BatchMeans(4)
        for x in ([1.0, 2.0], [3.0, 2.0], [1.0, 2.0], [3.0, 2.0]):
            bm.push(x)

        value, se = bm.result()

        np.testing.assert_allclose(value, [2.0, 2.0])
        np.testing.assert_allclose(se, [0.0, 0.0])


@pytest.mark.unit
class TestSeeds:

    def test_same_seed_same_stream(self):
        assert make_rng(42).random() == make_rng(42).random()

    def test_spawned_seeds_are_distinct_and_reproducible(self):
        seeds = spawn_seeds(7, 4)

        assert len(set(seeds)) == 4
        assert seeds == spawn_seeds(7, 4)
        assert all(0 <= s < 2**64 for s in seeds)


@pytest.mark.unit
class TestMetropolis:
    """🎲 Paseo aleatorio sobre una energía cuadrática de un DOF."""

    def test_chain_is_deterministic_per_seed(self):
        cfg = ChainConfig(n_steps=2000, burn_in=100, proposal_scale=0.5, seed=11)

        first = metropolis(_one_dof_energy, 2.0, [0.0], lambda d: d[0], cfg)
        second = metropolis(_one_dof_energy, 2.0, [0.0], lambda d: d[0], cfg)

        assert first == second

    @pytest.mark.slow
    def test_one_dof_second_moment(self):
        # Given: E = 1/2 * 4 d^2 at beta = 1, so <d^2> = 1/4
        cfg = ChainConfig(n_steps=40000, burn_in=2000, proposal_scale=0.9, seed=3)

        # When
        est = metropolis(lambda d: 2.0 * d[0] ** 2, 1.0, [0.0], lambda d: d[0] ** 2, cfg)

        # Then
        assert est.z_score(0.25) < Z_BOUND
        assert 0.2 < est.acceptance_rate < 0.9
        assert est.n_samples == 38000

    @pytest.mark.slow
    def test_two_well_occupation_follows_boltzmann_ratio(self):
        # Given: two identical steep wells at d = -1 and d = +1, the right one raised by dE
        beta, dE, kappa = 1.0, 0.5, 4.0

        def energy_fn(d):
            return 0.5 * kappa * (abs(d[0]) - 1.0) ** 2 + (dE if d[0] > 0 else 0.0)

        cfg = ChainConfig(n_steps=100000, burn_in=1000, proposal_scale=1.0, seed=17)

        # When
        est = metropolis(energy_fn, beta, [-1.0], lambda d: float(d[0] > 0), cfg)

        # Then: P(right) / P(left) = exp(-beta dE)
        ratio = np.exp(-beta * dE)
        assert est.z_score(ratio / (1.0 + ratio)) < Z_BOUND

    def test_non_finite_energy_is_reported(self):
        cfg = ChainConfig(n_steps=10, seed=1)

        with pytest.raises(NonFiniteEnergyException) as exc_info:
            metropolis(lambda d: float("nan"), 1.0, [0.0], lambda d: d[0], cfg)

        assert exc_info.value.step == 0

    def test_downhill_moves_are_always_accepted(self):
        # Given: an energy that decreases with every proposal
        calls = iter(range(0, -1000, -1))
        cfg = ChainConfig(n_steps=50, seed=5)

        est = metropolis(lambda d: float(next(calls)), 1.0, [0.0], lambda d: d[0], cfg)

        assert est.acceptance_rate == 1.0


@pytest.mark.unit
class TestHeatBath:

    def test_positive_infinite_weight_is_rejected(self):
        with pytest.raises(InvalidParameterException):
            heat_bath(make_rng(0), np.array([0.0, np.inf]))

    def test_single_allowed_state(self):
        rng = make_rng(0)
        log_w = np.array([-np.inf, 0.0, -np.inf])

        assert {heat_bath(rng, log_w) for _ in range(200)} == {1}

    def test_frequencies_follow_weights(self):
        rng = make_rng(9)
        p = np.array([0.1, 0.2, 0.7])
        n = 20000

        counts = np.bincount([heat_bath(rng, np.log(p) + 50.0) for _ in range(n)], minlength=3)

        assert np.all(np.abs(counts / n - p) < FREQUENCY_Z_BOUND * np.sqrt(p * (1 - p) / n))


@pytest.mark.unit
class TestMetropolisWithSpin:
    """Metropolis-within-Gibbs con un espín discreto."""

    def test_spin_marginal_of_decoupled_system(self):
        # Given: E(d, xi) = d^2/2 + xi, so P(xi) ~ exp(-beta xi) independently of d
        beta = 1.0
        cfg = ChainConfig(n_steps=20000, burn_in=500, proposal_scale=1.0, seed=21)

        est = metropolis_with_spin(
            joint_energy=lambda d, xi: 0.5 * d[0] ** 2 + xi,
            beta=beta,
            init_d=[0.0],
            init_xi=0,
            n_spin_states=3,
            observable=lambda d, xi: float(xi),
            cfg=cfg,
        )

        w = np.exp(-beta * np.arange(3))
        assert est.z_score(np.arange(3) @ w / w.sum()) < Z_BOUND

    def test_equal_spin_energies_give_uniform_spin(self):
        n_states = 7
        cfg = ChainConfig(n_steps=20000, burn_in=200, proposal_scale=1.0, seed=8)

        est = metropolis_with_spin(
            joint_energy=lambda d, xi: 0.5 * d[0] ** 2,
            beta=1.0,
            init_d=[0.0],
            init_xi=0,
            n_spin_states=n_states,
            observable=lambda d, xi: float(xi),
            cfg=cfg,
            xi_log_weights=lambda d: np.zeros(n_states),
        )

        assert est.z_score((n_states - 1) / 2.0) < Z_BOUND

    def test_frozen_spin_gives_exact_estimate(self):
        # Given: every state but xi = 2 is suppressed
        cfg = ChainConfig(n_steps=400, seed=2)

        est = metropolis_with_spin(
            joint_energy=lambda d, xi: 0.5 * d[0] ** 2 + (0.0 if xi == 2 else 1e3),
            beta=1.0,
            init_d=[0.0],
            init_xi=2,
            n_spin_states=3,
            observable=lambda d, xi: float(xi),
            cfg=cfg,
        )

        assert est.value == 2.0
        assert est.std_error == 0.0
        assert est.z_score(2.0) == 0.0

    def test_infinite_spin_weight_stops_the_chain(self):
        cfg = ChainConfig(n_steps=10, seed=4)

        with pytest.raises(NonFiniteEnergyException) as exc_info:
            metropolis_with_spin(
                joint_energy=lambda d, xi: 0.5 * d[0] ** 2,
                beta=1.0,
                init_d=[0.0],
                init_xi=0,
                n_spin_states=2,
                observable=lambda d, xi: float(xi),
                cfg=cfg,
                xi_log_weights=lambda d: np.array([0.0, np.inf]),
            )

        assert exc_info.value.spin == 1
        assert exc_info.value.step == 1

    def test_initial_spin_out_of_range(self):
        with pytest.raises(InvalidParameterException):
            metropolis_with_spin(
                lambda d, xi: 0.0, 1.0, [0.0], 3, 3, lambda d, xi: 0.0, ChainConfig(n_steps=10),
            )


@pytest.mark.unit
class TestMergeEstimates:

    def test_inverse_variance_weighting(self):
        merged = merge_estimates([Estimate(1.0, 1.0, 10, 0.5, 100), Estimate(3.0, 1.0, 10, 0.3, 100)])

        assert merged.value == pytest.approx(2.0)
        assert merged.std_error == pytest.approx(1.0 / np.sqrt(2.0))
        assert merged.acceptance_rate == pytest.approx(0.4)
        assert merged.n_samples == 200
        assert merged.n_effective_batches == 20

    def test_exact_chain_dominates(self):
        merged = merge_estimates([Estimate(1.0, 0.0, 10, 0.5, 100), Estimate(3.0, 1.0, 10, 0.5, 100)])

        assert merged.value == 1.0
        assert merged.std_error == 0.0

    def test_chains_without_finite_error_are_averaged(self):
        # Given: short chains, one batch each
        merged = merge_estimates([Estimate(1.0, np.inf, 1, 0.5, 3), Estimate(2.0, np.inf, 1, 0.5, 3)])

        assert merged.value == pytest.approx(1.5)
        assert merged.std_error == np.inf

    def test_vector_components_without_finite_error(self):
        merged = merge_estimates([
            Estimate(np.array([1.0, 1.0]), np.array([np.inf, 1.0]), 1, 0.5, 3),
            Estimate(np.array([3.0, 3.0]), np.array([np.inf, 1.0]), 1, 0.5, 3),
        ])

        np.testing.assert_allclose(merged.value, [2.0, 2.0])
        assert merged.std_error[0] == np.inf
        assert merged.std_error[1] == pytest.approx(1.0 / np.sqrt(2.0))

    def test_empty_list_is_rejected(self):
        with pytest.raises(InvalidParameterException):
            merge_estimates([])


@pytest.mark.unit
@pytest.mark.slow
class TestStringCrossCheck:
    """🔔 Cadenas contra los momentos exactos de la cuerda."""

    @pytest.mark.parametrize("n_open", [1, 9, 49])
    def test_mean_field_and_energy_match_exact_moments(self, n_open):
        # Given: loaded string with n_open interior nodes, beta = 1
        mesh = uniform_interval_mesh(1.0, n_open + 1)
        form = build_string(StringParams(f=1.0), mesh)
        stats = moments(EnsembleSpec(1.0, form))
        cfg = ChainConfig(
            n_steps=200000, burn_in=5000, proposal_scale=2.4 / np.sqrt(n_open), seed=1000 + n_open,
        )

        # When: observable (d, E(d)); proposals shaped by the exact covariance
        est = metropolis(
            form.energy,
            1.0,
            stats.mean,
            lambda d: np.append(d, form.energy(d)),
            cfg,
            proposal_factor=stats.sampling_factor(),
        )

        # Then
        expected = np.append(stats.mean, stats.mean_energy)
        assert np.all(est.z_score(expected) < Z_BOUND)

    def test_plain_random_walk_matches_exact_moments(self):
        # Given: nine interior nodes, per-coordinate steps and a cold start at d = 0
        mesh = uniform_interval_mesh(1.0, 10)
        form = build_string(StringParams(f=1.0), mesh)
        stats = moments(EnsembleSpec(1.0, form))
        cfg = ChainConfig(n_steps=400000, burn_in=20000, proposal_scale=0.15, seed=2029)

        # When
        est = metropolis(form.energy, 1.0, np.zeros(form.n), lambda d: np.append(d, form.energy(d)), cfg)

        # Then
        expected = np.append(stats.mean, stats.mean_energy)
        assert np.all(est.z_score(expected) < Z_BOUND)
        assert 0.15 < est.acceptance_rate < 0.7

    def test_fixed_seed_reproduces_estimates(self):
        form = build_string(StringParams(f=1.0), uniform_interval_mesh(1.0, 4))
        cfg = ChainConfig(n_steps=3000, proposal_scale=0.3, seed=99)

        first = metropolis(form.energy, 1.0, np.zeros(form.n), lambda d: d.copy(), cfg)
        second = metropolis(form.energy, 1.0, np.zeros(form.n), lambda d: d.copy(), cfg)

        assert np.array_equal(first.value, second.value)
        assert np.array_equal(first.std_error, second.std_error)
