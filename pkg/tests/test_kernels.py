import numpy as np
import pytest
from scipy import stats

from gpfso.core import ParticleSystem, RngStream
from gpfso.errors import CovarianceNotPSD
from gpfso.kernels import (
    GpfsoKernel,
    JitterKernel,
    KernelState,
    KernelTag,
    KsKernel,
    make_kernel,
    propose,
    propose_gpfso_all,
    propose_jitter,
    propose_jitter_all,
    propose_ks,
    propose_ks_all,
    refresh_ks_state,
)
from gpfso.schedule import Schedule
from gpfso.types import GpfsoConfig, KernelConfig, KernelKind, MixVariant

M = 200_000


def gpfso_state(dim=1, **kwargs):
    cfg = GpfsoConfig(**kwargs)
    return KernelState(cfg, dim), Schedule(cfg.schedule)


class TestGpfsoKernel:
    def test_gaussian_moments(self):
        state, sched = gpfso_state(dim=2, c_sigma=1.0, alpha=0.5)
        # t - 1 = 4 is not a breakpoint; h_4^2 c_sigma = 0.25.
        prop = propose_gpfso_all(state, np.zeros((M, 2)), 5, sched, RngStream(1))
        assert prop.tag == KernelTag.GAUSSIAN
        mean = prop.particles.mean(axis=0)
        assert np.all(np.abs(mean) < 4 * np.sqrt(0.25 / M))
        var = prop.particles.var(axis=0)
        assert np.all(np.abs(var - 0.25) < 4 * 0.25 * np.sqrt(2.0 / M))
        cov = np.cov(prop.particles.T)[0, 1]
        assert abs(cov) < 4 * 0.25 / np.sqrt(M)

    def test_sigma_diag(self):
        state, sched = gpfso_state(dim=2, sigma_diag=[1.0, 4.0])
        prop = propose_gpfso_all(state, np.zeros((M, 2)), 5, sched, RngStream(2))
        var = prop.particles.var(axis=0)
        np.testing.assert_allclose(var, [0.25, 1.0], rtol=4 * np.sqrt(2.0 / M))

    @pytest.mark.parametrize("nu", [1.5, 2.0, 50.0])
    def test_student_tail_frequency(self, nu):
        state, sched = gpfso_state(dim=1, nu=nu, alpha=0.5)
        # t - 1 = 5 is the first breakpoint; h_5 = 5^-0.5.
        prop = propose_gpfso_all(state, np.zeros((M, 1)), 6, sched, RngStream(3))
        assert prop.tag == KernelTag.STUDENT
        eps = prop.particles[:, 0] / 5**-0.5
        q = stats.t.ppf(0.975, nu)
        p = 2 * stats.t.sf(q, nu)
        freq = np.mean(np.abs(eps) > q)
        assert abs(freq - p) < 4 * np.sqrt(p * (1 - p) / M)

    def test_mixture_zero_weight_matches_plain(self):
        plain, sched = gpfso_state(dim=3, nu=5.0)
        mixed, _ = gpfso_state(
            dim=3, nu=5.0, kernel=KernelConfig(kind=KernelKind.GPFSO_MIX, mix_weight=0.0)
        )
        origins = np.ones((100, 3))
        for t in (5, 6, 8, 11):
            a = propose_gpfso_all(plain, origins, t, sched, RngStream(9))
            b = propose_gpfso_all(mixed, origins, t, sched, RngStream(9))
            np.testing.assert_array_equal(a.particles, b.particles)

    def test_dirac_mixture_keeps_origin(self):
        state, sched = gpfso_state(
            dim=2,
            kernel=KernelConfig(kind=KernelKind.GPFSO_MIX, mix_weight=0.5, mix_variant=MixVariant.DIRAC),
        )
        prop = propose_gpfso_all(state, np.zeros((M, 2)), 6, sched, RngStream(4))
        assert prop.tag == KernelTag.MIXTURE
        frac = np.mean(np.all(prop.particles == 0.0, axis=1))
        assert abs(frac - 0.5) < 4 * np.sqrt(0.25 / M)

    def test_mixture_only_at_breakpoints(self):
        state, sched = gpfso_state(
            kernel=KernelConfig(kind=KernelKind.GPFSO_MIX, mix_weight=0.5, mix_variant=MixVariant.DIRAC)
        )
        prop = propose_gpfso_all(state, np.zeros((1000, 1)), 5, sched, RngStream(4))
        assert prop.tag == KernelTag.GAUSSIAN
        assert np.all(prop.particles != 0.0)

    def test_student_mixture_requires_smaller_nu(self):
        with pytest.raises(ValueError):
            GpfsoConfig(
                nu=2.0,
                kernel=KernelConfig(kind=KernelKind.GPFSO_MIX, mix_variant=MixVariant.STUDENT, mix_nu=3.0),
            )

    def test_zero_learning_rate_is_dirac(self):
        state, sched = gpfso_state()
        prop = propose_gpfso_all(state, np.full((4, 1), 2.0), 1, sched, RngStream(0))
        assert prop.tag == KernelTag.DIRAC
        np.testing.assert_array_equal(prop.particles, 2.0)

    def test_single_origin_form(self):
        state, sched = gpfso_state(dim=2)
        a = propose(np.array([1.0, 2.0]), 5, sched, RngStream(5), state)
        b = propose_gpfso_all(state, np.array([[1.0, 2.0]]), 5, sched, RngStream(5)).particles[0]
        np.testing.assert_array_equal(a, b)

    def test_deterministic(self):
        state, sched = gpfso_state(dim=2)
        a = propose_gpfso_all(state, np.zeros((10, 2)), 6, sched, RngStream(11)).particles
        b = propose_gpfso_all(state, np.zeros((10, 2)), 6, sched, RngStream(11)).particles
        np.testing.assert_array_equal(a, b)


class TestKsKernel:
    def ks_state(self, iota=0.68, dim=1):
        cfg = GpfsoConfig(kernel=KernelConfig(kind=KernelKind.KS_PFSO, iota=iota))
        return KernelState(cfg, dim)

    def test_direct_evaluation(self):
        state = self.ks_state()
        state.theta_k = np.zeros(1)
        state.v_k = np.eye(1)
        draws = propose_ks_all(state, np.ones((M, 1)), RngStream(6)).particles[:, 0]
        mean, var = np.sqrt(1 - 0.68**2), 0.68**2
        assert mean == pytest.approx(0.7332, abs=1e-4)
        assert abs(draws.mean() - mean) < 4 * np.sqrt(var / M)
        assert abs(draws.var() - var) < 4 * var * np.sqrt(2.0 / M)

    def test_fixed_point(self):
        state = self.ks_state(dim=2)
        state.theta_k = np.array([1.0, -1.0])
        state.v_k = np.zeros((2, 2))
        draw = propose_ks(np.array([1.0, -1.0]), state, RngStream(0))
        np.testing.assert_allclose(draw, [1.0, -1.0], atol=1e-4)

    def test_preserves_cloud_moments(self):
        rng = np.random.default_rng(0)
        cloud = rng.normal(loc=[1.0, -2.0], scale=[1.0, 0.5], size=(M, 2))
        ps = ParticleSystem.uniform(cloud)
        kernel = make_kernel(GpfsoConfig(kernel=KernelConfig(kind=KernelKind.KS_PFSO)), 2)
        assert isinstance(kernel, KsKernel)
        kernel.refresh(ps)
        moved = kernel.propose_all(cloud, 2, RngStream(8))
        assert moved.tag == KernelTag.SHRINKAGE
        np.testing.assert_allclose(moved.particles.mean(axis=0), ps.mean(), atol=0.02)
        np.testing.assert_allclose(np.cov(moved.particles.T), ps.covariance(), atol=0.02)

    def test_refresh(self):
        state = self.ks_state()
        refresh_ks_state(state, ParticleSystem.uniform(np.array([[0.0], [2.0]])))
        assert state.theta_k[0] == pytest.approx(1.0)
        assert state.v_k[0, 0] == pytest.approx(1.0)
        refresh_ks_state(state, ParticleSystem(np.array([[3.0], [5.0]]), np.array([0.0, -np.inf])))
        assert state.theta_k[0] == pytest.approx(3.0)
        assert state.v_k[0, 0] == pytest.approx(0.0)

    def test_non_finite_covariance(self):
        state = self.ks_state()
        state.v_k = np.array([[np.nan]])
        with pytest.raises(CovarianceNotPSD):
            propose_ks_all(state, np.zeros((2, 1)), RngStream(0))


class TestJitterKernel:
    def test_single_particle_always_moves(self):
        moved = propose_jitter_all(np.zeros((1000, 2)), 1, RngStream(0)).particles
        assert np.all(np.any(moved != 0.0, axis=1))

    def test_move_frequency(self):
        n = 10**4
        moved = propose_jitter_all(np.zeros((M, 1)), n, RngStream(1)).particles[:, 0]
        freq = np.mean(moved != 0.0)
        assert abs(freq - 0.01) < 4 * np.sqrt(0.01 * 0.99 / M)
        jumps = moved[moved != 0.0]
        assert abs(jumps.var() - 1.0) < 4 * np.sqrt(2.0 / jumps.size)

    def test_single_origin_form(self):
        out = propose_jitter(np.array([0.5]), 1, RngStream(2))
        assert out.shape == (1,)
        assert out[0] != 0.5

    def test_factory(self):
        kernel = make_kernel(GpfsoConfig(kernel=KernelConfig(kind=KernelKind.JITTER)), 1)
        assert isinstance(kernel, JitterKernel)
        assert kernel.propose_all(np.zeros((5, 1)), 3, RngStream(0)).tag == KernelTag.JITTER
        assert isinstance(make_kernel(GpfsoConfig(), 1), GpfsoKernel)
