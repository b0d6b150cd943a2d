import numpy as np
import pytest

from gpfso import AdagradState, adagrad_run
from gpfso.core import RngStream
from gpfso.errors import NonFiniteGradient
from gpfso.models import GaussianMeanModel, simulate_gaussian


class TestAdagradState:
    def test_zero_gradient_leaves_iterate(self):
        state = AdagradState(np.array([1.0, -2.0]))
        state.update(np.zeros(2))
        np.testing.assert_array_equal(state.theta, [1.0, -2.0])
        assert state.t == 1

    def test_accumulator(self):
        state = AdagradState(np.zeros(2), step_size=0.5)
        g1, g2 = np.array([1.0, -2.0]), np.array([3.0, 0.5])
        state.update(g1)
        state.update(g2)
        np.testing.assert_allclose(state.accumulator, g1**2 + g2**2)

    def test_first_step_size(self):
        state = AdagradState(np.zeros(1), step_size=0.1, epsilon=1e-8)
        state.update(np.array([4.0]))
        assert state.theta[0] == pytest.approx(0.1 * 4.0 / np.sqrt(16.0 + 1e-8))

    def test_average_of_iterates(self):
        state = AdagradState(np.zeros(1))
        seen = []
        for g in (1.0, -0.5, 2.0):
            state.update(np.array([g]))
            seen.append(state.theta[0])
        assert state.bar[0] == pytest.approx(np.mean(seen))

    def test_non_finite_gradient(self):
        state = AdagradState(np.zeros(1))
        state.update(np.array([1.0]))
        with pytest.raises(NonFiniteGradient) as info:
            state.update(np.array([np.nan]))
        assert info.value.t == 2

    def test_rejects_bad_constants(self):
        with pytest.raises(ValueError):
            AdagradState(np.zeros(1), step_size=0.0)
        with pytest.raises(ValueError):
            AdagradState(np.zeros(1), epsilon=-1.0)


class TestAdagradRun:
    def test_quadratic_converges_monotonically(self):
        # Deterministic gradient of -(theta - 3)^2 / 2.
        trace = adagrad_run(lambda th, y: 3.0 - th, np.zeros(1), range(200), target=np.array([3.0]))
        err = trace.column("err_tilde_l2")
        assert np.all(np.diff(err) <= 1e-12)
        assert err[-1] < err[0]

    def test_gaussian_mean(self):
        model = GaussianMeanModel(true_param=1.0)
        data = simulate_gaussian(5000, RngStream(2), theta_star=1.0)
        trace = adagrad_run(model.grad_log_density, np.zeros(1), data, target=model.true_param)
        assert trace.final.err_bar_l2 < 0.2
        assert trace.final.ess is None

    def test_empty_stream(self):
        with pytest.raises(ValueError):
            adagrad_run(lambda th, y: th, np.zeros(1), [])
