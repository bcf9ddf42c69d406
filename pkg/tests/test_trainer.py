import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.diagnostics.record import TrajectoryRecorder
from app.exceptions import InvalidArgumentError
from app.model.data import draw_instance, synthesize_dataset
from app.model.models import NoiseSpec
from app.model.network import quantize
from app.optim.gradient import ste_gradient
from app.optim.interfaces import RecordBuilder, Recorder
from app.optim.models import InitSpec, StepSchedule, TrainState
from app.optim.trainer import initial_state, run, step, step_projected, step_single


def noisy_case(seed: int, m: int = 6, n: int = 5, N: int = 12, sigma: float = 0.5):
    spec = draw_instance(m, n, seed)
    return spec, synthesize_dataset(spec, N, NoiseSpec(kind="gaussian", sigma=sigma), seed)


class TestSchedule:
    def test_constant(self):
        schedule = StepSchedule(eta0=0.3)
        assert schedule.eta(1) == schedule.eta(50) == 0.3
        assert schedule.ratio(7) == 1.0
        assert schedule.stabilization_index() == 1

    def test_power_decay(self):
        schedule = StepSchedule(kind="power_decay", eta0=2.0, p=0.5)
        assert schedule.eta(4) == pytest.approx(1.0)
        assert schedule.ratio(3) == pytest.approx(math.sqrt(0.75))
        assert schedule.stabilization_index(0.9) == 5

    def test_index_starts_at_one(self):
        with pytest.raises(ValueError):
            StepSchedule().eta(0)

    @pytest.mark.parametrize("kwargs", [{"eta0": 0.0}, {"p": 0.0}, {"p": 1.5}, {"kind": "cosine"}])
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            StepSchedule(**kwargs)


class TestStep:
    def test_state_invariant(self):
        with pytest.raises(ValidationError):
            TrainState(x=np.array([1.0, -1.0]), w=np.array([1.0, 1.0]) / math.sqrt(2))

    def test_first_step_from_zero(self, noisy_data):
        schedule = StepSchedule(eta0=0.7)
        state = step(TrainState.initial(np.zeros(noisy_data.spec.n), schedule), noisy_data)
        expected = -0.7 * ste_gradient(quantize(np.zeros(noisy_data.spec.n)), noisy_data)
        np.testing.assert_array_equal(state.x, expected)
        assert state.t == 1

    def test_fixed_point_noiseless(self, small_spec, small_data):
        x = 0.3 * small_spec.w_star
        state = TrainState.initial(x, StepSchedule(eta0=5.0))
        after = step(state, small_data)
        np.testing.assert_array_equal(after.x, state.x)
        np.testing.assert_array_equal(after.w, small_spec.w_star)
        np.testing.assert_array_equal(step_single(x, 0, StepSchedule(eta0=5.0), small_data), x)

    @pytest.mark.parametrize("seed", range(20))
    def test_two_step_equals_single_step(self, seed):
        spec, data = noisy_case(seed)
        kind = "constant" if seed % 2 == 0 else "power_decay"
        schedule = StepSchedule(kind=kind, eta0=1.0, p=0.5)
        state = TrainState.initial(np.zeros(spec.n), schedule)
        x = np.zeros(spec.n)
        for t in range(100):
            state = step(state, data)
            x = step_single(x, t, schedule, data)
            np.testing.assert_array_equal(state.x, x)
            np.testing.assert_array_equal(state.w, quantize(x))


class TestRun:
    def test_step_size_homogeneity(self):
        spec, data = noisy_case(3, m=8, n=6, N=30, sigma=1.0)
        bits = []
        for eta0 in (0.1, 1.0, 10.0):
            record = run(spec, data, StepSchedule(eta0=eta0), InitSpec(), T=60)
            bits.append(record.sign_bits)
        np.testing.assert_array_equal(bits[0], bits[1])
        np.testing.assert_array_equal(bits[1], bits[2])

    def test_single_iteration(self, noisy_data):
        schedule = StepSchedule()
        record = run(noisy_data.spec, noisy_data, schedule, InitSpec(), T=1)
        expected = step(TrainState.initial(np.zeros(noisy_data.spec.n), schedule), noisy_data)
        assert record.T == 1
        np.testing.assert_array_equal(record.iterate(1), expected.w)
        np.testing.assert_array_equal(record.final_x, expected.x)

    def test_noiseless_optimum_is_absorbing(self):
        spec = draw_instance(16, 3, seed=5)
        data = synthesize_dataset(spec, 400, NoiseSpec(), seed=5)
        record = run(spec, data, StepSchedule(), InitSpec(), T=150)
        assert record.visits.size > 0
        assert np.all(record.hamming[record.visits[0] - 1:] == 0)
        assert record.escapes.size == 0 or record.escapes.max() < record.visits[0]

    def test_bounded_uniform_init_is_seeded(self, noisy_data):
        init = InitSpec(kind="bounded_uniform", c0=2.0)
        a = initial_state(noisy_data.spec, StepSchedule(), init, seed=4)
        b = initial_state(noisy_data.spec, StepSchedule(), init, seed=4)
        np.testing.assert_array_equal(a.x, b.x)
        assert np.all(np.abs(a.x) <= 2.0 / math.sqrt(noisy_data.spec.n))

    def test_rejects_zero_horizon(self, noisy_data):
        with pytest.raises(InvalidArgumentError):
            run(noisy_data.spec, noisy_data, StepSchedule(), InitSpec(), T=0)

    def test_rejects_foreign_dataset(self, noisy_data):
        other = draw_instance(2, noisy_data.spec.n + 1, seed=0)
        with pytest.raises(InvalidArgumentError):
            run(other, noisy_data, StepSchedule(), InitSpec(), T=3)

    def test_custom_recorder(self, noisy_data):
        class Counter:
            def __init__(self):
                self.calls = 0

            def start(self, x, w):
                pass

            def record(self, t, x, w):
                self.calls += 1

        counter = Counter()
        assert isinstance(counter, Recorder)
        assert run(noisy_data.spec, noisy_data, StepSchedule(), InitSpec(), T=7, recorder=counter) is None
        assert counter.calls == 7
        assert isinstance(TrajectoryRecorder(noisy_data.spec), RecordBuilder)

    def test_record_builder_result_is_returned(self, noisy_data):
        class Tally:
            def __init__(self):
                self.steps = []

            def start(self, x, w):
                pass

            def record(self, t, x, w):
                self.steps.append(t)

            def to_record(self):
                return list(self.steps)

        tally = Tally()
        assert isinstance(tally, RecordBuilder)
        assert run(noisy_data.spec, noisy_data, StepSchedule(), InitSpec(), T=4, recorder=tally) == [1, 2, 3, 4]


class TestProjectedBaseline:
    def test_small_step_is_stationary(self, noisy_data):
        w = -noisy_data.spec.w_star
        g = ste_gradient(w, noisy_data)
        eta = 0.5 / (math.sqrt(noisy_data.spec.n) * float(np.abs(g).max()))
        np.testing.assert_array_equal(step_projected(w, 0, StepSchedule(eta0=eta), noisy_data), w)

    def test_run_stalls_where_ste_moves(self, noisy_data):
        n = noisy_data.spec.n
        w0 = quantize(np.zeros(n))
        g = ste_gradient(w0, noisy_data)
        schedule = StepSchedule(eta0=0.5 / (math.sqrt(n) * float(np.abs(g).max())))

        stalled = run(noisy_data.spec, noisy_data, schedule, InitSpec(), T=50, method="projected")
        assert np.all(stalled.hamming == stalled.hamming[0])
        assert stalled.method == "projected"

        # from x0 = 0 the latent crosses zero on the first step wherever g_j > 0
        moving = run(noisy_data.spec, noisy_data, schedule, InitSpec(), T=50)
        np.testing.assert_array_equal(moving.iterate(1) > 0, g <= 0)
        if np.any(g > 0):
            assert not np.array_equal(moving.positive_mask(), stalled.positive_mask())

    def test_unknown_method(self, noisy_data):
        with pytest.raises(InvalidArgumentError):
            run(noisy_data.spec, noisy_data, StepSchedule(), InitSpec(), T=2, method="adam")
