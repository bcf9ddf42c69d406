import numpy as np
import pytest

from app.diagnostics.concentration import concentration_sup
from app.diagnostics.occupation import cycle_length, occupation_stats, split_phases
from app.diagnostics.record import record_from_iterates
from app.model.data import draw_instance, synthesize_dataset
from app.model.models import NoiseSpec
from app.optim.models import InitSpec, StepSchedule
from app.optim.trainer import run

W_STAR = np.array([1.0])


def scripted(signs):
    return record_from_iterates(np.array(signs, dtype=np.float64).reshape(-1, 1), W_STAR)


# one wrong step, then four right ones, twice; the final phase runs into T
CYCLING = [-1, 1, 1, 1, 1, -1, 1, 1, 1, 1, -1, 1, 1, 1, 1]


def test_split_phases():
    phases = split_phases(np.array([True, True, False, True]))
    assert [(p.correct, p.start, p.length) for p in phases] == [(True, 1, 2), (False, 3, 1), (True, 4, 1)]
    assert split_phases(np.array([], dtype=bool)) == []


@pytest.mark.parametrize(("rho", "expected"), [(0.25, 2), (0.125, 6), (0.5, None), (0.0, None)])
def test_cycle_length(rho, expected):
    assert cycle_length(rho) == expected


def test_always_correct():
    stats = occupation_stats(scripted([1] * 6), rho_emp=0.1)
    coordinate = stats.coordinates[0]
    assert len(coordinate.phases) == 1
    assert coordinate.incorrect_fraction == 0.0
    assert coordinate.first_crossing is None


def test_alternating_signs():
    stats = occupation_stats(scripted([-1, 1] * 5), rho_emp=0.1)
    assert stats.incorrect_fraction == 0.5


def test_cycle_structure():
    stats = occupation_stats(scripted(CYCLING), rho_emp=0.25)
    coordinate = stats.coordinates[0]
    assert coordinate.burn_in == 1
    assert coordinate.incorrect_after_burn_in == {1: 2}
    assert coordinate.correct_after_burn_in == {4: 2}
    assert stats.one_step_reset_holds()
    assert stats.cycle_bound_holds(slack=1)


def test_cycle_bound_violation():
    # floor((1 - 2 rho) / rho) - 1 = 5 > 4
    assert not occupation_stats(scripted(CYCLING), rho_emp=0.125).cycle_bound_holds(slack=1)


def test_long_incorrect_phase_breaks_reset():
    stats = occupation_stats(scripted([-1, 1, 1, -1, -1, 1, 1]), rho_emp=0.1)
    assert stats.max_incorrect_after_burn_in == 2
    assert not stats.one_step_reset_holds()


def test_decaying_schedule_delays_burn_in():
    record = record_from_iterates(np.array(CYCLING, dtype=np.float64).reshape(-1, 1), W_STAR)
    decaying = record.model_copy(update={"schedule": StepSchedule(kind="power_decay", p=0.5)})
    coordinate = occupation_stats(decaying, rho_emp=0.25).coordinates[0]
    assert coordinate.burn_in == 5
    assert coordinate.incorrect_after_burn_in == {1: 2}


def test_noiseless_run_resets_in_one_step():
    spec = draw_instance(3, 4, seed=2)
    data = synthesize_dataset(spec, 65536, NoiseSpec(), seed=2)
    diagnostics = concentration_sup(spec, data)
    assert diagnostics.rho_emp < 0.2

    record = run(spec, data, StepSchedule(), InitSpec(), T=1000)
    stats = occupation_stats(record, diagnostics.rho_emp)
    assert stats.one_step_reset_holds()
    assert stats.cycle_bound_holds(slack=1)
    assert diagnostics.with_occupation(stats).occupation is stats
