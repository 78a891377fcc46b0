import math

import numpy as np
import pytest
from scipy import stats

from extgini.errors import DomainError, InsufficientSampleError
from extgini.estimator import extended_gini_estimate
from extgini.simulation import (
    DEFAULT_SEED,
    STUDY_PARAMS,
    STUDY_SPEC,
    STUDY_TRUE_VALUE,
    SimulationConfig,
    gamma_sample,
    replicate_estimates,
    replicate_rng,
    reproduce_study,
    run_simulation,
    standard_gamma,
)
from extgini.theory import GammaParams, IndexSpec


def test_exponential_draws_pass_ks():
    x = standard_gamma(1.0, 100_000, replicate_rng(7, 0))
    assert stats.kstest(x, "expon").statistic < 0.01


@pytest.mark.parametrize("shape", [0.3, 0.9, 2.0, 7.5])
def test_gamma_draws_pass_ks(shape):
    x = standard_gamma(shape, 50_000, replicate_rng(11, 3))
    assert stats.kstest(x, stats.gamma(shape).cdf).statistic < 0.01


def test_gamma_mean():
    x = standard_gamma(2.0, 1_000_000, replicate_rng(DEFAULT_SEED, 0))
    assert x.mean() == pytest.approx(2.0, abs=0.01)


def test_rate_scales_draws():
    a = gamma_sample(GammaParams(2.0, 1.0), 50, replicate_rng(1, 1)).values
    b = gamma_sample(GammaParams(2.0, 4.0), 50, replicate_rng(1, 1)).values
    assert np.allclose(a / 4.0, b, rtol=1e-15)


def test_replicate_streams_are_deterministic_and_distinct():
    a = replicate_rng(5, 2).random(4)
    assert np.array_equal(a, replicate_rng(5, 2).random(4))
    assert not np.array_equal(a, replicate_rng(5, 3).random(4))
    assert not np.array_equal(a, replicate_rng(6, 2).random(4))


def _config(n=10, reps=200, **kw):
    return SimulationConfig(STUDY_PARAMS, n, reps, STUDY_SPEC, true_value=STUDY_TRUE_VALUE, **kw)


def test_same_seed_same_report():
    assert run_simulation(_config()) == run_simulation(_config())


def test_threaded_workers_match_serial():
    cfg = _config(reps=64)
    assert np.array_equal(replicate_estimates(cfg, 1), replicate_estimates(cfg, 4))
    assert run_simulation(cfg, workers=4) == run_simulation(cfg, workers=1)


def test_replicate_can_be_regenerated_alone():
    cfg = _config(reps=20)
    est = replicate_estimates(cfg)
    sample = gamma_sample(cfg.params, cfg.n, replicate_rng(cfg.seed, 13))
    assert est[13] == extended_gini_estimate(sample, cfg.spec).value


def test_equal_ranks_give_zero_error():
    cfg = SimulationConfig(STUDY_PARAMS, 8, 50, IndexSpec(4, 2, 2))
    rep = run_simulation(cfg)
    assert rep.true_value == 0.0
    assert rep.bias == 0.0 and rep.mse == 0.0


def test_single_replicate():
    cfg = _config(reps=1)
    rep = run_simulation(cfg)
    est = replicate_estimates(cfg)[0]
    assert rep.bias == pytest.approx(est - STUDY_TRUE_VALUE, abs=1e-15)
    assert rep.mse == pytest.approx(rep.bias**2, rel=1e-14)
    assert math.isnan(rep.std_error)


def test_mse_dominates_squared_bias():
    rep = run_simulation(_config(n=6, reps=300, seed=3))
    assert rep.mse >= rep.bias**2 - 1e-15


def test_mean_estimate_consistent():
    cfg = _config(reps=100)
    rep = run_simulation(cfg)
    assert rep.mean_estimate == pytest.approx(replicate_estimates(cfg).mean(), abs=1e-14)


def test_default_true_value_is_computed():
    cfg = SimulationConfig(STUDY_PARAMS, 10, 5, STUDY_SPEC)
    assert run_simulation(cfg).true_value == pytest.approx(0.0965711805555, abs=1e-10)


def test_report_dict():
    d = run_simulation(_config(reps=10)).as_dict()
    assert d["spec"] == {"m": 4, "j": 2, "k": 3}
    assert set(d) >= {"bias", "mse", "mean_estimate", "true_value", "std_error", "reps", "seed", "n"}


def test_mse_decreases_with_n():
    rows = reproduce_study(ns=(5, 30))
    assert rows[1].mse < rows[0].mse


def test_n20_mean_within_three_standard_errors():
    rep = run_simulation(_config(n=20, reps=500))
    assert abs(rep.mean_estimate - STUDY_TRUE_VALUE) < 3 * rep.std_error


def test_config_validation():
    with pytest.raises(InsufficientSampleError):
        SimulationConfig(STUDY_PARAMS, 3, 10, IndexSpec(5, 1, 5))
    for bad in (0, -1, 2.5, True):
        with pytest.raises(DomainError):
            SimulationConfig(STUDY_PARAMS, 10, bad, STUDY_SPEC)
    for bad in (-1, 2**64, 1.5):
        with pytest.raises(DomainError):
            SimulationConfig(STUDY_PARAMS, 10, 10, STUDY_SPEC, seed=bad)
    with pytest.raises(DomainError):
        gamma_sample(STUDY_PARAMS, 0, replicate_rng(0, 0))
