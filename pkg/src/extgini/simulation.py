"""Seeded Monte Carlo study of the estimator's bias and MSE under gamma draws."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, InsufficientSampleError
from .estimator import Sample, extended_gini_estimate
from .quadrature import QuadratureConfig
from .theory import GammaParams, IndexSpec, index_gamma

DEFAULT_SEED = 20231015

# Reference Monte Carlo design. The true value 0.09657
# corresponds to (m, j, k) = (4, 2, 3); see README.
STUDY_SPEC = IndexSpec(4, 2, 3)
STUDY_PARAMS = GammaParams(2.0, 1.0)
STUDY_NS = (5, 10, 20, 30)
STUDY_REPS = 500
STUDY_TRUE_VALUE = 0.09657


def _check_seed(seed):
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed < 2**64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def replicate_rng(seed, index):
    """Independent generator for replicate ``index`` of a campaign seeded with ``seed``.

    Philox is keyed from a hash of ``(seed, index)``, so any replicate can be
    regenerated on its own, in any order, on any worker.
    """
    key = np.random.SeedSequence([_check_seed(seed), int(index)])
    return np.random.Generator(np.random.Philox(key))


def standard_gamma(shape, size, rng):
    """Unit-rate gamma variates by the Marsaglia-Tsang squeeze method.

    For ``shape < 1`` draws at ``shape + 1`` and rescales by ``U**(1/shape)``.
    """
    boost = shape < 1.0
    a = shape + 1.0 if boost else shape
    d = a - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(size)
    filled = 0
    while filled < size:
        need = size - filled
        batch = need + need // 20 + 4
        x = rng.standard_normal(batch)
        u = rng.random(batch)
        v = (1.0 + c * x) ** 3
        positive = v > 0.0
        x2 = x * x
        squeeze = u < 1.0 - 0.0331 * x2 * x2
        with np.errstate(invalid="ignore", divide="ignore"):
            full = np.log(u) < 0.5 * x2 + d * (1.0 - v + np.log(np.where(positive, v, 1.0)))
        accepted = d * v[positive & (squeeze | full)]
        take = min(need, accepted.size)
        out[filled:filled + take] = accepted[:take]
        filled += take
    if boost:
        out *= rng.random(size) ** (1.0 / shape)
    return out


def gamma_sample(params, n, rng):
    """``n`` iid Gamma(shape, rate) draws as a :class:`Sample`."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    return Sample(standard_gamma(params.shape, int(n), rng) / params.rate)


@dataclass(frozen=True)
class SimulationConfig:
    params: GammaParams
    n: int
    reps: int
    spec: IndexSpec
    seed: int = DEFAULT_SEED
    true_value: Optional[float] = None

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < self.spec.m:
            raise InsufficientSampleError(f"n must be an integer >= m = {self.spec.m}, got {self.n!r}")
        if isinstance(self.reps, bool) or int(self.reps) != self.reps or self.reps < 1:
            raise DomainError(f"reps must be a positive integer, got {self.reps!r}")
        _check_seed(self.seed)


@dataclass(frozen=True)
class SimulationReport:
    bias: float
    mse: float
    mean_estimate: float
    true_value: float
    std_error: float
    reps: int
    seed: int
    n: int
    spec: IndexSpec

    def as_dict(self):
        out = asdict(self)
        out["spec"] = dict(zip("mjk", self.spec.as_tuple()))
        return out


def replicate_estimates(config, workers=1):
    """Estimates of every replicate, in replicate order."""

    def one(index):
        sample = gamma_sample(config.params, config.n, replicate_rng(config.seed, index))
        return extended_gini_estimate(sample, config.spec).value

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return np.array(list(pool.map(one, range(config.reps))))
    return np.array([one(i) for i in range(config.reps)])


def run_simulation(config, workers=1):
    """Bias, MSE and mean of the estimator over ``config.reps`` replicates.

    The reference value defaults to :func:`index_gamma` at ``abs_tol=1e-10``.
    ``std_error`` is NaN when ``reps == 1``.
    """
    true_value = config.true_value
    if true_value is None:
        true_value = index_gamma(config.spec, config.params, QuadratureConfig(abs_tol=1e-10))
    estimates = replicate_estimates(config, workers)
    deviations = estimates - true_value
    reps = config.reps
    bias = math.fsum(deviations) / reps
    mse = math.fsum(deviations * deviations) / reps
    if reps > 1:
        mean = math.fsum(estimates) / reps
        var = math.fsum((estimates - mean) ** 2) / (reps - 1)
        std_error = math.sqrt(var / reps)
    else:
        std_error = math.nan
    return SimulationReport(
        bias=bias, mse=mse, mean_estimate=true_value + bias, true_value=true_value,
        std_error=std_error, reps=reps, seed=config.seed, n=config.n, spec=config.spec,
    )


def reproduce_study(ns=STUDY_NS, reps=STUDY_REPS, spec=STUDY_SPEC, params=STUDY_PARAMS,
                    seed=DEFAULT_SEED, workers=1):
    """One report per sample size; all rows share ``seed`` and one true value."""
    true_value = index_gamma(spec, params, QuadratureConfig(abs_tol=1e-10))
    return [
        run_simulation(SimulationConfig(params, n, reps, spec, seed, true_value), workers)
        for n in ns
    ]
