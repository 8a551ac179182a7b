"""Monte Carlo coefficient estimation on the dominant frequency set.

The randomized approximation draws n uniform sample points, estimates the
Fourier coefficient of every frequency in the dominant set by the sample
mean of f(x) exp(-2 pi i h . x), and sets all other coefficients to zero.
With the canonical sample size n = ceil(2 |R| / eps^2) the expected squared
L2 error stays below eps^2 on the unit ball.  The expectation has an exact
coefficient-level formula which serves as the primary oracle; repeated
seeded trials confirm it statistically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, DomainError
from .fourier import FourierPolynomial, evaluate_batch, l2_norm
from .index_set import DEFAULT_CAP, IndexSet, enumerate_index_set
from .prng import MC_STREAM, philox
from .space import SpaceDescriptor

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class McRun:
    """Frozen configuration of one randomized approximation run."""

    space: SpaceDescriptor
    epsilon: float
    n: int
    seed: int
    index_set: IndexSet

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("sample count must be >= 1")


@dataclass(frozen=True)
class ApproxOutput:
    """Estimated coefficients on the dominant set, with a polynomial view."""

    coefficients: dict[tuple[int, ...], complex]
    as_polynomial: FourierPolynomial


@dataclass(frozen=True)
class ErrorStats:
    mean_sq: float
    std_err: float
    trials: int


@dataclass(frozen=True)
class RandomizedCost:
    func_evals: int
    combinatory_ops: int
    total: float


def sample_size(space: SpaceDescriptor, epsilon: float, cap: int = DEFAULT_CAP) -> int:
    """Canonical sample count ceil(2 |R(eps/sqrt(2))| / eps^2)."""
    r = enumerate_index_set(space, epsilon / _SQRT2, cap=cap).cardinality
    return int(math.ceil(2.0 * r / epsilon**2))


def make_run(
    space: SpaceDescriptor,
    epsilon: float,
    seed: int,
    n: int | None = None,
    cap: int = DEFAULT_CAP,
) -> McRun:
    """Assemble a run: index set at threshold eps/sqrt(2) plus sample count."""
    index_set = enumerate_index_set(space, epsilon / _SQRT2, cap=cap)
    if n is None:
        n = int(math.ceil(2.0 * index_set.cardinality / epsilon**2))
    return McRun(space=space, epsilon=float(epsilon), n=int(n), seed=int(seed), index_set=index_set)


def approximate(run: McRun, f: FourierPolynomial) -> ApproxOutput:
    """One seeded Monte Carlo estimation pass.

    Sample points come from the Philox stream of ``run.seed``; the output is
    bit-reproducible for fixed inputs on one platform.
    """
    if f.d != run.space.d:
        raise DimensionMismatchError(f"dimensions differ: {f.d} vs {run.space.d}")
    rng = philox(run.seed, MC_STREAM)
    omega = rng.random((run.n, run.space.d))
    values = evaluate_batch(f, omega)
    members = run.index_set.members
    phases = omega @ members.T  # (n, |R|)
    estimates = np.exp(-2j * math.pi * phases).T @ values / run.n
    coeffs = {
        tuple(int(v) for v in members[i]): complex(estimates[i])
        for i in range(members.shape[0])
    }
    return ApproxOutput(
        coefficients=coeffs, as_polynomial=FourierPolynomial(run.space.d, coeffs)
    )


def expected_sq_error(
    space: SpaceDescriptor,
    epsilon: float,
    n: int,
    f: FourierPolynomial,
    index_set: IndexSet | None = None,
) -> float:
    """Exact expectation of the squared L2 error of `approximate`.

    Every in-set coefficient contributes its Monte Carlo variance
    (||f||_2^2 - |fhat(h)|^2) / n; the out-of-set mass is deterministic.
    """
    if index_set is None:
        index_set = enumerate_index_set(space, epsilon / _SQRT2)
    keep = index_set.member_set()
    total_mass = l2_norm(f) ** 2
    variance = 0.0
    tail = total_mass
    for h in keep:
        c = f.coefficient(h)
        mag = abs(c) ** 2
        variance += (total_mass - mag) / n
        tail -= mag
    return variance + tail


def _per_trial_sq_errors(run: McRun, f: FourierPolynomial, trials: int) -> np.ndarray:
    """Exact Parseval squared error of each of ``trials`` seeded passes."""
    members = run.index_set.members
    keep = run.index_set.member_set()
    truth = np.asarray([f.coefficient(tuple(h)) for h in members], dtype=complex)
    tail = sum(abs(c) ** 2 for h, c in f.coeffs.items() if h not in keep)
    out = np.empty(trials)
    for t in range(trials):
        rng = philox(run.seed + t, MC_STREAM)
        omega = rng.random((run.n, run.space.d))
        values = evaluate_batch(f, omega)
        phases = omega @ members.T
        est = np.exp(-2j * math.pi * phases).T @ values / run.n
        out[t] = float(np.sum(np.abs(est - truth) ** 2)) + tail
    return out


def empirical_error(run: McRun, f: FourierPolynomial, trials: int) -> ErrorStats:
    """Trial mean and standard error of the exact per-trial squared error.

    Trial t reuses the run configuration with seed ``run.seed + t``.  Sums are
    numpy pairwise reductions, so results are reproducible bit for bit.
    """
    if trials < 2:
        raise DomainError("need at least 2 trials for a standard error")
    sq = _per_trial_sq_errors(run, f, trials)
    mean = float(np.mean(sq))
    std_err = float(np.std(sq, ddof=1) / math.sqrt(trials))
    return ErrorStats(mean_sq=mean, std_err=std_err, trials=trials)


def cost_model_randomized(
    space: SpaceDescriptor,
    epsilon: float,
    c_of_d,
    cap: int = DEFAULT_CAP,
    r_size: int | None = None,
) -> RandomizedCost:
    """Cost accounting: n function values, n d |R| + d |R| combinatory ops.

    ``c_of_d`` maps the dimension to the cost of one function evaluation.
    ``r_size`` short-circuits the enumeration when the caller already knows
    the index-set cardinality (used by the large-d growth studies).
    """
    if r_size is None:
        from .index_set import count_index_set

        r_size = count_index_set(space, epsilon / _SQRT2, cap=cap)
    n = int(math.ceil(2.0 * r_size / epsilon**2))
    d = space.d
    combinatory = n * d * r_size + d * r_size
    total = n * float(c_of_d(d)) + combinatory
    return RandomizedCost(func_evals=n, combinatory_ops=combinatory, total=total)


def run_report(
    run: McRun, f: FourierPolynomial, trials: int, c_of_d=lambda d: float(d)
) -> dict:
    """JSON-ready report for one configuration."""
    stats = empirical_error(run, f, trials)
    cost = cost_model_randomized(
        run.space, run.epsilon, c_of_d, r_size=run.index_set.cardinality
    )
    return {
        "epsilon": run.epsilon,
        "n": run.n,
        "R_size": run.index_set.cardinality,
        "expected_sq_error": expected_sq_error(
            run.space, run.epsilon, run.n, f, index_set=run.index_set
        ),
        "empirical": {
            "mean_sq": stats.mean_sq,
            "std_err": stats.std_err,
            "trials": stats.trials,
        },
        "cost": {
            "func_evals": cost.func_evals,
            "combinatory_ops": cost.combinatory_ops,
            "total": cost.total,
        },
    }
