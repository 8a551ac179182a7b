"""Enumeration of the dominant-eigenvalue frequency set and spectral truncation.

For a target accuracy ``eps`` the relevant frequencies are those whose weight
product stays strictly below ``eps^-2`` (equivalently, whose eigenvalue under
the approximation operator exceeds ``eps^2``).  Truncating a Fourier series
to this set is the optimal worst-case algorithm under full linear
information, and the set's cardinality is the corresponding information
complexity, so both are exposed here.

Membership is decided on precomputed per-coordinate factor tables shared by
the enumeration kernels and the box-scan oracle in the test suite, so the
strict-inequality tie policy is reproduced bit for bit everywhere.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DimensionMismatchError, DomainError, InfeasibleError
from .fourier import FourierPolynomial
from .space import SpaceDescriptor

DEFAULT_CAP = 10_000_000


@dataclass(frozen=True)
class IndexSet:
    """Sorted members of the budgeted frequency set for one (space, epsilon)."""

    space: SpaceDescriptor
    epsilon: float
    members: np.ndarray = field(repr=False)

    @property
    def cardinality(self) -> int:
        return int(self.members.shape[0])

    def member_set(self) -> set[tuple[int, ...]]:
        return {tuple(int(v) for v in row) for row in self.members}

    def to_json_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "d": self.space.d,
            "members": [[int(v) for v in row] for row in self.members],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict())


def _check_args(space: SpaceDescriptor, epsilon: float) -> None:
    if space.alpha == 0.0:
        raise DomainError(
            "approximation not solvable: infinitely many unit eigenvalues at alpha = 0"
        )
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1); got {epsilon}")


def factor_tables(
    space: SpaceDescriptor, budget: float, trim: bool = False
) -> np.ndarray:
    """Per-coordinate weight tables, the single source of membership truth.

    Row j holds the factor of offset m in coordinate j, entry 0 being 1, and
    inf past the largest offset admissible at full budget.  ``trim`` drops
    trailing coordinates that cannot activate at all (counting only; dense
    members need every coordinate for the zero padding).
    """
    g = space.gammas()
    tables: list[np.ndarray] = []
    for j in range(space.d):
        inv = 1.0 / g[j]
        if inv >= budget:
            if trim:
                break  # weights are non-increasing, later coordinates cost more
            tables.append(np.asarray([1.0]))
            continue
        m_est = int((budget / inv) ** (1.0 / space.alpha)) + 2
        arr = inv * np.arange(0, m_est + 1, dtype=float) ** space.alpha
        arr[0] = 1.0
        cut = int(np.searchsorted(arr[1:], budget, side="left"))
        tables.append(arr[: cut + 1])
    if not tables:
        tables = [np.asarray([1.0])]
    width = max(2, max(t.shape[0] for t in tables))
    packed = np.full((len(tables), width), np.inf)
    for j, t in enumerate(tables):
        packed[j, : t.shape[0]] = t
    return packed


def enumerate_index_set(
    space: SpaceDescriptor,
    epsilon: float,
    cap: int = DEFAULT_CAP,
    parallel: bool = False,
) -> IndexSet:
    """Depth-first enumeration with budget pruning, lexicographically sorted.

    Membership is the strict inequality weight_product(h) < epsilon^-2; ties
    at exactly epsilon^-2 are excluded.  Raises InfeasibleError past ``cap``.
    The parallel mode splits on the first coordinate and produces the same
    members as the serial walk.
    """
    _check_args(space, epsilon)
    budget = epsilon**-2.0
    factors = factor_tables(space, budget)
    if parallel and space.d > 1:
        members = _enumerate_parallel(factors, budget, cap)
    else:
        members = kernels.enumerate_members(factors, budget, cap)
    if members is None:
        raise InfeasibleError(f"index set exceeds cap of {cap} members")
    return IndexSet(space=space, epsilon=float(epsilon), members=members)


def _enumerate_parallel(factors: np.ndarray, budget: float, cap: int):
    """First-coordinate split; concatenation in h_1 order preserves lex order."""
    d = factors.shape[0]
    row0 = factors[0]
    m = 0
    while m + 1 < row0.shape[0] and row0[m + 1] < budget:
        m += 1
    rest = np.ascontiguousarray(factors[1:])

    def job(h1: int):
        prefix = 1.0 if h1 == 0 else float(row0[abs(h1)])
        # Slightly inflated sub-budget: the serial walk multiplies the running
        # product by each factor directly, and dividing the budget here can
        # round differently at the boundary.  Over-enumerate, then re-filter
        # with the serial expression in the serial association order.
        sub = kernels.enumerate_members(rest, (budget / prefix) * (1 + 1e-9), cap)
        if sub is None:
            return None
        if sub.shape[0]:
            prods = np.full(sub.shape[0], prefix)
            for j in range(d - 1):
                prods = prods * rest[j][np.abs(sub[:, j])]
            sub = sub[prods < budget]
        col1 = np.full((sub.shape[0], 1), h1, dtype=np.int64)
        return np.hstack([col1, sub])

    with ThreadPoolExecutor() as pool:
        parts = list(pool.map(job, range(-m, m + 1)))
    if any(p is None for p in parts):
        return None
    total = int(sum(p.shape[0] for p in parts))
    if total > cap:
        return None
    if total == 0:
        return np.zeros((0, d), dtype=np.int64)
    return np.vstack([p for p in parts if p.shape[0]])


def count_index_set(space: SpaceDescriptor, epsilon: float, cap: int = DEFAULT_CAP) -> int:
    """Cardinality only; feasible for very large d where members cannot be stored."""
    _check_args(space, epsilon)
    budget = epsilon**-2.0
    n = kernels.count_members(factor_tables(space, budget, trim=True), budget, cap)
    if n > cap:
        raise InfeasibleError(f"index set exceeds cap of {cap} members")
    return int(n)


def comp_wor_all(space: SpaceDescriptor, epsilon: float, cap: int = DEFAULT_CAP) -> int:
    """Worst-case information complexity under full linear information."""
    return count_index_set(space, epsilon, cap=cap)


def truncate(
    space: SpaceDescriptor,
    epsilon: float,
    f: FourierPolynomial,
    index_set: IndexSet | None = None,
) -> FourierPolynomial:
    """Restrict f to the budgeted frequency set (an orthogonal projection)."""
    if space.d != f.d:
        raise DimensionMismatchError(f"dimensions differ: {space.d} vs {f.d}")
    if index_set is None:
        index_set = enumerate_index_set(space, epsilon)
    keep = index_set.member_set()
    return FourierPolynomial(f.d, {h: c for h, c in f.coeffs.items() if h in keep})


def truncation_error(
    space: SpaceDescriptor,
    epsilon: float,
    f: FourierPolynomial,
    index_set: IndexSet | None = None,
) -> float:
    """Exact L2 error of the truncation: the coefficient mass left outside."""
    if space.d != f.d:
        raise DimensionMismatchError(f"dimensions differ: {space.d} vs {f.d}")
    if index_set is None:
        index_set = enumerate_index_set(space, epsilon)
    keep = index_set.member_set()
    tail = sum(abs(c) ** 2 for h, c in f.coeffs.items() if h not in keep)
    return float(np.sqrt(tail))
