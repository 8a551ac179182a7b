"""Shared independent oracles for the test suite.

These deliberately avoid the library's own computational paths: the box scan
re-derives membership from the shared factor tables by brute force, the zeta
oracle uses partial sums with an Euler-Maclaurin tail, the statevector
simulator runs textbook phase estimation, and the grid quadratures integrate
trigonometric polynomials exactly below the aliasing limit.
"""

import math

import numpy as np
import pytest

from korobox.fourier import FourierPolynomial, evaluate_batch
from korobox.index_set import factor_tables
from korobox.space import SpaceDescriptor, WeightSchedule


def brute_force_members(space: SpaceDescriptor, epsilon: float) -> np.ndarray:
    """Box scan over every candidate frequency; the enumeration oracle.

    Uses the same factor tables as the production kernels (so float ties
    resolve identically) but combines them by explicit outer products over
    the full box instead of a pruned search.
    """
    budget = epsilon**-2.0
    factors = factor_tables(space, budget)
    axes, facs = [], []
    for j in range(space.d):
        row = factors[j]
        m = int(np.sum(row < budget)) - 1
        h = np.arange(-m, m + 1)
        axes.append(h)
        facs.append(row[np.abs(h)])
    prod = facs[0]
    for fac in facs[1:]:
        prod = prod[..., None] * fac
    idx = np.nonzero(prod < budget)
    members = np.stack(
        [axes[j][idx[j]] for j in range(space.d)], axis=-1
    ).astype(np.int64)
    order = np.lexsort(members.T[::-1])
    return members[order]


def zeta_oracle(alpha: float, terms: int = 20000) -> float:
    """Partial sum plus Euler-Maclaurin tail; independent of scipy."""
    k = np.arange(1, terms + 1, dtype=float)
    head = float(np.sum(k**-alpha))
    n = float(terms)
    tail = n ** (1 - alpha) / (alpha - 1) - 0.5 * n**-alpha + alpha / 12.0 * n ** (-alpha - 1)
    return head + tail


def statevector_pmf(a: float, m: int) -> np.ndarray:
    """Exact phase estimation on the Grover rotation, simulated end to end.

    Phase register of size m tensored with the two-dimensional invariant
    subspace; controlled powers of the rotation followed by the inverse
    Fourier transform on the register, then a projective measurement.
    """
    theta = math.asin(math.sqrt(a))
    k = np.arange(m)
    ang = (2 * k + 1) * theta
    state = np.stack([np.cos(ang), np.sin(ang)], axis=1) / math.sqrt(m)
    ft = np.fft.fft(state, axis=0) / math.sqrt(m)
    return np.sum(np.abs(ft) ** 2, axis=1)


def grid_sq_l2_distance(f: FourierPolynomial, g: FourierPolynomial, per_axis: int = 64) -> float:
    """Squared L2 distance by uniform-grid quadrature, exact below aliasing."""
    d = f.d
    axes = [np.arange(per_axis) / per_axis] * d
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    diff = evaluate_batch(f, pts) - evaluate_batch(g, pts)
    return float(np.mean(np.abs(diff) ** 2))


def unit_space(d: int = 1, alpha: float = 2.0, gammas=None) -> SpaceDescriptor:
    if gammas is None:
        gammas = [1.0] * d
    return SpaceDescriptor(d=d, alpha=alpha, weights=WeightSchedule.explicit(gammas))


def poly_space(d: int, alpha: float, c: float = 1.0, kappa: float = 1.0) -> SpaceDescriptor:
    return SpaceDescriptor(d=d, alpha=alpha, weights=WeightSchedule.polynomial(c, kappa))


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(key=20240817))
