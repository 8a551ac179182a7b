"""Rank-1 lattice rules with prime node counts.

A rule is the node set x_j = {j z / N}, j = 0..N-1, for a generator vector z.
Equal-weight averaging over the nodes integrates every Fourier mode exactly
except those whose frequency lies on the dual lattice h . z = 0 (mod N); the
squared worst-case integration error over the unit ball of the space is the
sum of reciprocal weights over the nonzero dual frequencies.  Two independent
evaluations of that quantity are provided: a kernel-form average over the
nodes, and a residue-class closed form built from Hurwitz zeta values.
Generator search (exhaustive or coordinate-by-coordinate) minimizes the
kernel-form error and is certified against the prod(1+2 gamma_j)^(1/2) / sqrt(N)
existence bound.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import product as _iter_product
from typing import Callable, Sequence

import numpy as np
from scipy.special import zeta as _hurwitz_zeta

from . import kernels
from .errors import DomainError, InfeasibleError
from .fourier import FourierPolynomial, evaluate_batch
from .space import SpaceDescriptor, cosine_series_grid
from .space import zeta as _zeta

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
EXHAUSTIVE_CAP = 1_000_000
DUAL_WORK_CAP = 200_000_000


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; the fixed witness set covers 64-bit inputs."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    if n < 2:
        raise DomainError("next_prime requires n >= 2")
    k = int(n)
    while not is_prime(k):
        k += 1
    return k


@dataclass(frozen=True)
class LatticeRule:
    """Prime modulus N and generator z (each coordinate in 1..N-1)."""

    N: int
    z: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.N):
            raise DomainError(f"N = {self.N} is not prime")
        if not self.z:
            raise DomainError("generator must have at least one coordinate")
        if any(not 1 <= v <= self.N - 1 for v in self.z):
            raise DomainError("generator coordinates must lie in 1..N-1")

    @property
    def d(self) -> int:
        return len(self.z)

    def to_json_dict(self) -> dict:
        return {"N": self.N, "z": list(self.z)}

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict())


def nodes(rule: LatticeRule) -> np.ndarray:
    """All N nodes as an (N, d) array in [0, 1)^d."""
    j = np.arange(rule.N, dtype=np.int64)
    return ((j[:, None] * np.asarray(rule.z, dtype=np.int64)) % rule.N) / rule.N


def integrate(rule: LatticeRule, f, chunk: int = 65536) -> complex:
    """Equal-weight node average of f.

    f may be a FourierPolynomial or a callable mapping an (n, d) array of
    points to values.  Node blocks keep memory flat for large N.
    """
    evaluator: Callable[[np.ndarray], np.ndarray]
    if isinstance(f, FourierPolynomial):
        evaluator = lambda pts: evaluate_batch(f, pts)  # noqa: E731
    else:
        evaluator = f
    z = np.asarray(rule.z, dtype=np.int64)
    total = 0j
    for lo in range(0, rule.N, chunk):
        j = np.arange(lo, min(lo + chunk, rule.N), dtype=np.int64)
        pts = ((j[:, None] * z) % rule.N) / rule.N
        total += complex(np.sum(evaluator(pts)))
    return total / rule.N


def exact_modulated_sum(rule: LatticeRule, f: FourierPolynomial, h: Sequence[int]) -> complex:
    """Exact value of (1/N) sum_j f(x_j) exp(-2 pi i h . x_j) for sparse f.

    The node average picks out exactly the coefficients aliased onto h
    through the dual lattice: sum of fhat(k) over k with (k - h) . z = 0
    (mod N).  Costs O(support), never O(N).
    """
    hv = np.asarray(h, dtype=np.int64)
    if hv.shape != (rule.d,):
        raise DomainError(f"frequency must have shape ({rule.d},)")
    if not len(f):
        return 0j
    support = f.support_array()
    z = np.asarray(rule.z, dtype=np.int64)
    residues = ((support - hv) @ z) % rule.N
    mask = residues == 0
    if not mask.any():
        return 0j
    return complex(np.sum(f.coeff_array()[mask]))


def _coordinate_grids(space: SpaceDescriptor, n: int) -> list[np.ndarray]:
    """Per-coordinate kernel factors 1 + 2 gamma_m S(k/n) on the node grid."""
    space.require_kernel()
    sg = cosine_series_grid(space.alpha, n)
    return [1.0 + 2.0 * g * sg for g in space.gammas()]


def _kernel_error_sq(rule: LatticeRule, grids: list[np.ndarray]) -> float:
    j = np.arange(rule.N, dtype=np.int64)
    acc = np.ones(rule.N)
    for z_m, w in zip(rule.z, grids):
        acc = acc * w[(j * z_m) % rule.N]
    return float(np.mean(acc) - 1.0)


def _residue_weight_sums(space: SpaceDescriptor, n: int) -> list[np.ndarray]:
    """T_m[rho] = sum over k = rho (mod n) of 1/r_m(k), exactly via Hurwitz zeta."""
    z_a = _zeta(space.alpha)
    rho = np.arange(1, n, dtype=float)
    base = n ** (-space.alpha) * (
        _hurwitz_zeta(space.alpha, rho / n) + _hurwitz_zeta(space.alpha, 1.0 - rho / n)
    )
    out = []
    for g in space.gammas():
        t = np.empty(n)
        t[0] = 1.0 + 2.0 * g * n ** (-space.alpha) * z_a
        t[1:] = g * base
        out.append(t)
    return out


def _dual_error_sq(space: SpaceDescriptor, rule: LatticeRule) -> float:
    """Residue-class evaluation of the dual-lattice weight sum.

    Folding each coordinate's frequencies by their residue mod N leaves a
    d-fold cyclic convolution over Z_N evaluated at 0; the inner sums over
    each residue class are exact Hurwitz zeta expressions.
    """
    n = rule.N
    if space.d * n * n > DUAL_WORK_CAP:
        raise InfeasibleError(
            f"dual-form error needs d*N^2 = {space.d * n * n} ops; use method='kernel'"
        )
    t_arrays = _residue_weight_sums(space, n)
    acc = np.zeros(n)
    acc[0] = 1.0
    rho = np.arange(n, dtype=np.int64)
    for m, (z_m, t) in enumerate(zip(rule.z, t_arrays)):
        rho_z = (rho * z_m) % n
        last = m == rule.d - 1
        targets = np.zeros(1, dtype=np.int64) if last else rho
        new = np.empty(targets.shape[0])
        for lo in range(0, targets.shape[0], 512):
            tg = targets[lo : lo + 512]
            idx = (tg[:, None] - rho_z[None, :]) % n
            new[lo : lo + tg.shape[0]] = (t[None, :] * acc[idx]).sum(axis=1)
        acc = new
    return float(acc[0] - 1.0)


def worst_case_int_error(
    space: SpaceDescriptor, rule: LatticeRule, method: str = "kernel"
) -> float:
    """Worst-case integration error of the rule over the unit ball.

    ``kernel`` averages the reproducing kernel over the nodes; ``dual``
    evaluates the dual-lattice weight sum in residue-class closed form.  Both
    are exact up to roundoff and must agree.
    """
    space.require_kernel()
    if space.d != rule.d:
        raise DomainError(f"dimensions differ: space {space.d}, rule {rule.d}")
    if method == "kernel":
        e2 = _kernel_error_sq(rule, _coordinate_grids(space, rule.N))
    elif method == "dual":
        e2 = _dual_error_sq(space, rule)
    else:
        raise DomainError(f"unknown method {method!r}")
    return math.sqrt(max(e2, 0.0))


def bound_rhs(space: SpaceDescriptor, n: int) -> float:
    """Existence bound prod_j (1 + 2 gamma_j)^(1/2) / sqrt(n) on the error."""
    return float(np.prod(np.sqrt(1.0 + 2.0 * space.gammas())) / math.sqrt(n))


@dataclass(frozen=True)
class GeneratorSearchResult:
    rule: LatticeRule
    error: float
    bound: float

    @property
    def certified(self) -> bool:
        """True when the searched rule meets the existence bound."""
        return self.error <= self.bound


def search_generator(
    space: SpaceDescriptor, n: int, mode: str = "cbc"
) -> GeneratorSearchResult:
    """Find a generator minimizing the worst-case integration error.

    ``exhaustive`` scans all (n-1)^d candidates (capped); ``cbc`` fixes one
    coordinate at a time, each minimizing the error of the partial rule.
    Ties break to the lexicographically smallest generator.
    """
    space.require_kernel()
    if not is_prime(n):
        raise DomainError(f"N = {n} is not prime")
    if n < 3:
        raise DomainError("need N >= 3 for a nontrivial generator search")
    grids = _coordinate_grids(space, n)
    d = space.d
    if mode == "exhaustive":
        if (n - 1) ** d > EXHAUSTIVE_CAP:
            raise InfeasibleError(
                f"exhaustive search space (N-1)^d = {(n - 1) ** d} exceeds cap"
            )
        j = np.arange(n, dtype=np.int64)
        best_e2 = math.inf
        best_z: tuple[int, ...] | None = None
        for prefix in _iter_product(range(1, n), repeat=d - 1):
            base = np.ones(n)
            for z_m, w in zip(prefix, grids[:-1]):
                base = base * w[(j * z_m) % n]
            errs = kernels.cbc_scan(base, grids[-1], n)
            k = int(np.argmin(errs))
            if errs[k] < best_e2:
                best_e2 = float(errs[k])
                best_z = prefix + (k + 1,)
        rule = LatticeRule(N=n, z=best_z)
        return GeneratorSearchResult(rule, math.sqrt(max(best_e2, 0.0)), bound_rhs(space, n))
    if mode == "cbc":
        j = np.arange(n, dtype=np.int64)
        base = np.ones(n)
        zs: list[int] = []
        e2 = math.inf
        for w in grids:
            errs = kernels.cbc_scan(base, w, n)
            k = int(np.argmin(errs))
            zs.append(k + 1)
            e2 = float(errs[k])
            base = base * w[(j * (k + 1)) % n]
        rule = LatticeRule(N=n, z=tuple(zs))
        return GeneratorSearchResult(rule, math.sqrt(max(e2, 0.0)), bound_rhs(space, n))
    raise DomainError(f"unknown search mode {mode!r}")
