"""Weighted Korobov space descriptors and their scalar building blocks.

A space is fixed by a dimension ``d``, a smoothness exponent ``alpha >= 0``
and a non-increasing weight sequence ``1 >= gamma_1 >= ... >= gamma_d > 0``.
Each frequency vector ``h`` in Z^d carries the product weight

    r(h) = prod_j r_j(h_j),   r_j(0) = 1,   r_j(h_j) = |h_j|^alpha / gamma_j,

(for ``alpha = 0`` the nonzero-frequency factor degenerates to 1, so r is
identically one and the space is plain L2).  The squared norm of a function
is ``sum_h r(h) |fhat(h)|^2``.  For ``alpha > 1`` point evaluation is bounded
and the reproducing kernel has the product form implemented here, together
with the norm bounds and the Banach-algebra constant that the quantum
summation pipeline consumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import zeta as _hurwitz_zeta

from .errors import DomainError, KoroboxError

# Absolute tolerances for the scalar series evaluations.  Both sit well below
# every tolerance asserted downstream.
ZETA_TOL = 1e-12
COSINE_SERIES_TOL = 1e-10
_COSINE_SERIES_TERM_CAP = 500_000


@dataclass(frozen=True)
class WeightSchedule:
    """Coordinate weight sequence, either an explicit finite list or c*j^-kappa.

    The polynomial family is the one for which asymptotic quantities (the
    sum-exponent, tractability exponents) are defined; explicit lists only
    describe a single finite-dimensional space.
    """

    kind: str
    gammas_: tuple[float, ...] | None = None
    scale: float | None = None
    decay: float | None = None

    @staticmethod
    def explicit(gammas: Sequence[float]) -> "WeightSchedule":
        g = tuple(float(x) for x in gammas)
        if not g:
            raise DomainError("weight schedule must contain at least one weight")
        if g[0] > 1.0 or g[-1] <= 0.0:
            raise DomainError("weights must satisfy 1 >= gamma_1 and gamma_d > 0")
        if any(a < b for a, b in zip(g, g[1:])):
            raise DomainError("weights must be non-increasing")
        return WeightSchedule(kind="explicit", gammas_=g)

    @staticmethod
    def polynomial(scale: float, decay: float) -> "WeightSchedule":
        c = float(scale)
        kappa = float(decay)
        if not 0.0 < c <= 1.0:
            raise DomainError("polynomial weight scale must lie in (0, 1]")
        if kappa < 0.0:
            raise DomainError("polynomial weight decay must be >= 0")
        return WeightSchedule(kind="polynomial", scale=c, decay=kappa)

    def gammas(self, d: int) -> np.ndarray:
        """First ``d`` weights as a float array."""
        if self.kind == "explicit":
            if d > len(self.gammas_):
                raise DomainError(
                    f"explicit schedule has {len(self.gammas_)} weights, {d} requested"
                )
            return np.asarray(self.gammas_[:d], dtype=float)
        j = np.arange(1, d + 1, dtype=float)
        return self.scale * j ** (-self.decay)

    def to_dict(self) -> dict:
        if self.kind == "explicit":
            return {"kind": "explicit", "gammas": list(self.gammas_)}
        return {"kind": "polynomial", "c": self.scale, "kappa": self.decay}

    @staticmethod
    def from_dict(obj: dict) -> "WeightSchedule":
        if obj.get("kind") == "explicit":
            return WeightSchedule.explicit(obj["gammas"])
        if obj.get("kind") == "polynomial":
            return WeightSchedule.polynomial(obj["c"], obj["kappa"])
        raise DomainError(f"unknown weight schedule kind {obj.get('kind')!r}")


@dataclass(frozen=True)
class SpaceDescriptor:
    """Dimension, smoothness and weights of one weighted Korobov space."""

    d: int
    alpha: float
    weights: WeightSchedule

    def __post_init__(self):
        if self.d < 1:
            raise DomainError("dimension must be >= 1")
        if self.alpha < 0:
            raise DomainError("smoothness alpha must be >= 0")
        self.weights.gammas(self.d)  # validates explicit schedules eagerly

    def gammas(self) -> np.ndarray:
        return _cached_gammas(self.weights, self.d)

    def require_kernel(self) -> None:
        """Kernel-dependent operations need alpha > 1."""
        if self.alpha <= 1:
            raise DomainError(
                f"operation requires alpha > 1 (reproducing kernel); got alpha={self.alpha}"
            )


@lru_cache(maxsize=None)
def _cached_gammas(weights: WeightSchedule, d: int) -> np.ndarray:
    g = weights.gammas(d)
    g.setflags(write=False)
    return g


def weight_factor(space: SpaceDescriptor, j: int, h: int) -> float:
    """Single-coordinate weight r_j(h) for 1-based coordinate index j."""
    if not 1 <= j <= space.d:
        raise DomainError(f"coordinate index {j} outside 1..{space.d}")
    if h == 0 or space.alpha == 0.0:
        return 1.0
    return abs(h) ** space.alpha / space.gammas()[j - 1]


def weight_product(space: SpaceDescriptor, h: Sequence[int]) -> float:
    """Product weight r(h); always >= 1, equal to 1 exactly at h = 0."""
    h = np.asarray(h)
    if h.shape != (space.d,):
        raise DomainError(f"frequency vector has shape {h.shape}, expected ({space.d},)")
    if space.alpha == 0.0:
        return 1.0
    p = 1.0
    g = space.gammas()
    for j in range(space.d):
        hj = int(h[j])
        if hj != 0:
            p = p * (abs(hj) ** space.alpha / g[j])
    return p


def zeta(alpha: float) -> float:
    """Riemann zeta at a real argument > 1.

    Raises for alpha <= 1 where the defining series diverges.
    """
    if alpha <= 1.0:
        raise DomainError(f"zeta series diverges for alpha={alpha} <= 1")
    return float(_hurwitz_zeta(alpha))


@lru_cache(maxsize=None)
def _bernoulli_numbers(n: int) -> tuple[Fraction, ...]:
    """B_0..B_n as exact fractions (B_1 = -1/2 convention)."""
    b = [Fraction(1)]
    for m in range(1, n + 1):
        s = Fraction(0)
        for j in range(m):
            s += math.comb(m + 1, j) * b[j]
        b.append(-s / (m + 1))
    return tuple(b)


@lru_cache(maxsize=None)
def _bernoulli_poly_coeffs(n: int) -> np.ndarray:
    """Coefficients of B_n(x) in ascending powers of x, as floats."""
    bern = _bernoulli_numbers(n)
    coeffs = [Fraction(math.comb(n, k)) * bern[n - k] for k in range(n + 1)]
    return np.asarray([float(c) for c in coeffs])


def _cosine_series_bernoulli(alpha: int, x: np.ndarray) -> np.ndarray:
    """sum_{h>=1} cos(2 pi h x) / h^alpha for even integer alpha, closed form."""
    m = alpha // 2
    coeffs = _bernoulli_poly_coeffs(alpha)
    xx = np.mod(x, 1.0)
    poly = np.zeros_like(xx, dtype=float)
    for c in coeffs[::-1]:
        poly = poly * xx + c
    sign = -1.0 if m % 2 == 0 else 1.0
    return sign * (2 * math.pi) ** alpha / (2 * math.factorial(alpha)) * poly


def _cosine_series_direct_terms(alpha: float, x: float) -> int | None:
    """Smallest certified truncation point at COSINE_SERIES_TOL, or None.

    Two monotone tail bounds apply: the integral bound K^(1-alpha)/(alpha-1),
    and the summation-by-parts bound K^-alpha / |sin(pi x)| from the bounded
    cosine partial sums.  Whichever certifies first wins; if neither does
    within the term cap the caller falls back to the analytic continuation.
    """
    tol = COSINE_SERIES_TOL
    k_naive = (tol * (alpha - 1.0)) ** (-1.0 / (alpha - 1.0))
    s = abs(math.sin(math.pi * x))
    k_abel = math.inf if s == 0.0 else (tol * s) ** (-1.0 / alpha)
    k = min(k_naive, k_abel)
    if k > _COSINE_SERIES_TERM_CAP:
        return None
    return max(4, int(math.ceil(k)))


def _cosine_series_reflection(alpha: float, x: float) -> float:
    """Analytic continuation of the cosine series via Hurwitz zeta at 1-alpha.

    Valid for alpha > 1 not an odd integer (odd integers are always reachable
    by direct summation, so the degenerate cos(pi alpha / 2) = 0 case never
    arrives here).
    """
    import mpmath as mp

    with mp.workdps(30):
        a = mp.mpf(alpha)
        xx = mp.mpf(x) % 1
        if xx == 0:
            return zeta(alpha)
        val = (
            (2 * mp.pi) ** a
            / (4 * mp.gamma(a) * mp.cos(mp.pi * a / 2))
            * (mp.zeta(1 - a, xx) + mp.zeta(1 - a, 1 - xx))
        )
        return float(val)


def cosine_series(alpha: float, x: float) -> float:
    """sum_{h>=1} cos(2 pi h x) / h^alpha, certified to COSINE_SERIES_TOL.

    Even integer alpha uses the exact Bernoulli-polynomial closed form; other
    alpha > 1 use direct summation when a monotone tail bound certifies a
    feasible truncation point, else the Hurwitz-zeta reflection.
    """
    if alpha <= 1.0:
        raise DomainError(f"cosine series requires alpha > 1; got {alpha}")
    x = float(x) % 1.0
    if alpha == int(alpha) and int(alpha) % 2 == 0:
        return float(_cosine_series_bernoulli(int(alpha), np.asarray(x)))
    if x == 0.0:
        return zeta(alpha)
    n_terms = _cosine_series_direct_terms(alpha, x)
    if n_terms is None:
        return _cosine_series_reflection(alpha, x)
    h = np.arange(1, n_terms + 1, dtype=float)
    return float(np.sum(np.cos(2 * math.pi * h * x) / h**alpha))


def cosine_series_grid(alpha: float, n: int) -> np.ndarray:
    """Cosine series evaluated at all grid points k/n, k = 0..n-1.

    Grouping the series by h mod n turns it into a length-n cosine transform
    of Hurwitz zeta values, exact for every alpha > 1:

        S(k/n) = n^-alpha * [zeta(alpha) + sum_rho zeta(alpha, rho/n) cos(2 pi rho k / n)].

    Even integer alpha instead evaluates the Bernoulli closed form directly.
    """
    if alpha <= 1.0:
        raise DomainError(f"cosine series requires alpha > 1; got {alpha}")
    if alpha == int(alpha) and int(alpha) % 2 == 0:
        return _cosine_series_bernoulli(int(alpha), np.arange(n) / n)
    rho = np.arange(1, n, dtype=float)
    hz = _hurwitz_zeta(alpha, rho / n)
    spectrum = np.zeros(n)
    spectrum[0] = zeta(alpha)
    spectrum[1:] = hz
    # Real cosine transform: S_k = sum_rho spectrum[rho] * cos(2 pi rho k / n).
    vals = np.fft.ifft(spectrum).real * n
    return vals * n ** (-alpha)


def kernel_eval(space: SpaceDescriptor, x: Sequence[float], y: Sequence[float]) -> float:
    """Reproducing kernel K(x, y); depends only on the fractional parts of x - y."""
    space.require_kernel()
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (space.d,) or y.shape != (space.d,):
        raise DomainError("points must have shape (d,)")
    delta = np.mod(x - y, 1.0)
    g = space.gammas()
    out = 1.0
    for j in range(space.d):
        out *= 1.0 + 2.0 * g[j] * cosine_series(space.alpha, delta[j])
    return out


def kernel_diag(space: SpaceDescriptor) -> float:
    """K(y, y) = prod_j (1 + 2 gamma_j zeta(alpha)); independent of y."""
    space.require_kernel()
    z = zeta(space.alpha)
    return float(np.prod(1.0 + 2.0 * space.gammas() * z))


def sup_norm_bound(space: SpaceDescriptor, sharp: bool = False) -> float:
    """Upper bound on |f(y)| over unit-norm f.

    The default exp(zeta(alpha) * sum_j gamma_j) is convenient because it is
    monotone in the weight sum; ``sharp=True`` returns the tight value
    sqrt(K(y, y)).
    """
    space.require_kernel()
    if sharp:
        return math.sqrt(kernel_diag(space))
    return math.exp(zeta(space.alpha) * float(np.sum(space.gammas())))


def algebra_constant(space: SpaceDescriptor) -> float:
    """Constant C with ||f g|| <= C ||f|| ||g|| for the pointwise product."""
    space.require_kernel()
    z = zeta(space.alpha)
    prod = float(np.prod(np.sqrt(1.0 + 2.0 * space.gammas() * z)))
    return 2.0 ** (space.d * max(1.0, space.alpha / 2.0)) * prod


def sum_exponent(weights: WeightSchedule) -> float:
    """Infimum of s with sum_j gamma_j^s finite, for the polynomial family.

    Equals 1/kappa for gamma_j = c j^-kappa with kappa > 0, +inf for constant
    weights.  Finite explicit lists have no asymptotic tail, so the notion is
    rejected for them.
    """
    if weights.kind != "polynomial":
        raise KoroboxError("sum-exponent undefined for finite schedules")
    if weights.decay == 0.0:
        return math.inf
    return 1.0 / weights.decay


def shifted_norm_bound(space: SpaceDescriptor, h: Sequence[int]) -> float:
    """Bound on the norm ratio under modulation by exp(-2 pi i h . x).

    Modulating a function shifts its frequencies by h; the norm can grow by
    at most sqrt(r(h) * prod_j max(1, gamma_j 2^alpha)).
    """
    g = space.gammas()
    prod = float(np.prod(np.maximum(1.0, g * 2.0**space.alpha)))
    return math.sqrt(weight_product(space, h) * prod)
