"""Sparse trigonometric polynomials: the concrete function model of the package.

A function is a finite map from integer frequency vectors to complex Fourier
coefficients.  Restricting to finite supports makes every error that the
approximation algorithms incur exactly computable through Parseval, which is
what the test oracles rely on; richer elements of the space are represented
by their truncations.  Values are immutable after construction and all
operations are pure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatchError, DomainError
from .prng import FOURIER_STREAM, philox
from .space import SpaceDescriptor, weight_product

_ZERO_DROP = 0.0  # coefficients exactly equal to zero are never stored


@dataclass(frozen=True)
class EvaluationPoint:
    """A point of the unit cube with coordinates reduced modulo 1."""

    coords: tuple[float, ...]

    @staticmethod
    def of(values: Sequence[float]) -> "EvaluationPoint":
        return EvaluationPoint(tuple(float(v) % 1.0 for v in values))

    def __len__(self) -> int:
        return len(self.coords)


class FourierPolynomial:
    """Finite Fourier sum ``sum_h c_h exp(2 pi i h . x)`` on [0,1]^d."""

    __slots__ = ("d", "_coeffs")

    def __init__(self, d: int, coeffs: Mapping[Sequence[int], complex]):
        if d < 1:
            raise DomainError("dimension must be >= 1")
        store: dict[tuple[int, ...], complex] = {}
        for h, c in coeffs.items():
            key = tuple(int(v) for v in h)
            if len(key) != d:
                raise DimensionMismatchError(
                    f"frequency {key} has length {len(key)}, expected {d}"
                )
            c = complex(c)
            if c != _ZERO_DROP:
                store[key] = c
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "_coeffs", store)

    def __setattr__(self, name, value):
        raise AttributeError("FourierPolynomial is immutable")

    @property
    def coeffs(self) -> dict[tuple[int, ...], complex]:
        return dict(self._coeffs)

    def coefficient(self, h: Sequence[int]) -> complex:
        return self._coeffs.get(tuple(int(v) for v in h), 0j)

    def support(self) -> list[tuple[int, ...]]:
        return sorted(self._coeffs)

    def support_array(self) -> np.ndarray:
        keys = self.support()
        if not keys:
            return np.zeros((0, self.d), dtype=np.int64)
        return np.asarray(keys, dtype=np.int64)

    def coeff_array(self) -> np.ndarray:
        return np.asarray([self._coeffs[h] for h in self.support()], dtype=complex)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FourierPolynomial)
            and self.d == other.d
            and self._coeffs == other._coeffs
        )

    def __hash__(self):
        return hash((self.d, tuple(sorted(self._coeffs.items()))))

    def __repr__(self) -> str:
        return f"FourierPolynomial(d={self.d}, terms={len(self._coeffs)})"


def _require_same_d(f: FourierPolynomial, g: FourierPolynomial) -> None:
    if f.d != g.d:
        raise DimensionMismatchError(f"dimensions differ: {f.d} vs {g.d}")


def _as_point(f: FourierPolynomial, x) -> np.ndarray:
    if isinstance(x, EvaluationPoint):
        arr = np.asarray(x.coords, dtype=float)
    else:
        arr = np.mod(np.asarray(x, dtype=float), 1.0)
    if arr.shape != (f.d,):
        raise DimensionMismatchError(f"point has shape {arr.shape}, expected ({f.d},)")
    return arr


def evaluate(f: FourierPolynomial, x) -> complex:
    """Pointwise value at x (an EvaluationPoint or a length-d sequence)."""
    arr = _as_point(f, x)
    if not len(f):
        return 0j
    phases = f.support_array() @ arr
    return complex(np.sum(f.coeff_array() * np.exp(2j * math.pi * phases)))


def evaluate_batch(f: FourierPolynomial, points: np.ndarray) -> np.ndarray:
    """Values at an (n, d) array of points; the workhorse of the samplers."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != f.d:
        raise DimensionMismatchError(f"points must have shape (n, {f.d})")
    if not len(f):
        return np.zeros(points.shape[0], dtype=complex)
    phases = points @ f.support_array().T  # (n, terms)
    return np.exp(2j * math.pi * phases) @ f.coeff_array()


def korobov_norm(space: SpaceDescriptor, f: FourierPolynomial) -> float:
    """Weighted coefficient norm sqrt(sum_h r(h) |c_h|^2)."""
    if space.d != f.d:
        raise DimensionMismatchError(f"dimensions differ: {space.d} vs {f.d}")
    total = 0.0
    for h, c in f._coeffs.items():
        total += weight_product(space, h) * (c.real * c.real + c.imag * c.imag)
    return math.sqrt(total)


def l2_norm(f: FourierPolynomial) -> float:
    """Unweighted coefficient norm; equals the L2 norm by Parseval."""
    return math.sqrt(sum(abs(c) ** 2 for c in f._coeffs.values()))


def l2_distance(f: FourierPolynomial, g: FourierPolynomial) -> float:
    _require_same_d(f, g)
    keys = set(f._coeffs) | set(g._coeffs)
    return math.sqrt(
        sum(abs(f._coeffs.get(h, 0j) - g._coeffs.get(h, 0j)) ** 2 for h in keys)
    )


def multiply(f: FourierPolynomial, g: FourierPolynomial) -> FourierPolynomial:
    """Pointwise product, computed as the exact convolution of coefficients."""
    _require_same_d(f, g)
    out: dict[tuple[int, ...], complex] = {}
    for hf, cf in f._coeffs.items():
        for hg, cg in g._coeffs.items():
            key = tuple(a + b for a, b in zip(hf, hg))
            out[key] = out.get(key, 0j) + cf * cg
    return FourierPolynomial(f.d, out)


def conjugate(f: FourierPolynomial) -> FourierPolynomial:
    """Complex conjugate function: frequencies flip sign, coefficients conjugate."""
    return FourierPolynomial(
        f.d, {tuple(-v for v in h): c.conjugate() for h, c in f._coeffs.items()}
    )


def abs_squared(f: FourierPolynomial) -> FourierPolynomial:
    """|f|^2 as a polynomial; real-valued on evaluation."""
    return multiply(f, conjugate(f))


def modulate(f: FourierPolynomial, h: Sequence[int]) -> FourierPolynomial:
    """Multiply by exp(-2 pi i h . x): every stored frequency k moves to k - h."""
    shift = tuple(int(v) for v in h)
    if len(shift) != f.d:
        raise DimensionMismatchError(f"shift has length {len(shift)}, expected {f.d}")
    return FourierPolynomial(
        f.d, {tuple(k - s for k, s in zip(key, shift)): c for key, c in f._coeffs.items()}
    )


def integral(f: FourierPolynomial) -> complex:
    """Integral over the cube; the coefficient at frequency zero."""
    return f._coeffs.get((0,) * f.d, 0j)


def random_unit(
    space: SpaceDescriptor, support_size: int, max_freq: int, seed: int
) -> FourierPolynomial:
    """Random polynomial with unit weighted norm and the given sparsity.

    Draws ``support_size`` distinct frequencies from the box
    [-max_freq, max_freq]^d (zero included among the candidates), gives them
    standard complex Gaussian coefficients, and rescales exactly to norm 1.
    Deterministic for a fixed seed.
    """
    if support_size < 1:
        raise DomainError("support_size must be >= 1")
    side = 2 * max_freq + 1
    n_box = side**space.d
    if support_size > n_box:
        raise DomainError(
            f"support_size {support_size} exceeds the {n_box} frequencies available"
        )
    rng = philox(seed, FOURIER_STREAM)
    chosen: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    while len(chosen) < support_size:
        h = tuple(int(v) for v in rng.integers(-max_freq, max_freq + 1, size=space.d))
        if h not in seen:
            seen.add(h)
            chosen.append(h)
    raw = rng.standard_normal(support_size) + 1j * rng.standard_normal(support_size)
    poly = FourierPolynomial(space.d, dict(zip(chosen, raw)))
    norm = korobov_norm(space, poly)
    return FourierPolynomial(
        space.d, {h: c / norm for h, c in poly._coeffs.items()}
    )


def scale(f: FourierPolynomial, factor: complex) -> FourierPolynomial:
    return FourierPolynomial(f.d, {h: c * factor for h, c in f._coeffs.items()})


def add(f: FourierPolynomial, g: FourierPolynomial) -> FourierPolynomial:
    _require_same_d(f, g)
    out = dict(f._coeffs)
    for h, c in g._coeffs.items():
        out[h] = out.get(h, 0j) + c
    return FourierPolynomial(f.d, out)


def to_json_dict(f: FourierPolynomial) -> dict:
    """Wire format: {"d": d, "terms": [{"h": [...], "re": a, "im": b}]}."""
    return {
        "d": f.d,
        "terms": [
            {"h": list(h), "re": f._coeffs[h].real, "im": f._coeffs[h].imag}
            for h in f.support()
        ],
    }


def from_json_dict(obj: dict) -> FourierPolynomial:
    return FourierPolynomial(
        int(obj["d"]),
        {tuple(t["h"]): complex(t["re"], t["im"]) for t in obj["terms"]},
    )


def dumps(f: FourierPolynomial) -> str:
    return json.dumps(to_json_dict(f))


def loads(text: str) -> FourierPolynomial:
    return from_json_dict(json.loads(text))
