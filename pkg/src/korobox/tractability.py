"""Tractability verdicts, index-set growth studies, and cost comparisons.

The verdicts are analytic evaluations of the known strong-tractability and
tractability conditions on the polynomial weight family gamma_j = c j^-kappa:
everything reduces to the sum-exponent 1/kappa, the summability of the
weights (kappa > 1) and the log-density limit of their partial sums
(kappa = 1).  Enumeration never decides tractability here — it only
witnesses growth trends, which is what the growth study and the cost/speedup
tables report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, InfeasibleError
from .index_set import DEFAULT_CAP, count_index_set
from .quantum import cost_model_quantum
from .randomized import cost_model_randomized
from .space import SpaceDescriptor, WeightSchedule, sum_exponent, zeta

SETTINGS = ("worst_all", "worst_std", "randomized_std", "quantum_std")


@dataclass(frozen=True)
class TractabilityVerdict:
    setting: str
    strongly_tractable: bool
    tractable: bool
    exponent_low: float
    exponent_high: float
    notes: str

    def to_dict(self) -> dict:
        return {
            "setting": self.setting,
            "strongly_tractable": self.strongly_tractable,
            "tractable": self.tractable,
            "exponent_low": self.exponent_low,
            "exponent_high": self.exponent_high,
            "notes": self.notes,
        }


def _require_polynomial(space: SpaceDescriptor) -> tuple[float, float]:
    if space.weights.kind != "polynomial":
        raise DomainError("tractability verdicts are defined for polynomial weights")
    return space.weights.scale, space.weights.decay


def exponent_all(space: SpaceDescriptor) -> float:
    """Strong-tractability exponent 2 max(s, 1/alpha) under full information.

    Infinite when the weights do not decay (kappa = 0) or alpha = 0.
    """
    _, kappa = _require_polynomial(space)
    if space.alpha == 0.0 or kappa == 0.0:
        return math.inf
    return 2.0 * max(1.0 / kappa, 1.0 / space.alpha)


def verdict(space: SpaceDescriptor, setting: str) -> TractabilityVerdict:
    """Analytic classification of one information setting."""
    c, kappa = _require_polynomial(space)
    alpha = space.alpha
    s_gamma = sum_exponent(space.weights)
    p_star = exponent_all(space)
    weights_summable = kappa > 1.0
    # limsup of (sum_{j<=d} gamma_j) / ln d: zero for summable weights,
    # the scale c exactly at kappa = 1, infinite for slower decay.
    if kappa > 1.0:
        log_density = 0.0
    elif kappa == 1.0:
        log_density = c
    else:
        log_density = math.inf

    if setting == "worst_all":
        ok = alpha > 0.0 and math.isfinite(s_gamma)
        return TractabilityVerdict(
            setting=setting,
            strongly_tractable=ok,
            tractable=ok,
            exponent_low=p_star if ok else math.inf,
            exponent_high=p_star if ok else math.inf,
            notes="strong tractability and tractability coincide; "
            "requires alpha > 0 and a finite sum-exponent",
        )
    if setting == "worst_std":
        if alpha <= 1.0:
            return TractabilityVerdict(
                setting=setting,
                strongly_tractable=False,
                tractable=False,
                exponent_low=math.inf,
                exponent_high=math.inf,
                notes="standard information requires alpha > 1 "
                "(point evaluation unbounded otherwise)",
            )
        strong = weights_summable
        tract = math.isfinite(log_density)
        if strong:
            notes = "exponent between the full-information value and that plus 2"
        elif tract:
            notes = (
                "tractable but not strongly: d-exponent up to "
                f"{4.0 * zeta(alpha) * log_density:.6g} (4 zeta(alpha) a with a = "
                f"{log_density:.6g})"
            )
        else:
            notes = "weight partial sums grow faster than log d"
        return TractabilityVerdict(
            setting=setting,
            strongly_tractable=strong,
            tractable=tract,
            exponent_low=p_star if strong else math.inf,
            exponent_high=p_star + 2.0 if strong else math.inf,
            notes=notes,
        )
    if setting == "randomized_std":
        ok = alpha > 0.0 and math.isfinite(s_gamma)
        return TractabilityVerdict(
            setting=setting,
            strongly_tractable=ok,
            tractable=ok,
            exponent_low=p_star if ok else math.inf,
            exponent_high=p_star + 2.0 if ok else math.inf,
            notes="randomized sampling matches the full-information conditions "
            "for every alpha > 0",
        )
    if setting == "quantum_std":
        ok = alpha > 1.0 and math.isfinite(s_gamma)
        cost_exp = 1.0 + 1.5 * p_star if ok else math.inf
        return TractabilityVerdict(
            setting=setting,
            strongly_tractable=ok,
            tractable=ok,
            exponent_low=cost_exp,
            exponent_high=cost_exp,
            notes="upper bound only: total-cost exponent 1 + 3p/2 at alpha > 1",
        )
    raise DomainError(f"unknown setting {setting!r}; expected one of {SETTINGS}")


def verdict_table(space: SpaceDescriptor) -> list[TractabilityVerdict]:
    return [verdict(space, s) for s in SETTINGS]


def fit_loglog(inv_eps: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of log(values) against log(inv_eps)."""
    x = np.log(np.asarray(inv_eps, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    if x.size < 2:
        raise DomainError("need at least two grid points for a slope")
    return float(np.polyfit(x, y, 1)[0])


@dataclass(frozen=True)
class GrowthRow:
    epsilon: float
    d: int
    r_size: int | None  # None when the cap was exceeded
    fitted_slope: float | None
    flagged: bool


def growth_study(
    space: SpaceDescriptor,
    epsilon_grid: Sequence[float],
    d_grid: Sequence[int],
    cap: int = DEFAULT_CAP,
) -> list[GrowthRow]:
    """Index-set cardinalities over an (epsilon, d) grid with fitted slopes.

    Each dimension gets its own log-log slope in 1/epsilon; a row is flagged
    when the slope exceeds the strong-tractability exponent by more than 0.5.
    Cap overflows mark the row skipped instead of aborting the table.
    """
    if space.alpha == 0.0:
        raise DomainError("growth study requires alpha > 0")
    try:
        p_star = exponent_all(space)
    except DomainError:
        p_star = math.inf
    rows: list[GrowthRow] = []
    for d in d_grid:
        sub = SpaceDescriptor(d=d, alpha=space.alpha, weights=space.weights)
        counts: list[int | None] = []
        for eps in epsilon_grid:
            try:
                counts.append(count_index_set(sub, eps, cap=cap))
            except InfeasibleError:
                counts.append(None)
        good = [(e, n) for e, n in zip(epsilon_grid, counts) if n is not None]
        slope = (
            fit_loglog([1.0 / e for e, _ in good], [n for _, n in good])
            if len(good) >= 2
            else None
        )
        flagged = slope is not None and math.isfinite(p_star) and slope > p_star + 0.5
        for eps, n in zip(epsilon_grid, counts):
            rows.append(
                GrowthRow(epsilon=float(eps), d=int(d), r_size=n, fitted_slope=slope, flagged=flagged)
            )
    return rows


def growth_csv(rows: list[GrowthRow]) -> str:
    lines = ["epsilon,d,R_size,fitted_slope"]
    for r in rows:
        size = "skipped" if r.r_size is None else str(r.r_size)
        slope = "" if r.fitted_slope is None else format(r.fitted_slope, ".17g")
        lines.append(f"{format(r.epsilon, '.17g')},{r.d},{size},{slope}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SpeedupRow:
    epsilon: float
    cost_rand: float
    cost_quantum: float
    ratio: float


@dataclass(frozen=True)
class SpeedupTable:
    rows: list[SpeedupRow]
    fitted_ratio_exponent: float

    def to_csv(self) -> str:
        lines = ["epsilon,cost_rand,cost_quantum,ratio"]
        for r in self.rows:
            lines.append(
                ",".join(
                    format(v, ".17g")
                    for v in (r.epsilon, r.cost_rand, r.cost_quantum, r.ratio)
                )
            )
        return "\n".join(lines) + "\n"


def speedup_table(
    space: SpaceDescriptor,
    epsilon_grid: Sequence[float],
    c_of_d,
    cap: int = DEFAULT_CAP,
) -> SpeedupTable:
    """Randomized versus quantum total cost across an epsilon grid."""
    space.require_kernel()
    rows = []
    for eps in epsilon_grid:
        rand = cost_model_randomized(space, eps, c_of_d, cap=cap)
        quant = cost_model_quantum(space, eps, c_of_d, cap=cap)
        rows.append(
            SpeedupRow(
                epsilon=float(eps),
                cost_rand=rand.total,
                cost_quantum=quant.total_cost,
                ratio=rand.total / quant.total_cost,
            )
        )
    exponent = fit_loglog([1.0 / r.epsilon for r in rows], [r.ratio for r in rows])
    return SpeedupTable(rows=rows, fitted_ratio_exponent=exponent)
