"""n-sweeps, empirical rate fits and the predicted rates.

Fitting procedure (``fit_rate``):

1. drop points whose error is below ``1e3 * eps * (1 + |I|)``; fewer than four
   survivors means the study is ``floor_dominated``;
2. least-squares slope of ``log(err)`` against ``log(n)`` over the final 60%
   of the survivors (at least four points) gives the algebraic rate;
3. over all survivors, compare the residuals of that log-log fit with a
   semilog fit ``log(err)`` against ``n``; the regime is ``exponential`` when
   the semilog residual is below a quarter of the log-log one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

from .errors import TooFewPoints
from .mobius import MobiusMap
from .quadrature import as_integrand, integrate, make_rule
from .reference import ReferenceResult
from .weightfn import PolynomialWeight

FLOOR_FACTOR = 1e3
FIT_WINDOW = 0.6
MIN_POINTS = 4
EXPONENTIAL_MARGIN = 0.25


class Regime(str, enum.Enum):
    ALGEBRAIC = "algebraic"
    EXPONENTIAL = "exponential"
    FLOOR_DOMINATED = "floor_dominated"


@dataclass(frozen=True)
class SweepPoint:
    n: int
    approx: float
    abs_error: float


@dataclass(frozen=True)
class ConvergenceStudy:
    points: tuple[SweepPoint, ...]
    reference: ReferenceResult
    fitted_rate: float | None = None
    regime: Regime | None = None
    predicted_rate: float | None = None
    # decay constant a of err ~ C exp(-a n), reported for exponential regimes
    exponential_rate: float | None = None
    loglog_residual: float | None = None
    semilog_residual: float | None = None

    @property
    def ns(self) -> list[int]:
        return [p.n for p in self.points]

    @property
    def errors(self) -> list[float]:
        return [p.abs_error for p in self.points]

    def floor(self) -> float:
        return round_off_floor(self.reference.value)


def round_off_floor(reference_value: float) -> float:
    return FLOOR_FACTOR * np.finfo(float).eps * (1.0 + abs(reference_value))


def run_sweep(f, weight: PolynomialWeight, map: MobiusMap, ns: Sequence[int],
              reference: ReferenceResult, predicted_rate: float | None = None,
              fit: bool = True) -> ConvergenceStudy:
    """Apply the rule at each ``n``; fit a rate when there are enough points for one."""
    ns = [int(n) for n in ns]
    if not ns:
        raise ValueError("ns is empty")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("ns must be strictly increasing")
    f = as_integrand(f)
    points = []
    for n in ns:
        q = integrate(make_rule(weight, map, n), f)
        points.append(SweepPoint(n, q, abs(q - reference.value)))
    study = ConvergenceStudy(tuple(points), reference, predicted_rate=predicted_rate)
    return fit_rate(study) if fit and len(points) >= MIN_POINTS else study


def _lstsq(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Return (slope, residual sum of squares) of the line fit y ~ x."""
    A = np.column_stack([x, np.ones_like(x)])
    coef = np.linalg.lstsq(A, y, rcond=None)[0]
    res = y - A @ coef
    return float(coef[0]), float(res @ res)


def fit_rate(study: ConvergenceStudy) -> ConvergenceStudy:
    if len(study.points) < MIN_POINTS:
        raise TooFewPoints(f"need at least {MIN_POINTS} points, got {len(study.points)}")
    floor = study.floor()
    kept = [p for p in study.points if p.abs_error >= floor]
    if len(kept) < MIN_POINTS:
        return replace(study, fitted_rate=None, regime=Regime.FLOOR_DOMINATED,
                       exponential_rate=None, loglog_residual=None, semilog_residual=None)
    n = np.array([p.n for p in kept], dtype=float)
    le = np.log(np.array([p.abs_error for p in kept]))

    k = max(MIN_POINTS, math.ceil(FIT_WINDOW * len(kept)))
    slope, _ = _lstsq(np.log(n[-k:]), le[-k:])

    _, loglog_res = _lstsq(np.log(n), le)
    semi_slope, semilog_res = _lstsq(n, le)
    exponential = semilog_res < EXPONENTIAL_MARGIN * loglog_res
    return replace(
        study,
        fitted_rate=-slope,
        regime=Regime.EXPONENTIAL if exponential else Regime.ALGEBRAIC,
        exponential_rate=-semi_slope if exponential else None,
        loglog_residual=loglog_res,
        semilog_residual=semilog_res,
    )


# predicted rates ---------------------------------------------------------

@dataclass(frozen=True)
class SmoothnessSpec:
    """Where the integrand lives: ``f`` in ``W^{alpha,p}`` with weight index ``kappa``.

    The admissible weight index may depend on the smoothness order through
    ``kappa + kappa_slope * alpha`` (variable-weight spaces).  ``strict`` marks
    open thresholds (``alpha < ...``, ``kappa > ...``).  ``p = 1`` stands for
    the limit ``p -> 1+``.
    """

    alpha: float
    p: float
    kappa: float
    variable_weight: bool = False
    kappa_slope: float = 0.0
    strict: bool = False

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not self.p >= 1:
            raise ValueError("p must be at least 1")


def rate_supremum(upsilon: float, spec: SmoothnessSpec) -> float:
    """Supremum of the rates allowed by the weight-index condition and ``spec.alpha``.

    The integrand must lie in the space with weight index
    ``p*(upsilon - 2 - 2*alpha) + 2``; membership holds for indices at least
    ``kappa + kappa_slope*alpha``.
    """
    p = spec.p
    slack = p * (upsilon - 2) + 2 - spec.kappa
    denom = 2 * p + spec.kappa_slope
    if denom > 0:
        bound = slack / denom
    else:
        bound = math.inf if slack > 0 else -math.inf
    return min(bound, spec.alpha)


def predict_rate_theorem(upsilon: float, spec: SmoothnessSpec) -> float | None:
    """Largest guaranteed rate ``alpha`` (error ~ n^-alpha), or None.

    Fixed-weight spaces admit any real rate up to the supremum.  Variable-weight
    spaces only come with integer orders, so the supremum is rounded down
    (strictly below it when the thresholds are open).
    """
    sup = rate_supremum(upsilon, spec)
    if spec.variable_weight and math.isfinite(sup):
        alpha = math.ceil(sup - 1e-12) - 1 if spec.strict else math.floor(sup + 1e-12)
    else:
        alpha = sup
    return alpha if alpha > 0 else None


def preset_smoothness(preset: str, p: float = 1.0) -> SmoothnessSpec:
    if preset == "f1":
        # |x| lies in W^{s,p}_loc iff s < 1 + 1/p; f1 in W_{omega_kappa} iff kappa > 1 + p
        return SmoothnessSpec(alpha=1 + 1 / p, p=p, kappa=1 + p, strict=True)
    if preset == "f2":
        # variable-weight membership iff kappa > 1 + p(1 - alpha)
        return SmoothnessSpec(alpha=math.inf, p=p, kappa=1 + p, variable_weight=True,
                              kappa_slope=-p, strict=True)
    raise ValueError(f"unknown preset {preset!r}")


class ExperimentPrediction(NamedTuple):
    rate: float | None
    exponential: bool


def _is_odd_integer(v: float) -> bool:
    return float(v).is_integer() and int(v) % 2 == 1


def predict_rate_experiment(preset: str, upsilon: float) -> ExperimentPrediction:
    """Expected behaviour of the two experiments in the limit ``p -> 1``.

    For ``f2`` with non-odd ``upsilon`` the returned rate ``upsilon - 2`` is the
    supremum of the integer orders that are guaranteed; it is an empirical
    target rather than a proven rate when ``upsilon`` is fractional.
    """
    if preset == "f2" and _is_odd_integer(upsilon) and upsilon >= 3:
        return ExperimentPrediction(None, True)
    sup = rate_supremum(upsilon, preset_smoothness(preset, 1.0))
    return ExperimentPrediction(sup if sup > 0 else None, False)
