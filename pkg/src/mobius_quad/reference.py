"""Ground-truth values that do not go through the Möbius rule.

Two routes are provided: closed-form moments of ``omega_upsilon`` (Beta
functions through log-gamma) and a double-exponential quadrature over the real
line.  The latter is cross-checked against a high-order Möbius rule before a
result is handed out.
"""

from __future__ import annotations

import csv
import enum
import math
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import CrossCheckFailure, NoConvergence, NotIntegrable
from .mobius import MobiusMap
from .quadrature import Integrand, as_integrand, integrate, make_rule
from .weightfn import PolynomialWeight, eval_weight

FIXTURE_ENV = "MOBIUS_QUAD_FIXTURES"
FIXTURE_FIELDS = ("name", "upsilon", "gamma", "value", "est_error", "method")

CROSS_CHECK_N = 2**16
MIN_TOL = 1e-12


class Method(str, enum.Enum):
    CLOSED_FORM_MOMENT = "closed_form_moment"
    TANH_SINH = "tanh_sinh"
    MOBIUS_HIGHN_CROSSCHECK = "mobius_highn_crosscheck"
    # arbitrary-precision oscillatory quadrature, used only to build fixtures
    HIGH_PRECISION = "high_precision"


@dataclass(frozen=True)
class ReferenceResult:
    value: float
    est_error: float
    method: Method
    evaluations: int = 0

    def __post_init__(self):
        if not self.est_error >= 0:
            raise ValueError("est_error must be nonnegative")
        object.__setattr__(self, "method", Method(self.method))


def log_beta(a: float, b: float) -> float:
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def beta(a: float, b: float) -> float:
    """Euler Beta function for positive arguments."""
    if a + b < 170:
        # math.gamma is accurate to a few ulp here; exp(lgamma) loses more
        return math.gamma(a) * math.gamma(b) / math.gamma(a + b)
    return math.exp(log_beta(a, b))


def exact_moment(m: int, upsilon: float) -> float:
    """Integral of ``x**m * (1 + x**2)**(-upsilon/2)`` over the real line.

    Equals ``B((m+1)/2, (upsilon-m-1)/2)`` for even ``m`` and zero for odd
    ``m``; requires ``upsilon > m + 1``.
    """
    if m < 0 or int(m) != m:
        raise ValueError(f"moment order must be a nonnegative integer, got {m!r}")
    if not upsilon > m + 1:
        raise NotIntegrable(f"x^{m} * omega_{upsilon} is not integrable (need upsilon > {m + 1})")
    if m % 2:
        return 0.0
    return beta((m + 1) / 2, (upsilon - m - 1) / 2)


def moment_reference(m: int, upsilon: float) -> ReferenceResult:
    value = exact_moment(m, upsilon)
    return ReferenceResult(value, 0.0, Method.CLOSED_FORM_MOMENT, 0)


def _half_line_nodes(level: int, t_max: float):
    """Abscissae ``t`` added at ``level`` (all of them at level 0)."""
    h = 2.0**-level
    kmax = int(t_max / h)
    k = np.arange(-kmax, kmax + 1)
    if level:
        k = k[k % 2 != 0]
    return k * h


def tanh_sinh(func, tol: float = 1e-10, max_level: int = 12, t_max: float = 4.0,
              center: float = 0.0, min_level: int = 3):
    """Double-exponential quadrature of ``func`` over the whole real line.

    The line is split at ``center`` and each half is mapped with
    ``u = exp((pi/2) sinh t)``, so a kink at ``center`` sits at an endpoint
    instead of on a node.  Step ``h = 2**-level`` is halved until successive
    levels differ by less than ``tol``.

    Returns ``(value, last_difference, evaluations, converged)``.
    """
    f = as_integrand(func)
    total = 0.0
    prev = None
    evals = 0
    diff = math.inf
    for level in range(max_level + 1):
        t = _half_line_nodes(level, t_max)
        s = 0.5 * math.pi * np.sinh(t)
        u = np.exp(s)
        du = 0.5 * math.pi * np.cosh(t) * u
        vals = (np.asarray(f(center + u)) + np.asarray(f(center - u))) * du
        evals += 2 * t.size
        vals = np.where(np.isfinite(vals), vals, np.nan)
        if np.isnan(vals).any():
            raise NoConvergence("integrand is not finite on the double-exponential grid")
        h = 2.0**-level
        part = h * math.fsum(vals)
        total = part if level == 0 else 0.5 * total + part
        if prev is not None:
            diff = abs(total - prev)
            if level >= min_level and diff < tol:
                return total, diff, evals, True
        prev = total
    return total, diff, evals, False


def reference_integral(f, weight: PolynomialWeight, tol: float = 1e-10, gamma: float = 1.0,
                       cross_check: bool = True, max_level: int = 12) -> ReferenceResult:
    """Integral of ``f * weight`` over the real line, independent of the Möbius rule.

    ``f * weight`` must be absolutely integrable; that is the caller's call.
    """
    if not tol >= MIN_TOL:
        raise ValueError(f"tol must be at least {MIN_TOL}, got {tol!r}")
    f = as_integrand(f)
    if f.vectorized:
        product = Integrand(lambda x: f.func(x) * eval_weight(weight, x), vectorized=True)
    else:
        product = Integrand(lambda x: f.func(x) * eval_weight(weight, x))
    value, diff, evals, ok = tanh_sinh(product, tol=tol, max_level=max_level)
    if not ok:
        raise NoConvergence(
            f"double-exponential levels exhausted (last difference {diff:.3e} > tol {tol:.1e})")
    est = diff
    if cross_check:
        rule = make_rule(weight, MobiusMap(gamma), CROSS_CHECK_N)
        other = integrate(rule, f)
        evals += CROSS_CHECK_N
        disc = abs(other - value)
        if disc > 100 * tol:
            raise CrossCheckFailure(
                f"double-exponential value {value!r} and Möbius n={CROSS_CHECK_N} value {other!r} "
                f"differ by {disc:.3e} > {100 * tol:.1e}")
        est = max(est, disc)
    return ReferenceResult(value, est, Method.TANH_SINH, evals)


# fixtures ---------------------------------------------------------------

def default_fixture_path() -> Path:
    env = os.environ.get(FIXTURE_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("mobius_quad") / "data" / "reference_fixtures.csv"))


def load_fixtures(path: str | os.PathLike | None = None) -> dict[tuple[str, float, float], ReferenceResult]:
    path = Path(path) if path is not None else default_fixture_path()
    out = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != FIXTURE_FIELDS:
            raise ValueError(f"{path}: expected header {','.join(FIXTURE_FIELDS)}")
        for row in reader:
            key = (row["name"], float(row["upsilon"]), float(row["gamma"]))
            out[key] = ReferenceResult(float(row["value"]), float(row["est_error"]),
                                       Method(row["method"]))
    return out


def write_fixtures(rows, path: str | os.PathLike) -> None:
    """``rows``: iterable of ``(name, upsilon, gamma, ReferenceResult)``."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FIXTURE_FIELDS)
        for name, upsilon, gamma, res in rows:
            w.writerow([name, repr(float(upsilon)), repr(float(gamma)), f"{res.value:.17g}",
                        f"{res.est_error:.17g}", res.method.value])


def lookup_reference(name: str, upsilon: float, gamma: float = 1.0,
                     path: str | os.PathLike | None = None) -> ReferenceResult | None:
    try:
        table = load_fixtures(path)
    except FileNotFoundError:
        return None
    return table.get((name, float(upsilon), float(gamma)))
