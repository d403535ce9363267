"""Polynomial weights ``rho(x) = q(x)**(-upsilon / deg q)`` and their derivatives.

``q`` is a positive polynomial of even degree ``2m``; the canonical member of
the family is ``omega_upsilon(x) = (1 + x**2)**(-upsilon/2)``.  Weights are
evaluated in log space so that large ``|x|`` with negative ``upsilon`` does
not overflow through ``q(x)`` itself.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import (
    DegenerateConstant,
    NonPositiveLeading,
    OddDegree,
    OrderTooHigh,
    RealRootDetected,
    WeightOverflow,
    WeightSpecError,
)

MAX_DERIVATIVE_ORDER = 12
ROOT_IMAG_TOL = 1e-9

OMEGA_COEFFS = (1.0, 0.0, 1.0)


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial, ``coeffs[k]`` multiplies ``x**k``.

    Trailing zeros are stripped on construction.  The zero polynomial is kept
    as ``(0.0,)`` (it shows up when a weight's derivatives vanish identically).
    """

    coeffs: tuple[float, ...]

    def __post_init__(self):
        cs = [float(c) for c in self.coeffs]
        if not cs:
            raise ValueError("polynomial needs at least one coefficient")
        if not all(math.isfinite(c) for c in cs):
            raise ValueError("polynomial coefficients must be finite")
        while len(cs) > 1 and cs[-1] == 0.0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> float:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return self.coeffs == (0.0,)

    def __call__(self, x):
        # Horner; returns coeffs[0] exactly at x = 0
        acc = np.zeros_like(np.asarray(x, dtype=float)) + self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc if np.ndim(acc) else float(acc)

    def derivative(self) -> Polynomial:
        if self.degree == 0:
            return Polynomial((0.0,))
        return Polynomial(tuple(P.polyder(np.array(self.coeffs))))

    def __add__(self, other: Polynomial) -> Polynomial:
        return Polynomial(tuple(P.polyadd(self.coeffs, other.coeffs)))

    def __sub__(self, other: Polynomial) -> Polynomial:
        return Polynomial(tuple(P.polysub(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial(tuple(P.polymul(self.coeffs, other.coeffs)))
        return Polynomial(tuple(float(other) * c for c in self.coeffs))

    __rmul__ = __mul__

    def roots(self) -> np.ndarray:
        """Roots via eigenvalues of the companion matrix."""
        return P.polyroots(np.array(self.coeffs))

    def log_eval(self, x):
        """``log q(x)`` for a polynomial that is positive on the real line.

        For ``|x| > 1`` the leading power is factored out,
        ``log q(x) = d*log|x| + log(sum_k c_k x**(k-d))``, which stays finite
        where ``q(x)`` itself would overflow.
        """
        xa = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            inner = np.log(self(np.where(np.abs(xa) <= 1.0, xa, 0.0)))
            safe = np.where(np.abs(xa) > 1.0, xa, 2.0)
            y = 1.0 / safe
            acc = np.zeros_like(y) + self.coeffs[0]
            for c in self.coeffs[1:]:
                acc = acc * y + c
            outer = self.degree * np.log(np.abs(safe)) + np.log(acc)
        out = np.where(np.abs(xa) <= 1.0, inner, outer)
        return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class PolynomialWeight:
    """``rho(x) = q(x)**(-upsilon / (2m))`` with ``deg q = 2m``.

    Validation happens on construction: even degree at least 2, positive
    leading coefficient and no real roots.
    """

    q: Polynomial
    upsilon: float
    half_degree: int = field(init=False)

    def __post_init__(self):
        q = self.q if isinstance(self.q, Polynomial) else Polynomial(tuple(self.q))
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "upsilon", float(self.upsilon))
        if not math.isfinite(self.upsilon):
            raise ValueError("upsilon must be finite")
        if q.degree == 0:
            raise DegenerateConstant("q must have positive even degree, got a constant")
        if q.degree % 2:
            raise OddDegree(f"q must have even degree, got {q.degree}")
        if q.leading <= 0:
            raise NonPositiveLeading(f"leading coefficient of q must be positive, got {q.leading}")
        for r in q.roots():
            if abs(r.imag) <= ROOT_IMAG_TOL * (1.0 + abs(r.real)):
                raise RealRootDetected(f"q vanishes on the real line near x={r.real!r}")
        object.__setattr__(self, "half_degree", q.degree // 2)

    @property
    def exponent(self) -> float:
        """Power ``upsilon / 2m`` applied to ``1/q``."""
        return self.upsilon / (2 * self.half_degree)

    @property
    def is_omega(self) -> bool:
        return self.q.coeffs == OMEGA_COEFFS

    def log_q(self, x):
        if self.is_omega:
            xa = np.asarray(x, dtype=float)
            with np.errstate(over="ignore", divide="ignore"):
                out = np.where(np.abs(xa) < 1e150, np.log1p(xa * xa), 2.0 * np.log(np.abs(xa)))
            return out if np.ndim(out) else float(out)
        return self.q.log_eval(x)

    def __call__(self, x):
        return eval_weight(self, x)


def make_weight(q: Polynomial | Sequence[float], upsilon: float) -> PolynomialWeight:
    if not isinstance(q, Polynomial):
        q = Polynomial(tuple(q))
    return PolynomialWeight(q, upsilon)


def make_omega(upsilon: float) -> PolynomialWeight:
    return make_weight(Polynomial(OMEGA_COEFFS), upsilon)


def eval_weight(w: PolynomialWeight, x):
    """Evaluate the weight; works elementwise on arrays."""
    with np.errstate(over="ignore"):
        val = np.exp(-w.exponent * np.asarray(w.log_q(x)))
    if not np.all(np.isfinite(val)):
        bad = np.asarray(x, dtype=float).reshape(-1)[~np.isfinite(np.reshape(val, -1))][0]
        raise WeightOverflow(f"weight overflows at x={bad!r} for upsilon={w.upsilon}")
    return val if np.ndim(val) else float(val)


@dataclass(frozen=True)
class WeightDerivativeState:
    """``rho^(tau) = numerator(x) * q(x)**(-exponent_shift)``."""

    numerator: Polynomial
    tau: int
    exponent_shift: float


def derivative_state(w: PolynomialWeight, tau: int) -> WeightDerivativeState:
    if tau < 0:
        raise ValueError("derivative order must be nonnegative")
    if tau > MAX_DERIVATIVE_ORDER:
        raise OrderTooHigh(f"derivative order {tau} exceeds cap {MAX_DERIVATIVE_ORDER}")
    q = w.q
    dq = q.derivative()
    r = Polynomial((1.0,))
    s = w.exponent
    for k in range(tau):
        # r_{k+1} = r_k' q - (upsilon/2m + k) r_k q'
        r = r.derivative() * q - (s + k) * (r * dq)
    return WeightDerivativeState(r, tau, s + tau)


def weight_derivative(w: PolynomialWeight, tau: int) -> Callable:
    """Return an evaluator for the ``tau``-th derivative of ``w``."""
    state = derivative_state(w, tau)
    if tau == 0:
        return lambda x: eval_weight(w, x)

    def deriv(x):
        with np.errstate(over="ignore", under="ignore"):
            out = state.numerator(x) * np.exp(-state.exponent_shift * np.asarray(w.log_q(x)))
        return out if np.ndim(out) else float(out)

    return deriv


def envelope_ratio(w: PolynomialWeight, tau: int, xs) -> float:
    """``max |rho^(tau)(x)| / omega_{upsilon+tau}(x)`` over the sample ``xs``."""
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        raise ValueError("xs must be non-empty")
    if tau == 0 and w.is_omega:
        return 1.0
    state = derivative_state(w, tau)
    num = np.abs(state.numerator(xs))
    with np.errstate(divide="ignore"):
        log_ratio = (
            np.log(num)
            - state.exponent_shift * np.asarray(w.log_q(xs))
            + 0.5 * (w.upsilon + tau) * np.asarray(make_omega(1.0).log_q(xs))
        )
    return float(np.max(np.exp(log_ratio)))


# textual format: omega:<v>  |  poly:<c0>,<c1>,...;upsilon=<v>

_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_OMEGA_RE = re.compile(rf"omega:({_NUM})")
_POLY_RE = re.compile(rf"poly:({_NUM}(?:,{_NUM})*);upsilon=({_NUM})")


def parse_weight_spec(text: str) -> PolynomialWeight:
    m = _OMEGA_RE.fullmatch(text)
    if m:
        return make_omega(float(m.group(1)))
    m = _POLY_RE.fullmatch(text)
    if m:
        coeffs = [float(c) for c in m.group(1).split(",")]
        return make_weight(coeffs, float(m.group(2)))
    raise WeightSpecError(
        f"bad weight spec {text!r}; expected 'omega:<upsilon>' or 'poly:<c0>,...,<c2m>;upsilon=<v>'"
    )


def format_weight_spec(w: PolynomialWeight) -> str:
    if w.is_omega:
        return f"omega:{w.upsilon!r}"
    coeffs = ",".join(repr(c) for c in w.q.coeffs)
    return f"poly:{coeffs};upsilon={w.upsilon!r}"
