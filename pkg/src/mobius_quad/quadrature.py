"""Möbius-transformed trapezoidal rule.

The integral of ``f * rho`` over the real line is pulled back to the torus by
``x = phi(theta)`` and approximated with the ``n``-point trapezoidal rule at
the shifted angles ``theta_j = 2*pi*j/n - pi/n``.  The nodes and weights do
not depend on ``f``, so a rule is built once and reused:

    x_j = phi(theta_j),    w_j = (2*pi/n) * rho(x_j) * phi'(theta_j)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NonFiniteSample, NonFiniteWeight, SizeOutOfRange, WeightOverflow
from .mobius import TWO_PI, MobiusMap
from .weightfn import PolynomialWeight, eval_weight

MAX_NODES = 2**26
_SNAP = 2.0**50


@dataclass(frozen=True)
class Integrand:
    """A real function of one real variable.

    ``vectorized`` callables receive a whole numpy array of nodes; others are
    called once per node with a Python float.
    """

    func: Callable
    vectorized: bool = False
    name: str = "f"

    def __call__(self, x):
        xa = np.asarray(x, dtype=float)
        if self.vectorized:
            out = np.broadcast_to(np.asarray(self.func(xa), dtype=float), xa.shape)
        else:
            out = np.fromiter((self.func(float(v)) for v in xa.reshape(-1)), dtype=float,
                              count=xa.size).reshape(xa.shape)
        return out if out.ndim else float(out)


def as_integrand(f) -> Integrand:
    if isinstance(f, Integrand):
        return f
    if not callable(f):
        raise TypeError(f"integrand must be callable, got {type(f).__name__}")
    return Integrand(f, vectorized=False, name=getattr(f, "__name__", "f"))


@dataclass(frozen=True, eq=False)
class NodeSet:
    n: int
    thetas: np.ndarray


def make_nodes(n: int) -> NodeSet:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or not 1 <= n <= MAX_NODES:
        raise SizeOutOfRange(f"n must be an integer in [1, 2**26], got {n!r}")
    n = int(n)
    # lower half snapped to multiples of 2^-50 (the spacing of doubles near
    # 2*pi), so TWO_PI - theta is exact and the upper half mirrors it bit for bit
    k = 2 * np.arange(1, n // 2 + 1, dtype=float) - 1
    lower = np.round(math.pi * k / n * _SNAP) / _SNAP
    middle = [math.pi] if n % 2 else []
    thetas = np.concatenate([lower, middle, TWO_PI - lower[::-1]])
    thetas.setflags(write=False)
    return NodeSet(n, thetas)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    nodes_x: np.ndarray
    weights_w: np.ndarray
    weight: PolynomialWeight
    map: MobiusMap
    nodes: NodeSet

    @property
    def n(self) -> int:
        return self.nodes.n

    @property
    def thetas(self) -> np.ndarray:
        return self.nodes.thetas


def make_rule(weight: PolynomialWeight, map: MobiusMap, n: int) -> QuadratureRule:
    nodes = make_nodes(n)
    n = nodes.n
    # same evaluation path as transform_integrand, so the rule is literally the
    # trapezoidal sum of the transformed integrand
    x = np.array(map.forward(nodes.thetas))
    dphi = map.forward_derivative(nodes.thetas)
    try:
        rho = eval_weight(weight, x)
    except WeightOverflow as exc:
        raise NonFiniteWeight(str(exc)) from exc
    with np.errstate(over="ignore", invalid="ignore"):
        w = (2.0 * math.pi / n) * (rho * dphi)
    if not np.all(np.isfinite(w)):
        raise NonFiniteWeight(f"rule weight overflows for n={n}, upsilon={weight.upsilon}")
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadratureRule(x, w, weight, map, nodes)


def integrate(rule: QuadratureRule, f) -> float:
    """``sum_j w_j f(x_j)``, accumulated with an exactly rounded sum."""
    f = as_integrand(f)
    values = np.asarray(f(rule.nodes_x), dtype=float)
    finite = np.isfinite(values)
    if not finite.all():
        j = int(np.argmin(finite))
        raise NonFiniteSample(float(rule.nodes_x[j]), float(values[j]))
    return math.fsum(rule.weights_w * values)


def transform_integrand(weight: PolynomialWeight, map: MobiusMap, f) -> Callable:
    """Return ``g(theta) = f(phi(theta)) * rho(phi(theta)) * phi'(theta)``."""
    f = as_integrand(f)

    def g(theta):
        x = map.forward(theta)
        out = np.asarray(f(x)) * (np.asarray(eval_weight(weight, x))
                                  * np.asarray(map.forward_derivative(theta)))
        return out if np.ndim(out) else float(out)

    return g
