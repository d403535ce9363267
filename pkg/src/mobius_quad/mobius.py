"""Change of variables between the torus angle and the real line.

``x = -gamma * cot(theta / 2)`` maps ``(0, 2*pi)`` increasingly onto the real
line.  All functions accept scalars or numpy arrays.

Angles above ``pi`` are reflected to ``TWO_PI - theta`` before the half-angle
is formed, which makes ``forward(TWO_PI - t) == -forward(t)`` hold bit for bit
whenever ``TWO_PI - t`` is exactly representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * math.pi


def _out(v):
    return v if np.ndim(v) else float(v)


@dataclass(frozen=True)
class MobiusMap:
    gamma: float = 1.0

    def __post_init__(self):
        g = float(self.gamma)
        if not (math.isfinite(g) and g > 0):
            raise ValueError(f"gamma must be finite and positive, got {self.gamma!r}")
        object.__setattr__(self, "gamma", g)

    def _half_angle(self, theta):
        t = np.asarray(theta, dtype=float)
        if not np.all((t > 0.0) & (t < TWO_PI)):
            bad = t.reshape(-1)[~((t > 0.0) & (t < TWO_PI)).reshape(-1)][0]
            raise DomainError(f"theta must lie in the open interval (0, 2*pi), got {bad!r}")
        upper = t > math.pi
        half = 0.5 * np.where(upper, TWO_PI - t, t)
        return half, upper

    def forward(self, theta):
        half, upper = self._half_angle(theta)
        cot = np.cos(half) / np.sin(half)
        return _out(np.where(upper, self.gamma * cot, -self.gamma * cot))

    def forward_derivative(self, theta):
        half, _ = self._half_angle(theta)
        s = np.sin(half)
        return _out(self.gamma / (2.0 * s * s))

    def inverse(self, x):
        """``2 * arccot(-x / gamma)`` with arccot in ``(0, pi)``."""
        xa = np.asarray(x, dtype=float)
        lower = 2.0 * np.arctan2(self.gamma, np.abs(xa))
        return _out(np.where(xa > 0, TWO_PI - lower, np.where(xa < 0, lower, math.pi)))

    def inverse_derivative(self, x):
        xa = np.asarray(x, dtype=float)
        return _out(2.0 * self.gamma / (self.gamma**2 + xa * xa))
