"""The two experiment integrands, as native numpy functions and as source text.

The native versions use the same operation order as the parsed sources, so the
two agree to the last bit.
"""

import numpy as np

from .quadrature import Integrand

F1_SOURCE = "abs(x)*cos(x+1)"
F2_SOURCE = "pow(x^4+x^2+x+1,0.25)"


def f1(x):
    """``|x| cos(x + 1)``: Lipschitz with a kink at 0, oscillatory linear growth."""
    x = np.asarray(x, dtype=float)
    return np.abs(x) * np.cos(x + 1.0)


def f2(x):
    """``(x^4 + x^2 + x + 1)^(1/4)``: smooth, grows like ``|x|``."""
    x = np.asarray(x, dtype=float)
    return np.power(np.power(x, 4.0) + np.power(x, 2.0) + x + 1.0, 0.25)


PRESETS = {
    "f1": Integrand(f1, vectorized=True, name="f1"),
    "f2": Integrand(f2, vectorized=True, name="f2"),
}
SOURCES = {"f1": F1_SOURCE, "f2": F2_SOURCE}


def get_preset(name: str) -> Integrand:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
