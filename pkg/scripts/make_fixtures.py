"""Regenerate src/mobius_quad/data/reference_fixtures.csv.

f1 rows come from mpmath's oscillatory quadrature at 40 digits (the
double-exponential oracle stalls on the slowly decaying cosine tail for small
upsilon); f2 rows come from the package's own double-exponential route and are
confirmed against mpmath before being written.

    python scripts/make_fixtures.py [OUTPUT.csv]
"""

import sys
from pathlib import Path

import mpmath as mp

from mobius_quad.presets import PRESETS
from mobius_quad.reference import Method, ReferenceResult, reference_integral, write_fixtures
from mobius_quad.weightfn import make_omega

F1_UPSILONS = (3.0, 4.0, 6.0, 8.0)
F2_UPSILONS = (3.0, 4.0, 4.5, 5.0, 5.5, 6.0, 7.0)


def f1_high_precision(upsilon, dps):
    with mp.workdps(dps):
        u = mp.mpf(upsilon)
        # |x| cos(x+1) = |x| (cos x cos 1 - sin x sin 1); the odd part integrates to 0
        half = mp.quadosc(lambda t: t * mp.cos(t) * (1 + t * t) ** (-u / 2), [0, mp.inf], omega=1)
        return 2 * mp.cos(1) * half


def f2_high_precision(upsilon, dps=30):
    with mp.workdps(dps):
        u = mp.mpf(upsilon)
        g = lambda t: (t**4 + t**2 + t + 1) ** mp.mpf("0.25") * (1 + t * t) ** (-u / 2)
        return mp.quad(g, [-mp.inf, -1, 0, 1, mp.inf])


def main(out):
    rows = []
    for u in F1_UPSILONS:
        a = f1_high_precision(u, 30)
        b = f1_high_precision(u, 40)
        value = float(b)
        est = max(float(abs(a - b)), abs(value) * 2.0**-53)
        rows.append(("f1", u, 1.0, ReferenceResult(value, est, Method.HIGH_PRECISION)))
        print(f"f1 upsilon={u}: {value!r} (+-{est:.1e})")
    for u in F2_UPSILONS:
        res = reference_integral(PRESETS["f2"], make_omega(u), tol=1e-12, cross_check=False)
        hp = float(f2_high_precision(u))
        if abs(hp - res.value) > 1e-13 * (1 + abs(hp)):
            raise SystemExit(f"f2 upsilon={u}: double-exponential {res.value!r} vs mpmath {hp!r}")
        rows.append(("f2", u, 1.0, res))
        print(f"f2 upsilon={u}: {res.value!r} (+-{res.est_error:.1e})")
    write_fixtures(rows, out)


if __name__ == "__main__":
    default = Path(__file__).resolve().parents[1] / "src" / "mobius_quad" / "data" / "reference_fixtures.csv"
    main(sys.argv[1] if len(sys.argv) > 1 else default)
