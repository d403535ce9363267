"""Compare the double-exponential value with the Möbius rule at n = 2^16.

    python scripts/oracle_agreement.py

Also lists the packaged high-precision fixture where one exists, which shows
which side is off when the two disagree.
"""

from mobius_quad.mobius import MobiusMap
from mobius_quad.presets import PRESETS
from mobius_quad.quadrature import integrate, make_rule
from mobius_quad.reference import lookup_reference, tanh_sinh
from mobius_quad.weightfn import eval_weight, make_omega

CASES = [("f1", u) for u in (4, 6, 8)] + [("f2", u) for u in (4, 4.5, 5, 5.5, 6, 7)]
N = 2**16


def main():
    print(f"{'f':>3} {'upsilon':>7} {'|DE - rule|':>12} {'DE level diff':>14} {'|rule - fixture|':>17}")
    for name, u in CASES:
        f, w = PRESETS[name], make_omega(u)
        de, diff, _, _ = tanh_sinh(lambda x: f(x) * eval_weight(w, x), tol=1e-12)
        mq = integrate(make_rule(w, MobiusMap(1.0), N), f)
        fx = lookup_reference(name, u)
        vs_fixture = f"{abs(mq - fx.value):17.3e}" if fx else f"{'-':>17}"
        print(f"{name:>3} {u:>7g} {abs(de - mq):12.3e} {diff:14.3e} {vs_fixture}")


if __name__ == "__main__":
    main()
