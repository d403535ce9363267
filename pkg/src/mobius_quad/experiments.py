"""Experiment configurations for the f1/f2 convergence studies."""

from __future__ import annotations

from dataclasses import dataclass

from .convergence import ConvergenceStudy, predict_rate_experiment, run_sweep
from .mobius import MobiusMap
from .presets import get_preset
from .reference import ReferenceResult, lookup_reference, reference_integral
from .weightfn import make_omega


def dyadic(a: int, b: int) -> tuple[int, ...]:
    return tuple(2**k for k in range(a, b + 1))


@dataclass(frozen=True)
class SweepConfig:
    preset: str
    upsilon: float
    ns: tuple[int, ...]
    gamma: float = 1.0


@dataclass(frozen=True)
class FigureBundle:
    number: int
    preset: str
    upsilons: tuple[float, ...]
    ns: tuple[int, ...]

    def configs(self) -> list[SweepConfig]:
        return [SweepConfig(self.preset, float(u), self.ns) for u in self.upsilons]


# exponential decay for odd upsilon reaches round-off by n ~ 30, so the third
# bundle uses a unit-step grid instead of a dyadic one
FIGURES = {
    1: FigureBundle(1, "f1", (3, 4, 6, 8), dyadic(4, 14)),
    2: FigureBundle(2, "f2", (4, 4.5, 5.5, 6), dyadic(4, 14)),
    3: FigureBundle(3, "f2", (3, 5, 7), tuple(range(1, 33))),
}


def resolve_reference(preset: str, upsilon: float, gamma: float = 1.0,
                      fixtures=None, tol: float = 1e-12) -> ReferenceResult:
    """Fixture value if one is recorded, otherwise a fresh double-exponential value."""
    ref = lookup_reference(preset, upsilon, gamma, fixtures)
    if ref is not None:
        return ref
    return reference_integral(get_preset(preset), make_omega(upsilon), tol=tol, gamma=gamma)


def run_experiment(cfg: SweepConfig, reference: ReferenceResult | None = None,
                   fixtures=None) -> ConvergenceStudy:
    if reference is None:
        reference = resolve_reference(cfg.preset, cfg.upsilon, cfg.gamma, fixtures)
    predicted = predict_rate_experiment(cfg.preset, cfg.upsilon).rate
    return run_sweep(get_preset(cfg.preset), make_omega(cfg.upsilon), MobiusMap(cfg.gamma),
                     cfg.ns, reference, predicted_rate=predicted)


def run_figure(number: int, fixtures=None) -> list[tuple[SweepConfig, ConvergenceStudy]]:
    return [(cfg, run_experiment(cfg, fixtures=fixtures)) for cfg in FIGURES[number].configs()]
