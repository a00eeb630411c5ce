"""Built-in test problems with closed-form solutions.

Each problem bundles separated data for the solver stages with the exact
fields the convergence studies compare against.  All profiles are Gaussian
bumps or polynomial multiples of them, so every stage error is measurable
down to the saturation floor.

* ``swirl`` -- divergence-free rotating Gaussian initial velocity, no
  forcing: the velocity decays self-similarly under the heat propagator and
  the pressure vanishes.
* ``gradient-flow`` -- curl-free forcing f = 2 t x exp(-|x|^2) with zero
  initial velocity: the forcing is exactly balanced by the pressure
  gradient, so u = 0 and P = -t exp(-|x|^2).
* ``gaussian-jet`` -- a heat-potential density phi pointing along the first
  axis whose volume heat potential is t exp(-|x|^2) e_1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .grid import SeparatedFunction3, SeparatedTerm

__all__ = ["BuiltinProblem", "PROBLEMS"]


def _gauss(x):
    return np.exp(-x * x)


def _dgauss(x):
    return -2.0 * x * np.exp(-x * x)


def _xgauss(x):
    return x * np.exp(-x * x)


def _dxgauss(x):
    return (1.0 - 2.0 * x * x) * np.exp(-x * x)


def _x2gauss(x):
    return x * x * np.exp(-x * x)


def _zero_component() -> SeparatedFunction3:
    return SeparatedFunction3(terms=(
        SeparatedTerm(coeff=0.0, factors=(_gauss, _gauss, _gauss),
                      dfactors=(_dgauss, _dgauss, _dgauss)),))


@dataclass(frozen=True)
class BuiltinProblem:
    """Separated data plus exact solution fields for one test problem."""

    name: str
    description: str
    stages: tuple[str, ...]
    g: tuple | None = None
    f: tuple | None = None
    phi: tuple | None = None
    exact_velocity: Callable | None = None
    exact_pressure: Callable | None = None
    exact_grad_pressure: Callable | None = None
    exact_heat: Callable | None = None
    defaults: dict = field(default_factory=dict)


def _swirl() -> BuiltinProblem:
    g1 = SeparatedFunction3(terms=(
        SeparatedTerm(coeff=-2.0, factors=(_gauss, _xgauss, _gauss),
                      dfactors=(_dgauss, _dxgauss, _dgauss)),))
    g2 = SeparatedFunction3(terms=(
        SeparatedTerm(coeff=2.0, factors=(_xgauss, _gauss, _gauss),
                      dfactors=(_dxgauss, _dgauss, _dgauss)),))

    def exact_velocity(x, t, nu=1.0):
        q = 1.0 + 4.0 * nu * t
        amp = np.exp(-(x[0] ** 2 + x[1] ** 2 + x[2] ** 2) / q) / q ** 2.5
        return np.array([-2.0 * x[1] * amp, 2.0 * x[0] * amp, 0.0 * amp])

    return BuiltinProblem(
        name="swirl",
        description="rotating Gaussian initial velocity decaying under the heat flow",
        stages=("propagator", "full"),
        g=(g1, g2, _zero_component()),
        exact_velocity=exact_velocity,
        exact_pressure=lambda x, t: 0.0 * np.asarray(x[0]),
        exact_grad_pressure=lambda x, t: np.array([0.0 * x[0], 0.0 * x[1], 0.0 * x[2]]),
        defaults={"d": 4.0, "d0": 4.0, "nu": 1.0, "component": 1},
    )


def _gradient_flow() -> BuiltinProblem:
    comps = []
    for axis in range(3):
        factors = [_gauss, _gauss, _gauss]
        dfactors = [_dgauss, _dgauss, _dgauss]
        factors[axis] = _xgauss
        dfactors[axis] = _dxgauss
        comps.append(SeparatedFunction3(terms=(
            SeparatedTerm(coeff=lambda t: 2.0 * t, factors=tuple(factors),
                          dfactors=tuple(dfactors)),)))

    def exact_pressure(x, t):
        return -t * np.exp(-(x[0] ** 2 + x[1] ** 2 + x[2] ** 2))

    def exact_grad_pressure(x, t):
        amp = 2.0 * t * np.exp(-(x[0] ** 2 + x[1] ** 2 + x[2] ** 2))
        return np.array([x[0] * amp, x[1] * amp, x[2] * amp])

    def exact_velocity(x, t, nu=1.0):
        return np.array([0.0 * x[0], 0.0 * x[1], 0.0 * x[2]])

    return BuiltinProblem(
        name="gradient-flow",
        description="curl-free forcing balanced by the pressure gradient, u = 0",
        stages=("pressure", "gradient", "full"),
        f=tuple(comps),
        exact_velocity=exact_velocity,
        exact_pressure=exact_pressure,
        exact_grad_pressure=exact_grad_pressure,
        defaults={"d": 5.0, "d0": 4.0, "nu": 1.0, "axis": 2},
    )


def _gaussian_jet() -> BuiltinProblem:
    phi1 = SeparatedFunction3(terms=(
        SeparatedTerm(coeff=1.0, factors=(_gauss, _gauss, _gauss)),
        SeparatedTerm(coeff=lambda t: 6.0 * t, factors=(_gauss, _gauss, _gauss)),
        SeparatedTerm(coeff=lambda t: -4.0 * t, factors=(_x2gauss, _gauss, _gauss)),
        SeparatedTerm(coeff=lambda t: -4.0 * t, factors=(_gauss, _x2gauss, _gauss)),
        SeparatedTerm(coeff=lambda t: -4.0 * t, factors=(_gauss, _gauss, _x2gauss)),
    ))

    def exact_heat(x, t):
        return np.array([
            t * np.exp(-(x[0] ** 2 + x[1] ** 2 + x[2] ** 2)),
            0.0 * x[1],
            0.0 * x[2],
        ])

    return BuiltinProblem(
        name="gaussian-jet",
        description="heat-potential density whose potential is t exp(-|x|^2) e_1",
        stages=("heat",),
        phi=(phi1, None, None),
        exact_heat=exact_heat,
        defaults={"d": 4.0, "d0": 4.0, "nu": 1.0, "component": 1},
    )


PROBLEMS: dict[str, BuiltinProblem] = {
    p.name: p for p in (_swirl(), _gradient_flow(), _gaussian_jet())
}
