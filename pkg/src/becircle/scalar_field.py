"""Double-well potential, heteroclinic profile, and the universal constants.

Everything downstream (grid solvers, elliptic closed forms, profile ODEs)
refers back to these few closed forms.  Derivatives are analytic throughout
so that Newton iterations stay quadratically convergent.
"""
import math
from dataclasses import dataclass

import numpy as np

SQRT2 = math.sqrt(2.0)


def potential(u):
    """W(u) = (1 - u^2)^2 / 4, minimized at the pure phases u = +-1."""
    return (1.0 - u * u) ** 2 / 4.0


def potential_d1(u):
    """W'(u) = u^3 - u."""
    return u ** 3 - u


def potential_d2(u):
    """W''(u) = 3 u^2 - 1."""
    return 3.0 * u * u - 1.0


def heteroclinic(t):
    """The standing wave g(t) = tanh(t / sqrt 2) with its first two derivatives.

    Returns (g, gdot, gddot).  Accepts scalars or arrays.  sech^2 is formed
    from cosh directly: 1 - tanh^2 underflows to zero already near t = 26,
    far inside the default profile windows.
    """
    s = np.asarray(t, dtype=float) / SQRT2
    g = np.tanh(s)
    sech2 = 1.0 / np.cosh(s) ** 2
    gdot = sech2 / SQRT2
    gddot = -g * sech2
    if np.ndim(t) == 0:
        return float(g), float(gdot), float(gddot)
    return g, gdot, gddot


@dataclass(frozen=True)
class WellConstants:
    sigma0: float   # integral of gdot^2 over the half-line
    sigma: float    # gdot(0)
    kappa0: float   # positive root of W''(g(t)) = 0, rescaled length units


def _kappa0_root():
    # Bisection on [0.5, 1.5] (the root is unique and interior: W''(g) is
    # monotone in t > 0), then a few Newton polish steps.
    def f(t):
        g, _, _ = heteroclinic(t)
        return 3.0 * g * g - 1.0

    lo, hi = 0.5, 1.5
    if f(lo) >= 0 or f(hi) <= 0:
        raise AssertionError("kappa0 bracket invalid")
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    for _ in range(4):
        g, gdot, _ = heteroclinic(t)
        t -= (3 * g * g - 1) / (6 * g * gdot)
    return t


def well_constants():
    """Closed-form sigma0, sigma and the root kappa0 of W''(g(t)) = 0."""
    return WellConstants(
        sigma0=SQRT2 / 3.0,
        sigma=1.0 / SQRT2,
        kappa0=_kappa0_root(),
    )
