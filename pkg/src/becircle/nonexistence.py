"""Absolute-minimizer experiments: the n >= 2 logarithmic-cutoff construction
driving the infimum of the balanced energy to zero, and the two-node
non-attainment scan on the circle.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .balanced_energy import NodeConfig, broken_transition
from .bvp_engine import simpson
from .errors import DomainError
from .scalar_field import potential
from .solver_1d import min_energy


@dataclass(frozen=True)
class CutoffSpec:
    """Radial log-cutoff 0 -> 1 between delta and k*delta in flat R^n.

    For n = 2 the coupled choice delta = 1/(k ln k) is applied automatically
    when delta is omitted, keeping k*delta bounded.
    """
    n: int
    k: float
    eps: float
    delta: float = None

    def __post_init__(self):
        if self.n < 2:
            raise DomainError("ambient dimension must be >= 2")
        if self.k <= 1.0:
            raise DomainError("k must exceed 1")
        if self.eps <= 0.0:
            raise DomainError("eps must be positive")
        if self.delta is None:
            if self.n == 2:
                object.__setattr__(self, "delta", 1.0 / (self.k * math.log(self.k)))
            else:
                raise DomainError("delta required for n >= 3")
        if self.delta <= 0.0:
            raise DomainError("delta must be positive")


def _sphere_area(n):
    """Surface area of the unit sphere in R^n."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def cutoff_gradient_closed(spec):
    """Closed form of the gradient term (eps/2) int |f'|^2 over the ramp."""
    w = _sphere_area(spec.n)
    lk = math.log(spec.k)
    if spec.n == 2:
        radial = lk
    else:
        radial = (((spec.k * spec.delta) ** (spec.n - 2)
                   - spec.delta ** (spec.n - 2)) / (spec.n - 2))
    return 0.5 * spec.eps * w * radial / lk ** 2


def cutoff_gradient_quadrature(spec, points=40001):
    """The same gradient term by direct radial quadrature (oracle)."""
    w = _sphere_area(spec.n)
    r = np.linspace(spec.delta, spec.k * spec.delta, points)
    h = r[1] - r[0]
    integrand = (1.0 / (r * math.log(spec.k))) ** 2 * r ** (spec.n - 1)
    return 0.5 * spec.eps * w * simpson(integrand, h)


def cutoff_energy(spec, points=4001):
    """Exact radial energy of the log cutoff: closed-form gradient plus the
    potential term quadrature (W = 1/4 on the inner ball, W(f) on the ramp)."""
    w = _sphere_area(spec.n)
    ball = w * spec.delta ** spec.n / spec.n * potential(0.0) / spec.eps
    r = np.linspace(spec.delta, spec.k * spec.delta, points)
    h = r[1] - r[0]
    f = np.log(r / spec.delta) / math.log(spec.k)
    ramp = w * simpson(potential(f) * r ** (spec.n - 1), h) / spec.eps
    return cutoff_gradient_closed(spec) + ball + ramp


@dataclass(frozen=True)
class TwoNodeScan:
    eps: float
    p: np.ndarray
    be: np.ndarray
    reference: float          # E_eps(u_{0,eps}): single-arc minimizer, nodes merged
    gap: np.ndarray           # be - reference
    dropped: list = field(default_factory=list)


def two_node_scan(eps, p_grid, points_per_eps=50):
    """BE({0, p}) over the grid against the merged single-node minimizer.

    Grid points whose shorter arc drops to 1.05 pi eps or below are dropped
    and flagged rather than modeled by the degenerate u = 0 arc.
    """
    floor = 1.05 * math.pi * eps
    kept, dropped = [], []
    for p in np.asarray(p_grid, dtype=float):
        if min(p, 1.0 - p) > floor:
            kept.append(p)
        else:
            dropped.append((float(p), f"arc {min(p, 1 - p):.6g} <= 1.05*pi*eps"))
    vals = []
    for p in kept:
        bt = broken_transition(NodeConfig(np.array([0.0, p])), eps,
                               points_per_eps=points_per_eps)
        vals.append(bt.be)
    reference = min_energy(eps, 1.0, points_per_eps=points_per_eps)
    be = np.array(vals)
    return TwoNodeScan(eps=eps, p=np.array(kept), be=be, reference=reference,
                       gap=be - reference, dropped=dropped)
