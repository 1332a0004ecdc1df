"""Positive Dirichlet minimizers on intervals, the 2p-node periodic solutions
on the circle, and the minimum-energy map in eps.

Scalar outputs (conserved quantity, energy, node slopes) are Richardson
pairs over grids with m and 2m intervals: the raw O(h^2) quadrature and
amplitude errors sit exactly at the exponentially small energy scales the
experiments difference against, and the pairing removes them.
"""
import math
from dataclasses import dataclass

import numpy as np

from .bvp_engine import GridFunction, newton_semilinear, simpson
from .elliptic_oracle import ac_family_mod, modulus_for
from .errors import DomainError, NoPositiveSolution
from .scalar_field import potential, potential_d1

SQRT2 = math.sqrt(2.0)


def existence_threshold(L):
    """Largest eps admitting a positive Dirichlet solution on length L: L/pi."""
    if L <= 0:
        raise DomainError("interval length must be positive")
    return L / math.pi


@dataclass(frozen=True)
class DirichletSolution:
    L: float
    eps: float
    u: GridFunction
    lam: float
    slope_left: float
    slope_right: float
    energy: float


@dataclass(frozen=True)
class NodalSolution:
    p: int
    eps: float
    u: GridFunction          # on [0, 1], periodic identification
    nodes: np.ndarray        # the 2p zeros
    c: float                 # |u_x| at any node


def _intervals_for(L, eps, points_per_eps):
    m = int(round(L / min(eps / points_per_eps, L / 400.0)))
    m = max(m, 8)
    return m + (m % 2)  # even interval count keeps the Simpson point count odd


def arc_energy(u, eps):
    """E_eps of a grid function: midpoint-rule gradient + Simpson potential."""
    h = u.h
    du = np.diff(u.values) / h
    grad = np.sum(du * du) * h
    pot = simpson(potential(u.values), h)
    return 0.5 * eps * grad + pot / eps


def _solve_at(L, eps, m, tol):
    mod = modulus_for(eps, L)
    x = np.linspace(0.0, L, m + 1)
    vals = np.array([ac_family_mod(xi / eps, mod) for xi in x])
    vals[0] = 0.0
    vals[-1] = 0.0
    guess = GridFunction(a=0.0, b=L, n=m - 1, values=vals)
    return newton_semilinear(guess, eps, (0.0, 0.0), tol=tol)


def solve_dirichlet(L, eps, points_per_eps=50, tol=1e-12, refine_values=False):
    """The unique positive solution of eps^2 u'' = W'(u), u(0) = u(L) = 0.

    Raises NoPositiveSolution at or above the existence threshold (there the
    minimizer is u = 0, which is not admitted as a broken-transition piece).

    With refine_values the returned grid values are the pointwise Richardson
    combination of the base and halved grids (fourth-order accurate against
    the closed form); by default they are the raw base-grid Newton solution,
    which satisfies the discrete equation to the solver tolerance.
    """
    if eps >= existence_threshold(L):
        raise NoPositiveSolution(
            f"eps={eps} >= L/pi = {existence_threshold(L):.6g}: only u = 0 remains"
        )
    m = _intervals_for(L, eps, points_per_eps)
    sol = _solve_at(L, eps, m, tol)
    sol2 = _solve_at(L, eps, 2 * m, tol)

    lam_pair = [potential(float(np.max(s.values))) for s in (sol, sol2)]
    lam = (4.0 * lam_pair[1] - lam_pair[0]) / 3.0
    e_pair = [arc_energy(s, eps) for s in (sol, sol2)]
    energy = (4.0 * e_pair[1] - e_pair[0]) / 3.0

    u = sol
    if refine_values:
        refined = (4.0 * sol2.values[::2] - sol.values) / 3.0
        u = GridFunction(a=0.0, b=L, n=m - 1, values=refined)

    c = math.sqrt(max(0.0, 2.0 * (potential(0.0) - lam))) / eps
    return DirichletSolution(L=L, eps=eps, u=u, lam=lam,
                             slope_left=c, slope_right=-c, energy=energy)


def stencil_slope(u, side="left"):
    """One-sided fourth-order endpoint derivative of a grid function."""
    v = u.values if side == "left" else u.values[::-1]
    s = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * u.h)
    return s if side == "left" else -s


def nodal_solution(p, eps, points_per_eps=50, tol=1e-12):
    """The 2p-node solution on the circle by odd reflection of the arc solution."""
    if p < 1:
        raise DomainError("p must be a positive integer")
    ell = 1.0 / (2 * p)
    if eps >= existence_threshold(ell):
        raise NoPositiveSolution(
            f"eps={eps} >= 1/(2 p pi) = {existence_threshold(ell):.6g}"
        )
    arc = solve_dirichlet(ell, eps, points_per_eps=points_per_eps, tol=tol)
    piece = arc.u.values[:-1]
    blocks = [((-1) ** i) * piece for i in range(2 * p)]
    vals = np.concatenate(blocks + [np.zeros(1)])
    u = GridFunction(a=0.0, b=1.0, n=len(vals) - 2, values=vals)
    nodes = np.arange(2 * p) * ell
    return NodalSolution(p=p, eps=eps, u=u, nodes=nodes, c=arc.slope_left)


def periodic_residual(sol):
    """Sup norm of the discrete periodic residual eps^2 D2 u - W'(u)."""
    v = sol.u.values[:-1]
    h = sol.u.h
    c2 = (sol.eps / h) ** 2
    res = c2 * (np.roll(v, -1) - 2.0 * v + np.roll(v, 1)) - potential_d1(v)
    return float(np.max(np.abs(res)))


def min_energy(eps, L, points_per_eps=50):
    """Energy of the positive Dirichlet minimizer; the map g(eps) of the scans."""
    return solve_dirichlet(L, eps, points_per_eps=points_per_eps).energy


@dataclass(frozen=True)
class LipschitzScan:
    eps: np.ndarray
    energies: np.ndarray
    quotients: np.ndarray    # |g(e2) - g(e1)| / |e2 - e1| on adjacent pairs
    max_quotient: float


def lipschitz_scan(L, eps_grid, points_per_eps=50):
    """Finite-difference quotients of eps -> min-energy over the grid."""
    eps = np.sort(np.asarray(eps_grid, dtype=float))
    thr = existence_threshold(L)
    if np.any(eps >= thr):
        raise NoPositiveSolution(f"grid contains eps >= threshold {thr:.6g}")
    g = np.array([min_energy(e, L, points_per_eps) for e in eps])
    q = np.abs(np.diff(g)) / np.diff(eps)
    return LipschitzScan(eps=eps, energies=g, quotients=q,
                         max_quotient=float(np.max(q)))
