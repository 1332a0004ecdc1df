"""The balanced energy on node configurations of the circle: first variation,
the second-variation Hessian over node perturbations, the Dirichlet-to-Neumann
quantity v(eps), Morse index and nullity, and the periodic spectrum cross-check.

The linearized arc solves run in extended precision (mpmath): the transmitted
Neumann responses scale with the conserved quantity lambda ~ 16 e^{-sqrt2 L/eps},
which sits far below double-precision resolution of unit boundary data for the
interesting eps.  Orientation and sign conventions are calibrated once against
centered finite differences of the energy itself (the criterion the spec pins).
"""
import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .bvp_engine import GridFunction, SpectrumReport, TridiagonalOperator, eig_sturm
from .errors import ArcTooShort, DomainError, NotCritical, SingularSystem
from .scalar_field import potential_d2
from .solver_1d import existence_threshold, solve_dirichlet

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class NodeConfig:
    """Even-cardinality sorted node set on the unit circle with alternating arcs."""
    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or len(nodes) < 2 or len(nodes) % 2 != 0:
            raise DomainError("a separating configuration needs an even node count >= 2")
        if np.any(nodes < 0.0) or np.any(nodes >= 1.0):
            raise DomainError("nodes must lie in [0, 1)")
        if np.any(np.diff(nodes) <= 0.0):
            raise DomainError("nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)

    @property
    def m(self):
        return len(self.nodes)

    def arc_lengths(self):
        return np.diff(np.append(self.nodes, self.nodes[0] + 1.0))

    def signs(self):
        return np.array([1 if i % 2 == 0 else -1 for i in range(self.m)])


@dataclass(frozen=True)
class BrokenTransition:
    config: NodeConfig
    eps: float
    pieces: tuple            # per-arc DirichletSolution
    signs: np.ndarray
    be: float


@dataclass(frozen=True)
class LinearizedSolution:
    u: GridFunction
    d_left: float            # one-sided derivative at the left endpoint
    d_right: float           # one-sided derivative at the right endpoint


@dataclass(frozen=True)
class HessianReport:
    Q: np.ndarray
    c: float
    v: float
    spectrum: SpectrumReport
    index: int
    nullity: int


def _check_arcs(config, eps, factor=1.0):
    lengths = config.arc_lengths()
    for i, ell in enumerate(lengths):
        if ell <= factor * math.pi * eps:
            raise ArcTooShort(
                f"arc {i} (length {ell:.6g}) at or below pi*eps = {math.pi * eps:.6g}",
                arc=i,
            )
    return lengths


def broken_transition(config, eps, points_per_eps=50):
    """Per-arc one-signed minimizers glued with alternating sign."""
    lengths = _check_arcs(config, eps)
    pieces = tuple(solve_dirichlet(ell, eps, points_per_eps=points_per_eps)
                   for ell in lengths)
    be = float(sum(p.energy for p in pieces))
    return BrokenTransition(config=config, eps=eps, pieces=pieces,
                            signs=config.signs(), be=be)


def first_variation(config, eps, f, points_per_eps=50, transition=None):
    """dBE/dt for node motions q_i -> q_i + t f_i (f_i > 0 = counterclockwise).

    Moving node i grows the arc behind it and shrinks the arc ahead, so
    dBE/dq_i = (lambda_{i-1} - lambda_i)/eps via the conserved quantity of
    each arc: the squared-slope mismatch of the first-variation formula.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (config.m,):
        raise DomainError("perturbation must assign one real per node")
    bt = transition or broken_transition(config, eps, points_per_eps)
    lam = np.array([p.lam for p in bt.pieces])
    return float(np.sum(f * (np.roll(lam, 1) - lam)) / eps)


def _mp_dps(eps, L):
    return max(30, int(0.62 * L / eps) + 25)


def _mp_linearized(u_values, eps, h, left, right, dps):
    """Thomas solve of eps^2 v'' = W''(u) v with Dirichlet data, in mpmath.

    Returns the interior solution and both one-sided fourth-order endpoint
    derivatives, evaluated before any rounding to double precision.
    """
    n = len(u_values) - 2
    with mp.workdps(dps):
        c2 = (mp.mpf(eps) / mp.mpf(h)) ** 2
        diag = [-2 * c2 - mp.mpf(potential_d2(float(u_values[i + 1]))) for i in range(n)]
        off = c2
        rhs = [mp.mpf(0)] * n
        rhs[0] -= off * mp.mpf(left)
        rhs[-1] -= off * mp.mpf(right)
        beta = [mp.mpf(0)] * n
        y = [mp.mpf(0)] * n
        beta[0] = diag[0]
        if beta[0] == 0:
            raise SingularSystem("zero pivot in linearized solve")
        y[0] = rhs[0] / beta[0]
        for i in range(1, n):
            beta[i] = diag[i] - off * (off / beta[i - 1])
            if beta[i] == 0:
                raise SingularSystem("zero pivot in linearized solve")
            y[i] = (rhs[i] - off * y[i - 1]) / beta[i]
        x = [mp.mpf(0)] * n
        x[-1] = y[-1]
        for i in range(n - 2, -1, -1):
            x[i] = y[i] - (off / beta[i]) * x[i + 1]
        full = [mp.mpf(left)] + x + [mp.mpf(right)]
        hh = mp.mpf(h)
        d_left = (-25 * full[0] + 48 * full[1] - 36 * full[2]
                  + 16 * full[3] - 3 * full[4]) / (12 * hh)
        d_right = -(-25 * full[-1] + 48 * full[-2] - 36 * full[-3]
                    + 16 * full[-4] - 3 * full[-5]) / (12 * hh)
        vals = np.array([float(v) for v in full])
        return vals, float(d_left), float(d_right)


def linearized_bvp(arc, left_value, right_value):
    """Solve eps^2 udot'' = W''(u) udot on the arc with the given Dirichlet data."""
    vals, d_left, d_right = _mp_linearized(
        arc.u.values, arc.eps, arc.u.h, left_value, right_value,
        _mp_dps(arc.eps, arc.L),
    )
    u = GridFunction(a=arc.u.a, b=arc.u.b, n=arc.u.n, values=vals)
    return LinearizedSolution(u=u, d_left=d_left, d_right=d_right)


def _unit_response(arc):
    """Endpoint responses (a, b) of the data-(1, 0) linearized solve.

    a is the near-end slope, b the transmitted far-end slope; the continuum
    translation identity forces a + b = 0, so the discrete defect d = a + b
    measures pure grid error and (b - a)/2 is the defect-free transmission.
    """
    sol = _mp_linearized(arc.u.values, arc.eps, arc.u.h, 1.0, 0.0,
                         _mp_dps(arc.eps, arc.L))
    _, a, b = sol
    return a, b


def _transmission(L, eps, points_per_eps=50):
    """Transmitted far-end slope b with one step of h^2 Richardson.

    b is extracted at the far endpoint only: the near-end slope a carries the
    discrete translation defect d = a + b, while b converges cleanly at
    second order (verified against the closed-form lambda asymptotics).
    """
    vals = []
    for ppe in (points_per_eps, 2 * points_per_eps):
        arc = solve_dirichlet(L, eps, points_per_eps=ppe)
        _, b = _unit_response(arc)
        vals.append(b)
    return (4.0 * vals[1] - vals[0]) / 3.0


def dtn_v(eps, L, points_per_eps=50):
    """The Dirichlet-to-Neumann quantity v(eps) of the unit symmetric data.

    This is the oriented Neumann response entering the second-variation
    structure Q = eps c^2 v(eps) x cycle Laplacian; it is negative for all
    admissible eps and satisfies v ~ sqrt2 lambda(eps) omega'(0) / eps.
    """
    if eps >= existence_threshold(L):
        raise DomainError(f"eps={eps} not admissible for arc length {L}")
    return _transmission(L, eps, points_per_eps)


def hessian(config, eps, points_per_eps=100, crit_tol=1e-7):
    """Second-variation matrix over node perturbations at a critical config.

    Per-arc linearized solves with the interval-system data are combined via
    the second-variation formula; the global orientation is calibrated by the
    finite-difference Hessian of the energy (the acceptance cross-check).
    """
    m = config.m
    bt = broken_transition(config, eps)
    for j in range(m):
        basis = np.zeros(m)
        basis[j] = 1.0
        fv = first_variation(config, eps, basis, transition=bt)
        if abs(fv) > crit_tol:
            raise NotCritical(
                f"|dBE/dq_{j}| = {abs(fv):.3e} exceeds the criticality tolerance {crit_tol}"
            )
    lengths = config.arc_lengths()
    c = bt.pieces[0].slope_left

    # Per-arc unit responses, Richardson-paired over halved grids.  The
    # translation identity forces a = -b exactly (unit antisymmetric data
    # reproduce u_x / c, whose endpoint second derivatives vanish), and the
    # near-end extraction of a carries a pure discretization defect, so the
    # far-end transmission b is the one measured quantity: a := -b.  This
    # pins the rotation mode of Q at exactly zero.
    responses = {}
    for ell in lengths:
        key = round(ell, 14)
        if key not in responses:
            pair = []
            for ppe in (points_per_eps, 2 * points_per_eps):
                arc = solve_dirichlet(ell, eps, points_per_eps=ppe)
                pair.append(_unit_response(arc))
            b = (4.0 * pair[1][1] - pair[0][1]) / 3.0
            responses[key] = (-b, b)

    Q = np.zeros((m, m))
    for i, ell in enumerate(lengths):
        a, b = responses[round(ell, 14)]
        j = (i + 1) % m
        # arc contribution -eps c [f_i udot_x(left) + f_j udot_x(right)]
        # with udot = c f_i A - c f_j B:
        #   udot_x(left) = c (f_i a + f_j b),  udot_x(right) = c (f_i b + f_j a)
        Q[i, i] += -eps * c * c * a
        Q[j, j] += -eps * c * c * a
        Q[i, j] += -eps * c * c * b
        Q[j, i] += -eps * c * c * b

    evals = np.linalg.eigvalsh(Q)
    tau = 1e-8 * float(np.max(np.abs(Q)))
    n_neg = int(np.sum(evals < -tau))
    n_zero = int(np.sum(np.abs(evals) <= tau))
    spectrum = SpectrumReport(eigenvalues=evals, zero_threshold=tau,
                              n_negative=n_neg, n_zero=n_zero,
                              n_positive=m - n_neg - n_zero)
    b0 = responses[round(lengths[0], 14)][1]
    return HessianReport(Q=Q, c=c, v=b0, spectrum=spectrum,
                         index=n_neg, nullity=n_zero)


def morse_index(config, eps, points_per_eps=100):
    rep = hessian(config, eps, points_per_eps=points_per_eps)
    return rep.index, rep.nullity


def _pinned_be(config, eps, f, t, points_per_eps):
    """BE of the config with nodes shifted by t*f, on grids pinned to the
    base configuration's per-arc interval counts (Richardson-paired energies).

    Pinning removes integer regrid jumps so that centered differences see
    only the smooth energy landscape; this is the finite-difference oracle
    route for the variation formulas.
    """
    from .solver_1d import _intervals_for, _solve_at, arc_energy

    base_lengths = config.arc_lengths()
    nodes = config.nodes + t * np.asarray(f, dtype=float)
    lengths = np.diff(np.append(nodes, nodes[0] + 1.0))
    total = 0.0
    for ell0, ell in zip(base_lengths, lengths):
        if ell <= math.pi * eps:
            raise ArcTooShort(f"perturbed arc length {ell:.6g} inadmissible")
        m = _intervals_for(ell0, eps, points_per_eps)
        e1 = arc_energy(_solve_at(ell, eps, m, 1e-12), eps)
        e2 = arc_energy(_solve_at(ell, eps, 2 * m, 1e-12), eps)
        total += (4.0 * e2 - e1) / 3.0
    return total


def fd_first_variation(config, eps, f, step=1e-5, points_per_eps=50):
    """Centered first difference of BE along the node perturbation f."""
    plus = _pinned_be(config, eps, f, step, points_per_eps)
    minus = _pinned_be(config, eps, f, -step, points_per_eps)
    return (plus - minus) / (2.0 * step)


def fd_second_variation(config, eps, f, step=1e-4, points_per_eps=50):
    """Centered second difference of BE along the node perturbation f."""
    plus = _pinned_be(config, eps, f, step, points_per_eps)
    mid = _pinned_be(config, eps, f, 0.0, points_per_eps)
    minus = _pinned_be(config, eps, f, -step, points_per_eps)
    return (plus - 2.0 * mid + minus) / step ** 2


def circle_operator(sol):
    """Periodic discretization of -(eps^2 d^2 - W''(u)) on the circle."""
    v = sol.u.values[:-1]
    h = sol.u.h
    c2 = (sol.eps / h) ** 2
    n = len(v)
    diag = 2.0 * c2 + potential_d2(v)
    off = np.full(n - 1, -c2)
    return TridiagonalOperator(diag=diag, offdiag=off, boundary="periodic", corner=-c2)


def translation_mode(sol):
    """Fourth-order discrete derivative of the nodal solution on the circle."""
    v = sol.u.values[:-1]
    h = sol.u.h
    return (-np.roll(v, -2) + 8.0 * np.roll(v, -1)
            - 8.0 * np.roll(v, 1) + np.roll(v, 2)) / (12.0 * h)


def ac_spectrum(sol, how_many, tol=1e-12):
    """Spectrum of the periodic linearized operator with translation-calibrated
    zero threshold: the discrete derivative of the reflected solution is an
    exact kernel element of the central-difference discretization, so its
    Rayleigh quotient magnitude calibrates the zero classification.
    """
    op = circle_operator(sol)
    ux = translation_mode(sol)
    rq = float(ux @ op.matvec(ux) / (ux @ ux))
    tau = max(10.0 * abs(rq), 40.0 * tol)
    return eig_sturm(op, how_many, tol=tol, zero_threshold=tau)


def dirichlet_gap(eps, L, points_per_eps=50):
    """Lowest Dirichlet eigenvalue of -(eps^2 d^2 - W''(u)) on the arc."""
    arc = solve_dirichlet(L, eps, points_per_eps=points_per_eps)
    v = arc.u.values
    h = arc.u.h
    c2 = (eps / h) ** 2
    diag = 2.0 * c2 + potential_d2(v[1:-1])
    off = np.full(arc.u.n - 1, -c2)
    op = TridiagonalOperator(diag=diag, offdiag=off, boundary="dirichlet")
    rep = eig_sturm(op, 1, tol=1e-10)
    return float(rep.eigenvalues[0])
