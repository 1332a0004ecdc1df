"""Solutions of the linearized heteroclinic equation L f = f'' - W''(g) f = rhs
on the half-line, by variation of parameters, plus the lambda-direction pair
(kappa, tau_lambda, omega) and the constants sigma1, sigma2.

Variation of parameters writes f = r * gdot with
    r(t) = int_0^t gdot(s)^{-2} [a0 + int_0^s rhs*gdot] ds,
    a0   = -int_0^infty rhs*gdot,
and the bracket is always evaluated in its tail form -int_s^infty rhs*gdot:
the difference form loses every digit past s ~ 15 against the e^{2 sqrt2 s}
growth of gdot^{-2}.

The lambda direction requires care.  The pointwise derivative of the periodic
family along its conserved quantity, kappa(t), is an exact homogeneous
solution of L (it grows like e^{sqrt2 t}); the positive profile tau_lambda is
its negative, and the response profile omega solves L(omega) = 6 g tau_lambda
gdot.  omega is bounded, not decaying: omega(t) -> -3 sqrt2 / 4, and
omega'(0) = -2 exactly (by the self-adjoint pairing with g*gdot).  The slope
constant feeding the node Dirichlet-to-Neumann asymptotics is
    v(eps) ~ sqrt2 * lambda(eps) * omega'(0) / eps = -2 sqrt2 lambda / eps.
"""
import math
from dataclasses import dataclass

import numpy as np

from .bvp_engine import cumulative_simpson, simpson
from .errors import TruncationError
from .scalar_field import SQRT2, heteroclinic, potential_d2

DEFAULT_T = 40.0
DEFAULT_H = 1e-3


@dataclass(frozen=True)
class ProfileFunction:
    """A solution of L f = rhs on [0, T] with f(0) = 0."""
    T: float
    h: float
    values: np.ndarray
    dvalues: np.ndarray
    slope0: float
    a0: float
    rhs_values: np.ndarray
    decays: bool          # True when the tail obeys |f(T)| < 1e-8
    name: str = ""

    def grid(self):
        return np.linspace(0.0, self.T, len(self.values))


@dataclass(frozen=True)
class ProfileConstants:
    sigma1: float
    sigma2: float
    wdot0: float
    omegadot0: float


def _grid(T, h):
    n = int(round(T / h))
    return np.linspace(0.0, T, n + 1), T / n


def _vp_solve(rhs_values, t, h):
    """Tail-form variation-of-parameters solve; no decay guard.

    The truncated tail integral int_s^T rhs*gdot is closed by analytic
    continuation of the integrand's exponential decay (rate fitted at the
    boundary): without it the bracket loses all relative accuracy near T,
    which matters for sources that do not themselves decay.
    """
    g, gdot, gddot = heteroclinic(t)
    rg = rhs_values * gdot
    # int_s^T rhs*gdot accumulated from the right, keeping relative accuracy
    # where the integrand is exponentially small
    itail = cumulative_simpson(rg[::-1], h)[::-1]
    tail_inf = 0.0
    if rg[-1] != 0.0 and rg[-2] != 0.0 and 0.0 < rg[-1] / rg[-2] < 1.0:
        mu = math.log(rg[-2] / rg[-1]) / h
        tail_inf = rg[-1] / mu
    bracket = -(itail + tail_inf)             # = -int_s^infty rhs*gdot
    a0 = bracket[0]
    rprime = bracket / gdot ** 2
    r = cumulative_simpson(rprime, h)
    f = r * gdot
    df = rprime * gdot + r * gddot
    slope0 = a0 / gdot[0]
    return f, df, slope0, a0


def solve_profile(rhs, T=DEFAULT_T, h=DEFAULT_H, name=""):
    """Unique decaying solution of L f = rhs with f(0) = 0.

    rhs may be a callable of t or an array on the uniform grid.  Data that
    fail exponential decay at the truncation boundary are rejected.
    """
    t, h = _grid(T, h)
    rhs_values = rhs(t) if callable(rhs) else np.asarray(rhs, dtype=float)
    if rhs_values.shape != t.shape:
        raise TruncationError("rhs grid does not match the profile grid")
    if abs(rhs_values[-1]) > 1e-6:
        raise TruncationError(
            f"rhs({T}) = {rhs_values[-1]:.3e} fails the decay requirement"
        )
    f, df, slope0, a0 = _vp_solve(rhs_values, t, h)
    return ProfileFunction(T=T, h=h, values=f, dvalues=df, slope0=slope0,
                           a0=a0, rhs_values=rhs_values, decays=True, name=name)


def profile_w(T=DEFAULT_T, h=DEFAULT_H):
    """L w = gdot; the mean-curvature response profile.  w'(0) = -2/3."""
    return solve_profile(lambda t: heteroclinic(t)[1], T, h, name="w")


def profile_rho(T=DEFAULT_T, h=DEFAULT_H):
    """L rho = wdot, consuming the computed w profile."""
    w = profile_w(T, h)
    t, hh = _grid(T, h)
    return ProfileFunction(
        *_profile_from_values(w.dvalues, t, hh), rhs_values=w.dvalues,
        decays=True, name="rho",
    )


def profile_tau_geom(T=DEFAULT_T, h=DEFAULT_H):
    """L tau = t gdot; the geometric tau of the curvature expansion."""
    return solve_profile(lambda t: t * heteroclinic(t)[1], T, h, name="tau_geom")


def profile_kappa_ode(T=DEFAULT_T, h=DEFAULT_H):
    """L kappa = g w, consuming the computed w profile."""
    w = profile_w(T, h)
    t, hh = _grid(T, h)
    g = heteroclinic(t)[0]
    rhs = g * w.values
    return ProfileFunction(
        *_profile_from_values(rhs, t, hh), rhs_values=rhs,
        decays=True, name="kappa_ode",
    )


def _profile_from_values(rhs_values, t, h):
    f, df, slope0, a0 = _vp_solve(rhs_values, t, h)
    return t[-1], h, f, df, slope0, a0


def kappa_lambda(t):
    """Pointwise derivative of the periodic family along lambda, at lambda = 0.

    Stable rewriting of  -2 (1-g^2) int_0^g dx/(1-x^2)^3  using
    log((1+g)/(1-g)) = sqrt2 t:
        kappa(t) = -(1/8) [ 2 g (5 - 3 g^2) / (1 - g^2) + 3 sqrt2 t (1 - g^2) ].
    kappa(0) = 0, kappa < 0 for t > 0, kappa'(0) = -sqrt2, and L kappa = 0
    (it is the growing homogeneous partner of gdot).
    """
    t = np.asarray(t, dtype=float)
    g, gdot, _ = heteroclinic(t)
    s = SQRT2 * gdot    # sech^2(t/sqrt2), underflow-safe
    out = -(2.0 * g * (5.0 - 3.0 * g * g) / s + 3.0 * SQRT2 * t * s) / 8.0
    return float(out) if out.ndim == 0 else out


def kappa_lambda_prime(t):
    """Analytic derivative of kappa_lambda."""
    t = np.asarray(t, dtype=float)
    g, gdot, _ = heteroclinic(t)
    s = SQRT2 * gdot    # sech^2(t/sqrt2)
    dA = ((10.0 - 18.0 * g * g) / s + 4.0 * g * g * (5.0 - 3.0 * g * g) / s ** 2) * gdot
    dB = 3.0 * SQRT2 * (s - 2.0 * t * g * gdot)
    out = -(dA + dB) / 8.0
    return float(out) if out.ndim == 0 else out


def profile_tau_lambda(T=DEFAULT_T, h=DEFAULT_H):
    """The positive lambda-direction profile tau_lambda = -kappa_lambda.

    An exact homogeneous solution of L (rhs = 0) with tau(0) = 0 and
    tau'(0) = sqrt2.  It grows like e^{sqrt2 t}/8: the lambda direction of
    the periodic family is inherently non-decaying toward the far node, so
    the decay flag is off.
    """
    t, hh = _grid(T, h)
    vals = -kappa_lambda(t)
    dvals = -kappa_lambda_prime(t)
    return ProfileFunction(T=T, h=hh, values=vals, dvalues=dvals,
                           slope0=SQRT2, a0=SQRT2 * heteroclinic(0.0)[1],
                           rhs_values=np.zeros_like(vals), decays=False,
                           name="tau_lambda")


def profile_omega(T=DEFAULT_T, h=DEFAULT_H):
    """Bounded solution of L omega = 6 g tau_lambda gdot with omega(0) = 0.

    The source tends to the constant 3 sqrt2 / 2 (no decay), but every
    variation-of-parameters integral converges in tail form; the profile is
    bounded with omega(t) -> -3 sqrt2 / 4 and omega'(0) = -2 exactly.
    """
    t, hh = _grid(T, h)
    g, gdot, _ = heteroclinic(t)
    rhs = 6.0 * g * (-kappa_lambda(t)) * gdot
    f, df, slope0, a0 = _vp_solve(rhs, t, hh)
    return ProfileFunction(T=T, h=hh, values=f, dvalues=df, slope0=slope0,
                           a0=a0, rhs_values=rhs, decays=False, name="omega")


def profile_constants(T=DEFAULT_T, h=DEFAULT_H):
    """sigma1, sigma2 by composite Simpson, and the response slopes."""
    t, hh = _grid(T, h)
    g, gdot, gddot = heteroclinic(t)
    sigma1 = simpson(t * gdot * gddot, hh)
    tau = profile_tau_geom(T, h)
    sigma2 = 6.0 * simpson(tau.values * g * gdot ** 2, hh)
    return ProfileConstants(
        sigma1=sigma1,
        sigma2=sigma2,
        wdot0=profile_w(T, h).slope0,
        omegadot0=profile_omega(T, h).slope0,
    )


def ode_residual(profile, t_max=None):
    """Sup norm of f'' - W''(g) f - rhs by fourth-order central differences.

    Restricted to t <= t_max when given (the growing tau_lambda only admits
    an absolute residual bound on a bounded window).
    """
    f = profile.values
    h = profile.h
    t = profile.grid()
    d2 = (-f[4:] + 16.0 * f[3:-1] - 30.0 * f[2:-2] + 16.0 * f[1:-3] - f[:-4]) / (12.0 * h * h)
    g = heteroclinic(t[2:-2])[0]
    res = d2 - potential_d2(g) * f[2:-2] - profile.rhs_values[2:-2]
    if t_max is not None:
        res = res[t[2:-2] <= t_max]
    return float(np.max(np.abs(res)))
