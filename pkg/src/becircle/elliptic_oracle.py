"""Closed-form periodic solutions of the rescaled equation u'' = W'(u).

The family  g(x, k) = k sqrt(2/(1+k^2)) sn(x / sqrt(1+k^2), k)  provides an
analytic oracle for every grid solver in the package, together with the
eps <-> lambda correspondence of the conserved quantity.

All internals are parameterized by the complementary modulus kp = sqrt(1-k^2)
so that moduli exponentially close to 1 (the interesting regime) keep full
relative accuracy; k itself rounds to 1.0 in double precision long before
the underlying solution family degenerates.
"""
import math
from dataclasses import dataclass

from .errors import DomainError, NoPositiveSolution

SQRT2 = math.sqrt(2.0)

_LANDEN_TINY = 1e-15
_LANDEN_CAP = 32


def _agm(a, b):
    """Arithmetic-geometric mean; handles b many orders below a."""
    for _ in range(80):
        if abs(a - b) <= 1e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def complete_K(k):
    """Complete elliptic integral of the first kind via the AGM."""
    if not 0.0 <= k < 1.0:
        raise DomainError(f"complete_K requires 0 <= k < 1, got {k}")
    kp = math.sqrt((1.0 - k) * (1.0 + k))
    return math.pi / (2.0 * _agm(1.0, kp))


def _complete_K_from_kp(kp):
    if not 0.0 < kp <= 1.0:
        raise DomainError(f"complementary modulus must lie in (0, 1], got {kp}")
    return math.pi / (2.0 * _agm(1.0, kp))


def _landen_chain(kp):
    """Descending Landen moduli [(k1, kp1), (k2, kp2), ...] until k < 1e-15.

    Level j+1 from level j:  k_{j+1} = (1 - kp_j) / (1 + kp_j); the
    complement is tracked through 1 - k_{j+1} = 2 kp_j / (1 + kp_j) to avoid
    cancellation when kp_j is tiny.
    """
    chain = []
    kp_j = kp
    for _ in range(_LANDEN_CAP):
        k_next = (1.0 - kp_j) / (1.0 + kp_j)
        one_minus = 2.0 * kp_j / (1.0 + kp_j)
        kp_next = math.sqrt(one_minus * (1.0 + k_next))
        chain.append((k_next, kp_next))
        if k_next < _LANDEN_TINY:
            break
        kp_j = kp_next
    return chain


def _sn_cn_dn_kp(x, kp):
    """Jacobi sn, cn, dn at modulus k = sqrt(1 - kp^2), kp-parameterized."""
    if kp >= 1.0:  # k == 0
        return math.sin(x), math.cos(x), 1.0
    if kp <= 0.0:  # k == 1
        s = math.tanh(x)
        c = 1.0 / math.cosh(x)
        return s, c, c
    chain = _landen_chain(kp)
    u = x
    for k_j, _ in chain:
        u /= 1.0 + k_j
    s, c, d = math.sin(u), math.cos(u), 1.0
    k_orig = math.sqrt((1.0 - kp) * (1.0 + kp))
    # moduli of the level being ascended into: original on the last step
    uppers = [(k_orig, kp)] + list(chain[:-1])
    for (k_low, _), (k_up, kp_up) in zip(reversed(chain), reversed(uppers)):
        denom = 1.0 + k_low * s * s
        c = c * d / denom
        s = (1.0 + k_low) * s / denom
        d = math.sqrt(kp_up * kp_up + k_up * k_up * c * c)
    return s, c, d


def jacobi_sn(x, k):
    """Jacobi elliptic (sn, cn, dn) at real x, 0 <= k <= 1.

    Descending Landen transformation; the periodic extension is handled by
    quarter-period reduction for finite-period moduli.
    """
    if not 0.0 <= k <= 1.0:
        raise DomainError(f"jacobi_sn requires 0 <= k <= 1, got {k}")
    if k == 1.0:
        s = math.tanh(x)
        c = 1.0 / math.cosh(x)
        return s, c, c
    kp = math.sqrt((1.0 - k) * (1.0 + k))
    K = _complete_K_from_kp(kp)
    period = 4.0 * K
    x = math.fmod(x, period)
    if x < 0:
        x += period
    # fold into [0, K] using sn(2K - u) = sn(u), sn(u + 2K) = -sn(u)
    flip_s = 1.0
    if x > 2.0 * K:
        x = x - 2.0 * K
        flip_s = -1.0
    flip_c = 1.0
    if x > K:
        x = 2.0 * K - x
        flip_c = -1.0
    s, c, d = _sn_cn_dn_kp(x, kp)
    return flip_s * s, flip_s * flip_c * c, d


@dataclass(frozen=True)
class EllipticModulus:
    k: float
    kp: float            # complementary modulus, exact carrier of 1 - k^2
    zero_spacing: float  # rescaled distance between consecutive zeros


@dataclass(frozen=True)
class LambdaEpsPair:
    eps: float
    lam: float        # conserved quantity, in (0, 1/4)
    amplitude: float  # max of the solution


def zero_spacing_from_kp(kp):
    """Distance between consecutive zeros of the family: 2 K(k) sqrt(1+k^2)."""
    return 2.0 * _complete_K_from_kp(kp) * math.sqrt(2.0 - kp * kp)


def ac_family(x, k):
    """The closed-form solution family g(x, k) = k sqrt(2/(1+k^2)) sn(...)."""
    if not 0.0 < k <= 1.0:
        raise DomainError(f"ac_family requires 0 < k <= 1, got {k}")
    if k == 1.0:
        return math.tanh(x / SQRT2)
    amp = k * math.sqrt(2.0 / (1.0 + k * k))
    s, _, _ = jacobi_sn(x / math.sqrt(1.0 + k * k), k)
    return amp * s


def _amplitude_from_mod(mod):
    return mod.k * SQRT2 / math.sqrt(2.0 - mod.kp * mod.kp)


def ac_family_mod(x, mod):
    """ac_family evaluated through an EllipticModulus (kp-safe near k = 1)."""
    scale = math.sqrt(2.0 - mod.kp * mod.kp)
    t = x / scale
    K = _complete_K_from_kp(mod.kp)
    period = 4.0 * K
    t = math.fmod(t, period)
    if t < 0:
        t += period
    sign = 1.0
    if t > 2.0 * K:
        t -= 2.0 * K
        sign = -1.0
    if t > K:
        t = 2.0 * K - t
    s, _, _ = _sn_cn_dn_kp(t, mod.kp)
    return sign * _amplitude_from_mod(mod) * s


_KP_FLOOR = 1e-300


def modulus_for(eps, L):
    """Modulus whose zero spacing matches the rescaled interval length L/eps.

    Monotone bisection performed on ln(kp) so that complementary moduli
    exponentially close to 0 (k -> 1) retain relative accuracy.
    """
    if eps <= 0 or L <= 0:
        raise DomainError("eps and L must be positive")
    if eps >= L / math.pi:
        raise NoPositiveSolution(
            f"eps={eps} at or above the existence threshold {L / math.pi}"
        )
    target = L / eps
    lo, hi = math.log(_KP_FLOOR), -1e-18  # kp in (1e-300, ~1)
    if zero_spacing_from_kp(math.exp(lo)) < target:
        raise DomainError("rescaled length beyond representable moduli")
    # zero_spacing decreases in kp: keep spacing(lo) > target > spacing(hi)
    for _ in range(140):
        mid = 0.5 * (lo + hi)
        if zero_spacing_from_kp(math.exp(mid)) > target:
            lo = mid
        else:
            hi = mid
    kp = math.exp(0.5 * (lo + hi))
    k = math.sqrt((1.0 - kp) * (1.0 + kp))
    return EllipticModulus(k=k, kp=kp, zero_spacing=zero_spacing_from_kp(kp))


def lambda_of_eps(eps, L):
    """Conserved quantity and amplitude of the positive arch on [0, L].

    lam = W(amplitude) evaluated through kp, avoiding the 1 - amplitude^2
    cancellation:  1 - amp^2 = kp^2 / (1 + k^2).
    """
    mod = modulus_for(eps, L)
    one_plus_k2 = 2.0 - mod.kp * mod.kp
    one_minus_amp2 = mod.kp * mod.kp / one_plus_k2
    lam = one_minus_amp2 * one_minus_amp2 / 4.0
    return LambdaEpsPair(eps=eps, lam=lam, amplitude=_amplitude_from_mod(mod))
