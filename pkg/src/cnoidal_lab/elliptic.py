"""Jacobi elliptic functions and elliptic integrals of real argument.

Complete integrals come from the arithmetic-geometric mean; ``sn, cn, dn``
from the descending Landen transformation seeded by the same AGM sequence
(after reduction modulo ``4K``); the incomplete integral of the second kind
``E(xi, k) = int_0^xi dn^2`` splits off whole half-periods exactly and
integrates the remainder with fixed 64-point Gauss-Legendre.

All functions take the modulus ``k`` (not the parameter ``m = k**2``) and
accept scalars or numpy arrays for the argument.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError

__all__ = [
    "EllipticModulus",
    "JacobiTriple",
    "complete_K",
    "complete_E",
    "complete_K_complement",
    "jacobi",
    "incomplete_E",
    "agm_sequence",
    "nome",
    "sn2_harmonics",
]

AGM_TOL = 1e-15
_MAX_AGM = 40
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


@dataclass(frozen=True)
class EllipticModulus:
    k: float

    def __post_init__(self):
        k = float(self.k)
        if not 0.0 <= k <= 1.0:
            raise DomainError(f"elliptic modulus must lie in [0, 1], got {self.k!r}")
        object.__setattr__(self, "k", k)

    @property
    def kp(self):
        """Complementary modulus sqrt(1 - k^2)."""
        return float(np.sqrt((1.0 - self.k) * (1.0 + self.k)))

    def __float__(self):
        return self.k


class JacobiTriple(NamedTuple):
    sn: np.ndarray
    cn: np.ndarray
    dn: np.ndarray


def _modulus(k):
    return k.k if isinstance(k, EllipticModulus) else EllipticModulus(k).k


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def agm_sequence(k, kp=None):
    """AGM sequences ``(a_n, c_n)`` started from ``(1, k', k)``, for ``0 <= k < 1``.

    ``kp`` may be passed when k' is known more accurately than sqrt(1 - k^2).
    """
    kp = float(np.sqrt((1.0 - k) * (1.0 + k))) if kp is None else float(kp)
    a, b, c = 1.0, kp, float(k)
    aa, cc = [a], [c]
    for _ in range(_MAX_AGM):
        if abs(c) <= AGM_TOL * a:
            break
        a, b, c = 0.5 * (a + b), float(np.sqrt(a * b)), 0.5 * (a - b)
        aa.append(a)
        cc.append(c)
    return np.array(aa), np.array(cc)


def _complete(k):
    a, c = agm_sequence(k)
    big_k = np.pi / (2.0 * a[-1])
    weights = 2.0 ** (np.arange(len(c)) - 1.0)
    return big_k, big_k * (1.0 - float(np.sum(weights * c * c)))


def complete_K(k):
    """Complete elliptic integral of the first kind, defined for ``0 <= k < 1``."""
    k = _modulus(k)
    if k >= 1.0:
        raise DomainError("K(k) diverges at k = 1")
    return float(_complete(k)[0])


def complete_K_complement(kp):
    """K as a function of the complementary modulus k' > 0.

    Stays accurate when k is within rounding of 1, where 1 - k^2 cancels.
    """
    kp = float(kp)
    if not 0.0 < kp <= 1.0:
        raise DomainError(f"complementary modulus must lie in (0, 1], got {kp!r}")
    a, _ = agm_sequence(math.sqrt((1.0 - kp) * (1.0 + kp)), kp)
    return float(np.pi / (2.0 * a[-1]))


def complete_E(k):
    """Complete elliptic integral of the second kind, ``0 <= k <= 1``."""
    k = _modulus(k)
    if k == 1.0:
        return 1.0
    return float(_complete(k)[1])


def _landen_amplitude(r, a, c):
    n = len(a) - 1
    phi = (2.0 ** n) * a[-1] * r
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(c[j] / a[j] * np.sin(phi)))
    return phi


def _sncndn(xi, k):
    a, c = agm_sequence(k)
    period = 2.0 * np.pi / a[-1]  # 4K
    r = xi - period * np.round(xi / period)
    sign = np.where(r < 0.0, -1.0, 1.0)
    phi = _landen_amplitude(np.abs(r), a, c)
    cn = np.cos(phi)
    # dn^2 = k'^2 + k^2 cn^2 avoids the 0/0 of the Landen dn formula at xi = K.
    dn = np.sqrt((1.0 - k) * (1.0 + k) + k * k * cn * cn)
    return sign * np.sin(phi), cn, dn


def jacobi(xi, k):
    """Return ``JacobiTriple(sn, cn, dn)`` at real ``xi`` for modulus ``k``.

    ``k = 0`` gives (sin, cos, 1) and ``k = 1`` gives (tanh, sech, sech).
    """
    k = _modulus(k)
    x = np.asarray(xi, dtype=float)
    if k == 0.0:
        sn, cn, dn = np.sin(x), np.cos(x), np.ones_like(x)
    elif k == 1.0:
        sech = 1.0 / np.cosh(x)
        sn, cn, dn = np.tanh(x), sech, sech.copy()
    else:
        sn, cn, dn = _sncndn(x, k)
    return JacobiTriple(_out(sn), _out(cn), _out(dn))


def incomplete_E(xi, k):
    """Incomplete integral ``E(xi, k) = int_0^xi dn(y, k)^2 dy``.

    Writes ``xi = 2 q K + r`` with ``|r| <= K`` and returns
    ``2 q E(k) + int_0^r dn^2``, so ``E(xi + 2K) - E(xi) = 2E(k)`` holds by
    construction up to the rounding of the reduction.
    """
    k = _modulus(k)
    x = np.asarray(xi, dtype=float)
    if k == 0.0:
        return _out(x.copy())
    if k == 1.0:
        return _out(np.tanh(x))
    big_k, big_e = _complete(k)
    half = 2.0 * big_k
    q = np.round(x / half)
    r = x - half * q
    flat = r.reshape(-1)
    nodes = 0.5 * flat[:, None] * (_GL_NODES[None, :] + 1.0)
    cn = _sncndn(nodes, k)[1]
    dn2 = (1.0 - k) * (1.0 + k) + k * k * cn * cn
    part = 0.5 * flat * (dn2 @ _GL_WEIGHTS)
    return _out(2.0 * q * big_e + part.reshape(r.shape))


def nome(k):
    """Jacobi nome q = exp(-pi K(k') / K(k)) for 0 < k < 1."""
    k = _modulus(k)
    if not 0.0 < k < 1.0:
        raise DomainError("the nome is defined here for 0 < k < 1")
    kp = math.sqrt((1.0 - k) * (1.0 + k))
    return math.exp(-math.pi * complete_K(kp) / complete_K(k))


def sn2_harmonics(k, n_max):
    """Coefficients ``b`` with sn(xi, k)^2 = sum_{|j| <= n_max} b[|j|] exp(i pi j xi / K).

    Uses the nome series, so the tail decays like j q^j all the way to
    underflow rather than stalling at rounding level as sampled FFT data do.
    """
    k = _modulus(k)
    n_max = int(n_max)
    b = np.zeros(n_max + 1)
    if k == 0.0:
        b[0] = 0.5
        if n_max >= 1:
            b[1] = -0.25
        return b
    if k == 1.0:
        raise DomainError("sn^2 is not periodic at k = 1")
    _, c = agm_sequence(k)
    # (K - E) / (k^2 K) from the AGM tail; the c[0] = k term contributes 1/2.
    b[0] = 0.5 + float(np.sum(2.0 ** (np.arange(1, len(c)) - 1.0) * c[1:] ** 2)) / (k * k)
    big_k = complete_K(k)
    q = nome(k)
    j = np.arange(1, n_max + 1, dtype=float)
    with np.errstate(under="ignore"):
        qj = q ** j
        b[1:] = -(math.pi ** 2 / (k * k * big_k * big_k)) * j * qj / (1.0 - qj * qj)
    return b
