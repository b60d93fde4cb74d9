"""The real cnoidal wave family u0(x; ee) of the defocusing cubic NLS.

The profile solves u0'' + (1 - u0^2) u0 = 0 with first integral
(u0')^2 = ((1 - u0^2)^2 - ee^2) / 2. Everything is derived from ee:

    k   = sqrt((1 - ee) / (1 + ee))
    amp = sqrt(1 - ee)
    u0  = amp * sn(x * sqrt((1 + ee) / 2), k)

and |u0| has half-period t0 = 2 sqrt(2 / (1 + ee)) K(k), so u0 itself is
2*t0-periodic. ee = 0 is the black soliton tanh(x / sqrt 2) (t0 = inf) and
ee = 1 the zero wave (t0 = pi, the small-amplitude limit).
"""

import math
from dataclasses import dataclass

import numpy as np

from .elliptic import EllipticModulus, complete_K_complement, jacobi, sn2_harmonics
from .errors import DomainError, SolitonLimitError

__all__ = [
    "WaveFamily",
    "family_from_ee",
    "profile",
    "profile_derivatives",
    "first_integral_residual",
    "black_soliton",
    "phase_orbit",
    "rescaled_profile",
    "square_harmonics",
    "SOLITON_HALF_WIDTH",
]

# Half-width of the window used when sampling the heteroclinic orbit.
SOLITON_HALF_WIDTH = 30.0


@dataclass(frozen=True)
class WaveFamily:
    ee: float
    k: EllipticModulus
    ell: float
    t0: float
    amp: float

    @property
    def scale(self):
        """Argument scaling sqrt((1 + ee) / 2) inside sn."""
        return math.sqrt(0.5 * (1.0 + self.ee))

    @property
    def is_soliton(self):
        return self.ee == 0.0

    @property
    def period(self):
        """Period 2*t0 of u0."""
        return 2.0 * self.t0

    def require_periodic(self):
        if self.is_soliton:
            raise SolitonLimitError("the black soliton (ee = 0) has no finite period")
        return self


def family_from_ee(ee):
    """Build the wave parameters for integration constant ``ee`` in [0, 1]."""
    ee = float(ee)
    if not 0.0 <= ee <= 1.0 or math.isnan(ee):
        raise DomainError(f"ee must lie in [0, 1], got {ee!r}")
    k = EllipticModulus(math.sqrt((1.0 - ee) / (1.0 + ee)))
    if ee == 0.0:
        t0, ell = math.inf, 0.0
    else:
        # k' = sqrt(2 ee / (1 + ee)) directly: k itself rounds to 1 for tiny ee
        kp = math.sqrt(2.0 * ee / (1.0 + ee))
        t0 = 2.0 * math.sqrt(2.0 / (1.0 + ee)) * complete_K_complement(kp)
        ell = math.pi / t0
    return WaveFamily(ee=ee, k=k, ell=ell, t0=t0, amp=math.sqrt(1.0 - ee))


def _as_family(w):
    return w if isinstance(w, WaveFamily) else family_from_ee(w)


def _triple(w, x):
    x = np.asarray(x, dtype=float)
    sign = np.where(x < 0.0, -1.0, 1.0)
    sn, cn, dn = jacobi(w.scale * np.abs(x), w.k)
    return sign, np.asarray(sn), np.asarray(cn), np.asarray(dn)


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def profile(w, x):
    """u0(x); odd symmetry is exact because sn is evaluated at |x|."""
    w = _as_family(w)
    sign, sn, _, _ = _triple(w, x)
    return _out(w.amp * sign * sn)


def profile_derivatives(w, x):
    """Return ``(u0, u0', u0'')`` with u0'' taken from the wave ODE."""
    w = _as_family(w)
    sign, sn, cn, dn = _triple(w, x)
    u0 = w.amp * sign * sn
    du0 = w.amp * w.scale * cn * dn
    ddu0 = -(1.0 - u0 * u0) * u0
    return _out(u0), _out(du0), _out(ddu0)


def first_integral_residual(w, x):
    """(u0')^2 - ((1 - u0^2)^2 - ee^2) / 2 at ``x``."""
    w = _as_family(w)
    u0, du0, _ = profile_derivatives(w, x)
    u0 = np.asarray(u0)
    return _out(np.asarray(du0) ** 2 - 0.5 * ((1.0 - u0 * u0) ** 2 - w.ee ** 2))


def black_soliton(x):
    return _out(np.tanh(np.asarray(x, dtype=float) / math.sqrt(2.0)))


def rescaled_profile(w, z):
    """U(z) = u0(z / ell) and U'(z), the 2*pi-periodic form of the wave."""
    w = _as_family(w).require_periodic()
    u0, du0, _ = profile_derivatives(w, np.asarray(z, dtype=float) / w.ell)
    return u0, _out(np.asarray(du0) / w.ell)


def phase_orbit(w, n):
    """Sample ``n`` points ``(u0, u0')`` along the level set of the first integral.

    Periodic members are sampled over one closed period [0, 2*t0] (first and
    last rows coincide). The soliton is sampled on a wide symmetric window so
    the end points sit next to the saddles (-1, 0) and (1, 0).
    """
    w = _as_family(w)
    n = int(n)
    if n < 2:
        raise DomainError("phase_orbit needs n >= 2")
    if w.is_soliton:
        x = np.linspace(-SOLITON_HALF_WIDTH, SOLITON_HALF_WIDTH, n)
    else:
        x = np.linspace(0.0, w.period, n)
    u0, du0, _ = profile_derivatives(w, x)
    return np.column_stack([u0, du0])


def square_harmonics(w, n_max):
    """Coefficients of u0^2 in exp(2 pi i j x / t0), |j| <= n_max (see sn2_harmonics)."""
    w = _as_family(w).require_periodic()
    return w.amp ** 2 * sn2_harmonics(w.k, n_max)
