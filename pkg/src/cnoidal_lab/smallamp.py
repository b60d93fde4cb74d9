"""Small-amplitude model of the bands of P+-(c, kappa) near the zero wave.

At a = 0 the operators have constant coefficients and their bands are the
polynomials lambda0(n, kappa, c). For 1 - ee = a^2 small the two bands that
touch zero at kappa = 0 (n = +1 and n = -1) are governed, to O(a^4), by the
2x2 symmetric matrix diag(lambda0(1), lambda0(-1)) + a^2 G(kappa).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError
from .linops import assemble, band_curvature, z_grid
from .wave import family_from_ee

__all__ = [
    "SmallAmpParams",
    "MAX_AMPLITUDE",
    "lambda0",
    "matrix_model",
    "band_expansion",
    "c_bounds_asymptotic",
    "figure2_rows",
    "exact_band_rows",
    "curvature_flip",
    "full_pair",
]

MAX_AMPLITUDE = 0.3


@dataclass(frozen=True)
class SmallAmpParams:
    a: float
    gamma: float = 0.0
    kappa: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.a <= MAX_AMPLITUDE:
            raise DomainError(f"amplitude must lie in [0, {MAX_AMPLITUDE}], got {self.a}")

    @property
    def c(self):
        return 2.0 + self.gamma

    @property
    def ee(self):
        return 1.0 - self.a * self.a


def lambda0(n, kappa, c):
    """Constant-coefficient band (kappa + n)^4 - c (kappa + n)^2 + c - 1."""
    p = (kappa + n) ** 2
    return p * p - c * p + c - 1.0


def _g_entries(sign, kappa, c):
    kp, km = (kappa + 1.0) ** 2, (kappa - 1.0) ** 2
    if sign == "minus":
        diag = [-1.5 * p * p + 0.75 * c * p + 0.5 * (1.0 - c) + 1.5 * p for p in (kp, km)]
        off = 0.25 * (1.0 - c) + 0.75 * (kappa * kappa - 1.0)
    elif sign == "plus":
        diag = [-1.5 * p * p + 0.75 * c * p + 1.5 * (1.0 - c) + 2.5 * p for p in (kp, km)]
        off = 0.75 * (5.0 - c) + 1.25 * (kappa * kappa - 1.0)
    else:
        raise DomainError(f"sign must be 'plus' or 'minus', got {sign!r}")
    return diag, off


def matrix_model(sign, p, c=None):
    """The 2x2 matrix acting on the (n = 1, n = -1) Fourier pair."""
    c = p.c if c is None else float(c)
    diag, off = _g_entries(sign, p.kappa, c)
    a2 = p.a * p.a
    return np.array(
        [
            [lambda0(1, p.kappa, c) + a2 * diag[0], a2 * off],
            [a2 * off, lambda0(-1, p.kappa, c) + a2 * diag[1]],
        ]
    )


def _eig2(mat):
    mean = 0.5 * (mat[0, 0] + mat[1, 1])
    rad = math.hypot(0.5 * (mat[0, 0] - mat[1, 1]), mat[0, 1])
    return mean + rad, mean - rad


def band_expansion(sign, p, c=None):
    """Return (lam_plus1, lam_minus1), the eigenvalues of the model matrix.

    For the minus sign the kappa = 0 value of the lower eigenvalue is
    subtracted, which pins the gauge mode exactly at zero.
    """
    hi, lo = _eig2(matrix_model(sign, p, c))
    if sign == "minus":
        offset = _eig2(matrix_model(sign, SmallAmpParams(p.a, p.gamma, 0.0), c))[1]
        hi, lo = hi - offset, lo - offset
    return hi, lo


def c_bounds_asymptotic(a):
    """Leading-order stability interval 2 -+ sqrt(2) a."""
    if a < 0:
        raise DomainError("amplitude must be non-negative")
    r = math.sqrt(2.0) * a
    return 2.0 - r, 2.0 + r


def exact_band_rows(c, kappas, n_range=range(-3, 4)):
    """Rows (kappa, lambda0(n) for n in n_range) of the a = 0 bands."""
    ns = list(n_range)
    return [[k, *(lambda0(n, k, c) for n in ns)] for k in kappas]


def figure2_rows(a, c, kappas, sign="minus"):
    """Rows (kappa, lam_minus1, lam_plus1) from the model matrix."""
    rows = []
    for k in kappas:
        hi, lo = band_expansion(sign, SmallAmpParams(a, c - 2.0, float(k)), c)
        rows.append([float(k), lo, hi])
    return rows


def curvature_flip(a, m=64, h=3e-3):
    """Values of c on either side of 2 where the measured P- band curvature changes sign.

    Roots are bracketed in [r/2, 2r] around 2 with r = sqrt(2) a and found by
    Brent's method on the finite-difference curvature of the full operator.
    """
    if not 0.0 < a <= MAX_AMPLITUDE:
        raise DomainError(f"amplitude must lie in (0, {MAX_AMPLITUDE}], got {a}")
    w = family_from_ee(1.0 - a * a)
    g = z_grid(m)

    def curv(c):
        return band_curvature(w, c, g, h)

    r = math.sqrt(2.0) * a
    lo = brentq(curv, 2.0 - 2.0 * r, 2.0 - 0.5 * r, xtol=1e-12)
    hi = brentq(curv, 2.0 + 0.5 * r, 2.0 + 2.0 * r, xtol=1e-12)
    return lo, hi


def full_pair(a, kappa, c=2.0, m=64, sign="minus"):
    """The two eigenvalues of the full P-+ operator carried mostly by the modes n = +-1.

    Returned in ascending order, comparable to (lam_minus1, lam_plus1).
    """
    if not 0.0 <= a <= MAX_AMPLITUDE:
        raise DomainError(f"amplitude must lie in [0, {MAX_AMPLITUDE}], got {a}")
    kind = {"minus": "Pminus", "plus": "Pplus"}.get(sign)
    if kind is None:
        raise DomainError(f"sign must be 'plus' or 'minus', got {sign!r}")
    op = assemble(kind, 1.0 - a * a, c, kappa, z_grid(m))
    vals, vecs = np.linalg.eigh(op.modes)
    n = np.fft.fftfreq(m, d=1.0 / m)
    weight = np.sum(np.abs(vecs[np.abs(n) == 1]) ** 2, axis=0)
    return tuple(np.sort(vals[np.argsort(-weight)[:2]]))
