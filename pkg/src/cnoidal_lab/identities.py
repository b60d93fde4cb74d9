"""Closed-form generalized modes and the operator identities they satisfy.

Everything lives in the elliptic variable xi on one period [0, 4K(k)), with
j = sn(xi, k) and r = E(k) / K(k). The operators are

    Lm = -d^2 - (1 + k^2) + 2 k^2 j^2
    Mm = d^4 - 6 k^2 d j^2 d + 2 k^2 (1 + k^2) j^2 - (1 + k^2)^2
    Lp = -d^2 - (1 + k^2) + 6 k^2 j^2
    Mp = d^4 - 10 k^2 d j^2 d - 20 k^4 j^4 + 30 k^2 (1 + k^2) j^2 - (1 + 14 k^2 + k^4)

and the even mode V and odd mode U are

    V = cn dn + sn [E(xi, k) - r xi]
    U = r sn + k^2 sn cn^2 - cn dn [E(xi, k) - r xi].

Each identity maps V (or U) onto a multiple of j' = cn dn (or of j).
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .elliptic import EllipticModulus, complete_E, complete_K, incomplete_E, jacobi, sn2_harmonics
from .errors import DomainError
from .linops import galerkin_modes, harmonic_modes
from .wave import WaveFamily, family_from_ee

__all__ = [
    "IDENTITIES",
    "GeneralizedModes",
    "generalized_modes",
    "eval_V",
    "eval_U",
    "identity_operator",
    "identity_rhs",
    "verify_identity",
    "norms",
    "mu_from_appendix",
    "identity_table",
    "xi_grid",
]

# tag -> (mode acted on, short description)
IDENTITIES = {
    "Lminus_V": ("V", "Lm V = -2 (1 - r) j'"),
    "Mminus_V": ("V", "Mm V = 4 [k^2 - (1 - r)(1 + k^2)] j'"),
    "Kminus_V": ("V", "(Mm - c (1 + k^2) Lm) V = [4 k^2 + 2 (c - 2)(1 + k^2)(1 - r)] j'"),
    "Lplus_U": ("U", "Lp U = 2 (k^2 - 1 + (1 + k^2) r) j"),
    "Mplus_U": ("U", "Mp U = 4 [2 k^4 - k^2 - 1 + (1 + 4 k^2 + k^4) r] j"),
    "Kplus_U": ("U", "(Mp - 2 (1 + k^2) Lp) U = 4 k^2 [k^2 - 1 + 2 r] j"),
}


def _k(k):
    k = k.k if isinstance(k, EllipticModulus) else EllipticModulus(k).k
    if not 0.0 < k < 1.0:
        raise DomainError("the generalized modes need 0 < k < 1")
    return k


def _ratio(k):
    return complete_E(k) / complete_K(k)


def _secular(xi, k):
    """E(xi, k) - r xi, the periodic part of the incomplete integral."""
    return np.asarray(incomplete_E(xi, k)) - _ratio(k) * np.asarray(xi, dtype=float)


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def eval_V(xi, k):
    k = _k(k)
    sn, cn, dn = (np.asarray(t) for t in jacobi(xi, k))
    return _out(cn * dn + sn * _secular(xi, k))


def eval_U(xi, k):
    k = _k(k)
    sn, cn, dn = (np.asarray(t) for t in jacobi(xi, k))
    return _out(_ratio(k) * sn + k * k * sn * cn * cn - cn * dn * _secular(xi, k))


@dataclass(frozen=True)
class GeneralizedModes:
    k: EllipticModulus
    V: Callable
    U: Callable

    @property
    def period(self):
        return 4.0 * complete_K(self.k)


def generalized_modes(k):
    k = _k(k)
    return GeneralizedModes(
        EllipticModulus(k), lambda xi: eval_V(xi, k), lambda xi: eval_U(xi, k)
    )


def xi_grid(k, m):
    """Nodes j * 4K / m and the matching symbols for the xi-period."""
    period = 4.0 * complete_K(_k(k))
    nodes = np.arange(m) * (period / m)
    q = 2.0 * np.pi * np.fft.fftfreq(m, d=1.0 / m) / period
    return nodes, q, period


def _polys(name, k, c):
    k2 = k * k
    p = 1.0 + k2
    table = {
        "Lm": (0.0, (1.0, 0.0, 0.0), (-p, 2.0 * k2, 0.0)),
        "Mm": (1.0, (0.0, 6.0 * k2, 0.0), (-p * p, 2.0 * k2 * p, 0.0)),
        "Lp": (0.0, (1.0, 0.0, 0.0), (-p, 6.0 * k2, 0.0)),
        "Mp": (1.0, (0.0, 10.0 * k2, 0.0), (-(1.0 + 14.0 * k2 + k2 * k2), 30.0 * k2 * p, -20.0 * k2 * k2)),
    }
    if name in table:
        return table[name]
    if name in ("Km", "Kp"):
        mm, ll = ("Mm", "Lm") if name == "Km" else ("Mp", "Lp")
        a4, m1, m0 = table[mm]
        _, l1, l0 = table[ll]
        w = c * p
        return a4, tuple(x - w * y for x, y in zip(m1, l1)), tuple(x - w * y for x, y in zip(m0, l0))
    raise DomainError(f"unknown operator {name!r}")


def identity_operator(name, k, m, c=2.0):
    """Mode-space Galerkin matrix of Lm, Mm, Lp, Mp, Km(c) or Kp(c) in xi.

    Km(c) = Mm - c (1 + k^2) Lm and Kp(c) = Mp - c (1 + k^2) Lp.
    """
    k = _k(k)
    _, q, _ = xi_grid(k, m)
    a4, p1, p0 = _polys(name, k, c)
    s2, s4 = harmonic_modes(sn2_harmonics(k, (m - 1) // 2), 2, m)

    def data(poly):
        out = poly[1] * s2 + poly[2] * s4
        out[0] += poly[0]
        return out

    return galerkin_modes(a4, data(p1), data(p0), q).real


def _apply(mat, f):
    m = f.size
    return np.fft.ifft(mat @ np.fft.fft(f) / math.sqrt(m)).real * math.sqrt(m)


def identity_rhs(which, k, c=2.0):
    """Coefficient multiplying j' (V identities) or j (U identities)."""
    k = _k(k)
    k2 = k * k
    p = 1.0 + k2
    r = _ratio(k)
    coef = {
        "Lminus_V": -2.0 * (1.0 - r),
        "Mminus_V": 4.0 * (k2 - (1.0 - r) * p),
        "Kminus_V": 4.0 * k2 + 2.0 * (c - 2.0) * p * (1.0 - r),
        "Lplus_U": 2.0 * (k2 - 1.0 + p * r),
        "Mplus_U": 4.0 * (2.0 * k2 * k2 - k2 - 1.0 + (1.0 + 4.0 * k2 + k2 * k2) * r),
        "Kplus_U": 4.0 * k2 * (k2 - 1.0 + 2.0 * r),
    }
    if which not in coef:
        raise DomainError(f"unknown identity {which!r}; choose from {sorted(IDENTITIES)}")
    return coef[which]


_OPERATOR = {
    "Lminus_V": "Lm",
    "Mminus_V": "Mm",
    "Kminus_V": "Km",
    "Lplus_U": "Lp",
    "Mplus_U": "Mp",
    "Kplus_U": "Kp",
}


def verify_identity(which, k, m=256, c=2.0):
    """Max-norm residual of one identity on an m-point xi grid.

    ``c`` is used by Kminus_V; Kplus_U is stated at c = 2.
    """
    coef = identity_rhs(which, k, c)
    k = _k(k)
    nodes, _, _ = xi_grid(k, m)
    sn, cn, dn = jacobi(nodes, k)
    if IDENTITIES[which][0] == "V":
        f, target = eval_V(nodes, k), coef * cn * dn
    else:
        f, target = eval_U(nodes, k), coef * sn
    cc = 2.0 if which == "Kplus_U" else c
    lhs = _apply(identity_operator(_OPERATOR[which], k, m, cc), f)
    return float(np.max(np.abs(lhs - target)))


def norms(k):
    """(||j||^2, ||j'||^2, <j', V>) over one period, in closed form."""
    k = _k(k)
    k2 = k * k
    big_k = complete_K(k)
    r = _ratio(k)
    n1 = 4.0 * big_k / k2 * (1.0 - r)
    n2 = 4.0 * big_k / (3.0 * k2) * (k2 - 1.0 + (k2 + 1.0) * r)
    n3 = 2.0 * big_k / k2 * (k2 - 1.0 + 2.0 * r - r * r)
    return n1, n2, n3


def mu_from_appendix(w, c):
    """Band curvature at kappa = 0 from the closed-form norms and the V resolvent."""
    w = w if isinstance(w, WaveFamily) else family_from_ee(w)
    if w.is_soliton or w.ee == 1.0:
        raise DomainError("the curvature formula needs 0 < ee < 1")
    if c < 1.0:
        raise DomainError("the curvature formula is established only for c >= 1")
    k = w.k.k
    p = 1.0 + k * k
    n1, n2, n3 = norms(k)
    den = 4.0 * k * k + 2.0 * (c - 2.0) * p * (1.0 - _ratio(k))
    bracket = -4.0 * (c - 2.0) ** 2 * p * n3 / den + 3.0 * n2 / p + (3.0 - c) * n1
    return 2.0 * w.ell ** 2 / n1 * bracket


def identity_table(ks, m=256, c=2.0):
    """Rows (tag, k, m, residual) for every identity and modulus."""
    return [(tag, float(k), int(m), verify_identity(tag, k, m, c)) for k in ks for tag in IDENTITIES]
