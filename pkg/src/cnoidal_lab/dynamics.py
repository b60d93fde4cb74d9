"""Periodic NLS evolution, conserved functionals and modulation tracking.

The flow is i psi_t + psi_xx - |psi|^2 psi = 0 on [0, T) with T a multiple of
the wave period 2*t0. The standing wave is psi = u0(x) exp(-i t), and nearby
solutions are written as

    exp(i (t + theta)) psi(x + xi, t) = u0(x) + u(x, t) + i v(x, t)

with (xi, theta) fixed by <u0', u> = 0 and <u0, v> = 0.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateFitError,
    DomainError,
    GridError,
    IntegrationError,
    OutsideTubeError,
)
from .wave import WaveFamily, family_from_ee, profile_derivatives

__all__ = [
    "Field",
    "ConservedSet",
    "ModulationFit",
    "ExperimentReport",
    "wave_field",
    "functionals",
    "variational_residual",
    "evolve",
    "fit_modulation",
    "modulation_rates",
    "h2_norm",
    "random_direction",
    "stability_experiment",
    "SCHEMES",
]

# Yoshida's triple-jump weights lift the symmetric Strang step to order 4.
_W1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
_W0 = 1.0 - 2.0 * _W1
SCHEMES = {"strang": (1.0,), "yoshida4": (_W1, _W0, _W1)}

# dt * kmax^2 above this is treated as a misconfiguration.
STABILITY_GUARD = 100.0
TUBE_FRACTION = 0.5
MAX_NEWTON = 50
SANDWICH_FLOOR = 1e-6


@dataclass
class Field:
    values: np.ndarray
    period: float

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        m = self.values.size
        if self.values.ndim != 1 or m < 64 or m % 2:
            raise GridError(f"a field needs an even number >= 64 of samples, got {m}")
        if not (self.period > 0 and math.isfinite(self.period)):
            raise GridError("field period must be finite and positive")

    @property
    def m(self):
        return self.values.size

    @property
    def h(self):
        return self.period / self.m

    @property
    def nodes(self):
        return np.arange(self.m) * self.h

    @property
    def wavenumbers(self):
        return 2.0 * np.pi * np.fft.fftfreq(self.m, d=1.0 / self.m) / self.period

    def deriv(self, order=1, values=None):
        f = self.values if values is None else values
        q = self.wavenumbers
        if order % 2:
            q = q.copy()
            q[self.m // 2] = 0.0
        return np.fft.ifft((1j * q) ** order * np.fft.fft(f))

    def shifted(self, s):
        """Samples of x -> psi(x + s), by exact phase shift of the modes."""
        q = self.wavenumbers
        mult = np.exp(1j * q * s)
        mult[self.m // 2] = math.cos(q[self.m // 2] * s)
        return Field(np.fft.ifft(mult * np.fft.fft(self.values)), self.period)

    def like(self, values):
        return Field(values, self.period)


def _family(w):
    return w if isinstance(w, WaveFamily) else family_from_ee(w)


def _inner(f, g, h):
    return h * float(np.real(np.vdot(f, g)))


def wave_field(w, m, n_periods=1):
    """The wave u0 sampled on n_periods periods with m points per period."""
    w = _family(w).require_periodic()
    period = n_periods * w.period
    x = np.arange(m * n_periods) * (period / (m * n_periods))
    return Field(profile_derivatives(w, x)[0], period)


def _check_period(psi, w):
    ratio = psi.period / w.period
    if ratio < 0.5 or abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
        raise GridError(f"field period {psi.period} is not a multiple of 2*t0 = {w.period}")


@dataclass(frozen=True)
class ConservedSet:
    e: float
    q: float
    mom: float
    r: float
    s: float
    lambda_c: float
    c: float = 2.0

    def as_dict(self):
        return {"E": self.e, "Q": self.q, "M": self.mom, "R": self.r, "S": self.s, "Lambda": self.lambda_c}


def functionals(psi, w, c=2.0):
    """E, Q, M, R, S and Lambda_c = S - c E by spectral derivatives."""
    w = _family(w).require_periodic()
    _check_period(psi, w)
    f = psi.values
    fx = psi.deriv(1)
    fxx = psi.deriv(2)
    rho = np.abs(f) ** 2
    rho_x = 2.0 * np.real(np.conj(f) * fx)
    h = psi.h
    e = h * float(np.sum(np.abs(fx) ** 2 + 0.5 * (1.0 - rho) ** 2))
    q = h * float(np.sum(rho))
    mom = -h * float(np.sum(np.imag(np.conj(f) * fx)))
    r = h * float(np.sum(np.abs(fxx) ** 2 + 3.0 * rho * np.abs(fx) ** 2 + 0.5 * rho_x ** 2 + 0.5 * rho ** 3))
    s = r - 0.5 * (3.0 - w.ee ** 2) * q
    return ConservedSet(e=e, q=q, mom=mom, r=r, s=s, lambda_c=s - c * e, c=c)


def h2_norm(f, period):
    """sqrt(||f||^2 + ||f_x||^2 + ||f_xx||^2) for periodic samples."""
    f = np.asarray(f)
    m = f.size
    q = 2.0 * np.pi * np.fft.fftfreq(m, d=1.0 / m) / period
    fh = np.fft.fft(f)
    weight = 1.0 + q * q + q ** 4
    return math.sqrt(period / m ** 2 * float(np.sum(weight * np.abs(fh) ** 2)))


def random_direction(rng, m, period, n_modes, decay=2.0):
    """Smooth random complex trigonometric polynomial with modes |n| <= n_modes."""
    n = np.fft.fftfreq(m, d=1.0 / m)
    mask = (np.abs(n) <= n_modes) & (np.abs(n) < m // 2)
    coef = np.zeros(m, dtype=complex)
    k = int(mask.sum())
    coef[mask] = (rng.standard_normal(k) + 1j * rng.standard_normal(k)) / (1.0 + np.abs(n[mask])) ** decay
    f = np.fft.ifft(coef)
    return f / h2_norm(f, period)


def variational_residual(w, c=2.0, g=None, n_dirs=20, eps=1e-4, seed=0):
    """Largest normalized first variation of E and of S at u0.

    Central differences along ``n_dirs`` random smooth complex directions of
    unit H^2 norm. ``g`` is the number of grid points per period (default 256).
    """
    w = _family(w).require_periodic()
    m = 256 if g is None else int(getattr(g, "m", g))
    base = wave_field(w, m)
    rng = np.random.default_rng(seed)
    res_e = res_s = 0.0
    for _ in range(n_dirs):
        d = random_direction(rng, m, base.period, m // 16)
        plus = functionals(base.like(base.values + eps * d), w, c)
        minus = functionals(base.like(base.values - eps * d), w, c)
        res_e = max(res_e, abs(plus.e - minus.e) / (2.0 * eps))
        res_s = max(res_s, abs(plus.s - minus.s) / (2.0 * eps))
    return res_e, res_s


def evolve(psi0, dt, steps, scheme="yoshida4"):
    """Advance NLS by ``steps`` steps of a symmetric split-step scheme.

    Each Strang stage is a half nonlinear phase rotation, an exact linear
    step in Fourier space and another half rotation, so the discrete L^2
    norm is preserved to rounding. ``yoshida4`` composes three stages with
    the triple-jump weights.
    """
    steps = int(steps)
    if steps < 1:
        raise DomainError("steps must be >= 1")
    if scheme not in SCHEMES:
        raise DomainError(f"unknown scheme {scheme!r}")
    q2 = psi0.wavenumbers ** 2
    if abs(dt) * float(q2.max()) > STABILITY_GUARD:
        raise IntegrationError(
            f"dt * kmax^2 = {abs(dt) * q2.max():.3g} exceeds the guard {STABILITY_GUARD}"
        )
    stages = [(wgt * dt, np.exp(-1j * q2 * wgt * dt)) for wgt in SCHEMES[scheme]]
    psi = psi0.values.copy()
    for n in range(steps):
        for tau, lin in stages:
            psi *= np.exp(-0.5j * tau * (psi.real ** 2 + psi.imag ** 2))
            psi = np.fft.ifft(lin * np.fft.fft(psi))
            psi *= np.exp(-0.5j * tau * (psi.real ** 2 + psi.imag ** 2))
        if not np.all(np.isfinite(psi)):
            raise IntegrationError(f"non-finite values after step {n + 1}")
    return psi0.like(psi)


@dataclass
class ModulationFit:
    xi: float
    theta: float
    u: Field
    v: Field
    residual: float
    iterations: int = 0

    def perturbation(self):
        return self.u.values.real + 1j * self.v.values.real

    def distance_h2(self):
        return h2_norm(self.perturbation(), self.u.period)


def _f_and_jac(w, psi, x, t, xi, theta):
    u0, du0, ddu0 = profile_derivatives(w, x - xi)
    rot = np.exp(1j * (t + theta)) * psi.values
    re, im = rot.real, rot.imag
    h = psi.h
    f = np.array([_inner(du0, re, h), _inner(u0, im, h)])
    jac = np.array(
        [
            [-_inner(ddu0, re, h), -_inner(du0, im, h)],
            [-_inner(du0, im, h), _inner(u0, re, h)],
        ]
    )
    return f, jac


def fit_modulation(psi, w, t=0.0, guess=(0.0, 0.0), tol=1e-12):
    """Newton solve for (xi, theta) enforcing the two orthogonality conditions."""
    w = _family(w).require_periodic()
    _check_period(psi, w)
    x = psi.nodes
    xi, theta = float(guess[0]), float(guess[1])
    u0 = profile_derivatives(w, x)[0]
    scale = math.sqrt(_inner(u0, u0, psi.h)) * max(1.0, math.sqrt(_inner(psi.values, psi.values, psi.h)))
    res = math.inf
    for it in range(1, MAX_NEWTON + 1):
        f, jac = _f_and_jac(w, psi, x, t, xi, theta)
        res = float(np.max(np.abs(f)))
        if res <= tol * scale:
            break
        det = float(np.linalg.det(jac))
        # entries are O(||u0|| ||psi||) for a healthy fit; measure det against that
        if abs(det) <= 1e-12 * scale * scale:
            raise DegenerateFitError("modulation Jacobian is singular")
        dxi, dth = np.linalg.solve(jac, -f)
        xi += dxi
        theta += dth
    else:
        raise OutsideTubeError(f"Newton did not converge in {MAX_NEWTON} iterations (residual {res:.3e})")
    if abs(xi - guess[0]) > 0.5 * w.t0:
        raise OutsideTubeError("Newton left the basin of the initial guess")
    pert = np.exp(1j * (t + theta)) * psi.shifted(xi).values - u0
    if math.sqrt(_inner(pert, pert, psi.h)) > TUBE_FRACTION * math.sqrt(_inner(u0, u0, psi.h)):
        raise OutsideTubeError("field is not close to the orbit of the wave")
    return ModulationFit(
        xi=xi,
        theta=theta % (2.0 * math.pi),
        u=psi.like(pert.real),
        v=psi.like(pert.imag),
        residual=res,
        iterations=it,
    )


def modulation_rates(fit, w):
    """(xi_dot, theta_dot) from the 2x2 linear system of the modulation equations."""
    w = _family(w).require_periodic()
    u = fit.u.values.real
    v = fit.v.values.real
    f = fit.u
    h = f.h
    u0, du0, _ = profile_derivatives(w, f.nodes)
    ux = f.deriv(1, u).real
    vx = f.deriv(1, v).real
    uxx = f.deriv(2, u).real
    vxx = f.deriv(2, v).real
    lplus_u = -uxx + (3.0 * u0 * u0 - 1.0) * u
    lminus_v = -vxx + (u0 * u0 - 1.0) * v
    b = np.array(
        [
            [-_inner(du0, du0, h) - _inner(du0, ux, h), _inner(du0, v, h)],
            [_inner(u0, vx, h), _inner(u0, u0, h) + _inner(u0, u, h)],
        ]
    )
    quad = u * u + v * v
    rhs = np.array(
        [
            _inner(du0, lminus_v, h) + _inner(du0, (2.0 * u0 * u + quad) * v, h),
            _inner(u0, lplus_u, h) + _inner(u0, (3.0 * u0 * u + quad) * u + u0 * v * v, h),
        ]
    )
    if abs(np.linalg.det(b)) <= 1e-12 * float(np.max(np.abs(b))) ** 2:
        raise DegenerateFitError("modulation rate matrix is singular")
    xi_dot, theta_dot = np.linalg.solve(b, rhs)
    return float(xi_dot), float(theta_dot)


@dataclass
class ExperimentReport:
    params: dict
    time_series: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def as_dict(self):
        return {"params": self.params, "time_series": self.time_series, "summary": self.summary}

    def csv_rows(self):
        keys = ("t", "xi", "theta", "dist", "lambda2", "sandwich", "rate")
        return keys, [[row[k] for k in keys] for row in self.time_series]


def stability_experiment(
    ee,
    n_periods=1,
    delta=1e-3,
    t_end=20.0,
    dt=1e-3,
    m=256,
    seed=0,
    sample_dt=0.1,
    scheme="yoshida4",
):
    """Perturb u0, evolve, and track the modulated distance to the wave orbit.

    ``m`` is the number of grid points per period 2*t0. The perturbation is a
    seeded smooth random direction (modes <= m/8 per period) with its real
    part orthogonal to u0' and imaginary part orthogonal to u0, scaled to H^2
    norm ``delta``.
    """
    if not 0.0 < ee < 1.0:
        raise DomainError("the experiment needs 0 < ee < 1")
    if not 0.0 <= delta <= 0.1:
        raise DomainError("delta must lie in [0, 0.1]")
    w = family_from_ee(ee)
    base = wave_field(w, m, n_periods)
    mm = base.m
    h = base.h
    u0, du0, _ = profile_derivatives(w, base.nodes)
    rng = np.random.default_rng(seed)
    d = random_direction(rng, mm, base.period, n_periods * m // 8)
    re = d.real - _inner(du0, d.real, h) / _inner(du0, du0, h) * du0
    im = d.imag - _inner(u0, d.imag, h) / _inner(u0, u0, h) * u0
    d = re + 1j * im
    norm = h2_norm(d, base.period)
    psi = base.like(base.values + (delta / norm) * d if delta > 0 else base.values)

    lam0 = functionals(base, w, 2.0).lambda_c
    start = functionals(psi, w, 2.0)
    every = max(1, int(round(sample_dt / dt)))
    n_samples = int(round(t_end / dt)) // every
    series = []
    guess = (0.0, 0.0)
    theta_prev = None
    t = 0.0
    q_drift = e_drift = 0.0
    for j in range(n_samples + 1):
        if j:
            psi = evolve(psi, dt, every, scheme)
            t = j * every * dt
        fit = fit_modulation(psi, w, t, guess)
        theta = fit.theta
        if theta_prev is not None:
            theta = theta_prev + ((theta - theta_prev + math.pi) % (2.0 * math.pi) - math.pi)
        theta_prev = theta
        guess = (fit.xi, theta)
        cur = functionals(psi, w, 2.0)
        lam = cur.lambda_c
        q_drift = max(q_drift, abs(cur.q - start.q))
        e_drift = max(e_drift, abs(cur.e - start.e))
        dist = fit.distance_h2()
        xi_dot, theta_dot = modulation_rates(fit, w)
        # below this distance the ratio is rounding noise, not a measurement
        sandwich = (lam - lam0) / dist ** 2 if dist > SANDWICH_FLOOR else math.nan
        series.append(
            {
                "t": t,
                "xi": fit.xi,
                "theta": theta,
                "dist": dist,
                "lambda2": lam,
                "sandwich": sandwich,
                "rate": abs(xi_dot) + abs(theta_dot),
            }
        )
    ratios = [row["sandwich"] for row in series if math.isfinite(row["sandwich"])]
    summary = {
        "max_dist": max(row["dist"] for row in series),
        "lambda_drift": max(abs(row["lambda2"] - start.lambda_c) for row in series),
        "charge_drift": q_drift,
        "energy_drift": e_drift,
        "sandwich_min": min(ratios) if ratios else math.nan,
        "sandwich_max": max(ratios) if ratios else math.nan,
        "max_rate": max(row["rate"] for row in series),
    }
    params = {
        "ee": ee,
        "n_periods": n_periods,
        "delta": delta,
        "t_end": t_end,
        "dt": dt,
        "m": m,
        "seed": seed,
        "scheme": scheme,
    }
    return ExperimentReport(params, series, summary)
