"""Linearized operators about the cnoidal wave and their Floquet-Bloch spectra.

Every operator here has the divergence form

    A = a4 d^4 + D* diag(f1) D + diag(f0),      D = d/dx,

so it is assembled in Fourier-mode space as a Galerkin matrix:
``A[a, b] = a4 q_a^4 delta_ab + q_a q_b f1^[n_a - n_b] + f0^[n_a - n_b]``
with Bloch-shifted symbols q_n = 2 pi (n + kappa) / period. The coefficient
Fourier data come from sampling f0, f1 on a doubled grid (anti-aliasing),
and the Nyquist mode is kept decoupled so that real coefficients give a
real-symmetric matrix at kappa = 0. The physical-space matrix is the unitary
conjugate F* A F of the mode matrix.

x-variable kinds (L+-, M+-, K+-) live on a grid whose period is a multiple
of 2*t0; the Bloch kinds P+- live on the rescaled z = ell*x grid of period
2*pi, where d/dx becomes ell (d/dz + i kappa).
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment

from .elliptic import complete_E, complete_K
from .errors import (
    AdmissibilityError,
    DegenerateKernelError,
    DomainError,
    GridError,
    SolitonLimitError,
)
from .wave import WaveFamily, family_from_ee, profile_derivatives, square_harmonics

__all__ = [
    "Grid",
    "BlochOperator",
    "BandStructure",
    "KINDS",
    "assemble",
    "bands",
    "c_interval_exact",
    "c_interval_sweep",
    "mu_curvature_explicit",
    "mu_curvature_numeric",
    "band_curvature",
    "quadratic_form",
    "sos_k_minus",
    "k_plus_partial",
    "intertwine_residual",
    "jl_spectrum",
    "jl_kernel",
    "spectral_stability_check",
    "grid_for",
    "galerkin_modes",
    "harmonic_modes",
    "z_grid",
]

KINDS = ("Lplus", "Lminus", "Mplus", "Mminus", "Kplus", "Kminus", "Pplus", "Pminus")
_PERIOD_RTOL = 1e-9


@dataclass(frozen=True)
class Grid:
    m: int
    period: float

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 16 or self.m % 2:
            raise GridError(f"grid size must be an even integer >= 16, got {self.m}")
        if not (self.period > 0 and math.isfinite(self.period)):
            raise GridError(f"grid period must be finite and positive, got {self.period}")

    @property
    def nodes(self):
        return np.arange(self.m) * (self.period / self.m)

    @property
    def h(self):
        return self.period / self.m

    def wavenumbers(self, kappa=0.0):
        """Bloch symbols 2 pi (n + kappa) / period in FFT ordering."""
        n = np.fft.fftfreq(self.m, d=1.0 / self.m)
        return 2.0 * np.pi * (n + kappa) / self.period

    def deriv(self, f, order=1):
        """Spectral derivative of periodic samples (Nyquist mode dropped for odd orders)."""
        q = self.wavenumbers()
        if order % 2:
            q = q.copy()
            q[self.m // 2] = 0.0
        out = np.fft.ifft((1j * q) ** order * np.fft.fft(f))
        return out.real if np.isrealobj(f) else out

    def inner(self, f, g):
        """Trapezoid inner product <f, g> = h * sum conj(f) g."""
        return self.h * np.vdot(f, g)

    def norm2(self, f):
        return float(np.real(self.inner(f, f)))


def grid_for(w, m, n_periods=1):
    """x-variable grid covering ``n_periods`` periods 2*t0 of the wave."""
    w = _family(w).require_periodic()
    return Grid(int(m), n_periods * w.period)


def z_grid(m):
    """Grid on the rescaled variable z in [0, 2 pi)."""
    return Grid(int(m), 2.0 * np.pi)


def _family(w):
    return w if isinstance(w, WaveFamily) else family_from_ee(w)


def _samples(f, g):
    values = getattr(f, "values", f)
    values = np.asarray(values)
    if values.shape != (g.m,):
        raise GridError(f"expected {g.m} samples, got shape {values.shape}")
    period = getattr(f, "period", None)
    if period is not None and not math.isclose(period, g.period, rel_tol=_PERIOD_RTOL):
        raise GridError("field period does not match the operator grid")
    return values


def _fft_unitary(f):
    return np.fft.fft(f, axis=0) / math.sqrt(f.shape[0])


def _ifft_unitary(c):
    return np.fft.ifft(c, axis=0) * math.sqrt(c.shape[0])


@dataclass
class BlochOperator:
    """Dense Hermitian matrix of one linearized operator on a grid.

    ``matrix`` acts on grid samples; ``modes`` is the unitarily equivalent
    Galerkin matrix in FFT-ordered Fourier modes, used for eigensolves.
    """

    matrix: np.ndarray
    kind: str
    c: float
    kappa: float
    wave: WaveFamily
    grid: Grid
    modes: np.ndarray = field(repr=False)

    def apply(self, f):
        """Apply to grid samples (real input gives real output at kappa = 0)."""
        f = _samples(f, self.grid)
        out = _ifft_unitary(self.modes @ _fft_unitary(f))
        return out.real if np.isrealobj(f) and self.kappa == 0.0 else out

    def eigvalsh(self):
        return np.linalg.eigvalsh(self.modes)


def _coefficients(kind, w, c):
    """Return a4 and the polynomial coefficients of f1, f0 in s = u0^2.

    Each polynomial is a tuple (p0, p1, p2) meaning p0 + p1 s + p2 s^2.
    """
    ee2 = w.ee * w.ee
    if kind[0] in "KP":
        sign = kind[1:]
        _, m1, m0 = _coefficients("M" + sign, w, c)
        _, l1, l0 = _coefficients("L" + sign, w, c)
        return (
            1.0,
            tuple(a - c * b for a, b in zip(m1, l1)),
            tuple(a - c * b for a, b in zip(m0, l0)),
        )
    table = {
        "Lplus": (0.0, (1.0, 0.0, 0.0), (-1.0, 3.0, 0.0)),
        "Lminus": (0.0, (1.0, 0.0, 0.0), (-1.0, 1.0, 0.0)),
        "Mplus": (1.0, (0.0, 5.0, 0.0), (-4.0 + 3.0 * ee2, 15.0, -5.0)),
        "Mminus": (1.0, (0.0, 3.0, 0.0), (-1.0, 1.0, 0.0)),
    }
    if kind not in table:
        raise DomainError(f"unknown operator kind {kind!r}")
    return table[kind]


def harmonic_modes(b, step, m):
    """Place cosine harmonics ``b`` (and their square) on 2m FFT-ordered modes.

    Harmonic j sits at grid mode j * step. Returns (s2, s4): the data of the
    function and of its square, the latter by exact discrete convolution.
    """
    n_harm = (m - 1) // step
    b = np.asarray(b)[: n_harm + 1]
    n_harm = b.size - 1
    full = np.concatenate([b[:0:-1], b])
    full4 = np.convolve(full, full)[n_harm : 3 * n_harm + 1]
    pos = (np.arange(-n_harm, n_harm + 1) * step) % (2 * m)
    s2 = np.zeros(2 * m)
    s4 = np.zeros(2 * m)
    s2[pos] = full
    s4[pos] = full4
    return s2, s4


def _square_modes(w, g, x_scale):
    """Fourier data of u0^2 and u0^4 on grid ``g`` for mode differences |d| < m."""
    ratio = g.period / x_scale / w.t0
    step = int(round(ratio))
    if step < 1 or abs(ratio - step) > 1e-6 * max(1.0, ratio):
        raise GridError("grid period is not a multiple of the coefficient period")
    return harmonic_modes(square_harmonics(w, (g.m - 1) // step), step, g.m)


def _poly_modes(poly, s2, s4):
    out = poly[1] * s2 + poly[2] * s4
    out[0] += poly[0]
    return out


def _toeplitz_modes(fhat, n):
    """Galerkin block fhat[n_a - n_b] from coefficients on a 2m grid."""
    diff = (n[:, None] - n[None, :]).astype(int)
    return fhat[diff % fhat.shape[0]]


def galerkin_modes(a4, f1hat, f0hat, q):
    """Mode-space matrix of a4 d^4 + D* f1 D + f0 for symbols ``q`` (FFT order).

    ``f1hat``/``f0hat`` hold coefficient Fourier data on 2m mode differences.
    The Nyquist row/column is decoupled and given its diagonal symbol.
    """
    m = q.size
    n = np.fft.fftfreq(m, d=1.0 / m).astype(int)
    idx = np.flatnonzero(n != -(m // 2))
    nc, qc = n[idx], q[idx]
    block = (qc[:, None] * qc[None, :]) * _toeplitz_modes(f1hat, nc) + _toeplitz_modes(f0hat, nc)
    block[np.diag_indices_from(block)] += a4 * qc ** 4
    a = np.zeros((m, m), dtype=complex)
    a[np.ix_(idx, idx)] = block
    ny = m // 2
    a[ny, ny] = a4 * q[ny] ** 4 + q[ny] ** 2 * f1hat[0] + f0hat[0]
    return 0.5 * (a + a.conj().T)


def _mode_matrix(kind, w, c, kappa, g):
    if kind not in KINDS:
        raise DomainError(f"unknown operator kind {kind!r}")
    x_scale = w.ell if kind[0] == "P" else 1.0
    a4, p1, p0 = _coefficients(kind, w, c)
    s2, s4 = _square_modes(w, g, x_scale)
    q = x_scale * g.wavenumbers(kappa)
    a = galerkin_modes(a4, _poly_modes(p1, s2, s4), _poly_modes(p0, s2, s4), q)
    if kappa == 0.0:
        a = a.real.astype(complex)
    return a


def _check_grid(kind, w, g):
    if kind[0] == "P":
        if not math.isclose(g.period, 2.0 * np.pi, rel_tol=_PERIOD_RTOL):
            raise GridError("Bloch kinds need the 2*pi-periodic z grid")
        return
    ratio = g.period / w.period
    if ratio < 0.5 or abs(ratio - round(ratio)) > _PERIOD_RTOL * max(1.0, ratio):
        raise GridError(f"x-grid period {g.period} is not a multiple of 2*t0 = {w.period}")


def assemble(kind, w, c=0.0, kappa=0.0, g=None):
    """Assemble ``kind`` about wave ``w`` on grid ``g``.

    ``c`` enters only the K and P kinds, ``kappa`` only the P kinds.
    """
    w = _family(w)
    if w.is_soliton:
        raise SolitonLimitError("periodic operators are undefined for the black soliton")
    if g is None:
        raise GridError("a grid is required")
    _check_grid(kind, w, g)
    if kind[0] != "P" and kappa != 0.0:
        raise DomainError("kappa is only meaningful for the Bloch kinds Pplus/Pminus")
    if not -0.5 <= kappa <= 0.5:
        raise DomainError("kappa must lie in the Brillouin zone [-1/2, 1/2]")
    c = float(c) if kind[0] in "KP" else 0.0
    modes = _mode_matrix(kind, w, c, float(kappa), g)
    f = _fft_unitary(np.eye(g.m))
    matrix = f.conj().T @ modes @ f
    matrix = 0.5 * (matrix + matrix.conj().T)
    if kappa == 0.0:
        matrix = matrix.real.astype(complex)
    return BlochOperator(matrix, kind, c, float(kappa), w, g, modes)


@dataclass
class BandStructure:
    kappas: np.ndarray
    bands: np.ndarray  # (n_bands, n_kappas)
    tracking: np.ndarray  # eigen-index at each kappa feeding each band

    def lowest(self):
        return self.bands.min(axis=0)

    def rows(self):
        return [[k, *self.bands[:, j]] for j, k in enumerate(self.kappas)]


def _rayleigh(a, vecs):
    av = a @ vecs
    return np.real(np.einsum("ij,ij->j", vecs.conj(), av)) / np.real(
        np.einsum("ij,ij->j", vecs.conj(), vecs)
    )


def bands(kind, w, c, kappa_grid, n_bands, g):
    """Lowest ``n_bands`` Floquet-Bloch bands, tracked by eigenvector overlap.

    Eigenvalues are polished by a mode-space Rayleigh quotient, which removes
    the eps * ||A|| error of the dense solver for the low bands.
    """
    w = _family(w)
    if w.is_soliton:
        raise SolitonLimitError("periodic operators are undefined for the black soliton")
    _check_grid(kind, w, g)
    kappas = np.asarray(kappa_grid, dtype=float)
    if np.any(np.abs(kappas) > 0.5):
        raise DomainError("kappa grid must lie in [-1/2, 1/2]")
    n_bands = int(n_bands)
    window = min(g.m, n_bands + 4)
    c = float(c) if kind[0] in "KP" else 0.0
    out = np.empty((n_bands, kappas.size))
    track = np.empty((n_bands, kappas.size), dtype=int)
    prev_vecs = prev_vals = None
    order = np.arange(window)
    for j, kappa in enumerate(kappas):
        a = _mode_matrix(kind, w, c, kappa, g)
        vals, vecs = np.linalg.eigh(a)
        vals, vecs = vals[:window], vecs[:, :window]
        vals = _rayleigh(a, vecs)
        if prev_vecs is not None:
            overlap = np.abs(prev_vecs.conj().T @ vecs) ** 2
            scale = max(1.0, float(np.max(np.abs(prev_vals))))
            cost = -overlap + 1e-3 * np.abs(prev_vals[:, None] - vals[None, :]) / scale
            _, order = linear_sum_assignment(cost)
        vals, vecs = vals[order], vecs[:, order]
        out[:, j] = vals[:n_bands]
        track[:, j] = order[:n_bands]
        prev_vecs, prev_vals = vecs, vals
    return BandStructure(kappas, out, track)


def _exact_sqrt(x):
    fx = Fraction(x).limit_denominator(10 ** 12)
    if abs(float(fx) - x) > 0:
        return None
    num, den = fx.numerator, fx.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def c_interval_exact(w):
    """Endpoints c-+ = 2 -+ 2k / (1 + k^2) = 2 -+ sqrt(1 - ee^2).

    When ee is a short decimal with a rational square root of 1 - ee^2 the
    arithmetic is done in fractions, so ee = 0.8 returns (1.4, 2.6) exactly.
    """
    w = _family(w)
    ee = Fraction(repr(w.ee))
    root = _exact_sqrt(1 - ee * ee) if ee.denominator < 10 ** 12 else None
    if root is not None:
        return float(2 - root), float(2 + root)
    width = math.sqrt((1.0 - w.ee) * (1.0 + w.ee))
    return 2.0 - width, 2.0 + width


def c_interval_sweep(ee_grid):
    """Rows (ee, c-, c+, asymptotic c-, asymptotic c+) for a grid of ee."""
    rows = []
    for ee in ee_grid:
        lo, hi = c_interval_exact(float(ee))
        a = math.sqrt(1.0 - float(ee))
        rows.append((float(ee), lo, hi, 2.0 - math.sqrt(2.0) * a, 2.0 + math.sqrt(2.0) * a))
    return rows


def _strict_periodic(w):
    w = _family(w)
    if w.is_soliton:
        raise SolitonLimitError("the curvature formula needs a finite period")
    if w.ee == 1.0:
        raise DomainError("the curvature formula degenerates for the zero wave")
    return w


def mu_curvature_explicit(w, c):
    """Closed-form second derivative at kappa = 0 of the lowest P- band."""
    w = _strict_periodic(w)
    if c < 1.0:
        raise DomainError("the curvature formula is established only for c >= 1")
    k = w.k.k
    k2 = k * k
    r = 1.0 - complete_E(k) / complete_K(k)
    p = 1.0 + k2
    num = 2.0 * w.ell ** 2 * k2 * (4.0 * k2 - (c - 2.0) ** 2 * p * p)
    den = p * r * (2.0 * k2 + (c - 2.0) * p * r)
    return num / den


def mu_curvature_numeric(w, c, g):
    """Same curvature from the resolvent formula, solved on the z grid."""
    w = _strict_periodic(w)
    _check_grid("Pminus", w, g)
    a = _mode_matrix("Pminus", w, float(c), 0.0, g).real
    vals = np.sort(np.abs(np.linalg.eigvalsh(a)))
    if vals[1] <= 1e-6:
        raise DegenerateKernelError(
            f"P-(c, 0) has a multi-dimensional numerical kernel (second |eig| = {vals[1]:.3e})"
        )
    z = g.nodes
    u, du = profile_derivatives(w, z / w.ell)[:2]
    du = du / w.ell
    uh = _fft_unitary(u.astype(complex))
    duh = _fft_unitary(du.astype(complex))
    basis, _ = np.linalg.qr(np.column_stack([uh, np.eye(g.m)]))
    q = basis[:, 1 : g.m]
    y = np.linalg.solve(q.conj().T @ a @ q, q.conj().T @ duh)
    wh = q @ y
    h = g.h
    nu = g.norm2(u)
    ndu = g.norm2(du)
    cross = float(np.real(np.vdot(duh, wh))) * h
    ell = w.ell
    bracket = -4.0 * ell ** 4 * (c - 2.0) ** 2 * cross + 3.0 * ell ** 4 * ndu + (3.0 - c) * ell ** 2 * nu
    return 2.0 * bracket / nu


def band_curvature(w, c, g, h=3e-3):
    """Second kappa-derivative of the lowest P- band at kappa = 0 by finite differences.

    Central differences at steps h and 2h are combined by Richardson
    extrapolation; h must stay well below the gap to the second band.
    """
    w = _strict_periodic(w)
    _check_grid("Pminus", w, g)

    def low(kappa):
        return np.linalg.eigvalsh(_mode_matrix("Pminus", w, float(c), kappa, g))[0]

    base = low(0.0)

    def second(step):
        return (low(step) + low(-step) - 2.0 * base) / step ** 2

    return (4.0 * second(h) - second(2.0 * h)) / 3.0


def quadratic_form(op, f):
    """Real Hermitian form <A f, f> with trapezoid weight period / m."""
    f = _samples(f, op.grid)
    fh = _fft_unitary(np.asarray(f, dtype=complex))
    return float(np.real(np.vdot(fh, op.modes @ fh))) * op.grid.h


def _wave_on(w, g):
    return profile_derivatives(w, g.nodes)


def sos_k_minus(w, v, g):
    """||L- v||^2 + ||u0 v_x - u0' v||^2 by spectral differentiation."""
    w = _family(w).require_periodic()
    _check_grid("Kminus", w, g)
    v = _samples(v, g)
    u0, du0, _ = _wave_on(w, g)
    vx, vxx = g.deriv(v, 1), g.deriv(v, 2)
    lv = -vxx + (u0 * u0 - 1.0) * v
    return g.norm2(lv) + g.norm2(u0 * vx - du0 * v)


def _derivative_zeros(w, g):
    """Grid indices lying within 1e-10 of a zero of u0' (x = t0/2 + j t0)."""
    x = g.nodes
    phase = (x - 0.5 * w.t0) / w.t0
    dist = np.abs(phase - np.round(phase)) * w.t0
    return np.flatnonzero(dist <= 1e-10 * max(1.0, w.t0))


def k_plus_partial(w, u, c, g):
    """Three-term representation of <K+(c) u, u> for admissible ``u``.

    With u~ = u / u0' and wv = u0' u~_x it evaluates
    ||wv_x||^2 + (3 - c) ||wv||^2 + 2 ee^2 ||u0 u~_x||^2. At grid points
    where u0' vanishes, u~ is taken from the limit u' / u0''.

    For the black soliton the grid is read as the window
    [-period/2, period/2) and wv = u_x + sqrt(2) u0 u.
    """
    w = _family(w)
    u = np.asarray(_samples(u, g), dtype=float)
    if w.is_soliton:
        x = g.nodes - 0.5 * g.period
        u0 = np.tanh(x / math.sqrt(2.0))
        wv = g.deriv(u) + math.sqrt(2.0) * u0 * u
        return g.norm2(g.deriv(wv)) + (3.0 - c) * g.norm2(wv)
    _check_grid("Kplus", w, g)
    u0, du0, ddu0 = _wave_on(w, g)
    zeros = _derivative_zeros(w, g)
    scale = max(1.0, float(np.max(np.abs(u))))
    if np.any(np.abs(u[zeros]) > 1e-10 * scale):
        raise AdmissibilityError("u must vanish at the zeros of u0'")
    ux = g.deriv(u)
    safe = np.ones_like(du0, dtype=bool)
    safe[zeros] = False
    ut = np.empty_like(u)
    ut[safe] = u[safe] / du0[safe]
    ut[zeros] = ux[zeros] / ddu0[zeros]
    utx = g.deriv(ut)
    wv = du0 * utx
    return g.norm2(g.deriv(wv)) + (3.0 - c) * g.norm2(wv) + 2.0 * w.ee ** 2 * g.norm2(u0 * utx)


def intertwine_residual(w, c, f, g):
    """||(L- K+(c) - K-(c) L+) f||_inf / ||f||_inf on the x grid."""
    w = _family(w).require_periodic()
    _check_grid("Kplus", w, g)
    f = np.asarray(_samples(f, g), dtype=float)
    mats = {k: _mode_matrix(k, w, c, 0.0, g).real for k in ("Lminus", "Kplus", "Kminus", "Lplus")}
    fh = _fft_unitary(f.astype(complex))
    lhs = mats["Lminus"] @ (mats["Kplus"] @ fh)
    rhs = mats["Kminus"] @ (mats["Lplus"] @ fh)
    res = _ifft_unitary(lhs - rhs)
    return float(np.max(np.abs(res)) / np.max(np.abs(f)))


def _jl_matrix(w, g, kappa):
    lm = _mode_matrix("Lminus", w, 0.0, kappa, g)
    lp = _mode_matrix("Lplus", w, 0.0, kappa, g)
    zero = np.zeros_like(lm)
    return np.block([[zero, lm], [-lp, zero]]), lp, lm


def _kernel_free_solve(a, rhs, null):
    """Solve a x = rhs with x orthogonal to the unit vector ``null``."""
    basis, _ = np.linalg.qr(np.column_stack([null, np.eye(a.shape[0])]))
    q = basis[:, 1 : a.shape[0]]
    return q @ np.linalg.solve(q.conj().T @ a @ q, q.conj().T @ rhs)


def _generalized_kernel(w, g, lp, lm):
    """Mode-space basis of the 4-dimensional generalized kernel at kappa = 0.

    Chains (u0', 0) -> (0, L-^{-1} u0') and (0, u0) -> (-L+^{-1} u0, 0).
    """
    u0, du0, _ = _wave_on(w, g)
    e_u = _fft_unitary(u0.astype(complex))
    e_d = _fft_unitary(du0.astype(complex))
    e_u /= np.linalg.norm(e_u)
    e_d /= np.linalg.norm(e_d)
    zero = np.zeros(g.m, dtype=complex)
    v1 = _kernel_free_solve(lm, e_d, e_u)
    u2 = -_kernel_free_solve(lp, e_u, e_d)
    return np.column_stack(
        [
            np.concatenate([e_d, zero]),
            np.concatenate([zero, v1]),
            np.concatenate([zero, e_u]),
            np.concatenate([u2, zero]),
        ]
    )


def jl_spectrum(w, g, kappa):
    """Eigenvalues of JL = [[0, L-], [-L+, 0]] in Bloch sector ``kappa``.

    At kappa = 0 the two size-2 Jordan blocks at the origin are split off
    exactly: the generalized kernel G is invariant, and so is its
    symplectic complement (J G)^perp, where the remaining spectrum is
    computed. The four zero eigenvalues are returned explicitly.
    """
    w = _family(w).require_periodic()
    _check_grid("Lplus", w, g)
    a, lp, lm = _jl_matrix(w, g, float(kappa))
    if kappa != 0.0:
        return np.linalg.eigvals(a)
    gk = _generalized_kernel(w, g, lp, lm)
    m = g.m
    jg = np.vstack([gk[m:], -gk[:m]])
    basis, _ = np.linalg.qr(np.column_stack([jg, np.eye(2 * m)]))
    q = basis[:, 4 : 2 * m]
    rest = np.linalg.eigvals(q.conj().T @ a @ q)
    return np.concatenate([np.zeros(4, dtype=complex), rest])


def jl_kernel(w, g, tol=1e-7):
    """Physical-space basis (columns, length 2m) of the numerical kernel of JL at kappa = 0."""
    w = _family(w).require_periodic()
    _check_grid("Lplus", w, g)
    a = _jl_matrix(w, g, 0.0)[0].real
    _, s, vh = np.linalg.svd(a)
    scale = max(1.0, s[0])
    null = vh[s < tol * scale].conj().T
    m = g.m
    phys = np.vstack([_ifft_unitary(null[:m]), _ifft_unitary(null[m:])])
    # null vectors carry arbitrary complex phases; the real kernel is the
    # dominant part of the span of their real and imaginary parts
    u, sv, _ = np.linalg.svd(np.hstack([phys.real, phys.imag]), full_matrices=False)
    return u[:, : null.shape[1]]


def spectral_stability_check(w, g, kappa_grid):
    """Max |Re lambda| of the JL Floquet-Bloch spectrum over ``kappa_grid``."""
    worst = 0.0
    for kappa in kappa_grid:
        ev = jl_spectrum(w, g, float(kappa))
        if not np.all(np.isfinite(ev)):
            raise np.linalg.LinAlgError("non-finite eigenvalues in the JL spectrum")
        worst = max(worst, float(np.max(np.abs(ev.real))))
    return worst
