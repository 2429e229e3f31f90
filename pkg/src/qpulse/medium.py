"""Linear matter response: permittivity models, complex wavenumber, dispersion
expansions, and causality (Kramers-Kronig) validation.

The permittivity is a sum of damped Lorentz oscillators over a real background,
which is analytically consistent with the Kramers-Kronig relations for any
positive damping.  All dispersion coefficients are obtained by Richardson-
extrapolated central differences so that the same code path serves any
permittivity model the package may grow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MediumError",
    "PhysicalConstants",
    "Resonance",
    "MediumModel",
    "DispersionExpansion",
    "permittivity",
    "refractive_index",
    "wavenumber",
    "taylor_expand",
    "kk_residual",
]

C_LIGHT = 299792458.0           # m/s
EPS0 = 8.8541878128e-12         # F/m
HBAR = 1.054571817e-34          # J s


class MediumError(ValueError):
    """Raised for unphysical inputs or failed dispersion computations."""


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants plus the transverse normalization area.

    ``alpha`` is always recomputed from the stored fields, never cached, so the
    normalization invariant alpha = sqrt(hbar / (4 pi c^2 eps0 area)) holds by
    construction.  Passing c = eps0 = hbar = area = 1 selects normalized units.
    """

    c: float = C_LIGHT
    eps0: float = EPS0
    hbar: float = HBAR
    area: float = 1e-12

    def __post_init__(self):
        for name in ("c", "eps0", "hbar", "area"):
            if getattr(self, name) <= 0:
                raise MediumError(f"physical constant {name!r} must be positive")

    @property
    def alpha(self) -> float:
        return math.sqrt(self.hbar / (4.0 * math.pi * self.c**2 * self.eps0 * self.area))


@dataclass(frozen=True)
class Resonance:
    """One Lorentz oscillator: plasma strength (rad^2/s^2), center and damping (rad/s)."""

    plasma_sq: float
    omega_r: float
    gamma: float

    def __post_init__(self):
        if self.plasma_sq < 0:
            raise MediumError("oscillator strength must be non-negative")
        if self.omega_r <= 0:
            raise MediumError("resonance frequency must be positive")
        if self.gamma < 0:
            raise MediumError("negative damping describes gain; not representable")


@dataclass(frozen=True)
class MediumModel:
    """Sum-of-Lorentz-oscillators permittivity over a real background.

    ``rho`` is the polarization-field coupling constant; it carries no dynamics
    of its own here and only rescales the effective Kerr coefficient.
    """

    resonances: tuple[Resonance, ...] = ()
    eps_background: float = 1.0
    rho: float = 1.0
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)

    def __post_init__(self):
        if self.eps_background < 1.0:
            raise MediumError("background permittivity must be >= 1")
        if self.rho <= 0:
            raise MediumError("coupling constant rho must be positive")
        object.__setattr__(self, "resonances", tuple(self.resonances))

    @property
    def kk_validatable(self) -> bool:
        """Kramers-Kronig validation needs every pole strictly off the real axis."""
        return all(r.gamma > 0 for r in self.resonances)

    @classmethod
    def vacuum(cls, constants: PhysicalConstants | None = None) -> "MediumModel":
        return cls(resonances=(), eps_background=1.0,
                   constants=constants or PhysicalConstants())


def _check_omega(omega) -> np.ndarray:
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise MediumError("frequency must be positive")
    return w


def permittivity(model: MediumModel, omega):
    """Complex permittivity eps(omega) = eps_bg + sum wp^2/(wr^2 - w^2 - i g w).

    Accepts a scalar or an array of angular frequencies (rad/s); the imaginary
    part is non-negative for every representable model (passivity).
    """
    w = _check_omega(omega)
    eps = np.full_like(w, model.eps_background, dtype=complex)
    for r in model.resonances:
        eps = eps + r.plasma_sq / (r.omega_r**2 - w**2 - 1j * r.gamma * w)
    return eps if eps.ndim else complex(eps)


def refractive_index(model: MediumModel, omega):
    """Complex index n = sqrt(eps), principal branch with Im n >= 0.

    Raises for a real-negative permittivity (metallic band), where the branch
    is ambiguous and the forward-decay convention breaks down.
    """
    eps = np.asarray(permittivity(model, omega))
    if np.any((eps.real < 0) & (eps.imag == 0)):
        raise MediumError(
            "permittivity is real and negative (metallic band); "
            "branch of sqrt(eps) is ambiguous in this regime"
        )
    n = np.sqrt(eps)
    # principal branch of the upper-half-plane permittivity already has
    # Im n >= 0; guard against sign slips from rounding at eps_i == 0.
    n = np.where(n.imag < 0, np.conj(n), n)
    return n if n.ndim else complex(n)


def wavenumber(model: MediumModel, omega):
    """Complex wavenumber k = (omega/c) sqrt(eps); Im k >= 0 (decaying forward wave)."""
    w = _check_omega(omega)
    k = w / model.constants.c * np.asarray(refractive_index(model, omega))
    return k if k.ndim else complex(k)


def _loss_ratio(model: MediumModel, omega):
    """sqrt(eps_i / eps), the Langevin coupling profile; zero in lossless bands."""
    eps = np.asarray(permittivity(model, omega))
    return np.sqrt(eps.imag / eps)


@dataclass(frozen=True)
class DispersionExpansion:
    """Narrow-band Taylor data of k(omega) and sqrt(eps_i/eps) about a carrier.

    ``k[m]`` and ``p[m]`` are the m-th derivatives at omega0 (units s^m/m and
    s^m).  The carrier wavenumber is pinned to k_phi = Re k[0].
    """

    omega0: float
    delta_omega: float
    k: tuple[complex, ...]
    p: tuple[complex, ...]
    k_phi: float
    group_velocity: float

    @classmethod
    def from_coefficients(cls, omega0, delta_omega, k, p=None):
        """Build directly from coefficient lists (synthetic / normalized media)."""
        k = tuple(complex(v) for v in k)
        if len(k) < 2:
            raise MediumError("need at least k[0] and k[1]")
        if p is None:
            p = (0.0,) * len(k)
        p = tuple(complex(v) for v in p)
        k1r = k[1].real
        return cls(
            omega0=float(omega0),
            delta_omega=float(delta_omega),
            k=k,
            p=p,
            k_phi=k[0].real,
            group_velocity=(1.0 / k1r) if k1r != 0 else math.inf,
        )

    @property
    def order(self) -> int:
        return len(self.k) - 1

    @property
    def k0i(self) -> float:
        return self.k[0].imag


_RICHARDSON_LEVELS = 4


def _central_stencil(fn, x0: float, m: int, h: float) -> complex:
    """Symmetric O(h^2) central difference for the m-th derivative."""
    if m == 0:
        return fn(x0)
    acc = 0.0 + 0.0j
    for i in range(m + 1):
        coeff = (-1) ** i * math.comb(m, i)
        acc += coeff * fn(x0 + (m / 2 - i) * h)
    return acc / h**m


def _richardson_derivative(fn, x0, m, h_fine, rtol, floor, label):
    """m-th derivative by Richardson extrapolation of central differences.

    The finest step is ``h_fine``; coarser companions at 2h, 4h, ... feed the
    extrapolation table.  Convergence requires the last two table levels to
    agree to ``rtol`` relative (or to sit below ``floor``, which marks a
    coefficient whose Taylor contribution is numerically irrelevant).
    """
    col = [
        _central_stencil(fn, x0, m, h_fine * 2 ** (_RICHARDSON_LEVELS - 1 - i))
        for i in range(_RICHARDSON_LEVELS)
    ]
    prev_level = col
    for j in range(1, _RICHARDSON_LEVELS):
        prev_level = col
        col = [
            (4**j * col[i + 1] - col[i]) / (4**j - 1) for i in range(len(col) - 1)
        ]
    best, prev = col[0], prev_level[-1]
    delta = abs(best - prev)
    if delta > rtol * abs(best) + floor:
        raise MediumError(
            f"Taylor coefficient {label}[{m}] did not converge: "
            f"relative change {delta / max(abs(best), floor):.3e} between the "
            f"last two Richardson levels exceeds {rtol:.1e}"
        )
    return best


def taylor_expand(model: MediumModel, omega0: float, delta_omega: float,
                  order: int = 2) -> DispersionExpansion:
    """Expand k(omega) and sqrt(eps_i/eps) about omega0 over a band delta_omega.

    Parameters
    ----------
    omega0 : carrier frequency (rad/s); the band [omega0 - dw/2, omega0 + dw/2]
        must stay positive and must not contain a resonance.
    delta_omega : band width (rad/s).
    order : highest Taylor order M >= 2.

    Raises ``MediumError`` when a resonance falls inside the band or when the
    Richardson table for any coefficient fails its convergence monitor.
    """
    if order < 2:
        raise MediumError("expansion order must be at least 2")
    if omega0 - delta_omega / 2 <= 0:
        raise MediumError("band extends to non-positive frequencies")
    lo, hi = omega0 - delta_omega / 2, omega0 + delta_omega / 2
    for r in model.resonances:
        if lo <= r.omega_r <= hi:
            raise MediumError(
                f"resonance at {r.omega_r:.6g} rad/s lies inside the expansion band "
                f"[{lo:.6g}, {hi:.6g}]; the narrow-band expansion does not apply"
            )

    h = delta_omega / 64.0
    k_fn = lambda w: wavenumber(model, w)
    p_fn = lambda w: complex(_loss_ratio(model, w))
    k0 = complex(k_fn(omega0))
    p0 = complex(p_fn(omega0))

    k_coeffs, p_coeffs = [k0], [p0]
    for m in range(1, order + 1):
        # a coefficient is "numerically zero" when its Taylor term at the band
        # edge falls below 1e-10 of the carrier value
        floor_k = abs(k0) * (2.0 / delta_omega) ** m * math.factorial(m) * 1e-10
        floor_p = max(abs(p0), 1e-12) * (2.0 / delta_omega) ** m * math.factorial(m) * 1e-10
        k_coeffs.append(_richardson_derivative(k_fn, omega0, m, h, 1e-6, floor_k, "k"))
        p_coeffs.append(_richardson_derivative(p_fn, omega0, m, h, 1e-6, floor_p, "p"))

    k1r = k_coeffs[1].real
    return DispersionExpansion(
        omega0=float(omega0),
        delta_omega=float(delta_omega),
        k=tuple(k_coeffs),
        p=tuple(p_coeffs),
        k_phi=k0.real,
        group_velocity=(1.0 / k1r) if k1r != 0 else math.inf,
    )


def _hilbert_conv(u: np.ndarray) -> np.ndarray:
    """Convolution-form Hilbert transform (1/pi) PV int u(s)/(t-s) ds via FFT."""
    n = len(u)
    f = np.fft.fftfreq(n)
    return np.real(np.fft.ifft(np.fft.fft(u) * (-1j) * np.sign(f)))


_KK_INTERNAL_MIN = 32768


def kk_residual(model: MediumModel, grid) -> float:
    """Causality check: normalized max deviation of eps_r from the Hilbert
    reconstruction of eps_i over the given frequency grid.

    The reconstruction runs on an internal refined grid over [0, max(grid)]
    with the odd extension of eps_i, zero-padded FFT Hilbert transform, and is
    interpolated back to the supplied evaluation points.
    """
    w_eval = np.sort(np.asarray(grid, dtype=float))
    if np.any(w_eval <= 0):
        raise MediumError("frequency grid must be positive")
    if not model.kk_validatable:
        raise MediumError(
            "model has an undamped resonance (gamma == 0); "
            "Kramers-Kronig validation skipped for singular absorption lines"
        )
    for r in model.resonances:
        if w_eval[0] > r.omega_r / 10 or w_eval[-1] < 10 * r.omega_r or len(w_eval) < 4096:
            raise MediumError(
                "grid must span [omega_r/10, 10 omega_r] for every resonance "
                "with at least 4096 points"
            )

    eps_eval = np.asarray(permittivity(model, w_eval))
    target = eps_eval.real - model.eps_background
    norm = np.max(np.abs(target))
    if norm == 0.0:
        return 0.0

    W = w_eval[-1]
    M = max(_KK_INTERNAL_MIN, 1 << int(np.ceil(np.log2(8 * len(w_eval)))))
    h = W / M
    w_int = (np.arange(M) + 0.5) * h
    ui = np.asarray(permittivity(model, w_int)).imag

    # truncation-tail estimate: measured edge-error constant (4/pi) ln M times
    # the absorption remaining at the grid edge
    tail = (4.0 / np.pi) * np.log(M) * abs(float(np.interp(W, w_int, ui))) / norm
    if tail > 1e-3:
        raise MediumError(
            f"frequency grid too narrow for Kramers-Kronig validation: "
            f"estimated truncation-tail contribution {tail:.3e} exceeds 1e-3"
        )

    # odd extension on (-W, W), zero-padded x2 against circular wrap
    full = np.concatenate([-ui[::-1], ui])
    n = 4 * M
    sig = np.zeros(n)
    start = (n - 2 * M) // 2
    sig[start:start + 2 * M] = full
    recon = -_hilbert_conv(sig)[start + M:start + 2 * M]   # eps_r - bg on w_int

    rec_eval = np.interp(w_eval, w_int, recon)
    return float(np.max(np.abs(target - rec_eval)) / norm)
