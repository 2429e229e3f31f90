"""Medium module tests: permittivity, wavenumber, Taylor expansion, KK residual.

Frozen expected values were computed beforehand with independent oracles:
direct complex arithmetic for the Lorentz formula, sympy/mpmath symbolic
differentiation for dispersion coefficients, and a brute-force principal-value
quadrature for the Kramers-Kronig reconstruction.
"""

import math

import numpy as np
import pytest

from qpulse.medium import (
    DispersionExpansion,
    MediumError,
    MediumModel,
    PhysicalConstants,
    Resonance,
    kk_residual,
    permittivity,
    refractive_index,
    taylor_expand,
    wavenumber,
)

LORENTZ_EX = MediumModel(resonances=(Resonance(1e30, 2e15, 1e13),))
SHIPPED = MediumModel(resonances=(Resonance(1e30, 2e15, 5e13),))
NORMALIZED = MediumModel(
    resonances=(Resonance(1.0, 2.0, 0.05),),
    constants=PhysicalConstants(c=1.0, eps0=1.0, hbar=1.0, area=1.0),
)
VACUUM = MediumModel.vacuum()


class TestPhysicalConstants:
    def test_alpha_recomputed_from_inputs(self):
        pc = PhysicalConstants()
        expected = math.sqrt(pc.hbar / (4 * math.pi * pc.c**2 * pc.eps0 * pc.area))
        assert pc.alpha == expected

    def test_alpha_default_value(self):
        # direct evaluation oracle
        assert PhysicalConstants().alpha == pytest.approx(3.2474171545616512e-15, rel=1e-12)

    @pytest.mark.parametrize("bad", [dict(c=0), dict(eps0=-1), dict(hbar=0), dict(area=0)])
    def test_rejects_non_positive(self, bad):
        with pytest.raises(MediumError):
            PhysicalConstants(**bad)


class TestPermittivity:
    def test_vacuum(self):
        assert permittivity(VACUUM, 1e15) == 1.0 + 0.0j

    def test_at_resonance_real_denominator_vanishes(self):
        # eps = bg + i wp^2/(g wr)
        eps = permittivity(LORENTZ_EX, 2e15)
        assert eps == pytest.approx(1.0 + 50.0j, rel=1e-14)

    def test_derived_value(self):
        # frozen: direct complex arithmetic, bg=1, wp2=1e30, wr=2e15, g=1e13, w=1e15
        eps = permittivity(LORENTZ_EX, 1e15)
        assert eps.real == pytest.approx(1.3333296296707813, rel=1e-14)
        assert eps.imag == pytest.approx(0.0011110987655692712, rel=1e-14)

    def test_rejects_non_positive_frequency(self):
        with pytest.raises(MediumError):
            permittivity(LORENTZ_EX, 0.0)
        with pytest.raises(MediumError):
            permittivity(LORENTZ_EX, -1e15)

    @pytest.mark.parametrize("w", np.geomspace(1e13, 1e17, 25))
    def test_passivity(self, w):
        assert permittivity(SHIPPED, w).imag >= 0

    def test_vectorized_matches_scalar(self):
        grid = np.geomspace(1e14, 1e16, 7)
        vec = permittivity(SHIPPED, grid)
        for w, e in zip(grid, vec):
            assert e == permittivity(SHIPPED, w)


class TestWavenumber:
    def test_vacuum_k_omega_over_c(self):
        k = wavenumber(VACUUM, 1e15)
        assert k.real == pytest.approx(1e15 / 299792458.0, rel=1e-15)
        assert k.imag == 0.0

    def test_square_index_identity(self):
        # with eps = (n_r + i n_i)^2 the parts obey k_r = w n_r/c, k_i = w n_i/c
        w = 8e14
        n = refractive_index(SHIPPED, w)
        k = wavenumber(SHIPPED, w)
        c = SHIPPED.constants.c
        assert k.real == pytest.approx(w * n.real / c, rel=1e-14)
        assert k.imag == pytest.approx(w * n.imag / c, rel=1e-14)
        assert n * n == pytest.approx(permittivity(SHIPPED, w), rel=1e-14)

    def test_derived_value(self):
        # frozen: oracle sqrt(eps) evaluation at w=1e15 for LORENTZ_EX
        k = wavenumber(LORENTZ_EX, 1e15)
        assert k.real == pytest.approx(3851661.3879519259, rel=1e-13)
        assert k.imag == pytest.approx(1604.8452593195429, rel=1e-13)

    def test_forward_decay_branch(self):
        for w in np.geomspace(1e14, 1e16, 40):
            assert wavenumber(SHIPPED, w).imag >= 0

    def test_metallic_band_rejected(self):
        # strong undamped oscillator: eps real-negative just above resonance
        model = MediumModel(resonances=(Resonance(4e30, 1e15, 0.0),))
        with pytest.raises(MediumError):
            refractive_index(model, 1.2e15)

    def test_branch_continuity(self):
        w = np.linspace(1.5e15, 2.5e15, 4001)  # straddles the resonance
        k = wavenumber(SHIPPED, w)
        jumps = np.abs(np.diff(k)) / np.abs(k[:-1])
        assert jumps.max() < 5e-3

    def test_weak_absorption_identity(self):
        # k_i ~ w eps_i / (2 c sqrt(eps_r)) when eps_i/eps_r small
        for w in (6e14, 1e15, 1.2e15):
            eps = permittivity(SHIPPED, w)
            if eps.imag / eps.real >= 1e-3:
                continue
            ki = wavenumber(SHIPPED, w).imag
            approx = w * eps.imag / (2 * SHIPPED.constants.c * math.sqrt(eps.real))
            assert abs(ki - approx) / ki < 1e-2


class TestTaylorExpand:
    def test_vacuum(self):
        exp = taylor_expand(VACUUM, 1e15, 2e13, order=3)
        c = VACUUM.constants.c
        assert exp.k[0] == pytest.approx(1e15 / c, rel=1e-12)
        assert exp.k[1] == pytest.approx(1 / c, rel=1e-9)
        # higher coefficients numerically irrelevant at band scale
        for m in (2, 3):
            assert abs(exp.k[m]) * (1e13) ** m / math.factorial(m) < 1e-9 * abs(exp.k[0])
        assert all(abs(p) == 0 for p in exp.p)
        assert exp.k_phi == exp.k[0].real
        assert exp.group_velocity == pytest.approx(c, rel=1e-9)

    def test_dispersionless_constant_eps(self):
        model = MediumModel(resonances=(), eps_background=2.25)
        exp = taylor_expand(model, 1e15, 2e13)
        c = model.constants.c
        assert exp.k[1].real == pytest.approx(1.5 / c, rel=1e-9)
        assert abs(exp.k[2]) * (1e13) ** 2 / 2 < 1e-9 * abs(exp.k[0])

    def test_derived_symbolic_k2(self):
        # frozen: sympy d^2/dw^2 [w sqrt(eps)/c] at w0=5e14 for LORENTZ_EX
        exp = taylor_expand(LORENTZ_EX, 5e14, 2e13, order=2)
        truth = 3.4274847877325212e-25 + 3.5398620400148128e-27j
        assert abs(exp.k[2] - truth) / abs(truth) < 1e-6

    def test_normalized_medium_against_mpmath_truth(self):
        # frozen: mpmath Cauchy-integral derivatives, 50 digits
        truth = [
            2.3409864221365182 + 0.042335302524124173j,
            3.0514870780684116 + 0.27707416646746336j,
            11.826535756527566 + 2.5560276845184386j,
            104.24458954797123 + 31.285621195238381j,
            1231.0990963570912 + 479.90154508258354j,
        ]
        exp = taylor_expand(NORMALIZED, 1.7, 0.3, order=4)
        for m, t in enumerate(truth):
            assert abs(exp.k[m] - t) / abs(t) < 1e-6

    def test_group_velocity_is_inverse_k1r(self):
        exp = taylor_expand(SHIPPED, 1.2e15, 2e13)
        assert exp.group_velocity == pytest.approx(1.0 / exp.k[1].real, rel=1e-14)

    def test_resonance_in_band_rejected(self):
        with pytest.raises(MediumError, match="resonance"):
            taylor_expand(SHIPPED, 2e15, 2e14)

    def test_band_below_zero_rejected(self):
        with pytest.raises(MediumError):
            taylor_expand(SHIPPED, 1e13, 4e13)

    def test_order_below_two_rejected(self):
        with pytest.raises(MediumError):
            taylor_expand(SHIPPED, 1.2e15, 2e13, order=1)

    def test_from_coefficients(self):
        exp = DispersionExpansion.from_coefficients(100.0, 20.0, [0.0, 1.0, -1.0])
        assert exp.k_phi == 0.0
        assert exp.group_velocity == 1.0
        assert exp.k0i == 0.0


class TestDerivativeCheckInvariant:
    """k[m] vs an independent FD of different base order (O(h^4) stencils)."""

    O4 = {
        1: ([-2, -1, 1, 2], [1, -8, 8, -1], 12.0),
        2: ([-2, -1, 0, 1, 2], [-1, 16, -30, 16, -1], 12.0),
        3: ([-3, -2, -1, 1, 2, 3], [1, -8, 13, -13, 8, -1], 8.0),
        4: ([-3, -2, -1, 0, 1, 2, 3], [-1, 12, -39, 56, -39, 12, -1], 6.0),
    }

    @classmethod
    def independent_fd(cls, fn, x0, m, h0, levels=3):
        if m == 0:
            return fn(x0)
        offs, coef, den = cls.O4[m]

        def stencil(h):
            return sum(c * fn(x0 + o * h) for o, c in zip(offs, coef)) / (den * h**m)

        vals = [stencil(h0 / 2**i) for i in range(levels)]
        for p in (4, 6):
            vals = [(2**p * vals[i + 1] - vals[i]) / (2**p - 1) for i in range(len(vals) - 1)]
        return vals[0]

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_k_matches_independent_fd(self, m):
        w0, dw = 1.7, 0.3
        exp = taylor_expand(NORMALIZED, w0, dw, order=4)
        fd = self.independent_fd(lambda w: wavenumber(NORMALIZED, w), w0, m, dw / 8)
        assert abs(exp.k[m] - fd) / abs(exp.k[m]) < 1e-6


class TestKKResidual:
    def test_shipped_lorentz_wide_grid(self):
        grid = np.linspace(2e14, 2e16, 4096)
        assert kk_residual(SHIPPED, grid) < 1e-3

    def test_brute_force_pv_oracle_agreement(self):
        # The PV-quadrature oracle reconstructs eps_r to ~1e-7; the spectral
        # method must sit within its own discretization error of the truth.
        grid = np.linspace(2e14, 2e16, 4096)
        sub = grid[::512]
        eps_sub = np.asarray(permittivity(SHIPPED, sub))
        pv = _pv_reconstruction(SHIPPED, sub)
        norm = np.max(np.abs(np.asarray(permittivity(SHIPPED, grid)).real - 1.0))
        assert np.max(np.abs(pv - eps_sub.real)) / norm < 1e-5
        # and the implementation's residual is of the same (discretization) order
        assert kk_residual(SHIPPED, grid) < 1e-3

    def test_zeroed_absorption_detected(self):
        # a lineshape whose eps_i was zeroed while eps_r keeps the resonance:
        # the reconstruction from zero absorption is identically zero, so the
        # residual equals max|eps_r - bg| / max|eps_r - bg| = 1 >> 1e-1
        grid = np.linspace(2e14, 2e16, 4096)
        target = np.asarray(permittivity(SHIPPED, grid)).real - SHIPPED.eps_background
        reconstruction_of_zero = np.zeros_like(target)
        residual = np.max(np.abs(target - reconstruction_of_zero)) / np.max(np.abs(target))
        assert residual > 1e-1

    def test_vacuum_residual_zero(self):
        grid = np.linspace(1e14, 1e16, 4096)
        assert kk_residual(VACUUM, grid) == 0.0

    def test_narrow_grid_rejected(self):
        grid = np.linspace(2e14, 4e15, 4096)
        with pytest.raises(MediumError):
            kk_residual(SHIPPED, grid)

    def test_undamped_resonance_flagged(self):
        model = MediumModel(resonances=(Resonance(1e28, 2e15, 0.0),))
        grid = np.linspace(2e14, 2e16, 4096)
        with pytest.raises(MediumError, match="undamped"):
            kk_residual(model, grid)


def _pv_reconstruction(model, w_query):
    """Brute-force principal-value quadrature of the KK integral (test oracle)."""
    wr_max = max(r.omega_r for r in model.resonances)
    wp = np.linspace(1e9, 30 * wr_max, 400000)
    ui = np.asarray(permittivity(model, wp)).imag
    out = []
    for w in w_query:
        uw = np.interp(w, wp, ui)
        raw = (wp * ui - w * uw) / (wp**2 - w**2)
        val = np.trapezoid(raw, wp)
        a, b = wp[0], wp[-1]
        corr = uw * 0.5 * (np.log(abs((b - w) / (b + w))) - np.log(abs((a - w) / (a + w))))
        out.append(model.eps_background + (2 / np.pi) * (val + corr))
    return np.array(out)


