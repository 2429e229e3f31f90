"""Seeded noise sampling and ensemble moment estimation.

The c-number ensemble represents symmetrically ordered operator moments:
vacuum shows up as half-quantum Gaussian noise, the medium's Langevin force as
delta-correlated complex white noise, and loss is balanced by a fluctuation
amplitude calibrated so damped modes hold a stationary variance.

All randomness flows from one 64-bit seed through counter-based (Philox)
per-trajectory substreams keyed by (seed, trajectory index), so ensembles are
order-independent and parallelizable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "NoiseProcess",
    "EnsembleMoments",
    "sample_force",
    "sample_slice_noise",
    "fd_noise_amplitude",
    "sample_input_pulse",
    "reduce_moments",
    "mode_variances",
]


@dataclass
class NoiseProcess:
    """Seeded complex-Gaussian noise source.

    ``nbar`` is the mean thermal occupation at the carrier; ``v0`` the vacuum
    mode variance in normalized field units (default 1/2).  ``counter`` tracks
    the number of draw calls made through this instance for reproducibility
    audits.
    """

    seed: int = 0
    nbar: float = 0.0
    v0: float = 0.5
    counter: int = field(default=0, compare=False)
    _key: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if self.nbar < 0:
            raise ValueError("thermal occupation must be non-negative")
        if self.v0 <= 0:
            raise ValueError("vacuum mode variance must be positive")
        self._gen = None

    def substream(self, index: int) -> "NoiseProcess":
        """Independent per-trajectory stream keyed by (seed, index)."""
        sub = NoiseProcess(seed=self.seed, nbar=self.nbar, v0=self.v0)
        sub._key = self._key + (int(index),)
        return sub

    @property
    def generator(self) -> np.random.Generator:
        if self._gen is None:
            seq = np.random.SeedSequence((self.seed,) + self._key)
            self._gen = np.random.Generator(np.random.Philox(seq))
        return self._gen

    def draw_complex(self, size, variance: float) -> np.ndarray:
        """Isotropic complex Gaussians with the given total variance per sample."""
        self.counter += 1
        n = int(np.prod(size)) if not np.isscalar(size) else int(size)
        z = self.generator.standard_normal(2 * n)
        out = (z[:n] + 1j * z[n:]) * np.sqrt(variance / 2.0)
        return out.reshape(size) if not np.isscalar(size) else out


def sample_force(process: NoiseProcess, cells: int, h_x: float, h_t: float) -> np.ndarray:
    """Langevin force samples on an (x, t) cell grid.

    Discrete image of the delta-correlated force: independent complex Gaussians
    of total variance (nbar + 1/2) v0 / (h_x h_t) per sample; the antisymmetric
    (commutator) part is not represented (symmetric ordering).
    """
    if h_x <= 0 or h_t <= 0:
        raise ValueError("cell sizes must be positive")
    var = (process.nbar + 0.5) * process.v0 / (h_x * h_t)
    return process.draw_complex(cells, var)


def sample_slice_noise(process: NoiseProcess, cells: int, h_x: float) -> np.ndarray:
    """Force samples for a single-frequency slice: variance (nbar + 1/2)/h_x.

    Single-omega realizations use the bare half-quantum normalization; the v0
    knob applies to the envelope calibration only.
    """
    if h_x <= 0:
        raise ValueError("cell size must be positive")
    return process.draw_complex(cells, (process.nbar + 0.5) / h_x)


def fd_noise_amplitude(k0i: float, nbar: float, v0: float = 0.5) -> float:
    """Fluctuation-dissipation noise strength D = 2 k0i (nbar + 1/2) v0.

    White-noise strength per unit propagation distance per temporal mode such
    that the damped mode equation da/dx = -k0i a + eta holds the stationary
    symmetric variance (nbar + 1/2) v0.  Lossless media need no noise.
    """
    if k0i < 0:
        raise ValueError("loss rate must be non-negative")
    return 2.0 * k0i * (nbar + 0.5) * v0


def sample_input_pulse(process: NoiseProcess, coherent):
    """Coherent amplitude plus half-quantum vacuum noise, variance v0/h_t per sample.

    Accepts an EnvelopeGrid (returns a new one) or a plain complex array with a
    given time step via the ``h_t`` attribute convention of EnvelopeGrid.
    """
    from .nlse import EnvelopeGrid

    if not isinstance(coherent, EnvelopeGrid):
        raise TypeError("coherent input must be an EnvelopeGrid")
    noise = process.draw_complex(coherent.a.shape, process.v0 / coherent.h_t)
    return coherent.with_amplitude(coherent.a + noise)


@dataclass
class EnsembleMoments:
    """Across-trajectory first and second moments with jackknife errors."""

    n_traj: int
    mean_field: np.ndarray
    symmetric_variance: np.ndarray
    intensity_mean: np.ndarray
    mean_stderr: np.ndarray
    variance_stderr: np.ndarray
    intensity_stderr: np.ndarray


def reduce_moments(trajectories) -> EnsembleMoments:
    """Reduce an ensemble (list of EnvelopeGrid or a (n, N) complex array).

    The symmetric variance is the divisor-n sample variance of the complex
    amplitudes about the ensemble mean.  Standard errors come from leave-one-
    out jackknife over trajectories.  numpy pairwise summation keeps the
    reduction independent of trajectory ordering to ~1e-12 relative.
    """
    from .nlse import EnvelopeGrid

    if isinstance(trajectories, np.ndarray):
        stack = np.asarray(trajectories, dtype=complex)
    else:
        arrays = [t.a if isinstance(t, EnvelopeGrid) else np.asarray(t, dtype=complex)
                  for t in trajectories]
        if not arrays:
            raise ValueError("empty ensemble")
        stack = np.stack(arrays)
    if stack.ndim != 2 or stack.shape[0] == 0:
        raise ValueError("empty ensemble")
    n = stack.shape[0]

    mean = stack.mean(axis=0)
    dev2 = np.abs(stack - mean) ** 2
    var = dev2.mean(axis=0)
    intensity = (np.abs(stack) ** 2).mean(axis=0)

    if n >= 2:
        mean_se = np.sqrt(dev2.sum(axis=0) / (n * (n - 1)))
        # leave-one-out variance estimates from the sufficient statistics
        s1 = stack.sum(axis=0)
        s2 = (np.abs(stack) ** 2).sum(axis=0)
        mean_loo = (s1 - stack) / (n - 1)
        var_loo = (s2 - np.abs(stack) ** 2) / (n - 1) - np.abs(mean_loo) ** 2
        var_se = np.sqrt((n - 1) / n * ((var_loo - var_loo.mean(axis=0)) ** 2).sum(axis=0))
        ints = np.abs(stack) ** 2
        intensity_se = np.sqrt(((ints - intensity) ** 2).sum(axis=0) / (n * (n - 1)))
    else:
        shape = mean.shape
        mean_se = np.full(shape, np.nan)
        var_se = np.full(shape, np.nan)
        intensity_se = np.full(shape, np.nan)

    return EnsembleMoments(
        n_traj=n,
        mean_field=mean,
        symmetric_variance=var,
        intensity_mean=intensity,
        mean_stderr=mean_se,
        variance_stderr=var_se,
        intensity_stderr=intensity_se,
    )


def mode_variances(stack: np.ndarray, h_t: float) -> np.ndarray:
    """Symmetric variance per temporal (spectral) mode.

    Modes are the unitary DFT of the time samples scaled by sqrt(h_t), so a
    vacuum-level field shows variance v0 per mode independent of the grid.
    """
    stack = np.asarray(stack, dtype=complex)
    b = np.fft.fft(stack, axis=-1, norm="ortho") * np.sqrt(h_t)
    return np.mean(np.abs(b - b.mean(axis=0)) ** 2, axis=0)
