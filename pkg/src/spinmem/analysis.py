"""Windowed spectra, peak extraction, and small-angle response-mode roots.

Spectral analysis works on uniformly sampled trajectories: a Blackman window
over a configurable time span, zero-padded magnitude FFT, and local-maximum
peak extraction with a prominence cut referenced to the strongest amplitude
above the search floor.  Mode roots come from the characteristic polynomial of
the linearized transverse dynamics, built from the damping kernel's time
moments.
"""

from __future__ import annotations

import dataclasses
import logging
import math

import numpy as np
import scipy.signal

from .kernelcore import KernelSpec, kernel_moments
from .spindyn import Trajectory

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


@dataclasses.dataclass(frozen=True)
class WindowSpec:
    """Time span, in ps, selected for spectral analysis.

    Samples with ``start_ps <= t <= end_ps`` are kept and tapered with a
    Blackman window.
    """

    start_ps: float
    end_ps: float

    def __post_init__(self) -> None:
        if self.start_ps < 0:
            raise ValueError(f"start_ps must be non-negative, got {self.start_ps}")
        if not self.end_ps > self.start_ps:
            raise ValueError(
                f"end_ps must exceed start_ps, got [{self.start_ps}, {self.end_ps}]"
            )


@dataclasses.dataclass(frozen=True)
class Spectrum:
    """Single-sided magnitude spectrum on a uniform frequency grid (THz)."""

    freqs: np.ndarray
    amps: np.ndarray

    def __post_init__(self) -> None:
        if len(self.freqs) != len(self.amps):
            raise ValueError("freqs and amps must have equal length")

    @property
    def df(self) -> float:
        return float(self.freqs[1] - self.freqs[0])


@dataclasses.dataclass(frozen=True)
class Peak:
    """One refined spectral peak: frequency in THz and its amplitude."""

    freq_thz: float
    amplitude: float


@dataclasses.dataclass(frozen=True)
class RootLine:
    """One deduplicated response-mode line: frequency in THz, multiplicity."""

    freq_thz: float
    multiplicity: int


def apply_window(
    times: np.ndarray, values: np.ndarray, window: WindowSpec
) -> tuple[np.ndarray, np.ndarray]:
    """Select the window's samples and taper them with a Blackman profile.

    Parameters
    ----------
    times : ndarray
        Sample times, ps, uniformly spaced ascending.
    values : ndarray
        Samples, same length as ``times``.
    window : WindowSpec
        Span to keep (inclusive at both ends).

    Returns
    -------
    (ndarray, ndarray)
        The selected times and the tapered values.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.shape != values.shape:
        raise ValueError("times and values must have equal length")
    mask = (times >= window.start_ps - 1e-12) & (times <= window.end_ps + 1e-12)
    n = int(np.count_nonzero(mask))
    if n < 8:
        raise ValueError(
            f"window [{window.start_ps}, {window.end_ps}] ps selects only "
            f"{n} samples; need at least 8"
        )
    return times[mask], values[mask] * np.blackman(n)


def spectrum(
    traj: Trajectory,
    component: str = "z",
    window: WindowSpec | None = None,
    pad_factor: int = 4,
) -> Spectrum:
    """Windowed, zero-padded magnitude spectrum of one trajectory component.

    The mean over the window is not removed; the window taper itself
    suppresses out-of-band leakage.  Amplitudes are normalized by half the
    window weight so a unit-amplitude in-band sinusoid reads about 1.

    Parameters
    ----------
    traj : Trajectory
        Input trajectory.
    component : str
        Cartesian component name: 'x', 'y' or 'z'.
    window : WindowSpec, optional
        Analysis span; defaults to the full trajectory.
    pad_factor : int
        Zero-padding multiple of the window length, >= 1.

    Returns
    -------
    Spectrum
    """
    if pad_factor < 1:
        raise ValueError(f"pad_factor must be >= 1, got {pad_factor}")
    if window is None:
        window = WindowSpec(float(traj.times[0]), float(traj.times[-1]))
    _, tapered = apply_window(traj.times, traj.component(component), window)
    n = len(tapered)
    n_pad = n * pad_factor
    dt = traj.meta.dt
    amps = np.abs(np.fft.rfft(tapered, n=n_pad)) * (2.0 / np.sum(np.blackman(n)))
    freqs = np.fft.rfftfreq(n_pad, dt)
    return Spectrum(freqs=freqs, amps=amps)


def ensemble_spectrum(
    trajs: list[Trajectory],
    component: str = "z",
    window: WindowSpec | None = None,
    pad_factor: int = 4,
) -> Spectrum:
    """Mean of the per-trajectory magnitude spectra of an ensemble.

    All trajectories must share the same time grid.
    """
    if not trajs:
        raise ValueError("ensemble_spectrum needs at least one trajectory")
    spectra = [spectrum(t, component, window, pad_factor) for t in trajs]
    freqs = spectra[0].freqs
    for s in spectra[1:]:
        if len(s.freqs) != len(freqs) or abs(s.freqs[-1] - freqs[-1]) > 1e-12:
            raise ValueError("ensemble members must share the same grid")
    amps = np.mean([s.amps for s in spectra], axis=0)
    return Spectrum(freqs=freqs, amps=amps)


def find_peaks(
    spec: Spectrum, min_freq: float = 0.8, prominence_frac: float = 0.1
) -> list[Peak]:
    """Local spectral maxima above a frequency floor, prominence-filtered.

    A candidate is any strict local maximum with frequency above ``min_freq``.
    It is kept when its prominence exceeds ``prominence_frac`` times the
    largest amplitude found above ``min_freq``.  Each kept peak is refined by
    a quadratic fit through its three surrounding bins.

    Parameters
    ----------
    spec : Spectrum
        Input spectrum.
    min_freq : float
        Frequency floor, THz.
    prominence_frac : float
        Fraction of the strongest above-floor amplitude a peak's prominence
        must exceed.

    Returns
    -------
    list of Peak
        Sorted by frequency.
    """
    if prominence_frac <= 0:
        raise ValueError(f"prominence_frac must be positive, got {prominence_frac}")
    amps = spec.amps
    freqs = spec.freqs
    above = freqs > min_freq
    if not np.any(above):
        return []
    threshold = prominence_frac * float(np.max(amps[above]))
    idx, _ = scipy.signal.find_peaks(amps)
    if len(idx) == 0:
        return []
    prominences = scipy.signal.peak_prominences(amps, idx)[0]
    keep = idx[(freqs[idx] > min_freq) & (prominences > threshold)]
    df = spec.df
    peaks = []
    for i in keep:
        left, mid, right = amps[i - 1], amps[i], amps[i + 1]
        denom = left - 2.0 * mid + right
        delta = 0.0 if denom == 0 else 0.5 * (left - right) / denom
        peaks.append(
            Peak(
                freq_thz=float(freqs[i] + delta * df),
                amplitude=float(mid - 0.25 * (left - right) * delta),
            )
        )
    return sorted(peaks, key=lambda p: p.freq_thz)


def susceptibility_polynomial(
    kernel: KernelSpec, m_max: int, branch: int, precession_rate: float = 0.0176
) -> np.ndarray:
    """Characteristic-polynomial coefficients of one circular transverse mode.

    The linearized transverse dynamics about the bias axis splits into two
    circular branches; each satisfies a polynomial equation in the angular
    frequency built from the kernel's time moments.  Coefficients are returned
    highest degree first, ready for root finding.

    Parameters
    ----------
    kernel : KernelSpec
        Damping model variant.
    m_max : int
        Truncation order of the moment expansion.
    branch : int
        +1 or -1, selecting the circular branch.
    precession_rate : float
        Zero-damping precession rate about the bias axis, rad/ps.

    Returns
    -------
    ndarray of complex
        Polynomial coefficients, degree ``m_max`` down to 0.
    """
    if branch not in (+1, -1):
        raise ValueError(f"branch must be +1 or -1, got {branch}")
    kappas = kernel_moments(kernel, m_max).kappas
    coeffs = np.zeros(m_max + 1, dtype=complex)
    coeffs[-1] = precession_rate
    for m in range(1, m_max + 1):
        coeffs[-1 - m] += -kappas[m - 1] * (1j) ** m
    coeffs[-2] += branch
    return coeffs


def susceptibility_roots(
    kernel: KernelSpec,
    m_max: int,
    precession_rate: float = 0.0176,
    dedup_thz: float = 0.01,
) -> list[RootLine]:
    """Response-mode frequencies of the linearized transverse dynamics.

    Solves both circular branches, converts each root's real part to a
    frequency in THz, merges values closer than ``dedup_thz`` into one line
    with a multiplicity count, and sorts ascending.

    Parameters
    ----------
    kernel : KernelSpec
        Damping model variant.
    m_max : int
        Truncation order; bounded by the kernel variant's supported moments.
    precession_rate : float
        Zero-damping precession rate about the bias axis, rad/ps.
    dedup_thz : float
        Merge tolerance between root frequencies, THz.

    Returns
    -------
    list of RootLine
        Sorted by frequency.
    """
    nus = []
    for branch in (+1, -1):
        coeffs = susceptibility_polynomial(kernel, m_max, branch, precession_rate)
        if np.allclose(coeffs[:-1], 0):
            continue  # degenerate: constant polynomial, no roots
        roots = np.roots(coeffs)
        nus.extend(abs(float(np.real(r))) / TWO_PI for r in roots)
    nus.sort()
    lines: list[RootLine] = []
    cluster: list[float] = []
    for nu in nus:
        if cluster and nu - cluster[0] > dedup_thz:
            lines.append(
                RootLine(freq_thz=float(np.mean(cluster)), multiplicity=len(cluster))
            )
            cluster = []
        cluster.append(nu)
    if cluster:
        lines.append(
            RootLine(freq_thz=float(np.mean(cluster)), multiplicity=len(cluster))
        )
    return lines
