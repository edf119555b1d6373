"""Bath spectral density, memory kernels, kernel moments, and parameter identities.

This module is the mathematical foundation shared by the dynamics and analysis
layers.  It defines the Lorentzian coupling density between the macrospin and
its surroundings, the damped-oscillation memory kernel that density induces,
closed-form kernel moments, and the algebraic identities linking the density
parameters to the effective damping constant and inertial time.

Unit conventions
----------------
User-facing quantities are expressed in linear frequency (THz) and time (ps).
All internal dynamics use angular units: ``omega0 = 2*pi*nu0`` (rad/ps),
``gamma_w = 2*pi*gamma`` (rad/ps), ``amp_w = (2*pi)**3 * amp_A`` (rad^3/ps^3).
The kernel value carries rad^2/ps^2 and the m-th kernel moment carries
ps^(m-1), so the first moment is dimensionless and equals minus the damping
constant.

All functions here are pure and safe to call concurrently.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from typing import Union

import numpy as np
from scipy import integrate

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

#: Default angular reference frequency (rad/ps) for the dimensionless mapping,
#: the precession rate in a 1 T field.
OMEGA_REF_DEFAULT = 0.176


@dataclasses.dataclass(frozen=True)
class SpectralDensity:
    """Lorentzian coupling density parameters in linear-frequency units.

    Parameters
    ----------
    amp_A : float
        Coupling amplitude, THz^3. Must be non-negative; zero disables the
        memory coupling entirely.
    gamma : float
        Resonance width, THz. Must be positive and below ``2 * nu0`` so the
        induced kernel oscillates (underdamped regime).
    nu0 : float
        Resonance center frequency, THz. Must be positive.
    """

    amp_A: float
    gamma: float
    nu0: float

    def __post_init__(self) -> None:
        if not self.amp_A >= 0:
            raise ValueError(f"amp_A must be non-negative, got {self.amp_A}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not self.nu0 > 0:
            raise ValueError(f"nu0 must be positive, got {self.nu0}")
        if not self.gamma < 2.0 * self.nu0:
            raise ValueError(
                "underdamped regime requires gamma < 2*nu0, got "
                f"gamma={self.gamma}, nu0={self.nu0}"
            )


@dataclasses.dataclass(frozen=True)
class AngularParams:
    """Angular-unit image of a :class:`SpectralDensity`.

    Instances are derived deterministically via :meth:`from_density`; fields
    are never set independently.

    Attributes
    ----------
    omega0 : float
        ``2*pi*nu0``, rad/ps.
    gamma_w : float
        ``2*pi*gamma``, rad/ps.
    amp_w : float
        ``(2*pi)**3 * amp_A``, rad^3/ps^3.
    omega1 : float
        Damped oscillation frequency ``sqrt(omega0**2 - gamma_w**2/4)``, rad/ps.
    """

    omega0: float
    gamma_w: float
    amp_w: float
    omega1: float

    @classmethod
    def from_density(cls, d: SpectralDensity) -> "AngularParams":
        """Build the angular parameter set from a linear-frequency density."""
        omega0 = TWO_PI * d.nu0
        gamma_w = TWO_PI * d.gamma
        amp_w = TWO_PI**3 * d.amp_A
        omega1 = math.sqrt(omega0**2 - gamma_w**2 / 4.0)
        return cls(omega0=omega0, gamma_w=gamma_w, amp_w=amp_w, omega1=omega1)


@dataclasses.dataclass(frozen=True)
class Markovian:
    """Time-local damping kernel variant carrying the damping constant."""

    alpha: float

    def __post_init__(self) -> None:
        if self.alpha < 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")


@dataclasses.dataclass(frozen=True)
class Inertial:
    """Damping-plus-inertia kernel variant.

    Parameters
    ----------
    alpha : float
        Damping constant, dimensionless.
    tau_in : float
        Inertial relaxation time, ps. Must be positive.
    """

    alpha: float
    tau_in: float

    def __post_init__(self) -> None:
        if self.alpha < 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        if not self.tau_in > 0:
            raise ValueError(f"tau_in must be positive, got {self.tau_in}")


@dataclasses.dataclass(frozen=True)
class Lorentzian:
    """Full memory-kernel variant carrying the coupling density."""

    density: SpectralDensity


KernelSpec = Union[Markovian, Inertial, Lorentzian]


@dataclasses.dataclass(frozen=True)
class KernelMoments:
    """Ordered kernel moments ``kappa_m`` for m = 1..m_max.

    ``kappas[i]`` is the moment of order ``i + 1``; the order-m moment carries
    ps^(m-1) in the angular-internal convention.
    """

    kappas: tuple[float, ...]

    @property
    def m_max(self) -> int:
        return len(self.kappas)


def lorentzian_density(nu, d: SpectralDensity):
    """Evaluate the Lorentzian coupling density at linear frequency ``nu``.

    Parameters
    ----------
    nu : float or ndarray
        Frequency, THz. Must be non-negative.
    d : SpectralDensity
        Density parameters.

    Returns
    -------
    float or ndarray
        ``A*Gamma*nu / ((nu0**2 - nu**2)**2 + Gamma**2 * nu**2)``; strictly
        positive for ``nu > 0`` and zero at ``nu = 0``.

    Raises
    ------
    ValueError
        If any requested frequency is negative.
    """
    nu_arr = np.asarray(nu, dtype=float)
    if np.any(nu_arr < 0):
        raise ValueError("frequency must be non-negative")
    num = d.amp_A * d.gamma * nu_arr
    den = (d.nu0**2 - nu_arr**2) ** 2 + d.gamma**2 * nu_arr**2
    out = num / den
    return out if nu_arr.ndim else float(out)


def kernel_eval(tau, d: SpectralDensity):
    """Evaluate the memory kernel induced by a Lorentzian density, closed form.

    Parameters
    ----------
    tau : float or ndarray
        Time lag, ps. Negative lags return 0 (causal kernel).
    d : SpectralDensity
        Density parameters.

    Returns
    -------
    float or ndarray
        ``amp_w * exp(-gamma_w*tau/2) * sin(omega1*tau) / omega1`` for
        ``tau >= 0``, else 0. Units rad^2/ps^2.

    Notes
    -----
    The bound ``|K(tau)| <= amp_w * exp(-gamma_w*tau/2) / omega1`` holds for
    all non-negative lags.
    """
    ap = AngularParams.from_density(d)
    tau_arr = np.asarray(tau, dtype=float)
    pos = tau_arr >= 0
    safe_tau = np.where(pos, tau_arr, 0.0)
    vals = (
        ap.amp_w
        * np.exp(-ap.gamma_w * safe_tau / 2.0)
        * np.sin(ap.omega1 * safe_tau)
        / ap.omega1
    )
    out = np.where(pos, vals, 0.0)
    return out if tau_arr.ndim else float(out)


def kernel_from_density(tau, d: SpectralDensity, quadrature_tol: float = 1e-9):
    """Evaluate the memory kernel by numeric sine transform of the density.

    Serves as the independent oracle for :func:`kernel_eval`: the kernel is the
    sine transform ``K(tau) = (2/pi) * Int_0^inf J(omega) sin(omega*tau)
    d omega`` of the angular coupling density
    ``J(omega) = amp_w * gamma_w * omega / ((omega0**2 - omega**2)**2
    + gamma_w**2 * omega**2)``.

    Parameters
    ----------
    tau : float or array_like
        Time lag(s), ps. Must be non-negative.
    d : SpectralDensity
        Density parameters.
    quadrature_tol : float
        Absolute tolerance requested from the quadrature, in units of the
        kernel's envelope scale ``amp_w / omega1``.

    Returns
    -------
    float or ndarray
        Kernel value(s), rad^2/ps^2.

    Raises
    ------
    ValueError
        If any ``tau`` is negative.
    RuntimeError
        If the quadrature error estimate exceeds the requested tolerance.
    """
    tau_arr = np.asarray(tau, dtype=float)
    if tau_arr.ndim:
        return np.array([_kernel_transform_scalar(float(t), d, quadrature_tol) for t in tau_arr])
    return _kernel_transform_scalar(float(tau_arr), d, quadrature_tol)


def _kernel_transform_scalar(tau: float, d: SpectralDensity, quadrature_tol: float) -> float:
    if tau < 0:
        raise ValueError("time lag must be non-negative")
    if tau == 0.0:
        return 0.0
    ap = AngularParams.from_density(d)
    scale = ap.amp_w / ap.omega1

    def density_of_omega(omega: float) -> float:
        den = (ap.omega0**2 - omega**2) ** 2 + ap.gamma_w**2 * omega**2
        return ap.amp_w * ap.gamma_w * omega / den

    # oscillatory quadrature per segment; the resonance gets its own segment
    # because the sin-weighted rule needs a smooth integrand
    upper = 100.0 * ap.omega0
    edges = [
        0.0,
        max(0.0, ap.omega0 - 5.0 * ap.gamma_w),
        ap.omega0 + 5.0 * ap.gamma_w,
        upper,
    ]
    val = 0.0
    err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi <= lo:
            continue
        part, part_err = integrate.quad(
            density_of_omega,
            lo,
            hi,
            weight="sin",
            wvar=tau,
            limit=2000,
            epsabs=quadrature_tol * scale,
            epsrel=1e-12,
        )
        val += part
        err += part_err
    if err > 10.0 * quadrature_tol * scale:
        raise RuntimeError(
            f"kernel quadrature did not converge: error estimate {err:.3e} "
            f"exceeds tolerance {quadrature_tol * scale:.3e}"
        )
    return (2.0 / math.pi) * val


def kernel_moment(m: int, d: SpectralDensity) -> float:
    """Closed-form kernel moment of order ``m``.

    The moment is ``kappa_m = (-1)**m / m! * Int_0^inf tau**m K(tau) d tau``,
    which for the damped-oscillation kernel evaluates to
    ``(-1)**m * (amp_w/omega1) * Im[(gamma_w/2 - i*omega1)**-(m+1)]``.

    Parameters
    ----------
    m : int
        Moment order, >= 0. Order 0 is the static gain of the kernel's
        convolution response.
    d : SpectralDensity
        Density parameters.

    Returns
    -------
    float
        Moment value, carrying ps^(m-1).

    Raises
    ------
    ValueError
        If ``m < 0``.
    """
    if m < 0:
        raise ValueError(f"moment order must be >= 0, got {m}")
    ap = AngularParams.from_density(d)
    pole = complex(ap.gamma_w / 2.0, -ap.omega1)
    return (-1.0) ** m * (ap.amp_w / ap.omega1) * (pole ** -(m + 1)).imag


def kernel_moments(kernel: KernelSpec, m_max: int) -> KernelMoments:
    """Collect the moments ``kappa_1 .. kappa_(m_max)`` for a kernel variant.

    Markovian kernels have the single moment ``-alpha`` (higher orders are
    zero); inertial kernels add ``-alpha*tau_in``; the Lorentzian kernel uses
    the closed form of :func:`kernel_moment`.

    Parameters
    ----------
    kernel : KernelSpec
        Kernel variant.
    m_max : int
        Highest moment order, >= 1. Markovian supports 1, inertial 2,
        Lorentzian up to 8.

    Returns
    -------
    KernelMoments
    """
    if m_max < 1:
        raise ValueError(f"m_max must be >= 1, got {m_max}")
    if isinstance(kernel, Markovian):
        if m_max != 1:
            raise ValueError("Markovian kernel supports m_max = 1 only")
        return KernelMoments(kappas=(-kernel.alpha,))
    if isinstance(kernel, Inertial):
        if m_max != 2:
            raise ValueError("inertial kernel supports m_max = 2 only")
        return KernelMoments(
            kappas=(-kernel.alpha, -kernel.alpha * kernel.tau_in)
        )
    if isinstance(kernel, Lorentzian):
        if m_max > 8:
            raise ValueError("Lorentzian kernel supports m_max <= 8")
        return KernelMoments(
            kappas=tuple(kernel_moment(m, kernel.density) for m in range(1, m_max + 1))
        )
    raise TypeError(f"unknown kernel variant: {type(kernel).__name__}")


def derive_alpha_tauin(d: SpectralDensity) -> tuple[float, float]:
    """Derive the damping constant and inertial time from density parameters.

    Returns
    -------
    (alpha, tau_in) : tuple of float
        ``alpha = A*Gamma/nu0**4`` (dimensionless) and
        ``tau_in = (nu0**2 - Gamma**2) / (2*pi*nu0**2*Gamma)`` (ps).
    """
    alpha = d.amp_A * d.gamma / d.nu0**4
    tau_in = (d.nu0**2 - d.gamma**2) / (TWO_PI * d.nu0**2 * d.gamma)
    return alpha, tau_in


def fit_lorentzian(alpha: float, tau_in: float, nu0: float) -> SpectralDensity:
    """Invert the damping/inertia identities for the density parameters.

    Solves ``Gamma**2 + 2*pi*nu0**2*tau_in*Gamma - nu0**2 = 0`` for its
    positive root, then ``A = alpha*nu0**4/Gamma``. Round-trips with
    :func:`derive_alpha_tauin` to 1e-10 relative.

    Parameters
    ----------
    alpha : float
        Damping constant, > 0.
    tau_in : float
        Inertial time, ps, > 0.
    nu0 : float
        Resonance center, THz, > 0.

    Returns
    -------
    SpectralDensity
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not tau_in > 0:
        raise ValueError(f"tau_in must be positive, got {tau_in}")
    if not nu0 > 0:
        raise ValueError(f"nu0 must be positive, got {nu0}")
    b = TWO_PI * nu0**2 * tau_in
    disc = b**2 + 4.0 * nu0**2
    gamma = (-b + math.sqrt(disc)) / 2.0
    if not gamma > 0:
        raise RuntimeError(
            f"no positive width root for alpha={alpha}, tau_in={tau_in}, nu0={nu0}"
        )
    amp = alpha * nu0**4 / gamma
    return SpectralDensity(amp_A=amp, gamma=gamma, nu0=nu0)


def to_dimensionless(
    d: SpectralDensity, omega_ref: float = OMEGA_REF_DEFAULT
) -> tuple[float, float, float]:
    """Scale the density parameters by an angular reference frequency.

    Parameters
    ----------
    d : SpectralDensity
        Density parameters.
    omega_ref : float
        Reference angular frequency, rad/ps. Must be positive. The default is
        the precession rate in a 1 T field.

    Returns
    -------
    (amp_tilde, omega0_tilde, gamma_tilde) : tuple of float
        ``(2*pi)**3 * A / omega_ref**3``, ``2*pi*nu0/omega_ref`` and
        ``2*pi*gamma/omega_ref``.
    """
    if not omega_ref > 0:
        raise ValueError(f"omega_ref must be positive, got {omega_ref}")
    return (
        TWO_PI**3 * d.amp_A / omega_ref**3,
        TWO_PI * d.nu0 / omega_ref,
        TWO_PI * d.gamma / omega_ref,
    )
