"""Beampattern, white noise gain, and directivity factor.

The beampattern includes the per-element directivity: ``B(theta) =
h^H T(theta) d(omega, theta)`` with ``T`` the diagonal of first-order
responses. With all elements omnidirectional it collapses to the bare
``h^H d``. White noise gain and directivity factor are power ratios
against spatially white and 2-D diffuse noise; both are invariant to a
complex rescaling of the filter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidFilterError
from .geometry import ArrayGeometry, PhysicalConstants, steering_vector
from .solver import BeamformerFilter

MIN_INTEGRATION_POINTS = 512
DEFAULT_INTEGRATION_POINTS = 4096
BEAMPATTERN_FLOOR_DB = -50.0


def magnitude_db(values, floor_db: float | None = None):
    """20*log10 of a magnitude, optionally clamped at a floor."""
    mags = np.abs(np.asarray(values))
    if floor_db is not None:
        mags = np.maximum(mags, 10.0 ** (floor_db / 20.0))
    with np.errstate(divide="ignore"):
        return 20.0 * np.log10(mags)


def power_db(values):
    """10*log10 of a linear power ratio."""
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(np.asarray(values, dtype=float))


def beampattern(
    filt: BeamformerFilter,
    geometry: ArrayGeometry,
    constants: PhysicalConstants,
    omega: float,
    theta,
):
    """Spatial response at plane-wave angle(s) ``theta``.

    ``omega`` must be one of the filter's design-grid frequencies; metric
    evaluation never interpolates between filter solutions.

    Returns
    -------
    complex or ndarray
        ``h^H(omega) T(theta) d(omega, theta)``.
    """
    h = filt.weights_at(omega)
    d = steering_vector(geometry, constants, omega, theta)
    t = geometry.response_matrix(theta)
    if d.ndim == 1:
        return complex(np.vdot(h, t * d))
    return (h.conj()[:, None] * t * d).sum(axis=0)


def white_noise_gain(
    filt: BeamformerFilter,
    geometry: ArrayGeometry,
    constants: PhysicalConstants,
    omega: float,
    theta_s: float,
) -> float:
    """Gain against sensor self-noise, ``|B(theta_s)|^2 / h^H h`` (linear)."""
    h = filt.weights_at(omega)
    norm_sq = float(np.vdot(h, h).real)
    if norm_sq == 0.0:
        raise InvalidFilterError("filter has zero norm at this frequency")
    response = beampattern(filt, geometry, constants, omega, theta_s)
    return abs(response) ** 2 / norm_sq


def directivity_factor(
    filt: BeamformerFilter,
    geometry: ArrayGeometry,
    constants: PhysicalConstants,
    omega: float,
    theta_s: float,
    integration_points: int = DEFAULT_INTEGRATION_POINTS,
) -> float:
    """Gain against 2-D diffuse noise (linear).

    The angular mean of ``|B|^2`` is taken with the uniform rectangle
    rule over [-pi, pi), spectrally accurate for this periodic integrand.
    """
    integration_points = int(integration_points)
    if integration_points < MIN_INTEGRATION_POINTS:
        raise ValueError(
            f"integration_points must be >= {MIN_INTEGRATION_POINTS}, "
            f"got {integration_points}"
        )
    h = filt.weights_at(omega)
    if float(np.vdot(h, h).real) == 0.0:
        raise InvalidFilterError("filter has zero norm at this frequency")
    grid = -np.pi + 2.0 * np.pi * np.arange(integration_points) / integration_points
    responses = beampattern(filt, geometry, constants, omega, grid)
    mean_power = float(np.mean(np.abs(responses) ** 2))
    peak = abs(beampattern(filt, geometry, constants, omega, theta_s)) ** 2
    return peak / mean_power


def gain_curves(
    filt: BeamformerFilter,
    geometry: ArrayGeometry,
    constants: PhysicalConstants,
    theta_s: float,
    integration_points: int = DEFAULT_INTEGRATION_POINTS,
) -> tuple[np.ndarray, np.ndarray]:
    """White noise gain and directivity factor (linear) over the grid.

    Computes exactly what per-frequency `white_noise_gain` and
    `directivity_factor` calls would, but hoists the frequency-invariant
    angle factors (element responses, position-angle cosines) out of the
    loop; results are bit-identical to the scalar functions.
    """
    integration_points = int(integration_points)
    if integration_points < MIN_INTEGRATION_POINTS:
        raise ValueError(
            f"integration_points must be >= {MIN_INTEGRATION_POINTS}, "
            f"got {integration_points}"
        )
    grid_theta = -np.pi + 2.0 * np.pi * np.arange(integration_points) / integration_points
    cosines = np.cos(grid_theta[None, :] - geometry.position_angles[:, None])
    responses = geometry.response_matrix(grid_theta)
    radii = geometry.radii
    c = constants.speed_of_sound
    omegas = filt.grid.omegas
    wng = np.empty(len(omegas))
    df = np.empty(len(omegas))
    for i, omega in enumerate(omegas):
        h = filt.weights[i]
        norm_sq = float(np.vdot(h, h).real)
        if norm_sq == 0.0:
            raise InvalidFilterError("filter has zero norm at this frequency")
        x = omega * radii / c
        plane_waves = np.exp(1j * x[:, None] * cosines)
        field = (h.conj()[:, None] * responses * plane_waves).sum(axis=0)
        mean_power = float(np.mean(np.abs(field) ** 2))
        peak = abs(beampattern(filt, geometry, constants, omega, theta_s)) ** 2
        wng[i] = peak / norm_sq
        df[i] = peak / mean_power
    return wng, df


@dataclass(frozen=True)
class MetricsResult:
    """Beampattern samples per frequency plus WNG/DF curves in dB."""

    theta_grid: np.ndarray  # (K,) radians, uniform over [0, 2pi)
    beampattern: np.ndarray  # (F, K) complex
    wng_db: np.ndarray  # (F,)
    df_db: np.ndarray  # (F,)


def compute_metrics(
    filt: BeamformerFilter,
    geometry: ArrayGeometry,
    constants: PhysicalConstants,
    angle_count: int = 360,
    integration_points: int = DEFAULT_INTEGRATION_POINTS,
) -> MetricsResult:
    """Evaluate all three metrics over the filter's whole design grid."""
    if angle_count < 1:
        raise ValueError("angle_count must be >= 1")
    theta_grid = 2.0 * np.pi * np.arange(angle_count) / angle_count
    omegas = filt.grid.omegas
    bp = np.empty((len(omegas), angle_count), dtype=complex)
    for i, omega in enumerate(omegas):
        bp[i] = beampattern(filt, geometry, constants, omega, theta_grid)
    wng, df = gain_curves(filt, geometry, constants, filt.theta_s, integration_points)
    return MetricsResult(
        theta_grid=theta_grid,
        beampattern=bp,
        wng_db=power_db(wng),
        df_db=power_db(df),
    )
