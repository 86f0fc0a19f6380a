"""Planar arrays of first-order directional elements.

Elements live in the xy-plane at polar positions (r, phi) and carry a
first-order angular response ``(1 - q) + q * cos(theta - theta_steer)``:
``q = 0`` is omnidirectional, ``q = 1`` a dipole aimed at ``theta_steer``.
Angles are radians everywhere inside the package; degrees appear only at
file and CLI boundaries.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleGeometryError

TWO_PI = 2.0 * math.pi

SAMPLING_BUDGET = 10**6
_PLACEMENT_CAP = 2000  # candidate draws per element before a full restart


def wrap_angle(angle: float) -> float:
    """Wrap a finite angle to [0, 2*pi)."""
    return float(angle) % TWO_PI


@dataclass(frozen=True)
class PhysicalConstants:
    """Propagation constants; only the speed of sound matters here."""

    speed_of_sound: float = 343.0

    def __post_init__(self):
        c = self.speed_of_sound
        if not (math.isfinite(c) and c > 0.0):
            raise ValueError(f"speed of sound must be positive and finite, got {c!r}")


@dataclass(frozen=True)
class ArrayElement:
    """One transducer: polar position plus first-order directivity.

    Parameters
    ----------
    r : float
        Radial distance from the origin in meters, >= 0.
    phi : float
        Position angle against the x-axis in radians (wrapped to [0, 2pi)).
    q : float
        First-order shape coefficient in [0, 1].
    theta_steer : float
        Element steering angle in radians (wrapped to [0, 2pi)).
    """

    r: float
    phi: float
    q: float
    theta_steer: float

    def __post_init__(self):
        for name in ("r", "phi", "q", "theta_steer"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.r < 0.0:
            raise ValueError(f"radial distance must be >= 0, got {self.r!r}")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"shape coefficient must lie in [0, 1], got {self.q!r}")
        object.__setattr__(self, "phi", wrap_angle(self.phi))
        object.__setattr__(self, "theta_steer", wrap_angle(self.theta_steer))

    @property
    def position(self) -> tuple[float, float]:
        return (self.r * math.cos(self.phi), self.r * math.sin(self.phi))

    def response(self, theta):
        """First-order directivity (1-q) + q*cos(theta - theta_steer)."""
        return (1.0 - self.q) + self.q * np.cos(np.asarray(theta, dtype=float) - self.theta_steer)


def element_response(element: ArrayElement, theta):
    """Angular response of a single element at plane-wave angle ``theta``."""
    return element.response(theta)


@dataclass(frozen=True)
class ArrayGeometry:
    """Ordered collection of elements with the aperture constraints they
    are supposed to satisfy (use `validate_geometry` to check them)."""

    elements: tuple[ArrayElement, ...]
    aperture_radius: float
    min_spacing: float

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(self.elements) < 1:
            raise ValueError("geometry needs at least one element")
        for name in ("aperture_radius", "min_spacing"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def radii(self) -> np.ndarray:
        return np.array([e.r for e in self.elements])

    @property
    def position_angles(self) -> np.ndarray:
        return np.array([e.phi for e in self.elements])

    @property
    def shape_coefficients(self) -> np.ndarray:
        return np.array([e.q for e in self.elements])

    @property
    def steer_angles(self) -> np.ndarray:
        return np.array([e.theta_steer for e in self.elements])

    @property
    def positions(self) -> np.ndarray:
        return np.array([e.position for e in self.elements])

    def response_matrix(self, theta) -> np.ndarray:
        """Per-element responses, shape (M,) for scalar theta or (M, K)."""
        th = np.asarray(theta, dtype=float)
        q = self.shape_coefficients
        steer = self.steer_angles
        if th.ndim == 0:
            return (1.0 - q) + q * np.cos(float(th) - steer)
        return (1.0 - q)[:, None] + q[:, None] * np.cos(th[None, :] - steer[:, None])


@dataclass(frozen=True)
class GeometryReport:
    """Validation outcome; violations are data, not exceptions."""

    out_of_aperture: tuple[int, ...] = field(default_factory=tuple)
    spacing_violations: tuple[tuple[int, int, float], ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.out_of_aperture and not self.spacing_violations

    def describe(self) -> str:
        if self.ok:
            return "ok"
        lines = []
        for idx in self.out_of_aperture:
            lines.append(f"element {idx} lies outside the aperture")
        for i, j, dist in self.spacing_violations:
            lines.append(f"elements ({i}, {j}) are {dist * 1e3:.3f} mm apart")
        return "; ".join(lines)


def validate_geometry(geometry: ArrayGeometry) -> GeometryReport:
    """Check the aperture and pairwise spacing constraints.

    Returns
    -------
    GeometryReport
        ``ok`` when every element is within ``aperture_radius`` of the
        origin and all pairwise distances are >= ``min_spacing``.
    """
    out = tuple(
        i for i, e in enumerate(geometry.elements) if e.r > geometry.aperture_radius
    )
    pos = geometry.positions
    too_close = []
    for i in range(geometry.size):
        for j in range(i + 1, geometry.size):
            dist = float(np.hypot(*(pos[i] - pos[j])))
            if dist < geometry.min_spacing:
                too_close.append((i, j, dist))
    return GeometryReport(out_of_aperture=out, spacing_violations=tuple(too_close))


def sample_random_geometry(
    element_count: int,
    aperture_radius: float,
    min_spacing: float,
    seed: int,
) -> ArrayGeometry:
    """Draw a random admissible geometry, deterministically from ``seed``.

    Positions are uniform over the aperture disk; candidates closer than
    ``min_spacing`` to an already placed element are rejected and redrawn
    (with a full restart if an element cannot be placed at all). Shape
    coefficients are Uniform[0, 1] and element steering angles
    Uniform[0, 2pi).

    Raises
    ------
    InfeasibleGeometryError
        If the area heuristic ``M * (min_spacing / 2)^2 > aperture_radius^2``
        rules the request out immediately, or the rejection budget of
        10^6 candidate draws is exhausted.
    """
    element_count = int(element_count)
    if element_count < 1:
        raise ValueError("element_count must be >= 1")
    if element_count * (min_spacing / 2.0) ** 2 > aperture_radius**2:
        raise InfeasibleGeometryError(
            f"{element_count} elements with {min_spacing} m spacing cannot fit "
            f"an aperture of radius {aperture_radius} m"
        )
    rng = np.random.default_rng(seed)
    min_sq = min_spacing * min_spacing
    attempts = 0
    while True:
        polar: list[tuple[float, float]] = []
        cartesian: list[tuple[float, float]] = []
        dead_end = False
        for _ in range(element_count):
            placed = False
            for _ in range(_PLACEMENT_CAP):
                attempts += 1
                if attempts > SAMPLING_BUDGET:
                    raise InfeasibleGeometryError(
                        f"rejection budget of {SAMPLING_BUDGET} draws exhausted "
                        f"for M={element_count}, spacing={min_spacing}, "
                        f"aperture={aperture_radius}"
                    )
                radius = aperture_radius * math.sqrt(rng.uniform())
                angle = rng.uniform(0.0, TWO_PI)
                x, y = radius * math.cos(angle), radius * math.sin(angle)
                if all((x - px) ** 2 + (y - py) ** 2 >= min_sq for px, py in cartesian):
                    polar.append((radius, angle))
                    cartesian.append((x, y))
                    placed = True
                    break
            if not placed:
                dead_end = True
                break
        if not dead_end:
            break
    shapes = rng.uniform(0.0, 1.0, element_count)
    steers = rng.uniform(0.0, TWO_PI, element_count)
    elements = tuple(
        ArrayElement(r=r, phi=phi, q=float(q), theta_steer=float(t))
        for (r, phi), q, t in zip(polar, shapes, steers)
    )
    return ArrayGeometry(
        elements=elements, aperture_radius=aperture_radius, min_spacing=min_spacing
    )


def steering_vector(
    geometry: ArrayGeometry,
    constants: PhysicalConstants,
    omega: float,
    theta,
) -> np.ndarray:
    """Far-field plane-wave response of the bare array positions.

    Entry m is ``exp(j * (omega * r_m / c) * cos(theta - phi_m))``; every
    entry is a pure phase.

    Parameters
    ----------
    omega : float
        Angular frequency in rad/s, >= 0.
    theta : float or array
        Arrival angle(s) in radians.

    Returns
    -------
    ndarray
        Complex, shape (M,) for scalar theta and (M, K) for a K-vector.
    """
    omega = float(omega)
    if not (math.isfinite(omega) and omega >= 0.0):
        raise ValueError(f"omega must be finite and >= 0, got {omega!r}")
    x = omega * geometry.radii / constants.speed_of_sound
    phi = geometry.position_angles
    th = np.asarray(theta, dtype=float)
    if th.ndim == 0:
        return np.exp(1j * x * np.cos(float(th) - phi))
    return np.exp(1j * x[:, None] * np.cos(th[None, :] - phi[:, None]))


def geometry_digest(geometry: ArrayGeometry) -> str:
    """Order-sensitive hash of every geometric and directivity value."""
    parts = [repr(geometry.aperture_radius), repr(geometry.min_spacing)]
    for e in geometry.elements:
        parts.append(f"{e.r!r},{e.phi!r},{e.q!r},{e.theta_steer!r}")
    return hashlib.sha256("|".join(parts).encode()).hexdigest()
