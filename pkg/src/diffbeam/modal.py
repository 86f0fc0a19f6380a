"""Circular-harmonic coefficients of element responses and the modal
matching matrices built from them.

The response of element m to a plane wave from angle theta, propagation
phase included, expands as ``sum_n P_{n,m} exp(jn(theta - theta_m))``
about the element's own steering angle. The coefficients have a closed
form in Bessel functions; `harmonic_coefficient_quadrature` evaluates the
defining Fourier integral directly and is kept as an independent oracle
for it. Rows of the matching matrices are ordered n = -N .. N top to
bottom (harmonic n at row index n + N).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .bessel import bessel_j_table, _jn_signed, _check_argument
from .geometry import ArrayGeometry, PhysicalConstants
from .patterns import SteeredTarget, apply_steering

MIN_COEFFICIENT_QUADRATURE_POINTS = 1024

# powers of the imaginary unit cycle with period four; indexing this table
# keeps the phase factors exact instead of round-tripping through exp()
_J_POWER = (1 + 0j, 1j, -1 + 0j, -1j)


def unit_imaginary_power(n: int) -> complex:
    """j**n through the exact four-cycle {1, j, -1, -j}."""
    return _J_POWER[n % 4]


def harmonic_coefficient(
    n: int, x: float, q: float, theta_steer: float, phi: float
) -> complex:
    """Closed-form harmonic coefficient of a first-order element response.

    Parameters
    ----------
    n : int
        Harmonic order.
    x : float
        Normalized aperture omega * r / c, >= 0.
    q : float
        First-order shape coefficient in [0, 1].
    theta_steer, phi : float
        Element steering and position angles in radians.

    Returns
    -------
    complex
        ``(1-q) j^n J_n(x) e^{jn d} + q j^{n+1} (J_{n+1}(x) e^{j(n+1)d}
        - J_{n-1}(x) e^{j(n-1)d}) / 2`` with ``d = theta_steer - phi``.
    """
    x = _check_argument(x)
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"shape coefficient must lie in [0, 1], got {q!r}")
    if not (math.isfinite(theta_steer) and math.isfinite(phi)):
        raise ValueError("angles must be finite")
    n = int(n)
    delta = theta_steer - phi
    omni = unit_imaginary_power(n) * _jn_signed(n, x) * cmath.exp(1j * n * delta)
    dipole = unit_imaginary_power(n + 1) * 0.5 * (
        _jn_signed(n + 1, x) * cmath.exp(1j * (n + 1) * delta)
        - _jn_signed(n - 1, x) * cmath.exp(1j * (n - 1) * delta)
    )
    return (1.0 - q) * omni + q * dipole


def harmonic_coefficient_quadrature(
    n: int,
    x: float,
    q: float,
    theta_steer: float,
    phi: float,
    points: int = 4096,
) -> complex:
    """Defining Fourier integral of the harmonic coefficient.

    Uniform-rule evaluation of
    ``(1/2pi) int T(theta) e^{jx cos(theta - phi)} e^{-jn(theta - theta_steer)} dtheta``
    with ``T(theta) = (1-q) + q cos(theta - theta_steer)``. Independent of
    the closed form in `harmonic_coefficient`, deliberately: it validates
    that whole derivation.
    """
    points = int(points)
    if points < MIN_COEFFICIENT_QUADRATURE_POINTS:
        raise ValueError(
            f"points must be >= {MIN_COEFFICIENT_QUADRATURE_POINTS}, got {points}"
        )
    x = _check_argument(x)
    theta = -np.pi + 2.0 * np.pi * np.arange(points) / points
    response = (1.0 - q) + q * np.cos(theta - theta_steer)
    integrand = (
        response
        * np.exp(1j * x * np.cos(theta - phi))
        * np.exp(-1j * n * (theta - theta_steer))
    )
    return complex(integrand.mean())


def _element_coefficient_column(
    n_values: np.ndarray, x: float, q: float, theta_steer: float, phi: float
) -> np.ndarray:
    # shares one Bessel table across all harmonics of an element
    top = int(np.abs(n_values).max()) + 1
    table = bessel_j_table(top, x)

    def j(k: int) -> float:
        value = table[abs(k)]
        return -value if (k < 0 and k % 2) else value

    delta = theta_steer - phi
    out = np.empty(len(n_values), dtype=complex)
    for i, n in enumerate(n_values):
        omni = unit_imaginary_power(n) * j(n) * cmath.exp(1j * n * delta)
        dipole = unit_imaginary_power(n + 1) * 0.5 * (
            j(n + 1) * cmath.exp(1j * (n + 1) * delta)
            - j(n - 1) * cmath.exp(1j * (n - 1) * delta)
        )
        out[i] = (1.0 - q) * omni + q * dipole
    return out


def build_psi_matrix(
    geometry: ArrayGeometry,
    constants: PhysicalConstants,
    omega: float,
    order: int,
) -> np.ndarray:
    """Matching matrix for omnidirectional elements.

    Entry (row n, column m) is ``j^n J_n(x_m) e^{-jn phi_m}`` with
    ``x_m = omega r_m / c``.
    """
    order = int(order)
    if order < 0:
        raise ValueError("order must be >= 0")
    n_values = np.arange(-order, order + 1)
    matrix = np.empty((2 * order + 1, geometry.size), dtype=complex)
    c = constants.speed_of_sound
    for m, element in enumerate(geometry.elements):
        x = omega * element.r / c
        table = bessel_j_table(order, x)
        for i, n in enumerate(n_values):
            jn = table[abs(n)] * (-1.0 if (n < 0 and n % 2) else 1.0)
            matrix[i, m] = unit_imaginary_power(n) * jn * cmath.exp(-1j * n * element.phi)
    return matrix


def build_xi_matrix(
    geometry: ArrayGeometry,
    constants: PhysicalConstants,
    omega: float,
    order: int,
) -> np.ndarray:
    """Matching matrix for first-order elements.

    Entry (row n, column m) is ``P_{n,m} e^{-jn theta_m}``. With every
    shape coefficient zero this reduces elementwise to `build_psi_matrix`.
    """
    order = int(order)
    if order < 0:
        raise ValueError("order must be >= 0")
    n_values = np.arange(-order, order + 1)
    matrix = np.empty((2 * order + 1, geometry.size), dtype=complex)
    c = constants.speed_of_sound
    for m, element in enumerate(geometry.elements):
        x = omega * element.r / c
        column = _element_coefficient_column(
            n_values, x, element.q, element.theta_steer, element.phi
        )
        matrix[:, m] = column * np.exp(-1j * n_values * element.theta_steer)
    return matrix


@dataclass(frozen=True)
class ModalSystem:
    """Matching system at one frequency: ``matrix @ conj(h) = rhs``."""

    matrix: np.ndarray
    rhs: np.ndarray
    omega: float
    order: int

    def __post_init__(self):
        rows = 2 * self.order + 1
        if self.matrix.shape[0] != rows or self.rhs.shape != (rows,):
            raise ValueError("system shapes do not match the stated order")


def build_modal_system(
    geometry: ArrayGeometry,
    constants: PhysicalConstants,
    omega: float,
    target: SteeredTarget,
    element_model: str = "first_order",
) -> ModalSystem:
    """Assemble the matching matrix and steered right-hand side.

    ``element_model`` selects the first-order matrix or the
    omnidirectional reduction ("omni").
    """
    if element_model == "first_order":
        matrix = build_xi_matrix(geometry, constants, omega, target.order)
    elif element_model == "omni":
        matrix = build_psi_matrix(geometry, constants, omega, target.order)
    else:
        raise ValueError(f"unknown element model {element_model!r}")
    rhs = apply_steering(target.coefficients, target.theta_s)
    return ModalSystem(matrix=matrix, rhs=rhs, omega=float(omega), order=target.order)
