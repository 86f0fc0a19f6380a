"""Minimum-norm filter design over a frequency grid.

The matching system is wide ((2N+1) x M with M >= 2N+1), so after
conjugating both sides the filter is the minimum-Euclidean-norm solution
``h = A^H (A A^H)^{-1} rhs`` with ``A = conj(Xi)``. The Gram system is
solved by complex Cholesky after an exact power-of-two row equilibration
(which leaves the solution set, and hence the minimum-norm solution,
unchanged while taming the scale disparity between harmonic rows). Rank
deficiency is checked on the unscaled Gram matrix and fails loudly: a
near-singular system means the geometry cannot render the requested
order, and regularizing silently would hide that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import FrequencyGridError, RankDeficientSystemError
from .geometry import ArrayGeometry, PhysicalConstants, geometry_digest
from .modal import build_modal_system
from .patterns import SteeredTarget

RANK_RTOL = 1e-10

ELEMENT_MODELS = ("first_order", "omni")


@dataclass(frozen=True)
class FrequencyGrid:
    """Linearly spaced design grid in Hz."""

    f_min_hz: float
    f_max_hz: float
    count: int

    def __post_init__(self):
        if not (0.0 < self.f_min_hz <= self.f_max_hz):
            raise ValueError("need 0 < f_min <= f_max")
        if not (math.isfinite(self.f_min_hz) and math.isfinite(self.f_max_hz)):
            raise ValueError("grid bounds must be finite")
        if self.count < 1:
            raise ValueError("count must be >= 1")

    @property
    def frequencies_hz(self) -> np.ndarray:
        return np.linspace(self.f_min_hz, self.f_max_hz, self.count)

    @property
    def omegas(self) -> np.ndarray:
        return 2.0 * np.pi * self.frequencies_hz


@dataclass(frozen=True)
class BeamformerFilter:
    """Per-frequency complex weights plus enough metadata to audit them."""

    grid: FrequencyGrid
    weights: np.ndarray  # (grid.count, M) complex
    order: int
    theta_s: float
    pattern_id: str
    geometry_digest: str
    element_model: str

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=complex)
        if weights.shape[0] != self.grid.count or weights.ndim != 2:
            raise ValueError("need one weight vector per grid frequency")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return self.weights.shape[1]

    def frequency_index(self, omega: float) -> int:
        """Index of ``omega`` on the design grid; exact matches only."""
        f = omega / (2.0 * np.pi)
        grid = self.grid.frequencies_hz
        hits = np.flatnonzero(np.isclose(grid, f, rtol=1e-9, atol=1e-9))
        if hits.size == 0:
            raise FrequencyGridError(
                f"{f} Hz is not a design-grid frequency; filters are not "
                "interpolated between grid points"
            )
        return int(hits[0])

    def weights_at(self, omega: float) -> np.ndarray:
        return self.weights[self.frequency_index(omega)]


def min_norm_solve(matrix, rhs) -> np.ndarray:
    """Minimum-norm solution of a wide full-row-rank complex system.

    Parameters
    ----------
    matrix : (R, C) complex array, R <= C
    rhs : (R,) complex array

    Returns
    -------
    ndarray
        The smallest-Euclidean-norm ``h`` with ``matrix @ h = rhs``,
        computed as ``A^H (A A^H)^{-1} rhs``.

    Raises
    ------
    RankDeficientSystemError
        When the smallest singular value of ``A A^H`` falls below
        1e-10 times the largest.
    """
    a = np.atleast_2d(np.asarray(matrix, dtype=complex))
    b = np.asarray(rhs, dtype=complex).ravel()
    rows, cols = a.shape
    if rows > cols:
        raise ValueError(f"system must be wide, got shape {a.shape}")
    if b.shape != (rows,):
        raise ValueError(f"rhs length {b.shape} does not match {rows} rows")

    gram = a @ a.conj().T
    eigs = np.linalg.eigvalsh(gram)
    largest = float(eigs[-1])
    smallest = float(eigs[0])
    if largest <= 0.0 or smallest < RANK_RTOL * largest:
        condition = largest / smallest if smallest > 0.0 else math.inf
        raise RankDeficientSystemError(
            f"modal system is rank deficient (Gram condition ~ {condition:.3e})",
            condition=condition,
        )

    # exact power-of-two row scaling: same constraint set, better-behaved Gram
    row_norms = np.sqrt(np.sum(np.abs(a) ** 2, axis=1))
    scales = np.exp2(np.round(np.log2(row_norms)))
    a_eq = a / scales[:, None]
    b_eq = b / scales
    gram_eq = a_eq @ a_eq.conj().T
    try:
        factor = scipy.linalg.cho_factor(gram_eq, check_finite=False)
        y = scipy.linalg.cho_solve(factor, b_eq, check_finite=False)
    except scipy.linalg.LinAlgError:
        y = np.linalg.solve(gram_eq, b_eq)
    return a_eq.conj().T @ y


def design_filter(
    geometry: ArrayGeometry,
    constants: PhysicalConstants,
    target: SteeredTarget,
    grid: FrequencyGrid,
    element_model: str = "first_order",
    pattern_id: str = "custom",
) -> BeamformerFilter:
    """Solve the conjugated matching system at every grid frequency.

    Requires M >= 2N+1 and a distortionless-normalized target. The
    right-hand side is frequency invariant; only the matching matrix is
    rebuilt per frequency.

    Raises
    ------
    RankDeficientSystemError
        Re-raised with the offending frequency attached.
    """
    if element_model not in ELEMENT_MODELS:
        raise ValueError(f"unknown element model {element_model!r}")
    rows = 2 * target.order + 1
    if geometry.size < rows:
        raise ValueError(
            f"order {target.order} needs at least {rows} elements, "
            f"geometry has {geometry.size}"
        )
    total = sum(target.coefficients.b)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(
            f"target is not distortionless-normalized (coefficient sum {total!r})"
        )

    weights = np.empty((grid.count, geometry.size), dtype=complex)
    for i, (f_hz, omega) in enumerate(zip(grid.frequencies_hz, grid.omegas)):
        system = build_modal_system(geometry, constants, omega, target, element_model)
        try:
            weights[i] = min_norm_solve(system.matrix.conj(), system.rhs.conj())
        except RankDeficientSystemError as err:
            raise RankDeficientSystemError(
                f"{err} at {f_hz:.6g} Hz",
                condition=err.condition,
                frequency_hz=f_hz,
            ) from None
    return BeamformerFilter(
        grid=grid,
        weights=weights,
        order=target.order,
        theta_s=target.theta_s,
        pattern_id=pattern_id,
        geometry_digest=geometry_digest(geometry),
        element_model=element_model,
    )
