#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Curves on [0,1] stored as coefficients in an orthonormal Fourier basis

The basis is ordered (1, cos 2pi., sin 2pi., cos 4pi., sin 4pi., ...), every
element normalized in L2([0,1]). Because the basis is orthonormal, inner
products of curves reduce to inner products of coefficient vectors.
"""

__author__ = "python-ftscluster developers"
__license__ = "MIT"
__version__ = "0.3.0"

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from .exceptions import FtsDimensionError, FtsDomainError, FtsFitError

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

FOURIER = "fourier"
DEFAULT_MISSING_CAP = 0.10
# simulations never state the truncation level, ingestion uses 21 functions
DEFAULT_SIM_DIMENSION = 15
DEFAULT_INGEST_DIMENSION = 21


@dataclass(frozen=True)
class BasisSpec:
    """
    Orthonormal basis of L2([0,1]) truncated at `dimension` elements
    """

    dimension: int = DEFAULT_SIM_DIMENSION
    family: str = FOURIER

    def __post_init__(self):
        if self.family != FOURIER:
            raise FtsDimensionError(f"unsupported basis family: {self.family}")
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise FtsDimensionError(
                f"basis dimension must be a positive integer, got {self.dimension}"
            )


@dataclass
class FunctionalTimeSeries:
    """
    T curves stored as a T x L matrix of basis coefficients

    :param coeffs <ndarray>:    row t holds <X_t, psi_l> for l = 1..L
    :param basis <BasisSpec>:   basis the coefficients refer to
    :param id <str>:            label used in reports and file names
    :param residuals <ndarray>: per-row residual norms when produced by fit_curves
    """

    coeffs: np.ndarray
    basis: BasisSpec
    id: str = ""
    residuals: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        if self.coeffs.ndim != 2:
            raise FtsDimensionError(f"{self.id}: coefficients must be a T x L matrix")
        if self.coeffs.shape[0] < 2:
            raise FtsDimensionError(f"{self.id}: need at least 2 time points")
        if self.coeffs.shape[1] != self.basis.dimension:
            raise FtsDimensionError(
                f"{self.id}: {self.coeffs.shape[1]} coefficient columns for a "
                f"basis of dimension {self.basis.dimension}"
            )
        if not np.all(np.isfinite(self.coeffs)):
            raise FtsDimensionError(f"{self.id}: coefficients must be finite")

    @property
    def T(self):
        return self.coeffs.shape[0]

    @property
    def L(self):
        return self.coeffs.shape[1]

    def scaled(self, c, id=None):
        return FunctionalTimeSeries(c * self.coeffs, self.basis, id or self.id)

    def __repr__(self):
        return f"{self.__class__.__name__}({self.id!r}, T={self.T}, L={self.L})"


@dataclass
class GriddedSample:
    """
    Raw curves observed on a grid, NaN marks a missing observation

    :param values <ndarray>:    T x P matrix, row t is curve t on the grid
    :param grid <ndarray>:      P strictly increasing points in [0,1]
    """

    values: np.ndarray
    grid: Optional[np.ndarray] = None
    id: str = ""

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise FtsDimensionError(f"{self.id}: gridded values must be a T x P matrix")
        n_points = self.values.shape[1]
        if self.grid is None:
            self.grid = default_grid(n_points)
        self.grid = np.asarray(self.grid, dtype=float)
        if self.grid.shape != (n_points,):
            raise FtsDimensionError(
                f"{self.id}: grid has {self.grid.size} points, rows have {n_points}"
            )
        check_unit_interval(self.grid)
        if n_points > 1 and not np.all(np.diff(self.grid) > 0):
            raise FtsDomainError(f"{self.id}: grid must be strictly increasing")

    @property
    def missing_fraction(self):
        return np.isnan(self.values).mean(axis=1)

    def rows(self, keep):
        return GriddedSample(self.values[keep], self.grid, self.id)


def default_grid(n_points):
    """tau_p = (p - 1) / (P - 1)"""
    if n_points == 1:
        return np.zeros(1)
    return np.linspace(0.0, 1.0, n_points)


def check_unit_interval(grid):
    grid = np.asarray(grid, dtype=float)
    bad = ~((grid >= 0.0) & (grid <= 1.0))
    if np.any(bad):
        raise FtsDomainError(
            f"grid point {grid[bad][0]!r} outside [0, 1] (index {np.flatnonzero(bad)[0]})"
        )
    return grid


def evaluate_basis(spec, grid):
    """
    Evaluate every basis element on a grid

    :param spec <BasisSpec>:    basis
    :param grid <array>:        points in [0,1]
    :returns <ndarray>:         P x L matrix, entry (p, l) = psi_l(tau_p)
    """
    grid = check_unit_interval(np.atleast_1d(grid))
    out = np.empty((grid.size, spec.dimension))
    out[:, 0] = 1.0
    for l in range(2, spec.dimension + 1):
        m = l // 2
        if l % 2 == 0:
            out[:, l - 1] = np.sqrt(2.0) * np.cos(2.0 * np.pi * m * grid)
        else:
            out[:, l - 1] = np.sqrt(2.0) * np.sin(2.0 * np.pi * m * grid)
    return out


def reconstruct(series, grid):
    """curves of `series` evaluated on `grid` (T x P)"""
    return series.coeffs @ evaluate_basis(series.basis, grid).T


def screen_rows(sample, missing_cap=DEFAULT_MISSING_CAP):
    """
    Drop rows whose missing fraction exceeds the cap

    :returns <tuple>:   (GriddedSample with kept rows, indices of skipped rows)
    """
    fraction = sample.missing_fraction
    skipped = np.flatnonzero(fraction > missing_cap)
    if skipped.size:
        logger.warning(
            f"{sample.id}: skipping {skipped.size} row(s) over the "
            f"{missing_cap:.0%} missing cap: {skipped.tolist()}"
        )
    keep = np.setdiff1d(np.arange(sample.values.shape[0]), skipped)
    return sample.rows(keep), skipped


def fit_curves(sample, spec, missing_cap=DEFAULT_MISSING_CAP, series_id=None):
    """
    Least-squares coefficients of every row against the basis

    Missing points are dropped from the row's design, nothing is imputed.
    Rows without missing points are solved together.

    :param sample <GriddedSample>:  gridded curves
    :param spec <BasisSpec>:        target basis
    :param missing_cap <float>:     largest tolerated missing fraction per row
    :returns <FunctionalTimeSeries>: coefficients with per-row residual norms
    """
    series_id = sample.id if series_id is None else series_id
    values = sample.values
    fraction = sample.missing_fraction
    over = np.flatnonzero(fraction > missing_cap)
    if over.size:
        raise FtsFitError(
            f"{series_id}: row {over[0]} has {fraction[over[0]]:.1%} missing, "
            f"cap is {missing_cap:.0%}",
            row=int(over[0]),
        )
    design = evaluate_basis(spec, sample.grid)
    n_rows = values.shape[0]
    coeffs = np.empty((n_rows, spec.dimension))
    residuals = np.empty(n_rows)
    observed = ~np.isnan(values)

    complete = np.flatnonzero(observed.all(axis=1))
    if complete.size:
        solution, rank = _solve(design, values[complete].T)
        if rank < spec.dimension:
            raise FtsFitError(
                f"{series_id}: row {complete[0]} is rank deficient "
                f"({design.shape[0]} grid points for {spec.dimension} basis functions)",
                row=int(complete[0]),
            )
        coeffs[complete] = solution.T
        residuals[complete] = np.linalg.norm(
            values[complete] - solution.T @ design.T, axis=1
        )

    for row in np.flatnonzero(~observed.all(axis=1)):
        mask = observed[row]
        sub = design[mask]
        if sub.shape[0] < spec.dimension:
            raise FtsFitError(
                f"{series_id}: row {row} has {sub.shape[0]} observed points, "
                f"need at least {spec.dimension}",
                row=int(row),
            )
        solution, rank = _solve(sub, values[row, mask])
        if rank < spec.dimension:
            raise FtsFitError(
                f"{series_id}: row {row} is rank deficient on its observed points",
                row=int(row),
            )
        coeffs[row] = solution
        residuals[row] = np.linalg.norm(values[row, mask] - sub @ solution)

    logger.debug(f"{series_id}: fitted {n_rows} rows, max residual {residuals.max():.3g}")
    return FunctionalTimeSeries(coeffs, spec, series_id, residuals=residuals)


def _solve(design, rhs):
    solution, _, rank, _ = scipy.linalg.lstsq(design, rhs)
    return solution, rank


def coeff_inner_product(a, b):
    """
    <f, g> = sum_l a_l conj(b_l) for curves with coefficient vectors a and b

    :param a <array>:   coefficients of f (real or complex)
    :param b <array>:   coefficients of g
    :returns <complex>:
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise FtsDimensionError(
            f"inner product needs two vectors of equal length, got {a.shape} and {b.shape}"
        )
    return complex(np.vdot(b, a))


def center_series(series):
    """subtract the pointwise mean curve"""
    coeffs = series.coeffs - series.coeffs.mean(axis=0, keepdims=True)
    return FunctionalTimeSeries(coeffs, series.basis, series.id, residuals=series.residuals)
