#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Local spectra of functional time series

A series of length T = M * N is cut into M blocks of N curves. Each block is
transformed with a functional DFT, and the pairwise similarity of two series
is built from Hilbert-Schmidt inner products of their local periodogram
tensors at adjacent Fourier frequencies.

Periodogram tensors are rank one (D x D), so

    <D_a x D_a, D_b x D_b>_HS = |<D_a, D_b>|^2

and no L x L matrix is ever formed.
"""

__author__ = "python-ftscluster developers"
__license__ = "MIT"
__version__ = "0.3.0"

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.fft

from .exceptions import (
    FtsDegenerateInputError,
    FtsDimensionError,
    FtsPlanError,
)

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

DEFAULT_BLOCK_LENGTH = 32


@dataclass(frozen=True)
class BlockPlan:
    """
    T = M * N with block midpoints u_j = (2j - 1) / (2M) and Fourier
    frequencies omega_k = 2 pi k / N, k = 0..N/2
    """

    T: int
    M: int

    @property
    def N(self):
        return self.T // self.M

    @property
    def midpoints(self):
        return (2.0 * np.arange(1, self.M + 1) - 1.0) / (2.0 * self.M)

    @property
    def frequencies(self):
        return 2.0 * np.pi * np.arange(self.N // 2 + 1) / self.N

    def block_slice(self, j):
        """sample indices (0-based) of block j = 1..M"""
        return slice((j - 1) * self.N, j * self.N)

    def summary(self):
        return {"T": self.T, "M": self.M, "N": self.N}


def _valid_blocks(T):
    return [m for m in range(1, T + 1) if T % m == 0 and (T // m) % 2 == 0]


def make_block_plan(T, M):
    """
    :param T <int>:     series length
    :param M <int>:     number of blocks, must divide T into even-length blocks
    :returns <BlockPlan>:
    """
    if T < 1 or M < 1:
        raise FtsPlanError(f"T and M must be positive, got T={T}, M={M}")
    valid = _valid_blocks(T)
    suggestion = min(valid, key=lambda m: (abs(m - M), m)) if valid else None
    if T % M:
        raise FtsPlanError(f"{T} not divisible by {M}", suggestion=suggestion)
    if (T // M) % 2:
        raise FtsPlanError(
            f"block length N = {T}/{M} = {T // M} is odd", suggestion=suggestion
        )
    return BlockPlan(int(T), int(M))


def default_blocks(T):
    """Number of blocks giving blocks of 32 curves"""
    if T % DEFAULT_BLOCK_LENGTH == 0 and T >= DEFAULT_BLOCK_LENGTH:
        return T // DEFAULT_BLOCK_LENGTH
    raise FtsPlanError(
        f"T = {T} is not a multiple of {DEFAULT_BLOCK_LENGTH}, pass M explicitly"
    )


@dataclass
class LocalFdftTable:
    """
    values[j, k] is the coefficient vector of D^{u_j, omega_k} (M x (N/2+1) x L)
    """

    values: np.ndarray
    plan: BlockPlan
    id: str = ""


@dataclass(frozen=True)
class FStatBundle:
    f11: float
    f22: float
    f12: float
    f21: float


def local_fdft(series, plan):
    """
    Functional DFT of every block at the non-negative Fourier frequencies

    D^{u_j, omega_k} = (2 pi N)^{-1/2} sum_{s=0}^{N-1} X_{(j-1)N + s + 1} e^{-i omega_k s}

    :param series <FunctionalTimeSeries>:
    :param plan <BlockPlan>:
    :returns <LocalFdftTable>:
    """
    if series.T != plan.T:
        raise FtsDimensionError(
            f"{series.id}: series has length {series.T}, plan expects {plan.T}"
        )
    blocks = series.coeffs.reshape(plan.M, plan.N, series.L)
    values = scipy.fft.rfft(blocks, axis=1) / np.sqrt(2.0 * np.pi * plan.N)
    return LocalFdftTable(values, plan, series.id)


def _check_plans(Da, Db):
    if Da.plan != Db.plan or Da.values.shape != Db.values.shape:
        raise FtsDimensionError(
            f"fDFT tables {Da.id!r} and {Db.id!r} come from different plans or bases"
        )


def lagged_products(Da, Db):
    """
    |<D_a^{u_j, omega_k}, D_b^{u_j, omega_{k-1}}>|^2 for j = 1..M, k = 1..N/2

    These are the Hilbert-Schmidt inner products <I_a^{k}, I_b^{k-1}>.
    """
    _check_plans(Da, Db)
    inner = np.einsum("jkl,jkl->jk", Da.values[:, 1:], Db.values[:, :-1].conj())
    return inner.real**2 + inner.imag**2


def compensated_sum(values, axis=-1):
    """
    Neumaier-compensated sum along one axis

    The loop runs over the summed axis only, so the remaining axes stay vectorized.
    """
    values = np.moveaxis(np.asarray(values, dtype=float), axis, 0)
    total = np.zeros(values.shape[1:])
    compensation = np.zeros(values.shape[1:])
    for v in values:
        t = total + v
        big = np.abs(total) >= np.abs(v)
        compensation += np.where(big, (total - t) + v, (v - t) + total)
        total = t
    return total + compensation


def f_stat(Da, Db):
    """
    F_ab = T^{-1} sum_j sum_{k=1}^{N/2} <I_a^{u_j, omega_k}, I_b^{u_j, omega_{k-1}}>_HS

    :returns <float>:   non-negative
    """
    products = lagged_products(Da, Db).ravel()
    return float(compensated_sum(products)) / Da.plan.T


def f_stats(Da, Db):
    return FStatBundle(
        f11=f_stat(Da, Da), f22=f_stat(Db, Db), f12=f_stat(Da, Db), f21=f_stat(Db, Da)
    )


def distance_from_fstats(f11, f22, f12, f21, pair=None):
    scale = f11 + f22
    if scale <= 0:
        raise FtsDegenerateInputError(
            "both series are identically zero, similarity undefined", pair=pair
        )
    return (scale - (f12 + f21)) / scale


def similarity(a, b, plan):
    """
    A = (F11 + F22 - F12 - F21) / (F11 + F22)

    :param a <FunctionalTimeSeries>:
    :param b <FunctionalTimeSeries>:
    :param plan <BlockPlan>:
    :returns <float>:   at most 1, exactly 0 for identical series
    """
    if a.L != b.L:
        raise FtsDimensionError(f"{a.id} has L={a.L}, {b.id} has L={b.L}")
    bundle = f_stats(local_fdft(a, plan), local_fdft(b, plan))
    return distance_from_fstats(
        bundle.f11, bundle.f22, bundle.f12, bundle.f21, pair=(a.id, b.id)
    )


@dataclass
class SimilarityMatrix:
    """
    Symmetric matrix of estimated distances with zero diagonal
    """

    values: np.ndarray
    ids: list
    plan: Optional[BlockPlan] = None

    @property
    def d(self):
        return self.values.shape[0]

    def reordered(self, labels):
        """rows and columns grouped by label (stable within a label)"""
        order = np.argsort(np.asarray(labels), kind="stable")
        return SimilarityMatrix(
            self.values[np.ix_(order, order)], [self.ids[i] for i in order], self.plan
        )

    def block_means(self, labels):
        """
        (mean within-label entry, mean between-label entry), diagonal excluded

        A side with no pairs (one label, or all labels distinct) is None.
        """
        labels = np.asarray(labels)
        same = labels[:, None] == labels[None, :]
        off = ~np.eye(self.d, dtype=bool)
        within = self.values[same & off]
        between = self.values[~same]
        return (
            float(within.mean()) if within.size else None,
            float(between.mean()) if between.size else None,
        )


def fdft_tables(collection, plan, workers=1):
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda s: local_fdft(s, plan), collection))
    return [local_fdft(s, plan) for s in collection]


def fstat_matrix(tables, workers=1):
    """
    F[a, b] = F_ab for every ordered pair of tables

    Each row a is computed against all tables at once and reduced with
    compensated summation over (block, frequency).
    """
    d = len(tables)
    stacked = np.stack([t.values for t in tables])
    for t in tables[1:]:
        _check_plans(tables[0], t)
    T = tables[0].plan.T
    lagged = stacked[:, :, :-1].conj()

    def row(a):
        inner = np.einsum("jkl,bjkl->bjk", stacked[a, :, 1:], lagged)
        products = (inner.real**2 + inner.imag**2).reshape(d, -1)
        return compensated_sum(products, axis=1) / T

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, range(d)))
    else:
        rows = [row(a) for a in range(d)]
    return np.vstack(rows)


def check_collection(collection):
    if len(collection) < 2:
        raise FtsDimensionError("need at least 2 series")
    first = collection[0]
    for s in collection[1:]:
        if s.T != first.T or s.L != first.L:
            raise FtsDimensionError(
                f"{s.id} has shape {s.T}x{s.L}, {first.id} has {first.T}x{first.L}"
            )


def similarity_matrix(collection, plan, workers=1):
    """
    All pairwise similarities of a collection of series

    :param collection <list>:   FunctionalTimeSeries sharing T and L
    :param plan <BlockPlan>:
    :param workers <int>:       threads used for the fDFTs and F rows
    :returns <SimilarityMatrix>:
    """
    check_collection(collection)
    tables = fdft_tables(collection, plan, workers)
    F = fstat_matrix(tables, workers)
    d = len(collection)
    values = np.zeros((d, d))
    for a in range(d):
        for b in range(a + 1, d):
            pair = (collection[a].id, collection[b].id)
            values[a, b] = distance_from_fstats(
                F[a, a], F[b, b], F[a, b], F[b, a], pair=pair
            )
            values[b, a] = values[a, b]
    logger.debug(f"similarity matrix for {d} series, plan {plan.summary()}")
    return SimilarityMatrix(values, [s.id for s in collection], plan)
