#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Pairwise test of equal time-varying spectral density operators

For two independent series with equal local spectra, sqrt(T) * A is
asymptotically normal with mean 0 and variance

    T * sum_k tau_k^2 / (sum_k tau_k)^2,    tau_k = E <I^k, I^{k-1}>_HS

(2 for spectra constant in time and frequency). tau_k is estimated from the
pooled periodogram (I_a + I_b) / 2 and the test rejects for large
standardized A.
"""

__author__ = "python-ftscluster developers"
__license__ = "MIT"
__version__ = "0.3.0"

import itertools
import logging
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import norm

from . import spectra
from .exceptions import FtsDegenerateInputError, FtsParameterError

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

DEFAULT_ALPHA = 0.05
SIGMA2_METHODS = ("cross", "plugin")
DEFAULT_SIGMA2_METHOD = "cross"


@dataclass
class EqualityTestResult:
    pair: tuple
    a_hat: float
    sigma2_hat: float
    statistic: float
    p_value: float
    reject: bool
    alpha: float
    plan: dict

    def to_dict(self):
        out = asdict(self)
        out["pair"] = list(self.pair)
        return out


def check_alpha(alpha):
    if not 0 < alpha < 1:
        raise FtsParameterError(f"alpha must lie in (0, 1), got {alpha}")
    return float(alpha)


def pooled_sigma2(Da, Db, method=DEFAULT_SIGMA2_METHOD):
    """
    Null variance estimate from the pooled periodogram

    h = <I_p^k, I_p^{k-1}> = (<I_a,I_a'> + <I_a,I_b'> + <I_b,I_a'> + <I_b,I_b'>) / 4

    cross:  T * sum q / (sum h)^2 with q = (<I_a,I_a'><I_b,I_b'> + <I_a,I_b'><I_b,I_a'>) / 2,
            each product of two independent terms, unbiased for tau^2 under H0
    plugin: (2/(3T)) sum h^2 / ((2/T) sum h)^2

    The plugin form converges to (5/4 + tr C^4 / (tr C^2)^2) / 3 for white noise
    with covariance C, below the variance it should estimate.

    :param Da <LocalFdftTable>:
    :param Db <LocalFdftTable>:
    :param method <str>:    cross | plugin
    :returns <float>:   positive
    """
    if method not in SIGMA2_METHODS:
        raise FtsParameterError(
            f"unknown variance estimator {method!r}, expected one of {SIGMA2_METHODS}"
        )
    aa = spectra.lagged_products(Da, Da).ravel()
    bb = spectra.lagged_products(Db, Db).ravel()
    ab = spectra.lagged_products(Da, Db).ravel()
    ba = spectra.lagged_products(Db, Da).ravel()
    pooled = (aa + ab + ba + bb) / 4.0
    T = Da.plan.T
    total = float(spectra.compensated_sum(pooled))
    if total <= 0:
        raise FtsDegenerateInputError(
            "pooled periodogram vanishes, null variance undefined", pair=(Da.id, Db.id)
        )
    if method == "plugin":
        numerator = 2.0 / (3.0 * T) * float(spectra.compensated_sum(pooled**2))
        sigma2 = numerator / (2.0 / T * total) ** 2
    else:
        squares = (aa * bb + ab * ba) / 2.0
        sigma2 = T * float(spectra.compensated_sum(squares)) / total**2
    if not sigma2 > 0:
        raise FtsDegenerateInputError(
            "null variance estimate is zero", pair=(Da.id, Db.id)
        )
    return sigma2


def standardize(a_hat, sigma2, T):
    """
    sqrt(T) * A / sigma and its upper tail probability under N(0, 1)

    :returns <tuple>:   (statistic, p-value)
    """
    # the standard deviation, not the variance
    statistic = float(np.sqrt(T) * a_hat / np.sqrt(sigma2))
    return statistic, float(norm.sf(statistic))


def _result(Da, Db, F, a, b, alpha, method):
    a_hat = spectra.distance_from_fstats(
        F[a, a], F[b, b], F[a, b], F[b, a], pair=(Da.id, Db.id)
    )
    sigma2 = pooled_sigma2(Da, Db, method)
    statistic, p_value = standardize(a_hat, sigma2, Da.plan.T)
    return EqualityTestResult(
        pair=(Da.id, Db.id),
        a_hat=float(a_hat),
        sigma2_hat=float(sigma2),
        statistic=float(statistic),
        p_value=p_value,
        reject=bool(p_value < alpha),
        alpha=alpha,
        plan=Da.plan.summary(),
    )


def equality_test(a, b, plan, alpha=DEFAULT_ALPHA, method=DEFAULT_SIGMA2_METHOD):
    """
    One-sided test of H0: equal time-varying spectral density operators

    :param a <FunctionalTimeSeries>:
    :param b <FunctionalTimeSeries>:
    :param plan <BlockPlan>:
    :param alpha <float>:   level in (0, 1)
    :param method <str>:    null variance estimator
    :returns <EqualityTestResult>:
    """
    alpha = check_alpha(alpha)
    tables = [spectra.local_fdft(a, plan), spectra.local_fdft(b, plan)]
    F = spectra.fstat_matrix(tables)
    return _result(tables[0], tables[1], F, 0, 1, alpha, method)


def pairwise_tests(collection, plan, alpha=DEFAULT_ALPHA, workers=1,
                   method=DEFAULT_SIGMA2_METHOD):
    """
    equality_test for every unordered pair, sharing one fDFT table per series

    :returns <list>:    EqualityTestResult in (0,1), (0,2), ..., (d-2,d-1) order
    """
    alpha = check_alpha(alpha)
    spectra.check_collection(collection)
    tables = spectra.fdft_tables(collection, plan, workers)
    F = spectra.fstat_matrix(tables, workers)
    d = len(collection)
    results = [
        _result(tables[a], tables[b], F, a, b, alpha, method)
        for a, b in itertools.combinations(range(d), 2)
    ]
    logger.debug(f"{len(results)} pairwise tests at alpha={alpha}")
    return results


def pvalue_matrix(results, d):
    """d x d matrix of p-values from pairwise_tests output, 0.5 on the diagonal"""
    out = np.full((d, d), 0.5)
    for (i, j), r in zip(itertools.combinations(range(d), 2), results):
        out[i, j] = out[j, i] = r.p_value
    return out
