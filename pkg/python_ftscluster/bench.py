#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Replicated simulation experiments

    cluster_bench   chosen k and misclustering percentage per selection method
    eta_bench       misclustering percentage across adjacency scalings
    test_bench      rejection percentages of the pairwise equality test

Replication r draws its collection from seed (seed, r), so tables do not
depend on the number of workers.
"""

__author__ = "python-ftscluster developers"
__license__ = "MIT"
__version__ = "0.3.0"

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from . import cluster, equality, models, spectra
from .basis import DEFAULT_SIM_DIMENSION
from .exceptions import FtsParameterError

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

TRUE_K = "true"
BENCH_METHODS = (TRUE_K,) + cluster.METHODS
KINDS = ("cluster", "eta", "test")
TEST_ALPHAS = (0.05, 0.10)


def replication_seed(seed, *indices):
    """one 32-bit seed from (seed, indices)"""
    entropy = [int(seed)] + [int(i) for i in indices]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def _map(function, items, workers):
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(function, items))
    return [function(item) for item in items]


@dataclass
class BenchSpec:
    setting: int = 1
    n: int = 10
    T: int = 256
    M: int = None
    L: int = DEFAULT_SIM_DIMENSION
    replications: int = 100
    methods: tuple = BENCH_METHODS
    eta: float = cluster.DEFAULT_ETA
    eta_sweep: tuple = (0.5, 2.5, 5.0, 10.0)
    k_max: int = cluster.DEFAULT_K_MAX
    restarts: int = cluster.DEFAULT_RESTARTS
    models: tuple = ("I", "II", "V", "VI")
    alphas: tuple = TEST_ALPHAS
    sigma2_method: str = equality.DEFAULT_SIGMA2_METHOD
    seed: int = 0
    workers: int = 1
    plan: spectra.BlockPlan = field(init=False, repr=False)

    def __post_init__(self):
        if self.replications < 1:
            raise FtsParameterError(f"replications must be positive, got {self.replications}")
        unknown = [m for m in self.methods if m not in BENCH_METHODS]
        if unknown:
            raise FtsParameterError(
                f"unknown methods {unknown}, expected from {', '.join(BENCH_METHODS)}"
            )
        unknown = [m for m in self.models if m not in models.MODELS]
        if unknown:
            raise FtsParameterError(f"unknown models {unknown}")
        for alpha in self.alphas:
            equality.check_alpha(alpha)
        if self.sigma2_method not in equality.SIGMA2_METHODS:
            raise FtsParameterError(f"unknown variance estimator {self.sigma2_method!r}")
        M = self.M if self.M else spectra.default_blocks(self.T)
        self.plan = spectra.make_block_plan(self.T, M)


def _cluster_once(spec, sim, truth, method, eta):
    """(chosen k, misclustering %) of one method on one similarity matrix"""
    if method == TRUE_K:
        k = int(np.unique(truth).size)
    else:
        k = cluster.select_k(
            sim, method, eta=eta, k_max=spec.k_max, seed=spec.seed, restarts=spec.restarts
        )
    outcome = cluster.spectral_cluster(
        sim, k, eta=eta, seed=spec.seed, restarts=spec.restarts
    )
    return k, 100.0 * cluster.misclustering_rate(outcome.labels, truth)


def _replicate(spec, r):
    collection = models.make_setting(
        spec.setting, spec.n, spec.T, seed=replication_seed(spec.seed, r), L=spec.L
    )
    sim = spectra.similarity_matrix(collection.series, spec.plan)
    return sim, collection.labels


def _summarize(records, keys):
    frame = pd.DataFrame.from_records(records)
    table = frame.groupby(keys, sort=False).agg(
        k_mean=("k", "mean"),
        k_sd=("k", "std"),
        misclustering_mean=("misclustering", "mean"),
        misclustering_sd=("misclustering", "std"),
    )
    return table.fillna(0.0).reset_index()


def cluster_bench(spec):
    """
    Chosen k and misclustering percentage per method, mean and sd over replications

    :param spec <BenchSpec>:
    :returns <DataFrame>:   one row per method
    """
    log = logging.getLogger(f"{__name__}.cluster_bench")

    def run(r):
        sim, truth = _replicate(spec, r)
        rows = []
        for method in spec.methods:
            k, rate = _cluster_once(spec, sim, truth, method, spec.eta)
            rows.append({"method": method, "replication": r, "k": k, "misclustering": rate})
        log.debug(f"replication {r + 1}/{spec.replications} done")
        return rows

    records = list(itertools.chain.from_iterable(_map(run, range(spec.replications),
                                                      spec.workers)))
    log.info(f"setting {spec.setting}: {spec.replications} replications, T={spec.T}")
    return _summarize(records, ["method"])


def eta_bench(spec):
    """
    Misclustering across the eta sweep, every method re-run per eta

    :returns <DataFrame>:   one row per (method, eta)
    """

    def run(r):
        sim, truth = _replicate(spec, r)
        rows = []
        for eta in spec.eta_sweep:
            for method in spec.methods:
                k, rate = _cluster_once(spec, sim, truth, method, eta)
                rows.append(
                    {"method": method, "eta": eta, "replication": r, "k": k,
                     "misclustering": rate}
                )
        return rows

    records = list(itertools.chain.from_iterable(_map(run, range(spec.replications),
                                                      spec.workers)))
    logger.info(f"eta sweep {list(spec.eta_sweep)}: {spec.replications} replications")
    return _summarize(records, ["method", "eta"])


def test_bench(spec):
    """
    Rejection percentage of the equality test for every pair of models
    (a model against itself gives the empirical size)

    :returns <DataFrame>:   one row per model pair, one column per level
    """
    pairs = list(itertools.combinations_with_replacement(spec.models, 2))

    def run(r):
        rows = []
        for p, (a, b) in enumerate(pairs):
            # a model against itself shares one operator draw, so the pair is under H0
            op_a = (spec.seed, r, p, 2)
            op_b = op_a if a == b else (spec.seed, r, p, 3)
            first = models.simulate_model(
                models.ModelSpec(a, spec.T, spec.L, (spec.seed, r, p, 0), operator_seed=op_a),
                id=f"{a}-a",
            )
            second = models.simulate_model(
                models.ModelSpec(b, spec.T, spec.L, (spec.seed, r, p, 1), operator_seed=op_b),
                id=f"{b}-b",
            )
            result = equality.equality_test(
                first, second, spec.plan, alpha=spec.alphas[0], method=spec.sigma2_method
            )
            row = {"model_a": a, "model_b": b, "sigma2_hat": result.sigma2_hat}
            for alpha in spec.alphas:
                row[f"reject_{alpha:g}"] = 100.0 * (result.p_value < alpha)
            rows.append(row)
        return rows

    records = list(itertools.chain.from_iterable(_map(run, range(spec.replications),
                                                      spec.workers)))
    frame = pd.DataFrame.from_records(records)
    table = frame.groupby(["model_a", "model_b"], sort=False).mean().reset_index()
    logger.info(f"{len(pairs)} model pairs, {spec.replications} replications")
    return table


def run_bench(spec, kind):
    if kind not in KINDS:
        raise FtsParameterError(f"unknown bench kind {kind!r}, expected one of {KINDS}")
    return {"cluster": cluster_bench, "eta": eta_bench, "test": test_bench}[kind](spec)
