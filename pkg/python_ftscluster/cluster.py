#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Spectral clustering on a similarity matrix

similarity A -> adjacency W = exp(-eta A) -> normalized Laplacian
L = I - D^{-1/2} W D^{-1/2} -> bottom k eigenvectors, rows normalized -> k-means.

Also holds the rules for choosing k (relgap, sd1gap, CH, silhouette) and the
permutation-matched misclustering rate.
"""

__author__ = "python-ftscluster developers"
__license__ = "MIT"
__version__ = "0.3.0"

import itertools
import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment
from sklearn.cluster import KMeans
from sklearn.exceptions import ConvergenceWarning
from sklearn.metrics import calinski_harabasz_score, silhouette_score

from .exceptions import FtsGraphError, FtsNumericError, FtsParameterError

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

DEFAULT_ETA = 1.0
DEFAULT_K_MAX = 15
DEFAULT_RESTARTS = 25
MAX_ITERATIONS = 100
RELGAP_THRESHOLD = 0.01
EXACT_MATCHING_LIMIT = 8
ZERO_EIGENVALUE = 1e-12
ZERO_ROW = 1e-12

EIGEN_METHODS = ("relgap", "sd1gap")
INDEX_METHODS = ("ch", "silhouette")
METHODS = EIGEN_METHODS + INDEX_METHODS


@dataclass
class AdjacencyMatrix:
    values: np.ndarray
    eta: float = DEFAULT_ETA


@dataclass
class GraphLaplacian:
    values: np.ndarray
    degrees: np.ndarray


@dataclass
class SpectralEmbedding:
    """
    Rows of the first k eigenvectors scaled to unit length

    Rows with zero norm are left at zero and listed in `degenerate_rows`.
    """

    values: np.ndarray
    eigenvalues: np.ndarray
    degenerate_rows: list = field(default_factory=list)


@dataclass
class ClusterOutcome:
    labels: np.ndarray
    centroids: np.ndarray
    inertia: float
    chosen_k: int
    eigenvalues: Optional[np.ndarray] = None
    selection_method: str = "fixed"
    embedding: Optional[SpectralEmbedding] = None

    def to_dict(self):
        out = {
            "labels": self.labels.tolist(),
            "chosen_k": int(self.chosen_k),
            "selection_method": self.selection_method,
            "inertia": float(self.inertia),
            "centroids": self.centroids.tolist(),
        }
        if self.eigenvalues is not None:
            out["eigenvalues"] = self.eigenvalues.tolist()
        if self.embedding is not None:
            out["embedding"] = self.embedding.values.tolist()
            out["degenerate_rows"] = list(self.embedding.degenerate_rows)
        return out


def adjacency(sim, eta=DEFAULT_ETA):
    """
    W = exp(-eta * A) entrywise

    :param sim <SimilarityMatrix>:
    :param eta <float>:     positive scaling
    :returns <AdjacencyMatrix>:
    """
    if not eta > 0:
        raise FtsParameterError(f"eta must be positive, got {eta}")
    return AdjacencyMatrix(np.exp(-eta * np.asarray(sim.values, dtype=float)), eta)


def laplacian(W):
    """
    L = I - D^{-1/2} W D^{-1/2}, symmetrized

    Self loops stay in the degrees.
    """
    values = np.asarray(W.values, dtype=float)
    degrees = values.sum(axis=1)
    if np.any(degrees <= 0):
        raise FtsGraphError(
            f"vertex {int(np.flatnonzero(degrees <= 0)[0])} has zero degree"
        )
    scale = 1.0 / np.sqrt(degrees)
    lap = np.eye(values.shape[0]) - scale[:, None] * values * scale[None, :]
    return GraphLaplacian((lap + lap.T) / 2.0, degrees)


def eigendecompose(L):
    """
    Full symmetric eigendecomposition, eigenvalues ascending

    Every eigenvector is signed so that its largest-magnitude entry is positive.

    :param L <GraphLaplacian|ndarray>:
    :returns <tuple>:   (eigenvalues, eigenvectors as columns)
    """
    values = np.asarray(getattr(L, "values", L), dtype=float)
    if not np.all(np.isfinite(values)):
        raise FtsNumericError("matrix has non-finite entries")
    eigenvalues, eigenvectors = scipy.linalg.eigh(values)
    order = np.argsort(eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    eigenvectors = eigenvectors[:, order]
    pivots = np.argmax(np.abs(eigenvectors), axis=0)
    signs = np.sign(eigenvectors[pivots, np.arange(eigenvectors.shape[1])])
    signs[signs == 0] = 1.0
    return eigenvalues, eigenvectors * signs


def embed(eigenvectors, k, eigenvalues=None):
    """
    :param eigenvectors <ndarray>:  columns ordered by ascending eigenvalue
    :param k <int>:                 number of columns kept
    :returns <SpectralEmbedding>:
    """
    d = eigenvectors.shape[0]
    if not 1 <= k <= d:
        raise FtsParameterError(f"k must be in 1..{d}, got {k}")
    U = np.array(eigenvectors[:, :k], dtype=float)
    norms = np.linalg.norm(U, axis=1)
    degenerate = np.flatnonzero(norms <= ZERO_ROW)
    if degenerate.size:
        logger.warning(f"embedding rows with zero norm left at zero: {degenerate.tolist()}")
    good = norms > ZERO_ROW
    U[good] /= norms[good, None]
    U[~good] = 0.0
    if eigenvalues is not None:
        eigenvalues = np.asarray(eigenvalues)[:k]
    return SpectralEmbedding(U, eigenvalues, degenerate.tolist())


def restart_seed(seed, k, restart):
    """32-bit random_state of one k-means restart, from (seed, k, restart)"""
    entropy = [int(seed), int(k), int(restart)]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def _first_appearance(labels, centroids):
    """renumber labels in order of first appearance, centroids to match"""
    used, first = np.unique(labels, return_index=True)
    order = used[np.argsort(first)]
    relabel = np.empty(centroids.shape[0], dtype=int)
    relabel[order] = np.arange(order.size)
    unused = np.setdiff1d(np.arange(centroids.shape[0]), order)
    relabel[unused] = np.arange(order.size, centroids.shape[0])
    return relabel[labels], centroids[np.concatenate([order, unused]).astype(int)]


def _lloyd(points, k, random_state):
    model = KMeans(
        n_clusters=k,
        init="k-means++",
        n_init=1,
        max_iter=MAX_ITERATIONS,
        tol=0.0,
        algorithm="lloyd",
        random_state=random_state,
    )
    with warnings.catch_warnings():
        # duplicated points can leave fewer distinct clusters than k
        warnings.simplefilter("ignore", ConvergenceWarning)
        model.fit(points)
    return model.labels_, model.cluster_centers_, float(model.inertia_)


def kmeans(points, k, restarts=DEFAULT_RESTARTS, seed=0):
    """
    Lloyd's algorithm from k-means++ seeding, best of `restarts` runs

    Restart r runs scikit-learn's KMeans with a random_state derived from
    (seed, k, r). Labels are numbered in order of first appearance.

    :param points <ndarray>:    d x p
    :param k <int>:             number of clusters, at most d
    :returns <ClusterOutcome>:
    """
    points = np.asarray(points, dtype=float)
    d = points.shape[0]
    if not 1 <= k <= d:
        raise FtsParameterError(f"k must be in 1..{d}, got {k}")
    if restarts < 1:
        raise FtsParameterError(f"restarts must be positive, got {restarts}")
    best = None
    for restart in range(restarts):
        labels, centroids, inertia = _lloyd(points, k, restart_seed(seed, k, restart))
        if best is None or inertia < best[2]:
            best = (labels, centroids, inertia)
    labels, centroids = _first_appearance(best[0], best[1])
    return ClusterOutcome(labels, centroids, best[2], k)


def spectrum(sim, eta=DEFAULT_ETA):
    """ascending eigenvalues and eigenvectors of the Laplacian of exp(-eta A)"""
    return eigendecompose(laplacian(adjacency(sim, eta)))


def spectral_cluster(sim, k, eta=DEFAULT_ETA, seed=0, restarts=DEFAULT_RESTARTS):
    """
    :param sim <SimilarityMatrix>:
    :param k <int>:         number of clusters
    :param eta <float>:     adjacency scaling
    :param seed <int>:      k-means seed
    :returns <ClusterOutcome>:
    """
    eigenvalues, eigenvectors = spectrum(sim, eta)
    embedding = embed(eigenvectors, k, eigenvalues)
    outcome = kmeans(embedding.values, k, restarts=restarts, seed=seed)
    outcome.eigenvalues = eigenvalues
    outcome.embedding = embedding
    return outcome


def relgap_contributions(eigenvalues):
    """rho_k = (lambda_k - lambda_{k-1}) / lambda_k, 0 where lambda_k vanishes"""
    lam = np.asarray(eigenvalues, dtype=float)
    rho = np.zeros(lam.size)
    for i in range(1, lam.size):
        if lam[i] > ZERO_EIGENVALUE:
            rho[i] = (lam[i] - lam[i - 1]) / lam[i]
    return rho


def choose_k_relgap(eigenvalues, eta=DEFAULT_ETA, k_max=DEFAULT_K_MAX):
    """
    largest k <= k_max with rho_k <= 0.01 * eta (rho_1 counts as 0)
    """
    if len(eigenvalues) == 0:
        raise FtsParameterError("no eigenvalues")
    if k_max < 1:
        raise FtsParameterError(f"k_max must be positive, got {k_max}")
    rho = relgap_contributions(eigenvalues)
    upper = min(k_max, rho.size)
    qualifying = [k for k in range(1, upper + 1) if rho[k - 1] <= RELGAP_THRESHOLD * eta]
    return max(qualifying, default=1)


def sd1gap_margins(eigenvalues, k_max):
    """(lambda_{k+1} - lambda_k) - sigma_k for k = 1..k_max"""
    lam = np.asarray(eigenvalues, dtype=float)
    margins = np.empty(k_max)
    for k in range(1, k_max + 1):
        tail = lam[k:]
        sigma = np.mean((tail - tail.mean()) ** 2)
        margins[k - 1] = (lam[k] - lam[k - 1]) - sigma
    return margins


def choose_k_sd1gap(eigenvalues, k_max=DEFAULT_K_MAX):
    """
    largest k <= k_max whose gap lambda_{k+1} - lambda_k is at least the mean
    squared deviation of lambda_{k+1..d}
    """
    d = len(eigenvalues)
    if k_max >= d:
        raise FtsParameterError(f"k_max = {k_max} needs more than {d} eigenvalues")
    if k_max < 1:
        raise FtsParameterError(f"k_max must be positive, got {k_max}")
    margins = sd1gap_margins(eigenvalues, k_max)
    qualifying = [k for k in range(1, k_max + 1) if margins[k - 1] >= 0]
    return max(qualifying, default=1)


def _check_labels(labels, d):
    labels = np.asarray(labels)
    if labels.shape != (d,):
        raise FtsParameterError(f"expected {d} labels, got {labels.size}")
    return labels


def ch_index(W, labels):
    """
    Calinski-Harabasz index with the rows of W as feature vectors

    Infinite when every cluster collapses to a single point.
    """
    values = np.asarray(W.values, dtype=float)
    labels = _check_labels(labels, values.shape[0])
    n_labels = np.unique(labels).size
    if n_labels < 2 or n_labels >= values.shape[0]:
        raise FtsParameterError(
            f"CH needs between 2 and {values.shape[0] - 1} clusters, got {n_labels}"
        )
    within = sum(
        ((values[labels == c] - values[labels == c].mean(axis=0)) ** 2).sum()
        for c in np.unique(labels)
    )
    if within == 0:
        return float("inf")
    return float(calinski_harabasz_score(values, labels))


def silhouette_index(sim, labels):
    """
    Mean silhouette width with A as the dissimilarity

    Negative similarity estimates are read as distance 0. Singletons score 0.
    """
    values = np.clip(np.asarray(sim.values, dtype=float), 0.0, None)
    np.fill_diagonal(values, 0.0)
    labels = _check_labels(labels, values.shape[0])
    n_labels = np.unique(labels).size
    if n_labels < 2:
        raise FtsParameterError("silhouette needs at least 2 clusters")
    if n_labels == values.shape[0]:
        return 0.0
    return float(silhouette_score(values, labels, metric="precomputed"))


def score_k(sim, method, eta=DEFAULT_ETA, k_max=DEFAULT_K_MAX, seed=0,
            restarts=DEFAULT_RESTARTS, workers=1):
    """
    Criterion values behind select_k, keyed by candidate k

    relgap: rho_k; sd1gap: gap minus sigma_k; ch/silhouette: index of the
    clustering obtained by running the whole pipeline with that k.
    """
    if method not in METHODS:
        raise FtsParameterError(
            f"unknown k-selection method {method!r}, expected one of {', '.join(METHODS)}"
        )
    d = sim.d
    if method in EIGEN_METHODS:
        eigenvalues, _ = spectrum(sim, eta)
        if method == "relgap":
            rho = relgap_contributions(eigenvalues)
            return {k: float(rho[k - 1]) for k in range(1, min(k_max, d) + 1)}
        upper = min(k_max, d - 1)
        margins = sd1gap_margins(eigenvalues, upper)
        return {k: float(margins[k - 1]) for k in range(1, upper + 1)}

    candidates = list(range(2, min(k_max, d - 1) + 1))
    W = adjacency(sim, eta)

    def run(k):
        outcome = spectral_cluster(sim, k, eta=eta, seed=seed, restarts=restarts)
        if method == "ch":
            return ch_index(W, outcome.labels)
        return silhouette_index(sim, outcome.labels)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            scores = list(pool.map(run, candidates))
    else:
        scores = [run(k) for k in candidates]
    return dict(zip(candidates, scores))


def k_from_scores(method, scores, eta=DEFAULT_ETA):
    """
    The k select_k picks, read off score_k output

    :param scores <dict>:   candidate k -> criterion value
    :returns <int>:
    """
    if method not in METHODS:
        raise FtsParameterError(
            f"unknown k-selection method {method!r}, expected one of {', '.join(METHODS)}"
        )
    if method == "relgap":
        threshold = RELGAP_THRESHOLD * eta
        return max((k for k, rho in scores.items() if rho <= threshold), default=1)
    if method == "sd1gap":
        return max((k for k, margin in scores.items() if margin >= 0), default=1)
    if not scores:
        return 1
    # ties go to the smaller k
    return max(scores, key=lambda k: (scores[k], -k))


def select_k(sim, method, eta=DEFAULT_ETA, k_max=DEFAULT_K_MAX, seed=0,
             restarts=DEFAULT_RESTARTS, workers=1):
    """
    Data driven number of clusters

    :param sim <SimilarityMatrix>:
    :param method <str>:    relgap | sd1gap | ch | silhouette
    :returns <int>:
    """
    if method not in METHODS:
        raise FtsParameterError(
            f"unknown k-selection method {method!r}, expected one of {', '.join(METHODS)}"
        )
    if method in EIGEN_METHODS:
        eigenvalues, _ = spectrum(sim, eta)
        if method == "relgap":
            return choose_k_relgap(eigenvalues, eta, min(k_max, sim.d))
        if k_max >= sim.d:
            logger.debug(f"sd1gap: k_max {k_max} lowered to {sim.d - 1}")
        return choose_k_sd1gap(eigenvalues, min(k_max, sim.d - 1))
    return k_from_scores(method, score_k(sim, method, eta, k_max, seed, restarts, workers))


def misclustering_rate(labels, truth):
    """
    Smallest fraction of disagreements over all matchings of the two label sets

    :returns <float>:   in [0, 1]
    """
    labels = np.asarray(labels)
    truth = np.asarray(truth)
    if labels.shape != truth.shape:
        raise FtsParameterError(
            f"label vectors differ in length: {labels.size} vs {truth.size}"
        )
    if labels.size == 0:
        return 0.0
    _, a = np.unique(labels, return_inverse=True)
    _, b = np.unique(truth, return_inverse=True)
    size = max(a.max(), b.max()) + 1
    table = np.zeros((size, size), dtype=int)
    np.add.at(table, (a, b), 1)
    if size <= EXACT_MATCHING_LIMIT:
        rows = np.arange(size)
        agree = max(table[rows, list(p)].sum() for p in itertools.permutations(rows))
    else:
        logger.warning(
            f"{size} labels exceed exhaustive matching limit "
            f"{EXACT_MATCHING_LIMIT}, using assignment solver"
        )
        rows, cols = linear_sum_assignment(table, maximize=True)
        agree = table[rows, cols].sum()
    return float(1.0 - agree / labels.size)
