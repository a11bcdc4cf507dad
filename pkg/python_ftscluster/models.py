#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Data generating processes for functional time series

Curves are simulated through their first L Fourier coefficients:
(time-varying) functional AR processes become VAR recursions on the
coefficient vectors, the functional MA(1) a vector MA(1).

    I    functional white noise
    II   FAR(2), norms 0.75 and -0.4
    III  FMA(1) with b = 0
    IV   tvFAR(1), norm 0.8, innovations with time-varying variance
    V    tvFAR(2), norm 1.8 cos(1.5 - cos(4 pi t/T)) and -0.81
    VI   FAR(2) with a structural break at t = 3T/8
"""

__author__ = "python-ftscluster developers"
__license__ = "MIT"
__version__ = "0.3.0"

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .basis import DEFAULT_SIM_DIMENSION, BasisSpec, FunctionalTimeSeries
from .exceptions import FtsNumericError, FtsParameterError

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

MODELS = ("I", "II", "III", "IV", "V", "VI")
SETTINGS = {
    1: ("I", "II", "III"),
    2: ("IV", "V", "VI"),
    3: MODELS,
}
DEFAULT_BURN_IN = 200
MAX_DRAWS = 100
# most time points checked for causality
CHECK_POINTS = 256

EXP_RULE = "exp"
POWER_RULE = "power"


def variance_rule(name, L):
    """nu_{l,l'} for l, l' = 1..L"""
    l = np.arange(1, L + 1, dtype=float)
    if name == EXP_RULE:
        return np.exp(-l[:, None] - l[None, :])
    if name == POWER_RULE:
        return 1.0 / (l[:, None] + l[None, :] ** 1.5)
    raise FtsParameterError(f"unknown variance rule {name!r}")


def innovation_variances(L, growing=False):
    """Var <eps_t, psi_l> = exp(-(l-1)/10), or 2 exp((l-1)/10) after model VI's break"""
    l = np.arange(1, L + 1, dtype=float)
    if growing:
        return 2.0 * np.exp((l - 1.0) / 10.0)
    return np.exp(-(l - 1.0) / 10.0)


@dataclass(frozen=True)
class OperatorSpec:
    """
    :param rule <str>:      "exp" for exp(-l-l'), "power" for 1/(l + l'^1.5)
    :param kappa <float>:   signed target spectral norm, None keeps the raw draw
    :param L <int>:         dimension
    """

    rule: str
    kappa: Optional[float]
    L: int = DEFAULT_SIM_DIMENSION


@dataclass(frozen=True)
class ModelSpec:
    model: str
    T: int
    L: int = DEFAULT_SIM_DIMENSION
    seed: object = 0
    burn_in: int = DEFAULT_BURN_IN
    operator_seed: object = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise FtsParameterError(
                f"unknown model {self.model!r}, expected one of {', '.join(MODELS)}"
            )
        if self.T < 2 or self.L < 1 or self.burn_in < 0:
            raise FtsParameterError(
                f"invalid model size T={self.T}, L={self.L}, burn_in={self.burn_in}"
            )


@dataclass
class LabeledCollection:
    series: list
    labels: np.ndarray
    models: list = field(default_factory=list)

    @property
    def ids(self):
        return [s.id for s in self.series]


def make_rng(seed):
    """Generator from an int or a sequence of ints"""
    entropy = [int(s) for s in np.atleast_1d(seed)]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def _orient(matrix):
    """flip so the eigenvalue of largest modulus has non-negative real part"""
    eigenvalues = np.linalg.eigvals(matrix)
    lead = eigenvalues[np.argmax(np.abs(eigenvalues))]
    return -matrix if lead.real < 0 else matrix


def gen_operator(spec, rng):
    """
    L x L operator matrix with N(0, nu_{l,l'}) entries

    The draw is oriented, rescaled to spectral norm |kappa| and multiplied
    by sign(kappa). kappa = None returns the raw draw.
    """
    if spec.L < 1:
        raise FtsParameterError(f"operator dimension must be positive, got {spec.L}")
    sd = np.sqrt(variance_rule(spec.rule, spec.L))
    matrix = rng.normal(0.0, sd)
    while not np.any(matrix):
        matrix = rng.normal(0.0, sd)
    if spec.kappa is None:
        return matrix
    if spec.kappa == 0:
        return np.zeros_like(matrix)
    matrix = _orient(matrix) / np.linalg.norm(matrix, 2)
    return np.sign(spec.kappa) * abs(spec.kappa) * matrix


def gen_innovations(T, L, rng, variances=None):
    """T x L Gaussian coefficients, column l with variance exp(-(l-1)/10) by default"""
    if variances is None:
        variances = innovation_variances(L)
    return rng.standard_normal((T, L)) * np.sqrt(variances)


def sigma2_schedule(u):
    """model IV innovation variance multiplier at rescaled time u = t/T"""
    arg = 0.5 + np.cos(2.0 * np.pi * u) + 0.3 * np.sin(2.0 * np.pi * u)
    return np.cos(arg)


def kappa1_schedule(u):
    """model V first-lag norm at rescaled time u = t/T"""
    return 1.8 * np.cos(1.5 - np.cos(4.0 * np.pi * u))


def _companion_radius(lags):
    L = lags[0].shape[0]
    p = len(lags)
    companion = np.zeros((p * L, p * L))
    companion[:L, :] = np.hstack(lags)
    if p > 1:
        companion[L:, :-L] = np.eye((p - 1) * L)
    return np.max(np.abs(np.linalg.eigvals(companion)))


def _is_causal(operators, T):
    ts = np.unique(np.linspace(1, T, min(T, CHECK_POINTS)).round().astype(int))
    return all(_companion_radius(operators(t)) < 1.0 for t in ts)


def _draw_causal(draw, T, rng, model):
    for attempt in range(MAX_DRAWS):
        operators = draw(rng)
        if _is_causal(operators, T):
            if attempt:
                logger.debug(f"model {model}: causal operators after {attempt + 1} draws")
            return operators
    raise FtsNumericError(f"model {model}: no causal operator draw in {MAX_DRAWS} tries")


def _var_path(spec, operators, innovations, scale):
    """
    X_t = sum_j A_{t,j} X_{t-j} + scale(t) * eps_t over t = 1 - burn_in .. T
    """
    n = spec.T + spec.burn_in
    path = np.zeros((n, spec.L))
    for i, t in enumerate(range(1 - spec.burn_in, spec.T + 1)):
        x = scale(t) * innovations[i]
        for lag, A in enumerate(operators(t), start=1):
            if i >= lag:
                x = x + A @ path[i - lag]
        path[i] = x
    return path[spec.burn_in:]


def _far2_operators(spec, rng):
    def draw(rng):
        A1 = gen_operator(OperatorSpec(EXP_RULE, 0.75, spec.L), rng)
        A2 = gen_operator(OperatorSpec(POWER_RULE, -0.4, spec.L), rng)
        return lambda t: (A1, A2)

    return _draw_causal(draw, spec.T, rng, spec.model)


def _fma1_operators(spec, rng):
    B1 = gen_operator(OperatorSpec(EXP_RULE, None, spec.L), rng)
    B2 = gen_operator(OperatorSpec(EXP_RULE, None, spec.L), rng)
    return lambda t: (B1, B2)


def _tvfar1_operators(spec, rng):
    A1 = gen_operator(OperatorSpec(EXP_RULE, 0.8, spec.L), rng)
    return lambda t: (A1,)


def _tvfar2_operators(spec, rng):
    def draw(rng):
        base = gen_operator(OperatorSpec(EXP_RULE, 1.0, spec.L), rng)
        A2 = gen_operator(OperatorSpec(EXP_RULE, -0.81, spec.L), rng)
        return lambda t: (kappa1_schedule(t / spec.T) * base, A2)

    return _draw_causal(draw, spec.T, rng, spec.model)


def _break_point(spec):
    return 3.0 * spec.T / 8.0


def _far2_break_operators(spec, rng):
    breakpoint_ = _break_point(spec)

    def draw(rng):
        base1 = gen_operator(OperatorSpec(EXP_RULE, 1.0, spec.L), rng)
        base2 = gen_operator(OperatorSpec(POWER_RULE, 1.0, spec.L), rng)
        before = (0.7 * base1, 0.2 * base2)
        after = (0.0 * base1, -0.2 * base2)
        return lambda t: before if t <= breakpoint_ else after

    return _draw_causal(draw, spec.T, rng, spec.model)


def _white_noise(spec, operators, rng):
    return gen_innovations(spec.T, spec.L, rng)


def _ar_path(spec, operators, rng):
    innovations = gen_innovations(spec.T + spec.burn_in, spec.L, rng)
    return _var_path(spec, operators, innovations, lambda t: 1.0)


def _fma1(spec, operators, rng, b=0.0):
    B1, B2 = operators(1)
    eps = gen_innovations(spec.T + 1, spec.L, rng)
    t = np.arange(1, spec.T + 1)
    weight = 0.5 * (1.0 + b * np.cos(2.0 * np.pi * t / spec.T))
    return eps[1:] @ B1.T - weight[:, None] * (eps[:-1] @ B2.T)


def _tvfar1(spec, operators, rng):
    innovations = gen_innovations(spec.T + spec.burn_in, spec.L, rng)
    return _var_path(
        spec,
        operators,
        innovations,
        lambda t: np.sqrt(sigma2_schedule(t / spec.T)),
    )


def _far2_break(spec, operators, rng):
    breakpoint_ = _break_point(spec)
    innovations = gen_innovations(spec.T + spec.burn_in, spec.L, rng, np.ones(spec.L))
    sd_before = np.sqrt(innovation_variances(spec.L))
    sd_after = np.sqrt(innovation_variances(spec.L, growing=True))
    return _var_path(
        spec,
        operators,
        innovations,
        lambda t: sd_before if t <= breakpoint_ else sd_after,
    )


_OPERATORS = {
    "II": _far2_operators,
    "III": _fma1_operators,
    "IV": _tvfar1_operators,
    "V": _tvfar2_operators,
    "VI": _far2_break_operators,
}

_GENERATORS = {
    "I": _white_noise,
    "II": _ar_path,
    "III": _fma1,
    "IV": _tvfar1,
    "V": _ar_path,
    "VI": _far2_break,
}


def draw_operators(spec, rng=None):
    """
    Operator schedule of a model, a function of t returning the lag operators

    Without `rng` the draw comes from `spec.operator_seed` (or `spec.seed`
    when that is unset), so specs sharing an operator seed share operators.
    Model I has none and gives None.
    """
    draw = _OPERATORS.get(spec.model)
    if draw is None:
        return None
    if rng is None:
        rng = make_rng(spec.seed if spec.operator_seed is None else spec.operator_seed)
    return draw(spec, rng)


def simulate_model(spec, id=None):
    """
    One realization of a data generating process

    Operators come from `spec.operator_seed` when it is set, innovations
    from `spec.seed`. Otherwise both come from `spec.seed`.

    :param spec <ModelSpec>:
    :returns <FunctionalTimeSeries>:
    """
    rng = make_rng(spec.seed)
    if spec.operator_seed is None:
        operators = draw_operators(spec, rng)
    else:
        operators = draw_operators(spec)
    coeffs = _GENERATORS[spec.model](spec, operators, rng)
    if not np.all(np.isfinite(coeffs)):
        raise FtsNumericError(f"model {spec.model} produced non-finite coefficients")
    return FunctionalTimeSeries(coeffs, BasisSpec(spec.L), id or f"{spec.model}")


def make_setting(setting, n, T, seed=0, L=DEFAULT_SIM_DIMENSION, workers=1):
    """
    n independent realizations of each model of a simulation setting

    The operators of model group g are drawn once from (seed, g) and shared
    by its members. Member r draws its innovations from (seed, g, r).

    :param setting <int>:   1 (I, II, III), 2 (IV, V, VI) or 3 (I..VI)
    :param n <int>:         realizations per model
    :returns <LabeledCollection>:   labels 0..k-1 in model order
    """
    if setting not in SETTINGS:
        raise FtsParameterError(f"unknown setting {setting!r}, expected 1, 2 or 3")
    if n < 1:
        raise FtsParameterError(f"n must be positive, got {n}")
    models = SETTINGS[setting]
    jobs = [
        (
            ModelSpec(model, T, L, seed=(seed, g, r), operator_seed=(seed, g)),
            f"{model}-{r + 1:03d}",
            g,
        )
        for g, model in enumerate(models)
        for r in range(n)
    ]

    def run(job):
        return simulate_model(job[0], id=job[1])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            series = list(pool.map(run, jobs))
    else:
        series = [run(job) for job in jobs]
    labels = np.array([job[2] for job in jobs])
    return LabeledCollection(series, labels, [job[0].model for job in jobs])
