# -*- coding: utf-8 -*-
# flake8: noqa

"""
python-ftscluster
Spectral clustering and equality testing of functional time series
"""

from . import convert, version
from .basis import BasisSpec, FunctionalTimeSeries, GriddedSample, fit_curves
from .cluster import ClusterOutcome, misclustering_rate, select_k, spectral_cluster
from .equality import EqualityTestResult, equality_test, pairwise_tests
from .exceptions import Error
from .models import ModelSpec, draw_operators, make_setting, simulate_model
from .spectra import BlockPlan, SimilarityMatrix, make_block_plan, similarity, similarity_matrix
