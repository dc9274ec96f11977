"""Fuzzy and possibilistic c-means, VAT/iVAT tendency images and validity indices."""
from .core import (CentroidSet, ClusteringResult, Dataset, MembershipMatrix, RunConfig,
                   load_csv, seeded_rng, write_csv)
from .datagen import Scenario, add_outlier, generate, get_scenario
from .distance import CovarianceModel, fit_covariance, pairwise_matrix
from .fcm import fcm_fit, harden_by_nearest_centroid
from .pcm import pcm_fit
from .tendency import ivat, ivat_transform, render_pgm, vat_order
from .validity import davies_bouldin, dunn_index, partition_coefficient, sweep_c

__version__ = "0.1.0"
