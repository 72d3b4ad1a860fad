"""Discrete-time quantum walks on graphs, classical baselines, and
extreme-event statistics at desk scale."""

__version__ = "0.1.0"

from .graphs import (Graph, build_periodic_lattice, build_ring,
                     build_scale_free, degree_histogram, load_edgelist,
                     save_edgelist)
from .operators import (CoinSpec, WalkOperator, assemble_walk_operator,
                        dense_unitary, fourier_coin, grover_coin)
from .qdyn import (evolve_record, evolve_state, localized_state, step,
                   uniform_state, vertex_phases, vertex_probabilities)
from .cdyn import binomial_exceedance, simulate_crw, stationary_mean
from .spectral import (SpectralData, eigendecompose, eigenphase_spacing_density,
                       idempotent_quadratic_form, limiting_distribution,
                       offdiagonal_signal, predicted_mean_sigma)
from .series import VertexSeries, read_series_csv, write_series_csv
from .xstats import (EEReport, MomentTable, cross_correlation, degree_profile,
                     ee_detect, flux_fluctuation_fit, recurrence_statistics,
                     scaling_collapse, series_moments)

__all__ = [name for name in dir() if not name.startswith("_")]
