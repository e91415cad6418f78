"""Age-specific network dynamics toolkit.

Builds age-specific snapshots of a static interaction network from expression
detection calls, computes graphlet and centrality statistics on the resulting
series, fits random-graph null models, and ranks genes whose centrality
trajectories track age.
"""

__version__ = "0.1.0"

from .centrality import KINDS, compute_centralities
from .errors import InputError, ParseError, ValidationError
from .expression import ActivityProfile, ExpressionMatrix, activity, load_expression
from .graph import Network, load_edge_list
from .graphlets import count_graphlets, count_orbits, gdd_agreement
from .models import FAMILIES, FitReport, ModelSpec, evaluate_fit, generate
from .predictor import (
    PredictParams,
    compute_trajectories,
    predict,
    randomized_control,
    score_and_rank,
)
from .snapshots import SnapshotSeries, build_series, load_series_dir, write_series_dir

__all__ = [
    "ActivityProfile",
    "ExpressionMatrix",
    "FAMILIES",
    "FitReport",
    "InputError",
    "KINDS",
    "ModelSpec",
    "Network",
    "ParseError",
    "PredictParams",
    "SnapshotSeries",
    "ValidationError",
    "activity",
    "build_series",
    "compute_centralities",
    "compute_trajectories",
    "count_graphlets",
    "count_orbits",
    "evaluate_fit",
    "gdd_agreement",
    "generate",
    "load_edge_list",
    "load_expression",
    "load_series_dir",
    "predict",
    "randomized_control",
    "score_and_rank",
    "write_series_dir",
    "__version__",
]
