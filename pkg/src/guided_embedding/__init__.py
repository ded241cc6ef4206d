"""Guided graph spectral embedding.

Spectral embedding of undirected graphs steered by per-node importance
weights: classical concentration and embedded-distance designs, a
combined weighted criterion with series-truncated approximations,
weight-sweep trajectory embeddings, and clustering statistics.
"""

from .analysis import (
    ClusterAssignment,
    ModularityTest,
    SilhouetteSelection,
    kmeans,
    modularity,
    permutation_test,
    silhouette_select,
    silhouette_values,
)
from .embedding import (
    Embedding2D,
    Trajectory,
    WeightSchedule,
    embed,
    make_schedule,
    procrustes_align,
    trajectory_sweep,
)
from .graph import (
    Graph,
    NormalizedOperators,
    binarize,
    connected_components,
    drop_isolated,
    from_weights,
    load_graph,
    load_graph_csv,
    normalize,
)
from .slepian import (
    CooperationWeights,
    SlepianSet,
    concentration_slepians,
    embedded_distance_slepians,
    guided_matrix_approx,
    guided_matrix_exact,
    guided_matrix_linear,
    guided_matrix_quadratic,
    guided_slepians,
    verify_degeneracy,
)
from .spectral import (
    SpectralBasis,
    TaylorBound,
    criterion_error_bound,
    eig_sym,
    gft,
    igft,
    sqrt_psd_exact,
    sqrt_taylor,
    taylor_bound,
    taylor_coeff,
    taylor_error_bound,
)

__version__ = "0.1.0"
