"""Exact graph metrics, all pure functions of a :class:`~tempograph.graph.Snapshot`."""

from .basic import (
    DegreeStats,
    Transitivity,
    assortativity_degree,
    coreness,
    degree_stats,
    density,
    knn_average_degree,
    local_transitivity,
    neighborhood_size,
    strength,
    transitivity,
)
from .paths import (
    Eccentricity,
    PathStats,
    avg_shortest_path,
    betweenness,
    bfs_distances,
    closeness,
    diameter,
    eccentricity,
    eccentricity_radius,
    mean_distance,
    source_dependency,
)
from .spectral import HitsScores, eigenvector_centrality, hits_scores, pagerank
from .structure import (
    cocitation,
    cocitation_pair,
    edge_connectivity,
    max_clique,
    motifs_randesu,
    silw,
    silw_pair,
)

__all__ = [
    "DegreeStats",
    "Eccentricity",
    "HitsScores",
    "PathStats",
    "Transitivity",
    "assortativity_degree",
    "avg_shortest_path",
    "betweenness",
    "bfs_distances",
    "closeness",
    "cocitation",
    "cocitation_pair",
    "coreness",
    "degree_stats",
    "density",
    "diameter",
    "eccentricity",
    "eccentricity_radius",
    "edge_connectivity",
    "eigenvector_centrality",
    "hits_scores",
    "knn_average_degree",
    "local_transitivity",
    "max_clique",
    "mean_distance",
    "motifs_randesu",
    "neighborhood_size",
    "pagerank",
    "silw",
    "silw_pair",
    "source_dependency",
    "strength",
    "transitivity",
]
