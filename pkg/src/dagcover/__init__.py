"""DAG covers of weighted digraphs: constructions, certification and bounds."""
from .cover import CoverCertificate, DagCover, SteinerDag, certify
from .decomposition import PathDecomposition, TreeDecomposition, validate_decomposition
from .estimators import PlanarCover, TwNonSteinerCover, TwSteinerCover, check_digraph, check_pairs
from .exceptions import DagCoverError, InputError, ParseError, PreconditionError, StructuralError
from .graph import UNREACHABLE, DistanceMatrix, Permutation, WeightedDigraph, all_pairs_distances
from .planar.cover import build_planar_cover
from .star import analyze_star_cover, star_lower_bound
from .tw_nonsteiner import build_tw_nonsteiner_cover
from .tw_steiner import build_tw_steiner_cover

__version__ = "0.1.0"

__all__ = [
    "CoverCertificate",
    "DagCover",
    "DagCoverError",
    "DistanceMatrix",
    "InputError",
    "ParseError",
    "PathDecomposition",
    "Permutation",
    "PlanarCover",
    "PreconditionError",
    "SteinerDag",
    "StructuralError",
    "TreeDecomposition",
    "TwNonSteinerCover",
    "TwSteinerCover",
    "UNREACHABLE",
    "WeightedDigraph",
    "all_pairs_distances",
    "analyze_star_cover",
    "build_planar_cover",
    "build_tw_nonsteiner_cover",
    "build_tw_steiner_cover",
    "certify",
    "check_digraph",
    "check_pairs",
    "star_lower_bound",
    "validate_decomposition",
]
