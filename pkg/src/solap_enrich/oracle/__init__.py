"""Reference oracle and synthetic cubes with known answers."""

from .sampling import OracleVerdict, oracle_predicate, oracle_relate, oracle_relate_verdict
from .synthetic import (
    GroundTruth,
    InvalidSpec,
    Layout,
    SyntheticCubeSpec,
    build_layout,
    generate_synthetic_cube,
    ground_truth,
    load_truth,
    relation_counts,
)

__all__ = [
    "GroundTruth",
    "InvalidSpec",
    "Layout",
    "OracleVerdict",
    "SyntheticCubeSpec",
    "build_layout",
    "generate_synthetic_cube",
    "ground_truth",
    "load_truth",
    "oracle_predicate",
    "oracle_relate",
    "oracle_relate_verdict",
    "relation_counts",
]
