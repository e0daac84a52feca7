"""Spatial trees for broad-phase neighborhood detection.

Octrees, k-d trees (four split strategies) and R-trees built on one
shared node model, searched by a single dual-tree fixed-radius pair
algorithm, verified against an exhaustive oracle, and benchmarked by a
grid harness (see the ``bench`` console script).
"""

from .core import (
    CS,
    FAMILIES,
    KDTREE,
    MMAS,
    MSAS,
    OCTREE,
    RTREE,
    SAHS,
    SPLIT_STRATEGIES,
    BaseTree,
    DepthExhausted,
    DuplicateId,
    EmptyLeaf,
    NegativeRadius,
    NeighborPair,
    PointOutsideDomain,
    PointOutsideNode,
    SearchCounters,
    SpatialTreeError,
    TooFewEntries,
    TreeConfig,
    TreeNode,
    TreeStats,
    build_tree,
    dual_tree_search,
    iter_nodes,
    self_search,
    tree_stats,
)
from .geometry import (
    Aabb,
    Point3,
    UNIT_CUBE,
    center,
    combine,
    contains,
    distance,
    enlarge,
    min_distance_boxes,
    point_box,
    surface_area,
    volume,
)
from .octree import Octree, child_index, split_octant
from .kdtree import (
    AXIS_X,
    AXIS_Y,
    AXIS_Z,
    KdTree,
    SplitPlane,
    choose_split_cs,
    choose_split_mmas,
    choose_split_msas,
    choose_split_sahs,
    split_kd,
)
from .rtree import RTree, choose_subtree, quadratic_split
from .oracle import brute_force_pair_count, brute_force_pairs, expected_pair_count
from .bench import (
    BenchRecord,
    EmptyInput,
    InvalidGrid,
    OracleMismatch,
    ScenarioSpec,
    canonical_pair_set,
    emit_report,
    generate_uniform,
    parse_report_csv,
    reference_grid,
    run_grid,
    run_scenario,
    standard_verify_configs,
    verify_matrix,
)
from .audit import audit_tree

__version__ = "0.1.0"
