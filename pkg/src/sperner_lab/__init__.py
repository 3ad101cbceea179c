"""Workbench for simultaneous Sperner colorings on staircase subdivisions.

The package builds the subdivision of a simplex whose vertices are monotone
integer partitions, colors it with deterministic rating schemes or seeded
random specializations, searches for faces showing many colors under every
coloring at once, classifies the resulting color hypergraphs, and numerically
verifies the continuous maps that back the existence argument.
"""

from .simplicial import (
    Complex,
    FaceMap,
    NotClosedError,
    RealizationPoint,
    SourceMismatchError,
    VertexMap,
    barycenter,
    close_down,
    complex_from_doc,
    complex_to_doc,
    is_sperner_coloring,
    join,
    leq_maps,
    pushforward,
    simplex,
    skeleton,
    validate_complex,
    vertex_map_to_doc,
)
from .partitions import (
    MixedParametersError,
    Partition,
    PartitionComplex,
    boundary_vertex_cycle,
    build,
    enumerate_partitions,
    is_face,
    partition_complex_from_doc,
    partition_complex_to_doc,
    realize_vertex,
    subdivision_map,
)
from .schemes import (
    RatingScheme,
    color_vertex,
    coloring_from_scheme,
    longest_interval_scheme,
    parse_scheme,
    path_hypergraph_schemes,
    random_sperner_coloring,
    ranked_scheme,
    scheme_from_descriptor,
    scheme_to_descriptor,
    star_hypergraph_schemes,
)
from .solver import (
    ColorHypergraph,
    NoSolutionError,
    SizeVector,
    SolutionReport,
    SweepGrid,
    color_set,
    compositions,
    conjecture_sweep,
    find_solutions,
    has_isolated_colors,
    hypergraph_of,
    instance_colorings,
    is_connected,
    is_full_solution,
    is_size_solution,
    tree_shape,
)
from .proofmaps import (
    BoundaryPoint,
    BoundarySolutionFoundError,
    DegenerateNormalizerError,
    NonnegGrid,
    OutsideMassSpaceError,
    OutsideRowSpaceError,
    WindingConvergenceError,
    WindingResult,
    boundary_winding,
    color_marginal,
    coloring_profile,
    equalize_rows,
    grid_sums,
    in_mass_space,
    in_row_space,
    linear_blend,
    make_grid,
    random_bounds,
    random_mass_point,
    random_row_point,
    row_trim_thresholds,
    trim_equalize_roundtrip_gap,
    trim_rows,
    verify_suites,
)

__version__ = "0.1.0"
