"""Balanced planar separators from kissing-disk packings.

Pipeline: :func:`generate_apollonian` or a triangulation file ->
:func:`compute_packing` -> :func:`normalize` -> :func:`select_derandomized`
(or :func:`select_random`) -> :func:`verify_separator`.
"""

from .errors import (
    BelowRecursionBaseError,
    ConvergenceError,
    DegenerateNormalizationError,
    DiskSepError,
    FormatError,
    InvalidInputError,
    InvalidTriangulationError,
    PartitionMismatchError,
)
from .geometry import (
    CoverWitness,
    Disk,
    Point2,
    circle_hit_interval,
    circle_intersects_disk,
    count_in_disk,
    lens_area,
    nine_cover_witness,
    smallest_enclosing_disk,
    smallest_k_enclosing_disk,
    surrogate_radius,
)
from .graph import (
    Graph,
    VerifyReport,
    connected_components,
    exhaustive_min_balanced_separator,
    generate_apollonian,
    verify_separator,
)
from .packing import Packing, PackingReport, Triangulation, compute_packing, layout, validate_packing
from .separator import (
    Certificate,
    NormalizedPacking,
    SeparatorResult,
    certificate,
    estimate_expected_size,
    normalize,
    select_derandomized,
    select_random,
)

__version__ = "0.1.0"
