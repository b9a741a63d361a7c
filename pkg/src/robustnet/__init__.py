"""Node-failure-robust network construction and exact verification."""

from .dynamic import (
    BuilderState,
    GrowthTrace,
    RobustnessPolicy,
    TraceEvent,
    grow_to,
    new_builder,
    savings_ratio,
    step,
)
from .graph import Graph, RingOrder
from .static import (
    build_circulant,
    build_cycle,
    build_halves_f,
    build_halves_f1,
    build_msets,
    fixture_matrix,
    optimal_links,
)
from .verify import (
    ResourceLimitError,
    VerificationReport,
    is_connected,
    is_robust,
    robust_brute_force,
    vertex_connectivity,
)

__version__ = "0.1.0"
