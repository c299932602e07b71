"""Unfriendly partitions of finite graphs and of finitely presented rayless graphs."""

from __future__ import annotations

from .errors import (
    CapacityError,
    InputError,
    InvariantViolation,
    PreconditionError,
    UnsatError,
    WorkbenchError,
)
from .finite_solver import (
    SolveTrace,
    cascade_bound,
    exact_max_cut_extension,
    extend_pre_partition,
    flip_cascade,
    round_robin_opponents,
    unfriendly_partition,
)
from .graph import (
    FiniteGraph,
    HappinessReport,
    Partition,
    cut_size,
    degree_in,
    flip,
    happiness,
    is_unfriendly,
    is_unfriendly_for,
)
from .presentation import (
    OMEGA,
    CopyFamily,
    DegreeAtlas,
    Finite,
    Glue,
    Leaf,
    SymbolicCardinal,
    VertexAddress,
    degree_atlas,
    instantiate,
    is_in_W,
    minimal_separator,
    structural_rank,
    symbolic_degree,
    validate,
)
from .rank import ALL_FINITE, EDGELESS, BaseFamily, RankResult, bounded_rank, naive_rank, rank_union_check
from .symbolic import (
    OpponentSignature,
    SolverState,
    check_symbolic,
    classify_S,
    family_signatures,
    instantiate_partition,
    solve_pre_partition,
    solve_unfriendly,
    witness_kapom,
)
from .xval import CrossValReport, cross_validate

__version__ = "0.1.0"
