"""Rainbow matchings: swap local search, rainbow-monotone paths, exact oracles."""

from .core import (
    Edge,
    FamilyClass,
    MatchingFamily,
    RainbowSelection,
    Violation,
    family_from_json,
    family_to_json,
    find_noncrossing_pair,
    make_edge,
    orthogonal,
    validate_family,
    validate_selection,
)
from .localsearch import (
    BoundSpec,
    SwapMove,
    WastefulReport,
    analyze_wastefulness,
    enumerate_moves,
    greedy_rainbow,
    local_search,
    threshold,
)
from .monopath import (
    LabeledPath,
    PathInstance,
    find_monotone_ss_forest,
    find_monotone_ss_treegrow,
    find_monotone_st,
    is_rainbow_monotone,
    strongly_rainbow_from_monotone,
)
from .alternating import (
    AlternatingPath,
    AlternatingSystem,
    augment,
    conjecture_driven_solver,
    symdiff_decompose,
)
from .oracle import (
    BudgetExceeded,
    SearchBudget,
    exists_monotone_path_exact,
    find_strongly_rainbow_augmenting,
    max_rainbow_exact,
    search_counterexamples,
)

__version__ = "0.1.0"
