"""Invertible Future/Open/Closed state space for process trees.

Public surface re-exports: the tree model and grammar, the state and
transition semantics with inversion and reduction, bounded trace languages,
the three shortest-run search strategies, the seeded generator, and the
benchmark harness.
"""

from .tree import (
    InvalidTreeError,
    Operator,
    ParseError,
    ProcessTree,
    activity_count,
    alphabet,
    format_tree,
    invert,
    load_ptt,
    parse_tree,
    validate,
)
from .statespace import (
    ALLOWED_MOVES,
    CLOSED,
    FUTURE,
    IllegalTransitionError,
    OPEN,
    Run,
    StateCapExceeded,
    StateGraph,
    Transition,
    TreeState,
    UnknownVertexError,
    VertexState,
    apply,
    dictated_transitions,
    fast_forward,
    final_state,
    format_run,
    initial_state,
    invert_run,
    invert_state,
    invert_transition,
    is_legal,
    legal_transitions,
    parse_run,
    parse_transition,
    reachable_graph,
    reduced_successors,
    replay_run,
    successors,
)
from .language import (
    LanguageOverflowError,
    LoopBound,
    Trace,
    enumerate_language,
    parse_trace,
    project_run,
    shuffle,
    statespace_language,
    trace_text,
)
from .search import (
    DEFAULT_STATE_CAP,
    MeetMismatchError,
    SearchLimitExceeded,
    SearchOutcome,
    combine_direct,
    search,
    search_bd,
    search_bdp,
    search_ud,
)
from .generator import (
    CorpusEntry,
    GenConfig,
    OperatorDistribution,
    generate_corpus,
    generate_tree,
    load_corpus,
    sample_distribution,
    save_corpus,
)
from .bench import (
    AggregateSummary,
    BenchOptions,
    BenchRecord,
    BenchResult,
    CSV_HEADER,
    ReductionStats,
    SkippedTree,
    aggregate,
    operator_trend,
    reduction_stats,
    run_benchmark,
    spearman,
    write_csv,
)

__version__ = "0.1.0"
