"""Static call graphs for MiniJ, a tiny class-based language.

Two builders are provided: a worklist algorithm driven by class hierarchy
analysis (``classic``) and a stack-based depth-first traversal with
recursion self-loops, return links and skip detection (``krab``). Both
support incremental updates after a single method body changes.
"""

from .bench import generate_program, random_program, run_bench
from .callgraph import (
    CallEdge,
    CallGraph,
    add_link,
    connected_components,
    export_dot,
    export_json,
    graphs_equal,
    unreachable_methods,
)
from .classic import Counters, classic_build, classic_incremental, find_entry_points
from .costmodel import CostRow, classical_cost, krab_cost, table1
from .errors import MiniJError, NoEntryPointError, SkipFault, UnresolvedTargetError
from .frontend import (
    CallSite,
    ClassDecl,
    Delta,
    MethodDecl,
    MethodId,
    ProgramModel,
    apply_edit,
    format_program,
    parse_body,
    parse_patch,
    parse_program,
)
from .hierarchy import (
    ClassHierarchy,
    LiveTypeSet,
    build_hierarchy,
    cone,
    propagate_live_types,
    resolve_targets,
)
from .krab import (
    Frame,
    TraversalState,
    krab_build,
    krab_incremental,
    krab_multi_entry,
    validate_traversal,
)

__version__ = "0.1.0"
