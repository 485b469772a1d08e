"""Stack-based call-graph construction (KRAB).

The traversal keeps an explicit stack of frames, one per method whose body
is being scanned. Calling a method that is not yet explored pushes it;
a direct self-call marks a self-loop once; a call to a method already on
the stack or already explored only adds an edge. When a frame runs out of
call sites it is popped and a predecessor edge is drawn from it to the
frame beneath. A non-empty stack after the root is popped means some frame
never returned, which is reported as a SkipFault.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .callgraph import CallGraph, reachable_methods
from .classic import find_entry_points
from .errors import NoEntryPointError, SkipFault, UnknownMethodError
from .frontend import MethodId, ProgramModel
from .hierarchy import ClassHierarchy, resolve_targets

log = logging.getLogger(__name__)


@dataclass
class Frame:
    method: MethodId
    cursor: int = 0
    # targets of the site under the cursor still to be handled, last first
    pending: list | None = None
    # set when the frame handed control back without leaving the stack
    returned: bool = False


@dataclass
class TraversalState:
    stack: list = field(default_factory=list)
    graph: CallGraph = field(default_factory=CallGraph)
    visited: set = field(default_factory=set)
    steps: int = 0
    weighted_steps: int = 0
    pushes: int = 0
    pops: int = 0


class Traversal:
    """One depth-first run from a root method.

    Tests swap in subclasses that override ``pop`` to inject skips.
    """

    def __init__(self, model: ProgramModel, h: ClassHierarchy, state: TraversalState | None = None):
        self.model = model
        self.h = h
        self.state = state if state is not None else TraversalState()
        self._on_stack: set = set()

    def push(self, mid: MethodId) -> None:
        st = self.state
        st.weighted_steps += len(st.stack)
        st.pushes += 1
        assert mid not in self._on_stack, f"{mid} pushed twice"
        st.stack.append(Frame(mid))
        self._on_stack.add(mid)

    def pop(self, index: int) -> Frame:
        """Remove the frame at ``index`` (normally the top) from the stack."""
        frame = self.state.stack.pop(index)
        self.state.pops += 1
        self._on_stack.discard(frame.method)
        return frame

    def _control(self) -> int:
        """Index of the frame that currently has control, or -1."""
        stack = self.state.stack
        i = len(stack) - 1
        while i >= 0 and stack[i].returned:
            i -= 1
        return i

    def _caller_of(self, index: int):
        stack = self.state.stack
        i = index - 1
        while i >= 0 and stack[i].returned:
            i -= 1
        return stack[i] if i >= 0 else None

    def run(self, root: MethodId) -> TraversalState:
        st = self.state
        g = st.graph
        g.add_node(root)
        self.push(root)
        while True:
            i = self._control()
            if i < 0:
                break
            frame = st.stack[i]
            assert st.stack[0].method == root
            if frame.pending is None:
                sites = self.model.method(frame.method).call_sites
                if frame.cursor == len(sites):
                    self._return(i)
                    continue
                site = sites[frame.cursor]
                st.steps += 1
                frame.pending = resolve_targets(self.model, self.h, frame.method, site)
                frame.pending.reverse()
            site_index = frame.cursor
            while frame.pending:
                t = frame.pending.pop()
                g.add_link(frame.method, t, site_index)
                if t != frame.method and t not in self._on_stack and t not in st.visited:
                    self.push(t)
                    break
            else:
                frame.pending = None
                frame.cursor += 1
        return st

    def _return(self, index: int) -> None:
        st = self.state
        caller = self._caller_of(index)
        popped = self.pop(index)
        st.visited.add(popped.method)
        if caller is not None:
            st.graph.add_predecessor(popped.method, caller.method)


def validate_traversal(state: TraversalState) -> None:
    """Raise SkipFault when frames are left on the stack."""
    if state.stack:
        raise SkipFault(state.stack)


def krab_build(
    model: ProgramModel, h: ClassHierarchy, entry: MethodId, traversal_cls=None
):
    """Depth-first build from ``entry``. Returns ``(graph, state)``."""
    if not model.has_method(entry):
        raise NoEntryPointError(f"entry method {entry} does not exist")
    cls = traversal_cls or Traversal
    state = cls(model, h).run(entry)
    state.graph.entries.add(entry)
    log.debug("krab build from %s: steps=%d weighted=%d", entry, state.steps, state.weighted_steps)
    validate_traversal(state)
    return state.graph, state


def krab_multi_entry(model: ProgramModel, h: ClassHierarchy, traversal_cls=None):
    """Union of ``krab_build`` over every ``main``, in declaration order."""
    entries = find_entry_points(model)
    if not entries:
        raise NoEntryPointError("no main method found")
    graph = CallGraph()
    states = []
    for e in entries:
        g, st = krab_build(model, h, e, traversal_cls)
        graph.union(g)
        states.append(st)
    return graph, states


def krab_incremental(
    model: ProgramModel,
    h: ClassHierarchy,
    prior: CallGraph,
    edited: MethodId,
    entry: MethodId | None = None,
    traversal_cls=None,
):
    """Re-traverse only the edited method and whatever becomes newly
    reachable through it; everything else in ``prior`` counts as explored.

    Reachability is recomputed from ``entry`` (or all prior entries).
    """
    if not model.has_method(edited):
        raise UnknownMethodError(f"cannot update {edited}: no such method")
    graph = prior.copy()
    state = TraversalState(graph=graph)
    if edited not in reachable_methods(prior):
        return graph, state
    graph.remove_outgoing(edited)
    state.visited = set(prior.nodes) - {edited}
    (traversal_cls or Traversal)(model, h, state).run(edited)
    validate_traversal(state)
    roots = graph.entries if entry is None else {entry}
    graph.restrict(reachable_methods(graph, roots))
    return graph, state
