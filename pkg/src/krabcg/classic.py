"""Worklist call-graph construction over CHA, with optional live-type
(RTA) pruning and an incremental variant."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

from .callgraph import CallGraph, reachable_methods
from .frontend import MethodId, ProgramModel
from .hierarchy import LiveTypeSet, build_hierarchy, propagate_live_types, resolve_targets

log = logging.getLogger(__name__)


@dataclass
class Counters:
    methods_processed: int = 0
    resolutions: int = 0
    reenqueues: int = 0
    # pull order, for inspecting which methods an incremental run touched
    trace: list = field(default_factory=list)
    # (method, site index) -> (CHA targets, live-type targets), only where they differ
    pruned: dict = field(default_factory=dict)


class Worklist:
    """FIFO queue that refuses a method already waiting in it."""

    def __init__(self, items=()):
        self.queue: deque = deque()
        self.enqueued: set = set()
        for it in items:
            self.push(it)

    def push(self, mid: MethodId) -> bool:
        if mid in self.enqueued:
            return False
        self.queue.append(mid)
        self.enqueued.add(mid)
        return True

    def pull(self) -> MethodId:
        mid = self.queue.popleft()
        self.enqueued.discard(mid)
        return mid

    def __len__(self) -> int:
        return len(self.queue)

    def __bool__(self) -> bool:
        return bool(self.queue)


def find_entry_points(model: ProgramModel) -> list[MethodId]:
    """Every method named ``main``, in declaration order."""
    return [m.id for m in model.methods() if m.name == "main"]


class _Builder:
    def __init__(self, model, h, graph, use_live_types=False):
        self.model = model
        self.h = h
        self.graph = graph
        self.use_live_types = use_live_types
        self.live = LiveTypeSet() if use_live_types else None
        self.targets: dict = {}  # method -> per-site target lists at last processing
        self.counters = Counters()

    def _resolve(self, mid: MethodId) -> list:
        decl = self.model.method(mid)
        self.counters.resolutions += len(decl.call_sites)
        out = [resolve_targets(self.model, self.h, mid, s, self.live) for s in decl.call_sites]
        if self.use_live_types:
            for site, kept in zip(decl.call_sites, out):
                full = resolve_targets(self.model, self.h, mid, site)
                key = (mid, site.index)
                if full != kept:
                    self.counters.pruned[key] = (full, kept)
                else:
                    self.counters.pruned.pop(key, None)
        return out

    def run(self, worklist: Worklist) -> None:
        while worklist:
            mid = worklist.pull()
            self.counters.methods_processed += 1
            self.counters.trace.append(mid)
            decl = self.model.method(mid)
            site_targets = self._resolve(mid)
            self.targets[mid] = site_targets
            for site, targets in zip(decl.call_sites, site_targets):
                for t in targets:
                    fresh = t not in self.graph.nodes
                    self.graph.add_link(mid, t, site.index)
                    if fresh:
                        worklist.push(t)
            if self.use_live_types:
                self._refresh_live(worklist)

    def _refresh_live(self, worklist: Worklist) -> None:
        live = propagate_live_types(self.model, self.graph)
        if live == self.live:
            return
        self.live = live
        for mid, old in list(self.targets.items()):
            if mid in worklist.enqueued:
                continue
            decl = self.model.method(mid)
            new = [resolve_targets(self.model, self.h, mid, s, live) for s in decl.call_sites]
            if new != old:
                worklist.push(mid)
                self.counters.reenqueues += 1


def classic_build(model: ProgramModel, use_live_types: bool = False, entries=None):
    """Build the call graph with the worklist algorithm.

    Returns ``(graph, counters)``. ``entries`` defaults to every ``main``.
    """
    h = build_hierarchy(model)
    if entries is None:
        entries = find_entry_points(model)
    graph = CallGraph()
    for e in entries:
        graph.add_entry(e)
    builder = _Builder(model, h, graph, use_live_types)
    builder.run(Worklist(entries))
    log.debug("classic build: %s", builder.counters)
    return graph, builder.counters


def classic_incremental(model: ProgramModel, prior: CallGraph, edited: MethodId):
    """Update ``prior`` after the body of ``edited`` changed.

    Only the edited method and methods that become newly reachable through
    it are processed; methods no longer reachable are pruned afterwards.
    """
    model.method(edited)  # raises UnknownMethodError
    graph = prior.copy()
    builder = _Builder(model, build_hierarchy(model), graph)
    if edited in reachable_methods(prior):
        graph.remove_outgoing(edited)
        builder.run(Worklist([edited]))
        graph.restrict(reachable_methods(graph))
    return graph, builder.counters
