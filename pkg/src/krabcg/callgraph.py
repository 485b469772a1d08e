"""Call graph value shared by both builders, plus reachability analyses and
DOT / JSON exporters."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

from .frontend import MethodId


class CallEdge(NamedTuple):
    caller: MethodId
    callee: MethodId
    site: int


@dataclass
class CallGraph:
    """Per-method nodes with site-labelled call edges.

    Direct self-calls are kept as a single self-loop marker per method rather
    than as call edges. Predecessor edges (child -> DFS parent) come only from
    the stack traversal and form a forest.
    """

    nodes: set = field(default_factory=set)
    call_edges: set = field(default_factory=set)
    self_loops: set = field(default_factory=set)
    predecessor_edges: dict = field(default_factory=dict)  # child -> parent
    entries: set = field(default_factory=set)

    def add_node(self, mid: MethodId) -> None:
        self.nodes.add(mid)

    def add_entry(self, mid: MethodId) -> None:
        self.nodes.add(mid)
        self.entries.add(mid)

    def add_link(self, caller: MethodId, callee: MethodId, site: int) -> "CallGraph":
        self.nodes.add(caller)
        self.nodes.add(callee)
        if caller == callee:
            self.self_loops.add(caller)
        else:
            self.call_edges.add(CallEdge(caller, callee, site))
        return self

    def add_predecessor(self, child: MethodId, parent: MethodId) -> bool:
        """Record ``child -> parent`` unless the child already has a parent or
        the edge would close a cycle. Returns whether it was added."""
        if child in self.predecessor_edges or child == parent:
            return False
        p = parent
        while p is not None:
            if p == child:
                return False
            p = self.predecessor_edges.get(p)
        self.predecessor_edges[child] = parent
        self.nodes.add(child)
        self.nodes.add(parent)
        return True

    def remove_outgoing(self, mid: MethodId) -> None:
        self.call_edges = {e for e in self.call_edges if e.caller != mid}
        self.self_loops.discard(mid)

    def successors(self) -> dict:
        succ: dict = {}
        for e in self.call_edges:
            succ.setdefault(e.caller, set()).add(e.callee)
        return succ

    def restrict(self, keep) -> None:
        """Drop every node outside ``keep`` along with its edges."""
        keep = set(keep)
        self.nodes &= keep
        self.entries &= keep
        self.self_loops &= keep
        self.call_edges = {e for e in self.call_edges if e.caller in keep and e.callee in keep}
        self.predecessor_edges = {
            c: p for c, p in self.predecessor_edges.items() if c in keep and p in keep
        }

    def union(self, other: "CallGraph") -> "CallGraph":
        self.nodes |= other.nodes
        self.entries |= other.entries
        self.self_loops |= other.self_loops
        self.call_edges |= other.call_edges
        for child, parent in sorted(other.predecessor_edges.items()):
            self.add_predecessor(child, parent)
        return self

    def copy(self) -> "CallGraph":
        return CallGraph(
            set(self.nodes),
            set(self.call_edges),
            set(self.self_loops),
            dict(self.predecessor_edges),
            set(self.entries),
        )


def add_link(g: CallGraph, caller: MethodId, callee: MethodId, site: int) -> CallGraph:
    return g.add_link(caller, callee, site)


def reachable_methods(g: CallGraph, roots=None) -> set:
    """Methods reachable from ``roots`` (default: the entries) along call edges."""
    succ = g.successors()
    seen = set(g.entries if roots is None else roots)
    todo = list(seen)
    while todo:
        for nxt in succ.get(todo.pop(), ()):
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen


def connected_components(g: CallGraph) -> list[list[MethodId]]:
    """Weakly connected components, each sorted, ordered by smallest member."""
    parent = {n: n for n in g.nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.call_edges:
        a, b = find(e.caller), find(e.callee)
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict = {}
    for n in g.nodes:
        groups.setdefault(find(n), []).append(n)
    return sorted((sorted(members) for members in groups.values()), key=lambda c: c[0])


def unreachable_methods(model, g: CallGraph) -> set:
    live = reachable_methods(g)
    return {mid for mid in model.method_ids() if mid not in live}


def graphs_equal(g1: CallGraph, g2: CallGraph) -> bool:
    """Semantic equality: site indices and predecessor edges are ignored."""
    return (
        g1.nodes == g2.nodes
        and g1.self_loops == g2.self_loops
        and g1.entries == g2.entries
        and _edge_multiset(g1) == _edge_multiset(g2)
    )


def _edge_multiset(g: CallGraph) -> Counter:
    return Counter((e.caller, e.callee) for e in g.call_edges)


def graph_diff(g1: CallGraph, g2: CallGraph) -> list[str]:
    """Human-readable differences, empty when ``graphs_equal`` holds."""
    out = []
    for label, a, b in (
        ("node", g1.nodes, g2.nodes),
        ("self-loop", g1.self_loops, g2.self_loops),
        ("entry", g1.entries, g2.entries),
    ):
        out += [f"- {label} {m}" for m in sorted(a - b)]
        out += [f"+ {label} {m}" for m in sorted(b - a)]
    e1, e2 = _edge_multiset(g1), _edge_multiset(g2)
    for (caller, callee), count in sorted((e1 - e2).items()):
        out.append(f"- edge {caller} -> {callee} (x{count})")
    for (caller, callee), count in sorted((e2 - e1).items()):
        out.append(f"+ edge {caller} -> {callee} (x{count})")
    return out


def _q(mid: MethodId) -> str:
    return f'"{mid}"'


def export_dot(g: CallGraph) -> str:
    lines = ["digraph callgraph {"]
    for n in sorted(g.nodes):
        attrs = " [peripheries=2]" if n in g.entries else ""
        lines.append(f"  {_q(n)}{attrs};")
    for e in sorted(g.call_edges):
        lines.append(f"  {_q(e.caller)} -> {_q(e.callee)};")
    for n in sorted(g.self_loops):
        lines.append(f"  {_q(n)} -> {_q(n)};")
    for child, par in sorted(g.predecessor_edges.items()):
        lines.append(f"  {_q(child)} -> {_q(par)} [style=dashed, role=pred];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dict(g: CallGraph) -> dict:
    return {
        "nodes": [str(n) for n in sorted(g.nodes)],
        "edges": [[str(e.caller), str(e.callee), e.site] for e in sorted(g.call_edges)],
        "self_loops": [str(n) for n in sorted(g.self_loops)],
        "predecessor_edges": [
            [str(c), str(p)] for c, p in sorted(g.predecessor_edges.items())
        ],
        "entries": [str(n) for n in sorted(g.entries)],
    }


def graph_from_dict(data: dict) -> CallGraph:
    g = CallGraph()
    for n in data.get("nodes", ()):
        g.add_node(MethodId.parse(n))
    for n in data.get("entries", ()):
        g.add_entry(MethodId.parse(n))
    for caller, callee, site in data.get("edges", ()):
        g.add_link(MethodId.parse(caller), MethodId.parse(callee), site)
    for n in data.get("self_loops", ()):
        g.self_loops.add(MethodId.parse(n))
    for child, parent in data.get("predecessor_edges", ()):
        g.add_predecessor(MethodId.parse(child), MethodId.parse(parent))
    return g


def export_json(g: CallGraph) -> str:
    return json.dumps(graph_to_dict(g), indent=2) + "\n"
