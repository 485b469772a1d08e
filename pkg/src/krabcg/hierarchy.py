"""Inheritance graph and Class Hierarchy Analysis call resolution."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .callgraph import reachable_methods
from .errors import UnknownClassError, UnresolvedTargetError
from .frontend import CallSite, MethodId, ProgramModel


@dataclass(frozen=True)
class ClassHierarchy:
    parent: dict = field(default_factory=dict)
    children: dict = field(default_factory=dict)
    # class -> method names it declares, for lookup without the model
    declared: dict = field(default_factory=dict)

    def __contains__(self, cname) -> bool:
        return cname in self.parent

    def ancestors(self, cname: str):
        """``cname`` followed by its superclasses, nearest first."""
        c: Optional[str] = cname
        while c is not None:
            yield c
            c = self.parent[c]

    def lookup(self, cname: str, method_name: str) -> Optional[MethodId]:
        """The definition of ``method_name`` that instances of ``cname`` run."""
        for c in self.ancestors(cname):
            if method_name in self.declared[c]:
                return MethodId(c, method_name)
        return None


@dataclass(frozen=True)
class LiveTypeSet:
    classes: frozenset = frozenset()

    def __contains__(self, cname) -> bool:
        return cname in self.classes

    def __len__(self) -> int:
        return len(self.classes)


def build_hierarchy(model: ProgramModel) -> ClassHierarchy:
    parent = {}
    children: dict = {}
    declared = {}
    for cls in model.classes.values():
        parent[cls.name] = cls.superclass
        children.setdefault(cls.name, set())
        declared[cls.name] = frozenset(cls.methods)
    for cls in model.classes.values():
        if cls.superclass is not None:
            children[cls.superclass].add(cls.name)
    return ClassHierarchy(
        parent, {c: frozenset(kids) for c, kids in children.items()}, declared
    )


def cone(h: ClassHierarchy, cname: str) -> list[str]:
    """``cname`` and all of its transitive subclasses, sorted."""
    if cname not in h:
        raise UnknownClassError(f"unknown class {cname!r}")
    seen = {cname}
    todo = [cname]
    while todo:
        for kid in h.children[todo.pop()]:
            if kid not in seen:
                seen.add(kid)
                todo.append(kid)
    return sorted(seen)


def resolve_targets(
    model: ProgramModel,
    h: ClassHierarchy,
    caller: MethodId,
    site: CallSite,
    live: Optional[LiveTypeSet] = None,
) -> list[MethodId]:
    """Possible callees of ``site`` inside ``caller``, sorted.

    An implicit receiver binds statically to the nearest definition above the
    caller's class. A local receiver dispatches over the cone of its static
    type; when ``live`` is given, only classes in it contribute targets.
    """
    if site.is_self:
        target = h.lookup(caller.class_name, site.target_name)
        if target is None:
            raise UnresolvedTargetError(caller, site.index, site.target_name)
        return [target]

    static_type = model.method(caller).locals[site.receiver]
    if h.lookup(static_type, site.target_name) is None:
        raise UnresolvedTargetError(
            caller, site.index, site.target_name, f"{static_type} has no such method"
        )
    targets = set()
    for c in cone(h, static_type):
        if live is not None and c not in live:
            continue
        targets.add(h.lookup(c, site.target_name))
    return sorted(targets)


def propagate_live_types(model: ProgramModel, graph) -> LiveTypeSet:
    """Classes instantiated by any method reachable from the entries."""
    live: set = set()
    for mid in reachable_methods(graph):
        if model.has_method(mid):
            live.update(model.method(mid).instantiations)
    return LiveTypeSet(frozenset(live))
