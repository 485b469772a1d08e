"""Synthetic MiniJ programs and a counter harness that sets measured
traversal costs beside the closed-form model."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import NamedTuple

from .classic import classic_build
from .costmodel import krab_cost
from .frontend import Delta, MethodId, ProgramModel, parse_body, parse_program
from .hierarchy import build_hierarchy
from .krab import krab_build

SHAPES = ("flat", "chain", "mixed")
# which cost-model case each shape realises
SHAPE_CASE = {"flat": "best", "chain": "worst", "mixed": "average"}

CSV_HEADER = (
    "shape,n,steps,weighted_steps,model,classic_methods,classic_resolutions,classic_reenqueues"
)


def nested_head_count(n: int) -> int:
    return int(math.floor(math.log(n))) if n > 1 else 0


def _class_text(name: str, bodies: list) -> str:
    lines = [f"class {name} {{"]
    for mname, calls in bodies:
        if calls:
            lines.append(f"    def {mname}() {{")
            lines += [f"        {c}();" for c in calls]
            lines.append("    }")
        else:
            lines.append(f"    def {mname}() {{ }}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def generate_program(shape: str, n: int, seed: int = 0) -> str:
    """MiniJ source with exactly ``n`` call sites, all reachable from ``main``.

    flat: main calls n distinct empty methods.
    chain: main -> f1 -> f2 -> ... -> fn.
    mixed: floor(ln n) of main's callees head a nested sub-chain; together
    the sub-chains hold about half the calls, the rest are flat. Chain
    lengths and head positions come from ``seed``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if shape == "flat":
        names = [f"f{i}" for i in range(1, n + 1)]
        return _class_text("Main", [("main", names)] + [(f, []) for f in names])
    if shape == "chain":
        bodies = [("main", ["f1"])]
        bodies += [(f"f{i}", [f"f{i + 1}"]) for i in range(1, n)]
        bodies.append((f"f{n}", []))
        return _class_text("Main", bodies)
    if shape != "mixed":
        raise ValueError(f"unknown shape {shape!r}; expected one of {SHAPES}")

    rng = random.Random(seed)
    heads = nested_head_count(n)
    if heads == 0:
        return generate_program("flat", n)
    budget = n // 2
    cuts = sorted(rng.sample(range(1, budget), heads - 1)) if heads > 1 else []
    lengths = [b - a for a, b in zip([0] + cuts, cuts + [budget])]
    main_sites = n - budget
    head_slots = set(rng.sample(range(main_sites), heads))

    main_calls, bodies = [], []
    flat_i = head_i = 0
    for slot in range(main_sites):
        if slot in head_slots:
            head_i += 1
            length = lengths[head_i - 1]
            chain = [f"h{head_i}"] + [f"h{head_i}_{j}" for j in range(1, length + 1)]
            main_calls.append(chain[0])
            bodies += [(a, [b]) for a, b in zip(chain, chain[1:])]
            bodies.append((chain[-1], []))
        else:
            flat_i += 1
            main_calls.append(f"f{flat_i}")
            bodies.append((f"f{flat_i}", []))
    return _class_text("Main", [("main", main_calls)] + bodies)


class BenchRow(NamedTuple):
    shape: str
    n: int
    steps: int
    weighted_steps: int
    model_value: float
    classic_methods: int
    classic_resolutions: int
    classic_reenqueues: int


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)

    def to_csv(self) -> str:
        out = [CSV_HEADER]
        for r in self.rows:
            model = f"{r.model_value:.3f}" if r.shape == "mixed" else str(r.model_value)
            out.append(
                f"{r.shape},{r.n},{r.steps},{r.weighted_steps},{model},"
                f"{r.classic_methods},{r.classic_resolutions},{r.classic_reenqueues}"
            )
        return "\n".join(out) + "\n"


def run_bench(shapes=SHAPES, sizes=(200, 400, 600, 800, 1000), seed: int = 0) -> BenchReport:
    report = BenchReport()
    for shape in shapes:
        for n in sizes:
            model = parse_program(generate_program(shape, n, seed))
            h = build_hierarchy(model)
            _, state = krab_build(model, h, MethodId("Main", "main"))
            _, counters = classic_build(model)
            report.rows.append(
                BenchRow(
                    shape,
                    n,
                    state.steps,
                    state.weighted_steps,
                    krab_cost(n, SHAPE_CASE[shape]),
                    counters.methods_processed,
                    counters.resolutions,
                    counters.reenqueues,
                )
            )
    return report


# ---------------------------------------------------------------------------
# random programs for equivalence and incremental checks

_METHOD_POOL = tuple(f"m{i}" for i in range(8))


def random_program(seed: int, max_classes: int = 30, max_depth: int = 4) -> str:
    """A random well-formed MiniJ unit.

    Hierarchies are at most ``max_depth`` extends-links deep. Bodies mix
    implicit-receiver and local-receiver calls, so direct and mutual
    recursion and polymorphic sites all occur. ``C0`` always has ``main``.
    """
    rng = random.Random(seed)
    n_classes = rng.randint(1, max_classes)
    names = [f"C{i}" for i in range(n_classes)]
    parent: dict = {}
    depth = {}
    for i, c in enumerate(names):
        candidates = [p for p in names[:i] if depth[p] < max_depth]
        if candidates and rng.random() < 0.7:
            parent[c] = rng.choice(candidates)
            depth[c] = depth[parent[c]] + 1
        else:
            parent[c] = None
            depth[c] = 0

    declared = {}
    for c in names:
        ms = rng.sample(_METHOD_POOL, rng.randint(0, 4))
        if c == "C0" or rng.random() < 0.1:
            ms.append("main")
        declared[c] = ms

    def visible(c):
        out = set()
        while c is not None:
            out.update(declared[c])
            c = parent[c]
        return sorted(out)

    out = []
    for c in names:
        head = f"class {c}" + (f" extends {parent[c]}" if parent[c] else "") + " {"
        out.append(head)
        for m in declared[c]:
            out.append(f"    def {m}() {{")
            out += [f"        {s}" for s in _random_body(rng, c, m, names, visible)]
            out.append("    }")
        out.append("}")
    return "\n".join(out) + "\n"


def _random_body(rng, cname, mname, class_names, visible) -> list[str]:
    stmts = []
    locals_ = {}
    for k in range(rng.randint(0, 2)):
        t = rng.choice(class_names)
        if visible(t):
            locals_[f"x{k}"] = t
            stmts.append(f"var x{k}: {t};")
    for _ in range(rng.randint(0, 1)):
        stmts.append(f"new {rng.choice(class_names)};")
    own = visible(cname)
    for _ in range(rng.randint(0, 4)):
        r = rng.random()
        if r < 0.15:
            stmts.append(f"{mname}();")
        elif locals_ and r < 0.55:
            x = rng.choice(sorted(locals_))
            stmts.append(f"{x}.{rng.choice(visible(locals_[x]))}();")
        elif own:
            stmts.append(f"{rng.choice(own)}();")
    return stmts


def random_edit(model: ProgramModel, rng: random.Random) -> Delta:
    """Replace one randomly chosen method body with a fresh random one."""
    mids = model.method_ids()
    mid = rng.choice(mids)
    class_names = list(model.classes)
    h = build_hierarchy(model)

    def visible(c):
        out = set()
        for a in h.ancestors(c):
            out.update(h.declared[a])
        return sorted(out)

    stmts = _random_body(rng, mid.class_name, mid.method_name, class_names, visible)
    return Delta(mid, parse_body("{ " + " ".join(stmts) + " }"))
