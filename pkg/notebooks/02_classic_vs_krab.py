# %% [markdown]
# # Worklist versus stack traversal
#
# Both builders produce the same call graph. The stack traversal also
# records a return link from each method to the caller that first reached
# it, marks direct recursion with a single self-loop, and treats a call to
# a method already on the stack as a back edge.

# %%
from krabcg import (
    build_hierarchy,
    classic_build,
    connected_components,
    export_dot,
    graphs_equal,
    krab_build,
    parse_program,
    unreachable_methods,
)
from krabcg.frontend import MethodId

SOURCE = """
class A {
    def main() { walk(); even(); }
    def walk() { walk(); walk(); step(); }
    def step() { }
    def even() { odd(); }
    def odd() { even(); step(); }
    def unused() { helper(); }
    def helper() { }
}
"""
model = parse_program(SOURCE)
h = build_hierarchy(model)

g_classic, counters = classic_build(model)
g_krab, state = krab_build(model, h, MethodId("A", "main"))
print("equal:", graphs_equal(g_classic, g_krab))
print("classic counters:", counters.methods_processed, counters.resolutions)
print("krab steps:", state.steps, "weighted:", state.weighted_steps)

# %%
print(export_dot(g_krab))

# %% [markdown]
# `unused` is never called and `helper` is only called from `unused`.

# %%
print(sorted(map(str, unreachable_methods(model, g_krab))))
print([[str(m) for m in c] for c in connected_components(g_krab)])

# %% [markdown]
# With live-type pruning on, the worklist builder drops dispatch targets
# whose class is never instantiated in reachable code.

# %%
POLY = """
class Animal { def speak() { } }
class Dog extends Animal { def speak() { } }
class Cat extends Animal { def speak() { } }
class Main { def main() { var a: Animal; new Dog; a.speak(); } }
"""
poly = parse_program(POLY)
cha, _ = classic_build(poly)
rta, c = classic_build(poly, use_live_types=True)
print("CHA:", sorted(str(e.callee) for e in cha.call_edges))
print("RTA:", sorted(str(e.callee) for e in rta.call_edges), "re-enqueues:", c.reenqueues)
