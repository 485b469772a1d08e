# %% [markdown]
# # Incremental updates after a method edit
#
# An edit replaces one method body. Both builders then redo only the
# edited method plus anything that becomes newly reachable through it, and
# prune whatever is no longer reachable.

# %%
from krabcg import (
    apply_edit,
    build_hierarchy,
    classic_build,
    classic_incremental,
    graphs_equal,
    krab_incremental,
    krab_multi_entry,
    parse_patch,
    parse_program,
)

SOURCE = """
class A {
    def main() { f(); g(); }
    def f() { h(); }
    def g() { }
    def h() { }
    def k() { }
}
"""
PATCH = """
@@ A.f
def f() {
    k();
    f();
}
"""
model = parse_program(SOURCE)
h = build_hierarchy(model)
delta = parse_patch(PATCH)
edited = apply_edit(model, delta)

# %%
prior, _ = classic_build(model)
updated, inc = classic_incremental(edited, prior, delta.method)
full, rebuilt = classic_build(edited)
print("classic matches rebuild:", graphs_equal(updated, full))
print("methods processed: incremental", inc.methods_processed, "rebuild", rebuilt.methods_processed)
print("dropped:", sorted(map(str, prior.nodes - updated.nodes)))

# %%
prior_k, _ = krab_multi_entry(model, h)
updated_k, st = krab_incremental(edited, h, prior_k, delta.method)
print("krab matches rebuild:", graphs_equal(updated_k, krab_multi_entry(edited, h)[0]))
print("re-traversal pushes:", st.pushes, "self-loops:", sorted(map(str, updated_k.self_loops)))
