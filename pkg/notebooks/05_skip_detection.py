# %% [markdown]
# # Detecting skipped returns
#
# If a method hands control back without its frame being popped, the stack
# is not empty once the root is done. The builder reports this as a
# SkipFault listing the frames left behind. Here a Traversal subclass
# stands in for a faulty return path.

# %%
from krabcg import SkipFault, build_hierarchy, krab_build, parse_program
from krabcg.bench import generate_program
from krabcg.frontend import MethodId
from krabcg.krab import Traversal


class LeakyTraversal(Traversal):
    leaks = 2

    def pop(self, index):
        if index > 0 and self.leaks:
            self.leaks -= 1
            frame = self.state.stack[index]
            frame.returned = True
            return frame
        return super().pop(index)


model = parse_program(generate_program("flat", 5))
h = build_hierarchy(model)
try:
    krab_build(model, h, MethodId("Main", "main"), traversal_cls=LeakyTraversal)
except SkipFault as fault:
    print(fault)
    print([str(f.method) for f in fault.residual])

# %%
graph, state = krab_build(model, h, MethodId("Main", "main"))
print("clean run: pushes", state.pushes, "pops", state.pops, "stack", state.stack)
