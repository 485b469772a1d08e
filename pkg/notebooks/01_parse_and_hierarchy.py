# %% [markdown]
# # Parsing MiniJ and querying the class hierarchy
#
# MiniJ has classes, single inheritance, argument-free methods, typed locals,
# `new C;` statements and call statements. That is enough to exercise
# polymorphic dispatch and recursion.

# %%
from krabcg import build_hierarchy, cone, format_program, parse_program, resolve_targets
from krabcg.frontend import MethodId

SOURCE = """
class Shape {
    def draw() { outline(); }
    def outline() { }
}
class Circle extends Shape {
    def draw() { outline(); fill(); }
    def fill() { }
}
class Disc extends Circle { }
class Square extends Shape {
    def draw() { }
}
class App {
    def main() {
        var s: Shape;
        new Circle;
        s.draw();
    }
}
"""

model = parse_program(SOURCE)
print(list(model.classes))

# %% [markdown]
# The inheritance graph: `Shape` is the root with two direct subclasses.

# %%
h = build_hierarchy(model)
print(sorted(h.children["Shape"]))
print(cone(h, "Shape"), cone(h, "Circle"))

# %% [markdown]
# `s.draw()` dispatches over the cone of the static type `Shape`. `Disc`
# inherits `Circle.draw`, so three distinct targets remain.

# %%
main = MethodId("App", "main")
site = model.method(main).call_sites[0]
print([str(t) for t in resolve_targets(model, h, main, site)])

# %% [markdown]
# Pretty-printing produces canonical source that parses back to the same model.

# %%
text = format_program(model)
assert parse_program(text) == model
print(text)
