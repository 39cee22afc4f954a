"""
Hardness gadgets and the classification table
=============================================

The edge gadget turns a QCSP over K_n into an instance where every variable
needs n witnesses over K_2n.  The table below checks the gadget at n = 3 by
playing out the residual game for every pair of endpoint colours.
"""

# %%
from countcsp.reductions import gadget_table

table = gadget_table(3)
print("    " + " ".join(str(c) for c in range(1, 7)))
for x in range(1, 7):
    row = ["W" if table[(x, y)][0] else "." for y in range(1, 7)]
    print(f"x={x} " + " ".join(row))
print("all cells match the expected pattern:", all(a == b for a, b in table.values()))

# %%
# Lifting a small source instance and checking that the answer survives.
from countcsp.formula import Instance, complete_graph
from countcsp.oracle import decide
from countcsp.reductions import lift_to_k2n

src = Instance([("p", 3), ("r", 1)], [("p", "r")])
lifted = lift_to_k2n(src, 3)
print(len(lifted), "variables;", decide(src, complete_graph(3)), "->", decide(lifted, complete_graph(6)))

# %%
# The cycle construction is only checked structurally.
from countcsp.reductions import endpoint_distance, lift_to_cycle_with_layout, validate_cycle

src = Instance([("x", 1), ("y", 1)], [("x", "y")])
for j in (3, 4, 5):
    out, layout = lift_to_cycle_with_layout(src, j)
    report = validate_cycle(src, j, out, layout)
    print(f"j={j}: {report}, x-y distance {endpoint_distance(out, 'x', 'y')}")

# %%
# A few classification labels.
from countcsp.classify import classify
from countcsp.formula import named_template

for spec, X in [("k4", {2}), ("k6", {3}), ("k3", {1, 2}), ("cycle6", {1, 2}), ("cycle4", {1, 2}),
                ("path7", {1, 2}), ("p100", {1, 2}), ("p101", {1, 2}), ("infpath", {1, 2})]:
    print(f"{spec:8s} {sorted(X)}  {classify(named_template(spec), X)}")
