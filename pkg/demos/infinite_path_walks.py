"""
Looping walks and the infinite path
===================================

A {1,2}-instance is true on the infinite path exactly when it has no bad
looping walk.  This script builds the nine-variable example that has two bad
walks, prints the distance table, and then plays the game to watch the
Adversary win.
"""

# %%
# The example instance.  Counts: v1 is existential, v2 needs two witnesses.
from countcsp.formula import infinite_path, serialize_instance, two_bad_walks_instance

inst = two_bad_walks_instance()
print(serialize_instance(inst))

# %%
# The distance table is filled in one sweep from the last variable to the
# first.  Infinite entries mean no looping walk joins the pair.
import numpy as np

from countcsp.infpath import delta_table, infinite_path_certificate, walk_lambda

table = delta_table(inst, early_exit=False)
with np.printoptions(linewidth=120):
    print(table.matrix)

# %%
# The obstruction: a walk from v1 to v2 whose score is at most count(v2) - 2.
cert = infinite_path_certificate(inst)
print(cert["reason"], " -> ".join(cert["walk"]), "score", cert["lambda"])

# The shorter walk through v9, v8, v7 only has one count-2 interior entry,
# so its score is 4 - 2 = 2, which is not low enough on its own.
print("short walk score:", walk_lambda(inst, ["v1", "v9", "v8", "v7", "v2"]))

# %%
# The oracle agrees.  On the infinite path it plays on a long enough finite
# path; both sides then play perfectly.
from countcsp.cli import run_play

run_play(inst, infinite_path(), "none", input, print)

# %%
# Remove the atom v2-v7 and the instance becomes true.  The window strategy
# (offer the top of the feasible interval, and two below it) then wins.
from countcsp.formula import Instance
from countcsp.infpath import decide_infinite_path, infpath_prover_offers
from countcsp.oracle import count_plays

easier = Instance(inst.variables, [a for a in inst.atoms if set(a) != {"v2", "v7"}])
print("without v2-v7:", decide_infinite_path(easier))
t = delta_table(easier)
won, lost = count_plays(easier, infinite_path(), lambda s: infpath_prover_offers(s, t))
print(f"window strategy: {won} plays won, {lost} lost")
