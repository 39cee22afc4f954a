"""
Two witnesses on K4: the closure rules
======================================

When every variable needs two witnesses, K4 instances are decided by closing
three sets (pairs that must differ, triples that must repeat a colour, triples
that must avoid both colours) and looking for a forbidden pattern.
"""

# %%
from countcsp.formula import Instance, complete_graph
from countcsp.k4 import closure, k4_certificate, k4_prover_offers
from countcsp.oracle import count_plays, decide

K4 = complete_graph(4)

# p, q, w, r in that order; r is adjacent to everything before it and q-w is an edge.
inst = Instance([(v, 2) for v in "pqwr"], [("p", "r"), ("q", "r"), ("w", "r"), ("q", "w")])
sets = closure(inst).named()
for key in ("F", "R+", "R-"):
    print(key, sorted(sets[key]))

# %%
# r must avoid the colours of p and q (pqr in R-).  Because w is also next
# to r, the closure puts pqw in R+, while the atom q-w keeps qw in F.  That
# combination is one of the forbidden patterns.
print(k4_certificate(inst))
print("oracle:", decide(inst, K4))

# %%
# Drop q-w and Prover's four-step strategy wins every branch.
easier = Instance(inst.variables, [a for a in inst.atoms if set(a) != {"q", "w"}])
cs = closure(easier)
won, lost = count_plays(easier, K4, lambda s: k4_prover_offers(s, cs))
print(f"closure strategy: {won} plays won, {lost} lost; oracle says {decide(easier, K4)}")

# %%
# Timing against the oracle on random connected instances.
import random
import time

from countcsp import corpus
from countcsp.k4 import decide_k4

rng = random.Random(0)
for n in (6, 8, 10, 12):
    insts = [corpus.random_instance(rng, n, (2,), density=0.3, connected=True) for _ in range(5)]
    t0 = time.perf_counter()
    fast = [decide_k4(i) for i in insts]
    t1 = time.perf_counter()
    slow = [decide(i, K4) for i in insts]
    t2 = time.perf_counter()
    print(f"n={n:2d}  closure {1000 * (t1 - t0) / 5:7.2f} ms  oracle {1000 * (t2 - t1) / 5:8.2f} ms  agree={fast == slow}")
