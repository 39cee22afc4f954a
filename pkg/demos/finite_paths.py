"""
How far can the Adversary push?  Finite paths
=============================================

On the path 1..n the Prover wants values near the middle, and the Adversary
pushes them outwards.  Two displacement tables measure how far the Adversary
can push each variable.
"""

# %%
from countcsp.finpath import decide_path, gamma_tables
from countcsp.formula import Instance, path_graph
from countcsp.oracle import decide

# A path of five count-2 variables, listed left to right.
chain = Instance([(f"c{i}", 2) for i in range(5)], [(f"c{i}", f"c{i + 1}") for i in range(4)])
gt = gamma_tables(chain)
for x in chain.names:
    print(x, gt.colouring[x], "gamma", gt.gamma[x], "gamma'", gt.gamma_prime[x])

# %%
# The smallest path order that satisfies the chain, by the decider and the oracle.
for n in range(1, 13):
    fast, slow = decide_path(chain, n), decide(chain, path_graph(n))
    print(n, fast, slow)
    assert fast == slow

# %%
# The characterization for five-vertex paths built from first principles
# accepts the instance below, but the Adversary wins it.  The displacement
# rule gets it right, so the decider uses displacement from n = 4 upward.
tricky = Instance([("x1", 2), ("x2", 2), ("x3", 2), ("x4", 1)], [("x1", "x4"), ("x2", "x3"), ("x3", "x4")])
print("short rule:", decide_path(tricky, 5, method="short"))
print("displacement rule:", decide_path(tricky, 5, method="gamma"))
print("oracle:", decide(tricky, path_graph(5)))

# %%
# Simulate the two strategies: the Prover offers values nearest the centre,
# the Adversary takes the offered value farthest from it.  The play stays on
# the path exactly for the orders where the chain is a yes-instance.
from countcsp.finpath import path_adversary, path_prover, stays_on_path
from countcsp.formula import infinite_path
from countcsp.oracle import play

for n in (8, 9, 10, 11):
    result = play(chain, infinite_path(), path_prover(chain, n), path_adversary(n))
    print(n, decide_path(chain, n), result.assignment, "inside 1..n:", stays_on_path(result.assignment, n))
