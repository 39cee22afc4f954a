"""Brute-force looping-walk enumeration, written from the definition alone."""

import math


def is_looping(inst, walk):
    pos = inst.index

    def rec(lo, hi):
        a, b = walk[lo], walk[hi]
        if a == b:
            return False
        if hi - lo == 1:
            return True
        end = max(pos[a], pos[b])
        if any(pos[x] <= end for x in walk[lo + 1 : hi]):
            return False
        return any(rec(lo, m) and rec(m, hi) for m in range(lo + 1, hi))

    adjacent = all(tuple(sorted((a, b), key=pos.__getitem__)) in inst.atoms for a, b in zip(walk, walk[1:]))
    return adjacent and rec(0, len(walk) - 1)


def score(inst, walk):
    return len(walk) - 1 - 2 * sum(inst.count(x) - 1 for x in walk[1:-1])


def looping_walks(inst, u, v, max_edges):
    """Every looping walk from u to v with at most ``max_edges`` edges."""
    adj = {x: set() for x in inst.names}
    for a, b in inst.atoms:
        adj[a].add(b)
        adj[b].add(a)
    pos = inst.index
    end = max(pos[u], pos[v])
    out = []

    def grow(path):
        for y in adj[path[-1]]:
            if y == v:
                if is_looping(inst, path + [y]):
                    out.append(path + [y])
            elif pos[y] > end and len(path) < max_edges:
                grow(path + [y])

    grow([u])
    return out


def min_score(inst, u, v, max_edges):
    return min((score(inst, w) for w in looping_walks(inst, u, v, max_edges)), default=math.inf)
