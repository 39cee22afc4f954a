"""Instances, template graphs, their text formats and a few graph utilities.

An :class:`Instance` is a sentence of the form ``Q1 x1 Q2 x2 ... Qn xn . psi``
where every ``Qi`` is a counting quantifier "there exist at least beta_i" and
``psi`` is a conjunction of edge atoms.  The declaration order of the
variables is the quantifier order.

A :class:`TemplateGraph` is either a finite undirected graph whose vertices
may carry loops, or the symbolic two-way infinite path over the integers.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Tuple

Vertex = Hashable

_NAME_RE = re.compile(r"[A-Za-z0-9_]+\Z")

BLACK = "black"
WHITE = "white"


class ParseError(ValueError):
    """Malformed instance or template text.  ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


def _check_name(name: str) -> None:
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise ValueError(f"invalid identifier {name!r}")


@dataclass(frozen=True)
class Instance:
    """Ordered counting-quantified variables plus a set of edge atoms.

    ``variables`` is a tuple of ``(name, count)`` pairs in quantifier order.
    ``atoms`` holds unordered pairs, stored as ``(a, b)`` with ``a`` not after
    ``b``; a loop atom is ``(x, x)``.
    """

    variables: Tuple[Tuple[str, int], ...]
    atoms: FrozenSet[Tuple[str, str]] = frozenset()

    def __init__(self, variables: Iterable[Tuple[str, int]], atoms: Iterable[Tuple[str, str]] = ()):
        variables = tuple((str(n), int(c)) for n, c in variables)
        index: Dict[str, int] = {}
        for name, count in variables:
            _check_name(name)
            if name in index:
                raise ValueError(f"duplicate variable {name!r}")
            if count < 1:
                raise ValueError(f"count of {name!r} must be at least 1, got {count}")
            index[name] = len(index)
        normalized = set()
        for a, b in atoms:
            for end in (a, b):
                if end not in index:
                    raise ValueError(f"atom endpoint {end!r} is not a declared variable")
            normalized.add((a, b) if index[a] <= index[b] else (b, a))
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "atoms", frozenset(normalized))

    # ------------------------------------------------------------------ views
    @cached_property
    def names(self) -> Tuple[str, ...]:
        return tuple(n for n, _ in self.variables)

    @cached_property
    def counts(self) -> Tuple[int, ...]:
        return tuple(c for _, c in self.variables)

    @cached_property
    def index(self) -> Dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    def __len__(self) -> int:
        return len(self.variables)

    def count(self, name: str) -> int:
        return self.counts[self.index[name]]

    @cached_property
    def index_atoms(self) -> Tuple[Tuple[int, int], ...]:
        """Atoms as sorted index pairs ``(i, j)`` with ``i <= j``, in a fixed order."""
        return tuple(sorted((self.index[a], self.index[b]) for a, b in self.atoms))

    @cached_property
    def neighbours(self) -> Tuple[FrozenSet[int], ...]:
        """Index adjacency, loops excluded."""
        adj: List[set] = [set() for _ in self.variables]
        for i, j in self.index_atoms:
            if i != j:
                adj[i].add(j)
                adj[j].add(i)
        return tuple(frozenset(s) for s in adj)

    @cached_property
    def looped(self) -> FrozenSet[int]:
        return frozenset(i for i, j in self.index_atoms if i == j)

    @property
    def has_loop(self) -> bool:
        return bool(self.looped)

    def earlier_neighbours(self, i: int) -> List[int]:
        return sorted(j for j in self.neighbours[i] if j < i)

    # --------------------------------------------------------------- editing
    def with_counts(self, counts: Dict[str, int]) -> "Instance":
        return Instance([(n, counts.get(n, c)) for n, c in self.variables], self.atoms)

    def restrict(self, names: Iterable[str]) -> "Instance":
        """Sub-instance induced by ``names``, keeping the relative order."""
        keep = set(names)
        return Instance(
            [(n, c) for n, c in self.variables if n in keep],
            [(a, b) for a, b in self.atoms if a in keep and b in keep],
        )

    def __repr__(self) -> str:
        vs = " ".join(f"{n}:{c}" for n, c in self.variables)
        es = " ".join(f"{a}-{b}" for a, b in sorted(self.atoms, key=lambda e: (self.index[e[0]], self.index[e[1]])))
        return f"Instance({vs} | {es})"


# ---------------------------------------------------------------------------
# Templates
# ---------------------------------------------------------------------------

FINITE = "finite"
INFINITE_PATH = "infinite-path"


@dataclass(frozen=True)
class TemplateGraph:
    kind: str = FINITE
    vertices: Tuple[Vertex, ...] = ()
    edges: FrozenSet[FrozenSet] = frozenset()
    loops: FrozenSet[Vertex] = frozenset()
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in (FINITE, INFINITE_PATH):
            raise ValueError(f"unknown template kind {self.kind!r}")
        if self.kind == INFINITE_PATH:
            return
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ValueError("duplicate template vertex")
        clean = set()
        loops = set(self.loops)
        for e in self.edges:
            e = frozenset(e)
            if not e <= vset:
                raise ValueError(f"edge {set(e)} uses an undeclared vertex")
            if len(e) == 1:
                loops |= e
            else:
                clean.add(e)
        if not loops <= vset:
            raise ValueError("loop on an undeclared vertex")
        object.__setattr__(self, "edges", frozenset(clean))
        object.__setattr__(self, "loops", frozenset(loops))

    @property
    def is_finite(self) -> bool:
        return self.kind == FINITE

    def __len__(self) -> int:
        if not self.is_finite:
            raise TypeError("the infinite path has no finite order")
        return len(self.vertices)

    @cached_property
    def adjacency(self) -> Dict[Vertex, FrozenSet[Vertex]]:
        """Neighbourhoods with loops included (a looped vertex is its own neighbour)."""
        adj: Dict[Vertex, set] = {v: set() for v in self.vertices}
        for e in self.edges:
            a, b = tuple(e)
            adj[a].add(b)
            adj[b].add(a)
        for v in self.loops:
            adj[v].add(v)
        return {v: frozenset(s) for v, s in adj.items()}

    def adjacent(self, a: Vertex, b: Vertex) -> bool:
        if not self.is_finite:
            return isinstance(a, int) and isinstance(b, int) and abs(a - b) == 1
        return b in self.adjacency.get(a, ())

    @property
    def is_irreflexive(self) -> bool:
        return not self.loops

    def without(self, vertex: Vertex) -> "TemplateGraph":
        vs = tuple(v for v in self.vertices if v != vertex)
        return TemplateGraph(
            FINITE,
            vs,
            frozenset(e for e in self.edges if vertex not in e),
            frozenset(v for v in self.loops if v != vertex),
        )

    def relabel(self, mapping: Dict[Vertex, Vertex]) -> "TemplateGraph":
        return TemplateGraph(
            FINITE,
            tuple(mapping[v] for v in self.vertices),
            frozenset(frozenset(mapping[v] for v in e) for e in self.edges),
            frozenset(mapping[v] for v in self.loops),
        )

    def __repr__(self) -> str:
        if self.name:
            return f"TemplateGraph({self.name})"
        if not self.is_finite:
            return "TemplateGraph(infpath)"
        es = sorted(tuple(sorted(map(str, e))) for e in self.edges)
        return f"TemplateGraph(V={list(self.vertices)}, E={es}, loops={sorted(map(str, self.loops))})"


def complete_graph(n: int) -> TemplateGraph:
    vs = tuple(range(1, n + 1))
    es = frozenset(frozenset((a, b)) for a in vs for b in vs if a < b)
    return TemplateGraph(FINITE, vs, es, name=f"k{n}")


def path_graph(n: int) -> TemplateGraph:
    """P_n on vertices 1..n."""
    if n < 1:
        raise ValueError("a path needs at least one vertex")
    vs = tuple(range(1, n + 1))
    return TemplateGraph(FINITE, vs, frozenset(frozenset((i, i + 1)) for i in vs[:-1]), name=f"path{n}")


def cycle_graph(n: int) -> TemplateGraph:
    if n < 3:
        raise ValueError("a cycle needs at least three vertices")
    vs = tuple(range(1, n + 1))
    es = frozenset(frozenset((i, i % n + 1)) for i in vs)
    return TemplateGraph(FINITE, vs, es, name=f"cycle{n}")


def infinite_path() -> TemplateGraph:
    return TemplateGraph(INFINITE_PATH, name="infpath")


def p100() -> TemplateGraph:
    """Path 0-1-2 with a loop at 0."""
    return TemplateGraph(FINITE, (0, 1, 2), frozenset({frozenset((0, 1)), frozenset((1, 2))}), frozenset({0}), name="p100")


def p10() -> TemplateGraph:
    return TemplateGraph(FINITE, (0, 1), frozenset({frozenset((0, 1))}), frozenset({0}), name="p10")


def p101() -> TemplateGraph:
    return TemplateGraph(FINITE, (0, 1, 2), frozenset({frozenset((0, 1)), frozenset((1, 2))}), frozenset({0, 2}), name="p101")


_NAMED = re.compile(r"(k|path|cycle)(\d+)\Z")


def inline_template(spec: str) -> TemplateGraph:
    """Parse ``graph:<item>,<item>,...`` where an item is ``a-b`` (edge), ``a-a`` (loop) or ``a``.

    Vertices are listed in order of first mention.
    """
    body = spec[len("graph:"):]
    vertices: List[str] = []
    edges, loops = set(), set()
    for item in filter(None, (part.strip() for part in body.split(","))):
        ends = item.split("-")
        if len(ends) > 2 or not all(_NAME_RE.match(e) for e in ends):
            raise ValueError(f"bad item {item!r} in {spec!r}")
        for e in ends:
            if e not in vertices:
                vertices.append(e)
        if len(ends) == 2:
            if ends[0] == ends[1]:
                loops.add(ends[0])
            else:
                edges.add(frozenset(ends))
    if not vertices:
        raise ValueError(f"{spec!r} names no vertices")
    return TemplateGraph(FINITE, tuple(vertices), frozenset(edges), frozenset(loops), name=spec)


def named_template(spec: str) -> TemplateGraph:
    """Resolve ``k<N>``, ``path<N>``, ``cycle<N>``, ``infpath``, ``p100``, ``p10``, ``p101``
    or an inline ``graph:`` description."""
    if spec.startswith("graph:"):
        return inline_template(spec)
    fixed = {"infpath": infinite_path, "p100": p100, "p10": p10, "p101": p101}
    if spec in fixed:
        return fixed[spec]()
    m = _NAMED.match(spec)
    if not m:
        raise ValueError(f"unknown template name {spec!r}")
    kind, n = m.group(1), int(m.group(2))
    if n < 1:
        raise ValueError(f"template size must be positive in {spec!r}")
    return {"k": complete_graph, "path": path_graph, "cycle": cycle_graph}[kind](n)


# ---------------------------------------------------------------------------
# Text formats
# ---------------------------------------------------------------------------

def _tokens(line: str) -> Iterator[Tuple[str, int]]:
    """Yield ``(token, column)`` with 1-based columns, stopping at a comment."""
    for m in re.finditer(r"\S+", line):
        if m.group().startswith("#"):
            return
        yield m.group(), m.start() + 1


def _directives(text: str) -> Iterator[Tuple[int, List[Tuple[str, int]]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = list(_tokens(raw))
        if toks:
            yield lineno, toks


def _name_token(tok: str, line: int, col: int) -> str:
    if not _NAME_RE.match(tok):
        raise ParseError(f"invalid identifier {tok!r}", line, col)
    return tok


def parse_instance(text: str) -> Instance:
    variables: List[Tuple[str, int]] = []
    declared: Dict[str, int] = {}
    atoms: List[Tuple[str, str]] = []
    for line, toks in _directives(text):
        word, col = toks[0]
        if word == "var":
            if len(toks) != 3:
                raise ParseError("expected 'var <name> <count>'", line, col)
            name = _name_token(toks[1][0], line, toks[1][1])
            if name in declared:
                raise ParseError(f"duplicate variable {name!r}", line, toks[1][1])
            ctok, ccol = toks[2]
            if not re.fullmatch(r"[+-]?\d+", ctok):
                raise ParseError(f"count must be an integer, got {ctok!r}", line, ccol)
            count = int(ctok)
            if count < 1:
                raise ParseError(f"count must be at least 1, got {count}", line, ccol)
            declared[name] = line
            variables.append((name, count))
        elif word == "edge":
            if len(toks) != 3:
                raise ParseError("expected 'edge <name> <name>'", line, col)
            ends = []
            for tok, tcol in toks[1:]:
                name = _name_token(tok, line, tcol)
                if name not in declared:
                    raise ParseError(f"undeclared variable {name!r}", line, tcol)
                ends.append(name)
            atoms.append((ends[0], ends[1]))
        else:
            raise ParseError(f"unknown directive {word!r}", line, col)
    return Instance(variables, atoms)


def serialize_instance(inst: Instance) -> str:
    lines = [f"var {n} {c}" for n, c in inst.variables]
    for i, j in inst.index_atoms:
        lines.append(f"edge {inst.names[i]} {inst.names[j]}")
    return "\n".join(lines) + "\n"


def parse_template(text: str) -> TemplateGraph:
    vertices: List[str] = []
    loops = set()
    edges = set()
    for line, toks in _directives(text):
        word, col = toks[0]
        if word == "vertex":
            if len(toks) not in (2, 3) or (len(toks) == 3 and toks[2][0] != "loop"):
                raise ParseError("expected 'vertex <name> [loop]'", line, col)
            name = _name_token(toks[1][0], line, toks[1][1])
            if name in vertices:
                raise ParseError(f"duplicate vertex {name!r}", line, toks[1][1])
            vertices.append(name)
            if len(toks) == 3:
                loops.add(name)
        elif word == "edge":
            if len(toks) != 3:
                raise ParseError("expected 'edge <name> <name>'", line, col)
            ends = []
            for tok, tcol in toks[1:]:
                name = _name_token(tok, line, tcol)
                if name not in vertices:
                    raise ParseError(f"undeclared vertex {name!r}", line, tcol)
                ends.append(name)
            if ends[0] == ends[1]:
                loops.add(ends[0])
            else:
                edges.add(frozenset(ends))
        else:
            raise ParseError(f"unknown directive {word!r}", line, col)
    if not vertices:
        raise ParseError("template declares no vertices", 1, 1)
    return TemplateGraph(FINITE, tuple(vertices), frozenset(edges), frozenset(loops))


def serialize_template(tmpl: TemplateGraph) -> str:
    if not tmpl.is_finite:
        raise ValueError("the infinite path has no file form; use the name 'infpath'")
    order = {v: i for i, v in enumerate(tmpl.vertices)}
    lines = [f"vertex {v}" + (" loop" if v in tmpl.loops else "") for v in tmpl.vertices]
    for e in sorted(tmpl.edges, key=lambda e: sorted(order[v] for v in e)):
        a, b = sorted(e, key=order.__getitem__)
        lines.append(f"edge {a} {b}")
    return "\n".join(lines) + "\n"


def resolve_template(spec: str) -> TemplateGraph:
    """A named template, or else a path to a template file."""
    try:
        return named_template(spec)
    except ValueError:
        pass
    with open(spec, encoding="utf-8") as fh:
        return parse_template(fh.read())


# ---------------------------------------------------------------------------
# Graph utilities on instances
# ---------------------------------------------------------------------------

def component_indices(inst: Instance) -> List[List[int]]:
    """Connected components as sorted index lists, ordered by their first variable."""
    seen = [False] * len(inst)
    comps = []
    for start in range(len(inst)):
        if seen[start]:
            continue
        seen[start] = True
        comp, queue = [], deque([start])
        while queue:
            v = queue.popleft()
            comp.append(v)
            for u in inst.neighbours[v]:
                if not seen[u]:
                    seen[u] = True
                    queue.append(u)
        comps.append(sorted(comp))
    return comps


def components(inst: Instance) -> List[Instance]:
    return [inst.restrict(inst.names[i] for i in comp) for comp in component_indices(inst)]


def bipartition(inst: Instance) -> Optional[Dict[str, str]]:
    """Proper black/white colouring with each component's first variable black.

    Returns ``None`` when the instance graph has an odd cycle or a loop atom.
    """
    if inst.has_loop:
        return None
    colour: Dict[int, int] = {}
    for comp in component_indices(inst):
        colour[comp[0]] = 0
        queue = deque([comp[0]])
        while queue:
            v = queue.popleft()
            for u in inst.neighbours[v]:
                if u not in colour:
                    colour[u] = 1 - colour[v]
                    queue.append(u)
                elif colour[u] == colour[v]:
                    return None
    return {inst.names[i]: (BLACK if c == 0 else WHITE) for i, c in colour.items()}


def is_bipartite(inst: Instance) -> bool:
    return bipartition(inst) is not None


def two_bad_walks_instance() -> Instance:
    """Nine-variable example with two bad walks between v1 and v2."""
    counts = [1, 2, 2, 2, 1, 2, 1, 1, 2]
    edges = [("v3", "v4"), ("v4", "v5"), ("v5", "v6"), ("v6", "v7"), ("v7", "v8"), ("v8", "v9"), ("v1", "v9"), ("v2", "v7")]
    return Instance([(f"v{i + 1}", c) for i, c in enumerate(counts)], edges)
