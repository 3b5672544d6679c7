"""Graphs with levels, their roots, and the diamond conditions.

Edges are undirected and always join two different levels; walking an edge
downwards is a descent.  The reduction graph of doodle diagrams restricted to
minus moves is one such graph (:func:`doodle_subgraph`).
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from .core import DoodleError, DoodleMap, level


class SearchBudgetExceeded(DoodleError):
    pass


@dataclass
class LeveledGraph:
    levels: dict = field(default_factory=dict)
    adj: dict = field(default_factory=dict)

    def add_node(self, v, lvl) -> None:
        if v in self.levels and self.levels[v] != lvl:
            raise ValueError(f"node {v!r} already has level {self.levels[v]!r}")
        self.levels[v] = lvl
        self.adj.setdefault(v, set())

    def add_edge(self, a, b) -> None:
        if a not in self.levels or b not in self.levels:
            raise KeyError("add both nodes before the edge")
        if self.levels[a] == self.levels[b]:
            raise ValueError(f"edge {a!r}-{b!r} joins equal levels")
        self.adj[a].add(b)
        self.adj[b].add(a)

    @property
    def nodes(self):
        return list(self.levels)

    def edges(self):
        out = []
        for a in self.adj:
            for b in self.adj[a]:
                if _key(a) < _key(b):
                    out.append((a, b))
        return sorted(out, key=lambda e: (_key(e[0]), _key(e[1])))

    def lower(self, v) -> list:
        return sorted((w for w in self.adj[v] if self.levels[w] < self.levels[v]), key=_key)

    def components(self) -> list:
        seen = set()
        out = []
        for v in sorted(self.levels, key=_key):
            if v in seen:
                continue
            comp = []
            queue = deque([v])
            seen.add(v)
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in self.adj[x]:
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            out.append(comp)
        return out


def _key(v):
    return (type(v).__name__, str(v))


def check_fdpp(g: LeveledGraph) -> bool:
    """No infinite descending path: the descent digraph has no cycle."""
    state = {}
    for start in g.levels:
        if start in state:
            continue
        stack = [(start, iter(g.lower(start)))]
        state[start] = 1
        while stack:
            v, it = stack[-1]
            w = next(it, None)
            if w is None:
                state[v] = 2
                stack.pop()
            elif state.get(w) == 1:
                return False
            elif w not in state:
                state[w] = 1
                stack.append((w, iter(g.lower(w))))
    return True


def roots(g: LeveledGraph) -> set:
    return {v for v in g.levels if not g.lower(v)}


def descend(g: LeveledGraph, v, strategy: str = "first", seed: Optional[int] = None):
    """Follow descents from ``v`` until a root."""
    rng = random.Random(seed)
    while True:
        low = g.lower(v)
        if not low:
            return v
        if strategy == "first":
            v = low[0]
        elif strategy == "random":
            v = rng.choice(low)
        elif strategy == "lowest":
            v = min(low, key=lambda w: (g.levels[w], _key(w)))
        else:
            raise ValueError(f"unknown strategy {strategy!r}")


def check_urp(g: LeveledGraph) -> bool:
    """Every path component holds exactly one root."""
    sinks = roots(g)
    return all(sum(1 for v in comp if v in sinks) == 1 for comp in g.components())


def check_ldc(g: LeveledGraph, max_states: int = 1_000_000) -> bool:
    """Local diamond condition.

    For each simple peak ``X <- U -> Y`` look for a walk from X to Y whose
    every interior simple peak sits on a vertex directly below U.  The search
    runs over (previous, current) pairs, so walks may revisit vertices.
    """
    budget = [max_states]
    for u in sorted(g.levels, key=_key):
        below = g.lower(u)
        allowed = set(below)
        for i, x in enumerate(below):
            for y in below[i + 1:]:
                if not _ldc_walk(g, x, y, allowed, budget):
                    return False
    return True


def _ldc_walk(g, x, y, allowed, budget) -> bool:
    lv = g.levels
    start = (None, x)
    seen = {start}
    queue = deque([start])
    while queue:
        prev, cur = queue.popleft()
        for nxt in g.adj[cur]:
            if prev is not None and lv[prev] < lv[cur] and lv[nxt] < lv[cur] and cur not in allowed:
                continue
            if nxt == y:
                return True
            st = (cur, nxt)
            if st not in seen:
                seen.add(st)
                budget[0] -= 1
                if budget[0] < 0:
                    raise SearchBudgetExceeded("LDC search exceeded its state budget")
                queue.append(st)
    return False


def random_leveled_graph(rng: random.Random, n_nodes: int = 8, p_edge: float = 0.3,
                         n_levels: int = 4) -> LeveledGraph:
    g = LeveledGraph()
    for v in range(n_nodes):
        g.add_node(v, rng.randrange(n_levels))
    for a in range(n_nodes):
        for b in range(a + 1, n_nodes):
            if g.levels[a] != g.levels[b] and rng.random() < p_edge:
                g.add_edge(a, b)
    return g


# ---------------------------------------------------------------------------
# edge-list text


def dumps(g: LeveledGraph) -> str:
    lines = [f"node {v} {g.levels[v]}" for v in sorted(g.levels, key=_key)]
    lines += [f"edge {a} {b}" for a, b in g.edges()]
    return "\n".join(lines) + "\n"


def loads(text: str) -> LeveledGraph:
    g = LeveledGraph()
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "node" and len(parts) == 3:
            try:
                g.add_node(parts[1], int(parts[2]))
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from exc
        elif parts[0] == "edge" and len(parts) == 3:
            edges.append((lineno, parts[1], parts[2]))
        else:
            raise ValueError(f"line {lineno}: expected 'node NAME LEVEL' or 'edge A B'")
    for lineno, a, b in edges:
        try:
            g.add_edge(a, b)
        except (KeyError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
    return g


def non_ldc_example() -> LeveledGraph:
    """A small graph breaking the local diamond condition, with two roots."""
    text = resources.files("doodlekit").joinpath("data", "non_ldc.graph").read_text(encoding="utf-8")
    return loads(text)


# ---------------------------------------------------------------------------
# doodle diagrams


def doodle_subgraph(seed: DoodleMap, depth: Optional[int] = None, max_nodes: int = 20000,
                    mode=None) -> LeveledGraph:
    """Everything reachable from ``seed`` by H1-/H2- moves, keyed by canonical code.

    Levels are crossings minus Euler characteristic, so every move descends.
    """
    from .canonical import canonical_code
    from .moves import apply_site, find_sites

    g = LeveledGraph()
    key = canonical_code(seed, mode).hex()
    g.add_node(key, level(seed))
    queue = deque([(seed, key, 0)])
    done = {key}
    while queue:
        m, k, dist = queue.popleft()
        if depth is not None and dist >= depth:
            continue
        for site in find_sites(m):
            child = apply_site(m, site)
            ck = canonical_code(child, mode).hex()
            if ck not in g.levels:
                if len(g.levels) >= max_nodes:
                    raise SearchBudgetExceeded(f"descent closure exceeds {max_nodes} nodes")
                g.add_node(ck, level(child))
            g.add_edge(k, ck)
            if ck not in done:
                done.add(ck)
                queue.append((child, ck, dist + 1))
    return g


__all__ = [
    "LeveledGraph",
    "SearchBudgetExceeded",
    "check_fdpp",
    "check_ldc",
    "check_urp",
    "descend",
    "doodle_subgraph",
    "dumps",
    "loads",
    "non_ldc_example",
    "random_leveled_graph",
    "roots",
]
