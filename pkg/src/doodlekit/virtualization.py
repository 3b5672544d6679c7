"""Virtual diagrams: drawing a map in the plane and reading drawings back.

A map on a surface is drawn by embedding a spanning forest of its graph,
adding every remaining edge that fits inside a face, and routing the rest
through the dual graph.  Each edge crossed on the way becomes a virtual
crossing.  Reading a drawing back (``codec.parse_pd``) ignores the virtual
crossings, so the round trip returns the original map.
"""

from __future__ import annotations

import random
from collections import deque
from typing import Optional

from .canonical import canonical_code, doodle_equal, genus_of_doodle
from .codec import PdDocument, PdNode, parse_pd, parse_pd_text, pd_as_map
from .core import DoodleMap, connected_components, genus, require_valid, rotate_cw


class _Drawing:
    """A partially paired set of 4-slot nodes; unpaired slots are open stubs."""

    def __init__(self, n: int):
        self.pair: list = [None] * (4 * n)

    def add_node(self) -> int:
        self.pair.extend([None] * 4)
        return len(self.pair) // 4 - 1

    def link(self, a: int, b: int) -> None:
        self.pair[a], self.pair[b] = b, a

    def _first_paired_cw(self, d: int) -> Optional[int]:
        for _ in range(4):
            d = rotate_cw(d)
            if self.pair[d] is not None:
                return d
        return None

    def faces(self) -> list:
        """Face id of every dart; stubs get the face of the first paired dart clockwise."""
        fid: list = [None] * len(self.pair)
        count = 0
        for d0, e in enumerate(self.pair):
            if e is None or fid[d0] is not None:
                continue
            d = d0
            while fid[d] is None:
                fid[d] = count
                d = self._next(d)
            count += 1
        for d, e in enumerate(self.pair):
            if e is None:
                x = self._first_paired_cw(d)
                if x is None:
                    # a node with no edges yet is a face of its own
                    fid[d] = ("isolated", d >> 2)
                else:
                    fid[d] = fid[x]
        return fid

    def _next(self, d: int) -> int:
        # a leaf turns back along its own edge
        return self._first_paired_cw(self.pair[d])

    def route(self, u: int, v: int) -> int:
        """Join stubs ``u`` and ``v``, crossing edges as needed; return the crossing count."""
        fid = self.faces()
        if fid[u] == fid[v]:
            self.link(u, v)
            return 0
        # dual BFS: step from the face of d to the face of its partner
        prev = {fid[u]: None}
        queue = deque([fid[u]])
        by_face: dict = {}
        for d, e in enumerate(self.pair):
            if e is not None:
                by_face.setdefault(fid[d], []).append(d)
        while queue:
            f = queue.popleft()
            if f == fid[v]:
                break
            for d in by_face.get(f, ()):
                g = fid[self.pair[d]]
                if g not in prev:
                    prev[g] = (f, d)
                    queue.append(g)
        if fid[v] not in prev:
            raise RuntimeError("stubs lie in different pieces")
        path = []
        f = fid[v]
        while prev[f] is not None:
            f, d = prev[f]
            path.append(d)
        path.reverse()
        end = u
        for d in path:
            e = self.pair[d]
            k = self.add_node()
            self.link(d, 4 * k)
            self.link(e, 4 * k + 2)
            self.link(end, 4 * k + 3)
            end = 4 * k + 1
        self.link(end, v)
        return len(path)


def planarize(m: DoodleMap, seed: Optional[int] = None) -> PdDocument:
    """Planar drawing of ``m`` with virtual crossings.

    Real crossings come first as ``X`` nodes in crossing order, then the
    ``V`` nodes, then one ``O`` per crossing-free circle.  ``seed`` shuffles
    the spanning trees and edge order, giving other drawings of the same map.
    """
    require_valid(m)
    rng = random.Random(seed) if seed is not None else None
    n = m.n_crossings
    dr = _Drawing(n)
    in_tree = set()
    for piece in connected_components(m):
        root = min(piece) if rng is None else rng.choice(sorted(piece))
        seen = {root}
        queue = deque([root])
        while queue:
            c = queue.popleft()
            slots = list(range(4))
            if rng is not None:
                rng.shuffle(slots)
            for s in slots:
                d = 4 * c + s
                e = m.pairing[d]
                if (e >> 2) not in seen:
                    seen.add(e >> 2)
                    dr.link(d, e)
                    in_tree.add(min(d, e))
                    queue.append(e >> 2)
    rest = [d for d in range(m.n_darts) if d < m.pairing[d] and d not in in_tree]
    if rng is not None:
        rng.shuffle(rest)
    late = []
    for d in rest:
        fid = dr.faces()
        if fid[d] == fid[m.pairing[d]]:
            dr.link(d, m.pairing[d])
        else:
            late.append(d)
    for d in late:
        dr.route(d, m.pairing[d])
    return _to_document(dr, n, m.trivial_circles)


def _to_document(dr: _Drawing, n_real: int, circles: int) -> PdDocument:
    label = {}
    for d, e in enumerate(dr.pair):
        if d < e:
            label[d] = label[e] = len(label) // 2 + 1
    nodes = []
    for k in range(len(dr.pair) // 4):
        nodes.append(PdNode("X" if k < n_real else "V", tuple(str(label[4 * k + s]) for s in range(4))))
    top = len(label) // 2
    for i in range(circles):
        nodes.append(PdNode("O", (str(top + i + 1),)))
    return PdDocument(tuple(nodes))


def drawing_genus(doc: PdDocument) -> int:
    """Genus of the drawing with virtual crossings counted as vertices (0 = planar)."""
    m = pd_as_map(doc)
    return genus(m)[1] if m.n_crossings else 0


def gauss_data_equal(k1, k2, mode=None) -> bool:
    """Same Gauss data, i.e. related by detour moves alone (no reduction)."""
    m1, m2 = parse_pd(_doc(k1), mode), parse_pd(_doc(k2), mode)
    return canonical_code(m1) == canonical_code(m2)


def virtual_area_number(k) -> int:
    """Least number of virtual areas over all equivalent drawings; equals the doodle's genus."""
    return genus_of_doodle(parse_pd(_doc(k)))


def virtual_doodle_equal(k1, k2, mode=None) -> bool:
    return doodle_equal(parse_pd(_doc(k1), mode), parse_pd(_doc(k2), mode))


def _doc(k) -> PdDocument:
    return parse_pd_text(k) if isinstance(k, str) else k


# ---------------------------------------------------------------------------
# rewrites of drawings


def _fresh(doc: PdDocument, count: int) -> list:
    used = {lab for node in doc.nodes for lab in node.labels}
    out = []
    i = 1
    while len(out) < count:
        cand = f"t{i}"
        if cand not in used:
            out.append(cand)
        i += 1
    return out


def _replace_one(nodes: list, lab: str, new: str, which: int) -> None:
    seen = 0
    for i, node in enumerate(nodes):
        labels = list(node.labels)
        for s, x in enumerate(labels):
            if x == lab:
                if seen == which:
                    labels[s] = new
                    nodes[i] = PdNode(node.kind, tuple(labels))
                    return
                seen += 1
    raise KeyError(lab)


def add_virtual_kink(doc: PdDocument, edge: str) -> PdDocument:
    """VR1: put a virtual curl on ``edge``."""
    doc = _doc(doc)
    nodes = list(doc.nodes)
    e2, e3 = _fresh(doc, 2)
    _replace_one(nodes, edge, e3, 1)
    nodes.append(PdNode("V", (edge, e2, e2, e3)))
    return PdDocument(tuple(nodes), doc.comments)


def add_real_kink(doc: PdDocument, edge: str) -> PdDocument:
    """R1: put a real curl on ``edge``."""
    doc = _doc(doc)
    nodes = list(doc.nodes)
    e2, e3 = _fresh(doc, 2)
    _replace_one(nodes, edge, e3, 1)
    nodes.append(PdNode("X", (edge, e2, e2, e3)))
    return PdDocument(tuple(nodes), doc.comments)


def add_virtual_bigon(doc: PdDocument, over: str, under: str) -> PdDocument:
    """VR2: push edge ``under`` across edge ``over`` and back, making two virtual crossings.

    The two edges must bound a common face of a planar drawing; the side of
    each edge that gets rerouted is picked so the result stays planar.
    """
    doc = _doc(doc)
    a1, a2, b1, b2 = _fresh(doc, 4)
    base = drawing_genus(doc)
    for i in (0, 1):
        for j in (0, 1):
            nodes = list(doc.nodes)
            _replace_one(nodes, over, a2, i)
            _replace_one(nodes, under, b2, j)
            nodes.append(PdNode("V", (over, under, a1, b1)))
            nodes.append(PdNode("V", (b1, a1, b2, a2)))
            out = PdDocument(tuple(nodes), doc.comments)
            if drawing_genus(out) == base:
                return out
    raise ValueError(f"edges {over!r} and {under!r} do not share a face")


__all__ = [
    "add_real_kink",
    "add_virtual_bigon",
    "add_virtual_kink",
    "drawing_genus",
    "gauss_data_equal",
    "planarize",
    "virtual_area_number",
    "virtual_doodle_equal",
]
