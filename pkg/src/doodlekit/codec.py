"""Text formats: signed Gauss codes, PD documents, JSON, SVG and DOT.

Gauss code
    One line per component, tokens ``<label><sign>``; a line ``O`` is a
    crossing-free circle.  At a ``+`` visit the counterclockwise rotation at
    the crossing reads (this-in, other-in, this-out, other-out); at ``-`` it
    reads (this-in, other-out, this-out, other-in).  The two visits of a
    crossing therefore always carry opposite signs.

PD
    ``X(a,b,c,d)`` is a real crossing and ``V(a,b,c,d)`` a virtual one, edge
    labels in counterclockwise order; strands continue between slots 0/2 and
    1/3.  ``O(a)`` is a closed loop without nodes.  Every label occurs twice.

Both formats accept ``#`` comments and blank lines.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

from .core import (
    DoodleError,
    DoodleMap,
    Mode,
    StructureError,
    outgoing_flags,
    rebuild_components,
    require_valid,
    strand_walk,
)

JSON_SCHEMA = "doodlekit.map"
JSON_VERSION = 1


class ParseError(DoodleError, ValueError):
    pass


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


# ---------------------------------------------------------------------------
# Gauss codes


@dataclass(frozen=True)
class GaussCodeDocument:
    """Components as tuples of ``(label, sign)`` visits; ``None`` is a circle."""

    lines: tuple

    def __str__(self) -> str:
        return format_gauss(self)


_TOKEN = re.compile(r"^(.+?)([+\-−])$")


def parse_gauss_text(text: str) -> GaussCodeDocument:
    lines = []
    for lineno, line in _content_lines(text):
        if line == "O":
            lines.append(None)
            continue
        visits = []
        for tok in line.replace(",", " ").split():
            mt = _TOKEN.match(tok)
            if not mt:
                raise ParseError(f"line {lineno}: bad token {tok!r}")
            visits.append((mt.group(1), "+" if mt.group(2) == "+" else "-"))
        if not visits:
            raise ParseError(f"line {lineno}: empty component")
        lines.append(tuple(visits))
    return GaussCodeDocument(tuple(lines))


def format_gauss(doc: GaussCodeDocument) -> str:
    out = []
    for line in doc.lines:
        out.append("O" if line is None else " ".join(f"{lab}{sign}" for lab, sign in line))
    return "\n".join(out) + "\n"


def parse_gauss(doc, mode=None) -> DoodleMap:
    """Build the map of a Gauss code (document object or text)."""
    if isinstance(doc, str):
        doc = parse_gauss_text(doc)
    visits: dict = {}
    for li, line in enumerate(doc.lines):
        if line is None:
            continue
        if not line:
            raise ParseError(f"component {li} is empty")
        for vi, (lab, sign) in enumerate(line):
            if lab == "":
                raise ParseError("empty token")
            visits.setdefault(lab, []).append((li, vi, sign))
    cid = {}
    for lab, vs in visits.items():
        if len(vs) != 2:
            raise ParseError(f"label {lab!r} occurs {len(vs)} times, expected 2")
        if vs[0][2] == vs[1][2]:
            raise ParseError(f"orientation inconsistency at label {lab!r}: both visits are {vs[0][2]}")
        cid[lab] = len(cid)
    # slot of (in, out) for each visit
    slots: dict = {}
    for lab, (v1, v2) in visits.items():
        base = 4 * cid[lab]
        if v1[2] == "+":
            slots[v1[:2]] = (base, base + 2)
            slots[v2[:2]] = (base + 1, base + 3)
        else:
            slots[v1[:2]] = (base, base + 2)
            slots[v2[:2]] = (base + 3, base + 1)
    pairing = [0] * (4 * len(cid))
    comps = []
    for li, line in enumerate(doc.lines):
        if line is None:
            comps.append(None)
            continue
        k = len(line)
        for vi in range(k):
            out = slots[li, vi][1]
            nxt = slots[li, (vi + 1) % k][0]
            pairing[out], pairing[nxt] = nxt, out
        comps.append(slots[li, 0][1])
    m = DoodleMap(tuple(pairing), tuple(comps), Mode.parse(mode))
    require_valid(m)
    return m


def emit_gauss(m: DoodleMap, canonical: bool = True) -> GaussCodeDocument:
    """Gauss code of ``m``; with ``canonical`` the labels follow the canonical form."""
    require_valid(m)
    if canonical and m.n_crossings:
        from .canonical import canonical_form

        m = canonical_form(m, m.mode.tag)
    out = outgoing_flags(m)
    lines = []
    for c in m.components:
        if c is None:
            lines.append(None)
            continue
        visits = []
        for d in strand_walk(m, c):
            incoming = d ^ 2
            # the slot after this-in is either other-in (+) or other-out (-)
            after = (incoming & ~3) | ((incoming + 1) & 3)
            visits.append((str((d >> 2) + 1), "-" if out[after] else "+"))
        lines.append(tuple(visits))
    return GaussCodeDocument(tuple(lines))


# ---------------------------------------------------------------------------
# PD documents


@dataclass(frozen=True)
class PdNode:
    kind: str  # "X", "V" or "O"
    labels: tuple

    def __str__(self) -> str:
        return f"{self.kind}({','.join(str(a) for a in self.labels)})"


@dataclass(frozen=True)
class PdDocument:
    nodes: tuple
    comments: tuple = field(default=(), compare=False)

    @property
    def n_real(self) -> int:
        return sum(1 for n in self.nodes if n.kind == "X")

    @property
    def n_virtual(self) -> int:
        return sum(1 for n in self.nodes if n.kind == "V")

    def __str__(self) -> str:
        return format_pd(self)


_PD_NODE = re.compile(r"([XVO])\s*\(([^()]*)\)")


def parse_pd_text(text: str) -> PdDocument:
    nodes = []
    comments = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        if raw.strip().startswith("#"):
            comments.append(raw.strip()[1:].strip())
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        pos = 0
        for mt in _PD_NODE.finditer(line):
            if line[pos:mt.start()].strip(" ,;"):
                raise ParseError(f"line {lineno}: unexpected text {line[pos:mt.start()]!r}")
            labels = tuple(a.strip() for a in mt.group(2).split(",") if a.strip())
            kind = mt.group(1)
            want = 1 if kind == "O" else 4
            if len(labels) != want:
                raise ParseError(f"line {lineno}: {kind} node needs {want} labels, got {len(labels)}")
            nodes.append(PdNode(kind, labels))
            pos = mt.end()
        if line[pos:].strip(" ,;"):
            raise ParseError(f"line {lineno}: unexpected text {line[pos:]!r}")
    return PdDocument(tuple(nodes), tuple(comments))


def format_pd(doc: PdDocument) -> str:
    head = "".join(f"# {c}\n" for c in doc.comments)
    return head + "".join(f"{n}\n" for n in doc.nodes)


def parse_pd(doc, mode=None) -> DoodleMap:
    """Strip the virtual crossings of a PD document and return the doodle map.

    Strands run straight through V nodes; loops meeting only V nodes become
    crossing-free circles.  In oriented mode each strand is directed so that
    it *enters* through the first X-node slot it owns in document order.
    """
    if isinstance(doc, str):
        doc = parse_pd_text(doc)
    where: dict = {}
    circles = 0
    for i, node in enumerate(doc.nodes):
        if node.kind == "O":
            where.setdefault(node.labels[0], []).extend([(i, 0), (i, 0)])
            continue
        for s, lab in enumerate(node.labels):
            where.setdefault(lab, []).append((i, s))
    for lab, occ in where.items():
        if len(occ) != 2:
            raise ParseError(f"edge label {lab!r} occurs {len(occ)} times, expected 2")
    real = [i for i, n in enumerate(doc.nodes) if n.kind == "X"]
    cid = {node: k for k, node in enumerate(real)}

    def other_end(i, s):
        lab = doc.nodes[i].labels[s]
        a, b = where[lab]
        if a == b:
            raise ParseError(f"edge {lab!r} joins slot {s} of node {i} to itself")
        return b if a == (i, s) else a

    pairing = [0] * (4 * len(real))
    for i in real:
        for s in range(4):
            j, t = other_end(i, s)
            steps = 0
            while doc.nodes[j].kind == "V":
                j, t = other_end(j, t ^ 2)
                steps += 1
                if steps > 4 * len(doc.nodes):
                    raise ParseError("dangling strand through virtual crossings")
            if doc.nodes[j].kind != "X":
                raise ParseError(f"strand from node {i} runs into an O node")
            pairing[4 * cid[i] + s] = 4 * cid[j] + t
    # loops that meet only V nodes
    seen = set()
    for i, node in enumerate(doc.nodes):
        if node.kind == "O":
            circles += 1
            continue
        if node.kind != "V":
            continue
        for s in (0, 1):
            if (i, s) in seen:
                continue
            j, t = i, s
            while True:
                seen.update(((j, t), (j, t ^ 2)))
                j, t = other_end(j, t ^ 2)
                if doc.nodes[j].kind != "V" or (j, t) in seen:
                    break
            if (j, t) == (i, s):
                circles += 1
    # each strand enters through the first X slot it owns in document order
    probe = rebuild_components(pairing, [])
    comps = []
    for c in probe.components:
        walk = strand_walk(probe, c)
        entry = min(set(walk) | {pairing[x] for x in walk})
        comps.append(entry ^ 2)
    comps.sort(key=lambda d: d ^ 2)
    out = DoodleMap(tuple(pairing), tuple(comps) + (None,) * circles, Mode.parse(mode))
    require_valid(out)
    return out


def emit_pd(m: DoodleMap) -> PdDocument:
    """Planar drawing of ``m`` with virtual crossings (see ``planarize``)."""
    from .virtualization import planarize

    return planarize(m)


# ---------------------------------------------------------------------------
# JSON


def to_json(m: DoodleMap) -> str:
    require_valid(m)
    return json.dumps(
        {
            "schema": JSON_SCHEMA,
            "version": JSON_VERSION,
            "mode": {"oriented": m.mode.oriented, "ordered": m.mode.ordered},
            "crossings": m.n_crossings,
            "pairing": list(m.pairing),
            "components": list(m.components),
        },
        sort_keys=True,
    )


def from_json(text: str) -> DoodleMap:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("JSON map must be an object")
    if "version" not in data:
        raise ParseError("missing version field")
    if data.get("schema") != JSON_SCHEMA or data["version"] != JSON_VERSION:
        raise ParseError(f"schema mismatch: {data.get('schema')!r} v{data['version']!r}")
    try:
        mode = Mode(bool(data["mode"]["oriented"]), bool(data["mode"]["ordered"]))
        pairing = tuple(int(x) for x in data["pairing"])
        comps = tuple(None if c is None else int(c) for c in data["components"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed map: {exc}") from exc
    if data.get("crossings", len(pairing) // 4) * 4 != len(pairing):
        raise ParseError("crossing count does not match pairing length")
    m = DoodleMap(pairing, comps, mode)
    try:
        require_valid(m)
    except StructureError as exc:
        raise ParseError(str(exc)) from exc
    return m


# ---------------------------------------------------------------------------
# drawings


def render_dot(m: DoodleMap) -> str:
    """Undirected multigraph of crossings and edges in DOT syntax."""
    require_valid(m)
    out = ["graph doodle {", "  node [shape=point];"]
    for c in range(m.n_crossings):
        out.append(f"  c{c};")
    for i, _ in enumerate(c for c in m.components if c is None):
        out.append(f'  circle{i} [shape=circle, label=""];')
    for d, e in enumerate(m.pairing):
        if d < e:
            out.append(f"  c{d >> 2} -- c{e >> 2} [taillabel={d & 3}, headlabel={e & 3}];")
    out.append("}")
    return "\n".join(out) + "\n"


def render_svg(doc: PdDocument, size: int = 400) -> str:
    """Best-effort drawing: nodes on a circle, edges as curves between slots.

    Virtual crossings get a small circle marker; real ones are bare.
    """
    if isinstance(doc, str):
        doc = parse_pd_text(doc)
    nodes = [n for n in doc.nodes if n.kind != "O"]
    loops = [n for n in doc.nodes if n.kind == "O"]
    cx = cy = size / 2
    R = size * 0.35
    pos = []
    for k, _ in enumerate(nodes):
        a = 2 * math.pi * k / max(1, len(nodes))
        pos.append((cx + R * math.cos(a), cy + R * math.sin(a)))
    arm = size * 0.04

    def port(k, s):
        x, y = pos[k]
        a = math.atan2(y - cy, x - cx) + math.pi / 2 * s
        return x + arm * math.cos(a), y - arm * math.sin(a)

    where: dict = {}
    for k, n in enumerate(nodes):
        for s, lab in enumerate(n.labels):
            where.setdefault(lab, []).append((k, s))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        '<g fill="none" stroke="black" stroke-width="1.5">',
    ]
    for k, n in enumerate(nodes):
        x, y = pos[k]
        for s in (0, 1):
            (x1, y1), (x2, y2) = port(k, s), port(k, s + 2)
            parts.append(f'<path d="M {x1:.2f} {y1:.2f} L {x2:.2f} {y2:.2f}"/>')
    for lab, occ in where.items():
        if len(occ) != 2:
            continue
        (k1, s1), (k2, s2) = occ
        x1, y1 = port(k1, s1)
        x2, y2 = port(k2, s2)
        c1 = (2 * x1 - pos[k1][0], 2 * y1 - pos[k1][1])
        c2 = (2 * x2 - pos[k2][0], 2 * y2 - pos[k2][1])
        if k1 == k2 and s1 == s2:
            continue
        parts.append(
            f'<path d="M {x1:.2f} {y1:.2f} C {c1[0]:.2f} {c1[1]:.2f} {c2[0]:.2f} {c2[1]:.2f} '
            f'{x2:.2f} {y2:.2f}"/>'
        )
    for i, _ in enumerate(loops):
        parts.append(f'<ellipse class="loop" cx="{20 + 30 * i}" cy="20" rx="12" ry="12"/>')
    parts.append("</g>")
    for k, n in enumerate(nodes):
        if n.kind == "V":
            x, y = pos[k]
            parts.append(f'<circle class="virtual-crossing" cx="{x:.2f}" cy="{y:.2f}" r="{arm * 0.6:.2f}" '
                         'fill="none" stroke="black"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def pd_as_map(doc: PdDocument) -> DoodleMap:
    """Every X and V node as a crossing: the drawing itself as a map.

    A document is a planar drawing exactly when this map has genus 0 on every
    piece.  ``O`` loops become crossing-free circles.
    """
    if isinstance(doc, str):
        doc = parse_pd_text(doc)
    nodes = [n for n in doc.nodes if n.kind != "O"]
    where: dict = {}
    for k, n in enumerate(nodes):
        for s, lab in enumerate(n.labels):
            where.setdefault(lab, []).append(4 * k + s)
    pairing = [0] * (4 * len(nodes))
    for lab, occ in where.items():
        if len(occ) != 2:
            raise ParseError(f"edge label {lab!r} occurs {len(occ)} times")
        a, b = occ
        pairing[a], pairing[b] = b, a
    loops = sum(1 for n in doc.nodes if n.kind == "O")
    return rebuild_components(pairing, [None] * loops)


def is_planar_drawing(doc: PdDocument) -> bool:
    from .core import genus

    m = pd_as_map(doc)
    return m.n_crossings == 0 or genus(m)[1] == 0


__all__ = [
    "GaussCodeDocument",
    "ParseError",
    "PdDocument",
    "PdNode",
    "emit_gauss",
    "emit_pd",
    "format_gauss",
    "format_pd",
    "from_json",
    "is_planar_drawing",
    "parse_gauss",
    "parse_gauss_text",
    "parse_pd",
    "parse_pd_text",
    "pd_as_map",
    "render_dot",
    "render_svg",
    "to_json",
]
