"""Canonical codes for doodle maps and the doodle-equality decision.

Each connected piece is relabelled breadth-first from every admissible seed
dart and the lexicographically least serialization wins.  Reflections are
never tried, so mirror images get different codes unless they are genuinely
isomorphic by an orientation-preserving map.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .core import (
    DoodleMap,
    Mode,
    connected_components,
    component_of_dart,
    genus,
    outgoing_flags,
    require_valid,
    strands,
)

CODE_VERSION = 1


def bfs_code(pairing, seed, extra=None):
    """Breadth-first relabelling of the piece containing ``seed``.

    Crossings are numbered in order of discovery and rotated so that the
    discovering dart lands in slot 0.  Returns the relabelled pairing followed
    by ``extra(d)`` for every dart in new order, plus the old-to-new dart map.
    """
    c0 = seed >> 2
    label = {c0: 0}
    offset = {c0: seed & 3}
    order = [c0]
    code = []
    i = 0
    while i < len(order):
        c = order[i]
        off = offset[c]
        for j in range(4):
            e = pairing[4 * c + ((off + j) & 3)]
            ce = e >> 2
            if ce not in label:
                label[ce] = len(order)
                offset[ce] = e & 3
                order.append(ce)
            code.append(4 * label[ce] + (((e & 3) - offset[ce]) & 3))
        i += 1
    if extra is not None:
        for c in order:
            off = offset[c]
            for j in range(4):
                code.append(extra(4 * c + ((off + j) & 3)))
    return tuple(code), label, offset


def _pack(values) -> bytes:
    return struct.pack(f">{len(values)}H", *values)


def _unpack(raw: bytes):
    return struct.unpack(f">{len(raw) // 2}H", raw)


@dataclass(frozen=True, order=True)
class CanonicalCode:
    """Total-order key of a map up to orientation-preserving isomorphism."""

    mode_tag: str
    components: tuple
    circles: tuple

    def to_bytes(self) -> bytes:
        mode = Mode.parse(self.mode_tag)
        out = bytearray([CODE_VERSION, int(mode.oriented) | (int(mode.ordered) << 1)])
        out += struct.pack(">H", len(self.components))
        for comp in self.components:
            out += struct.pack(">I", len(comp)) + comp
        out += struct.pack(">H", len(self.circles))
        out += _pack(self.circles)
        return bytes(out)

    def hex(self) -> str:
        return f"dc{CODE_VERSION}-" + self.to_bytes().hex()

    def __str__(self) -> str:
        return self.hex()

    @classmethod
    def from_bytes(cls, raw: bytes) -> "CanonicalCode":
        if not raw or raw[0] != CODE_VERSION:
            raise ValueError("unsupported canonical code version")
        flags = raw[1]
        mode = Mode(oriented=bool(flags & 1), ordered=bool(flags & 2))
        pos = 2
        (k,) = struct.unpack_from(">H", raw, pos)
        pos += 2
        comps = []
        for _ in range(k):
            (ln,) = struct.unpack_from(">I", raw, pos)
            pos += 4
            comps.append(bytes(raw[pos:pos + ln]))
            pos += ln
        (nc,) = struct.unpack_from(">H", raw, pos)
        pos += 2
        circles = struct.unpack_from(f">{nc}H", raw, pos)
        return cls(mode.tag, tuple(comps), tuple(circles))

    @classmethod
    def from_hex(cls, text: str) -> "CanonicalCode":
        prefix, _, body = text.strip().partition("-")
        if prefix != f"dc{CODE_VERSION}":
            raise ValueError(f"unsupported canonical code rendering {prefix!r}")
        return cls.from_bytes(bytes.fromhex(body))

    @property
    def n_crossings(self) -> int:
        return sum(_unpack(c[:2])[0] for c in self.components)

    def to_map(self) -> DoodleMap:
        """Rebuild a representative map from the code."""
        mode = Mode.parse(self.mode_tag)
        pairing: list = []
        comps: dict = {}
        loose: list = []
        for raw in self.components:
            vals = _unpack(raw)
            V = vals[0]
            body = vals[1:1 + 4 * V]
            rest = vals[1 + 4 * V:]
            off = len(pairing)
            pairing.extend(off + e for e in body)
            piece = DoodleMap(tuple(body), ())
            dirs = rest[:4 * V] if mode.oriented else None
            labels = rest[4 * V if mode.oriented else 0:] if mode.ordered else None
            for walk in strands(piece):
                if dirs is not None:
                    d = walk[0] if dirs[walk[0]] else piece.pairing[walk[0]]
                else:
                    d = walk[0]
                if labels is not None:
                    comps[labels[d]] = d + off
                else:
                    loose.append(d + off)
        if mode.ordered:
            for lab in self.circles:
                comps[lab] = None
            total = len(comps)
            components = tuple(comps[i] for i in range(total))
        else:
            components = tuple(loose) + (None,) * (self.circles[0] if self.circles else 0)
        return DoodleMap(tuple(pairing), components, mode)


def _piece_code(m: DoodleMap, piece, mode: Mode, out_flags, labels):
    if mode.oriented and mode.ordered:
        def extra(d):
            return (labels[d] << 1) | out_flags[d]
    elif mode.oriented:
        def extra(d):
            return out_flags[d]
    elif mode.ordered:
        def extra(d):
            return labels[d]
    else:
        extra = None
    best = None
    for c in piece:
        for s in range(4):
            d = 4 * c + s
            if mode.oriented and not out_flags[d]:
                continue
            code = bfs_code(m.pairing, d, extra)[0]
            if best is None or code < best:
                best = code
    V = len(piece)
    if mode.oriented or mode.ordered:
        # split the extras back out so that to_map can read them
        body, rest = best[:4 * V], best[4 * V:]
        if mode.oriented and mode.ordered:
            rest = tuple(r & 1 for r in rest) + tuple(r >> 1 for r in rest)
        best = body + rest
    return _pack((V,) + best)


def canonical_code(m: DoodleMap, mode=None) -> CanonicalCode:
    """Canonical code of ``m``; equal codes mean isomorphic maps under ``mode``."""
    require_valid(m)
    mode = m.mode if mode is None else Mode.parse(mode)
    out_flags = outgoing_flags(m) if mode.oriented else None
    labels = component_of_dart(m) if mode.ordered else None
    comps = sorted(_piece_code(m, piece, mode, out_flags, labels) for piece in connected_components(m))
    if mode.ordered:
        circles = tuple(i for i, c in enumerate(m.components) if c is None)
    else:
        circles = (m.trivial_circles,)
    return CanonicalCode(mode.tag, tuple(comps), circles)


def canonical_form(m: DoodleMap, mode=None) -> DoodleMap:
    """The representative map decoded from the canonical code."""
    return canonical_code(m, mode).to_map()


def is_isomorphic(m1: DoodleMap, m2: DoodleMap, mode=None) -> bool:
    mode = m1.mode if mode is None else mode
    return canonical_code(m1, mode) == canonical_code(m2, mode)


def doodle_equal(m1: DoodleMap, m2: DoodleMap, mode=None) -> bool:
    """Decide whether two diagrams represent the same doodle."""
    from .moves import reduce

    mode = m1.mode if mode is None else mode
    return canonical_code(reduce(m1), mode) == canonical_code(reduce(m2), mode)


def genus_of_doodle(m: DoodleMap) -> int:
    from .moves import reduce

    return genus(reduce(m))[1]


def is_trivial_doodle(m: DoodleMap) -> bool:
    from .moves import reduce

    return reduce(m).n_crossings == 0
