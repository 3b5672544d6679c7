"""Combinatorial maps of doodle diagrams.

A diagram with ``n`` crossings is stored as a fixed-point-free involution on
the darts ``0 .. 4n-1``.  Dart ``4*c + s`` sits at crossing ``c`` in slot ``s``;
slots are numbered counterclockwise, so the rotation at every crossing is
implicit.  A strand enters a crossing through slot ``s`` and leaves through
slot ``s + 2 (mod 4)``.

The surface is never stored.  It is the closed surface obtained by gluing a
disc into every face orbit of the map, which is exactly what a minimal
diagram looks like and silently applies every handle move that does not
touch the curves.

Face convention: ``next(d) = rotate_cw(pairing[d])``.  Travel along the edge
of ``d``, arrive at the partner dart, then step one slot clockwise.  The face
of ``d`` lies to the left of that travel.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence


class DoodleError(Exception):
    """Base class for errors raised by doodlekit."""


class StructureError(DoodleError, ValueError):
    """Raised when a map violates one of its structural invariants."""


@dataclass(frozen=True)
class Mode:
    """Which labels an isomorphism has to respect.

    ``oriented`` keeps the direction of every component, ``ordered`` keeps
    the index of every component.  The orientation of the surface is always
    respected.
    """

    oriented: bool = False
    ordered: bool = False

    @classmethod
    def parse(cls, text: "str | Mode | None") -> "Mode":
        if text is None:
            return cls()
        if isinstance(text, Mode):
            return text
        words = {w.strip().lower() for w in text.replace("+", ",").split(",") if w.strip()}
        unknown = words - {"oriented", "unoriented", "ordered", "unordered"}
        if unknown:
            raise ValueError(f"unknown mode word(s): {sorted(unknown)}")
        if {"oriented", "unoriented"} <= words or {"ordered", "unordered"} <= words:
            raise ValueError(f"contradictory mode: {text!r}")
        return cls(oriented="oriented" in words, ordered="ordered" in words)

    @property
    def tag(self) -> str:
        return ("oriented" if self.oriented else "unoriented") + "," + (
            "ordered" if self.ordered else "unordered"
        )

    def __str__(self) -> str:
        return self.tag


UNORIENTED = Mode()


def owner(d: int) -> int:
    return d >> 2


def slot(d: int) -> int:
    return d & 3


def opposite(d: int) -> int:
    return d ^ 2


def rotate_ccw(d: int) -> int:
    return (d & ~3) | ((d + 1) & 3)


def rotate_cw(d: int) -> int:
    return (d & ~3) | ((d - 1) & 3)


@dataclass(frozen=True)
class DoodleMap:
    """Immutable combinatorial map of a doodle diagram.

    Parameters
    ----------
    pairing : tuple of int
        Edge involution on the darts ``0 .. 4n-1``.
    components : tuple of (int or None)
        One entry per component in index order.  A crossing-bearing component
        is named by a dart through which it *leaves* a crossing; this fixes its
        direction.  ``None`` is a crossing-free circle on its own sphere.
    mode : Mode
        Default labelling mode used by canonical codes.
    """

    pairing: tuple
    components: tuple = ()
    mode: Mode = field(default=UNORIENTED)

    def __post_init__(self):
        object.__setattr__(self, "pairing", tuple(self.pairing))
        object.__setattr__(self, "components", tuple(self.components))
        if not isinstance(self.mode, Mode):
            object.__setattr__(self, "mode", Mode.parse(self.mode))

    @property
    def n_crossings(self) -> int:
        return len(self.pairing) // 4

    @property
    def n_darts(self) -> int:
        return len(self.pairing)

    @property
    def trivial_circles(self) -> int:
        return sum(1 for c in self.components if c is None)

    @property
    def n_components(self) -> int:
        return len(self.components)

    def with_mode(self, mode) -> "DoodleMap":
        return DoodleMap(self.pairing, self.components, Mode.parse(mode))

    def next_in_face(self, d: int) -> int:
        return rotate_cw(self.pairing[d])

    def next_on_strand(self, d: int) -> int:
        """Next outgoing dart along the strand that leaves through ``d``."""
        return opposite(self.pairing[d])

    def __repr__(self) -> str:
        return (
            f"DoodleMap(crossings={self.n_crossings}, components={self.n_components}, "
            f"trivial_circles={self.trivial_circles}, mode={self.mode.tag!r})"
        )


@dataclass(frozen=True)
class Face:
    darts: tuple
    corners: tuple

    @property
    def degree(self) -> int:
        return len(self.darts)


@dataclass(frozen=True)
class SurfaceComponent:
    crossings: tuple
    V: int
    E: int
    F: int
    genus: int

    @property
    def euler_characteristic(self) -> int:
        return self.V - self.E + self.F


@dataclass(frozen=True)
class FaceVector:
    components: tuple
    trivial_circles: int
    counts: tuple  # sorted (degree, count) pairs

    @property
    def F(self) -> int:
        return sum(c for _, c in self.counts)

    @property
    def E(self) -> int:
        return sum(c.E for c in self.components)

    @property
    def V(self) -> int:
        return sum(c.V for c in self.components)

    def count(self, degree: int) -> int:
        return dict(self.counts).get(degree, 0)

    def as_dict(self) -> dict:
        return {int(k): int(v) for k, v in self.counts}


# ---------------------------------------------------------------------------
# strands and connectivity


def strand_walk(m: DoodleMap, d: int) -> list:
    """Outgoing darts visited by the strand leaving through ``d``, in order."""
    out = [d]
    x = m.next_on_strand(d)
    while x != d:
        out.append(x)
        x = m.next_on_strand(x)
    return out


def strand_darts(m: DoodleMap, d: int) -> frozenset:
    walk = strand_walk(m, d)
    return frozenset(walk) | frozenset(m.pairing[x] for x in walk)


def strands(m: DoodleMap) -> list:
    """All strands as lists of outgoing darts, each starting at its least dart."""
    seen = [False] * m.n_darts
    result = []
    for d in range(m.n_darts):
        if seen[d]:
            continue
        walk = strand_walk(m, d)
        for x in walk:
            seen[x] = True
            seen[m.pairing[x]] = True
        result.append(walk)
    return result


def outgoing_flags(m: DoodleMap) -> list:
    """``flags[d]`` is True when the strand through ``d`` leaves through it."""
    flags = [False] * m.n_darts
    for c in m.components:
        if c is None:
            continue
        for x in strand_walk(m, c):
            flags[x] = True
    return flags


def component_of_dart(m: DoodleMap) -> list:
    label = [-1] * m.n_darts
    for i, c in enumerate(m.components):
        if c is None:
            continue
        for x in strand_walk(m, c):
            label[x] = i
            label[m.pairing[x]] = i
    return label


def connected_components(m: DoodleMap) -> list:
    """Crossing sets of the connected pieces, ordered by least crossing id."""
    n = m.n_crossings
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for d, e in enumerate(m.pairing):
        a, b = find(d >> 2), find(e >> 2)
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict = {}
    for c in range(n):
        groups.setdefault(find(c), []).append(c)
    return [tuple(g) for _, g in sorted(groups.items())]


def is_connected(m: DoodleMap) -> bool:
    return m.n_crossings > 0 and m.trivial_circles == 0 and len(connected_components(m)) == 1


# ---------------------------------------------------------------------------
# validation


def validate(m: DoodleMap) -> list:
    """Return one message per violated invariant; empty when ``m`` is sound."""
    problems = []
    p = m.pairing
    nd = len(p)
    if nd % 4:
        problems.append(f"dart count {nd} is not a multiple of 4")
        return problems
    for d, e in enumerate(p):
        if not isinstance(e, int) or not 0 <= e < nd:
            problems.append(f"edge_pairing maps dart {d} outside the dart range")
        elif e == d:
            problems.append(f"edge_pairing has fixed point {d}")
        elif p[e] != d:
            problems.append(f"edge_pairing is not an involution at dart {d}")
    if problems:
        return problems
    claimed: dict = {}
    for i, c in enumerate(m.components):
        if c is None:
            continue
        if not isinstance(c, int) or not 0 <= c < nd:
            problems.append(f"component {i} names invalid dart {c!r}")
            continue
        key = min(strand_darts(m, c))
        if key in claimed:
            problems.append(f"components {claimed[key]} and {i} name the same strand")
        claimed[key] = i
    for walk in strands(m):
        if min(walk + [p[x] for x in walk]) not in claimed:
            problems.append(f"strand through dart {walk[0]} has no component entry")
    return problems


def validate_rotation_system(rotation: dict, edges: Iterable) -> list:
    """Check raw crossing/dart data before it is packed into a :class:`DoodleMap`.

    ``rotation`` maps a crossing id to its four dart labels in counterclockwise
    order; ``edges`` lists dart pairs.
    """
    problems = []
    where: dict = {}
    for cross, darts in rotation.items():
        darts = tuple(darts)
        if len(darts) != 4:
            problems.append(f"crossing {cross!r} has {len(darts)} darts, expected 4")
        for s, d in enumerate(darts):
            if d in where:
                problems.append(
                    f"dart {d!r} occupies slot {where[d][1]} of crossing {where[d][0]!r} "
                    f"and slot {s} of crossing {cross!r}"
                )
            else:
                where[d] = (cross, s)
    seen: dict = {}
    for a, b in edges:
        if a == b:
            problems.append(f"edge_pairing has fixed point {a!r}")
        for d in (a, b):
            if d not in where:
                problems.append(f"edge uses unknown dart {d!r}")
            if d in seen:
                problems.append(f"dart {d!r} is paired twice")
            seen[d] = True
    for d in where:
        if d not in seen:
            problems.append(f"dart {d!r} is unpaired")
    return problems


def from_rotation_system(rotation: dict, edges: Iterable, mode=None) -> DoodleMap:
    """Pack labelled crossings and edges into a :class:`DoodleMap`."""
    edges = list(edges)
    problems = validate_rotation_system(rotation, edges)
    if problems:
        raise StructureError(problems[0])
    index = {}
    for c, cross in enumerate(rotation):
        for s, d in enumerate(rotation[cross]):
            index[d] = 4 * c + s
    pairing = [0] * (4 * len(rotation))
    for a, b in edges:
        pairing[index[a]] = index[b]
        pairing[index[b]] = index[a]
    return with_default_components(pairing, mode=mode)


def with_default_components(pairing, trivial: int = 0, mode=None) -> DoodleMap:
    """Map whose components are its strands in order of least dart."""
    probe = DoodleMap(tuple(pairing), ())
    comps = tuple(walk[0] for walk in strands(probe)) + (None,) * trivial
    return DoodleMap(probe.pairing, comps, Mode.parse(mode))


def require_valid(m: DoodleMap) -> None:
    problems = validate(m)
    if problems:
        raise StructureError(problems[0])


# ---------------------------------------------------------------------------
# faces and genus


def face_orbits(pairing: Sequence[int]) -> list:
    """Face orbits, each starting at its least dart, sorted by that dart."""
    nd = len(pairing)
    seen = [False] * nd
    faces = []
    for d in range(nd):
        if seen[d]:
            continue
        orbit = []
        x = d
        while not seen[x]:
            seen[x] = True
            orbit.append(x)
            x = rotate_cw(pairing[x])
        faces.append(tuple(orbit))
    return faces


def face_trace(m: DoodleMap):
    """Trace every face of ``m``.

    Returns the faces (sorted by least dart, each starting at it) and the
    aggregated :class:`FaceVector`.
    """
    require_valid(m)
    orbits = face_orbits(m.pairing)
    faces = [Face(o, tuple(d >> 2 for d in o)) for o in orbits]
    comp_of = {}
    pieces = connected_components(m)
    for i, piece in enumerate(pieces):
        for c in piece:
            comp_of[c] = i
    nfaces = Counter(comp_of[f.darts[0] >> 2] for f in faces)
    summaries = []
    for i, piece in enumerate(pieces):
        V = len(piece)
        E = 2 * V
        F = nfaces[i]
        chi = V - E + F
        summaries.append(SurfaceComponent(piece, V, E, F, (2 - chi) // 2))
    counts = Counter(f.degree for f in faces)
    fv = FaceVector(tuple(summaries), m.trivial_circles, tuple(sorted(counts.items())))
    return faces, fv


def genus(m: DoodleMap):
    """Per-surface-component genera and their total.

    Crossing-bearing pieces come first in order of least crossing id, then one
    sphere (genus 0) per crossing-free circle.
    """
    _, fv = face_trace(m)
    per = [c.genus for c in fv.components] + [0] * fv.trivial_circles
    return per, sum(per)


def euler_characteristic(m: DoodleMap) -> int:
    """Euler characteristic of the whole (possibly disconnected) surface."""
    if m.n_crossings == 0:
        return 2 * m.trivial_circles
    F = len(face_orbits(m.pairing))
    return m.n_crossings - 2 * m.n_crossings + F + 2 * m.trivial_circles


def level(m: DoodleMap) -> int:
    """Crossing count minus the Euler characteristic of the surface."""
    return m.n_crossings - euler_characteristic(m)


def has_reduction_face(m: DoodleMap) -> bool:
    for o in face_orbits(m.pairing):
        if len(o) == 1 or (len(o) == 2 and (o[0] >> 2) != (o[1] >> 2)):
            return True
    return False


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    lhs: int
    rhs: int

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class IdentityReport:
    applicable: bool
    reason: str = ""
    checks: tuple = ()

    @property
    def passed(self) -> bool:
        return self.applicable and all(c.ok for c in self.checks)

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def check_identities(m: DoodleMap) -> IdentityReport:
    """Evaluate ``E = 2V``, ``F = V + 2 - 2g`` and ``V - 6 + 6g = sum (i-3) F_i``."""
    require_valid(m)
    if m.n_crossings == 0:
        return IdentityReport(False, "diagram has no crossings")
    if not is_connected(m):
        return IdentityReport(False, "diagram is not connected")
    if has_reduction_face(m):
        return IdentityReport(False, "diagram is not minimal")
    _, fv = face_trace(m)
    (piece,) = fv.components
    V, E, F, g = piece.V, piece.E, piece.F, piece.genus
    weighted = sum((i - 3) * c for i, c in fv.counts if i >= 4)
    return IdentityReport(
        True,
        checks=(
            IdentityCheck("I1", E, 2 * V),
            IdentityCheck("I2", F, V + 2 - 2 * g),
            IdentityCheck("I3", V - 6 + 6 * g, weighted),
        ),
    )


# ---------------------------------------------------------------------------
# surgery


def delete_crossings(m: DoodleMap, doomed: Iterable[int], drop: Iterable[int] = ()) -> DoodleMap:
    """Erase crossings, letting every strand run straight through each one.

    Surviving strands are spliced past the erased crossings; strands left
    without crossings become crossing-free circles.  Components listed in
    ``drop`` are removed from the component table (their darts must all lie
    on doomed crossings).
    """
    doomed = set(doomed)
    drop = set(drop)
    p = m.pairing
    keep = [c for c in range(m.n_crossings) if c not in doomed]
    renum = {c: i for i, c in enumerate(keep)}

    def new_id(d):
        return 4 * renum[d >> 2] + (d & 3)

    pairing = [0] * (4 * len(keep))
    for c in keep:
        for s in range(4):
            x = 4 * c + s
            y = p[x]
            while (y >> 2) in doomed:
                y = p[y ^ 2]
            pairing[new_id(x)] = new_id(y)

    comps = []
    for i, c in enumerate(m.components):
        if i in drop:
            continue
        if c is None:
            comps.append(None)
            continue
        x = c
        while (x >> 2) in doomed:
            x = p[x] ^ 2
            if x == c:
                break
        comps.append(None if (x >> 2) in doomed else new_id(x))
    return DoodleMap(tuple(pairing), tuple(comps), m.mode)


def remove_component(m: DoodleMap, component: int) -> DoodleMap:
    """Delete one component together with every crossing it passes through."""
    require_valid(m)
    if not -len(m.components) <= component < len(m.components):
        raise IndexError(f"component index {component} out of range")
    component %= len(m.components)
    start = m.components[component]
    if start is None:
        return DoodleMap(m.pairing, m.components[:component] + m.components[component + 1:], m.mode)
    doomed = {d >> 2 for d in strand_darts(m, start)}
    return delete_crossings(m, doomed, drop={component})


def mirror(m: DoodleMap) -> DoodleMap:
    """Reverse the rotation at every crossing (slot order 0, 3, 2, 1)."""

    def flip(d):
        return (d & ~3) | ((-d) & 3)

    pairing = [0] * m.n_darts
    for d, e in enumerate(m.pairing):
        pairing[flip(d)] = flip(e)
    comps = tuple(None if c is None else flip(c) for c in m.components)
    return DoodleMap(tuple(pairing), comps, m.mode)


def relabel(m: DoodleMap, perm: Sequence[int], shifts: Optional[Sequence[int]] = None) -> DoodleMap:
    """Rename crossing ``c`` to ``perm[c]`` and cyclically shift its slots.

    The result is isomorphic to ``m`` through an orientation-preserving map.
    """
    n = m.n_crossings
    shifts = shifts or [0] * n

    def f(d):
        c = d >> 2
        return 4 * perm[c] + ((d + shifts[c]) & 3)

    pairing = [0] * m.n_darts
    for d, e in enumerate(m.pairing):
        pairing[f(d)] = f(e)
    comps = tuple(None if c is None else f(c) for c in m.components)
    return DoodleMap(tuple(pairing), comps, m.mode)


def disjoint_union(*maps: DoodleMap) -> DoodleMap:
    pairing: list = []
    comps: list = []
    for m in maps:
        off = len(pairing)
        pairing.extend(e + off for e in m.pairing)
        comps.extend(None if c is None else c + off for c in m.components)
    mode = maps[0].mode if maps else UNORIENTED
    return DoodleMap(tuple(pairing), tuple(comps), mode)


def rebuild_components(pairing: Sequence[int], hints: Iterable[Optional[int]], mode=UNORIENTED) -> DoodleMap:
    """Component table for ``pairing`` that keeps the hinted darts where possible.

    Each hint is an outgoing dart (or None for a crossing-free circle).  Hints
    landing on an already claimed strand are dropped; unclaimed strands are
    appended, named by their least dart.
    """
    probe = DoodleMap(tuple(pairing), ())
    key_of = {}
    for walk in strands(probe):
        key = min(walk)
        for x in walk:
            key_of[x] = key
            key_of[probe.pairing[x]] = key
    taken = set()
    comps = []
    for h in hints:
        if h is None:
            comps.append(None)
            continue
        k = key_of[h]
        if k in taken:
            continue
        taken.add(k)
        comps.append(h)
    for walk in strands(probe):
        if min(walk) not in taken:
            taken.add(min(walk))
            comps.append(walk[0])
    return DoodleMap(probe.pairing, tuple(comps), Mode.parse(mode))
