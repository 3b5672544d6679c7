"""Diagram moves and reduction to the minimal diagram.

Monogons and bigons are found on the face orbits of the map.  Every minus
move is a :func:`~doodlekit.core.delete_crossings` call: the strands simply
run straight past the erased crossings, and the disc-face encoding takes care
of any handle that has to be cut afterwards.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .core import (
    DoodleError,
    DoodleMap,
    delete_crossings,
    face_orbits,
    rebuild_components,
    require_valid,
    rotate_cw,
    strand_walk,
)


class StaleSiteError(DoodleError):
    """The site does not describe the current map (maps change under moves)."""


class InvalidSiteError(DoodleError, ValueError):
    pass


@dataclass(frozen=True)
class ReductionSite:
    kind: str  # "monogon" or "bigon"
    face: tuple
    crossings: tuple


@dataclass(frozen=True)
class PlusOneSite:
    face: tuple
    e1: int
    e2: int


@dataclass(frozen=True)
class MinusOneSite:
    crossing: int
    smoothing: int


def find_sites(m: DoodleMap) -> list:
    """Monogon faces and bigon faces with two distinct corners."""
    sites = []
    for o in face_orbits(m.pairing):
        if len(o) == 1:
            sites.append(ReductionSite("monogon", o, (o[0] >> 2,)))
        elif len(o) == 2 and (o[0] >> 2) != (o[1] >> 2):
            sites.append(ReductionSite("bigon", o, (o[0] >> 2, o[1] >> 2)))
    return sites


def is_minimal(m: DoodleMap) -> bool:
    return not find_sites(m)


def repeated_corner_bigons(m: DoodleMap) -> list:
    """Degree-2 faces whose corners sit at one crossing (never reduced)."""
    return [o for o in face_orbits(m.pairing) if len(o) == 2 and (o[0] >> 2) == (o[1] >> 2)]


def _check_face(m: DoodleMap, face: tuple) -> None:
    if any(not 0 <= d < m.n_darts for d in face):
        raise StaleSiteError(f"face {face} is not a face of this map")
    for i, d in enumerate(face):
        if rotate_cw(m.pairing[d]) != face[(i + 1) % len(face)]:
            raise StaleSiteError(f"face {face} is not a face of this map")


def apply_h1_minus(m: DoodleMap, site: ReductionSite) -> DoodleMap:
    """Delete a curl."""
    if site.kind != "monogon" or len(site.face) != 1:
        raise InvalidSiteError("H1- needs a monogon site")
    _check_face(m, site.face)
    return delete_crossings(m, {site.face[0] >> 2})


def apply_h2_minus(m: DoodleMap, site: ReductionSite) -> DoodleMap:
    """Delete a bigon and both of its crossings."""
    if site.kind != "bigon" or len(site.face) != 2:
        raise InvalidSiteError("H2- needs a bigon site")
    _check_face(m, site.face)
    a, b = site.face[0] >> 2, site.face[1] >> 2
    if a == b:
        raise InvalidSiteError("bigon corners must be distinct crossings")
    return delete_crossings(m, {a, b})


def apply_site(m: DoodleMap, site: ReductionSite) -> DoodleMap:
    if site.kind == "monogon":
        return apply_h1_minus(m, site)
    return apply_h2_minus(m, site)


def _grow(m: DoodleMap, k: int):
    base = m.n_darts
    return list(m.pairing) + [0] * (4 * k), base


def apply_h1_plus(m: DoodleMap, dart: Optional[int] = None, chirality: int = 1,
                  circle: Optional[int] = None) -> DoodleMap:
    """Add a curl on the edge of ``dart``, or on the crossing-free circle ``circle``.

    ``chirality`` (+1 or -1) picks the side of the strand the curl lies on.
    """
    if (dart is None) == (circle is None):
        raise ValueError("give exactly one of dart or circle")
    p, x = _grow(m, 1)
    loop_in = 1 if chirality > 0 else 3
    loop_out = loop_in ^ 2
    comps = list(m.components)
    if circle is not None:
        if m.components[circle] is not None:
            raise InvalidSiteError(f"component {circle} is not a crossing-free circle")
        p[x + 2], p[x + loop_in] = x + loop_in, x + 2
        p[x + loop_out], p[x] = x, x + loop_out
        comps[circle] = x + 2
    else:
        if not 0 <= dart < m.n_darts:
            raise InvalidSiteError(f"dart {dart} out of range")
        e = m.pairing[dart]
        p[dart], p[x] = x, dart
        p[x + 2], p[x + loop_in] = x + loop_in, x + 2
        p[x + loop_out], p[e] = e, x + loop_out
    return DoodleMap(tuple(p), tuple(comps), m.mode)


def _face_ids(pairing):
    fid = [0] * len(pairing)
    for i, o in enumerate(face_orbits(pairing)):
        for d in o:
            fid[d] = i
    return fid


def apply_h2_plus(m: DoodleMap, arc1, arc2) -> DoodleMap:
    """Push ``arc2`` across ``arc1`` to create a bigon.

    An arc is a dart (the edge it starts, with the shared face on its left)
    or ``("circle", k)`` for a crossing-free circle, which may join any face.
    """
    def parse(arc):
        if isinstance(arc, tuple) and arc and arc[0] == "circle":
            k = arc[1]
            if m.components[k] is not None:
                raise InvalidSiteError(f"component {k} is not a crossing-free circle")
            return None, k
        if not 0 <= arc < m.n_darts:
            raise InvalidSiteError(f"dart {arc} out of range")
        return arc, None

    d1, c1 = parse(arc1)
    d2, c2 = parse(arc2)
    if d1 is not None and d2 is not None:
        if d1 == d2 or m.pairing[d1] == d2:
            raise InvalidSiteError("the two arcs must be different edges")
        fid = _face_ids(m.pairing)
        if fid[d1] != fid[d2]:
            raise InvalidSiteError("darts do not border a common face")
    if c1 is not None and c1 == c2:
        raise InvalidSiteError("the two arcs must be different circles")

    p, base = _grow(m, 2)
    P, Q = base, base + 4
    # slot layout: P = (west, south, east, north), Q likewise; arc1 runs west->east
    pw, ps, pe, pn = P, P + 1, P + 2, P + 3
    qw, qs, qe, qn = Q, Q + 1, Q + 2, Q + 3

    def link(a, b):
        p[a], p[b] = b, a

    link(pe, qw)
    link(qs, ps)
    if d1 is not None:
        e1 = m.pairing[d1]
        link(d1, pw)
        link(qe, e1)
    else:
        link(qe, pw)
    if d2 is not None:
        e2 = m.pairing[d2]
        link(d2, qn)
        link(pn, e2)
    else:
        link(pn, qn)
    comps = list(m.components)
    if c1 is not None:
        comps[c1] = pe
    if c2 is not None:
        comps[c2] = ps
    return DoodleMap(tuple(p), tuple(comps), m.mode)


# ---------------------------------------------------------------------------
# reduction


def reduce_with_trace(m: DoodleMap, strategy: str = "first", seed: Optional[int] = None):
    """Apply minus moves until none is left; return the minimal map and the moves.

    ``strategy`` is ``"first"``, ``"random"`` (uses ``seed``) or
    ``"greedy-bigon-first"``.  The result does not depend on it.
    """
    require_valid(m)
    if strategy not in ("first", "random", "greedy-bigon-first"):
        raise ValueError(f"unknown strategy {strategy!r}")
    rng = random.Random(seed)
    trace = []
    while True:
        sites = find_sites(m)
        if not sites:
            return m, trace
        if strategy == "first":
            site = sites[0]
        elif strategy == "random":
            site = rng.choice(sites)
        else:
            bigons = [s for s in sites if s.kind == "bigon"]
            site = bigons[0] if bigons else sites[0]
        trace.append(site)
        m = apply_site(m, site)


def reduce(m: DoodleMap, strategy: str = "first", seed: Optional[int] = None) -> DoodleMap:
    return reduce_with_trace(m, strategy, seed)[0]


# ---------------------------------------------------------------------------
# the +1 / -1 construction


def plus_one_sites(m: DoodleMap) -> list:
    """Every (face, two disjoint edges of it) with face degree at least 4."""
    sites = []
    for o in face_orbits(m.pairing):
        if len(o) < 4:
            continue
        ends = [{d >> 2, m.pairing[d] >> 2} for d in o]
        for i in range(len(o)):
            for j in range(i + 1, len(o)):
                if not ends[i] & ends[j]:
                    sites.append(PlusOneSite(o, o[i], o[j]))
    return sites


def plus_one(m: DoodleMap, site: PlusOneSite) -> DoodleMap:
    """Replace two disjoint edges of a face by two arcs crossing at a new point."""
    require_valid(m)
    _check_face(m, site.face)
    if len(site.face) < 4 or site.e1 not in site.face or site.e2 not in site.face:
        raise InvalidSiteError("plus-one needs two edges of a face with at least 4 sides")
    d1, d2 = site.e1, site.e2
    b1, b2 = m.pairing[d1], m.pairing[d2]
    if {d1 >> 2, b1 >> 2} & {d2 >> 2, b2 >> 2}:
        raise InvalidSiteError("the two edges share an endpoint")
    p, x = _grow(m, 1)
    # counterclockwise around the new crossing: a1, b1, a2, b2
    for s, y in enumerate((d1, b1, d2, b2)):
        p[x + s], p[y] = y, x + s
    return rebuild_components(p, m.components, m.mode)


def _smooth(m: DoodleMap, X: int, smoothing: int):
    """Remove crossing ``X`` by re-pairing its outside neighbours.

    Returns the new map and the two surviving darts that start the restored
    edges (``a1 -> b1`` and ``a2 -> b2``), or None when ``X`` carries a loop.
    """
    p = m.pairing
    nb = [p[4 * X + s] for s in range(4)]
    if any((y >> 2) == X for y in nb):
        return None
    if smoothing == 0:
        pairs = ((nb[0], nb[1]), (nb[2], nb[3]))
    else:
        pairs = ((nb[1], nb[2]), (nb[3], nb[0]))

    def new_id(d):
        c = d >> 2
        return d - 4 if c > X else d

    q = list(p[:4 * X]) + list(p[4 * X + 4:])
    q = [new_id(e) for e in q]
    for a, b in pairs:
        q[new_id(a)], q[new_id(b)] = new_id(b), new_id(a)
    hints = []
    for c in m.components:
        if c is None:
            hints.append(None)
            continue
        walk = strand_walk(m, c)
        alive = [d for d in walk if (d >> 2) != X]
        hints.append(new_id(alive[0]) if alive else None)
    new = rebuild_components(q, hints, m.mode)
    return new, (new_id(pairs[0][0]), new_id(pairs[1][0]))


def _diagonal_filter(m: DoodleMap, fid, deg, X: int, smoothing: int) -> bool:
    # faces at the corners (s, s+1) keep the restored edges; the other two merge
    keep = (0, 2) if smoothing == 0 else (1, 3)
    merge = (1, 3) if smoothing == 0 else (0, 2)
    f = [fid[4 * X + s] for s in range(4)]
    if f[merge[0]] == f[merge[1]]:
        return False
    a, b = f[keep[0]], f[keep[1]]
    if a != b:
        return deg[a] > 3 and deg[b] > 3
    return deg[a] > 5


def minus_one_sites(m: DoodleMap) -> list:
    """Crossings whose removal undoes a +1 construction."""
    from .canonical import canonical_code

    require_valid(m)
    orbits = face_orbits(m.pairing)
    fid = [0] * m.n_darts
    for i, o in enumerate(orbits):
        for d in o:
            fid[d] = i
    deg = [len(o) for o in orbits]
    code = None
    sites = []
    for X in range(m.n_crossings):
        for smoothing in (0, 1):
            if not _diagonal_filter(m, fid, deg, X, smoothing):
                continue
            got = _smooth(m, X, smoothing)
            if got is None:
                continue
            ancestor, (a1, a2) = got
            back = _plus_one_from(ancestor, a1, a2)
            if back is None:
                continue
            if code is None:
                code = canonical_code(m, "unoriented,unordered")
            if canonical_code(back, "unoriented,unordered") == code:
                sites.append(MinusOneSite(X, smoothing))
    return sites


def _plus_one_from(m: DoodleMap, d1: int, d2: int):
    for o in face_orbits(m.pairing):
        if d1 in o:
            if d2 not in o or len(o) < 4:
                return None
            try:
                return plus_one(m, PlusOneSite(o, d1, d2))
            except InvalidSiteError:
                return None
    return None


def apply_minus_one(m: DoodleMap, site: MinusOneSite) -> DoodleMap:
    if site not in minus_one_sites(m):
        raise StaleSiteError(f"{site} is not a valid -1 site of this map")
    return _smooth(m, site.crossing, site.smoothing)[0]


def minus_one_inverse_site(m: DoodleMap, site: MinusOneSite):
    """The :class:`PlusOneSite` of the ancestor that recreates ``m``."""
    ancestor, (a1, a2) = _smooth(m, site.crossing, site.smoothing)
    for o in face_orbits(ancestor.pairing):
        if a1 in o:
            return ancestor, PlusOneSite(o, a1, a2)
    raise StaleSiteError("restored edges are not on one face")


def is_fundamental(m: DoodleMap) -> bool:
    """Minimal and without an ancestor under the +1 construction."""
    return is_minimal(m) and not minus_one_sites(m)


def random_expansion(m: DoodleMap, rng: random.Random, steps: int) -> DoodleMap:
    """Apply ``steps`` random H1+/H2+ moves."""
    for _ in range(steps):
        circles = [i for i, c in enumerate(m.components) if c is None]
        arcs = list(range(m.n_darts))
        if rng.random() < 0.4 or (len(arcs) + len(circles) < 2):
            if arcs and (not circles or rng.random() < 0.8):
                m = apply_h1_plus(m, dart=rng.choice(arcs), chirality=rng.choice((1, -1)))
            else:
                m = apply_h1_plus(m, circle=rng.choice(circles), chirality=rng.choice((1, -1)))
            continue
        options = []
        if arcs:
            fid = _face_ids(m.pairing)
            d1 = rng.choice(arcs)
            same = [d for d in arcs if fid[d] == fid[d1] and d != d1 and d != m.pairing[d1]]
            options += [(d1, d2) for d2 in same]
            options += [(d1, ("circle", k)) for k in circles]
            options += [(("circle", k), d1) for k in circles]
        options += [(("circle", a), ("circle", b)) for a in circles for b in circles if a != b]
        if not options:
            m = apply_h1_plus(m, dart=rng.choice(arcs), chirality=1) if arcs else apply_h1_plus(
                m, circle=circles[0])
            continue
        a, b = rng.choice(options)
        m = apply_h2_plus(m, a, b)
    return m
