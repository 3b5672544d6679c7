"""Named doodles, the planar families, and the shipped PD fixtures.

The families are built from concentric straight-line drawings: the
counterclockwise order of neighbours around each vertex of the drawing is
the rotation of the map.  Outer rings sit far away so that chords between
outer vertices never overtake the inward edges in angular order.
"""

from __future__ import annotations

import math
from importlib import resources

from .core import DoodleMap, DoodleError, Mode, with_default_components

FIXTURE_NAMES = ("d3.1",) + tuple(f"d4.{i}" for i in range(1, 20)) + ("kishino", "fig19", "fig20")


def from_planar_drawing(points: dict, edges, mode=None) -> DoodleMap:
    """Map of a 4-regular straight-line drawing given by coordinates and edges."""
    nbrs: dict = {v: [] for v in points}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    names = list(points)
    index = {v: i for i, v in enumerate(names)}
    slot_of = {}
    for v in names:
        if len(nbrs[v]) != 4 or len(set(nbrs[v])) != 4:
            raise DoodleError(f"vertex {v!r} is not a simple 4-valent vertex")
        x0, y0 = points[v]
        order = sorted(nbrs[v], key=lambda w: math.atan2(points[w][1] - y0, points[w][0] - x0))
        for s, w in enumerate(order):
            slot_of[v, w] = 4 * index[v] + s
    pairing = [0] * (4 * len(names))
    for u, v in edges:
        a, b = slot_of[u, v], slot_of[v, u]
        pairing[a], pairing[b] = b, a
    return with_default_components(pairing, mode=mode)


def _ring(prefix, n, radius, phase):
    return {(prefix, i): (radius * math.cos(2 * math.pi * (i + phase) / n),
                          radius * math.sin(2 * math.pi * (i + phase) / n)) for i in range(n)}


def borromean(n: int, mode=None) -> DoodleMap:
    """Generalized Borromean doodle ``B_n`` (the n-gon antiprism): B_3, B_4 = poppy."""
    if n < 3:
        raise ValueError("borromean needs n >= 3")
    pts = _ring("X", n, 1.0, 0.0)
    pts.update(_ring("Y", n, 40.0, -0.5))
    edges = []
    for i in range(n):
        j = (i + 1) % n
        edges += [(("X", i), ("X", j)), (("Y", i), ("Y", j)),
                  (("X", i), ("Y", i)), (("X", i), ("Y", j))]
    return from_planar_drawing(pts, edges, mode)


def _bicupola(n: int, shift: int, mode) -> DoodleMap:
    if n < 3:
        raise ValueError("needs n >= 3")
    pts = {("P", i): (math.cos(math.pi * (2 * i + 0.5) / n), math.sin(math.pi * (2 * i + 0.5) / n))
           for i in range(n)}
    pts.update({("M", j): (8 * math.cos(math.pi * j / n), 8 * math.sin(math.pi * j / n))
                for j in range(2 * n)})
    pts.update({("Q", k): (300 * math.cos(math.pi * (2 * k + shift + 0.5) / n),
                           300 * math.sin(math.pi * (2 * k + shift + 0.5) / n)) for k in range(n)})
    edges = []
    for i in range(n):
        edges += [(("P", i), ("P", (i + 1) % n)),
                  (("P", i), ("M", 2 * i)), (("P", i), ("M", 2 * i + 1)),
                  (("Q", i), ("Q", (i + 1) % n)),
                  (("Q", i), ("M", (2 * i + shift) % (2 * n))),
                  (("Q", i), ("M", (2 * i + 1 + shift) % (2 * n)))]
    for j in range(2 * n):
        edges.append((("M", j), ("M", (j + 1) % (2 * n))))
    return from_planar_drawing(pts, edges, mode)


def gyro(n: int, mode=None) -> DoodleMap:
    """``C'_n``: squares meet triangles across the central 2n-gon."""
    return _bicupola(n, 1, mode)


def ortho(n: int, mode=None) -> DoodleMap:
    """``C''_n``: squares meet squares and triangles meet triangles."""
    return _bicupola(n, 0, mode)


def central_component(m: DoodleMap, n: int) -> int:
    """Index of the component running around the central 2n-gon of gyro/ortho."""
    from .core import strand_darts

    # vertices M_j are the crossings n .. 3n-1 in construction order
    mids = set(range(n, 3 * n))
    for i, c in enumerate(m.components):
        if c is not None and {d >> 2 for d in strand_darts(m, c)} == mids:
            return i
    raise DoodleError("no central component found")


def hopf(mode=None) -> DoodleMap:
    """Longitude and meridian of a torus meeting once."""
    return DoodleMap((2, 3, 0, 1), (0, 1), Mode.parse(mode))


def trivial(k: int = 1, mode=None) -> DoodleMap:
    return DoodleMap((), (None,) * k, Mode.parse(mode))


def fixture_text(name: str) -> str:
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}")
    return resources.files("doodlekit").joinpath("data", f"{name}.pd").read_text(encoding="utf-8")


def fixture(name: str):
    """Load a shipped PD fixture as a :class:`~doodlekit.codec.PdDocument`."""
    from .codec import parse_pd_text

    return parse_pd_text(fixture_text(name))


def family(name: str, n=None, mode=None) -> DoodleMap:
    """Look a family member up by name (``borromean``, ``poppy``, ``gyro`` ...)."""
    name = name.lower()
    if name in ("hopf",):
        return hopf(mode)
    if name in ("trivial", "circles"):
        return trivial(1 if n is None else int(n), mode)
    if name in ("borromean", "b"):
        return borromean(3 if n is None else int(n), mode)
    if name == "poppy":
        return borromean(4, mode)
    if name in ("gyro", "cprime"):
        return gyro(3 if n is None else int(n), mode)
    if name in ("ortho", "cdoubleprime"):
        return ortho(3 if n is None else int(n), mode)
    raise KeyError(f"unknown family {name!r}")
