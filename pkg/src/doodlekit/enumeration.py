"""Exhaustive generation of connected minimal maps, one per isomorphism class.

Maps are generated directly in breadth-first normal form: darts are paired in
increasing order, and a dart is paired either with a free dart of a crossing
already reached or with slot 0 of the next new crossing.  A finished pairing
is kept only when it is the least normal form over all starting darts, which
makes the output isomorph-free without any dedupe table.

Faces are tracked as chains of darts while the pairing grows.  A chain that
closes into a monogon or a bigon kills the branch, and with a genus target the
Euler relation bounds the total excess ``sum(len(face) - 3)``.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from .canonical import canonical_code
from .core import (
    DoodleError,
    DoodleMap,
    check_identities,
    face_trace,
    is_connected,
    with_default_components,
)
from .moves import is_fundamental, is_minimal, repeated_corner_bigons

STORE_SCHEMA = "doodlekit.census"
STORE_VERSION = 1


class BudgetExceeded(DoodleError):
    """Raised when a census runs out of time or nodes.

    ``records`` holds what was found in the finished work items and
    ``state`` is enough to resume (pass it back as ``resume=``).
    """

    def __init__(self, message, records, state):
        super().__init__(message)
        self.records = records
        self.state = state


class StoreError(DoodleError):
    pass


@dataclass(frozen=True)
class CensusRecord:
    code: str
    n: int
    genus: int
    components: int
    trivial_circles: int
    faces: dict
    repeated_corner_bigon: bool
    fundamental: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["faces"] = {str(k): v for k, v in sorted(self.faces.items())}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CensusRecord":
        return cls(
            code=d["code"],
            n=int(d["n"]),
            genus=int(d["genus"]),
            components=int(d["components"]),
            trivial_circles=int(d.get("trivial_circles", 0)),
            faces={int(k): int(v) for k, v in d["faces"].items()},
            repeated_corner_bigon=bool(d["repeated_corner_bigon"]),
            fundamental=bool(d["fundamental"]),
        )

    def to_map(self) -> DoodleMap:
        from .canonical import CanonicalCode

        return CanonicalCode.from_hex(self.code).to_map()


@dataclass
class CensusQuery:
    n: Optional[int] = None
    genus: Optional[int] = None
    components: Optional[int] = None
    faces: Optional[dict] = None

    def matches(self, r: CensusRecord) -> bool:
        if self.n is not None and r.n != self.n:
            return False
        if self.genus is not None and r.genus != self.genus:
            return False
        if self.components is not None and r.components != self.components:
            return False
        if self.faces is not None:
            for k, v in self.faces.items():
                if r.faces.get(int(k), 0) != int(v):
                    return False
        return True


@dataclass
class Budget:
    seconds: Optional[float] = None
    nodes: Optional[int] = None
    _start: float = field(default_factory=time.monotonic, repr=False)

    def remaining_seconds(self) -> Optional[float]:
        if self.seconds is None:
            return None
        return self.seconds - (time.monotonic() - self._start)


def make_record(m: DoodleMap) -> CensusRecord:
    _, fv = face_trace(m)
    return CensusRecord(
        code=canonical_code(m, "unoriented,unordered").hex(),
        n=m.n_crossings,
        genus=sum(c.genus for c in fv.components),
        components=m.n_components,
        trivial_circles=m.trivial_circles,
        faces=dict(fv.counts),
        repeated_corner_bigon=bool(repeated_corner_bigons(m)),
        fundamental=is_fundamental(m),
    )


# ---------------------------------------------------------------------------
# the search


def is_least_normal_form(P, n: int, upto: Optional[int] = None) -> bool:
    """False if some other starting dart gives a smaller normal form than ``P``.

    With ``upto`` only positions below it are trusted (a partial pairing,
    unpaired entries are -1); a seed is then abandoned as soon as it needs an
    unknown value.
    """
    total = 4 * n
    limit = total if upto is None else upto
    for seed in range(1, total):
        label = [-1] * n
        offset = [0] * n
        order = [seed >> 2]
        label[seed >> 2] = 0
        offset[seed >> 2] = seed & 3
        pos = 0
        i = 0
        verdict = 0
        while i < len(order) and pos < limit:
            c = order[i]
            off = offset[c]
            for j in range(4):
                e = P[4 * c + ((off + j) & 3)]
                if e < 0:
                    verdict = 2
                    break
                ce = e >> 2
                if label[ce] < 0:
                    label[ce] = len(order)
                    offset[ce] = e & 3
                    order.append(ce)
                val = 4 * label[ce] + (((e & 3) - offset[ce]) & 3)
                if val != P[pos]:
                    verdict = -1 if val < P[pos] else 1
                    break
                pos += 1
                if pos >= limit:
                    break
            if verdict:
                break
            i += 1
        if verdict == -1:
            return False
    return True


class _Search:
    def __init__(self, n, genus=None, components=None, node_limit=None, deadline=None,
                 prefix_check_every=2):
        self.n = n
        self.genus = genus
        self.components = components
        self.node_limit = node_limit
        self.deadline = deadline
        self.nodes = 0
        self.found = []
        self.prefix_check_every = prefix_check_every
        if genus is not None:
            self.faces_target = n + 2 - 2 * genus
            self.excess_cap = n - 6 + 6 * genus
        else:
            self.faces_target = None
            self.excess_cap = None

    # state: P, ndisc, cend, cstart, clen, closed, closed_excess, open_excess, open_darts
    def initial(self):
        N = 4 * self.n
        return [[-1] * N, 1, list(range(N)), list(range(N)), [1] * N, 0, 0, 0, N]

    def _link(self, st, a, b) -> bool:
        cend, cstart, clen = st[2], st[3], st[4]
        sa = cstart[a]
        if sa == b:
            L = clen[b]
            if L <= 2:
                return False
            st[5] += 1
            st[6] += L - 3
            st[7] -= max(0, L - 3)
            st[8] -= L
            return True
        eb = cend[b]
        la, lb = clen[sa], clen[b]
        st[7] += max(0, la + lb - 3) - max(0, la - 3) - max(0, lb - 3)
        cend[sa] = eb
        cstart[eb] = sa
        clen[sa] = la + lb
        return True

    def apply(self, st, d, e):
        """Pair ``d`` with ``e`` on a copy of the state; None if the branch dies."""
        new = [st[0][:], st[1], st[2][:], st[3][:], st[4][:], st[5], st[6], st[7], st[8]]
        P = new[0]
        if e == 4 * new[1]:
            new[1] += 1
        P[d], P[e] = e, d
        rcw_e = (e & ~3) | ((e - 1) & 3)
        rcw_d = (d & ~3) | ((d - 1) & 3)
        if not self._link(new, d, rcw_e) or not self._link(new, e, rcw_d):
            return None
        if self.faces_target is not None:
            if new[6] + new[7] > self.excess_cap:
                return None
            if new[5] > self.faces_target or new[5] + new[8] // 3 < self.faces_target:
                return None
        return new

    def choices(self, st):
        P, ndisc = st[0], st[1]
        d = P.index(-1)
        if (d >> 2) >= ndisc:
            return d, []
        out = [e for e in range(d + 1, 4 * ndisc) if P[e] < 0]
        if ndisc < self.n:
            out.append(4 * ndisc)
        return d, out

    def run(self, st, depth=0):
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise _Stop("node budget exhausted")
        if self.deadline is not None and (self.nodes & 1023) == 0 and time.monotonic() > self.deadline:
            raise _Stop("time budget exhausted")
        P = st[0]
        if -1 not in P:
            self._leaf(st)
            return
        if self.prefix_check_every and depth and depth % self.prefix_check_every == 0:
            first_free = P.index(-1)
            if not is_least_normal_form(P, self.n, first_free):
                return
        d, opts = self.choices(st)
        for e in opts:
            nxt = self.apply(st, d, e)
            if nxt is not None:
                self.run(nxt, depth + 1)

    def _leaf(self, st):
        n = self.n
        if st[1] != n:
            return
        if self.faces_target is not None and st[5] != self.faces_target:
            return
        P = st[0]
        if not is_least_normal_form(P, n):
            return
        m = with_default_components(P)
        if self.components is not None and m.n_components != self.components:
            return
        self.found.append(tuple(P))


class _Stop(Exception):
    pass


def _expand(search: _Search, depth: int):
    """States after ``depth`` pairing decisions, in search order."""
    frontier = [((), search.initial())]
    for _ in range(depth):
        nxt = []
        for path, st in frontier:
            if -1 not in st[0]:
                nxt.append((path, st))
                continue
            d, opts = search.choices(st)
            for e in opts:
                s2 = search.apply(st, d, e)
                if s2 is not None:
                    nxt.append((path + (e,), s2))
        frontier = nxt
    return [path for path, _ in frontier]


def _replay(search: _Search, path):
    st = search.initial()
    for e in path:
        d, _ = search.choices(st)
        st = search.apply(st, d, e)
    return st


def _run_item(args):
    n, genus, components, path, node_limit, seconds = args
    deadline = None if seconds is None else time.monotonic() + seconds
    search = _Search(n, genus, components, node_limit, deadline)
    st = _replay(search, path)
    try:
        search.run(st, len(path))
    except _Stop as exc:
        return path, None, search.nodes, str(exc)
    return path, search.found, search.nodes, None


def _naive_small(n: int):
    """Every connected minimal pairing for tiny ``n`` (used for n = 1)."""
    out = {}
    darts = list(range(4 * n))
    for P in _all_pairings(darts):
        m = with_default_components(P)
        if is_connected(m) and is_minimal(m):
            out.setdefault(canonical_code(m, "unoriented,unordered"), m)
    return out


def _all_pairings(darts):
    if not darts:
        yield ()
        return
    pairing = [0] * (max(darts) + 1)

    def rec(rest):
        if not rest:
            yield tuple(pairing)
            return
        a = rest[0]
        for i in range(1, len(rest)):
            b = rest[i]
            pairing[a], pairing[b] = b, a
            yield from rec(rest[1:i] + rest[i + 1:])

    yield from rec(list(darts))


def naive_census(n: int, genus: Optional[int] = None, components: Optional[int] = None) -> list:
    """Brute force over all pairings with dedupe by code; the oracle for tiny ``n``."""
    records = []
    for m in _naive_small(n).values():
        r = make_record(m)
        if genus is not None and r.genus != genus:
            continue
        if components is not None and r.components != components:
            continue
        records.append(r)
    return sorted(records, key=lambda r: r.code)


def _params_key(n, genus, components):
    return {"n": n, "genus": genus, "components": components}


def census(n: int, genus: Optional[int] = None, components: Optional[int] = None,
           budget: Optional[Budget] = None, workers: int = 1, checkpoint=None,
           resume: Optional[dict] = None, split_depth: Optional[int] = None,
           progress=None) -> list:
    """One record per class of connected minimal maps with ``n`` crossings.

    ``checkpoint`` is a JSON file updated after each finished work item;
    an existing file with the same parameters is resumed automatically.
    Raises :class:`BudgetExceeded` when ``budget`` runs out.
    """
    if n < 1:
        raise ValueError("census needs n >= 1")
    if n == 1:
        return naive_census(1, genus, components)
    budget = budget or Budget()
    params = _params_key(n, genus, components)
    done: dict = {}
    if resume is not None:
        if resume.get("params") != params:
            raise ValueError("resume state belongs to a different census")
        done = {tuple(k): [tuple(p) for p in v] for k, v in resume["done"]}
    if checkpoint is not None and Path(checkpoint).exists():
        saved = json.loads(Path(checkpoint).read_text())
        if saved.get("params") == params:
            for k, v in saved["done"]:
                done.setdefault(tuple(k), [tuple(p) for p in v])
    probe = _Search(n, genus, components)
    depth = split_depth if split_depth is not None else min(n, 4)
    items = [p for p in _expand(probe, depth) if p not in done]
    nodes_left = budget.nodes

    def state():
        return {"params": params, "done": [[list(k), [list(p) for p in v]] for k, v in sorted(done.items())]}

    def save():
        if checkpoint is not None:
            tmp = Path(str(checkpoint) + ".tmp")
            tmp.write_text(json.dumps(state()))
            os.replace(tmp, checkpoint)

    def finish(path, found, nodes):
        nonlocal nodes_left
        done[path] = found
        if nodes_left is not None:
            nodes_left -= nodes
        save()
        if progress is not None:
            progress(len(done), len(done) + len(items))

    failure = None
    if workers <= 1:
        for path in items:
            secs = budget.remaining_seconds()
            if (secs is not None and secs <= 0) or (nodes_left is not None and nodes_left <= 0):
                failure = "budget exhausted"
                break
            path, found, nodes, err = _run_item((n, genus, components, path, nodes_left, secs))
            if err:
                failure = err
                break
            finish(path, found, nodes)
    else:
        secs = budget.remaining_seconds()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            jobs = [(n, genus, components, p, nodes_left, secs) for p in items]
            for path, found, nodes, err in pool.map(_run_item, jobs, chunksize=1):
                if err:
                    failure = failure or err
                    continue
                finish(path, found, nodes)
    maps = sorted({P for v in done.values() for P in v})
    records = sorted((make_record(with_default_components(P)) for P in maps), key=lambda r: r.code)
    if failure:
        raise BudgetExceeded(f"census({n}) stopped: {failure}", records, state())
    return records


# ---------------------------------------------------------------------------
# the store


def _check_line(obj, lineno):
    if not isinstance(obj, dict):
        raise StoreError(f"line {lineno}: not a JSON object")
    if obj.get("schema") != STORE_SCHEMA or obj.get("version") != STORE_VERSION:
        raise StoreError(f"line {lineno}: schema mismatch")
    try:
        return CensusRecord.from_dict(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise StoreError(f"line {lineno}: bad record ({exc})") from exc


def store_read(path) -> list:
    path = Path(path)
    if not path.exists():
        return []
    out = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise StoreError(f"line {lineno}: corrupt JSON ({exc.msg})") from exc
            out.append(_check_line(obj, lineno))
    return out


def store_append(records, path) -> int:
    """Append records not yet present (by code); return how many were written."""
    path = Path(path)
    have = {r.code for r in store_read(path)}
    lines = []
    for r in records:
        if r.code in have:
            continue
        have.add(r.code)
        body = {"schema": STORE_SCHEMA, "version": STORE_VERSION, **r.to_dict()}
        lines.append(json.dumps(body, sort_keys=True))
    if lines:
        with path.open("a", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    return len(lines)


def store_query(query: CensusQuery, path) -> list:
    return [r for r in store_read(path) if query.matches(r)]


# ---------------------------------------------------------------------------
# claims


@dataclass
class ClaimResult:
    name: str
    passed: Optional[bool]
    detail: str
    seconds: float = 0.0


def _claim(name, fn):
    t0 = time.monotonic()
    try:
        ok, detail = fn()
    except BudgetExceeded as exc:
        ok, detail = False, str(exc)
    return ClaimResult(name, ok, detail, time.monotonic() - t0)


def _faces_are(records, want):
    return [r.faces for r in records] == [want]


def verify_census_claims(extended: bool = False, workers: int = 1, budget_seconds=None,
                         max_small: int = 5) -> list:
    """Run the planar and small censuses and check what is known about them."""

    def budget():
        return Budget(seconds=budget_seconds)

    results = []

    def planar(n, want_count, want_faces=None, components=None):
        def fn():
            recs = census(n, genus=0, components=components, budget=budget(), workers=workers)
            ok = len(recs) == want_count and (want_faces is None or _faces_are(recs, want_faces))
            return ok, f"{len(recs)} classes, faces {[r.faces for r in recs]}"
        return fn

    for k in range(1, 6):
        results.append(_claim(f"no planar minimal map with {k} crossing{'s' if k > 1 else ''}", planar(k, 0)))
    results.append(_claim("one planar minimal map with 6 crossings", planar(6, 1, {3: 8})))
    results.append(_claim("no planar minimal map with 7 crossings", planar(7, 0)))
    results.append(_claim("one planar minimal map with 8 crossings", planar(8, 1, {3: 8, 4: 2})))

    def small():
        bad = []
        sizes = []
        for k in range(1, max_small + 1):
            recs = census(k, budget=budget(), workers=workers)
            sizes.append(len(recs))
            for r in recs:
                m = r.to_map()
                rep = check_identities(m)
                if not rep.passed or r.fundamental != is_fundamental(m):
                    bad.append(r.code)
        return not bad, f"class counts {sizes}; failures {bad[:3]}"

    results.append(_claim(f"identities hold on census(n) for n <= {max_small}", small))

    def hopf_only():
        recs = census(1)
        return len(recs) == 1 and recs[0].genus == 1 and recs[0].components == 2, f"{len(recs)} classes"

    results.append(_claim("census(1) is the Hopf map", hopf_only))
    if extended:
        results.append(_claim("one planar minimal map with 9 crossings", planar(9, 1, {3: 8, 4: 3})))
        results.append(_claim("one planar two-component minimal map with 10 crossings",
                              planar(10, 1, components=2)))
    return results


__all__ = [
    "Budget",
    "BudgetExceeded",
    "CensusQuery",
    "CensusRecord",
    "ClaimResult",
    "StoreError",
    "census",
    "is_least_normal_form",
    "make_record",
    "naive_census",
    "store_append",
    "store_query",
    "store_read",
    "verify_census_claims",
]
