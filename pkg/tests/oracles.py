"""Slow, obviously-correct reference implementations used by the tests."""

from doodlekit.core import DoodleMap, with_default_components


def brute_isomorphic(p, q) -> bool:
    """Rotation-preserving isomorphism of two connected pairings, by trying every root image."""
    if len(p) != len(q):
        return False
    if not p:
        return True
    for target in range(len(q)):
        # map dart 0 to target; rotations force the rest of its crossing
        f = {}
        stack = [(0, target)]
        ok = True
        while stack and ok:
            a, b = stack.pop()
            for s in range(4):
                da = (a & ~3) | ((a + s) & 3)
                db = (b & ~3) | ((b + s) & 3)
                if da in f:
                    if f[da] != db:
                        ok = False
                        break
                    continue
                if db in f.values():
                    ok = False
                    break
                f[da] = db
                stack.append((p[da], q[db]))
        if ok and len(f) == len(p) and all(f[p[d]] == q[f[d]] for d in f):
            return True
    return False


def faces_by_hand(pairing):
    """Face orbits with an explicit successor table."""
    succ = {}
    for d in range(len(pairing)):
        e = pairing[d]
        succ[d] = 4 * (e // 4) + (e % 4 + 3) % 4
    seen, faces = set(), []
    for d in range(len(pairing)):
        if d in seen:
            continue
        face = []
        while d not in seen:
            seen.add(d)
            face.append(d)
            d = succ[d]
        faces.append(face)
    return faces


def all_pairings(n_darts):
    def rec(rest, acc):
        if not rest:
            yield tuple(acc)
            return
        a = rest[0]
        for i in range(1, len(rest)):
            b = rest[i]
            acc[a], acc[b] = b, a
            yield from rec(rest[1:i] + rest[i + 1:], acc)

    yield from rec(list(range(n_darts)), [0] * n_darts)


def as_map(pairing) -> DoodleMap:
    return with_default_components(pairing)
