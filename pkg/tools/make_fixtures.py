"""Regenerate the PD fixtures shipped in src/doodlekit/data.

The published drawings are not available as data, so every fixture is
rebuilt from the census and the codec, then written as a planar PD drawing.
Run from the repository root:  python3 tools/make_fixtures.py
"""

from __future__ import annotations

from pathlib import Path

from doodlekit.canonical import canonical_code
from doodlekit.codec import emit_gauss, format_pd, format_gauss, parse_gauss
from doodlekit.core import genus
from doodlekit.enumeration import _Search, census
from doodlekit.moves import reduce
from doodlekit.virtualization import planarize

DATA = Path(__file__).resolve().parent.parent / "src" / "doodlekit" / "data"


def write(name, m, notes):
    doc = planarize(m)
    code = canonical_code(m, "unoriented,unordered").hex()
    head = [f"{name}: {line}" if i == 0 else line for i, line in enumerate(notes)]
    head += [
        f"crossings {m.n_crossings}, components {m.n_components}, genus {genus(m)[1]}, "
        f"virtual crossings {doc.n_virtual}",
        f"code {code}",
        "gauss " + format_gauss(emit_gauss(m)).strip().replace("\n", " | "),
    ]
    text = "".join(f"# {h}\n" for h in head) + format_pd(doc)
    (DATA / f"{name}.pd").write_text(text, encoding="utf-8")
    print(name, doc.n_real, doc.n_virtual)


def split_sum(m):
    """Halves (as Gauss texts) if the one-line Gauss word is a 2+2 concatenation."""
    (line,) = emit_gauss(m).lines
    k = len(line)
    for r in range(k):
        word = line[r:] + line[:r]
        a, b = word[: k // 2], word[k // 2:]
        if not {x for x, _ in a} & {x for x, _ in b}:
            fmt = lambda w: " ".join(f"{x}{s}" for x, s in w) + "\n"
            return fmt(a), fmt(b)
    return None


def first_found(n, g, components):
    class One(_Search):
        def _leaf(self, st):
            super()._leaf(st)
            if self.found:
                raise StopIteration

    s = One(n, g, components)
    try:
        s.run(s.initial())
    except StopIteration:
        pass
    from doodlekit.core import with_default_components

    return with_default_components(s.found[0])


def main():
    (d31,) = census(3, components=1)
    write("d3.1", d31.to_map(), ["the one-component minimal diagram with 3 crossings",
                                 "rebuilt from census(3, components=1); chirality is the census representative"])
    d4 = census(4, components=1)
    assert len(d4) == 19, len(d4)
    for i, r in enumerate(d4, 1):
        write(f"d4.{i}", r.to_map(), [f"one-component minimal diagram with 4 crossings, number {i} of 19",
                                      "rebuilt from census(4, components=1), numbered by canonical code order"])
    for r in d4:
        m = r.to_map()
        halves = split_sum(m)
        if r.genus != 2 or halves is None:
            continue
        if all(reduce(parse_gauss(h)).n_crossings == 0 for h in halves):
            write("kishino", m, ["connected sum of two 2-crossing diagrams that are each trivial,",
                                 "whose sum is minimal with 4 crossings on a genus-2 surface",
                                 "summands " + " / ".join(h.strip() for h in halves)])
            break
    else:
        raise SystemExit("no connected-sum candidate found")
    write("fig19", first_found(8, 1, 1), ["a one-component minimal diagram with 8 crossings on the torus",
                                          "first hit of a depth-first census(8, genus=1, components=1)"])
    write("fig20", parse_gauss("1+ 2+\n1-\n2-\n"), ["a meridian crossing two parallel longitudes of a torus",
                                                      "genus 1 but every planar drawing needs 2 virtual crossings"])


if __name__ == "__main__":
    main()
