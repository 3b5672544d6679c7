import json
import random

import pytest

from doodlekit.canonical import canonical_code
from doodlekit.codec import (
    ParseError,
    emit_gauss,
    format_gauss,
    format_pd,
    from_json,
    parse_gauss,
    parse_gauss_text,
    parse_pd,
    parse_pd_text,
    render_dot,
    render_svg,
    to_json,
)
from doodlekit.core import genus
from doodlekit.families import borromean, gyro, hopf, ortho, trivial
from doodlekit.moves import random_expansion, reduce

MODES = ["unoriented,unordered", "oriented,unordered", "unoriented,ordered", "oriented,ordered"]


def test_gauss_circle():
    m = parse_gauss("O\n")
    assert m.n_crossings == 0 and m.trivial_circles == 1
    assert format_gauss(emit_gauss(m)) == "O\n"


def test_gauss_curl_reduces_to_trivial():
    m = parse_gauss("1+ 1-")
    assert m.n_crossings == 1 and m.n_components == 1
    assert reduce(m).n_crossings == 0


def test_gauss_two_lines_give_hopf():
    m = parse_gauss("1+\n1-\n")
    assert genus(m)[1] == 1
    assert canonical_code(m) == canonical_code(hopf())


def test_emit_hopf_has_opposite_signs():
    doc = emit_gauss(hopf())
    assert [len(line) for line in doc.lines] == [1, 1]
    assert {doc.lines[0][0][1], doc.lines[1][0][1]} == {"+", "-"}


@pytest.mark.parametrize("text, message", [
    ("1+ 2+ 1-", "occurs 1 times"),
    ("1+ 1+", "orientation inconsistency"),
    ("1+ 1- x", "bad token"),
])
def test_gauss_errors(text, message):
    with pytest.raises(ParseError, match=message):
        parse_gauss(text)


def test_gauss_accepts_comments_and_unicode_minus():
    doc = parse_gauss_text("# hopf\n1+\n\n1−  # meridian\n")
    assert doc.lines == ((("1", "+"),), (("1", "-"),))


def test_cyclic_rotation_of_a_line_is_the_same_diagram():
    a = parse_gauss("1+ 2- 3+ 1- 2+ 3-")
    b = parse_gauss("3+ 1- 2+ 3- 1+ 2-")
    assert canonical_code(a) == canonical_code(b)


def test_emitted_signs_are_opposite():
    for m in (borromean(5), gyro(4), ortho(3)):
        signs = {}
        for line in emit_gauss(m).lines:
            for lab, sign in line:
                signs.setdefault(lab, []).append(sign)
        assert all(sorted(v) == ["+", "-"] for v in signs.values())


@pytest.mark.parametrize("mode", MODES)
def test_gauss_round_trip(mode):
    rng = random.Random(3)
    for seed in (hopf(), borromean(3), borromean(6), gyro(3), trivial(2)):
        for _ in range(5):
            m = random_expansion(seed, rng, rng.randint(0, 4)).with_mode(mode)
            assert canonical_code(parse_gauss(emit_gauss(m), mode)) == canonical_code(m)


def test_emit_gauss_is_deterministic():
    a = format_gauss(emit_gauss(gyro(3)))
    assert a == format_gauss(emit_gauss(gyro(3)))


def test_pd_examples():
    # slots 0/2 and 1/3 continue, so X(a,b,a,b) closes two loops: the Hopf map
    m = parse_pd("X(a,b,a,b)")
    assert m.n_components == 2 and genus(m)[1] == 1
    fig8 = parse_pd("X(a,a,b,b)")
    assert fig8.n_components == 1 and genus(fig8)[1] == 0
    loops = parse_pd("V(a,b,a,b)")
    assert loops.n_crossings == 0 and loops.trivial_circles == 2
    assert parse_pd("O(a)").trivial_circles == 1


@pytest.mark.parametrize("text, message", [
    ("X(a,b,c,d)", "occurs 1 times"),
    ("X(a,b,a)", "needs 4 labels"),
    ("X(a,a,b,b) junk", "unexpected text"),
])
def test_pd_errors(text, message):
    with pytest.raises(ParseError, match=message):
        parse_pd(text)


def test_pd_text_round_trip():
    doc = parse_pd_text("# note\nX(1,2,3,4)\nV(1,4,3,2)\n")
    assert parse_pd_text(format_pd(doc)) == doc
    assert doc.n_real == 1 and doc.n_virtual == 1


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_json_round_trip(n):
    m = borromean(n)
    assert canonical_code(from_json(to_json(m))) == canonical_code(m)


def test_json_round_trip_keeps_everything():
    m = random_expansion(hopf(), random.Random(0), 3).with_mode("oriented,ordered")
    assert from_json(to_json(m)) == m


def test_json_errors():
    body = json.loads(to_json(hopf()))
    del body["version"]
    with pytest.raises(ParseError, match="version"):
        from_json(json.dumps(body))
    with pytest.raises(ParseError, match="malformed"):
        from_json("{not json")
    bad = json.loads(to_json(hopf()))
    bad["pairing"] = [0, 1, 2, 3]
    with pytest.raises(ParseError):
        from_json(json.dumps(bad))


def test_render_markers():
    assert render_svg(parse_pd_text("X(a,b,a,b)")).count('class="virtual-crossing"') == 0
    two = parse_pd_text("X(1,2,3,4)\nV(1,5,6,7)\nV(6,7,3,8)\nX(2,5,4,8)\n")
    assert render_svg(two).count('class="virtual-crossing"') == 2
    assert render_svg(two).startswith("<svg")


def test_render_dot_counts():
    dot = render_dot(borromean(3))
    assert dot.count(" -- ") == 12
    assert sum(1 for line in dot.splitlines() if line.strip().startswith("c") and "--" not in line) == 6
