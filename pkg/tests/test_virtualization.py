import random

import pytest

from doodlekit.canonical import canonical_code
from doodlekit.codec import format_pd, parse_pd, parse_pd_text
from doodlekit.core import genus
from doodlekit.enumeration import census
from doodlekit.families import FIXTURE_NAMES, borromean, fixture, gyro, hopf, ortho, trivial
from doodlekit.moves import random_expansion, reduce
from doodlekit.virtualization import (
    add_real_kink,
    add_virtual_bigon,
    add_virtual_kink,
    drawing_genus,
    gauss_data_equal,
    planarize,
    virtual_area_number,
    virtual_doodle_equal,
)


def test_planar_maps_need_no_virtual_crossings():
    for m in (borromean(3), borromean(7), gyro(4), ortho(3)):
        doc = planarize(m)
        assert doc.n_virtual == 0
        assert canonical_code(parse_pd(doc)) == canonical_code(m)


def test_hopf_needs_a_virtual_crossing():
    doc = planarize(hopf())
    assert doc.n_virtual >= 1
    assert genus(parse_pd(doc))[1] == 1
    assert virtual_area_number(doc) == 1


def test_trivial_circle_drawing():
    assert format_pd(planarize(trivial())) == "O(1)\n"


@pytest.mark.parametrize("seed", range(5))
def test_drawings_are_planar_and_faithful(seed):
    rng = random.Random(seed)
    base = rng.choice([hopf(), borromean(3), gyro(3), trivial(1)])
    m = random_expansion(base, rng, 5)
    doc = planarize(m, seed=seed)
    assert drawing_genus(doc) == 0
    assert canonical_code(parse_pd(doc)) == canonical_code(m)


def test_genus_two_census_maps_round_trip():
    for r in census(4, components=1):
        m = r.to_map()
        doc = planarize(m)
        assert drawing_genus(doc) == 0
        assert canonical_code(parse_pd(doc)) == canonical_code(m)


def test_detour_moves_keep_gauss_data():
    doc = planarize(borromean(3))
    kinked = add_virtual_kink(doc, "1")
    assert drawing_genus(kinked) == 0 and kinked.n_virtual == 1
    assert gauss_data_equal(doc, kinked)
    bigon = add_virtual_bigon(doc, "1", "2")
    assert drawing_genus(bigon) == 0 and bigon.n_virtual == 2
    assert gauss_data_equal(doc, bigon)
    assert virtual_area_number(bigon) == 0


def test_virtual_bigon_needs_a_shared_face():
    doc = planarize(gyro(3))
    labels = sorted({lab for node in doc.nodes for lab in node.labels}, key=int)
    refused = 0
    for lab in labels[1:]:
        try:
            add_virtual_bigon(doc, labels[0], lab)
        except ValueError:
            refused += 1
    assert 0 < refused < len(labels) - 1


def test_real_kink_changes_gauss_data_but_not_the_doodle():
    doc = planarize(borromean(3))
    kinked = add_real_kink(doc, "3")
    assert not gauss_data_equal(doc, kinked)
    assert virtual_doodle_equal(doc, kinked)


def test_two_planarizations_of_a_minimal_map_are_detour_related():
    m = gyro(3)
    assert gauss_data_equal(planarize(m, seed=1), planarize(m, seed=2))
    h = random_expansion(hopf(), random.Random(4), 2)
    assert gauss_data_equal(planarize(h, seed=1), planarize(h, seed=7))


def test_curl_and_circle():
    curl = parse_pd_text("X(a,a,b,b)")
    circle = parse_pd_text("O(a)")
    assert not gauss_data_equal(curl, circle)
    assert virtual_doodle_equal(curl, circle)


def test_fixture_round_trips():
    for name in FIXTURE_NAMES:
        m = parse_pd(fixture(name))
        doc = planarize(m)
        assert canonical_code(parse_pd(doc)) == canonical_code(m)
        assert virtual_area_number(doc) == genus(reduce(m))[1]


def test_fig20_needs_two_virtual_crossings_for_genus_one():
    doc = fixture("fig20")
    assert doc.n_virtual == 2 and drawing_genus(doc) == 0
    assert virtual_area_number(doc) == 1
