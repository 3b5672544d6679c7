import random

import pytest

from doodlekit.canonical import (
    CanonicalCode,
    canonical_code,
    canonical_form,
    doodle_equal,
    genus_of_doodle,
    is_isomorphic,
    is_trivial_doodle,
)
from doodlekit.core import DoodleMap, is_connected, mirror, relabel
from doodlekit.families import borromean, gyro, hopf, ortho, trivial
from doodlekit.moves import apply_h1_plus, random_expansion

from oracles import all_pairings, as_map, brute_isomorphic

MODES = ["unoriented,unordered", "oriented,unordered", "unoriented,ordered", "oriented,ordered"]


def _random_relabel(m, rng):
    perm = list(range(m.n_crossings))
    rng.shuffle(perm)
    return relabel(m, perm, [rng.randrange(4) for _ in perm])


def test_codes_agree_with_brute_force_isomorphism():
    # every connected 2-crossing pairing against every other
    maps = [m for m in map(as_map, all_pairings(8)) if is_connected(m)]
    sample = random.Random(0).sample(maps, 60)
    for a in sample:
        for b in sample:
            same = is_isomorphic(a, b)
            assert same == brute_isomorphic(a.pairing, b.pairing)


@pytest.mark.parametrize("mode", MODES)
def test_code_is_invariant_under_relabelling(mode):
    rng = random.Random(1)
    for m in (borromean(5), gyro(3), ortho(3), hopf()):
        m = m.with_mode(mode)
        assert canonical_code(_random_relabel(m, rng)) == canonical_code(m)


@pytest.mark.parametrize("mode", MODES)
def test_bytes_and_hex_round_trip(mode):
    code = canonical_code(gyro(4), mode)
    assert CanonicalCode.from_bytes(code.to_bytes()) == code
    assert CanonicalCode.from_hex(code.hex()) == code
    assert code.hex().startswith("dc1-")


@pytest.mark.parametrize("mode", MODES)
def test_canonical_form_has_the_same_code(mode):
    for m in (gyro(3), borromean(6), hopf(), apply_h1_plus(trivial(2), circle=1)):
        m = m.with_mode(mode)
        assert canonical_code(canonical_form(m)) == canonical_code(m)


def test_reversing_components_matters_only_when_oriented():
    from itertools import product

    m = gyro(3)
    variants = []
    for flips in product((0, 1), repeat=m.n_components):
        comps = tuple(m.pairing[c] if f else c for c, f in zip(m.components, flips))
        variants.append(DoodleMap(m.pairing, comps))
    assert len({canonical_code(v) for v in variants}) == 1
    assert len({canonical_code(v, "oriented") for v in variants}) > 1


def test_mirror_is_not_identified():
    from doodlekit.enumeration import census

    chiral = [r for r in census(4, components=1)
              if canonical_code(mirror(r.to_map())).hex() != r.code]
    assert chiral, "expected at least one chiral class"


def test_doodle_equal_after_expansion():
    rng = random.Random(5)
    for _ in range(20):
        m = random_expansion(borromean(3), rng, 4)
        assert doodle_equal(m, borromean(3))
        assert genus_of_doodle(m) == 0


def test_trivial_doodles():
    assert is_trivial_doodle(apply_h1_plus(trivial(), circle=0))
    assert not is_trivial_doodle(hopf())
