import pytest

from doodlekit.canonical import canonical_code, doodle_equal
from doodlekit.core import face_trace, genus, remove_component
from doodlekit.families import (
    FIXTURE_NAMES,
    borromean,
    central_component,
    family,
    fixture,
    gyro,
    hopf,
    ortho,
    trivial,
)
from doodlekit.moves import is_minimal, reduce


def expected_borromean_components(n):
    return 3 if n % 3 == 0 else 1


def expected_bicupola_components(n, gyro_kind):
    if gyro_kind:
        return 4 if n % 3 == 0 else 2
    return n + 1


@pytest.mark.parametrize("n", range(3, 13))
def test_borromean_components(n):
    m = borromean(n)
    assert m.n_components == expected_borromean_components(n)
    assert is_minimal(m) and genus(m)[1] == 0


@pytest.mark.parametrize("n", range(3, 11))
def test_bicupola_components(n):
    assert gyro(n).n_components == expected_bicupola_components(n, True)
    assert ortho(n).n_components == expected_bicupola_components(n, False)
    assert is_minimal(gyro(n)) and is_minimal(ortho(n))


def test_face_vectors():
    assert face_trace(borromean(4))[1].as_dict() == {3: 8, 4: 2}
    assert face_trace(gyro(3))[1].as_dict() == {3: 8, 4: 6}
    assert face_trace(ortho(3))[1].as_dict() == {3: 8, 4: 6}


def test_gyro3_minus_any_component_is_borromean():
    m = gyro(3)
    for i in range(m.n_components):
        assert doodle_equal(remove_component(m, i), borromean(3))


def test_ortho3_minus_central_component_is_trivial():
    m = ortho(3)
    out = reduce(remove_component(m, central_component(m, 3)))
    assert out.n_crossings == 0 and out.trivial_circles == 3


def test_family_lookup():
    assert canonical_code(family("poppy")) == canonical_code(borromean(4))
    assert family("hopf").n_crossings == 1
    assert family("trivial", 3).trivial_circles == 3
    with pytest.raises(KeyError):
        family("nonesuch")


def test_every_fixture_loads():
    for name in FIXTURE_NAMES:
        doc = fixture(name)
        assert doc.n_real >= 1


def test_hopf_and_trivial():
    assert genus(hopf())[1] == 1
    assert trivial(0).n_components == 0
