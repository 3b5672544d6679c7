import json

import pytest

from doodlekit.canonical import canonical_code
from doodlekit.core import check_identities
from doodlekit.enumeration import (
    Budget,
    BudgetExceeded,
    CensusQuery,
    StoreError,
    census,
    is_least_normal_form,
    make_record,
    naive_census,
    store_append,
    store_query,
    store_read,
)
from doodlekit.families import borromean, hopf
from doodlekit.moves import is_minimal


@pytest.mark.parametrize("n", [1, 2, 3])
def test_census_matches_brute_force(n):
    assert [r.code for r in census(n)] == [r.code for r in naive_census(n)]


def test_small_counts():
    assert [len(census(n)) for n in range(1, 5)] == [1, 2, 10, 84]
    assert len(census(3, components=1)) == 1
    assert len(census(4, components=1)) == 19


def test_census_one_is_hopf():
    (r,) = census(1)
    assert r.code == canonical_code(hopf(), "unoriented,unordered").hex()
    assert (r.genus, r.components) == (1, 2)


def test_records_are_minimal_and_consistent():
    for r in census(4):
        m = r.to_map()
        assert is_minimal(m)
        assert check_identities(m).passed
        assert make_record(m) == r


def test_planar_censuses():
    assert [len(census(n, genus=0)) for n in range(1, 8)] == [0, 0, 0, 0, 0, 1, 0]
    (r,) = census(8, genus=0)
    assert r.code == canonical_code(borromean(4), "unoriented,unordered").hex()
    assert r.faces == {3: 8, 4: 2}


def test_genus_filter_partitions_the_census():
    full = census(4)
    split = [r for g in range(4) for r in census(4, genus=g)]
    assert sorted(r.code for r in split) == sorted(r.code for r in full)


def test_least_normal_form_rejects_a_relabelling():
    from doodlekit.canonical import bfs_code

    # the Borromean map is dart-transitive, so every start gives one code
    m = borromean(3)
    assert len({bfs_code(m.pairing, s)[0] for s in range(m.n_darts)}) == 1
    m = census(4, genus=1)[0].to_map()
    codes = [bfs_code(m.pairing, s)[0] for s in range(m.n_darts)]
    assert is_least_normal_form(list(min(codes)), 4)
    assert max(codes) != min(codes)
    assert not is_least_normal_form(list(max(codes)), 4)


def test_worker_count_does_not_change_the_result():
    assert census(5, workers=1) == census(5, workers=3)


def test_node_budget_and_resume(tmp_path):
    ckpt = tmp_path / "c.json"
    with pytest.raises(BudgetExceeded) as info:
        census(5, budget=Budget(nodes=2000), checkpoint=ckpt)
    partial = info.value.records
    assert ckpt.exists()
    full = census(5, checkpoint=ckpt)
    assert {r.code for r in partial} <= {r.code for r in full}
    assert full == census(5)


def test_resume_from_state():
    with pytest.raises(BudgetExceeded) as info:
        census(5, budget=Budget(nodes=3000))
    assert census(5, resume=info.value.state) == census(5)
    with pytest.raises(ValueError):
        census(4, resume=info.value.state)


def test_time_budget():
    with pytest.raises(BudgetExceeded):
        census(6, budget=Budget(seconds=0.0))


def test_store_round_trip(tmp_path):
    path = tmp_path / "store.jsonl"
    recs = census(3)
    assert store_append(recs, path) == len(recs)
    assert store_append(recs, path) == 0
    assert store_read(path) == recs
    planar = store_query(CensusQuery(genus=1), path)
    assert planar == [r for r in recs if r.genus == 1]
    assert store_query(CensusQuery(faces={1: 1}), path) == []


def test_store_errors(tmp_path):
    path = tmp_path / "store.jsonl"
    store_append(census(2), path)
    with path.open("a") as fh:
        fh.write("{broken\n")
    with pytest.raises(StoreError, match="line 3"):
        store_read(path)
    other = tmp_path / "other.jsonl"
    body = census(1)[0].to_dict()
    other.write_text(json.dumps({"schema": "something", "version": 1, **body}) + "\n")
    with pytest.raises(StoreError, match="schema"):
        store_read(other)


def test_bad_n():
    with pytest.raises(ValueError):
        census(0)
