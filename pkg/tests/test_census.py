import io
import json

import pytest

from pfisterlab.census import ENV_VAR, FIELDS, CensusStore, default_store_path, run_census
from pfisterlab.curves import (CurveFamily, census_cell, compute_Sa, family_qs, threshold_from_records)
from pfisterlab.errors import ScanCeilingExceeded
from pfisterlab.fields import field_make


def test_cell_matches_compute_Sa():
    F = field_make("GF(13)")
    for a in F.raw_elements():
        rec = census_cell("quintic", 13, a)
        S = compute_Sa(CurveFamily("quintic", a), F)
        assert rec["S_a_size"] == len(S)
        assert rec["S_a_prime_covers_field"] == (len(set(F.raw_elements()) - {e.value for e in S} - {0, 1}) == 0)
        assert set(rec) == set(FIELDS)


def test_family_units():
    units = family_qs("auto", 32)
    assert ("artin-schreier", 8) in units and ("septic", 25) in units and ("quintic", 27) in units
    assert all(q != 6 for _, q in units)
    assert family_qs("quintic", 10) == [("quintic", q) for q in (3, 7, 9)]


def test_run_and_rerun(tmp_path):
    store = CensusStore(tmp_path / "c.jsonl")
    recs = run_census("auto", 23, store)
    assert len(recs) == sum(q for _, q in family_qs("auto", 23))
    size = store.path.stat().st_size
    again = run_census("auto", 23, store)
    assert again == recs and store.path.stat().st_size == size


def test_jobs_do_not_change_records(tmp_path):
    a = run_census("auto", 32, CensusStore(tmp_path / "a.jsonl"), jobs=1)
    b = run_census("auto", 32, CensusStore(tmp_path / "b.jsonl"), jobs=3)
    assert a == b
    ta = threshold_from_records("auto", a, 32)
    assert (ta.m, ta.m_prime) == (threshold_from_records("auto", b, 32).m, threshold_from_records("auto", b, 32).m_prime)


def test_malformed_lines_are_skipped(tmp_path):
    store = CensusStore(tmp_path / "c.jsonl")
    run_census("quintic", 7, store)
    n = len(store.records())
    with store.path.open("a") as fh:
        fh.write('{"family": "quintic", "q": 11, "a"')  # torn write
    assert len(store.records()) == n
    recs = run_census("quintic", 11, store)
    assert len(recs) == 3 + 7 + 9 + 11


def test_compact_and_export(tmp_path):
    store = CensusStore(tmp_path / "c.jsonl")
    run_census("quintic", 9, store)
    # duplicate a record: latest wins, compaction removes the duplicate
    first = json.loads(store.path.read_text().splitlines()[0])
    store.append([first])
    assert len(store.path.read_text().splitlines()) == 3 + 7 + 9 + 1
    assert store.compact() == 19
    lines = store.path.read_text().splitlines()
    assert len(lines) == 19
    keys = [(r["family"], r["q"], r["a"]) for r in map(json.loads, lines)]
    assert keys == sorted(keys)
    buf = io.StringIO()
    assert store.export_csv(buf) == 19
    rows = buf.getvalue().splitlines()
    assert rows[0] == ",".join(FIELDS) and len(rows) == 20


def test_env_var_store(monkeypatch, tmp_path):
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "env.jsonl"))
    assert default_store_path() == tmp_path / "env.jsonl"
    assert CensusStore().path == tmp_path / "env.jsonl"


def test_threshold_monotone_and_ceiling():
    from pfisterlab.curves import census_q
    records = [r for t, q in family_qs("auto", 60) for r in census_q(t, q)]
    th = threshold_from_records("auto", records, 60)
    assert th.m == 43 and th.m_prime == 17
    # any larger m also works
    for m in range(th.m_prime, 61):
        assert all(th.need[q] <= m for q in th.scanned if q > m)
    # failures logged as evidence, all at q <= m
    assert th.failures and all(f["q"] <= th.m for f in th.failures)
    small = [r for t, q in family_qs("auto", 5) for r in census_q(t, q)]
    with pytest.raises(ScanCeilingExceeded):
        threshold_from_records("auto", small, 5)
