"""Tests for the q sweep: records, caching, parallelism, table rows."""

from __future__ import annotations

import json

import pytest

from pratcert._version import __version__
from pratcert.arith import primes_up_to
from pratcert.criteria import (
    CERTIFIED_FREE,
    NOT_CERTIFIED,
    SCHEMA_VERSION,
    certify_freeness,
)
from pratcert.scan import (
    ScanRecord,
    TableRow,
    _validate_emitted,
    record_for,
    reproduce_table,
    scan_q,
    scan_records,
)


def lines_of(records: list[ScanRecord]) -> list[str]:
    return [rec.to_json_line() for rec in records]


def test_record_for_wraps_direct_certification() -> None:
    rec = record_for(7, 13, 2)
    report = certify_freeness(7, 13, 2, exact=False, lazy=True)
    assert rec.schema_version == SCHEMA_VERSION
    assert rec.tool_version == __version__
    assert (rec.p, rec.q, rec.d) == (7, 13, 2)
    assert rec.verdict == CERTIFIED_FREE == report.verdict
    assert rec.rank == 2
    assert rec.facts["reasons"] == []
    assert "invalid" not in rec.facts
    base = dict(rec.facts)
    del base["reasons"]
    assert base == dict(report.facts)


def test_record_for_invalid_candidate_lists_violations() -> None:
    # -2 = 6**2 (mod 19), so q=19 fails the residue condition for d=2
    rec = record_for(5, 19, 2)
    assert rec.verdict == NOT_CERTIFIED
    assert rec.rank is None
    assert rec.facts == {
        "reasons": ["parameters are outside the certified family"],
        "invalid": ["-d must be a quadratic non-residue modulo q"],
    }


def test_json_line_is_canonical_and_round_trips() -> None:
    for args in ((7, 13, 2), (5, 19, 2), (5, 149, 2)):
        rec = record_for(*args)
        line = rec.to_json_line()
        obj = json.loads(line)
        assert ScanRecord.from_json_obj(obj) == rec
        assert line == json.dumps(obj, sort_keys=True, separators=(",", ":"))
        assert "\n" not in line


def test_from_json_obj_rejects_malformed_records() -> None:
    good = json.loads(record_for(7, 13, 2).to_json_line())
    cases = [
        ([1, 2], "record must be a JSON object"),
        ({**good, "q": "13"}, "field q must be an integer"),
        ({**good, "tool_version": 1}, "field tool_version must be a string"),
        ({**good, "verdict": "MAYBE"}, "unknown verdict"),
        ({**good, "rank": "2"}, "field rank must be an integer or null"),
        ({**good, "facts": []}, "field facts must be an object"),
    ]
    missing = dict(good)
    del missing["schema_version"]
    cases.append((missing, "field schema_version must be an integer"))
    for obj, message in cases:
        with pytest.raises(ValueError, match=message):
            ScanRecord.from_json_obj(obj)


def test_scan_q_known_rows() -> None:
    assert scan_q(7, 2, 500) == [13, 167, 181, 223, 461]
    assert scan_q(5, 2, 120) == [79, 109]
    assert scan_q(29, 2, 500) == [173, 463]


def test_scan_records_covers_every_candidate() -> None:
    records = scan_records(5, 2, 120)
    assert [rec.q for rec in records] == [19, 29, 59, 79, 89, 109]
    assert [rec.q for rec in records if rec.verdict == CERTIFIED_FREE] == [79, 109]
    by_q = {rec.q: rec for rec in records}
    assert "invalid" in by_q[19].facts
    assert "invalid" not in by_q[29].facts
    assert by_q[29].facts["reasons"]
    expected = [q for q in primes_up_to(120) if (q + 1) % 5 == 0]
    assert [rec.q for rec in records] == expected


def test_scan_records_rejects_bad_inputs() -> None:
    for p in (4, 1, -5, 15):
        with pytest.raises(ValueError, match="p must be a prime >= 5"):
            scan_records(p, 2, 100)
    with pytest.raises(ValueError, match="q_max must be >= 0"):
        scan_records(5, 2, -1)
    with pytest.raises(ValueError, match="jobs must be >= 1"):
        scan_records(5, 2, 100, jobs=0)


def test_cache_file_contains_exact_record_lines(tmp_path) -> None:
    cache = tmp_path / "scan.jsonl"
    records = scan_records(5, 2, 200, cache=str(cache))
    assert [rec.q for rec in records] == [19, 29, 59, 79, 89, 109, 139, 149, 179, 199]
    assert cache.read_text(encoding="utf-8").splitlines() == lines_of(records)


def test_rerun_with_cache_recomputes_nothing(tmp_path) -> None:
    cache = tmp_path / "scan.jsonl"
    first = scan_records(5, 2, 200, cache=str(cache))
    before = cache.read_text(encoding="utf-8")
    second = scan_records(5, 2, 200, cache=str(cache))
    assert lines_of(second) == lines_of(first)
    assert cache.read_text(encoding="utf-8") == before


def test_partial_cache_resumes_to_identical_records(tmp_path) -> None:
    baseline = lines_of(scan_records(5, 2, 200))
    cache = tmp_path / "scan.jsonl"
    cache.write_text("\n".join(baseline[:4]) + "\n", encoding="utf-8")
    resumed = scan_records(5, 2, 200, cache=str(cache))
    assert lines_of(resumed) == baseline
    stored = cache.read_text(encoding="utf-8").splitlines()
    assert sorted(stored) == sorted(baseline)


def test_corrupt_cache_line_warns_and_recomputes(tmp_path, capsys) -> None:
    baseline = lines_of(scan_records(5, 2, 200))
    cache = tmp_path / "scan.jsonl"
    truncated = baseline[3][: len(baseline[3]) // 2]
    cache.write_text("\n".join(baseline[:3] + [truncated]) + "\n", encoding="utf-8")
    resumed = scan_records(5, 2, 200, cache=str(cache))
    err = capsys.readouterr().err
    assert f"warning: skipped 1 unreadable cache line(s) in {cache}" in err
    assert lines_of(resumed) == baseline


def test_stale_tool_version_line_is_recomputed(tmp_path) -> None:
    fresh = record_for(5, 19, 2)
    stale = json.loads(fresh.to_json_line())
    stale["tool_version"] = "0.0.0"
    cache = tmp_path / "scan.jsonl"
    cache.write_text(json.dumps(stale, sort_keys=True) + "\n", encoding="utf-8")
    records = scan_records(5, 2, 20, cache=str(cache))
    assert [rec.q for rec in records] == [19]
    assert records[0].tool_version == __version__
    assert records[0] == fresh


def test_foreign_cache_lines_are_ignored(tmp_path) -> None:
    # lines for another (p, d) parse fine but must not be reused
    cache = tmp_path / "scan.jsonl"
    cache.write_text(record_for(7, 13, 2).to_json_line() + "\n", encoding="utf-8")
    records = scan_records(5, 2, 20, cache=str(cache))
    assert [(rec.p, rec.q, rec.d) for rec in records] == [(5, 19, 2)]


def test_unusable_cache_paths_raise(tmp_path) -> None:
    with pytest.raises(ValueError, match="cannot read cache file"):
        scan_records(5, 2, 20, cache=str(tmp_path))
    with pytest.raises(ValueError, match="cannot append to cache file"):
        scan_records(5, 2, 20, cache=str(tmp_path / "missing" / "scan.jsonl"))


def test_worker_count_does_not_change_output(tmp_path) -> None:
    serial = scan_records(5, 2, 800, jobs=1)
    parallel = scan_records(5, 2, 800, jobs=4)
    assert lines_of(parallel) == lines_of(serial)
    cache = tmp_path / "scan.jsonl"
    with_cache = scan_records(5, 2, 800, cache=str(cache), jobs=4)
    assert lines_of(with_cache) == lines_of(serial)
    assert cache.read_text(encoding="utf-8").splitlines() == lines_of(serial)


def fake_record(p: int, q: int, d: int, verdict: str) -> ScanRecord:
    return ScanRecord(
        schema_version=SCHEMA_VERSION,
        tool_version=__version__,
        p=p,
        q=q,
        d=d,
        verdict=verdict,
        rank=2 if verdict == CERTIFIED_FREE else None,
        facts={},
    )


def test_certified_guard_rejects_congruence_violations() -> None:
    # q = -1 (mod p**2) must never appear as certified
    with pytest.raises(RuntimeError, match="violates the family congruences"):
        _validate_emitted([fake_record(5, 149, 2, CERTIFIED_FREE)])
    # nor may a q where -d is a square
    with pytest.raises(RuntimeError, match="p=5 q=19 d=2"):
        _validate_emitted([fake_record(5, 19, 2, CERTIFIED_FREE)])
    # non-certified records are exempt from the guard
    _validate_emitted([fake_record(5, 149, 2, NOT_CERTIFIED)])
    _validate_emitted([fake_record(7, 13, 2, CERTIFIED_FREE)])


def test_reproduce_table_rows_and_error_isolation() -> None:
    assert reproduce_table([5], 0, 2) == [TableRow(p=5, certified=(), error=None)]
    rows = reproduce_table([4, 7], 120, 2)
    assert rows[0] == TableRow(
        p=4, certified=(), error="ValueError: p must be a prime >= 5"
    )
    assert rows[1] == TableRow(p=7, certified=(13,), error=None)
