"""Sweep over q for fixed (p, d), with a resumable line cache.

Candidate evaluations are pure, so they parallelize freely; the output is
assembled in ascending q regardless of worker count, and a record cache
(append-only JSON lines) makes interrupted scans resumable without ever
trusting a stale or foreign line.
"""

from __future__ import annotations

import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Iterable, Iterator

from ._version import __version__
from .arith import is_prime, kronecker, primes_up_to
from .criteria import CERTIFIED_FREE, NOT_CERTIFIED, SCHEMA_VERSION, certify_freeness

__all__ = [
    "ScanRecord",
    "TableRow",
    "record_for",
    "reproduce_table",
    "scan_q",
    "scan_records",
]


@dataclass(frozen=True)
class ScanRecord:
    """One cached certification outcome for a single (p, q, d).

    facts carries every quantity the verdict consumed plus the failure
    reasons, so the verdict can be re-derived without recomputation.
    """

    schema_version: int
    tool_version: str
    p: int
    q: int
    d: int
    verdict: str
    rank: int | None
    facts: dict[str, Any]

    def to_json_line(self) -> str:
        payload = {
            "schema_version": self.schema_version,
            "tool_version": self.tool_version,
            "p": self.p,
            "q": self.q,
            "d": self.d,
            "verdict": self.verdict,
            "rank": self.rank,
            "facts": self.facts,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: dict[str, Any]) -> "ScanRecord":
        if not isinstance(obj, dict):
            raise ValueError("record must be a JSON object")
        for key in ("schema_version", "p", "q", "d"):
            if not isinstance(obj.get(key), int):
                raise ValueError(f"field {key} must be an integer")
        if not isinstance(obj.get("tool_version"), str):
            raise ValueError("field tool_version must be a string")
        if obj.get("verdict") not in (CERTIFIED_FREE, NOT_CERTIFIED):
            raise ValueError("unknown verdict")
        rank = obj.get("rank")
        if rank is not None and not isinstance(rank, int):
            raise ValueError("field rank must be an integer or null")
        if not isinstance(obj.get("facts"), dict):
            raise ValueError("field facts must be an object")
        return cls(
            schema_version=obj["schema_version"],
            tool_version=obj["tool_version"],
            p=obj["p"],
            q=obj["q"],
            d=obj["d"],
            verdict=obj["verdict"],
            rank=rank,
            facts=obj["facts"],
        )


def record_for(p: int, q: int, d: int) -> ScanRecord:
    """Certify one candidate on the reduced-unit path and wrap the outcome."""
    report = certify_freeness(p, q, d, exact=False, lazy=True)
    facts = dict(report.facts)
    facts["reasons"] = list(report.reasons)
    if report.invalid:
        facts["invalid"] = list(report.invalid)
    return ScanRecord(
        schema_version=SCHEMA_VERSION,
        tool_version=__version__,
        p=p,
        q=q,
        d=d,
        verdict=report.verdict,
        rank=report.rank,
        facts=facts,
    )


def _worker(args: tuple[int, int, int]) -> ScanRecord:
    return record_for(*args)


def _load_cache(path: str, p: int, d: int) -> dict[int, ScanRecord]:
    """Cached records for this (p, d) keyed by q; bad lines warn and skip."""
    records: dict[int, ScanRecord] = {}
    corrupt = 0
    try:
        fh = open(path, encoding="utf-8")
    except FileNotFoundError:
        return records
    except OSError as exc:
        raise ValueError(f"cannot read cache file {path}: {exc}") from exc
    with fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                rec = ScanRecord.from_json_obj(json.loads(line))
            except ValueError:
                corrupt += 1
                continue
            if (
                rec.schema_version == SCHEMA_VERSION
                and rec.tool_version == __version__
                and rec.p == p
                and rec.d == d
            ):
                records[rec.q] = rec
    if corrupt:
        print(
            f"warning: skipped {corrupt} unreadable cache line(s) in {path}",
            file=sys.stderr,
        )
    return records


def _compute(todo: list[tuple[int, int, int]], jobs: int) -> Iterator[ScanRecord]:
    if jobs <= 1 or len(todo) <= 1:
        for args in todo:
            yield _worker(args)
        return
    chunksize = max(1, len(todo) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(_worker, todo, chunksize=chunksize)


def scan_records(
    p: int, d: int, q_max: int, *, cache: str | None = None, jobs: int = 1
) -> list[ScanRecord]:
    """Records for every candidate prime q <= q_max with q = -1 (mod p).

    Results arrive in ascending q independently of worker count.  With a
    cache path, records matching (schema_version, tool_version, p, d) are
    reused and fresh ones appended, so a rerun after an interruption picks
    up where it stopped.  Candidates outside the family (for instance a d
    that fails the residue conditions) produce NOT_CERTIFIED records whose
    facts list the violations.
    """
    if p < 5 or not is_prime(p):
        raise ValueError("p must be a prime >= 5")
    if q_max < 0:
        raise ValueError("q_max must be >= 0")
    if jobs < 1:
        raise ValueError("jobs must be >= 1")
    candidates = [q for q in primes_up_to(q_max) if (q + 1) % p == 0]
    cached: dict[int, ScanRecord] = {}
    if cache is not None:
        cached = _load_cache(cache, p, d)
    todo = [(p, q, d) for q in candidates if q not in cached]
    fresh: dict[int, ScanRecord] = {}
    if todo:
        out = None
        if cache is not None:
            try:
                out = open(cache, "a", encoding="utf-8")
            except OSError as exc:
                raise ValueError(f"cannot append to cache file {cache}: {exc}") from exc
        try:
            for rec in _compute(todo, jobs):
                fresh[rec.q] = rec
                if out is not None:
                    out.write(rec.to_json_line() + "\n")
                    out.flush()
        finally:
            if out is not None:
                out.close()
    records = [cached[q] if q in cached else fresh[q] for q in candidates]
    _validate_emitted(records)
    return records


def _validate_emitted(records: Iterable[ScanRecord]) -> None:
    # post-hoc guard: every certified q must satisfy the family congruences
    for rec in records:
        if rec.verdict != CERTIFIED_FREE:
            continue
        ok = (
            (rec.q + 1) % rec.p == 0
            and (rec.q + 1) % (rec.p * rec.p) != 0
            and kronecker(-rec.d, rec.q) == -1
        )
        if not ok:
            raise RuntimeError(
                f"certified record violates the family congruences: "
                f"p={rec.p} q={rec.q} d={rec.d}"
            )


def scan_q(
    p: int, d: int, q_max: int, cache: str | None = None, jobs: int = 1
) -> list[int]:
    """Ascending list of certified q <= q_max for the given (p, d)."""
    return [
        rec.q
        for rec in scan_records(p, d, q_max, cache=cache, jobs=jobs)
        if rec.verdict == CERTIFIED_FREE
    ]


@dataclass(frozen=True)
class TableRow:
    """One table row: certified q values for a single p, or an error note."""

    p: int
    certified: tuple[int, ...]
    error: str | None


def reproduce_table(
    p_list: list[int], q_max: int, d: int, *, jobs: int = 1
) -> list[TableRow]:
    """One row per p; a failing row records its error without aborting the rest."""
    rows: list[TableRow] = []
    for p in p_list:
        try:
            qs = scan_q(p, d, q_max, jobs=jobs)
        except Exception as exc:
            rows.append(
                TableRow(p=p, certified=(), error=f"{type(exc).__name__}: {exc}")
            )
        else:
            rows.append(TableRow(p=p, certified=tuple(qs), error=None))
    return rows
