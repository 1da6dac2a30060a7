"""Append-only JSON-lines store for census cells keyed by (family, q, a)."""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

from .curves import census_q, family_qs

ENV_VAR = "PFISTERLAB_STORE"
DEFAULT_STORE = "pfisterlab-census.jsonl"
FIELDS = ("family", "q", "a", "n_points", "S_a_size", "S_a_prime_covers_field", "min_m")


def default_store_path() -> Path:
    return Path(os.environ.get(ENV_VAR, DEFAULT_STORE))


class CensusStore:
    def __init__(self, path=None):
        self.path = Path(path) if path is not None else default_store_path()

    def records(self) -> List[dict]:
        """Latest record per key; malformed trailing lines (a crash mid-write) are skipped."""
        out: Dict[Tuple, dict] = {}
        if not self.path.exists():
            return []
        with self.path.open() as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError:
                    continue
                out[(rec["family"], rec["q"], rec["a"])] = rec
        return list(out.values())

    def completed_units(self) -> Dict[Tuple[str, int], int]:
        counts: Dict[Tuple[str, int], int] = {}
        for r in self.records():
            counts[(r["family"], r["q"])] = counts.get((r["family"], r["q"]), 0) + 1
        return counts

    def append(self, records: Iterable[dict]):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        torn = False
        if self.path.exists() and self.path.stat().st_size:
            with self.path.open("rb") as fh:
                fh.seek(-1, os.SEEK_END)
                torn = fh.read(1) != b"\n"
        with self.path.open("a") as fh:
            if torn:
                fh.write("\n")  # keep the fragment of an interrupted write on its own line
            for r in records:
                fh.write(json.dumps({k: r[k] for k in FIELDS}, sort_keys=True) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def compact(self) -> int:
        recs = sorted(self.records(), key=lambda r: (r["family"], r["q"], r["a"]))
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        with tmp.open("w") as fh:
            for r in recs:
                fh.write(json.dumps({k: r[k] for k in FIELDS}, sort_keys=True) + "\n")
        tmp.replace(self.path)
        return len(recs)

    def export_csv(self, out) -> int:
        recs = sorted(self.records(), key=lambda r: (r["family"], r["q"], r["a"]))
        writer = csv.DictWriter(out, fieldnames=list(FIELDS))
        writer.writeheader()
        for r in recs:
            writer.writerow({k: r[k] for k in FIELDS})
        return len(recs)


def _unit(args):
    template, q = args
    return census_q(template, q)


def run_census(family: str, qmax: int, store: Optional[CensusStore] = None, jobs: int = 1) -> List[dict]:
    """Fill missing (template, q) units and return all records of the family up to qmax."""
    store = store or CensusStore()
    units = family_qs(family, qmax)
    done = store.completed_units()
    todo = [(t, q) for t, q in units if done.get((t, q), 0) < q]
    if todo:
        if jobs > 1 and len(todo) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_unit, todo))
        else:
            results = [_unit(u) for u in todo]
        for recs in results:
            store.append(recs)
    wanted = set(units)
    return sorted((r for r in store.records() if (r["family"], r["q"]) in wanted),
                  key=lambda r: (r["q"], r["family"], r["a"]))
