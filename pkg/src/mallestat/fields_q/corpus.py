"""Field tables on disk: CSV export, validated ingest, and the corpus cache."""
from __future__ import annotations

import csv
import io
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .. import SCHEMA_VERSION
from ..arith import factorize, is_square
from ..disc_model import RamProfile, Tame, Wild
from ..errors import InvalidInput
from .cyclic import conductor_components

HEADER = ["degree", "disc", "ram"]


@dataclass(frozen=True)
class FieldRecord:
    degree: int
    disc: int
    ram: RamProfile

    @property
    def is_cyclic(self) -> bool:
        # degree-3 rows carry both signatures; square disc means Galois
        return is_square(self.disc) if self.degree == 3 else True

    @property
    def abs_disc(self) -> int:
        return abs(self.disc)

    @property
    def conductor(self) -> int:
        f = 1
        for p, d in self.ram.items():
            f *= p * p if isinstance(d, Wild) else p
        return f


@dataclass
class Corpus:
    kind: str          # "cubic" or "cyclic<ell>"
    bound: int         # every field with |disc| <= bound is present
    records: list

    def __len__(self):
        return len(self.records)


class CorpusError(InvalidInput):
    def __init__(self, problems: Sequence[tuple[int, str]]):
        self.problems = list(problems)
        lines = "; ".join(f"line {ln}: {msg}" for ln, msg in self.problems[:20])
        more = f" (+{len(self.problems) - 20} more)" if len(self.problems) > 20 else ""
        super().__init__(f"{len(self.problems)} invalid row(s): {lines}{more}")


def write_corpus(records: Iterable, kind: str, bound: int, fh, config: str = "") -> None:
    fh.write(f"# mallestat schema-version={SCHEMA_VERSION} kind={kind} bound={bound}")
    fh.write(f" config={config}\n" if config else "\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(HEADER)
    for r in records:
        w.writerow([r.degree, r.disc, r.ram.serialize()])


def export_corpus(records: Iterable, kind: str, bound: int, path, config: str = "") -> None:
    with open(path, "w", newline="") as fh:
        write_corpus(records, kind, bound, fh, config)


def _check_cubic(disc: int, ram: RamProfile) -> str | None:
    if disc == 0:
        return "disc must be nonzero"
    if disc % 4 not in (0, 1):
        return f"disc {disc} is not 0 or 1 mod 4"
    fac = factorize(disc)
    if set(fac) != set(ram):
        return f"ramified primes {sorted(ram)} do not match primes of disc {sorted(fac)}"
    for p, v in fac.items():
        d = ram[p]
        if d.v != v:
            return f"v_{p}(disc)={v} but the ramification entry gives {d.v}"
        if p >= 5:
            if not isinstance(d, Tame) or d.cycle_type not in ((2, 1), (3,)):
                return f"p={p} must be tame with cycle type 2.1 or 3"
            if v > 2:
                return f"v_{p}(disc)={v} exceeds the tame bound 2"
        elif p == 3:
            ok = (isinstance(d, Tame) and d.cycle_type == (2, 1)) or (
                isinstance(d, Wild) and d.code == "P3" and v in (3, 4, 5))
            if not ok:
                return "p=3 must be tame partial (v=1) or wild P3 with v in 3..5"
        else:
            ok = (isinstance(d, Tame) and d.cycle_type == (3,)) or (
                isinstance(d, Wild) and d.code == "P2P1" and v in (2, 3))
            if not ok:
                return "p=2 must be tame total (v=2) or wild P2P1 with v in 2..3"
    return None


def _check_cyclic(ell: int, disc: int, ram: RamProfile) -> str | None:
    rec = FieldRecord(ell, disc, ram)
    f = rec.conductor
    if conductor_components(f, ell) is None or f == 1:
        return f"ramification does not describe a valid conductor for ell={ell}"
    if f ** (ell - 1) != disc:
        return f"disc {disc} != conductor^{ell - 1} = {f ** (ell - 1)}"
    for p, d in ram.items():
        if p == ell:
            if not (isinstance(d, Wild) and d.v == 2 * (ell - 1)):
                return f"p={ell} must be wild with v={2 * (ell - 1)}"
        elif not (isinstance(d, Tame) and d.cycle_type == (ell,)):
            return f"p={p} must be tame with cycle type {ell}"
    return None


def read_corpus(fh) -> Corpus:
    kind, bound = None, None
    problems: list[tuple[int, str]] = []
    records = []
    header_seen = False
    ncols = 3
    for ln, line in enumerate(fh, 1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        if line.startswith("#"):
            m = re.search(r"schema-version=(\d+)", line)
            if m and int(m.group(1)) != SCHEMA_VERSION:
                problems.append((ln, f"unsupported schema version {m.group(1)}"))
            m = re.search(r"kind=(\w+)", line)
            kind = m.group(1) if m else kind
            m = re.search(r"bound=(\d+)", line)
            bound = int(m.group(1)) if m else bound
            continue
        row = next(csv.reader(io.StringIO(line)))
        if not header_seen:
            header_seen = True
            cols = [c.strip() for c in row]
            if cols not in (HEADER, HEADER + ["cyclic"]):
                raise CorpusError([(ln, f"header must be {','.join(HEADER)}[,cyclic]")])
            ncols = len(cols)
            continue
        if len(row) != ncols:
            problems.append((ln, f"expected {ncols} columns"))
            continue
        try:
            degree, disc = int(row[0]), int(row[1])
            ram = RamProfile.parse(row[2])
        except (ValueError, InvalidInput) as exc:
            problems.append((ln, str(exc) or "malformed number"))
            continue
        if degree == 3 and (kind is None or kind == "cubic"):
            err = _check_cubic(disc, ram)
        elif degree in (3, 5, 7):
            err = _check_cyclic(degree, disc, ram)
        else:
            err = f"unsupported degree {degree}"
        rec = FieldRecord(degree, disc, ram)
        if not err and ncols == 4 and row[3].strip() != str(int(rec.is_cyclic)):
            err = f"cyclic flag {row[3].strip()!r} disagrees with disc {disc}"
        if err:
            problems.append((ln, err))
            continue
        records.append(rec)
    if not header_seen:
        problems.append((0, "missing header row"))
    if problems:
        raise CorpusError(problems)
    if kind is None:
        kind = "cubic" if all(r.degree == 3 for r in records) else f"cyclic{records[0].degree}"
    if bound is None:
        bound = max((r.abs_disc for r in records), default=0)
    records.sort(key=lambda r: (r.abs_disc, r.disc > 0))
    return Corpus(kind, bound, records)


def ingest_field_table(path, fmt: str = "csv") -> Corpus:
    if fmt.lower() != "csv":
        raise InvalidInput(f"unsupported format {fmt!r}; only csv is supported")
    try:
        with open(path, newline="") as fh:
            return read_corpus(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None


def cache_dir() -> Path | None:
    d = os.environ.get("MALLESTAT_CACHE")
    return Path(d) if d else None


def cubic_corpus(bound: int, threads: int = 1) -> Corpus:
    """Cubic fields with |disc| <= bound, read from MALLESTAT_CACHE when possible."""
    from .cubic import enumerate_cubic

    cd = cache_dir()
    if cd is not None and cd.is_dir():
        for path in sorted(cd.glob("cubic_*.csv")):
            m = re.fullmatch(r"cubic_(\d+)\.csv", path.name)
            if m and int(m.group(1)) >= bound:
                corp = ingest_field_table(path)
                corp.records = [r for r in corp.records if r.abs_disc <= bound]
                corp.bound = bound
                return corp
    fields = enumerate_cubic(bound, threads=threads)
    if cd is not None:
        cd.mkdir(parents=True, exist_ok=True)
        tmp = cd / f".cubic_{bound}.csv.tmp"
        export_corpus(fields, "cubic", bound, tmp)
        tmp.replace(cd / f"cubic_{bound}.csv")
    return Corpus("cubic", bound, fields)
