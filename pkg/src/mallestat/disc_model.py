"""Discriminants of composita: global bound, tame local exponents, wild brackets,
the truncated invariant Disc_Y and the correction constant d_Pi."""
from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Protocol, Union

from .errors import InvalidInput, MissingTableEntry
from .malle import ind_product_formula
from .permgroup import ind


@dataclass(frozen=True)
class Tame:
    cycle_type: tuple[int, ...]

    def __post_init__(self):
        ct = tuple(sorted((int(c) for c in self.cycle_type), reverse=True))
        if not ct or min(ct) < 1:
            raise InvalidInput(f"bad cycle type {self.cycle_type!r}")
        object.__setattr__(self, "cycle_type", ct)

    @property
    def v(self) -> int:
        return ind(self.cycle_type)

    @property
    def code(self) -> str:
        return ".".join(map(str, self.cycle_type))

    def serialize(self, p: int) -> str:
        return f"{p}:T:{self.code}"


@dataclass(frozen=True)
class Wild:
    v: int
    code: str

    def __post_init__(self):
        if self.v < 1:
            raise InvalidInput("a wild datum needs a positive valuation")
        if not self.code or re.search(r"[:;,\s]", self.code):
            raise InvalidInput(f"wild code {self.code!r} must be a nonempty token without ':;,' or spaces")

    def serialize(self, p: int) -> str:
        return f"{p}:W:{self.v}:{self.code}"


LocalDatum = Union[Tame, Wild]


class RamProfile(dict):
    """prime -> LocalDatum, listing ramified primes only."""

    def disc_abs(self) -> int:
        out = 1
        for p, d in self.items():
            out *= p ** d.v
        return out

    def serialize(self) -> str:
        return ";".join(self[p].serialize(p) for p in sorted(self))

    @classmethod
    def parse(cls, text: str) -> "RamProfile":
        prof = cls()
        text = text.strip()
        if not text:
            return prof
        for item in text.split(";"):
            parts = item.strip().split(":")
            try:
                p = int(parts[0])
                if parts[1] == "T" and len(parts) == 3:
                    d: LocalDatum = Tame(tuple(int(x) for x in parts[2].split(".")))
                elif parts[1] == "W" and len(parts) == 4:
                    d = Wild(int(parts[2]), parts[3])
                else:
                    raise ValueError
            except (ValueError, IndexError):
                raise InvalidInput(
                    f"bad ramification entry {item!r}; expected p:T:<cycle-type> or p:W:<v>:<code>"
                ) from None
            if p in prof:
                raise InvalidInput(f"prime {p} listed twice")
            prof[p] = d
        return prof


class FieldLike(Protocol):
    degree: int
    ram: RamProfile


@dataclass(frozen=True)
class FieldData:
    degree: int
    disc: int
    ram: RamProfile


class Bracket(NamedTuple):
    lower: int
    upper: int

    @property
    def exact(self) -> bool:
        return self.lower == self.upper


def disc_bound(disc_k: int, disc_l: int, n: int, m: int) -> int:
    """Disc(K)^m * Disc(L)^n."""
    if disc_k <= 0 or disc_l <= 0:
        raise InvalidInput("discriminants must be positive (pass absolute values)")
    return disc_k ** m * disc_l ** n


def tame_compositum_exponent(dk: Tame, dl: Tame, n: int | None = None, m: int | None = None) -> int:
    """v_p(disc KL) = nm - sum gcd(c_i, d_j) for tame data."""
    if n is not None and sum(dk.cycle_type) != n or m is not None and sum(dl.cycle_type) != m:
        raise InvalidInput("cycle type does not match the field degree")
    return ind_product_formula(dk.cycle_type, dl.cycle_type)


class LocalTable:
    """Exact exponents at wild primes, keyed by (p, codeK, codeL)."""

    def __init__(self, entries: Mapping[tuple[int, str, str], int] | None = None):
        self.entries = dict(entries or {})

    @classmethod
    def from_csv(cls, path) -> "LocalTable":
        entries = {}
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
        if rows and rows[0][0].strip() == "p":
            rows = rows[1:]
        for k, row in enumerate(rows, 1):
            if len(row) != 4:
                raise InvalidInput(f"local table row {k}: expected p,codeK,codeL,exponent")
            try:
                entries[(int(row[0]), row[1].strip(), row[2].strip())] = int(row[3])
            except ValueError:
                raise InvalidInput(f"local table row {k}: p and exponent must be integers") from None
        return cls(entries)

    def lookup(self, p: int, dk: LocalDatum, dl: LocalDatum) -> int:
        key = (p, dk.code, dl.code)
        if key not in self.entries:
            raise MissingTableEntry(p, dk.code, dl.code)
        return self.entries[key]


def local_exponents(p: int, dk: LocalDatum | None, dl: LocalDatum | None, n: int, m: int,
                    table: LocalTable | None = None) -> tuple[int, int]:
    """(lower, upper) for v_p(Disc KL)."""
    if dk is None and dl is None:
        return 0, 0
    if dl is None:
        return dk.v * m, dk.v * m
    if dk is None:
        return dl.v * n, dl.v * n
    if isinstance(dk, Tame) and isinstance(dl, Tame):
        e = tame_compositum_exponent(dk, dl)
        return e, e
    if table is not None:
        e = table.lookup(p, dk, dl)
        return e, e
    return max(dk.v * m, dl.v * n), dk.v * m + dl.v * n


def _assemble(K: FieldLike, L: FieldLike, exact_upto: float | None, table) -> Bracket:
    n, m = K.degree, L.degree
    lo = hi = 1
    for p in sorted(set(K.ram) | set(L.ram)):
        dk, dl = K.ram.get(p), L.ram.get(p)
        if exact_upto is not None and p > exact_upto:
            e = (dk.v * m if dk else 0) + (dl.v * n if dl else 0)
            a, b = e, e
        else:
            a, b = local_exponents(p, dk, dl, n, m, table)
        lo *= p ** a
        hi *= p ** b
    return Bracket(lo, hi)


def disc_compositum(K: FieldLike, L: FieldLike, mode: str = "bracket",
                    table: LocalTable | None = None) -> Bracket:
    """Bracket for |Disc(KL)|; mode is "bracket" (exact tame + wild brackets) or "table"."""
    if mode == "table" and table is None:
        raise InvalidInput("table mode needs a local table")
    if mode not in ("bracket", "table"):
        raise InvalidInput(f"unknown mode {mode!r}; expected bracket or table")
    return _assemble(K, L, None, table if mode == "table" else None)


def disc_Y(K: FieldLike, L: FieldLike, Y: float, mode: str = "bracket",
           table: LocalTable | None = None) -> Bracket:
    """Exact (or bracketed) local factors at p <= Y, product-bound factors above Y."""
    if Y < 0 or math.isnan(Y):
        raise InvalidInput("Y must be a nonnegative real")
    if mode == "table" and table is None:
        raise InvalidInput("table mode needs a local table")
    return _assemble(K, L, Y, table if mode == "table" else None)


def d_Pi(spec: Mapping[int, tuple[LocalDatum | None, LocalDatum | None]], n: int, m: int,
         table: LocalTable | None = None) -> int:
    """prod over p in the spec of p^(m v_p(K) + n v_p(L) - v_p(KL))."""
    out = 1
    for p in sorted(spec):
        dk, dl = spec[p]
        lo, hi = local_exponents(p, dk, dl, n, m, table)
        if lo != hi:
            raise InvalidInput(
                f"d_Pi is undefined at p={p}: wild common ramification is bracketed; supply a local table"
            )
        e = (dk.v * m if dk else 0) + (dl.v * n if dl else 0) - lo
        out *= p ** e
    return out
