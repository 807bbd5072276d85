"""Pairs (K, L) with K a non-cyclic cubic field and L cyclic of degree ell, counted
by the discriminant of the compositum KL, plus the M_{3,q} cubic counts."""
from __future__ import annotations

import bisect
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from ..arith import factorize, iroot
from ..counting import log_spaced
from ..disc_model import LocalTable, Tame, Wild, disc_Y, disc_bound, disc_compositum, local_exponents
from ..errors import InvalidInput, ResourceLimitExceeded
from .cyclic import SUPPORTED_ELL, enumerate_cyclic

DEFAULT_CAP = 10 ** 14


def _is_total(d) -> bool:
    return (isinstance(d, Tame) and d.cycle_type == (3,)) or (isinstance(d, Wild) and d.code == "P3")


def _check_squarefree(q: int) -> list[int]:
    if q < 1:
        raise InvalidInput("q must be a positive integer")
    fac = factorize(q) if q > 1 else {}
    if any(k > 1 for k in fac.values()):
        raise InvalidInput(f"q={q} is not squarefree")
    return sorted(fac)


def M3q(q: int, X: int, corpus) -> int:
    """Non-cyclic cubic fields with |disc| <= X totally ramified at every p | q."""
    primes = _check_squarefree(q)
    if corpus.bound < X:
        raise InvalidInput(f"corpus covers |disc| <= {corpus.bound}, which is below X={X}")
    n = 0
    for K in corpus.records:
        if K.abs_disc > X:
            continue
        if K.is_cyclic:
            continue
        if all(p in K.ram and _is_total(K.ram[p]) for p in primes):
            n += 1
    return n


# Local data a cubic field can have at p (conductor primes of L are p = 1 mod ell or ell).
def _cubic_local_options(p: int):
    if p == 2:
        return [Tame((3,)), Wild(2, "P2P1"), Wild(3, "P2P1")]
    if p == 3:
        return [Tame((2, 1))] + [Wild(v, "P3") for v in (3, 4, 5)]
    return [Tame((2, 1)), Tame((3,))]


def max_savings_exponent(p: int, dl, ell: int, table: LocalTable | None = None) -> int:
    """Largest ell*v_p(K) + 3*v_p(L) - (lower exponent of KL at p) over cubic data at p."""
    best = 0
    for dk in _cubic_local_options(p):
        try:
            lo, _ = local_exponents(p, dk, dl, 3, ell, table)
        except KeyError:
            lo = max(dk.v * ell, dl.v * 3)
        best = max(best, dk.v * ell + dl.v * 3 - lo)
    return best


def disc_k_bound(L, X: int, table: LocalTable | None = None) -> int:
    """Largest |Disc K| that can give lower(Disc KL) <= X.

    lower(Disc KL) = Disc(K)^ell Disc(L)^3 / s with s the savings at primes
    ramified in both; s divides S_L = prod over p | cond(L) of p^(max savings),
    so Disc(K)^ell <= X S_L / Disc(L)^3.
    """
    ell = L.degree
    S = 1
    for p, dl in L.ram.items():
        S *= p ** max_savings_exponent(p, dl, ell, table)
    num = X * S
    den = L.disc ** 3
    if num < den:
        return 0
    return iroot(num // den, ell)


@dataclass(frozen=True)
class PairRecord:
    K: object
    L: object
    lower: int
    upper: int

    @property
    def exact(self) -> bool:
        return self.lower == self.upper


@dataclass(frozen=True)
class PairRow:
    X: int
    lower_count: int
    upper_count: int

    @property
    def gap(self) -> float:
        """Relative bracket gap (upper - lower) / upper."""
        if self.upper_count == 0:
            return 0.0
        return (self.upper_count - self.lower_count) / self.upper_count


def _ell_of(G) -> int:
    if isinstance(G, int):
        ell = G
    else:
        ell = G.order
        if any(o not in (1, ell) for o in G.element_orders):
            raise InvalidInput(f"G={G.name or G.order} is not cyclic of prime order")
    if ell not in SUPPORTED_ELL:
        raise InvalidInput(f"the pairing harness supports C_ell with ell in {SUPPORTED_ELL} (got order {ell})")
    return ell


def _pairs_for_L(args):
    Ls, ks, kd, X, mode, table = args
    out = []
    for L in Ls:
        top = disc_k_bound(L, X, table)
        stop = bisect.bisect_right(kd, top)
        for K in ks[:stop]:
            br = disc_compositum(K, L, mode, table)
            if br.lower <= X:
                out.append(PairRecord(K, L, br.lower, br.upper))
    return out


def pair_corpus(ell: int, X: int, cubics, cyclics=None, mode: str = "bracket",
                table: LocalTable | None = None, threads: int = 1, cap: int = DEFAULT_CAP) -> list[PairRecord]:
    """Every pair whose lower compositum bound is <= X, sorted.

    Outer loop over L by disc (Disc(KL) >= Disc(L)^3 bounds it), inner loop over
    non-cyclic K up to disc_k_bound(L, X).
    """
    if X > cap:
        raise ResourceLimitExceeded(f"X={X} exceeds the cap {cap}")
    if X < 1:
        return []
    lmax = iroot(X, 3)
    if cyclics is None:
        cyclics = enumerate_cyclic(ell, lmax)
    Ls = sorted((L for L in cyclics if L.disc <= lmax), key=lambda L: (L.disc, L.character_index))
    if not Ls:
        return []
    need = max(disc_k_bound(L, X, table) for L in Ls)
    if cubics.bound < need:
        raise InvalidInput(f"cubic corpus covers |disc| <= {cubics.bound} but {need} is needed")
    ks = [K for K in cubics.records if not K.is_cyclic and K.abs_disc <= need]
    ks.sort(key=lambda K: (K.abs_disc, K.disc))
    kd = [K.abs_disc for K in ks]
    nshards = max(1, min(threads, len(Ls)))
    jobs = [(Ls[i::nshards], ks, kd, X, mode, table) for i in range(nshards)]
    if nshards > 1:
        with ProcessPoolExecutor(nshards) as ex:
            parts = list(ex.map(_pairs_for_L, jobs))
    else:
        parts = [_pairs_for_L(j) for j in jobs]
    out = [r for part in parts for r in part]
    out.sort(key=lambda r: (r.lower, r.upper, r.K.abs_disc, r.K.disc, r.K.ram.serialize(),
                            r.L.conductor, r.L.character_index))
    return out


def count_pairs(G, Xs: Sequence[int], cubics, cyclics=None, mode: str = "bracket",
                table: LocalTable | None = None, threads: int = 1,
                cap: int = DEFAULT_CAP) -> list[PairRow]:
    """(lowerCount, upperCount) at each X: pairs with upper <= X and with lower <= X."""
    ell = _ell_of(G)
    Xs = sorted(int(x) for x in Xs)
    if not Xs:
        return []
    pairs = pair_corpus(ell, Xs[-1], cubics, cyclics, mode, table, threads, cap)
    lows = sorted(p.lower for p in pairs)
    ups = sorted(p.upper for p in pairs)
    return [PairRow(X, bisect.bisect_right(ups, X), bisect.bisect_right(lows, X)) for X in Xs]


def sample_points(lo: int, hi: int, k: int) -> list[int]:
    return [int(round(x)) for x in log_spaced(lo, hi, k)]


def disc_Y_violations(pairs, Ys_extra: Sequence[float] = ()) -> list[str]:
    """Check Disc(KL) <= Disc_Y <= Disc(K)^ell Disc(L)^3 and the collapse for each (K, L).

    For each pair Y runs over 0, every shared prime and its neighbours, and any
    extra values; upper(Disc_Y) must be nonincreasing in Y and both ends equal
    disc_compositum once Y is at least the largest shared prime.
    """
    bad = []
    for K, L in ((r.K, r.L) for r in pairs):
        exact = disc_compositum(K, L)
        bound = disc_bound(K.abs_disc, L.disc, K.degree, L.degree)
        shared = sorted(set(K.ram) & set(L.ram))
        Ys = sorted({0.0, *map(float, Ys_extra)} | {p + d for p in shared for d in (-0.5, 0.0, 0.5)})
        prev_up = None
        tag = f"K={K.disc} L=({L.conductor},{getattr(L, 'character_index', 0)})"
        for Y in Ys:
            br = disc_Y(K, L, Y)
            if not (exact.lower <= br.lower and br.upper <= bound and exact.upper <= br.upper):
                bad.append(f"{tag} Y={Y}: bracket {br} outside [{exact}, {bound}]")
            if prev_up is not None and br.upper > prev_up:
                bad.append(f"{tag} Y={Y}: upper increased")
            prev_up = br.upper
            if (not shared or Y >= shared[-1]) and br != exact:
                bad.append(f"{tag} Y={Y}: no collapse to {exact}")
        if Ys and disc_Y(K, L, 0) != (bound, bound):
            bad.append(f"{tag}: Y=0 differs from the product bound")
        wild_shared = any(not (isinstance(K.ram[p], Tame) and isinstance(L.ram[p], Tame)) for p in shared)
        if not wild_shared and not exact.exact:
            bad.append(f"{tag}: tame pair is bracketed")
    return bad
