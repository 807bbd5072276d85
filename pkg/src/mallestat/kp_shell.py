"""Combinatorial shell of the nilpotent-extension parameterization over Q.

Vectors (v_g(1), v_g(2)) over g in G* are enumerated directly; the map to actual
extensions is not modelled, so every count here is a count of vectors.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .arith import factorize, iroot, primes_up_to
from .errors import InvalidInput, ResourceLimitExceeded
from .nilpotent import CayleyGroup, a_invariant, i_over_Q

MAX_VECTORS = 2_000_000
MAX_X = 10 ** 14


@dataclass(frozen=True)
class ShellConfig:
    G: CayleyGroup
    Xmax: int
    t: int = 0
    excluded: frozenset = field(default=frozenset())

    def __post_init__(self):
        if self.G.order == 1:
            raise InvalidInput("G must be nontrivial")
        if self.t < 0:
            raise InvalidInput("t must be a nonnegative integer")
        if self.Xmax < 1:
            raise InvalidInput("Xmax must be positive")
        if self.Xmax > MAX_X:
            raise ResourceLimitExceeded(f"Xmax exceeds the cap {MAX_X}")
        # primes dividing |G| always belong to the excluded set
        object.__setattr__(
            self, "excluded", frozenset(self.excluded) | frozenset(factorize(self.G.order))
        )

    def exponent(self, g: int) -> int:
        """e_g = |G|(1 - 1/ord g)."""
        e = self.G.element_orders[g]
        return self.G.order - self.G.order // e

    def eligible(self, p: int, g: int) -> bool:
        if p in self.excluded:
            return False
        return all(p % ell == 1 for ell in factorize(self.G.element_orders[g]))


@dataclass(frozen=True)
class PrimVector:
    v1: tuple[int, ...]   # bitmask over [t] per g in G* (index g-1)
    v2: tuple[int, ...]   # squarefree integer per g in G*


def delta_v(v: PrimVector, G: CayleyGroup) -> int:
    """prod over g in G* of v_g(2)^(|G|(1 - 1/ord g))."""
    out = 1
    for g, x in enumerate(v.v2, start=1):
        e = G.element_orders[g]
        out *= x ** (G.order - G.order // e)
    return out


def check_vector(v: PrimVector, cfg: ShellConfig) -> None:
    """Raise if v breaks any PrimVector invariant."""
    n = cfg.G.order - 1
    if len(v.v1) != n or len(v.v2) != n:
        raise InvalidInput("vector length must be |G| - 1")
    for i, a in enumerate(v.v2):
        for j in range(i + 1, n):
            if math.gcd(a, v.v2[j]) != 1:
                raise InvalidInput("v_g(2) entries are not pairwise coprime")
        for p, k in factorize(a).items() if a > 1 else []:
            if k > 1 or not cfg.eligible(p, i + 1):
                raise InvalidInput(f"prime {p} is not eligible for element {i + 1}")
    used = 0
    for m in v.v1:
        if m >> cfg.t:
            raise InvalidInput("v_g(1) uses bits outside [t]")
        if used & m:
            raise InvalidInput("v_g(1) entries are not disjoint")
        used |= m


def _assignments(cfg: ShellConfig, X: int, required: Sequence[int] = ()) -> list[tuple[int, tuple]]:
    """All (Delta, v2) with Delta <= X; primes in `required` must be used."""
    G = cfg.G
    nonid = list(range(1, G.order))
    emin = min(cfg.exponent(g) for g in nonid)
    pmax = iroot(X, emin)
    primes = [p for p in primes_up_to(pmax) if p not in cfg.excluded]
    elig = {p: [g for g in nonid if cfg.eligible(p, g)] for p in primes}
    primes = [p for p in primes if elig[p]]
    req = set(required)
    for p in req:
        if p not in elig or not elig[p]:
            return []
    req_sorted = sorted(req)
    out: list[tuple[int, tuple]] = []
    v2 = [1] * len(nonid)

    def rec(start: int, delta: int, need: int):
        # need: index into req_sorted of the next required prime not yet placed
        if need == len(req_sorted):
            out.append((delta, tuple(v2)))
            if len(out) > MAX_VECTORS:
                raise ResourceLimitExceeded(f"more than {MAX_VECTORS} vectors below X")
        for k in range(start, len(primes)):
            p = primes[k]
            if need < len(req_sorted) and p > req_sorted[need]:
                return
            if delta * p ** emin > X:
                return
            nxt = need + 1 if need < len(req_sorted) and p == req_sorted[need] else need
            for g in elig[p]:
                d = delta * p ** cfg.exponent(g)
                if d <= X:
                    v2[g - 1] *= p
                    rec(k + 1, d, nxt)
                    v2[g - 1] //= p

    rec(0, 1, 0)
    return out


def _v1_choices(cfg: ShellConfig) -> Iterator[tuple[int, ...]]:
    """Disjoint bitmask tuples: each of the t bits goes to one g in G* or to none."""
    n = cfg.G.order - 1
    for code in range((n + 1) ** cfg.t):
        masks = [0] * n
        for bit in range(cfg.t):
            code, owner = divmod(code, n + 1)
            if owner:
                masks[owner - 1] |= 1 << bit
        yield tuple(masks)


def v1_multiplicity(cfg: ShellConfig) -> int:
    return cfg.G.order ** cfg.t


def enumerate_prim(cfg: ShellConfig) -> list[PrimVector]:
    """Every vector with Delta_v <= Xmax, sorted by (Delta_v, v2, v1)."""
    mult = v1_multiplicity(cfg)
    base = _assignments(cfg, cfg.Xmax)
    if len(base) * mult > MAX_VECTORS:
        raise ResourceLimitExceeded(f"more than {MAX_VECTORS} vectors below Xmax")
    base.sort()
    v1s = list(_v1_choices(cfg))
    return [PrimVector(v1, v2) for _, v2 in base for v1 in v1s]


def _check_q(cfg: ShellConfig, q: int) -> list[int]:
    if q < 1:
        raise InvalidInput("q must be a positive integer")
    f = factorize(q) if q > 1 else {}
    if any(k > 1 for k in f.values()):
        raise InvalidInput(f"q={q} is not squarefree")
    for p in f:
        if not any(cfg.eligible(p, g) for g in range(1, cfg.G.order)):
            raise InvalidInput(f"q={q} has prime {p} that is not eligible for any element")
    return sorted(f)


class ShellCounter:
    """X -> number of vectors with Delta_v <= X and q | Delta_v, for X <= Xmax."""

    def __init__(self, cfg: ShellConfig, q: int = 1):
        req = _check_q(cfg, q)
        self.cfg, self.q = cfg, q
        self._deltas = sorted(d for d, _ in _assignments(cfg, cfg.Xmax, req))
        self._mult = v1_multiplicity(cfg)

    def __call__(self, X) -> int:
        if X > self.cfg.Xmax:
            raise InvalidInput(f"X={X} exceeds the configured Xmax={self.cfg.Xmax}")
        return bisect.bisect_right(self._deltas, X) * self._mult


def N_q_shell(cfg: ShellConfig, q: int = 1) -> ShellCounter:
    return ShellCounter(cfg, q)


@dataclass(frozen=True)
class RatioRow:
    X: int
    q: int
    count: int
    ratio: float


def uniformity_ratio(cfg: ShellConfig, qs: Sequence[int], Xs: Sequence[int],
                     epsilon: float = 0.1) -> list[RatioRow]:
    """N_q(X) q^(a(1-eps)) / (X^a (log X)^(i-1)) for each (X, q)."""
    if not 0 < epsilon < 1:
        raise InvalidInput("epsilon must lie in (0, 1)")
    a = float(a_invariant(cfg.G))
    i = float(i_over_Q(cfg.G))
    rows = []
    for q in qs:
        cnt = N_q_shell(cfg, q)
        for X in Xs:
            c = cnt(X)
            denom = X ** a * math.log(X) ** (i - 1) if X > 1 else 1.0
            rows.append(RatioRow(int(X), int(q), c, c * q ** (a * (1 - epsilon)) / denom))
    return rows


def sigma_power_oracle(ell: int, X: int, excluded: Sequence[int] = ()) -> int:
    """For G = C_ell, t = 0: sum of (ell-1)^omega(f) over squarefree f of eligible
    primes with f^(ell-1) <= X, by direct factoring of every f."""
    top = iroot(X, ell - 1)
    total = 0
    for f in range(1, top + 1):
        fac = factorize(f) if f > 1 else {}
        if all(k == 1 and p % ell == 1 and p not in excluded and p != ell for p, k in fac.items()):
            total += (ell - 1) ** len(fac)
    return total


def exponent_bounds_hold(cfg: ShellConfig) -> bool:
    """e_g lies in [|G|(1 - 1/l_G), |G| - 1] for all g != 1."""
    a = a_invariant(cfg.G)
    lo = Fraction(1) / a
    return all(lo <= cfg.exponent(g) <= cfg.G.order - 1 for g in range(1, cfg.G.order))
