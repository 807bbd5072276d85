"""Malle invariants, the product index formula, and the inequality checks for S_n x G."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import factorize
from .errors import InvalidInput
from .nilpotent import CayleyGroup, regular_rep
from .permgroup import (
    Perm,
    conjugacy_classes,
    cycle_type_counts,
    ind,
    power_action_orbits,
    product_embed,
    symmetric_generators,
)

SUPPORTED_N = (3, 4, 5)


@dataclass(frozen=True)
class MalleInvariants:
    a: Fraction
    b_over_Q: int
    min_index: int
    minimal_classes: tuple[str, ...]

    def as_dict(self):
        return {
            "a": str(self.a),
            "b": self.b_over_Q,
            "min_index": self.min_index,
            "minimal_classes": list(self.minimal_classes),
        }


def invariants_of(generators: Sequence[Perm], over: str = "Q") -> MalleInvariants:
    """a and b(Q, .) of the permutation group spanned by the generators."""
    if over != "Q":
        raise InvalidInput("only the base field Q is supported")
    classes = conjugacy_classes(generators)
    if classes.group_order == 1:
        raise InvalidInput("the generated group is trivial")
    nontriv = [k for k, c in enumerate(classes) if c.index > 0]
    m = min(classes.classes[k].index for k in nontriv)
    minimal = {k for k in nontriv if classes.classes[k].index == m}
    orbits = power_action_orbits(classes)
    b = sum(1 for orb in orbits if minimal & set(orb))
    reps = tuple(str(classes.classes[k].representative) for k in sorted(minimal))
    return MalleInvariants(Fraction(1, m), b, m, reps)


def product_generators(n: int, G: CayleyGroup) -> list[Perm]:
    """Generators of S_n x G inside S_{n|G|} (G in its regular representation)."""
    reg = regular_rep(G)
    idG = Perm.identity(G.order)
    idn = Perm.identity(n)
    gens = [product_embed(s, idG) for s in symmetric_generators(n)]
    gens += [product_embed(idn, reg[g]) for g in G.generators()]
    return gens


def regular_cycle_type(group_order: int, e: int) -> tuple[int, ...]:
    """Cycle type of an element of order e in the regular representation."""
    return (e,) * (group_order // e)


def ind_product_formula(ct1: Sequence[int], ct2: Sequence[int]) -> int:
    """Index of (s, t) in S_{nm}: nm - sum of gcd(c_i, d_j)."""
    n, m = sum(ct1), sum(ct2)
    # grouping equal parts keeps regular cycle types cheap
    c1, c2 = Counter(ct1), Counter(ct2)
    return n * m - sum(
        math.gcd(a, b) * ka * kb for a, ka in c1.items() for b, kb in c2.items()
    )


def ind_coprime_formula(ct1: Sequence[int], ct2: Sequence[int]) -> int:
    """Closed form valid when every pair of cycle lengths is coprime."""
    n, m = sum(ct1), sum(ct2)
    i1, i2 = ind(ct1), ind(ct2)
    return i1 * m + i2 * n - i1 * i2


def _class_cycle_types(n: int) -> list[tuple[int, ...]]:
    return list(cycle_type_counts(n))


def product_invariants(n: int, G: CayleyGroup) -> MalleInvariants:
    """Invariants of S_n x G inside S_{n|G|} from class data, without closure.

    Classes of a direct product are pairs of classes; S_n classes are rational,
    so the power action only moves the G component.
    """
    N = G.order
    t = G.table
    inv = [G.inverse(g) for g in range(N)]
    gclass = [-1] * N
    reps = []
    for g in range(N):
        if gclass[g] >= 0:
            continue
        k = len(reps)
        reps.append(g)
        for x in range(N):
            gclass[t[t[x][g]][inv[x]]] = k
    best = None
    cands = []
    for ct in _class_cycle_types(n):
        for k, g in enumerate(reps):
            if ct == (1,) * n and g == 0:
                continue
            e = G.element_orders[g]
            v = ind_product_formula(ct, regular_cycle_type(N, e))
            if best is None or v < best:
                best, cands = v, [(ct, k)]
            elif v == best:
                cands.append((ct, k))
    total = math.factorial(n) * N
    units = [c for c in range(1, total) if math.gcd(c, total) == 1] or [1]
    seen = set()
    orbits = 0
    for ct, k in cands:
        if (ct, k) in seen:
            continue
        orbits += 1
        g = reps[k]
        for c in units:
            seen.add((ct, gclass[G.power(g, c)]))
    names = tuple(f"({ct_str(ct)}, g of order {G.element_orders[reps[k]]})" for ct, k in cands)
    return MalleInvariants(Fraction(1, best), orbits, best, names)


def ct_str(ct: Sequence[int]) -> str:
    return ".".join(str(c) for c in ct)


# s_sigma lower bounds, keyed by cycle type (fixed points included)
_SIGMA_TABLE = {
    3: {(3,): Fraction(2)},
    4: {(4,): Fraction(2), (2, 2): Fraction(2)},
    5: {(5,): Fraction(2, 5)},
}


@dataclass(frozen=True)
class SigmaExponentTable:
    n: int

    def __post_init__(self):
        if self.n not in SUPPORTED_N:
            raise InvalidInput(f"n must be one of 3, 4, 5 (got {self.n})")

    def s(self, ct: Sequence[int]) -> Fraction:
        ct = tuple(sorted(ct, reverse=True))
        if sum(ct) != self.n:
            raise InvalidInput(f"cycle type {ct} is not a class of S_{self.n}")
        return _SIGMA_TABLE[self.n].get(ct, Fraction(0))

    def classes(self) -> list[tuple[int, ...]]:
        return _class_cycle_types(self.n)


def admissible(n: int, order: int) -> bool:
    bad = {3: (2,), 4: (2, 3), 5: (2, 3, 5)}[n]
    return all(order % p for p in bad)


def admissibility_condition(n: int) -> str:
    return {
        3: "|G| must be odd (2 does not divide |G|)",
        4: "|G| must be coprime to 6 (2 and 3 do not divide |G|)",
        5: "|G| must be coprime to 30 (2, 3 and 5 do not divide |G|)",
    }[n]


def _check_n(n):
    if n not in SUPPORTED_N:
        raise InvalidInput(f"n must be one of 3, 4, 5 (got {n})")


@dataclass
class InequalityReport:
    n: int
    order_bound: int
    orders_checked: int = 0
    pairs_checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self):
        return {
            "n": self.n,
            "order_bound": self.order_bound,
            "orders_checked": self.orders_checked,
            "pairs_checked": self.pairs_checked,
            "violations": self.violations,
            "ok": self.ok,
        }


def _inequalities(n: int):
    """(label, cycle type or None for all classes, predicate on (ratio, ind sigma, ct))."""
    if n == 3:
        return [
            ("f1:(12)>2", (2, 1), lambda r, i, ct: r > 2),
            ("f1:(123)>1", (3,), lambda r, i, ct: r > 1),
        ]
    if n == 4:
        return [
            ("f2:(12)>2", (2, 1, 1), lambda r, i, ct: r > 2),
            ("f2:(12)(34)>1", (2, 2), lambda r, i, ct: r > 1),
            ("f3:(123)>3", (3, 1), lambda r, i, ct: r > 3),
            ("f3:(1234)>2", (4,), lambda r, i, ct: r > 2),
        ]
    return [
        ("f4:>=1+ind-1/7", None, lambda r, i, ct: r >= 1 + i - Fraction(1, 7)),
        ("f5:>=12/7+ind", None, lambda r, i, ct: ct == (5,) or r >= Fraction(12, 7) + i),
    ]


def check_order(n: int, order: int) -> tuple[int, list]:
    """Check every inequality for one group order over element orders e > 1."""
    checks = _inequalities(n)
    cts = _class_cycle_types(n)
    pairs = 0
    bad = []
    for e in _divisors_gt1(order):
        rct = regular_cycle_type(order, e)
        for label, target, pred in checks:
            for ct in cts if target is None else [target]:
                r = Fraction(ind_product_formula(ct, rct), order)
                pairs += 1
                if not pred(r, ind(ct), ct):
                    bad.append({"check": label, "order": order, "e": e,
                                "sigma": ct_str(ct), "ratio": str(r)})
    return pairs, bad


def _divisors_gt1(n: int) -> list[int]:
    divs = [1]
    for p, a in factorize(n).items() if n > 1 else []:
        divs = [d * p ** k for d in divs for k in range(a + 1)]
    return sorted(d for d in divs if d > 1)


def verify_ind_inequalities(n: int, order_bound: int, orders: Sequence[int] | None = None) -> InequalityReport:
    """Sweep admissible |G| <= order_bound and element orders e | |G| with e > 1.

    The identity of G is excluded: at g = 1 the index reduces to ind(sigma)|G| and
    the displayed bounds do not hold for non-identity sigma.
    """
    _check_n(n)
    if order_bound < 1:
        raise InvalidInput("order bound must be a positive integer")
    rep = InequalityReport(n, order_bound)
    todo = orders if orders is not None else [
        o for o in range(2, order_bound + 1) if admissible(n, o)
    ]
    for o in todo:
        pairs, bad = check_order(n, o)
        rep.orders_checked += 1
        rep.pairs_checked += pairs
        rep.violations.extend(bad)
    return rep


@dataclass(frozen=True)
class DeltaResult:
    n: int
    group: str
    delta: Fraction
    binding_class: str
    binding_order: int

    @property
    def below_minus_one(self) -> bool:
        return self.delta < -1

    def as_dict(self):
        return {
            "n": self.n,
            "group": self.group,
            "delta": str(self.delta),
            "delta_lt_minus_1": self.below_minus_one,
            "binding_class": self.binding_class,
            "binding_element_order": self.binding_order,
        }


def delta_constant(n: int, G: CayleyGroup, table: SigmaExponentTable | None = None) -> DeltaResult:
    """max over sigma in C(S_n) and g != 1 of -s_sigma + ind(sigma) - ind(sigma, g)/|G|."""
    _check_n(n)
    table = table or SigmaExponentTable(n)
    if table.n != n:
        raise InvalidInput("exponent table degree does not match n")
    N = G.order
    if N == 1:
        raise InvalidInput("G must be nontrivial")
    if not admissible(n, N):
        raise InvalidInput(f"inadmissible pairing n={n}, |G|={N}: {admissibility_condition(n)}")
    best = None
    for e in sorted(set(G.element_orders) - {1}):
        rct = regular_cycle_type(N, e)
        for ct in table.classes():
            d = -table.s(ct) + ind(ct) - Fraction(ind_product_formula(ct, rct), N)
            if best is None or d > best[0]:
                best = (d, ct, e)
    d, ct, e = best
    return DeltaResult(n, G.name, d, ct_str(ct), e)
