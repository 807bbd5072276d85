"""Finite nilpotent groups given by explicit Cayley tables."""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .arith import factorize
from .errors import InvalidInput, ResourceLimitExceeded
from .permgroup import Perm

MAX_TABLE_ORDER = 4096


@dataclass(frozen=True, eq=False)
class CayleyGroup:
    table: tuple[tuple[int, ...], ...]
    name: str = ""
    element_orders: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        tab = tuple(tuple(int(x) for x in row) for row in self.table)
        n = len(tab)
        if n == 0:
            raise InvalidInput("empty multiplication table")
        if n > MAX_TABLE_ORDER:
            raise ResourceLimitExceeded(f"group order {n} exceeds cap {MAX_TABLE_ORDER}")
        full = list(range(n))
        for i, row in enumerate(tab):
            if len(row) != n or sorted(row) != full:
                raise InvalidInput(f"row {i} is not a permutation of 0..{n - 1}")
        for j in range(n):
            if sorted(tab[i][j] for i in range(n)) != full:
                raise InvalidInput(f"column {j} is not a permutation of 0..{n - 1}")
        if tab[0] != tuple(full) or any(tab[i][0] != i for i in range(n)):
            raise InvalidInput("element 0 must be the identity")
        object.__setattr__(self, "table", tab)
        self._check_associative()
        object.__setattr__(self, "element_orders", tuple(self._order(g) for g in range(n)))
        self._check_nilpotent()

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def _order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.table[x][g]
            k += 1
        return k

    def generators(self) -> list[int]:
        """A generating set found greedily."""
        gens: list[int] = []
        sub = {0}
        for g in sorted(range(self.order), key=lambda x: -self._order(x)):
            if g in sub:
                continue
            gens.append(g)
            sub = self._span(gens)
            if len(sub) == self.order:
                break
        return gens

    def _span(self, gens):
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def _check_associative(self):
        # Light's test: (x*g)*y == x*(g*y) for g in a generating set suffices
        t = self.table
        n = self.order
        for g in self.generators():
            for x in range(n):
                xg = t[x][g]
                for y in range(n):
                    if t[xg][y] != t[x][t[g][y]]:
                        raise InvalidInput("multiplication table is not associative")

    def _check_nilpotent(self):
        n = self.order
        for p, a in factorize(n).items() if n > 1 else []:
            cnt = sum(1 for e in self.element_orders if _is_power_of(e, p))
            if cnt != p ** a:
                raise InvalidInput(
                    f"group is not nilpotent: Sylow {p}-subgroup is not normal"
                )
        orders = self.element_orders
        t = self.table
        for x in range(n):
            for y in range(x + 1, n):
                if math.gcd(orders[x], orders[y]) == 1 and t[x][y] != t[y][x]:
                    raise InvalidInput(
                        "group is not nilpotent: elements of coprime order do not commute"
                    )

    def inverse(self, g: int) -> int:
        return self.table[g].index(0)

    def power(self, g: int, k: int) -> int:
        k %= self.element_orders[g]
        x = 0
        for _ in range(k):
            x = self.table[x][g]
        return x

    def __repr__(self):
        return f"CayleyGroup({self.name or '?'}, order={self.order})"


def _is_power_of(e: int, p: int) -> bool:
    while e % p == 0:
        e //= p
    return e == 1


def cyclic(n: int) -> CayleyGroup:
    if n < 1:
        raise InvalidInput("cyclic group order must be positive")
    return CayleyGroup(tuple(tuple((i + j) % n for j in range(n)) for i in range(n)), f"C{n}")


def direct_product(g: CayleyGroup, h: CayleyGroup) -> CayleyGroup:
    """Element (a, b) gets id a*|H| + b."""
    m = h.order
    n = g.order * m
    if n > MAX_TABLE_ORDER:
        raise ResourceLimitExceeded(f"group order {n} exceeds cap {MAX_TABLE_ORDER}")
    gt, ht = g.table, h.table
    tab = tuple(
        tuple(gt[a1][a2] * m + ht[b1][b2] for a2 in range(g.order) for b2 in range(m))
        for a1 in range(g.order)
        for b1 in range(m)
    )
    return CayleyGroup(tab, f"{g.name}x{h.name}")


def from_json(text: str, name: str = "") -> CayleyGroup:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"Cayley table file is not valid JSON: {exc}") from None
    if not isinstance(obj, dict) or "order" not in obj or "table" not in obj:
        raise InvalidInput('Cayley table JSON must be {"order": n, "table": [[...]]}')
    tab = obj["table"]
    if not isinstance(tab, list) or len(tab) != obj["order"]:
        raise InvalidInput("table size does not match declared order")
    return CayleyGroup(tuple(tuple(r) for r in tab), name)


def parse_group_spec(spec: str) -> CayleyGroup:
    """Grammar: C<k> | spec x spec | @<path>."""
    s = spec.strip()
    if not s:
        raise InvalidInput("empty group spec")
    if s.startswith("@"):
        path = Path(s[1:])
        try:
            text = path.read_text()
        except OSError as exc:
            raise InvalidInput(f"cannot read Cayley table {path}: {exc.strerror}") from None
        return from_json(text, path.stem)
    parts = s.split("x")
    grp = None
    for part in parts:
        m = re.fullmatch(r"C(\d+)", part.strip())
        if not m:
            raise InvalidInput(f"bad group spec component {part!r}; expected C<k>, AxB or @path")
        c = cyclic(int(m.group(1)))
        grp = c if grp is None else direct_product(grp, c)
    if len(parts) > 1:
        object.__setattr__(grp, "name", s)
    return grp


def regular_rep(G: CayleyGroup) -> dict[int, Perm]:
    """g -> (x -> g*x)."""
    return {g: Perm(G.table[g]) for g in range(G.order)}


def ind_regular(G: CayleyGroup, g: int) -> int:
    e = G.element_orders[g]
    return G.order - G.order // e


def _nontrivial(G: CayleyGroup):
    if G.order == 1:
        raise InvalidInput("G must be nontrivial")


def smallest_prime(G: CayleyGroup) -> int:
    _nontrivial(G)
    return min(factorize(G.order))


def min_index_elements(G: CayleyGroup) -> list[int]:
    ell = smallest_prime(G)
    return [g for g, e in enumerate(G.element_orders) if e == ell]


def h_set(G: CayleyGroup) -> list[int]:
    return [0] + min_index_elements(G)


def i_over_Q(G: CayleyGroup) -> Fraction:
    return Fraction(len(min_index_elements(G)), smallest_prime(G) - 1)


def a_invariant(G: CayleyGroup) -> Fraction:
    _nontrivial(G)
    return Fraction(1, min(ind_regular(G, g) for g in range(1, G.order)))


def sylow_subgroup(G: CayleyGroup, p: int) -> list[int]:
    return [g for g, e in enumerate(G.element_orders) if _is_power_of(e, p)]


def sylow_reconstruction(G: CayleyGroup) -> tuple[CayleyGroup, list[int]]:
    """Direct product of the Sylow subgroups and the map product-id -> G-id.

    The returned map is a group isomorphism when G is nilpotent.
    """
    if G.order == 1:
        return G, [0]
    primes = sorted(factorize(G.order))
    sylows = [sylow_subgroup(G, p) for p in primes]
    prod = None
    elems: list[int] = [0]
    for S in sylows:
        pos = {g: k for k, g in enumerate(S)}
        sub = CayleyGroup(tuple(tuple(pos[G.table[a][b]] for b in S) for a in S))
        if prod is None:
            prod, elems = sub, list(S)
        else:
            prod = direct_product(prod, sub)
            elems = [G.table[x][y] for x in elems for y in S]
    return prod, elems


def is_isomorphism(G: CayleyGroup, H: CayleyGroup, phi: list[int]) -> bool:
    if G.order != H.order or sorted(phi) != list(range(H.order)):
        return False
    return all(
        phi[G.table[a][b]] == H.table[phi[a]][phi[b]]
        for a in range(G.order)
        for b in range(G.order)
    )
