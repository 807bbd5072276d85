"""Exact permutation arithmetic.

Points are 0-indexed internally; cycle notation strings are 1-indexed.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidInput, ResourceLimitExceeded

DEFAULT_ORDER_CAP = 10 ** 6


@dataclass(frozen=True)
class Perm:
    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        n = len(imgs)
        if n == 0:
            raise InvalidInput("a permutation needs degree N >= 1")
        if sorted(imgs) != list(range(n)):
            raise InvalidInput("images must be a bijection of {0..N-1}")
        object.__setattr__(self, "images", imgs)

    @property
    def N(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Perm":
        """Build from 0-indexed cycles."""
        img = list(range(n))
        seen = set()
        for cyc in cycles:
            for a in cyc:
                if not 0 <= a < n:
                    raise InvalidInput(f"point {a} outside 0..{n - 1}")
                if a in seen:
                    raise InvalidInput(f"point {a} appears in two cycles")
                seen.add(a)
            for k, a in enumerate(cyc):
                img[a] = cyc[(k + 1) % len(cyc)]
        return cls(tuple(img))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Perm":
        """Parse 1-indexed cycle notation like "(1 2)(3 4 5)"; "()" is the identity."""
        s = text.strip()
        if not re.fullmatch(r"(\(\s*(\d+([\s,]+\d+)*)?\s*\))+", s):
            raise InvalidInput(f"malformed cycle notation: {text!r}")
        cycles = []
        for body in re.findall(r"\(([^)]*)\)", s):
            pts = [int(x) - 1 for x in re.split(r"[\s,]+", body.strip()) if x]
            if any(p < 0 for p in pts):
                raise InvalidInput("cycle notation is 1-indexed; 0 is not a point")
            if pts:
                cycles.append(pts)
        top = max((max(c) for c in cycles), default=0) + 1
        if n is None:
            n = top
        elif top > n:
            raise InvalidInput(f"cycle mentions point {top} but degree is {n}")
        return cls.from_cycles(n, cycles)

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = [False] * self.N
        out = []
        for i in range(self.N):
            if seen[i]:
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = self.images[j]
            if include_fixed or len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """Cycle lengths (fixed points included), sorted descending."""
        return tuple(sorted((len(c) for c in self.cycles(True)), reverse=True))

    def order(self) -> int:
        return math.lcm(*self.cycle_type())

    def inverse(self) -> "Perm":
        inv = [0] * self.N
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def __pow__(self, k: int) -> "Perm":
        k %= self.order()
        img = list(range(self.N))
        for cyc in self.cycles():
            L = len(cyc)
            for idx, a in enumerate(cyc):
                img[a] = cyc[(idx + k) % L]
        return Perm(tuple(img))

    def __mul__(self, other: "Perm") -> "Perm":
        return compose(self, other)

    def __str__(self) -> str:
        cs = self.cycles()
        if not cs:
            return "()"
        return "".join("(" + " ".join(str(a + 1) for a in c) + ")" for c in cs)


def compose(p: Perm, q: Perm) -> Perm:
    """(p o q)(i) = p(q(i))."""
    if p.N != q.N:
        raise InvalidInput(f"degree mismatch: {p.N} vs {q.N}")
    pi = p.images
    return Perm(tuple(pi[j] for j in q.images))


def ind(p: Perm | Sequence[int]) -> int:
    """N minus the number of orbits; accepts a Perm or a cycle type."""
    if isinstance(p, Perm):
        return p.N - len(p.cycles(True))
    parts = tuple(p)
    return sum(parts) - len(parts)


def product_embed(s: Perm, t: Perm) -> Perm:
    """Action of (s, t) on pairs (i, j), flattened as i*m + j."""
    m = t.N
    ti = t.images
    return Perm(tuple(s.images[i] * m + ti[j] for i in range(s.N) for j in range(m)))


def closure(generators: Sequence[Perm], cap: int = DEFAULT_ORDER_CAP) -> list[Perm]:
    """All elements of the group generated, identity first (BFS)."""
    if not generators:
        raise InvalidInput("at least one generator is needed to fix the degree")
    n = generators[0].N
    for g in generators:
        if g.N != n:
            raise InvalidInput("generators have different degrees")
    ident = tuple(range(n))
    gens = [g.images for g in generators]
    seen = {ident}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(g[j] for j in x)
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise ResourceLimitExceeded(
                            f"group order exceeds cap of {cap} elements"
                        )
        frontier = nxt
    return [Perm(x) for x in order]


@dataclass(frozen=True)
class ConjClass:
    representative: Perm
    size: int
    index: int
    members: frozenset


@dataclass(frozen=True)
class ConjClassSet:
    classes: tuple[ConjClass, ...]
    group_order: int

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def class_of(self, p: Perm) -> int:
        for k, c in enumerate(self.classes):
            if p.images in c.members:
                return k
        raise InvalidInput(f"{p} is not in the group")


def conjugacy_classes(generators: Sequence[Perm], cap: int = DEFAULT_ORDER_CAP) -> ConjClassSet:
    elems = closure(generators, cap)
    imgs = [e.images for e in elems]
    gens = [g.images for g in generators]
    gens_inv = [g.inverse().images for g in generators]
    unassigned = set(imgs)
    classes = []
    for x in imgs:
        if x not in unassigned:
            continue
        # orbit under conjugation by generators is the full class
        orbit = {x}
        stack = [x]
        while stack:
            y = stack.pop()
            for g, gi in zip(gens, gens_inv):
                z = tuple(g[y[gi[k]]] for k in range(len(y)))
                if z not in orbit:
                    orbit.add(z)
                    stack.append(z)
        unassigned -= orbit
        rep = Perm(x)
        classes.append(ConjClass(rep, len(orbit), ind(rep), frozenset(orbit)))
    return ConjClassSet(tuple(classes), len(imgs))


def power_action_orbits(classes: ConjClassSet, group_order: int | None = None) -> list[list[int]]:
    """Orbits of class indices under [g] -> [g^c], c coprime to the group order."""
    n = classes.group_order if group_order is None else group_order
    units = [c for c in range(1, max(n, 2)) if math.gcd(c, n) == 1]
    parent = list(range(len(classes)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for k, cl in enumerate(classes.classes):
        for c in units:
            j = classes.class_of(cl.representative ** c)
            ra, rb = find(k), find(j)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for k in range(len(classes)):
        groups.setdefault(find(k), []).append(k)
    return sorted(groups.values())


def symmetric_generators(n: int) -> list[Perm]:
    if n == 1:
        return [Perm.identity(1)]
    gens = [Perm.from_cycles(n, [[0, 1]])]
    if n > 2:
        gens.append(Perm.from_cycles(n, [list(range(n))]))
    return gens


def cycle_type_counts(n: int) -> Counter:
    """Number of elements of S_n with each cycle type."""
    out: Counter = Counter()

    def parts(rem, maxp):
        if rem == 0:
            yield ()
            return
        for k in range(min(rem, maxp), 0, -1):
            for rest in parts(rem - k, k):
                yield (k,) + rest

    for ct in parts(n, n):
        denom = 1
        for k, mult in Counter(ct).items():
            denom *= k ** mult * math.factorial(mult)
        out[ct] = math.factorial(n) // denom
    return out
