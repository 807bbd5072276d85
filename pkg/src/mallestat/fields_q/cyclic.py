"""Cyclic fields of odd prime degree ell over Q, listed through their conductors.

A conductor is f = m or m * ell^2 with m a squarefree product of primes = 1 mod ell;
disc = f^(ell-1).  The fields of conductor exactly f correspond to order-ell
Dirichlet characters that are primitive mod f, up to taking powers; writing a
character as a tuple of exponents (one per prime-power component, each in
1..ell-1) and scaling the first entry to 1 gives (ell-1)^(r-1) canonical tuples.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from ..arith import factorize, iroot, primes_up_to
from ..disc_model import RamProfile, Tame, Wild
from ..errors import InvalidInput, ResourceLimitExceeded

SUPPORTED_ELL = (3, 5, 7)
DEFAULT_CAP = 10 ** 40


@dataclass(frozen=True)
class CyclicField:
    ell: int
    conductor: int
    character_index: int
    character: tuple[int, ...]
    ram: RamProfile

    @property
    def degree(self) -> int:
        return self.ell

    @property
    def disc(self) -> int:
        return self.conductor ** (self.ell - 1)

    @property
    def abs_disc(self) -> int:
        return self.disc


def _check_ell(ell: int):
    if ell not in SUPPORTED_ELL:
        raise InvalidInput(f"ell must be one of {SUPPORTED_ELL} (got {ell})")


def conductor_components(f: int, ell: int) -> list[int] | None:
    """Prime-power components of a valid conductor, or None if f is not one."""
    if f == 1:
        return []
    comps = []
    for p, e in sorted(factorize(f).items()):
        if p == ell and e == 2:
            comps.append(p * p)
        elif p != ell and e == 1 and p % ell == 1:
            comps.append(p)
        else:
            return None
    return comps


def fields_with_conductor(f: int, ell: int) -> int:
    """(ell-1)^(r-1) for a valid conductor with r components, 0 otherwise (1 for f=1 is excluded)."""
    comps = conductor_components(f, ell)
    if not comps:
        return 0
    return (ell - 1) ** (len(comps) - 1)


def _ram(f: int, ell: int) -> RamProfile:
    prof = RamProfile()
    for p in sorted(factorize(f)):
        if p == ell:
            prof[p] = Wild(2 * (ell - 1), f"C{ell}")
        else:
            prof[p] = Tame((ell,))
    return prof


def conductors_up_to(ell: int, fmax: int) -> list[int]:
    """Valid conductors f <= fmax, ascending."""
    primes = [p for p in primes_up_to(fmax) if p % ell == 1]
    out = [1]
    for p in primes:
        out += [x * p for x in out if x * p <= fmax]
    with_wild = [x * ell * ell for x in out if x * ell * ell <= fmax]
    return sorted(set(out[1:] + with_wild))


def enumerate_cyclic(ell: int, max_disc: int, cap: int = DEFAULT_CAP) -> list[CyclicField]:
    """One record per cyclic degree-ell field with disc <= max_disc, by (disc, index)."""
    _check_ell(ell)
    if max_disc > cap:
        raise ResourceLimitExceeded(f"max disc exceeds cap {cap}")
    if max_disc < 1:
        return []
    fmax = iroot(int(max_disc), ell - 1)
    out = []
    for f in conductors_up_to(ell, fmax):
        r = len(conductor_components(f, ell))
        tuples = [(1,) + rest for rest in product(range(1, ell), repeat=r - 1)]
        ram = _ram(f, ell)
        for k, chi in enumerate(tuples):
            out.append(CyclicField(ell, f, k, chi, ram))
    return out


def count_by_formula(ell: int, fmax: int) -> dict[int, int]:
    """conductor -> number of fields, from (ell-1)^(r-1)."""
    return {f: fields_with_conductor(f, ell) for f in conductors_up_to(ell, fmax)}


def count_by_characters(ell: int, fmax: int) -> dict[int, int]:
    """conductor -> number of fields, from explicit unit groups.

    For every modulus d <= fmax the number of characters with chi^ell = 1 is
    [(Z/d)^* : ((Z/d)^*)^ell], found by computing the set of ell-th powers.
    Moebius inversion over divisors gives the primitive ones; dividing by ell-1
    (the nontrivial powers of a character) gives the number of fields.
    """
    _check_ell(ell)
    n_chars = np.zeros(fmax + 1, dtype=np.int64)
    for d in range(1, fmax + 1):
        x = np.arange(d, dtype=np.int64)
        units = x[np.gcd(x, d) == 1] if d > 1 else np.array([0], dtype=np.int64)
        y = np.ones_like(units) % max(d, 1)
        for _ in range(ell):
            y = (y * units) % max(d, 1)
        n_chars[d] = units.size // np.unique(y).size
    mu = _mobius(fmax)
    out = {}
    for f in range(2, fmax + 1):
        prim = 0
        for g in _divisors(f):
            m = mu[f // g]
            if m:
                prim += m * n_chars[g]
        if prim:
            if prim % (ell - 1):
                raise AssertionError(f"primitive character count {prim} at {f} not divisible by {ell - 1}")
            out[f] = prim // (ell - 1)
    return out


def _mobius(n: int) -> np.ndarray:
    mu = np.ones(n + 1, dtype=np.int64)
    for p in primes_up_to(n):
        mu[::p] *= -1
        mu[:: p * p] = 0
    return mu


def _divisors(n: int) -> list[int]:
    small = [k for k in range(1, math.isqrt(n) + 1) if n % k == 0]
    return sorted(set(small + [n // k for k in small]))
