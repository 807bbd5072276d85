"""Multiset counting engine: F_i, product counts, the Abel-summation lower-bound
constant, the congruence-restricted squarefree sum A_z, and log-log fits."""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from itertools import accumulate
from typing import Iterable, Sequence

import numpy as np

from .arith import iroot, primes_up_to
from .errors import InvalidInput


class WeightedMultiset:
    """Sorted (value, multiplicity) pairs with prefix-sum counting F(X)."""

    def __init__(self, items: Iterable[tuple[int, int]]):
        merged: dict[int, int] = {}
        for v, k in items:
            v, k = int(v), int(k)
            if v < 1 or k < 1:
                raise InvalidInput("values and multiplicities must be positive integers")
            merged[v] = merged.get(v, 0) + k
        self.values = sorted(merged)
        self.mults = [merged[v] for v in self.values]
        self._prefix = list(accumulate(self.mults))

    @classmethod
    def from_values(cls, values: Iterable[int]) -> "WeightedMultiset":
        return cls((v, 1) for v in values)

    def __len__(self):
        return len(self.values)

    def items(self):
        return zip(self.values, self.mults)

    def F(self, X) -> int:
        """Number of entries (with multiplicity) <= X."""
        k = bisect.bisect_right(self.values, X)
        return self._prefix[k - 1] if k else 0


def product_count(S1: WeightedMultiset, S2: WeightedMultiset, a: int, b: int, X) -> int:
    """#{(s1, s2) : s1^a s2^b <= X}, counted with multiplicity."""
    if a < 1 or b < 1:
        raise InvalidInput("exponents a and b must be positive integers")
    X = math.floor(X)
    total = 0
    for r, k in S2.items():
        rb = r ** b
        if rb > X:
            break
        total += k * S1.F(iroot(X // rb, a))
    return total


def lower_bound_constant(c1: float, c2: float, a: int, b: int, alpha: float) -> float:
    """min{c1 c2, c1 c2 a/(b - a alpha) (1 - 2^(alpha - b/a))}."""
    if b - a * alpha <= 0:
        raise InvalidInput("hypothesis b - a*alpha > 0 is violated")
    if not 0 < alpha < 1:
        raise InvalidInput("alpha must lie in (0, 1)")
    cc = c1 * c2
    return min(cc, cc * a / (b - a * alpha) * (1 - 2 ** (alpha - b / a)))


def _weights(z, omega: np.ndarray):
    if float(z).is_integer():
        return np.power(np.int64(int(z)), omega.astype(np.int64))
    return np.power(float(z), omega.astype(np.float64))


def A_z_many(xs: Sequence[int], ell: int, z, excluded: Iterable[int] = (),
             segment: int = 1 << 22) -> list:
    """A_z at each x in xs: sum over squarefree I <= x whose prime factors are all
    = 1 mod ell and not excluded, of z^omega(I). Exact for integer z."""
    xs = [int(x) for x in xs]
    if not xs:
        return []
    if min(xs) < 1:
        raise InvalidInput("x must be a positive integer")
    excl = set(excluded)
    xmax = max(xs)
    root = math.isqrt(xmax)
    small = primes_up_to(root)
    good = [p for p in small if p % ell == 1 and p not in excl]
    bad = [p for p in small if not (p % ell == 1 and p not in excl)]
    integer_z = float(z).is_integer()
    order = sorted(range(len(xs)), key=lambda i: xs[i])
    out = [None] * len(xs)
    running = 0 if integer_z else 0.0
    qi = 0
    lo = 1
    while lo <= xmax and qi < len(order):
        hi = min(lo + segment, xmax + 1)
        n = np.arange(lo, hi, dtype=np.int64)
        rem = n.copy()
        omega = np.zeros(hi - lo, dtype=np.int8)
        ok = np.ones(hi - lo, dtype=bool)
        for p in bad:
            if p >= hi:
                break
            start = (-lo) % p
            ok[start::p] = False
        for p in good:
            if p >= hi:
                break
            start = (-lo) % p
            sl = slice(start, None, p)
            rem[sl] //= p
            omega[sl] += 1
            p2 = p * p
            if p2 < hi:
                ok[(-lo) % p2 :: p2] = False
        # leftover cofactor is 1 or a single prime above sqrt(xmax)
        big = rem > 1
        big_ok = (rem % ell == 1)
        for p in excl:
            if p > root:
                big_ok &= rem != p
        ok &= ~big | big_ok
        omega = omega + big.astype(np.int8)
        w = np.where(ok, _weights(z, omega), 0)
        csum = np.cumsum(w)
        while qi < len(order) and xs[order[qi]] < hi:
            x = xs[order[qi]]
            part = csum[x - lo] if x >= lo else 0
            val = running + (int(part) if integer_z else float(part))
            out[order[qi]] = val
            qi += 1
        running += int(csum[-1]) if integer_z else float(csum[-1])
        lo = hi
    return out


def A_z(x: int, ell: int, z, excluded: Iterable[int] = ()):
    if x < 2:
        raise InvalidInput("A_z needs x >= 2")
    return A_z_many([x], ell, z, excluded)[0]


def abscissa_estimate(S: WeightedMultiset, window: float = 10.0) -> float:
    """Estimate of the convergence abscissa from F(N)/F(N/window) ~ window^a.

    A heuristic, not a certificate; N is the largest value in S. Returns 0 when
    the window holds all the mass (finite series converge everywhere).
    """
    if len(S) == 0:
        raise InvalidInput("multiset is empty")
    if window <= 1:
        raise InvalidInput("window must exceed 1")
    N = S.values[-1]
    top, low = S.F(N), S.F(N / window)
    if low == 0:
        return 0.0
    return max(0.0, math.log(top / low) / math.log(window))


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residual: float
    window: tuple

    def as_dict(self):
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "residual": self.residual,
            "window": list(self.window),
        }


def loglog_fit(samples: Sequence[tuple[float, float]]) -> FitResult:
    """Least squares of log N against log X; residual is the RMS deviation."""
    pts = [(float(x), float(n)) for x, n in samples]
    if len(pts) < 3:
        raise InvalidInput(">= 3 samples required")
    if any(x <= 0 or n <= 0 for x, n in pts):
        raise InvalidInput("samples need X > 0 and N > 0")
    lx = np.log([x for x, _ in pts])
    ln = np.log([n for _, n in pts])
    if np.ptp(lx) == 0:
        raise InvalidInput("degenerate samples: all X are equal")
    slope, intercept = np.polyfit(lx, ln, 1)
    resid = float(np.sqrt(np.mean((ln - (slope * lx + intercept)) ** 2)))
    return FitResult(float(slope), float(intercept), resid, (min(x for x, _ in pts), max(x for x, _ in pts)))


def log_spaced(lo: float, hi: float, k: int) -> list[int]:
    """k integer sample points spread evenly on a log scale."""
    if k < 2:
        return [int(hi)]
    return sorted({int(round(lo * (hi / lo) ** (i / (k - 1)))) for i in range(k)})
