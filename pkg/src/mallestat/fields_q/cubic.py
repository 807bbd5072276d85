"""Cubic fields over Q from reduced integral binary cubic forms.

A form f = a x^3 + b x^2 y + c x y^2 + d y^3 has discriminant
D = 18abcd + b^2c^2 - 4ac^3 - 4b^3d - 27a^2d^2 and Hessian (P, Q, R) =
(b^2 - 3ac, bc - 9ad, c^2 - 3bd) with 4PR - Q^2 = 3D.  Classes of irreducible
forms whose ring is maximal correspond to cubic fields.

Reduction (one form per GL_2(Z) class, a > 0):
  D > 0: the Hessian is reduced, 0 <= Q <= P <= R; boundary ties resolved by
         taking the least such form among the finitely many reduced equivalents.
  D < 0: writing f = (x - rho y)(A x^2 + B x y + C y^2) with rho real,
         0 < B < A < C (ties are impossible for irreducible f).
"""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from ..arith import ceil_div, factorize, factorize_spf, iroot, is_square, spf_sieve
from ..disc_model import RamProfile, Tame, Wild
from ..errors import InvalidInput, ResourceLimitExceeded

DEFAULT_CAP = 10 ** 7


def disc(a: int, b: int, c: int, d: int) -> int:
    return 18 * a * b * c * d + b * b * c * c - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d


def hessian(a, b, c, d):
    return b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d


def transform(f, g):
    """f(px + qy, rx + sy) for g = (p, q, r, s)."""
    a, b, c, d = f
    p, q, r, s = g
    A = a * p ** 3 + b * p * p * r + c * p * r * r + d * r ** 3
    B = 3 * a * p * p * q + b * (p * p * s + 2 * p * q * r) + c * (r * r * q + 2 * p * r * s) + 3 * d * r * r * s
    C = 3 * a * p * q * q + b * (q * q * r + 2 * p * q * s) + c * (s * s * p + 2 * q * r * s) + 3 * d * r * s * s
    D = a * q ** 3 + b * q * q * s + c * q * s * s + d * s ** 3
    return A, B, C, D


_SMALL_GL2 = [
    g for g in product((-1, 0, 1), repeat=4) if abs(g[0] * g[3] - g[1] * g[2]) == 1
]


def _hessian_reduced(f) -> bool:
    P, Q, R = hessian(*f)
    return abs(Q) <= P <= R


def _q_nonneg(f) -> bool:
    return hessian(*f)[1] >= 0


def _on_boundary(P, Q, R) -> bool:
    return abs(Q) == P or P == R or Q == 0


def canonical_positive(f) -> tuple[int, int, int, int]:
    """Least form (a > 0, Q >= 0) among the reduced-Hessian forms reachable by small steps."""
    def norm(g):
        return g if g[0] > 0 else tuple(-x for x in g)

    start = norm(tuple(f))
    seen = {start}
    stack = [start]
    while stack:
        h = stack.pop()
        for g in _SMALL_GL2:
            k = transform(h, g)
            if k[0] == 0 or not _hessian_reduced(k):
                continue
            k = norm(k)
            if k not in seen:
                seen.add(k)
                stack.append(k)
    return min(k for k in seen if _q_nonneg(k))


def has_rational_root(a: int, b: int, c: int, d: int) -> bool:
    """True if f has a linear factor over Q (projective root)."""
    if a == 0 or d == 0:
        return True
    # a projective root mod a small prime is necessary for a rational root
    for p in (2, 3, 5, 7, 11, 13):
        if not any((a * x ** 3 + b * x * x + c * x + d) % p == 0 for x in range(p)) and (a % p):
            return False
    roots = np.roots([a, b, c, d])
    qs = [q for q in range(1, abs(a) + 1) if a % q == 0]
    for r in roots:
        if abs(r.imag) > 1e-6 * max(1.0, abs(r.real)):
            continue
        for q in qs:
            for p in (math.floor(r.real * q), math.ceil(r.real * q)):
                if a * p ** 3 + b * p * p * q + c * p * q * q + d * q ** 3 == 0:
                    return True
    return False


def root_multiplicities(f, p: int) -> list[tuple[object, int]]:
    """Projective roots of f mod p with multiplicities; 'inf' is the point (1:0).

    Requires f not identically zero mod p.
    """
    coeffs = [x % p for x in f]
    out = []
    # multiplicity at infinity = number of vanishing leading coefficients
    k = 0
    while k < 3 and coeffs[k] == 0:
        k += 1
    if k:
        out.append(("inf", k))
    poly = coeffs[k:]
    for r in range(p):
        m = 0
        cur = poly
        while len(cur) > 1:
            # synthetic division by (x - r)
            q = [cur[0]]
            for co in cur[1:]:
                q.append((co + q[-1] * r) % p)
            if q[-1]:
                break
            m += 1
            cur = q[:-1]
        if m:
            out.append((r, m))
    return out


def _double_root(f, p: int):
    """The repeated projective root of f mod p, or None; via the Hessian for p >= 5."""
    a, b, c, d = f
    if p < 5:
        for r, m in root_multiplicities(f, p):
            if m >= 2:
                return r, m
        return None
    P, Q, R = (x % p for x in hessian(a, b, c, d))
    if P == 0 and Q == 0 and R == 0:
        # triple root
        if a % p:
            return (-b * pow(3 * a, -1, p)) % p, 3
        return "inf", 3
    if P == 0:
        return ("inf", 2) if Q == 0 else None
    if (Q * Q - 4 * P * R) % p:
        return None
    return (-Q * pow(2 * P, -1, p)) % p, 2


def _nonmaximal_at(f, p: int, dbl) -> bool:
    a, b, c, d = f
    if a % p == 0 and b % p == 0 and c % p == 0 and d % p == 0:
        return True
    if dbl is None:
        return False
    r, _ = dbl
    p2 = p * p
    if r == "inf":
        return a % p2 == 0
    return (a * r ** 3 + b * r * r + c * r + d) % p2 == 0


def is_maximal(f, D: int, spf) -> bool:
    for p, e in factorize_spf(D, spf).items():
        if e >= 2 and _nonmaximal_at(f, p, _double_root(f, p)):
            return False
    return True


def ram_profile(f, D: int, spf=None) -> RamProfile:
    fac = factorize_spf(D, spf) if spf is not None else factorize(D)
    prof = RamProfile()
    for p, v in sorted(fac.items()):
        dbl = _double_root(f, p)
        total = dbl is not None and dbl[1] == 3
        e = 3 if total else 2
        if e % p == 0:
            prof[p] = Wild(v, "P3" if total else "P2P1")
        else:
            prof[p] = Tame((3,) if total else (2, 1))
    return prof


@dataclass(frozen=True)
class CubicField:
    form: tuple[int, int, int, int]
    disc: int
    ram: RamProfile
    degree: int = 3

    @property
    def is_cyclic(self) -> bool:
        return is_square(self.disc)

    @property
    def abs_disc(self) -> int:
        return abs(self.disc)

    def sort_key(self):
        return (abs(self.disc), self.disc > 0, self.form)


# --- Strategy A: tight bounds, exact integer tests ---------------------------------
#
# Bounds (X = max |disc|):
#   D > 0: 27 D a^2 <= 4 P^3 (syzygy 4H^3 = G^2 + 27 D f^2 at (1, 0)) and P <= sqrt D
#          give a^4 <= 16X/729.  The roots lie within sqrt(2P)/a of each other and
#          the Hessian-weighted root mean has |m| <= 1/2, so |b| <= 1.5a + 2 sqrt(2P).
#   D < 0: |D| = (4AC - B^2) Q(rho, 1)^2 >= 27 A C^3 / 16 gives a^4 <= 16X/27 and
#          C^3 <= 16X/(27a); also rho^2 - |rho| + 1 <= sqrt(X/3)/a^2.

def _a_max_pos(X):
    return iroot(16 * X // 729, 4) + 1


def _a_max_neg(X):
    return iroot(16 * X // 27, 4) + 1


@lru_cache(maxsize=4)
def _spf(X: int):
    return spf_sieve(X).astype(np.int64)


def _run_kernel(kernel, X, a_lo, a_hi, spf):
    size = 1024 + X // 4
    while True:
        out = np.zeros((size, 6), dtype=np.int64)
        n = kernel(X, a_lo, a_hi, spf, out)
        if n >= 0:
            return out[:n]
        size *= 2


def _shard(args):
    X, sign, a_lo, a_hi = args
    from . import _kernels

    spf = _spf(X)
    kernel = _kernels.strategy_a_positive if sign > 0 else _kernels.strategy_a_negative
    rows = _run_kernel(kernel, X, a_lo, a_hi, spf)
    keep = []
    for a, b, c, d, D, flags in rows.tolist():
        f = (a, b, c, d)
        if flags & 1 and has_rational_root(*f):
            continue
        if flags & 2 and canonical_positive(f) != f:
            continue
        keep.append((f, D))
    return keep


def _shards(X: int, threads: int):
    k = max(1, threads)
    out = []
    for sign, amax in ((1, _a_max_pos(X)), (-1, _a_max_neg(X))):
        # leading coefficients split into contiguous ranges
        step = max(1, -(-amax // k))
        for lo in range(1, amax + 1, step):
            out.append((X, sign, lo, min(amax, lo + step - 1)))
    return out


def enumerate_cubic(max_abs_disc: int, threads: int = 1, cap: int = DEFAULT_CAP) -> list[CubicField]:
    """One record per cubic field with |disc| <= max_abs_disc, both signatures,
    sorted by (|disc|, sign, form)."""
    X = int(max_abs_disc)
    if X > cap:
        raise ResourceLimitExceeded(f"max |disc| {X} exceeds cap {cap}")
    if X < 1:
        return []
    jobs = _shards(X, threads)
    if threads > 1:
        with ProcessPoolExecutor(threads) as ex:
            parts = list(ex.map(_shard, jobs))
    else:
        parts = [_shard(j) for j in jobs]
    spf = _spf(X)
    out = [CubicField(f, D, ram_profile(f, D, spf)) for part in parts for f, D in part]
    out.sort(key=CubicField.sort_key)
    return out


# --- Strategy B: loose box bounds, independent tests --------------------------------

def cubic_histogram_boxed(max_abs_disc: int, cap: int = DEFAULT_CAP) -> Counter:
    """Counter disc -> number of cubic fields, by a second independent enumeration.

    Coefficient boxes are looser than strategy A's, d ranges come from the
    discriminant band alone, D < 0 reduction uses a numerically located real root,
    irreducibility and maximality are tested by brute force, and each D > 0 reduced
    form is weighted by 1/(number of reduced forms in its class).
    """
    from . import _kernels

    X = int(max_abs_disc)
    if X > cap:
        raise ResourceLimitExceeded(f"max |disc| {X} exceeds cap {cap}")
    hist: Counter = Counter()
    if X < 1:
        return hist
    pos = np.zeros(X + 1)
    neg = np.zeros(X + 1)
    _kernels.strategy_b(X, _spf(X), _kernels.SMALL_GL2, pos, neg)
    for arr, sgn in ((pos, 1), (neg, -1)):
        idx = np.nonzero(arr > 0.5)[0]
        vals = arr[idx]
        rounded = np.rint(vals)
        if np.any(np.abs(vals - rounded) > 1e-6):
            raise AssertionError("fractional class count in strategy B")
        for D, k in zip(idx.tolist(), rounded.astype(np.int64).tolist()):
            hist[sgn * D] = k
    return hist


def histogram(fields) -> Counter:
    return Counter(k.disc for k in fields)
