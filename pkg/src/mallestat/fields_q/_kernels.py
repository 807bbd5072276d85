"""Compiled inner loops for the two cubic-form enumerations.

Strategy A (tight bounds, exact reduction tests) emits candidate rows that still
need a Python pass for exact irreducibility and boundary canonicalization.
Strategy B (loose box, d from the discriminant band, numeric real root, brute-force
rational-root and maximality tests) accumulates per-discriminant class counts.
"""
import math

import numpy as np
from numba import njit

SMALL_PRIMES = np.array([2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31], dtype=np.int64)

# GL_2(Z) matrices with entries in {-1, 0, 1}
_M = []
for _p in (-1, 0, 1):
    for _q in (-1, 0, 1):
        for _r in (-1, 0, 1):
            for _s in (-1, 0, 1):
                if abs(_p * _s - _q * _r) == 1:
                    _M.append((_p, _q, _r, _s))
SMALL_GL2 = np.array(_M, dtype=np.int64)


@njit(cache=True)
def disc_i(a, b, c, d):
    return 18 * a * b * c * d + b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d


@njit(cache=True)
def _root_mod_everywhere(a, b, c, d, primes):
    """False once some prime shows f has no projective root mod p."""
    for i in range(primes.size):
        p = primes[i]
        if a % p == 0:
            continue
        found = False
        for r in range(p):
            if (((a * r + b) * r + c) * r + d) % p == 0:
                found = True
                break
        if not found:
            return False
    return True


@njit(cache=True)
def _nonmax_hessian(a, b, c, d, p):
    """Davenport-Heilbronn non-maximality at p, locating the double root via the Hessian."""
    if a % p == 0 and b % p == 0 and c % p == 0 and d % p == 0:
        return True
    p2 = p * p
    if p < 5:
        if a % p == 0 and b % p == 0:
            return a % p2 == 0
        for r in range(p):
            if (((a * r + b) * r + c) * r + d) % p == 0 and ((3 * a * r + 2 * b) * r + c) % p == 0:
                return (((a * r + b) * r + c) * r + d) % p2 == 0
        return False
    P = (b * b - 3 * a * c) % p
    Q = (b * c - 9 * a * d) % p
    R = (c * c - 3 * b * d) % p
    if P == 0 and Q == 0 and R == 0:
        if a % p == 0:
            return a % p2 == 0
        r = (-b * _inv(3 * a % p, p)) % p
    elif P == 0:
        if Q != 0:
            return False
        return a % p2 == 0
    else:
        if (Q * Q - 4 * P * R) % p != 0:
            return False
        r = (-Q * _inv(2 * P % p, p)) % p
    return (((a * r + b) * r + c) * r + d) % p2 == 0


@njit(cache=True)
def _inv(x, p):
    # Fermat inverse, p prime
    result = 1
    base = x % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


@njit(cache=True)
def _maximal(a, b, c, d, D, spf, brute):
    n = abs(D)
    while n > 1:
        p = spf[n]
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e >= 2:
            if brute:
                if _nonmax_brute(a, b, c, d, p):
                    return False
            elif _nonmax_hessian(a, b, c, d, p):
                return False
    return True


@njit(cache=True)
def _nonmax_brute(a, b, c, d, p):
    if a % p == 0 and b % p == 0 and c % p == 0 and d % p == 0:
        return True
    p2 = p * p
    if a % p == 0 and b % p == 0 and a % p2 == 0:
        return True
    for r in range(p):
        if (((a * r + b) * r + c) * r + d) % p2 == 0 and ((3 * a * r + 2 * b) * r + c) % p == 0:
            return True
    return False


@njit(cache=True)
def _cdiv(x, y):
    return -((-x) // y)


@njit(cache=True)
def strategy_a_positive(X, a_lo, a_hi, spf, out):
    """Rows (a, b, c, d, D, flags) with 0 <= Q <= P <= R and 0 < D <= X, maximal.

    flags bit 0: exact irreducibility test still needed; bit 1: boundary form.
    Returns the row count, or -1 if `out` is too small.
    """
    s = int(math.sqrt(X))
    while s * s > X:
        s -= 1
    while (s + 1) * (s + 1) <= X:
        s += 1
    n = 0
    for a in range(a_lo, a_hi + 1):
        bmax = int(1.5 * a + 2.0 * math.sqrt(2.0) * math.sqrt(s)) + 1
        for b in range(-bmax, bmax + 1):
            b2 = b * b
            cmin = _cdiv(b2 - s, 3 * a)
            cmax = (b2 - 1) // (3 * a)
            for c in range(cmin, cmax + 1):
                P = b2 - 3 * a * c
                bc = b * c
                dlo = _cdiv(bc - P, 9 * a)
                dhi = bc // (9 * a)
                lim = c * c - P
                if b > 0:
                    dhi = min(dhi, lim // (3 * b))
                elif b < 0:
                    dlo = max(dlo, _cdiv(lim, 3 * b))
                elif lim < 0:
                    continue
                for d in range(dlo, dhi + 1):
                    D = disc_i(a, b, c, d)
                    if D <= 0 or D > X or d == 0:
                        continue
                    if not _maximal(a, b, c, d, D, spf, False):
                        continue
                    flags = 0
                    if _root_mod_everywhere(a, b, c, d, SMALL_PRIMES):
                        flags |= 1
                    Q = bc - 9 * a * d
                    R = c * c - 3 * b * d
                    if Q == P or P == R or Q == 0:
                        flags |= 2
                    if n >= out.shape[0]:
                        return -1
                    out[n, 0] = a
                    out[n, 1] = b
                    out[n, 2] = c
                    out[n, 3] = d
                    out[n, 4] = D
                    out[n, 5] = flags
                    n += 1
    return n


@njit(cache=True)
def strategy_a_negative(X, a_lo, a_hi, spf, out):
    """Rows with 0 < B < A < C and -X <= D < 0, maximal (flags as above, bit 1 unused)."""
    n = 0
    for a in range(a_lo, a_hi + 1):
        t = math.sqrt(X / 3.0) / (a * a)
        if t < 0.75:
            continue
        rho_max = 0.5 + math.sqrt(t - 0.75) + 1e-9
        cq = (16.0 * X / (27.0 * a)) ** (1.0 / 3.0) + 1e-9
        bmax = int(a * (1 + rho_max)) + 1
        a2 = a * a
        A2 = 27 * a2
        for b in range(-bmax, bmax + 1):
            clo = int(math.floor(a - a * rho_max)) - 1
            chi = int(math.ceil(cq + a * rho_max)) + 1
            u1 = -b
            u2 = a - b
            for c in range(clo, chi + 1):
                N1 = -(u1 * u1 * u1 + b * u1 * u1 + c * a * u1)
                N2 = -(u2 * u2 * u2 + b * u2 * u2 + c * a * u2)
                dhi = _cdiv(N1, a2) - 1
                dlo = N2 // a2 + 1
                if dlo > dhi:
                    continue
                B1 = 18 * a * b * c - 4 * b * b * b
                C0 = b * b * c * c - 4 * a * c * c * c
                dq = B1 * B1 + 4 * A2 * (C0 + X)
                if dq < 0:
                    continue
                sq = int(math.sqrt(dq))
                dlo = max(dlo, (B1 - sq) // (2 * A2) - 1)
                dhi = min(dhi, (B1 + sq) // (2 * A2) + 1)
                for d in range(dlo, dhi + 1):
                    if d == 0:
                        continue
                    D = C0 + B1 * d - A2 * d * d
                    if D >= 0 or D < -X:
                        continue
                    ad = abs(d)
                    # A < C  <=>  f(-|d|, a) < 0 < f(|d|, a)
                    lo_v = -a * ad * ad * ad + b * ad * ad * a - c * ad * a2 + d * a2 * a
                    hi_v = a * ad * ad * ad + b * ad * ad * a + c * ad * a2 + d * a2 * a
                    if not (lo_v < 0 and hi_v > 0):
                        continue
                    if not _maximal(a, b, c, d, D, spf, False):
                        continue
                    flags = 0
                    if _root_mod_everywhere(a, b, c, d, SMALL_PRIMES):
                        flags |= 1
                    if n >= out.shape[0]:
                        return -1
                    out[n, 0] = a
                    out[n, 1] = b
                    out[n, 2] = c
                    out[n, 3] = d
                    out[n, 4] = D
                    out[n, 5] = flags
                    n += 1
    return n


@njit(cache=True)
def _has_rational_root_brute(a, b, c, d):
    """Search x/y with y | a and x | d (y > 0) by trial division."""
    if d == 0 or a == 0:
        return True
    ad = abs(d)
    aa = abs(a)
    for q in range(1, aa + 1):
        if aa % q != 0:
            continue
        k = 1
        while k * k <= ad:
            if ad % k == 0:
                for x in (k, -k, ad // k, -(ad // k)):
                    if a * x * x * x + b * x * x * q + c * x * q * q + d * q * q * q == 0:
                        return True
            k += 1
    return False


@njit(cache=True)
def _real_root(a, b, c, d):
    """The real root of f(x, 1) when it has exactly one, by bisection."""
    m = 1.0 + max(abs(b), max(abs(c), abs(d))) / abs(a)
    lo, hi = -m, m
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        v = ((a * mid + b) * mid + c) * mid + d
        if v < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13 * max(1.0, abs(mid)):
            break
    return 0.5 * (lo + hi)


@njit(cache=True)
def _transform(a, b, c, d, p, q, r, s):
    A = a * p * p * p + b * p * p * r + c * p * r * r + d * r * r * r
    B = 3 * a * p * p * q + b * (p * p * s + 2 * p * q * r) + c * (r * r * q + 2 * p * r * s) + 3 * d * r * r * s
    C = 3 * a * p * q * q + b * (q * q * r + 2 * p * q * s) + c * (s * s * p + 2 * q * r * s) + 3 * d * r * s * s
    D = a * q * q * q + b * q * q * s + c * q * s * s + d * s * s * s
    return A, B, C, D


@njit(cache=True)
def _reduced_equivalent_count(a, b, c, d, mats):
    found = np.zeros((mats.shape[0], 4), dtype=np.int64)
    k = 0
    for i in range(mats.shape[0]):
        A, B, C, D = _transform(a, b, c, d, mats[i, 0], mats[i, 1], mats[i, 2], mats[i, 3])
        if A == 0:
            continue
        if A < 0:
            A, B, C, D = -A, -B, -C, -D
        P = B * B - 3 * A * C
        Q = B * C - 9 * A * D
        R = C * C - 3 * B * D
        if not (abs(Q) <= P and P <= R):
            continue
        dup = False
        for j in range(k):
            if found[j, 0] == A and found[j, 1] == B and found[j, 2] == C and found[j, 3] == D:
                dup = True
                break
        if not dup:
            found[k, 0] = A
            found[k, 1] = B
            found[k, 2] = C
            found[k, 3] = D
            k += 1
    return k


@njit(cache=True)
def strategy_b(X, spf, mats, hist_pos, hist_neg):
    """Fill hist_pos[D] (fractional class weights) and hist_neg[|D|] (counts)."""
    x4 = X ** 0.25
    sx = math.sqrt(X)
    for sign in (1, -1):
        amax = int(0.5 * x4) + 1 if sign > 0 else int(x4) + 1
        for a in range(1, amax + 1):
            bmax = int(2 * a + 3 * x4) + 2
            A2 = 27 * a * a
            for b in range(-bmax, bmax + 1):
                if sign > 0:
                    c_lo = int(math.floor((b * b - sx) / (3 * a))) - 1
                    c_hi = (b * b - 1) // (3 * a)
                else:
                    c_lo = -int(3 * a + 2 * x4) - 2
                    c_hi = int((X / a) ** (1.0 / 3.0) + 2 * a + 2 * x4) + 3
                target = 1 if sign > 0 else -X
                for c in range(c_lo, c_hi + 1):
                    B1 = 18 * a * b * c - 4 * b * b * b
                    C0 = b * b * c * c - 4 * a * c * c * c
                    dq = float(B1) * B1 + 4.0 * A2 * (C0 - target)
                    if dq < 0:
                        continue
                    sq = math.sqrt(dq)
                    d_lo = int(math.floor((B1 - sq) / (2 * A2))) - 2
                    d_hi = int(math.ceil((B1 + sq) / (2 * A2))) + 2
                    for d in range(d_lo, d_hi + 1):
                        if d == 0:
                            continue
                        D = C0 + B1 * d - A2 * d * d
                        if sign > 0:
                            if D <= 0 or D > X:
                                continue
                            P = b * b - 3 * a * c
                            Q = b * c - 9 * a * d
                            R = c * c - 3 * b * d
                            if not (abs(Q) <= P and P <= R):
                                continue
                        else:
                            if D >= 0 or D < -X:
                                continue
                            rho = _real_root(a, b, c, d)
                            Bq = b + a * rho
                            Cq = c + Bq * rho
                            if not (Bq > 0 and Bq < a and a < Cq):
                                continue
                        if _has_rational_root_brute(a, b, c, d):
                            continue
                        if not _maximal(a, b, c, d, D, spf, True):
                            continue
                        if sign > 0:
                            hist_pos[D] += 1.0 / _reduced_equivalent_count(a, b, c, d, mats)
                        else:
                            hist_neg[-D] += 1.0
