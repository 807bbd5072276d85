"""Small exact-arithmetic helpers shared across modules."""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


def iroot(n: int, k: int) -> int:
    """Largest integer r >= 0 with r**k <= n (n >= 0)."""
    if n < 0:
        raise ValueError("iroot of a negative number")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    r = int(round(n ** (1.0 / k))) if n < 1 << 1000 else 1 << (n.bit_length() // k + 1)
    # float guess is off by at most a few units for the sizes we see; fix up exactly
    while r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def spf_sieve(n: int) -> np.ndarray:
    """Smallest-prime-factor table for 0..n (entries 0 and 1 are 0)."""
    spf = np.zeros(n + 1, dtype=np.int32)
    if n < 2:
        return spf
    spf[2::2] = 2
    for p in range(3, math.isqrt(n) + 1, 2):
        if spf[p] == 0:
            block = spf[p * p :: 2 * p]
            block[block == 0] = p
    idx = np.nonzero(spf == 0)[0]
    spf[idx[idx >= 2]] = idx[idx >= 2]
    return spf


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].tolist()


@lru_cache(maxsize=None)
def _small_primes(limit: int) -> tuple[int, ...]:
    return tuple(primes_up_to(limit))


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| by trial division (n != 0)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    for p in _small_primes(1 << 12):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    else:
        p = (1 << 12) + 1
        while p * p <= n:
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out[p] = e
            p += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def factorize_spf(n: int, spf: np.ndarray) -> dict[int, int]:
    """Factor |n| using a smallest-prime-factor table that covers it."""
    n = abs(n)
    out: dict[int, int] = {}
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out[p] = e
    return out


def valuation(n: int, p: int) -> int:
    n = abs(n)
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factorize(n) == {n: 1}


def smallest_prime_factor(n: int) -> int:
    return min(factorize(n))


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)
