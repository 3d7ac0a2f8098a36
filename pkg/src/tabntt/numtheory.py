"""Exact integer number theory used while preprocessing a transform.

Everything here is a pure function of its arguments.  Inputs are expected to
stay below roughly 2**64; primality is deterministic in that range.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field

import numpy as np

log = logging.getLogger(__name__)

# Deterministic Miller-Rabin witness set, exact for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_SEGMENT = 1 << 18
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


class SearchExhaustedError(RuntimeError):
    pass


@dataclass(frozen=True)
class PrimeList:
    limit: int
    primes: tuple[int, ...]

    def __len__(self):
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)

    def __getitem__(self, i):
        return self.primes[i]


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: dict[int, int] = field(default_factory=dict)

    def primes(self) -> list[int]:
        return sorted(self.factors)

    def largest(self) -> int:
        return max(self.factors, default=1)

    def totient(self) -> int:
        phi = 1
        for p, e in self.factors.items():
            phi *= (p - 1) * p ** (e - 1)
        return phi

    def divisors(self) -> list[int]:
        divs = [1]
        for p, e in sorted(self.factors.items()):
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)


def _base_sieve(limit: int) -> np.ndarray:
    mark = np.ones(limit + 1, dtype=bool)
    mark[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mark[p]:
            mark[p * p :: p] = False
    return np.flatnonzero(mark)


def sieve_primes(limit: int) -> PrimeList:
    """All primes <= limit, by a segmented sieve of Eratosthenes."""
    if limit < 2:
        return PrimeList(limit, ())
    base = _base_sieve(math.isqrt(limit))
    found = []
    for lo in range(0, limit + 1, _SEGMENT):
        hi = min(lo + _SEGMENT, limit + 1)
        mark = np.ones(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, -(-lo // p) * p)
            mark[start - lo :: p] = False
        if lo == 0:
            mark[: min(2, hi)] = False
        found.append(np.flatnonzero(mark) + lo)
    primes = np.concatenate(found)
    return PrimeList(limit, tuple(int(p) for p in primes))


def first_primes(count: int) -> list[int]:
    """The first `count` primes, ascending."""
    if count <= 0:
        return []
    limit = 32
    while True:
        primes = sieve_primes(limit).primes
        if len(primes) >= count:
            return list(primes[:count])
        limit *= 2


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> Factorization:
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    factors: dict[int, int] = {}
    rest = n
    for p in range(2, 1000):
        if p * p > rest:
            break
        while rest % p == 0:
            factors[p] = factors.get(p, 0) + 1
            rest //= p
    stack = [rest] if rest > 1 else []
    rng = random.Random(n)
    while stack:
        x = stack.pop()
        if is_prime(x):
            factors[x] = factors.get(x, 0) + 1
            continue
        d = _pollard_brent(x, rng)
        stack += [d, x // d]
    return Factorization(n, dict(sorted(factors.items())))


def linnik_holds(n: int, P: int, L_exponent: int = 5) -> bool:
    return P <= n**L_exponent


def find_field_prime(n: int, L_exponent: int = 5, *, above: int = 0) -> int:
    """Smallest prime P = n*d + 1 (d >= 1) with P > above.

    A P beyond n**L_exponent is logged, not rejected.
    """
    if n < 2 or L_exponent < 1:
        raise ValueError("need n >= 2 and L_exponent >= 1")
    d = max(1, (above - 1) // n + 1) if above > 0 else 1
    cap = above + n ** (L_exponent + 1)
    P = n * d + 1
    while not is_prime(P):
        P += n
        if P > cap:
            raise SearchExhaustedError(f"no prime = 1 mod {n} found below {cap}")
    if not linnik_holds(n, P, L_exponent) and above == 0:
        log.warning("field prime %d exceeds n^%d for n=%d", P, L_exponent, n)
    return P


def multiplicative_order(a: int, modulus: int) -> int:
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    a %= modulus
    if math.gcd(a, modulus) != 1:
        raise ValueError(f"{a} is not a unit mod {modulus}")
    phi = factorize(modulus).totient()
    order = phi
    for p in factorize(phi).primes():
        while order % p == 0 and pow(a, order // p, modulus) == 1:
            order //= p
    return order


def has_order(w: int, n: int, P: int) -> bool:
    """w**n == 1 and w**(n/t) != 1 for every prime t | n."""
    if pow(w, n, P) != 1:
        return False
    return all(pow(w, n // t, P) != 1 for t in factorize(n).primes()) if n > 1 else True


def _sweep_root(P: int, n: int) -> int:
    # Each visited subgroup is struck off: its members' orders divide the
    # generator's order, so none of them can succeed where it failed.
    eliminated = bytearray(P)
    for g in range(2, P):
        if eliminated[g]:
            continue
        x, order = g, 0
        while True:
            eliminated[x] = 1
            order += 1
            if x == 1:
                break
            x = x * g % P
        if order % n == 0:
            return pow(g, order // n, P)
    raise SearchExhaustedError(f"no element of order {n} mod {P}")


def _random_root(P: int, n: int, seed: int) -> int:
    rng = random.Random(seed)
    group = factorize(P - 1)
    while True:
        g = rng.randrange(2, P)
        order = P - 1
        for t in group.primes():
            while order % t == 0 and pow(g, order // t, P) == 1:
                order //= t
        if order % n == 0:
            return pow(g, order // n, P)


def find_root_of_unity(P: int, n: int, strategy: str = "randomized", seed: int = 0) -> int:
    """An element of multiplicative order exactly n modulo the prime P."""
    if n < 1 or (P - 1) % n:
        raise ValueError(f"{n} does not divide {P} - 1")
    if n == 1:
        return 1
    if strategy == "deterministic_sweep":
        return _sweep_root(P, n)
    if strategy == "randomized":
        return _random_root(P, n, seed)
    raise ValueError(f"unknown strategy {strategy!r}")


def next_pow2(x: int) -> int:
    return 1 << max(0, (x - 1).bit_length())
