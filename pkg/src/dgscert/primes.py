"""Primality testing and budgeted integer factorization."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt

TRIAL_LIMIT = 10**6

# Deterministic Miller-Rabin witnesses: correct for every n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_BELOW = 3_317_044_064_679_887_385_961_981


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    sieve = bytearray([1]) * (TRIAL_LIMIT + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(TRIAL_LIMIT) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, TRIAL_LIMIT + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x in (1, n - 1):
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin; exact below 3.3e24, a strong probable-prime test above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    return all(_strong_probable_prime(n, a) for a in _MR_BASES)


def is_certain_prime(n: int) -> bool:
    return n < _MR_DETERMINISTIC_BELOW and is_prime(n)


def _brent(n: int, rng: random.Random, deadline: float) -> int | None:
    """One nontrivial factor of composite odd n, or None when time runs out."""
    while time.monotonic() < deadline:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
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
                g = gcd(q, n)
                k += m
            r *= 2
            if time.monotonic() >= deadline:
                return None
        if g == n:
            while True:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
                if g > 1:
                    break
        if g != n:
            return g
    return None


@dataclass
class Factorization:
    """Prime powers found so far; ``cofactor`` is what could not be split."""

    primes: dict[int, int] = field(default_factory=dict)
    cofactor: int = 1

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    def add(self, p: int, e: int = 1) -> None:
        self.primes[p] = self.primes.get(p, 0) + e


def factorize(n: int, budget_ms: float | None = 2000.0, seed: int = 0) -> Factorization:
    """Factor |n| by trial division to 10**6, then Pollard rho (Brent).

    Pieces that cannot be split or certified prime within the budget stay in
    ``cofactor``; nothing is ever guessed.
    """
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor zero")
    out = Factorization()
    for p in _small_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.add(p, e)
    if n == 1:
        return out
    if n <= TRIAL_LIMIT**2:
        out.add(n)
        return out
    deadline = time.monotonic() + (budget_ms / 1000.0 if budget_ms is not None else float("inf"))
    rng = random.Random(seed)
    stack = [n]
    stuck = 1
    while stack:
        m = stack.pop()
        if is_certain_prime(m):
            out.add(m)
            continue
        if is_prime(m):
            # probable prime beyond the deterministic range
            stuck *= m
            continue
        # perfect powers defeat rho; peel them first
        root = _perfect_root(m)
        if root is not None:
            base, k = root
            stack.extend([base] * k)
            continue
        f = _brent(m, rng, deadline)
        if f is None:
            stuck *= m
            continue
        stack.extend([f, m // f])
    out.cofactor = stuck
    return out


def _perfect_root(m: int) -> tuple[int, int] | None:
    for k in range(2, m.bit_length() + 1):
        lo, hi = 1, 1 << (m.bit_length() // k + 1)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid**k < m:
                lo = mid + 1
            else:
                hi = mid
        if lo > 1 and lo**k == m:
            return lo, k
        if lo <= 2:
            break
    return None


def is_square_free(n: int, budget_ms: float | None = 2000.0) -> bool | None:
    """True/False, or None when the factorization did not finish."""
    f = factorize(n, budget_ms)
    if any(e > 1 for e in f.primes.values()):
        return False
    if not f.complete:
        return None
    return True
