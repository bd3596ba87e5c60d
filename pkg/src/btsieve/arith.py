"""Elementary arithmetic kernels: primes, factorization, multiplicative functions.

Everything here is exact integer arithmetic except von_mangoldt, which
returns a float log. Bulk-table helpers (spf_sieve, mu_sieve) back the
vectorized sieve builders in the higher modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import CapacityError, DomainError

DEFAULT_SEGMENT_SIZE = 1 << 20
MAX_SIEVE_LIMIT = 200_000_000


@dataclass(frozen=True)
class PrimeTable:
    """Primality bitset over [0, limit] with per-segment cumulative counts."""

    limit: int
    primality: np.ndarray
    segment_size: int
    segment_counts: np.ndarray

    @cached_property
    def primes(self) -> np.ndarray:
        return np.flatnonzero(self.primality).astype(np.int64)

    def is_prime(self, m: int) -> bool:
        if m < 0 or m > self.limit:
            raise CapacityError(f"{m} outside table limit {self.limit}")
        return bool(self.primality[m])

    def count(self, x: float) -> int:
        """Number of primes <= x."""
        m = min(int(math.floor(x)), self.limit)
        if m < 2:
            return 0
        seg = (m + 1) // self.segment_size
        base = int(self.segment_counts[seg])
        return base + int(np.count_nonzero(
            self.primality[seg * self.segment_size:m + 1]))

    def primes_up_to(self, x: float) -> np.ndarray:
        m = min(int(math.floor(x)), self.limit)
        ps = self.primes
        return ps[:np.searchsorted(ps, m, side="right")]


def sieve_primes(limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> PrimeTable:
    """Segmented sieve of Eratosthenes up to and including `limit`."""
    if limit < 2:
        raise DomainError("sieve limit must be >= 2")
    if limit > MAX_SIEVE_LIMIT:
        raise CapacityError(f"sieve limit {limit} exceeds maximum {MAX_SIEVE_LIMIT}")
    root = math.isqrt(limit)
    base = np.ones(root + 1, dtype=bool)
    base[:2] = False
    for p in range(2, math.isqrt(root) + 1):
        if base[p]:
            base[p * p::p] = False
    base_primes = np.flatnonzero(base)

    primality = np.ones(limit + 1, dtype=bool)
    primality[:2] = False
    for lo in range(0, limit + 1, segment_size):
        hi = min(lo + segment_size, limit + 1)
        for p in base_primes:
            p = int(p)
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start >= hi:
                continue
            primality[start:hi:p] = False

    n_segments = (limit + 1 + segment_size - 1) // segment_size
    counts = np.zeros(n_segments + 1, dtype=np.int64)
    for i in range(n_segments):
        lo = i * segment_size
        hi = min(lo + segment_size, limit + 1)
        counts[i + 1] = counts[i] + np.count_nonzero(primality[lo:hi])
    return PrimeTable(limit=limit, primality=primality,
                      segment_size=segment_size, segment_counts=counts)


_shared_table: PrimeTable | None = None


def shared_table(limit: int) -> PrimeTable:
    """Module-level grow-only prime table, reused across calls."""
    global _shared_table
    if _shared_table is None or _shared_table.limit < limit:
        _shared_table = sieve_primes(max(limit, 1 << 16))
    return _shared_table


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer together with its prime factorization."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last_p = 1
        for p, e in self.factors:
            if p <= last_p or e < 1:
                raise DomainError("factors must be (prime, exponent>=1), primes increasing")
            prod *= p ** e
            last_p = p
        if prod != self.n or self.n < 1:
            raise DomainError(f"factorization does not multiply back to {self.n}")

    @classmethod
    def from_int(cls, n: int, table: PrimeTable | None = None) -> "FactoredInteger":
        return factorize(n, table)


def factorize(n: int, table: PrimeTable | None = None) -> FactoredInteger:
    """Trial-division factorization against a prime table up to sqrt(n)."""
    if n < 1:
        raise DomainError("can only factor positive integers")
    root = math.isqrt(n)
    if table is None:
        if root > MAX_SIEVE_LIMIT:
            raise CapacityError(f"{n} exceeds the factorization budget")
        table = shared_table(max(root, 2))
    elif table.limit < root:
        raise CapacityError(f"{n} exceeds table capacity {table.limit}**2")
    factors = []
    m = n
    for p in table.primes:
        p = int(p)
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    if m > 1:
        factors.append((m, 1))
    return FactoredInteger(n=n, factors=tuple(factors))


def _fi(n: int | FactoredInteger) -> FactoredInteger:
    return n if isinstance(n, FactoredInteger) else factorize(n)


def moebius(n: int | FactoredInteger) -> int:
    fi = _fi(n)
    if any(e >= 2 for _, e in fi.factors):
        return 0
    return -1 if len(fi.factors) % 2 else 1


def euler_phi(n: int | FactoredInteger) -> int:
    fi = _fi(n)
    out = 1
    for p, e in fi.factors:
        out *= p ** (e - 1) * (p - 1)
    return out


def divisor_l(n: int | FactoredInteger, l: int) -> int:
    """Number of ordered l-tuples of positive integers with product n."""
    if l < 1:
        raise DomainError("l must be >= 1")
    fi = _fi(n)
    out = 1
    for _, e in fi.factors:
        out *= math.comb(e + l - 1, l - 1)
    return out


def von_mangoldt(n: int | FactoredInteger) -> float:
    fi = _fi(n)
    if len(fi.factors) == 1:
        return math.log(fi.factors[0][0])
    return 0.0


def nu_distinct_primes(n: int | FactoredInteger) -> int:
    return len(_fi(n).factors)


def divisors(n: int | FactoredInteger) -> list[int]:
    """All positive divisors, sorted increasing."""
    fi = _fi(n)
    out = [1]
    for p, e in fi.factors:
        out = [d * p ** k for d in out for k in range(e + 1)]
    return sorted(out)


def pi_ap(x: float, k: int, l: int, table: PrimeTable | None = None) -> int:
    """Count primes p <= x with p = l (mod k); requires gcd(k, l) = 1."""
    if k < 1:
        raise DomainError("modulus k must be positive")
    l %= k
    if math.gcd(k, l) != 1:
        raise DomainError(f"residue {l} not coprime to modulus {k}")
    if x < 2:
        return 0
    m = int(math.floor(x))
    if table is None or table.limit < m:
        table = shared_table(m)
    ps = table.primes_up_to(m)
    if k == 1:
        return len(ps)
    return int(np.count_nonzero(ps % k == l))


def spf_sieve(limit: int) -> np.ndarray:
    """Smallest-prime-factor table over [0, limit]; entries 0 for n < 2."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            sl = spf[p::p]
            sl[sl == 0] = p
    return spf


def mu_sieve(limit: int) -> np.ndarray:
    """Moebius function over [0, limit] as an int8 array (mu(0) set to 0)."""
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, limit + 1):
        if sieve[p]:
            if p <= limit // p:
                sieve[p * p::p] = False
            mu[p::p] *= -1
            if p * p <= limit:
                mu[p * p::p * p] = 0
    return mu


def multiplicative_range(start: int, stop: int, prime_power,
                         prime_vec=None) -> np.ndarray:
    """Evaluate a multiplicative function on the window [start, stop).

    prime_power(p, a) gives the value at p**a for a >= 1; prime_vec, when
    supplied, vectorizes the a = 1 case over an array of primes (used for
    the leftover factors above sqrt(stop)).
    """
    if start < 1 or stop <= start:
        raise DomainError("need 1 <= start < stop")
    n = np.arange(start, stop, dtype=np.int64)
    rem = n.copy()
    out = np.ones(len(n))
    root = math.isqrt(stop - 1)
    table = shared_table(max(root, 2))
    for p in table.primes_up_to(root):
        p = int(p)
        first = ((start + p - 1) // p) * p
        if first >= stop:
            continue
        idx = np.arange(first - start, stop - start, p)
        m = rem[idx]
        a = np.zeros(len(idx), dtype=np.int64)
        while True:
            mask = m % p == 0
            if not mask.any():
                break
            m[mask] //= p
            a[mask] += 1
        fpows = np.array([1.0] + [prime_power(p, k)
                                  for k in range(1, int(a.max()) + 1)])
        out[idx] *= fpows[a]
        rem[idx] = m
    big = rem > 1
    if big.any():
        if prime_vec is not None:
            out[big] *= prime_vec(rem[big])
        else:
            out[big] *= np.array([prime_power(int(p), 1) for p in rem[big]])
    return out


def divisor_l_range(l: int, start: int, stop: int) -> np.ndarray:
    """d_l(n) on the window [start, stop) as a float array."""
    if l < 1:
        raise DomainError("l must be >= 1")
    return multiplicative_range(
        start, stop,
        lambda p, a: float(math.comb(a + l - 1, l - 1)),
        prime_vec=lambda ps: np.full(len(ps), float(l)))
