"""Mollified Moebius weights: a smoothed truncation of mu that agrees with
mu(d) exactly below the parameter v and vanishes above v**(1 + l*theta).

The exact agreement below v is a finite-difference cancellation: the
alternating binomial sum annihilates every polynomial of degree < l, so
only the leading power of log v survives. An exact-arithmetic mode checks
that cancellation symbolically; the float tables carry it to ~1e-14.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import divisor_l_range, moebius, mu_sieve
from .errors import CapacityError, DomainError

TABLE_BUDGET = 20_000_000


def xi_jl(d: int, j: int, v: float, theta: float, l: int) -> float:
    """The j-th smoothing layer: mu(d) log(v**(1+j*theta)/d)**l, cut at the top."""
    if d < 1 or not 0 <= j <= l:
        raise DomainError("need d >= 1 and 0 <= j <= l")
    top = (1.0 + j * theta) * math.log(v)
    logd = math.log(d)
    if logd >= top:
        return 0.0
    mu = moebius(d)
    if mu == 0:
        return 0.0
    return mu * (top - logd) ** l


@dataclass(frozen=True)
class MollifierWeights:
    """Weight table for parameters (v, theta, l), built up to d_max."""

    v: float
    theta: float
    l: int
    table: np.ndarray
    d_max: int

    @property
    def support_limit(self) -> float:
        return self.v ** (1.0 + self.l * self.theta)

    def weight(self, d: int) -> float:
        if d < 1:
            raise DomainError("d must be positive")
        if d >= self.support_limit:
            return 0.0
        if d > self.d_max:
            raise CapacityError(f"d = {d} beyond the built table (d_max = {self.d_max})")
        return float(self.table[d])


def build_mollifier(v: float, theta: float, l: int,
                    d_max: int | None = None) -> MollifierWeights:
    """Tabulate the mollified weights for d < v**(1 + l*theta).

    Passing d_max builds a partial table (for bounded partial sums); the
    full support must fit the table budget otherwise.
    """
    if v < 2 or theta <= 0 or l < 1:
        raise DomainError("need v >= 2, theta > 0, l >= 1")
    support = v ** (1.0 + l * theta)
    if d_max is None:
        if support > TABLE_BUDGET:
            raise CapacityError(
                f"support {support:.3g} exceeds the table budget {TABLE_BUDGET}")
        d_max = math.ceil(support) - 1
    mu = mu_sieve(d_max).astype(float)
    d = np.arange(d_max + 1, dtype=float)
    logd = np.zeros(d_max + 1)
    logd[1:] = np.log(d[1:])
    acc = np.zeros(d_max + 1)
    for j in range(l + 1):
        top = (1.0 + j * theta) * math.log(v)
        layer = mu * np.where(logd < top, (top - logd) ** l, 0.0)
        acc += (-1) ** (l - j) * math.comb(l, j) * layer
    scale = 1.0 / (math.factorial(l) * (theta * math.log(v)) ** l)
    table = scale * acc
    table[0] = 0.0
    return MollifierWeights(v=float(v), theta=float(theta), l=l,
                            table=table, d_max=d_max)


def series_2_14_partial(w: MollifierWeights, omega: float, N_max: int) -> float:
    """Partial sum of d_l(n) (sum of weights over divisors)^2 n^(-omega).

    Nonnegative and nondecreasing in N_max; recorded for boundedness
    trends in the admissible range omega >= 1 + 1/log v.
    """
    if omega < 1.0 + 1.0 / math.log(w.v):
        raise DomainError("omega below the admissible range 1 + 1/log v")
    if N_max < 1:
        raise DomainError("N_max must be positive")
    if N_max > w.d_max and N_max < w.support_limit:
        raise CapacityError("weight table too short for this N_max")
    sums = np.zeros(N_max + 1)
    top = min(w.d_max, N_max)
    for d in range(1, top + 1):
        wd = w.table[d]
        if wd != 0.0:
            sums[d::d] += wd
    dl = divisor_l_range(w.l, 1, N_max + 1)
    n = np.arange(1, N_max + 1, dtype=float)
    return float(np.sum(dl * sums[1:] ** 2 * n ** (-omega)))


def binomial_alternation(m: int, l: int) -> int:
    """Sum over j of (-1)^(l-j) C(l, j) j^m: zero for m < l, l! at m = l."""
    return sum((-1) ** (l - j) * math.comb(l, j) * j ** m for j in range(l + 1))


def cancellation_poly(theta: Fraction, l: int) -> dict[tuple[int, int], Fraction]:
    """The alternating layer sum as an exact polynomial in (log v, log d).

    Expands sum_j (-1)^(l-j) C(l,j) ((1+j*theta) L - D)^l with Fraction
    coefficients, keyed by (power of L, power of D). Equality with
    {(l, 0): l! theta^l} is the exact statement that the mollified weight
    equals mu(d) below v, independently of d.
    """
    theta = Fraction(theta)
    poly: dict[tuple[int, int], Fraction] = {}
    for j in range(l + 1):
        outer = (-1) ** (l - j) * math.comb(l, j)
        # ((1 + j theta) L - D)^l expanded binomially
        for m in range(l + 1):
            coef = outer * math.comb(l, m) * (1 + j * theta) ** m * (-1) ** (l - m)
            key = (m, l - m)
            poly[key] = poly.get(key, Fraction(0)) + Fraction(coef)
    return {k: c for k, c in poly.items() if c != 0}


def below_v_is_moebius_exact(theta: Fraction, l: int) -> bool:
    """Exact-mode check that the weights reduce to mu below v."""
    poly = cancellation_poly(Fraction(theta), l)
    want = {(l, 0): Fraction(math.factorial(l)) * Fraction(theta) ** l}
    return poly == want
