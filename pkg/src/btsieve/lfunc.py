"""Real-axis Dirichlet L-function numerics and Chebyshev-type character sums.

The evaluation backend is an Euler-Maclaurin Hurwitz zeta with an adaptive
truncation schedule targeting 1e-10 absolute error on the real segment,
plus exact finite sums for the twisted Chebyshev functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arith import PrimeTable, euler_phi, shared_table
from .characters import DirichletCharacter, kronecker_character
from .errors import ConvergenceError, DomainError, PoleError, RangeError

# B_2, B_4, ..., B_34 (odd-index Bernoulli numbers vanish)
_BERNOULLI_EVEN = (
    1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730,
    7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330, 854513.0 / 138,
    -236364091.0 / 2730, 8553103.0 / 6, -23749461029.0 / 870,
    8615841276005.0 / 14322, -7709321041217.0 / 510, 2577687858367.0 / 6,
)

_EM_TARGET = 5e-12


def _em_schedule(s: float, a_min: float) -> tuple[int, int]:
    """Pick (summand count M, correction order J) for the target error.

    For real s > 0 the remainder after J corrections is bounded by the
    next correction term, and terms decrease while 2J stays well below
    2*pi*(a+M), which the doubling of M guarantees here.
    """
    M = max(12, int(abs(s)) + 8)
    while M <= 1 << 22:
        x = a_min + M
        poch = 1.0
        for j in range(1, len(_BERNOULLI_EVEN) + 1):
            poch *= s if j == 1 else (s + 2 * j - 3) * (s + 2 * j - 2)
            term = abs(_BERNOULLI_EVEN[j - 1]) / math.factorial(2 * j) * abs(poch) \
                * x ** (-s - 2 * j + 1)
            if term < _EM_TARGET:
                return M, j
        M *= 2
    raise ConvergenceError(f"Euler-Maclaurin schedule not found for s={s}")


def _expm1_over(u):
    """(exp(u) - 1) / u, stable at u = 0; accepts scalars or arrays."""
    u = np.asarray(u, dtype=float)
    out = np.ones_like(u)
    big = np.abs(u) > 1e-8
    out[big] = np.expm1(u[big]) / u[big]
    small = ~big
    out[small] = 1.0 + u[small] / 2.0 + u[small] ** 2 / 6.0
    return out


def hurwitz_zeta_deflated(s: float, a) -> np.ndarray | float:
    """zeta(s, a) - 1/(s-1): the pole-free part, continuous across s = 1.

    Accepts a scalar or array a with entries in (0, 1]; valid for s > 0.
    """
    a_arr = np.atleast_1d(np.asarray(a, dtype=float))
    if np.any(a_arr <= 0) or np.any(a_arr > 1):
        raise DomainError("a must lie in (0, 1]")
    if s <= 0:
        raise RangeError("only s > 0 is supported")
    M, J = _em_schedule(s, float(a_arr.min()))
    k = np.arange(M, dtype=float)
    acc = np.sum((a_arr[:, None] + k[None, :]) ** (-s), axis=1)
    x = a_arr + M
    # ((x)^(1-s) - 1)/(s-1), written to stay smooth through s = 1
    lx = np.log(x)
    acc += -lx * _expm1_over((1.0 - s) * lx)
    acc += 0.5 * x ** (-s)
    poch = 1.0
    for j in range(1, J + 1):
        poch *= s if j == 1 else (s + 2 * j - 3) * (s + 2 * j - 2)
        acc += _BERNOULLI_EVEN[j - 1] / math.factorial(2 * j) * poch \
            * x ** (-s - 2 * j + 1)
    if np.isscalar(a) or np.asarray(a).ndim == 0:
        return float(acc[0])
    return acc


def hurwitz_zeta(s: float, a: float) -> float:
    """Hurwitz zeta zeta(s, a) for s > 0, s != 1, a in (0, 1].

    Truncation error stays below 5e-12; the total error is bounded by
    1e-10 * max(1, |zeta(s, a)|), the relative part being plain double
    rounding of the leading a**-s term when a is tiny.
    """
    if s == 1:
        raise PoleError("zeta(s, a) has a pole at s = 1")
    val = hurwitz_zeta_deflated(s, a)
    return float(val) + 1.0 / (s - 1.0)


def l_value(s: float, chi: DirichletCharacter) -> float | complex:
    """L(s, chi) on the real half-line s > 0, via the Hurwitz-zeta expansion.

    Principal characters carry the zeta pole, so s = 1 is rejected there;
    non-principal characters are evaluated at s = 1 through the deflated
    zeta, where the pole terms cancel against sum(chi) = 0.
    """
    if s <= 0:
        raise RangeError("only s > 0 is supported")
    q = chi.modulus
    if chi.is_principal and s == 1:
        raise PoleError("L(s, principal) has a pole at s = 1")
    a = np.arange(1, q + 1, dtype=float) / q
    deflated = hurwitz_zeta_deflated(s, a)
    if chi.is_real:
        vals = chi.values_signed[np.arange(1, q + 1) % q].astype(float)
        acc = float(vals @ deflated)
        char_sum = float(vals.sum())
        out = q ** (-s) * acc
        if char_sum:
            out += char_sum * q ** (-s) / (s - 1.0)
        return out
    vals = chi.values[np.arange(1, q + 1) % q]
    acc = complex(vals @ deflated)
    char_sum = complex(vals.sum())
    out = q ** (-s) * acc
    if abs(char_sum) > 1e-12:
        out += char_sum * q ** (-s) / (s - 1.0)
    return out


@dataclass(frozen=True)
class ExceptionalConfig:
    """Surrogate exceptional-character data: a real primitive chi with a
    prescribed distance delta of its would-be real zero from s = 1."""

    chi_T: DirichletCharacter
    delta: float
    T: float
    script_F: float

    def __post_init__(self):
        if not (self.chi_T.is_real and self.chi_T.is_primitive):
            raise DomainError("chi_T must be real and primitive")
        if not 0 < self.delta <= 0.5:
            raise DomainError("delta must lie in (0, 1/2]")
        if self.script_F <= 0:
            raise DomainError("script_F must be positive")

    @property
    def beta_T(self) -> float:
        return 1.0 - self.delta


def make_exceptional_config(D: int, delta: float, T: float) -> ExceptionalConfig:
    chi = kronecker_character(D)
    if not 0 < delta <= 0.5:
        raise DomainError("delta must lie in (0, 1/2]")
    if abs(D) > T:
        raise DomainError("level T must be at least |D|")
    F = float(l_value(1.0 + delta, chi))
    return ExceptionalConfig(chi_T=chi, delta=delta, T=T, script_F=F)


def psi_chi(x: float, chi: DirichletCharacter,
            table: PrimeTable | None = None) -> float | complex:
    """Twisted Chebyshev sum of chi(n) Lambda(n) over n <= x, exactly."""
    m = int(math.floor(x))
    if m < 2:
        return 0.0 if chi.is_real else 0j
    if table is None or table.limit < m:
        table = shared_table(m)
    ps = table.primes_up_to(m)
    logs = np.log(ps.astype(float))
    q = chi.modulus
    w = np.bincount(ps % q, weights=logs, minlength=q)
    if chi.is_real:
        vals = chi.values_signed.astype(float)
        acc = float(w @ vals)
    else:
        vals = chi.values
        acc = complex(w @ vals)
    for p in ps[ps <= math.isqrt(m)]:
        p = int(p)
        lp = math.log(p)
        pk = p * p
        while pk <= m:
            acc += vals[pk % q] * lp
            pk *= p
    return acc


def psi_tilde(x: float, chi: DirichletCharacter,
              cfg: ExceptionalConfig | None = None,
              table: PrimeTable | None = None) -> float | complex:
    """psi(x, chi) with its main term removed: subtract x for principal chi,
    add x^beta/beta when chi is the exceptional character of cfg."""
    base = psi_chi(x, chi, table)
    if chi.is_principal:
        return base - x
    if cfg is not None and chi == cfg.chi_T:
        beta = cfg.beta_T
        return base + x ** beta / beta
    return base


def delta_indicator(cfg: ExceptionalConfig | None, T: float) -> float:
    """1 without exceptional data, else (1 - beta_T) log T."""
    if T < math.e:
        raise DomainError("T must be at least e")
    if cfg is None:
        return 1.0
    return cfg.delta * math.log(T)


@dataclass(frozen=True)
class ZeroScanReport:
    """Sign-change scan of s -> L(s, chi) on a real subinterval of (0, 1]."""

    character: str
    interval: tuple[float, float]
    step: float
    sign_changes: list[tuple[float, float]] = field(default_factory=list)
    zeros: list[tuple[float, float]] = field(default_factory=list)  # (zero, halfwidth)

    def __post_init__(self):
        for (a, b), (z, err) in zip(self.sign_changes, self.zeros):
            if not a - 1e-15 <= z <= b + 1e-15:
                raise DomainError("refined zero escaped its bracket")


def scan_real_zeros(chi: DirichletCharacter, lo: float, hi: float, step: float,
                    evaluator=None, refine_width: float = 1e-8) -> ZeroScanReport:
    """Grid scan for sign changes of L(s, chi) on [lo, hi], bisection-refined.

    Only sign changes are detectable; even-order touches of zero pass
    unseen. An alternative evaluator may be injected for testing.
    """
    if not (0 < lo <= hi <= 1):
        raise DomainError("need 0 < lo <= hi <= 1")
    if evaluator is None:
        if not (chi.is_real and chi.is_primitive):
            raise DomainError("default scan expects a real primitive character")
        evaluator = lambda s: float(l_value(s, chi))
    label = repr(chi)
    if lo == hi:
        return ZeroScanReport(character=label, interval=(lo, hi), step=step)
    grid = np.arange(lo, hi, step)
    if grid[-1] < hi:
        grid = np.append(grid, hi)
    vals = np.array([evaluator(float(s)) for s in grid])
    brackets = []
    zeros = []
    for i in range(len(grid) - 1):
        va, vb = vals[i], vals[i + 1]
        if va == 0.0:
            brackets.append((float(grid[i]), float(grid[i])))
            zeros.append((float(grid[i]), 0.0))
            continue
        if va * vb < 0:
            a, b = float(grid[i]), float(grid[i + 1])
            fa = va
            while b - a > refine_width:
                mid = 0.5 * (a + b)
                fm = evaluator(mid)
                if fm == 0.0:
                    a = b = mid
                    break
                if fa * fm < 0:
                    b = mid
                else:
                    a, fa = mid, fm
            brackets.append((float(grid[i]), float(grid[i + 1])))
            zeros.append((0.5 * (a + b), 0.5 * (b - a)))
    return ZeroScanReport(character=label, interval=(lo, hi), step=step,
                          sign_changes=brackets, zeros=zeros)
