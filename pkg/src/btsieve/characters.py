"""Dirichlet characters mod q with exact root-of-unity value tables.

A character is stored as an integer rotation table: chi(n) = e(rot[n] / den)
for residues n coprime to the modulus, with rot[n] = -1 marking the zero
values. Rotations are exact, so complete multiplicativity and orthogonality
hold without floating slack; the complex table is derived on demand.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .arith import divisors, factorize, moebius
from .errors import DomainError


def _primitive_root_mod_p(p: int) -> int:
    if p == 2:
        return 1
    phi = p - 1
    prime_factors = [q for q, _ in factorize(phi).factors]
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in prime_factors):
            return g
    raise RuntimeError(f"no primitive root mod {p}")  # unreachable for prime p


def _odd_prime_power_generator(p: int, a: int) -> int:
    g = _primitive_root_mod_p(p)
    if a == 1:
        return g
    # g lifts to a generator mod p^a unless g^(p-1) = 1 (mod p^2)
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


def _component_dlogs(q: int) -> list[tuple[np.ndarray, int]]:
    """Per-generator discrete-log tables over residues mod q, with orders.

    (Z/q)* splits through the prime powers of q; odd components are cyclic,
    and the 2-adic component for 8 | q needs the pair of generators -1, 5.
    """
    out = []
    for p, a in factorize(q).factors:
        pa = p ** a
        comps: list[tuple[np.ndarray, int]] = []
        if p == 2 and a == 1:
            pass  # trivial unit group
        elif p == 2 and a == 2:
            d = np.full(4, -1, dtype=np.int64)
            d[1], d[3] = 0, 1
            comps = [(d, 2)]
        elif p == 2:
            d_sign = np.full(pa, -1, dtype=np.int64)
            d_five = np.full(pa, -1, dtype=np.int64)
            order5 = 1 << (a - 2)
            for e1 in range(2):
                x = 1 if e1 == 0 else pa - 1
                for e2 in range(order5):
                    d_sign[x] = e1
                    d_five[x] = e2
                    x = x * 5 % pa
            comps = [(d_sign, 2), (d_five, order5)]
        else:
            g = _odd_prime_power_generator(p, a)
            order = pa // p * (p - 1)
            d = np.full(pa, -1, dtype=np.int64)
            x = 1
            for e in range(order):
                d[x] = e
                x = x * g % pa
            comps = [(d, order)]
        for d, order in comps:
            out.append((d[np.arange(q) % pa], order))
    return out


def _normalize(rot: np.ndarray, den: int) -> tuple[np.ndarray, int]:
    pos = rot[rot > 0]
    g = den if pos.size == 0 else int(np.gcd.reduce(np.append(pos, den)))
    if g > 1:
        rot = rot.copy()
        mask = rot > 0
        rot[mask] //= g
        den //= g
    return rot, den


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    """Dirichlet character mod `modulus` with exact rotation-number values."""

    modulus: int
    den: int
    rotations: np.ndarray = field(repr=False)
    conductor: int
    is_primitive: bool
    is_real: bool
    is_principal: bool

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return (self.modulus == other.modulus and self.den == other.den
                and np.array_equal(self.rotations, other.rotations))

    def __hash__(self) -> int:
        return hash((self.modulus, self.den, self.rotations.tobytes()))

    def __repr__(self) -> str:
        kind = "principal" if self.is_principal else f"conductor {self.conductor}"
        return f"DirichletCharacter(mod {self.modulus}, {kind}, order den {self.den})"

    @cached_property
    def values(self) -> np.ndarray:
        """Complex value table indexed by residue; axis values are exact."""
        vals = np.zeros(self.modulus, dtype=np.complex128)
        mask = self.rotations >= 0
        rot = self.rotations[mask]
        v = np.exp((2j * np.pi / self.den) * rot)
        four = 4 * rot
        on_axis = four % self.den == 0
        quadrant = np.zeros_like(rot)
        quadrant[on_axis] = (four[on_axis] // self.den) % 4
        axis_vals = np.array([1, 1j, -1, -1j], dtype=np.complex128)
        v[on_axis] = axis_vals[quadrant[on_axis]]
        vals[mask] = v
        return vals

    @cached_property
    def values_signed(self) -> np.ndarray:
        """Value table as int8 in {-1, 0, 1}; only for real characters."""
        if not self.is_real:
            raise DomainError("signed value table requires a real character")
        out = np.zeros(self.modulus, dtype=np.int8)
        out[self.rotations == 0] = 1
        if self.den == 2:
            out[self.rotations == 1] = -1
        return out

    def value(self, n: int) -> complex:
        return complex(self.values[n % self.modulus])

    def rotation(self, n: int) -> int:
        """Rotation numerator at n, or -1 if chi(n) = 0."""
        return int(self.rotations[n % self.modulus])


def _conductor_of(q: int, rot: np.ndarray) -> int:
    if q == 1:
        return 1
    for f in divisors(q):
        sl = rot[1::f]
        sl = sl[sl >= 0]
        if sl.size == 0 or np.all(sl == 0):
            return f
    return q


def _make_character(q: int, rot: np.ndarray, den: int) -> DirichletCharacter:
    rot, den = _normalize(rot, den)
    conductor = _conductor_of(q, rot)
    return DirichletCharacter(
        modulus=q, den=den, rotations=rot, conductor=conductor,
        is_primitive=(conductor == q), is_real=(den <= 2),
        is_principal=(conductor == 1))


def principal_character(q: int) -> DirichletCharacter:
    if q < 1:
        raise DomainError("modulus must be positive")
    ns = np.arange(q)
    rot = np.where(np.gcd(ns, q) == 1, 0, -1).astype(np.int64)
    return _make_character(q, rot, 1)


def enumerate_characters(q: int) -> list[DirichletCharacter]:
    """All phi(q) Dirichlet characters mod q, principal character first."""
    if q < 1:
        raise DomainError("modulus must be positive")
    if q == 1:
        return [principal_character(1)]
    tables = _component_dlogs(q)
    orders = [order for _, order in tables]
    den = math.lcm(*orders) if orders else 1
    ns = np.arange(q)
    coprime = np.gcd(ns, q) == 1
    weighted = [tab * (den // order) for tab, order in tables]
    out = []
    for ms in itertools.product(*(range(o) for o in orders)):
        rot = np.zeros(q, dtype=np.int64)
        for m, w in zip(ms, weighted):
            rot[coprime] += m * w[coprime]
        rot[coprime] %= den
        rot[~coprime] = -1
        out.append(_make_character(q, rot, den))
    out.sort(key=lambda c: (not c.is_principal,))
    return out


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a|n), extended Jacobi symbol for all integers."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -1
    # factor out twos of n: (a|2) = 0, 1, -1 for a even, a = +-1 (8), a = +-3 (8)
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            sign = -sign
    a %= n
    # Jacobi with quadratic reciprocity; the flip tests both odd values
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a, n = n % a, a
    return sign if n == 1 else 0


def is_fundamental_discriminant(D: int) -> bool:
    if D in (0, 1):
        return False

    def squarefree(m: int) -> bool:
        return moebius(factorize(abs(m))) != 0

    if D % 4 == 1:
        return squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and squarefree(m)
    return False


def kronecker_character(D: int) -> DirichletCharacter:
    """Real primitive character of modulus |D| for a fundamental discriminant D."""
    if not is_fundamental_discriminant(D):
        raise DomainError(f"{D} is not a (nontrivial) fundamental discriminant")
    q = abs(D)
    vals = np.array([kronecker_symbol(D, n) for n in range(q)], dtype=np.int64)
    rot = np.full(q, -1, dtype=np.int64)
    rot[vals == 1] = 0
    rot[vals == -1] = 1
    chi = _make_character(q, rot, 2)
    if not chi.is_primitive:  # fundamental discriminants always induce primitively
        raise RuntimeError(f"Kronecker character for D={D} came out imprimitive")
    return chi


def induce_primitive(chi: DirichletCharacter) -> DirichletCharacter:
    """The primitive character of modulus conductor(chi) inducing chi."""
    if chi.is_primitive:
        return chi
    q, f = chi.modulus, chi.conductor
    if f == 1:
        return principal_character(1)
    rot = np.full(f, -1, dtype=np.int64)
    for b in range(1, f):
        if math.gcd(b, f) != 1:
            continue
        a = b
        while math.gcd(a, q) != 1:
            a += f
        rot[b] = chi.rotations[a % q]
    return _make_character(f, rot, chi.den)


def pointwise_product(chi1: DirichletCharacter,
                      chi2: DirichletCharacter) -> DirichletCharacter:
    """Literal product character mod lcm(q1, q2), without primitivization."""
    q = math.lcm(chi1.modulus, chi2.modulus)
    den = math.lcm(chi1.den, chi2.den)
    ns = np.arange(q)
    r1 = chi1.rotations[ns % chi1.modulus]
    r2 = chi2.rotations[ns % chi2.modulus]
    rot = np.where((r1 >= 0) & (r2 >= 0),
                   (r1 * (den // chi1.den) + r2 * (den // chi2.den)) % den,
                   -1)
    return _make_character(q, rot.astype(np.int64), den)


def product_character(chi1: DirichletCharacter,
                      chi2: DirichletCharacter) -> DirichletCharacter:
    """Primitive character inducing the pointwise product of chi1 and chi2."""
    return induce_primitive(pointwise_product(chi1, chi2))
