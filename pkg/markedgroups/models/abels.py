"""
Exact arithmetic for Abels' groups over Z[1/p]

ZInvP scalars, upper-triangular matrix groups A_n and the 5x5 subgroup A,
the companion matrix M0 of X^2 + p^3 X - 1 with its p-adic eigendata, and
membership in the eigenline subgroups E_i = Z[1/p]^2 ∩ (D_i + Z_p^2).
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from markedgroups.config import Config
from markedgroups.models.errors import HenselError, PreconditionError
from markedgroups.models.verdicts import Verdict

logger = logging.getLogger(__name__)


def padic_valuation(n: int, p: int) -> int:
    """v_p(n); zero has infinite valuation, reported as math.inf"""
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


@dataclass(frozen=True)
class ZInvP:
    """numerator / p^exponent in canonical form (exponent 0 or p ∤ numerator)"""
    numerator: int
    exponent: int
    p: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError(f"p must be at least 2, got {self.p}")
        if self.exponent < 0:
            raise ValueError("exponent must be nonnegative; use ZInvP.of for p-power multiples")
        numerator, exponent = self.numerator, self.exponent
        if numerator == 0:
            exponent = 0
        while exponent > 0 and numerator % self.p == 0:
            numerator //= self.p
            exponent -= 1
        object.__setattr__(self, 'numerator', numerator)
        object.__setattr__(self, 'exponent', exponent)

    @classmethod
    def of(cls, value: Union[int, Fraction, 'ZInvP'], p: int) -> 'ZInvP':
        if isinstance(value, ZInvP):
            if value.p != p:
                raise ValueError(f"Mixed primes {value.p} and {p}")
            return value
        return zinvp_from_fraction(Fraction(value), p)

    def _coerce(self, other) -> 'ZInvP':
        if isinstance(other, ZInvP):
            if other.p != self.p:
                raise ValueError(f"Mixed primes {self.p} and {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return ZInvP.of(other, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return zinvp_add(self, other)

    __radd__ = __add__

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return zinvp_mul(self, other)

    __rmul__ = __mul__

    def __neg__(self) -> 'ZInvP':
        return zinvp_neg(self)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return zinvp_add(self, zinvp_neg(other))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return zinvp_add(other, zinvp_neg(self))

    def __bool__(self) -> bool:
        return self.numerator != 0

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.p ** self.exponent)

    def is_integral(self) -> bool:
        return self.exponent == 0

    def is_unit(self) -> bool:
        """±p^k for some integer k"""
        n = abs(self.numerator)
        while n > 1 and n % self.p == 0:
            n //= self.p
        return n == 1

    def inverse(self) -> 'ZInvP':
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit of Z[1/{self.p}]")
        return zinvp_from_fraction(1 / self.to_fraction(), self.p)

    def __str__(self):
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/{self.p}^{self.exponent}"


def zinvp_from_fraction(value: Fraction, p: int) -> ZInvP:
    """Raises ValueError unless the reduced denominator is a power of p"""
    value = Fraction(value)
    denominator = value.denominator
    exponent = 0
    while denominator % p == 0:
        denominator //= p
        exponent += 1
    if denominator != 1:
        raise ValueError(f"{value} does not lie in Z[1/{p}]")
    return ZInvP(value.numerator, exponent, p)


def zinvp_add(a: ZInvP, b: ZInvP) -> ZInvP:
    e = max(a.exponent, b.exponent)
    return ZInvP(a.numerator * a.p ** (e - a.exponent) + b.numerator * b.p ** (e - b.exponent), e, a.p)


def zinvp_mul(a: ZInvP, b: ZInvP) -> ZInvP:
    return ZInvP(a.numerator * b.numerator, a.exponent + b.exponent, a.p)


def zinvp_neg(a: ZInvP) -> ZInvP:
    return ZInvP(-a.numerator, a.exponent, a.p)


@dataclass(frozen=True)
class PAdicApprox:
    """Element of Z_p known modulo p^precision"""
    residue: int
    precision: int
    p: int

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("precision must be at least 1")
        object.__setattr__(self, 'residue', self.residue % self.p ** self.precision)

    @property
    def modulus(self) -> int:
        return self.p ** self.precision

    def _align(self, other) -> Tuple[int, int]:
        if isinstance(other, int):
            return other, self.precision
        if other.p != self.p:
            raise ValueError(f"Mixed primes {self.p} and {other.p}")
        return other.residue, min(self.precision, other.precision)

    def __add__(self, other):
        value, k = self._align(other)
        return PAdicApprox(self.residue + value, k, self.p)

    __radd__ = __add__

    def __mul__(self, other):
        value, k = self._align(other)
        return PAdicApprox(self.residue * value, k, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return PAdicApprox(-self.residue, self.precision, self.p)

    def __sub__(self, other):
        value, k = self._align(other)
        return PAdicApprox(self.residue - value, k, self.p)

    def __rsub__(self, other):
        value, k = self._align(other)
        return PAdicApprox(value - self.residue, k, self.p)

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def inverse(self) -> 'PAdicApprox':
        if not self.is_unit():
            raise ZeroDivisionError(f"{self.residue} is not a unit mod {self.p}")
        return PAdicApprox(pow(self.residue, -1, self.modulus), self.precision, self.p)

    def truncate(self, k: int) -> 'PAdicApprox':
        if k > self.precision:
            raise ValueError(f"Cannot raise precision from {self.precision} to {k}")
        return PAdicApprox(self.residue, k, self.p)

    def valuation(self) -> int:
        """v_p of the residue, capped at the precision"""
        if self.residue == 0:
            return self.precision
        return padic_valuation(self.residue, self.p)

    def is_zero(self) -> bool:
        return self.residue == 0


def _poly_eval(coeffs: Sequence[int], x: int) -> int:
    value = 0
    for c in reversed(coeffs):
        value = value * x + c
    return value


def _poly_derivative(coeffs: Sequence[int]) -> List[int]:
    return [i * c for i, c in enumerate(coeffs)][1:]


def hensel_lift(poly: Sequence[int], root0: int, p: int, k: int) -> PAdicApprox:
    """
    Lift an approximate root of an integer polynomial to precision p^k

    Args:
        poly: Coefficients, constant term first (poly[i] multiplies X^i)
        root0: Approximate root with v(f(root0)) > 2 v(f'(root0))
        p: Prime
        k: Target precision

    Returns:
        Residue r mod p^k of the unique p-adic root congruent to root0.
        Lifts at different precisions are compatible.

    Raises:
        HenselError: the Hensel criterion fails at root0
    """
    if k < 1:
        raise PreconditionError("precision k must be at least 1")
    value = _poly_eval(poly, root0)
    if value == 0:
        return PAdicApprox(root0, k, p)
    derivative = _poly_derivative(poly)
    slope = _poly_eval(derivative, root0)
    if slope == 0:
        raise HenselError(f"f'({root0}) = 0 while f({root0}) = {value} is nonzero")
    delta = padic_valuation(slope, p)
    if padic_valuation(value, p) <= 2 * delta:
        raise HenselError(
            f"Hensel criterion fails at {root0}: v(f) = {padic_valuation(value, p)}, v(f') = {delta}"
        )
    modulus = p ** (k + 2 * delta + 2)
    target = p ** (k + delta)
    r = root0
    for iteration in range(k + 64):
        value = _poly_eval(poly, r)
        if value % target == 0:
            logger.debug("Hensel lift of %d mod %d^%d after %d steps", root0, p, k, iteration)
            return PAdicApprox(r, k, p)
        slope = _poly_eval(derivative, r)
        unit = slope // p ** delta
        r = (r - (value // p ** delta) * pow(unit % modulus, -1, modulus)) % modulus
    raise HenselError(f"Newton iteration did not converge from {root0}")


class AbelsMatrix:
    """
    Upper triangular matrix over Z[1/p] with corner diagonal entries 1 and
    unit interior diagonal, stored as a numpy object array of ZInvP.
    """

    def __init__(self, entries: np.ndarray, p: int):
        entries = np.asarray(entries, dtype=object)
        n = entries.shape[0]
        if entries.shape != (n, n) or not 3 <= n <= 5:
            raise ValueError(f"Abels matrices are square of size 3..5, got shape {entries.shape}")
        canonical = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                canonical[i, j] = ZInvP.of(entries[i, j], p)
        for i in range(n):
            for j in range(i):
                if canonical[i, j]:
                    raise ValueError(f"Entry ({i + 1}, {j + 1}) below the diagonal is nonzero")
        one = ZInvP(1, 0, p)
        if canonical[0, 0] != one or canonical[n - 1, n - 1] != one:
            raise ValueError("Corner diagonal entries must equal 1")
        for i in range(1, n - 1):
            if not canonical[i, i].is_unit():
                raise ValueError(f"Diagonal entry ({i + 1}, {i + 1}) = {canonical[i, i]} is not a unit")
        self.entries = canonical
        self.n = n
        self.p = p

    @classmethod
    def identity(cls, n: int, p: int) -> 'AbelsMatrix':
        return cls(np.identity(n, dtype=int).astype(object), p)

    def entry(self, i: int, j: int) -> ZInvP:
        """1-based entry access"""
        return self.entries[i - 1, j - 1]

    def __matmul__(self, other: 'AbelsMatrix') -> 'AbelsMatrix':
        return mat_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbelsMatrix):
            return NotImplemented
        return self.n == other.n and self.p == other.p and bool(np.all(self.entries == other.entries))

    def __hash__(self):
        return hash((self.n, self.p, tuple(self.entries.flat)))

    def is_identity(self) -> bool:
        return self == AbelsMatrix.identity(self.n, self.p)

    def is_unipotent(self) -> bool:
        one = ZInvP(1, 0, self.p)
        return all(self.entries[i, i] == one for i in range(self.n))

    def in_A(self) -> bool:
        """Membership in the 5x5 subgroup A: rows 4 and 5 agree with the identity"""
        if self.n != 5:
            return False
        one = ZInvP(1, 0, self.p)
        return self.entries[3, 3] == one and not self.entries[3, 4]

    def __repr__(self):
        rows = ['[' + ', '.join(str(x) for x in row) + ']' for row in self.entries]
        return f"AbelsMatrix(p={self.p}, {', '.join(rows)})"


def mat_mul(a: AbelsMatrix, b: AbelsMatrix) -> AbelsMatrix:
    if a.n != b.n or a.p != b.p:
        raise ValueError(f"Incompatible matrices: n={a.n}/{b.n}, p={a.p}/{b.p}")
    return AbelsMatrix(a.entries @ b.entries, a.p)


def mat_inv(a: AbelsMatrix) -> AbelsMatrix:
    """Back substitution; diagonal entries are units so every step is exact"""
    n = a.n
    inverse = np.empty((n, n), dtype=object)
    inverse[:, :] = ZInvP(0, 0, a.p)
    for i in range(n - 1, -1, -1):
        pivot = a.entries[i, i].inverse()
        inverse[i, i] = pivot
        for j in range(i + 1, n):
            total = sum((a.entries[i, k] * inverse[k, j] for k in range(i + 1, j + 1)), ZInvP(0, 0, a.p))
            inverse[i, j] = -(total * pivot)
    return AbelsMatrix(inverse, a.p)


def elementary(i: int, j: int, a: Union[int, Fraction, ZInvP], n: int, p: int) -> AbelsMatrix:
    """e_ij(a) = 1_n + a E_ij with 1-based i < j"""
    if not (1 <= i < j <= n):
        raise PreconditionError(f"Elementary matrices need 1 <= i < j <= n, got ({i}, {j}) with n = {n}")
    entries = np.identity(n, dtype=int).astype(object)
    entries[i - 1, j - 1] = ZInvP.of(a, p)
    return AbelsMatrix(entries, p)


def diagonal(k: int, e: int, n: int, p: int) -> AbelsMatrix:
    """Identity with p^e at the interior diagonal position k"""
    if not 1 < k < n:
        raise PreconditionError(f"Diagonal generators live at interior positions 2..{n - 1}, got {k}")
    entries = np.identity(n, dtype=int).astype(object)
    entries[k - 1, k - 1] = zinvp_from_fraction(Fraction(p) ** e, p)
    return AbelsMatrix(entries, p)


def commutator_matrix(a: AbelsMatrix, b: AbelsMatrix) -> AbelsMatrix:
    return a @ b @ mat_inv(a) @ mat_inv(b)


def generators_of_A(p: int) -> Dict[str, AbelsMatrix]:
    """e12, e23, e24, e25, e34, e35 and the interior diagonals d2, d3"""
    gens = {f"e{i}{j}": elementary(i, j, 1, 5, p) for i, j in ((1, 2), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5))}
    gens['d2'] = diagonal(2, 1, 5, p)
    gens['d3'] = diagonal(3, 1, 5, p)
    return gens


def center_map(a: Union[int, Fraction, ZInvP], b: Union[int, Fraction, ZInvP], p: int) -> AbelsMatrix:
    """μ(a, b) = e14(a) e15(b), an isomorphism Z[1/p]^2 -> Z(A)"""
    return elementary(1, 4, a, 5, p) @ elementary(1, 5, b, 5, p)


def central_coordinates(matrix: AbelsMatrix) -> Optional[Tuple[ZInvP, ZInvP]]:
    """(a, b) when matrix = μ(a, b), otherwise None"""
    if matrix.n != 5:
        return None
    a, b = matrix.entry(1, 4), matrix.entry(1, 5)
    if matrix == center_map(a, b, matrix.p):
        return a, b
    return None


def is_central_in_A(matrix: AbelsMatrix) -> bool:
    """Commutes with all eight generators of A"""
    if not matrix.in_A():
        return False
    return all(matrix @ g == g @ matrix for g in generators_of_A(matrix.p).values())


def companion_matrix(p: int) -> np.ndarray:
    """M0 for X^2 + p^3 X - 1; symmetric with eigenvectors (1, λ)"""
    return np.array([[0, 1], [1, -p ** 3]], dtype=object)


def m1_matrix(p: int) -> np.ndarray:
    """diag(1_3, M0) as an integer matrix"""
    m1 = np.identity(5, dtype=int).astype(object)
    m1[3:, 3:] = companion_matrix(p)
    return m1


def conjugate_by_m1(matrix: AbelsMatrix) -> AbelsMatrix:
    """M1 X M1^-1; the result lies in A when X does"""
    if not matrix.in_A():
        raise PreconditionError("Conjugation by M1 is defined on the subgroup A")
    p = matrix.p
    m1 = m1_matrix(p)
    m0_inverse = np.array([[p ** 3, 1], [1, 0]], dtype=object)
    m1_inverse = np.identity(5, dtype=int).astype(object)
    m1_inverse[3:, 3:] = m0_inverse
    return AbelsMatrix(m1 @ matrix.entries @ m1_inverse, p)


@dataclass(frozen=True)
class EigenData:
    """p-adic eigenvalues and primitive eigenvectors (1, λ_i) of M0 mod p^k"""
    lambda1: PAdicApprox
    lambda2: PAdicApprox
    v1: Tuple[PAdicApprox, PAdicApprox]
    v2: Tuple[PAdicApprox, PAdicApprox]
    p: int
    precision: int

    def __post_init__(self):
        if (self.lambda1.residue - self.lambda2.residue) % self.p == 0:
            raise PreconditionError("Eigenvalues must be distinct modulo p")

    def eigenvalue(self, i: int) -> PAdicApprox:
        return self.lambda1 if i == 1 else self.lambda2

    def eigenvector(self, i: int) -> Tuple[PAdicApprox, PAdicApprox]:
        return self.v1 if i == 1 else self.v2


def m0_data(p: int, k: int) -> EigenData:
    """
    Certify M0 is not diagonalizable over Q but is over Q_p, and return
    its eigendata at precision k

    Raises:
        PreconditionError: p is not an odd prime, or k < 1
    """
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if p == 2:
        raise PreconditionError("p = 2 is not supported: the eigenvalues of M0 coincide modulo 2")
    if k < 1:
        raise PreconditionError("precision k must be at least 1")
    discriminant = p ** 6 + 4
    root = math.isqrt(discriminant)
    if root * root == discriminant:
        raise RuntimeError(f"Discriminant {discriminant} is a perfect square")
    poly = [-1, p ** 3, 1]
    lambda1 = hensel_lift(poly, 1, p, k)
    lambda2 = hensel_lift(poly, -1, p, k)
    one = PAdicApprox(1, k, p)
    logger.info("M0 eigenvalues mod %d^%d: %d, %d", p, k, lambda1.residue, lambda2.residue)
    return EigenData(lambda1, lambda2, (one, lambda1), (one, lambda2), p, k)


def _as_pair(a, b, p: int) -> Tuple[ZInvP, ZInvP]:
    return ZInvP.of(a, p), ZInvP.of(b, p)


def eigenline_coordinates(a: ZInvP, b: ZInvP, data: EigenData) -> Optional[Tuple[int, int, int]]:
    """
    Polar part of (a, b) in the eigenbasis

    Returns:
        (alpha, beta, m) with (a, b) ≡ (alpha v1 + beta v2) / p^m mod Z_p^2,
        alpha and beta reduced mod p^m; None when precision is insufficient
    """
    p = data.p
    m = max(a.exponent, b.exponent)
    if m == 0:
        return 0, 0, 0
    if data.precision < m + 1:
        return None
    modulus = p ** m
    big_a = a.numerator * p ** (m - a.exponent)
    big_b = b.numerator * p ** (m - b.exponent)
    l1, l2 = data.lambda1.residue, data.lambda2.residue
    gap_inverse = pow((l2 - l1) % modulus, -1, modulus)
    beta = (big_b - l1 * big_a) * gap_inverse % modulus
    alpha = (l2 * big_a - big_b) * gap_inverse % modulus
    return alpha, beta, m


def eigenline_membership(a, b, i: int, data: EigenData) -> Verdict:
    """
    Decide (a, b) ∈ E_i

    Member iff the v_{3-i} coordinate of the polar part vanishes.
    Undetermined when the precision k is below m + 1 for polar order p^m.
    """
    if i not in (1, 2):
        raise PreconditionError(f"Eigenline index must be 1 or 2, got {i}")
    a, b = _as_pair(a, b, data.p)
    coordinates = eigenline_coordinates(a, b, data)
    if coordinates is None:
        return Verdict.UNDETERMINED
    alpha, beta, _ = coordinates
    other = beta if i == 1 else alpha
    return Verdict.membership(other == 0)


def shifted_membership(a, b, i: int, n: int, data: EigenData) -> Verdict:
    """Membership in H_n = p^-n Z^2 + E_i, tested as p^n (a, b) ∈ E_i"""
    a, b = _as_pair(a, b, data.p)
    scale = ZInvP(data.p ** n, 0, data.p)
    return eigenline_membership(a * scale, b * scale, i, data)


def apply_m0(a: ZInvP, b: ZInvP) -> Tuple[ZInvP, ZInvP]:
    """M0 · (a, b)"""
    p = a.p
    return b, a - b * ZInvP(p ** 3, 0, p)


def in_V(matrix: AbelsMatrix, i: int, data: EigenData) -> Verdict:
    """Membership of matrix in V_i = μ(E_i); NONMEMBER for non-central matrices"""
    coordinates = central_coordinates(matrix)
    if coordinates is None:
        return Verdict.NONMEMBER
    return eigenline_membership(coordinates[0], coordinates[1], i, data)


def random_eigenline_member(i: int, data: EigenData, rng: np.random.Generator,
                            max_order: Optional[int] = None) -> Tuple[ZInvP, ZInvP]:
    """c (1, λ_i) / p^m + integer vector, with m < precision so membership is decided"""
    p = data.p
    top = data.precision - 1 if max_order is None else min(max_order, data.precision - 1)
    m = int(rng.integers(0, top + 1))
    c = int(rng.integers(-p ** 3, p ** 3 + 1))
    x, y = (int(z) for z in rng.integers(-50, 51, size=2))
    lam = data.eigenvalue(i).residue
    return ZInvP(c + x * p ** m, m, p), ZInvP(c * lam + y * p ** m, m, p)


def eigenline_invariance_check(data: EigenData, samples: Optional[int] = None, seed: Optional[int] = None) -> bool:
    """
    Randomized check that E_1, E_2 and H_n = p^-n Z^2 + E_i (n <= 3) are
    M0-invariant subgroups, nested in n

    Returns:
        True when every sampled check passes
    """
    samples = Config.EIGENLINE_SAMPLES if samples is None else samples
    rng = np.random.default_rng(Config.RANDOM_SEED if seed is None else seed)
    p = data.p
    failures = 0
    for _ in range(samples):
        for i in (1, 2):
            a, b = random_eigenline_member(i, data, rng)
            c, d = random_eigenline_member(i, data, rng)
            checks = [
                eigenline_membership(*apply_m0(a, b), i, data),
                eigenline_membership(a + c, b + d, i, data),
                eigenline_membership(-a, -b, i, data),
            ]
            for n in range(0, 4):
                x, y = (int(z) for z in rng.integers(-20, 21, size=2))
                u = a + ZInvP(x, n, p)
                v = b + ZInvP(y, n, p)
                checks.append(shifted_membership(u, v, i, n, data))
                checks.append(shifted_membership(u, v, i, n + 1, data))
                checks.append(shifted_membership(*apply_m0(u, v), i, n, data))
            failures += sum(1 for verdict in checks if verdict is not Verdict.MEMBER)
    if failures:
        logger.warning("Eigenline invariance: %d failed checks", failures)
    else:
        logger.info("Eigenline invariance: %d samples passed", samples)
    return failures == 0
