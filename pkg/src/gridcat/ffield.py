"""Exact arithmetic over prime fields F_p.

Everything here is plain integer arithmetic with ``pow(a, e, p)``; no floating
point is involved anywhere, so results are exact and size only matters for
speed. Primes are found by deterministic Miller-Rabin (valid far beyond the
2^40 search cap), roots of unity by exponentiating a generator of the
multiplicative group, and linear systems by Gaussian elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import FieldSearchError, SingularMatrixError

PRIME_SEARCH_CAP = 2**40

# Witness set making Miller-Rabin deterministic for all n < 3.3 * 10^24,
# comfortably covering the 2^40 search cap.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test for 64-bit range integers."""
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n by trial division (n <= 2^40 in practice)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class FieldSpec:
    """A prime field, optionally with a distinguished root of unity.

    p is prime; when the cyclic order q is present, q divides p - 1 and omega
    has multiplicative order exactly q.
    """

    p: int
    q: Optional[int] = None
    omega: Optional[int] = None

    def roots_of_unity(self) -> list[int]:
        """All q-th roots of unity as omega^0 .. omega^(q-1)."""
        if self.q is None:
            raise ValueError("field has no cyclic order q")
        out = [1]
        for _ in range(self.q - 1):
            out.append(out[-1] * self.omega % self.p)
        return out


def multiplicative_generator(p: int) -> int:
    """Smallest generator of the multiplicative group of F_p."""
    if p == 2:
        return 1
    factors = prime_factors(p - 1)
    g = 2
    while True:
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            return g
        g += 1


def find_field(q: int, min_p: int) -> FieldSpec:
    """Smallest prime p >= min_p with p = 1 (mod q), plus an order-q element.

    The root is g^((p-1)/q) for the smallest generator g, so the result is
    deterministic for fixed inputs. Raises FieldSearchError past the internal
    cap of 2^40.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if min_p < 2:
        min_p = 2
    if q == 1:
        p = min_p
    else:
        # candidates are k*q + 1
        k = max(1, -(-(min_p - 1) // q))
        p = k * q + 1
    while p <= PRIME_SEARCH_CAP:
        if p >= min_p and p % q == (1 % q) and is_prime(p):
            g = multiplicative_generator(p)
            omega = pow(g, (p - 1) // q, p)
            return FieldSpec(p=p, q=q, omega=omega)
        p += q if q > 1 else 1
    raise FieldSearchError(f"no prime p = 1 (mod {q}) with {min_p} <= p <= 2^40")


@dataclass
class FieldMatrix:
    """A matrix over F_p with entries stored as canonical residues in [0, p)."""

    p: int
    entries: list[list[int]]

    def __post_init__(self):
        self.entries = [[v % self.p for v in row] for row in self.entries]

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldMatrix)
            and self.p == other.p
            and self.entries == other.entries
        )


def zeros(rows: int, cols: int, p: int) -> FieldMatrix:
    return FieldMatrix(p, [[0] * cols for _ in range(rows)])


def vandermonde(points: Sequence[int], exponents: Sequence[int], spec: FieldSpec) -> FieldMatrix:
    """Generalized Vandermonde matrix with entry (i, j) = points[i]^exponents[j].

    0^0 is 1 (constant-term convention), which is what Python's pow gives.
    """
    if any(e < 0 for e in exponents):
        raise ValueError("exponents must be nonnegative")
    p = spec.p
    return FieldMatrix(p, [[pow(x % p, e, p) for e in exponents] for x in points])


def matmul(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    if a.p != b.p:
        raise ValueError("modulus mismatch")
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch: {a.rows}x{a.cols} @ {b.rows}x{b.cols}")
    p = a.p
    bt = list(zip(*b.entries))
    out = [[sum(x * y for x, y in zip(row, col)) % p for col in bt] for row in a.entries]
    return FieldMatrix(p, out)


def solve(mat: FieldMatrix, rhs: FieldMatrix) -> FieldMatrix:
    """Solve mat @ X = rhs by Gaussian elimination over F_p.

    Raises SingularMatrixError carrying the rank when mat is not invertible.
    """
    if mat.rows != mat.cols:
        raise ValueError("matrix must be square")
    if rhs.rows != mat.rows:
        raise ValueError("rhs row count mismatch")
    n, p = mat.rows, mat.p
    width = n + rhs.cols
    work = [mat.entries[i][:] + rhs.entries[i][:] for i in range(n)]
    rank = 0
    for c in range(n):
        piv = next((r for r in range(rank, n) if work[r][c]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = pow(work[rank][c], p - 2, p)
        work[rank] = [v * inv % p for v in work[rank]]
        prow = work[rank]
        for r in range(n):
            if r != rank and work[r][c]:
                f = work[r][c]
                wr = work[r]
                for j in range(c, width):
                    wr[j] = (wr[j] - f * prow[j]) % p
        rank += 1
    if rank < n:
        raise SingularMatrixError(rank=rank, size=n)
    return FieldMatrix(p, [row[n:] for row in work])


def rows_nonsingular(rows: list[list[int]], p: int) -> bool:
    """Division-free full-rank test on a square list-of-lists matrix mod p.

    Row elimination uses cross-multiplication (new_row = pivot*row - f*pivot_row),
    which scales the determinant by nonzero factors only, so zero-ness of the
    determinant is preserved without any modular inversions. This is the hot
    path of the T x T submatrix audits.
    """
    n = len(rows)
    m = [row[:] for row in rows]
    for c in range(n - 1):
        piv = None
        for r in range(c, n):
            if m[r][c]:
                piv = r
                break
        if piv is None:
            return False
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
        pv = m[c][c]
        prow = m[c]
        for r in range(c + 1, n):
            f = m[r][c]
            if f:
                mr = m[r]
                for j in range(c, n):
                    mr[j] = (pv * mr[j] - f * prow[j]) % p
    return m[n - 1][n - 1] != 0


def is_invertible(mat: FieldMatrix) -> bool:
    """True iff the square matrix has full rank over F_p."""
    if mat.rows != mat.cols:
        raise ValueError("matrix must be square")
    if mat.rows == 0:
        return True
    return rows_nonsingular(mat.entries, mat.p)
