"""A direct grid-partition cyclic table family.

Unlike the extension route, this family is designed for the grid from the
start: data exponents are generalized progressions with steps y (rows of A)
and x = M+1 (columns of B), masks are progressions with steps x and y, and
the modulus q = Ky - 1 wraps the table so that every block antidiagonal
collapses to the single value (k-1)y + (l-1)x + M - 1. The auxiliary bounds
z_tr, z_bl, z_br inflate z just enough to keep those values clear of the
mask quadrants.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, floor

from .errors import PreconditionError
from .tables import DegreeTable, TableParams


@dataclass(frozen=True)
class ConstructionParams:
    """Derived quantities: x = M+1, y = z*x, q = K*y - 1."""

    k: int
    m: int
    l: int
    t: int
    x: int
    z_tr: int
    z_bl: int
    z_br: int
    z: int
    y: int
    q: int

    def to_doc(self) -> dict:
        return {
            "k": self.k,
            "m": self.m,
            "l": self.l,
            "t": self.t,
            "x": self.x,
            "z_tr": self.z_tr,
            "z_bl": self.z_bl,
            "z_br": self.z_br,
            "z": self.z,
            "y": self.y,
            "q": self.q,
        }


def grid_cat_params(k: int, m: int, l: int, t: int) -> ConstructionParams:
    """Derive the construction's parameters; requires K >= L >= 1, M >= 2, T >= 1."""
    if l < 1 or t < 1:
        raise PreconditionError("L and T must be >= 1")
    if k < l:
        raise PreconditionError(f"requires K >= L, got K={k} < L={l}")
    if m < 2:
        raise PreconditionError(f"requires M >= 2, got M={m}")
    x = m + 1
    z_tr = l + ceil((k + t) / (k * m + k))
    z_bl = ceil((l + t - 1) / k)
    if t <= k * m:
        z_br = floor((l + t - 1) / (k * m - t + 1)) + 1
    else:
        z_br = l + t - 1 + floor((k + t) / (k * m + k))
    z = max(l + 1, z_tr, z_bl, z_br)
    y = z * x
    q = k * y - 1
    return ConstructionParams(k=k, m=m, l=l, t=t, x=x, z_tr=z_tr, z_bl=z_bl, z_br=z_br, z=z, y=y, q=q)


def build_grid_cat(k: int, m: int, l: int, t: int) -> DegreeTable:
    """The table itself: gap progressions for data, progressions for masks."""
    from .extension import gap  # local import: extension also imports tables

    p = grid_cat_params(k, m, l, t)
    alpha_p = [v % p.q for v in gap(k * m, p.y, m)]
    beta_p = [v % p.q for v in gap(l * m, p.x, m)]
    alpha_s = [(p.x * i - 1) % p.q for i in range(t)]
    beta_s = [(l * p.x + p.y * i) % p.q for i in range(t)]
    return DegreeTable(
        TableParams(k, m, l, t),
        tuple(alpha_p),
        tuple(beta_p),
        tuple(alpha_s),
        tuple(beta_s),
        q=p.q,
    )


def theorem2_bound(params: ConstructionParams) -> int:
    """Worker-count bound K(M+1)z - 1 for the family; equals q identically."""
    return params.k * (params.m + 1) * params.z - 1


@dataclass(frozen=True)
class Lemma3Report:
    """Residue facts about the antidiagonal value u of block (k, l).

    Statement 4 is checked in the form u mod y = (l-1)x + M-1, which is what
    the underlying derivation produces (the shorter printed form (l-1) + M-1
    fails already at l=2 on the reference parameters).
    """

    k: int
    l: int
    u: int
    in_range: bool  # (k-1)y + (l-1)x + mu < q - 1 for all mu in 0..2M-2
    canonical: bool  # u mod q == u
    mod_x: bool  # u mod x == M - 1
    mod_y: bool  # u mod y == (l-1)x + M - 1

    @property
    def ok(self) -> bool:
        return self.in_range and self.canonical and self.mod_x and self.mod_y


def lemma3_check(params: ConstructionParams, k: int, l: int) -> Lemma3Report:
    if not (1 <= k <= params.k):
        raise PreconditionError(f"k={k} out of range 1..{params.k}")
    if not (1 <= l <= params.l):
        raise PreconditionError(f"l={l} out of range 1..{params.l}")
    base = (k - 1) * params.y + (l - 1) * params.x
    u = base + params.m - 1
    in_range = 0 <= base and base + 2 * params.m - 2 < params.q - 1
    return Lemma3Report(
        k=k,
        l=l,
        u=u,
        in_range=in_range,
        canonical=u % params.q == u,
        mod_x=u % params.x == params.m - 1,
        mod_y=u % params.y == (l - 1) * params.x + params.m - 1,
    )
