"""Lifting outer-product-partition degree tables to the grid partition.

An OPP table for (K*M, L, T) whose data exponent vector is an arithmetic
progression extends to a grid table for (K, M, L, T) by replacing each beta
entry b with the run (b, b + z, ..., b + (M-1)z), z the progression step. The
three variants keep the table plain, keep it cyclic, or introduce a modulus
chosen just large enough to stay valid. This module also checks the worker
bounds the extensions obey and the two structural fingerprints every
extended table carries: pairwise-disjoint above-antidiagonal sets (plus their
disjointness from the mask quadrants) and constant block antidiagonals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .errors import PreconditionError
from .tables import DegreeTable, TableParams, decompose, oplus, worker_count

DT_TO_DT = "dt-dt"
CAT_TO_CAT = "cat-cat"
DT_TO_CAT = "dt-cat"
MODES = (DT_TO_DT, CAT_TO_CAT, DT_TO_CAT)


def gap(length: int, x: int, r: int) -> list[int]:
    """Generalized arithmetic progression with differences 1 and x.

    Runs of r consecutive integers starting at 0, x, 2x, ..., truncated to
    the requested length. Requires r <= x so entries stay strictly increasing.
    """
    if length < 1 or x < 1 or r < 1:
        raise PreconditionError("gap requires length, x, r >= 1")
    if r > x:
        raise PreconditionError(f"chain length r={r} exceeds step x={x}")
    out = []
    base = 0
    while len(out) < length:
        take = min(r, length - len(out))
        out.extend(range(base, base + take))
        base += x
    return out


def is_arithmetic_progression(vec: Sequence[int]) -> tuple[bool, Optional[int]]:
    """Whether vec has a constant difference; returns it when so.

    Single-entry vectors count as progressions with difference 1.
    """
    if len(vec) == 0:
        raise ValueError("empty vector")
    if len(vec) == 1:
        return True, 1
    d = vec[1] - vec[0]
    for i in range(1, len(vec) - 1):
        if vec[i + 1] - vec[i] != d:
            return False, None
    return True, d


def _require_opp_source(opp: DegreeTable, grid_m: int) -> int:
    """Common structural premises of all extensions; returns the step zeta."""
    if opp.params.m != 1:
        raise PreconditionError("source must be an OPP table (M=1)")
    if grid_m < 1:
        raise PreconditionError("grid_m must be >= 1")
    if opp.params.k % grid_m != 0:
        raise PreconditionError(
            f"source K={opp.params.k} not divisible by grid_m={grid_m}"
        )
    ok, zeta = is_arithmetic_progression(opp.alpha_p)
    if not ok:
        raise PreconditionError(
            "alpha_p is not an arithmetic progression; only the "
            "arithmetic-progression form of the extension is implemented"
        )
    return zeta


def _extended_vectors(opp: DegreeTable, grid_m: int) -> tuple:
    """New parameters and beta_p: each source beta entry grows into a run."""
    offsets = [a - opp.alpha_p[0] for a in opp.alpha_p[:grid_m]]
    new_beta = oplus(opp.beta_p, offsets)
    params = TableParams(opp.params.k // grid_m, grid_m, opp.params.l, opp.params.t)
    return params, tuple(new_beta)


def extend_dt_to_dt(opp: DegreeTable, grid_m: int) -> DegreeTable:
    """Plain-to-plain grid extension of an OPP degree table."""
    if opp.is_cyclic:
        raise PreconditionError("source must be a plain degree table (no q)")
    _require_opp_source(opp, grid_m)
    params, new_beta = _extended_vectors(opp, grid_m)
    return DegreeTable(params, opp.alpha_p, new_beta, opp.alpha_s, opp.beta_s, q=None)


def extend_cat_to_cat(opp: DegreeTable, grid_m: int) -> DegreeTable:
    """Cyclic-to-cyclic grid extension; the modulus carries over."""
    if not opp.is_cyclic:
        raise PreconditionError("source must be a cyclic table (q present)")
    _require_opp_source(opp, grid_m)
    params, new_beta = _extended_vectors(opp, grid_m)
    return DegreeTable(params, opp.alpha_p, new_beta, opp.alpha_s, opp.beta_s, q=opp.q)


def extend_dt_to_cat(opp: DegreeTable, grid_m: int) -> DegreeTable:
    """Plain-to-cyclic grid extension.

    The modulus is the largest table entry minus M-2, nudged up by the
    smallest amount gamma that makes it coprime to both mask progression
    steps, so wrap-arounds land harmlessly below the first antidiagonal.
    """
    if opp.is_cyclic:
        raise PreconditionError("source must be a plain degree table (no q)")
    zeta = _require_opp_source(opp, grid_m)
    if opp.alpha_p[0] != 0 or opp.beta_p[0] != 0:
        raise PreconditionError("requires alpha_p[1] = beta_p[1] = 0")
    if len(opp.alpha_p) > 1 and zeta != 1:
        raise PreconditionError("requires alpha_p common difference 1")
    ok_a, d_a = is_arithmetic_progression(opp.alpha_s)
    ok_b, d_b = is_arithmetic_progression(opp.beta_s)
    if not ok_a or not ok_b:
        raise PreconditionError("requires alpha_s and beta_s to be arithmetic progressions")
    top = max(oplus(opp.alpha_cat, opp.beta_cat))
    q = top - grid_m + 2
    while math.gcd(q, d_a) != 1 or math.gcd(q, d_b) != 1:
        q += 1
    params, new_beta = _extended_vectors(opp, grid_m)
    return DegreeTable(params, opp.alpha_p, new_beta, opp.alpha_s, opp.beta_s, q=q)


def extend(opp: DegreeTable, grid_m: int, mode: str) -> DegreeTable:
    if mode == DT_TO_DT:
        return extend_dt_to_dt(opp, grid_m)
    if mode == CAT_TO_CAT:
        return extend_cat_to_cat(opp, grid_m)
    if mode == DT_TO_CAT:
        return extend_dt_to_cat(opp, grid_m)
    raise PreconditionError(f"unknown extension mode {mode!r}")


@dataclass(frozen=True)
class ExtensionReport:
    """Worker counts of source and extension against the proven bounds."""

    mode: str
    grid_m: int
    n_prime: int
    n: int
    upper_bound: int
    lower_bound: int
    zeta: int

    @property
    def within_bounds(self) -> bool:
        return self.lower_bound <= self.n <= self.upper_bound

    def to_doc(self) -> dict:
        return {
            "mode": self.mode,
            "grid_m": self.grid_m,
            "n_prime": self.n_prime,
            "n": self.n,
            "upper_bound": self.upper_bound,
            "lower_bound": self.lower_bound,
            "zeta": self.zeta,
            "within_bounds": self.within_bounds,
        }


def check_theorem1_bounds(source: DegreeTable, extended: DegreeTable, mode: str) -> ExtensionReport:
    """Worker-count bounds for an extension: N' <= N <= N' + (M-1)(K+T)L.

    The lower bound drops to N' - M + 1 when a modulus was introduced, since
    the reduction can merge up to M - 1 entries.
    """
    if mode not in MODES:
        raise PreconditionError(f"unknown extension mode {mode!r}")
    ok, zeta = is_arithmetic_progression(source.alpha_p)
    if not ok:
        raise PreconditionError("source alpha_p is not an arithmetic progression")
    n_prime = worker_count(source)
    n = worker_count(extended)
    k, m, l, t = (
        extended.params.k,
        extended.params.m,
        extended.params.l,
        extended.params.t,
    )
    upper = n_prime + (m - 1) * (k + t) * l
    lower = n_prime - m + 1 if mode == DT_TO_CAT else n_prime
    return ExtensionReport(
        mode=mode,
        grid_m=m,
        n_prime=n_prime,
        n=n,
        upper_bound=upper,
        lower_bound=lower,
        zeta=zeta,
    )


@dataclass(frozen=True)
class Lemma2Witness:
    """An entry shared between an above-antidiagonal set and a forbidden set."""

    value: int
    block: tuple[int, int]
    other: Union[tuple[int, int], str]  # another block, or "TR" / "BR"


def check_lemma2_constraints(gp: DegreeTable) -> tuple[bool, Optional[Lemma2Witness]]:
    """Structural fingerprint of extended tables.

    Every grid table that arises from an OPP extension has (a) the
    above-antidiagonal sets of distinct blocks pairwise disjoint and (b) each
    of them disjoint from the top-right and bottom-right quadrants. Tables
    built directly for the grid may violate both. The witness is the smallest
    entry of the first violating intersection, scanning block pairs in
    lexicographic order, then TR and BR per block.
    """
    if gp.params.m < 2:
        raise PreconditionError("requires M >= 2 (above-antidiagonal sets are empty for M=1)")
    dec = decompose(gp)
    K, L = gp.params.k, gp.params.l
    blocks = [(k, l) for k in range(1, K + 1) for l in range(1, L + 1)]
    for idx, (k, l) in enumerate(blocks):
        for k2, l2 in blocks[idx + 1 :]:
            common = dec.a[k - 1][l - 1] & dec.a[k2 - 1][l2 - 1]
            if common:
                return False, Lemma2Witness(min(common), (k, l), (k2, l2))
    for k, l in blocks:
        for name, quad in (("TR", dec.tr), ("BR", dec.br)):
            common = dec.a[k - 1][l - 1] & quad
            if common:
                return False, Lemma2Witness(min(common), (k, l), name)
    return True, None


def check_constant_antidiagonals(gp: DegreeTable) -> bool:
    """True iff in every top-left block, entry (i, j) depends only on i + j."""
    M = gp.params.m
    red = gp.reduce
    for k in range(1, gp.params.k + 1):
        ab = gp.alpha_block(k)
        for l in range(1, gp.params.l + 1):
            bb = gp.beta_block(l)
            for s in range(1, 2 * M):  # i + j - 1
                cells = {
                    red(ab[i] + bb[s - 1 - i])
                    for i in range(max(0, s - M), min(M, s))
                }
                if len(cells) > 1:
                    return False
    return True
