"""Brute-force oracle, minimal-table search, and the parameter sweep.

brute_validate re-derives every check of the table definition with naive
index loops and nothing shared with the fast validator; it exists so the two
implementations can be played against each other. search_min_table is an
exhaustive backtracking enumeration at toy scale. sweep tabulates worker
counts for the construction family and for user-supplied tables pushed
through the extension operations; no scheme from the wider literature is
generated here, because their degree vectors are not part of this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .construction import build_grid_cat, grid_cat_params, theorem2_bound
from .errors import PreconditionError
from .extension import MODES, extend
from .tables import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    DegreeTable,
    PropertyStatus,
    TableParams,
    ValidationReport,
    Witness,
    validate,
    worker_count,
)


def _status(hits: list[Witness]) -> PropertyStatus:
    if not hits:
        return PropertyStatus(PASS)
    best = min(hits, key=lambda w: (w.value, w.first, w.second))
    return PropertyStatus(FAIL, witness=best)


def brute_validate(table: DegreeTable) -> ValidationReport:
    """Definition-chasing validator: quadruple loops, no set machinery reused.

    Used as the oracle against the fast validator; verdicts must agree on
    every table.
    """
    K, M, L, T = table.params.k, table.params.m, table.params.l, table.params.t
    q = table.q

    def red(v):
        return v % q if q is not None else v

    def a_entry(k, i):  # alpha block k (1-based), entry i (1-based)
        return table.alpha_p[(k - 1) * M + (i - 1)]

    def b_entry(l, j):
        return table.beta_p[(l - 1) * M + (j - 1)]

    # N: every pairwise sum of the concatenated vectors.
    seen = set()
    for a in table.alpha_p + table.alpha_s:
        for b in table.beta_p + table.beta_s:
            seen.add(red(a + b))
    n = len(seen)

    def u_val(k, l, i):
        return red(a_entry(k, i) + b_entry(l, M - i + 1))

    # II a: same value on the antidiagonals of two distinct blocks.
    hits_a = []
    for k in range(1, K + 1):
        for l in range(1, L + 1):
            for k2 in range(1, K + 1):
                for l2 in range(1, L + 1):
                    if (k, l) >= (k2, l2):
                        continue
                    for i in range(1, M + 1):
                        for i2 in range(1, M + 1):
                            if u_val(k, l, i) == u_val(k2, l2, i2):
                                hits_a.append(
                                    Witness(u_val(k, l, i), ("U", k, l, i), ("U", k2, l2, i2))
                                )
    ii_a = _status(hits_a)

    # II b/c/d: antidiagonal values in a mask quadrant.
    hits_b, hits_c, hits_d = [], [], []
    for k in range(1, K + 1):
        for l in range(1, L + 1):
            for i in range(1, M + 1):
                u = u_val(k, l, i)
                for ai, a in enumerate(table.alpha_p, 1):
                    for ti, s in enumerate(table.beta_s, 1):
                        if red(a + s) == u:
                            hits_b.append(Witness(u, ("U", k, l, i), ("TR", ai, ti)))
                for ti, s in enumerate(table.alpha_s, 1):
                    for bi, b in enumerate(table.beta_p, 1):
                        if red(s + b) == u:
                            hits_c.append(Witness(u, ("U", k, l, i), ("BL", ti, bi)))
                for t1, s1 in enumerate(table.alpha_s, 1):
                    for t2, s2 in enumerate(table.beta_s, 1):
                        if red(s1 + s2) == u:
                            hits_d.append(Witness(u, ("U", k, l, i), ("BR", t1, t2)))
    ii_b, ii_c, ii_d = _status(hits_b), _status(hits_c), _status(hits_d)

    # II e: antidiagonal values off-antidiagonal anywhere, own block included.
    hits_e = []
    for k in range(1, K + 1):
        for l in range(1, L + 1):
            for i in range(1, M + 1):
                u = u_val(k, l, i)
                for k2 in range(1, K + 1):
                    for l2 in range(1, L + 1):
                        for i2 in range(1, M + 1):
                            for j2 in range(1, M + 1):
                                if i2 + j2 == M + 1:
                                    continue
                                if red(a_entry(k2, i2) + b_entry(l2, j2)) == u:
                                    hits_e.append(
                                        Witness(u, ("U", k, l, i), ("TL", k2, l2, i2, j2))
                                    )
    ii_e = _status(hits_e)

    # III: pairwise duplicates in either concatenation.
    hits_iii = []
    for tag, vec in (("alpha", table.alpha_p + table.alpha_s), ("beta", table.beta_p + table.beta_s)):
        for i in range(len(vec)):
            for j in range(i + 1, len(vec)):
                if vec[i] == vec[j]:
                    hits_iii.append(Witness(vec[i], (tag, i + 1), (tag, j + 1)))
    iii = _status(hits_iii)

    # IV, sufficient form, re-derived: distinctness plus mask progressions
    # whose steps share no factor with q.
    if q is None:
        iv = PropertyStatus(PASS, note="plain table: generic evaluation points")
    elif iii.status != PASS:
        iv = PropertyStatus(INCONCLUSIVE, note="property III fails")
    else:
        iv = PropertyStatus(PASS, note="mask vectors are progressions coprime to q")
        for name, vec in (("alpha_s", table.alpha_s), ("beta_s", table.beta_s)):
            if len(vec) == 1:
                d = 1
            else:
                diffs = [(vec[i + 1] - vec[i]) % q for i in range(len(vec) - 1)]
                d = diffs[0] if all(x == diffs[0] for x in diffs) else None
            if d is None:
                iv = PropertyStatus(
                    INCONCLUSIVE, note=f"{name} is not an arithmetic progression mod q"
                )
                break
            if math.gcd(d, q) != 1:
                iv = PropertyStatus(
                    INCONCLUSIVE, note=f"{name} difference {d} shares a factor with q={q}"
                )
                break

    return ValidationReport(
        n=n,
        property_i=PropertyStatus(PASS, note=f"N={n}"),
        property_ii_a=ii_a,
        property_ii_b=ii_b,
        property_ii_c=ii_c,
        property_ii_d=ii_d,
        property_ii_e=ii_e,
        property_iii=iii,
        property_iv=iv,
    )


# --------------------------------------------------------------------------
# Exhaustive minimal-table search

@dataclass(frozen=True)
class SearchBudget:
    max_exponent: int
    q_candidates: Optional[tuple[int, ...]] = None
    node_limit: int = 10**6

    def __post_init__(self):
        if self.max_exponent < 0 or self.node_limit < 1:
            raise ValueError("budget values must be positive")


@dataclass
class SearchOutcome:
    """Best table found, or None; complete means full enumeration finished."""

    table: Optional[DegreeTable]
    n: Optional[int]
    complete: bool
    nodes: int


def search_min_table(k: int, m: int, l: int, t: int, budget: SearchBudget) -> SearchOutcome:
    """Enumerate degree assignments and keep the first minimum-N valid table.

    The first entries of alpha_p and beta_p are pinned to 0 (sumsets are
    translation invariant), remaining positions are filled in the order
    alpha_p, alpha_s, beta_p, beta_s with values tried ascending, so the
    returned table is the lexicographically smallest among those attaining
    the minimum. Each value placement costs one node against the budget.
    """
    params = TableParams(k, m, l, t)
    na, nb = k * m + t, l * m + t
    best_table: Optional[DegreeTable] = None
    best_n: Optional[int] = None
    nodes = 0
    budget_hit = False
    q_list: list[Optional[int]] = (
        [None] if budget.q_candidates is None else list(budget.q_candidates)
    )

    for q in q_list:
        if budget_hit:
            break
        hi = budget.max_exponent if q is None else min(budget.max_exponent, q - 1)
        values = range(0, hi + 1)

        alpha = [0] * na
        beta = [0] * nb

        def leaf():
            nonlocal best_table, best_n
            table = DegreeTable(
                params,
                tuple(alpha[: k * m]),
                tuple(beta[: l * m]),
                tuple(alpha[k * m :]),
                tuple(beta[l * m :]),
                q=q,
            )
            report = brute_validate(table)
            if report.ok and (best_n is None or report.n < best_n):
                best_table, best_n = table, report.n

        def fill_beta(pos: int, used: set) -> bool:
            nonlocal nodes, budget_hit
            if pos == nb:
                leaf()
                return True
            for v in values:
                if v in used:
                    continue
                nodes += 1
                if nodes > budget.node_limit:
                    budget_hit = True
                    return False
                beta[pos] = v
                used.add(v)
                ok = fill_beta(pos + 1, used)
                used.remove(v)
                if not ok:
                    return False
            return True

        def fill_alpha(pos: int, used: set) -> bool:
            nonlocal nodes, budget_hit
            if pos == na:
                return fill_beta(1, {0})
            for v in values:
                if v in used:
                    continue
                nodes += 1
                if nodes > budget.node_limit:
                    budget_hit = True
                    return False
                alpha[pos] = v
                used.add(v)
                ok = fill_alpha(pos + 1, used)
                used.remove(v)
                if not ok:
                    return False
            return True

        # alpha_p[0] = beta_p[0] = 0 by canonicalization.
        fill_alpha(1, {0})

    return SearchOutcome(table=best_table, n=best_n, complete=not budget_hit, nodes=nodes)


# --------------------------------------------------------------------------
# Parameter sweep

@dataclass(frozen=True)
class Construction1Scheme:
    label: str = "construction1"


@dataclass(frozen=True)
class ExtensionScheme:
    """A user-supplied OPP table pushed through one extension mode."""

    mode: str
    table: DegreeTable
    label: str

    def __post_init__(self):
        if self.mode not in MODES:
            raise PreconditionError(f"unknown extension mode {self.mode!r}")


SchemeSpec = Union[Construction1Scheme, ExtensionScheme]


@dataclass(frozen=True)
class SweepRow:
    k: int
    m: int
    l: int
    t: int
    scheme: str
    n: Optional[int]
    valid: bool
    bound: Optional[int]


def _construction_row(k: int, m: int, l: int, t: int, label: str) -> SweepRow:
    if k < l or m < 2:
        return SweepRow(k, m, l, t, label, None, False, None)
    table = build_grid_cat(k, m, l, t)
    report = validate(table)
    bound = theorem2_bound(grid_cat_params(k, m, l, t))
    return SweepRow(k, m, l, t, label, report.n, report.ok, bound)


def _extension_row(k: int, m: int, l: int, t: int, scheme: ExtensionScheme) -> SweepRow:
    src = scheme.table
    applicable = (
        src.params.m == 1
        and src.params.k == k * m
        and src.params.l == l
        and src.params.t == t
    )
    if not applicable:
        return SweepRow(k, m, l, t, scheme.label, None, False, None)
    try:
        extended = extend(src, m, scheme.mode)
    except PreconditionError:
        return SweepRow(k, m, l, t, scheme.label, None, False, None)
    report = validate(extended)
    return SweepRow(k, m, l, t, scheme.label, report.n, report.ok, None)


def sweep(
    k_range: tuple[int, int],
    m_range: tuple[int, int],
    l_range: tuple[int, int],
    t_range: tuple[int, int],
    schemes: Sequence[SchemeSpec],
) -> list[SweepRow]:
    """One row per (parameter tuple, scheme), tuples ascending, schemes in order."""
    rows = []
    for k in range(k_range[0], k_range[1] + 1):
        for m in range(m_range[0], m_range[1] + 1):
            for l in range(l_range[0], l_range[1] + 1):
                for t in range(t_range[0], t_range[1] + 1):
                    for scheme in schemes:
                        if isinstance(scheme, Construction1Scheme):
                            rows.append(_construction_row(k, m, l, t, scheme.label))
                        else:
                            rows.append(_extension_row(k, m, l, t, scheme))
    return rows


CSV_HEADER = "k,m,l,t,scheme,n,valid,bound"


def sweep_to_csv(rows: Iterable[SweepRow]) -> str:
    """Deterministic CSV: UTF-8 text, LF endings, empty cells for absent values."""
    lines = [CSV_HEADER]
    for r in rows:
        n = "" if r.n is None else str(r.n)
        bound = "" if r.bound is None else str(r.bound)
        valid = "true" if r.valid else "false"
        lines.append(f"{r.k},{r.m},{r.l},{r.t},{r.scheme},{n},{valid},{bound}")
    return "\n".join(lines) + "\n"
