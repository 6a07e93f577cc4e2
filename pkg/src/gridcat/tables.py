"""Degree tables for grid-partitioned private matrix multiplication.

A degree table holds four exponent vectors (two for data blocks, two for
random masks) plus an optional cyclic modulus q. The entries of the pairwise
sums form the "table"; its distinct values count the workers N a scheme
needs. This module owns the data model, the block decomposition of the
top-left quadrant, the validity checker for grid-partition degree tables
(plain and cyclic-addition), and the JSON file format.

Throughout, reports use 1-based (k, l, i, j) coordinates.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence, Union

from . import ffield
from .errors import SchemaError

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

# Search policy for the constructive roots-of-unity check: the contiguous
# window of roots first, then seeded random subsets.
RANDOM_ROOT_SUBSETS = 1000
EXHAUSTIVE_SUBSET_LIMIT = 10**5
RANDOM_SUBSET_SAMPLES = 10**4


def oplus(x: Sequence[int], y: Sequence[int]) -> list[int]:
    """All pairwise sums, outer index over x, inner over y."""
    return [a + b for a in x for b in y]


@dataclass(frozen=True)
class TableParams:
    """Grid parameters: A is split K x M, B is split M x L, T may collude."""

    k: int
    m: int
    l: int
    t: int

    def __post_init__(self):
        for name in ("k", "m", "l", "t"):
            if getattr(self, name) < 1:
                raise SchemaError(name, "must be >= 1")


@dataclass(frozen=True)
class DegreeTable:
    """The four degree vectors plus parameters; q present means cyclic table.

    Entries are canonical residues mod q when q is present; plain tables hold
    unbounded nonnegative integers. Instances are immutable.
    """

    params: TableParams
    alpha_p: tuple[int, ...]
    beta_p: tuple[int, ...]
    alpha_s: tuple[int, ...]
    beta_s: tuple[int, ...]
    q: Optional[int] = None

    def __post_init__(self):
        p = self.params
        expected = {
            "alpha_p": p.k * p.m,
            "beta_p": p.l * p.m,
            "alpha_s": p.t,
            "beta_s": p.t,
        }
        if self.q is not None and self.q < 1:
            raise SchemaError("q", "must be a positive integer or null")
        for name, want in expected.items():
            vec = tuple(getattr(self, name))
            if len(vec) != want:
                raise SchemaError(name, f"expected length {want}, got {len(vec)}")
            if self.q is not None:
                vec = tuple(v % self.q for v in vec)
            elif any(v < 0 for v in vec):
                raise SchemaError(name, "negative entry in a plain degree table")
            object.__setattr__(self, name, vec)

    @property
    def is_cyclic(self) -> bool:
        return self.q is not None

    @property
    def alpha_cat(self) -> tuple[int, ...]:
        return self.alpha_p + self.alpha_s

    @property
    def beta_cat(self) -> tuple[int, ...]:
        return self.beta_p + self.beta_s

    def alpha_block(self, k: int) -> tuple[int, ...]:
        """Block k (1-based) of alpha_p, length M."""
        m = self.params.m
        return self.alpha_p[(k - 1) * m : k * m]

    def beta_block(self, l: int) -> tuple[int, ...]:
        """Block l (1-based) of beta_p, length M."""
        m = self.params.m
        return self.beta_p[(l - 1) * m : l * m]

    def reduce(self, v: int) -> int:
        return v % self.q if self.q is not None else v


@dataclass(frozen=True)
class BlockDecomposition:
    """All derived entry sets of a table, indexed [k-1][l-1] where blocked.

    tl_blocks = u | a | b per block; tr/bl/br are the mask quadrants;
    c[l] pairs the masks with the first entry of beta block l, d[l] with the
    remaining entries.
    """

    tl_blocks: list[list[set[int]]]
    u: list[list[set[int]]]
    a: list[list[set[int]]]
    b: list[list[set[int]]]
    tl_tilde: list[list[set[int]]]
    tr: set[int]
    bl: set[int]
    br: set[int]
    c: list[set[int]]
    d: list[set[int]]


def decompose(table: DegreeTable) -> BlockDecomposition:
    """Split the table into quadrant and per-block entry sets.

    The antidiagonal set of block (k, l) collects alpha_k[i] + beta_l[M-i+1];
    cells above it (i + j < M + 1) go to a, cells below to b.
    """
    K, M, L = table.params.k, table.params.m, table.params.l
    red = table.reduce
    tl_blocks, u, a, b, tl_tilde = [], [], [], [], []
    for k in range(1, K + 1):
        ab = table.alpha_block(k)
        row_tl, row_u, row_a, row_b, row_t = [], [], [], [], []
        for l in range(1, L + 1):
            bb = table.beta_block(l)
            tl_set, u_set, a_set, b_set = set(), set(), set(), set()
            for i in range(M):
                ai = ab[i]
                for j in range(M):
                    v = red(ai + bb[j])
                    tl_set.add(v)
                    if i + j == M - 1:
                        u_set.add(v)
                    elif i + j < M - 1:
                        a_set.add(v)
                    else:
                        b_set.add(v)
            row_tl.append(tl_set)
            row_u.append(u_set)
            row_a.append(a_set)
            row_b.append(b_set)
            row_t.append(a_set | b_set)
        tl_blocks.append(row_tl)
        u.append(row_u)
        a.append(row_a)
        b.append(row_b)
        tl_tilde.append(row_t)
    tr = {red(v) for v in oplus(table.alpha_p, table.beta_s)}
    bl = {red(v) for v in oplus(table.alpha_s, table.beta_p)}
    br = {red(v) for v in oplus(table.alpha_s, table.beta_s)}
    c, d = [], []
    for l in range(1, L + 1):
        bb = table.beta_block(l)
        c.append({red(s + bb[0]) for s in table.alpha_s})
        d.append({red(s + bb[j]) for s in table.alpha_s for j in range(1, M)})
    return BlockDecomposition(tl_blocks, u, a, b, tl_tilde, tr, bl, br, c, d)


def worker_count(table: DegreeTable) -> int:
    """Number of distinct entries in the whole table (= workers required)."""
    red = table.reduce
    return len({red(v) for v in oplus(table.alpha_cat, table.beta_cat)})


# --------------------------------------------------------------------------
# Validation

Location = tuple  # ("U", k, l, i) / ("TL", k, l, i, j) / ("TR", i, t) / ...


@dataclass(frozen=True)
class Witness:
    """A colliding table entry with the two positions where it occurs."""

    value: int
    first: Location
    second: Location

    def to_doc(self) -> dict:
        return {"value": self.value, "first": list(self.first), "second": list(self.second)}


@dataclass(frozen=True)
class RootsWitness:
    """Evaluation points certifying the invertibility condition."""

    field: ffield.FieldSpec
    rho: tuple[int, ...]

    def to_doc(self) -> dict:
        return {
            "p": self.field.p,
            "q": self.field.q,
            "omega": self.field.omega,
            "rho": list(self.rho),
        }


@dataclass(frozen=True)
class PropertyStatus:
    status: str
    witness: Union[Witness, RootsWitness, None] = None
    note: Optional[str] = None

    def to_doc(self) -> dict:
        doc = {"status": self.status}
        if self.witness is not None:
            doc["witness"] = self.witness.to_doc()
        if self.note is not None:
            doc["note"] = self.note
        return doc


_PASS = PropertyStatus(PASS)


@dataclass(frozen=True)
class ValidationReport:
    """Per-property verdicts plus the worker count N."""

    n: int
    property_i: PropertyStatus
    property_ii_a: PropertyStatus
    property_ii_b: PropertyStatus
    property_ii_c: PropertyStatus
    property_ii_d: PropertyStatus
    property_ii_e: PropertyStatus
    property_iii: PropertyStatus
    property_iv: PropertyStatus

    def named(self) -> dict[str, PropertyStatus]:
        return {
            "I": self.property_i,
            "II.a": self.property_ii_a,
            "II.b": self.property_ii_b,
            "II.c": self.property_ii_c,
            "II.d": self.property_ii_d,
            "II.e": self.property_ii_e,
            "III": self.property_iii,
            "IV": self.property_iv,
        }

    @property
    def ok(self) -> bool:
        return all(s.status == PASS for s in self.named().values())

    def statuses(self) -> dict[str, str]:
        return {name: s.status for name, s in self.named().items()}

    def to_doc(self) -> dict:
        return {
            "n": self.n,
            "ok": self.ok,
            "properties": {name: s.to_doc() for name, s in self.named().items()},
        }


def _first_locations(values_with_locs) -> dict[int, Location]:
    """Map each value to its lexicographically smallest location."""
    out: dict[int, Location] = {}
    for v, loc in values_with_locs:
        if v not in out or loc < out[v]:
            out[v] = loc
    return out


def _min_witness(candidates: list[Witness]) -> Optional[Witness]:
    if not candidates:
        return None
    return min(candidates, key=lambda w: (w.value, w.first, w.second))


def _disjointness(u_locs: dict[int, Location], other: dict[int, Location]) -> PropertyStatus:
    hits = [Witness(v, u_locs[v], other[v]) for v in u_locs.keys() & other.keys()]
    w = _min_witness(hits)
    return _PASS if w is None else PropertyStatus(FAIL, witness=w)


def validate(table: DegreeTable, iv_mode: str = "sufficient", seed: int = 0) -> ValidationReport:
    """Check the defining properties of a grid-partition degree table.

    Property II demands that every block antidiagonal entry appears nowhere
    else: not in another block's antidiagonal (a), not in the mask quadrants
    (b, c, d), and not off-antidiagonal in any block, its own included (e).
    Property III asks all alpha entries distinct and all beta entries
    distinct. Property IV (cyclic tables only) is delegated to
    check_condition_iv. Failures carry the lexicographically smallest
    colliding pair, 1-based.
    """
    K, M, L = table.params.k, table.params.m, table.params.l
    red = table.reduce
    n = worker_count(table)

    # Antidiagonal entries with coordinates, plus the smallest location per value.
    u_entries: list[tuple[int, Location]] = []
    for k in range(1, K + 1):
        ab = table.alpha_block(k)
        for l in range(1, L + 1):
            bb = table.beta_block(l)
            for i in range(1, M + 1):
                u_entries.append((red(ab[i - 1] + bb[M - i]), ("U", k, l, i)))
    u_locs = _first_locations(u_entries)

    # II a: the same value in antidiagonals of two distinct blocks.
    by_value: dict[int, list[Location]] = {}
    for v, loc in u_entries:
        by_value.setdefault(v, []).append(loc)
    a_hits = []
    for v, locs in by_value.items():
        blocks = {}
        for loc in sorted(locs):
            blocks.setdefault((loc[1], loc[2]), loc)
        if len(blocks) > 1:
            first, second = sorted(blocks.values())[:2]
            a_hits.append(Witness(v, first, second))
    ii_a = _PASS if not a_hits else PropertyStatus(FAIL, witness=_min_witness(a_hits))

    # Mask quadrants with coordinates.
    tr_locs = _first_locations(
        (red(a + b), ("TR", i, t))
        for i, a in enumerate(table.alpha_p, 1)
        for t, b in enumerate(table.beta_s, 1)
    )
    bl_locs = _first_locations(
        (red(a + b), ("BL", t, j))
        for t, a in enumerate(table.alpha_s, 1)
        for j, b in enumerate(table.beta_p, 1)
    )
    br_locs = _first_locations(
        (red(a + b), ("BR", t1, t2))
        for t1, a in enumerate(table.alpha_s, 1)
        for t2, b in enumerate(table.beta_s, 1)
    )
    ii_b = _disjointness(u_locs, tr_locs)
    ii_c = _disjointness(u_locs, bl_locs)
    ii_d = _disjointness(u_locs, br_locs)

    # II e: off-antidiagonal cells of every block (own block included).
    tilde_entries = []
    for k in range(1, K + 1):
        ab = table.alpha_block(k)
        for l in range(1, L + 1):
            bb = table.beta_block(l)
            for i in range(1, M + 1):
                for j in range(1, M + 1):
                    if i + j != M + 1:
                        tilde_entries.append((red(ab[i - 1] + bb[j - 1]), ("TL", k, l, i, j)))
    ii_e = _disjointness(u_locs, _first_locations(tilde_entries))

    # III: distinctness within each concatenated vector.
    iii_hits = []
    for tag, vec in (("alpha", table.alpha_cat), ("beta", table.beta_cat)):
        seen: dict[int, int] = {}
        for i, v in enumerate(vec, 1):
            if v in seen:
                iii_hits.append(Witness(v, (tag, seen[v]), (tag, i)))
            else:
                seen[v] = i
    iii = _PASS if not iii_hits else PropertyStatus(FAIL, witness=_min_witness(iii_hits))

    iv = check_condition_iv(table, mode=iv_mode, seed=seed)

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


def cyclic_common_difference(vec: Sequence[int], q: Optional[int]) -> Optional[int]:
    """Constant difference of vec (mod q when given), or None if not constant.

    Length-1 vectors count as progressions with difference 1, so a single
    mask term never blocks the coprimality clause.
    """
    if len(vec) == 0:
        raise ValueError("empty vector")
    if len(vec) == 1:
        return 1
    diffs = [vec[i + 1] - vec[i] for i in range(len(vec) - 1)]
    if q is not None:
        diffs = [d % q for d in diffs]
    return diffs[0] if all(d == diffs[0] for d in diffs) else None


def sorted_exponents(table: DegreeTable) -> list[int]:
    """The distinct table entries in increasing order (the decoder's exponent list)."""
    red = table.reduce
    return sorted({red(v) for v in oplus(table.alpha_cat, table.beta_cat)})


def _mask_submatrices_ok(
    rho: Sequence[int], table: DegreeTable, spec: ffield.FieldSpec, rng: random.Random
) -> bool:
    """All T x T submatrices of both mask Vandermonde matrices invertible.

    Exhaustive over row subsets up to the policy limit, seeded random samples
    beyond it.
    """
    T, p = table.params.t, spec.p
    rows_a = [[pow(r, e, p) for e in table.alpha_s] for r in rho]
    rows_b = [[pow(r, e, p) for e in table.beta_s] for r in rho]
    n = len(rho)
    total = math.comb(n, T)
    if total <= EXHAUSTIVE_SUBSET_LIMIT:
        subsets = combinations(range(n), T)
    else:
        subsets = (tuple(sorted(rng.sample(range(n), T))) for _ in range(RANDOM_SUBSET_SAMPLES))
    for sub in subsets:
        if not ffield.rows_nonsingular([rows_a[i] for i in sub], p):
            return False
        if not ffield.rows_nonsingular([rows_b[i] for i in sub], p):
            return False
    return True


def check_condition_iv(
    table: DegreeTable,
    mode: str = "sufficient",
    seed: int = 0,
    min_p: int = 2,
) -> PropertyStatus:
    """Invertibility condition for cyclic tables.

    Plain tables pass outright: over a large enough field, generic evaluation
    points exist. In "sufficient" mode a cyclic table passes when property III
    holds and both mask vectors are arithmetic progressions (mod q) with
    common differences coprime to q; anything else is inconclusive, since the
    condition is existential. "constructive" mode searches actual roots of
    unity: the contiguous window omega^0..omega^(N-1) first, then seeded
    random N-subsets, returning the witness points on success.
    """
    if table.q is None:
        return PropertyStatus(PASS, note="plain table: generic evaluation points")
    if mode not in ("sufficient", "constructive"):
        raise ValueError(f"unknown mode {mode!r}")
    q = table.q

    if mode == "sufficient":
        if len(set(table.alpha_cat)) != len(table.alpha_cat) or len(
            set(table.beta_cat)
        ) != len(table.beta_cat):
            return PropertyStatus(INCONCLUSIVE, note="property III fails")
        for name, vec in (("alpha_s", table.alpha_s), ("beta_s", table.beta_s)):
            d = cyclic_common_difference(vec, q)
            if d is None:
                return PropertyStatus(
                    INCONCLUSIVE, note=f"{name} is not an arithmetic progression mod q"
                )
            if math.gcd(d, q) != 1:
                return PropertyStatus(
                    INCONCLUSIVE, note=f"{name} difference {d} shares a factor with q={q}"
                )
        return PropertyStatus(PASS, note="mask vectors are progressions coprime to q")

    n = worker_count(table)
    gamma = sorted_exponents(table)
    spec = ffield.find_field(q, min_p)
    roots = spec.roots_of_unity()
    rng = random.Random(seed)

    def admissible(rho: list[int]) -> bool:
        v = ffield.vandermonde(rho, gamma, spec)
        try:
            if not ffield.is_invertible(v):
                return False
        except ValueError:
            return False
        return _mask_submatrices_ok(rho, table, spec, rng)

    window = roots[:n]
    if admissible(window):
        return PropertyStatus(PASS, witness=RootsWitness(spec, tuple(window)))
    for _ in range(RANDOM_ROOT_SUBSETS):
        rho = sorted(rng.sample(roots, n))
        if admissible(rho):
            return PropertyStatus(PASS, witness=RootsWitness(spec, tuple(rho)))
    return PropertyStatus(INCONCLUSIVE, note="no admissible root subset found within policy")


# --------------------------------------------------------------------------
# File format

_DOC_FIELDS = ("k", "m", "l", "t", "q", "alpha_p", "beta_p", "alpha_s", "beta_s")


def save_table(table: DegreeTable) -> dict:
    """Table as a JSON-ready document with the canonical key order."""
    return {
        "k": table.params.k,
        "m": table.params.m,
        "l": table.params.l,
        "t": table.params.t,
        "q": table.q,
        "alpha_p": list(table.alpha_p),
        "beta_p": list(table.beta_p),
        "alpha_s": list(table.alpha_s),
        "beta_s": list(table.beta_s),
    }


def load_table(doc: dict) -> DegreeTable:
    if not isinstance(doc, dict):
        raise SchemaError("document", "expected a JSON object")
    for name in _DOC_FIELDS:
        if name not in doc:
            raise SchemaError(name, "missing")
    for name in doc:
        if name not in _DOC_FIELDS:
            raise SchemaError(name, "unexpected field")
    for name in ("k", "m", "l", "t"):
        if not isinstance(doc[name], int) or isinstance(doc[name], bool):
            raise SchemaError(name, "expected an integer")
    q = doc["q"]
    if q is not None and (not isinstance(q, int) or isinstance(q, bool)):
        raise SchemaError("q", "expected an integer or null")
    for name in ("alpha_p", "beta_p", "alpha_s", "beta_s"):
        vec = doc[name]
        if not isinstance(vec, list) or any(
            not isinstance(v, int) or isinstance(v, bool) for v in vec
        ):
            raise SchemaError(name, "expected an array of integers")
    params = TableParams(doc["k"], doc["m"], doc["l"], doc["t"])
    return DegreeTable(
        params=params,
        alpha_p=tuple(doc["alpha_p"]),
        beta_p=tuple(doc["beta_p"]),
        alpha_s=tuple(doc["alpha_s"]),
        beta_s=tuple(doc["beta_s"]),
        q=q,
    )


def dumps_table(table: DegreeTable) -> str:
    """Canonical byte-exact text form: fixed key order, no extra whitespace."""
    return json.dumps(save_table(table), separators=(",", ":")) + "\n"


def loads_table(text: str) -> DegreeTable:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("document", f"not valid JSON ({exc.msg})") from exc
    return load_table(doc)


def read_table_file(path) -> DegreeTable:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_table(fh.read())


def write_table_file(table: DegreeTable, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dumps_table(table))
