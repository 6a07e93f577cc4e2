"""Exact simulation of the private matrix multiplication protocol.

The main node splits A into K x M and B into M x L blocks, hides them in two
polynomials whose data coefficients sit at the table's data exponents and
whose mask coefficients sit at the mask exponents, and hands every worker one
evaluation of each. Workers multiply their two shares; the main node
interpolates the product polynomial from the answers and reads the blocks of
A@B off the antidiagonal exponents. Everything runs over F_p, so the decoded
product either equals the schoolbook product exactly or the scheme is broken;
there is no tolerance anywhere.

Worker n's A-share uses exponent alpha_p[(k-1)M + m] for block (k, m). The
B-share pairs block (m, l) with beta_p block l at inner index M - m + 1, the
reversal that makes the antidiagonal of table block (k, l) accumulate
sum_m A[k,m] @ B[m,l]. The schoolbook comparison in the report verifies this
mapping on every run rather than assuming it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from . import ffield
from .errors import (
    InvalidTableError,
    PointsNotFoundError,
    PreconditionError,
    SingularMatrixError,
)
from .ffield import FieldMatrix, FieldSpec
from .tables import DegreeTable, decompose, sorted_exponents, validate, worker_count

DEFAULT_MIN_FIELD = 2**20
POINT_SEARCH_RETRIES = 1000
SELECTION_EXHAUSTIVE_LIMIT = 10**5
SELECTION_SAMPLES = 10**4
AUDIT_EXHAUSTIVE_LIMIT = 200_000
AUDIT_SAMPLES = 10**4
GENERATOR_NAME = "random.Random"


@dataclass
class BlockMatrix:
    """A field matrix with an attached block grid; dimensions must divide."""

    matrix: FieldMatrix
    row_blocks: int
    col_blocks: int

    def __post_init__(self):
        if self.matrix.rows % self.row_blocks != 0:
            raise PreconditionError(
                f"rows={self.matrix.rows} not divisible by row_blocks={self.row_blocks}"
            )
        if self.matrix.cols % self.col_blocks != 0:
            raise PreconditionError(
                f"cols={self.matrix.cols} not divisible by col_blocks={self.col_blocks}"
            )

    @property
    def block_shape(self) -> tuple[int, int]:
        return self.matrix.rows // self.row_blocks, self.matrix.cols // self.col_blocks

    def block(self, i: int, j: int) -> FieldMatrix:
        """Contiguous submatrix at block position (i, j), 0-based."""
        br, bc = self.block_shape
        rows = [row[j * bc : (j + 1) * bc] for row in self.matrix.entries[i * br : (i + 1) * br]]
        return FieldMatrix(self.matrix.p, rows)


def split_matrix(mat: FieldMatrix, row_blocks: int, col_blocks: int) -> BlockMatrix:
    return BlockMatrix(mat, row_blocks, col_blocks)


def _scaled_add(acc: list[list[int]], mat: FieldMatrix, scalar: int, p: int) -> None:
    for i, row in enumerate(mat.entries):
        acc_i = acc[i]
        for j, v in enumerate(row):
            acc_i[j] = (acc_i[j] + v * scalar) % p


def schoolbook_product(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    """Direct triple-loop product; the oracle the decoder is compared against."""
    if a.cols != b.rows:
        raise PreconditionError(f"shape mismatch: {a.rows}x{a.cols} @ {b.rows}x{b.cols}")
    p = a.p
    out = [[0] * b.cols for _ in range(a.rows)]
    for i in range(a.rows):
        for j in range(b.cols):
            s = 0
            for k in range(a.cols):
                s += a.entries[i][k] * b.entries[k][j]
            out[i][j] = s % p
    return FieldMatrix(p, out)


def choose_evaluation_points(
    table: DegreeTable, field: FieldSpec, seed: int = 0
) -> tuple[list[int], list[int]]:
    """Evaluation points rho and the decoder's exponent list gamma.

    Cyclic tables draw rho from the q-th roots of unity: the contiguous
    window of the first N powers, then seeded random N-subsets. Plain tables
    retry seeded random distinct nonzero points. A candidate is accepted when
    the N x N decoding matrix is invertible and the T x T mask submatrix
    audit passes (exhaustive up to the policy limit, sampled beyond it).
    """
    gamma = sorted_exponents(table)
    n = len(gamma)
    rng = random.Random(f"{seed}:points")

    def admissible(rho: list[int]) -> bool:
        if len(set(rho)) != n:
            return False
        if not ffield.is_invertible(ffield.vandermonde(rho, gamma, field)):
            return False
        return _mask_subsets_ok(rho, table, field, rng)

    if table.is_cyclic:
        if field.q != table.q:
            raise PreconditionError(
                f"field cyclic order {field.q} does not match table q={table.q}"
            )
        roots = field.roots_of_unity()
        if n > len(roots):
            raise PointsNotFoundError(f"need {n} distinct roots, only {len(roots)} exist")
        window = roots[:n]
        if admissible(window):
            return window, gamma
        for _ in range(POINT_SEARCH_RETRIES):
            rho = sorted(rng.sample(roots, n))
            if admissible(rho):
                return rho, gamma
        raise PointsNotFoundError("no admissible root-of-unity subset within policy")

    if field.p <= n + 1:
        raise PointsNotFoundError(f"field too small: need {n} distinct nonzero points")
    for _ in range(POINT_SEARCH_RETRIES):
        rho = sorted(rng.sample(range(1, field.p), n))
        if admissible(rho):
            return rho, gamma
    raise PointsNotFoundError("no admissible evaluation points within policy")


def _mask_subsets_ok(
    rho: Sequence[int], table: DegreeTable, field: FieldSpec, rng: random.Random
) -> bool:
    t, p = table.params.t, field.p
    rows_a = [[pow(r, e, p) for e in table.alpha_s] for r in rho]
    rows_b = [[pow(r, e, p) for e in table.beta_s] for r in rho]
    total = math.comb(len(rho), t)
    if total <= SELECTION_EXHAUSTIVE_LIMIT:
        subsets = combinations(range(len(rho)), t)
    else:
        subsets = (
            tuple(sorted(rng.sample(range(len(rho)), t))) for _ in range(SELECTION_SAMPLES)
        )
    for sub in subsets:
        if not ffield.rows_nonsingular([rows_a[i] for i in sub], p):
            return False
        if not ffield.rows_nonsingular([rows_b[i] for i in sub], p):
            return False
    return True


@dataclass
class EncodingState:
    """Everything the encoder produced for one run."""

    table: DegreeTable
    field: FieldSpec
    rho: list[int]
    gamma: list[int]
    r_masks: list[FieldMatrix]
    s_masks: list[FieldMatrix]
    shares_f: list[FieldMatrix]
    shares_g: list[FieldMatrix]
    seed: int
    generator: str = GENERATOR_NAME


def encode_shares(
    a: BlockMatrix, b: BlockMatrix, table: DegreeTable, field: FieldSpec, seed: int = 0
) -> EncodingState:
    """Evaluate both encoding polynomials at every worker's point.

    Masks are drawn from a generator seeded with "{seed}:masks" so the mask
    stream never overlaps a data stream seeded from the same run seed.
    """
    k, m, l, t = table.params.k, table.params.m, table.params.l, table.params.t
    if (a.row_blocks, a.col_blocks) != (k, m):
        raise PreconditionError(
            f"A grid {(a.row_blocks, a.col_blocks)} does not match (K, M)=({k}, {m})"
        )
    if (b.row_blocks, b.col_blocks) != (m, l):
        raise PreconditionError(
            f"B grid {(b.row_blocks, b.col_blocks)} does not match (M, L)=({m}, {l})"
        )
    if a.block_shape[1] != b.block_shape[0]:
        raise PreconditionError("A and B blocks are not conformable")
    p = field.p
    rho, gamma = choose_evaluation_points(table, field, seed)
    rng = random.Random(f"{seed}:masks")
    ar, ac = a.block_shape
    br, bc = b.block_shape
    r_masks = [
        FieldMatrix(p, [[rng.randrange(p) for _ in range(ac)] for _ in range(ar)])
        for _ in range(t)
    ]
    s_masks = [
        FieldMatrix(p, [[rng.randrange(p) for _ in range(bc)] for _ in range(br)])
        for _ in range(t)
    ]
    a_blocks = [[a.block(i, j) for j in range(m)] for i in range(k)]
    b_blocks = [[b.block(i, j) for j in range(l)] for i in range(m)]
    shares_f, shares_g = [], []
    for point in rho:
        f_acc = [[0] * ac for _ in range(ar)]
        for ki in range(k):
            for mi in range(m):
                _scaled_add(f_acc, a_blocks[ki][mi], pow(point, table.alpha_p[ki * m + mi], p), p)
        for ti in range(t):
            _scaled_add(f_acc, r_masks[ti], pow(point, table.alpha_s[ti], p), p)
        shares_f.append(FieldMatrix(p, f_acc))
        g_acc = [[0] * bc for _ in range(br)]
        for mi in range(m):
            for li in range(l):
                exp = table.beta_p[li * m + (m - 1 - mi)]
                _scaled_add(g_acc, b_blocks[mi][li], pow(point, exp, p), p)
        for ti in range(t):
            _scaled_add(g_acc, s_masks[ti], pow(point, table.beta_s[ti], p), p)
        shares_g.append(FieldMatrix(p, g_acc))
    return EncodingState(
        table=table,
        field=field,
        rho=rho,
        gamma=gamma,
        r_masks=r_masks,
        s_masks=s_masks,
        shares_f=shares_f,
        shares_g=shares_g,
        seed=seed,
    )


def worker_compute(share_f: FieldMatrix, share_g: FieldMatrix) -> FieldMatrix:
    """One worker's answer: the product of its two shares."""
    return ffield.matmul(share_f, share_g)


def decode(
    answers: Sequence[FieldMatrix],
    rho: Sequence[int],
    gamma: Sequence[int],
    table: DegreeTable,
    field: FieldSpec,
) -> BlockMatrix:
    """Interpolate the product polynomial and assemble A@B.

    Solves the N x N Vandermonde system entrywise, then reads block (k, l)
    as the sum of the coefficients at that block's antidiagonal exponents
    (a single exponent for constant-antidiagonal tables).
    """
    n = len(gamma)
    if len(answers) != n:
        raise PreconditionError(f"expected {n} answers, got {len(answers)}")
    p = field.p
    rows_ab, cols_ab = answers[0].rows, answers[0].cols
    vmat = ffield.vandermonde(rho, gamma, field)
    rhs = FieldMatrix(
        p, [[ans.entries[i][j] for i in range(rows_ab) for j in range(cols_ab)] for ans in answers]
    )
    coeffs = ffield.solve(vmat, rhs)
    index_of = {g: i for i, g in enumerate(gamma)}
    dec = decompose(table)
    k, l = table.params.k, table.params.l
    out = [[0] * (l * cols_ab) for _ in range(k * rows_ab)]
    for ki in range(k):
        for li in range(l):
            acc = [[0] * cols_ab for _ in range(rows_ab)]
            for u in dec.u[ki][li]:
                row = coeffs.entries[index_of[u]]
                for i in range(rows_ab):
                    for j in range(cols_ab):
                        acc[i][j] = (acc[i][j] + row[i * cols_ab + j]) % p
            for i in range(rows_ab):
                for j in range(cols_ab):
                    out[ki * rows_ab + i][li * cols_ab + j] = acc[i][j]
    return BlockMatrix(FieldMatrix(p, out), k, l)


@dataclass(frozen=True)
class AuditReport:
    """How many worker T-subsets were checked for mask invertibility."""

    checked: int
    passed: int
    policy: str

    @property
    def all_passed(self) -> bool:
        return self.checked == self.passed


def privacy_audit(
    rho: Sequence[int],
    table: DegreeTable,
    field: FieldSpec,
    policy: str = "exhaustive",
    samples: int = AUDIT_SAMPLES,
    seed: int = 0,
) -> AuditReport:
    """Check every audited T-subset of workers against both mask matrices.

    A subset passes when the T x T submatrices of the alpha-mask and
    beta-mask Vandermonde matrices at those workers' points are both
    invertible; this is the checkable side of the privacy requirement.
    """
    t, p = table.params.t, field.p
    rows_a = [[pow(r, e, p) for e in table.alpha_s] for r in rho]
    rows_b = [[pow(r, e, p) for e in table.beta_s] for r in rho]
    n = len(rho)
    if policy == "exhaustive":
        subsets = list(combinations(range(n), t))
    elif policy == "sample":
        rng = random.Random(f"{seed}:audit")
        subsets = [tuple(sorted(rng.sample(range(n), t))) for _ in range(samples)]
    else:
        raise ValueError(f"unknown audit policy {policy!r}")
    passed = 0
    for sub in subsets:
        if ffield.rows_nonsingular([rows_a[i] for i in sub], p) and ffield.rows_nonsingular(
            [rows_b[i] for i in sub], p
        ):
            passed += 1
    return AuditReport(checked=len(subsets), passed=passed, policy=policy)


@dataclass
class SimulationReport:
    """Outcome of a full encode/compute/decode/audit run."""

    n: int
    field: FieldSpec
    seed: int
    decode_ok: bool
    product_check: bool
    audit: AuditReport
    generator: str = GENERATOR_NAME

    @property
    def ok(self) -> bool:
        return self.decode_ok and self.product_check and self.audit.all_passed

    def to_doc(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "p": self.field.p,
            "q": self.field.q if self.field.q is not None and self.field.q > 1 else None,
            "decode_ok": self.decode_ok,
            "audit_checked": self.audit.checked,
            "audit_passed": self.audit.passed,
            "seed": self.seed,
            "generator": self.generator,
        }


def end_to_end(
    scheme: str,
    k: Optional[int] = None,
    m: Optional[int] = None,
    l: Optional[int] = None,
    t: Optional[int] = None,
    table: Optional[DegreeTable] = None,
    block_size: int = 2,
    seed: int = 0,
    min_field: int = DEFAULT_MIN_FIELD,
    audit_policy: str = "auto",
) -> SimulationReport:
    """Build or take a table, validate it, and run the whole protocol once.

    A is K*block_size x M*block_size and B is M*block_size x L*block_size,
    filled from a generator seeded with "{seed}:data". Refuses tables that
    fail validation. The audit is exhaustive up to the policy limit unless
    forced either way.
    """
    if scheme == "construction1":
        if None in (k, m, l, t):
            raise PreconditionError("construction1 requires k, m, l, t")
        from .construction import build_grid_cat

        table = build_grid_cat(k, m, l, t)
    elif scheme == "table-file":
        if table is None:
            raise PreconditionError("table-file scheme requires a table")
    else:
        raise PreconditionError(f"unknown scheme {scheme!r}")

    report = validate(table)
    if not report.ok:
        raise InvalidTableError(report)
    n = report.n

    if table.is_cyclic:
        field = ffield.find_field(table.q, min_field)
    else:
        field = ffield.find_field(1, max(min_field, n + 2))

    params = table.params
    rng = random.Random(f"{seed}:data")
    p = field.p
    a_mat = FieldMatrix(
        p,
        [
            [rng.randrange(p) for _ in range(params.m * block_size)]
            for _ in range(params.k * block_size)
        ],
    )
    b_mat = FieldMatrix(
        p,
        [
            [rng.randrange(p) for _ in range(params.l * block_size)]
            for _ in range(params.m * block_size)
        ],
    )
    a = split_matrix(a_mat, params.k, params.m)
    b = split_matrix(b_mat, params.m, params.l)

    state = encode_shares(a, b, table, field, seed)
    answers = [worker_compute(f, g) for f, g in zip(state.shares_f, state.shares_g)]
    try:
        product = decode(answers, state.rho, state.gamma, table, field)
        decode_ok = True
        product_check = product.matrix == schoolbook_product(a_mat, b_mat)
    except SingularMatrixError:
        decode_ok = False
        product_check = False

    if audit_policy == "auto":
        policy = (
            "exhaustive"
            if math.comb(n, params.t) <= AUDIT_EXHAUSTIVE_LIMIT
            else "sample"
        )
    else:
        policy = audit_policy
    audit = privacy_audit(state.rho, table, field, policy=policy, seed=seed)

    return SimulationReport(
        n=n,
        field=field,
        seed=seed,
        decode_ok=decode_ok,
        product_check=product_check,
        audit=audit,
    )
