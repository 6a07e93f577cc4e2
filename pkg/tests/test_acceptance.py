"""Acceptance suite: one test per exit criterion, one printed verdict line each.

Every tolerance here is zero: field arithmetic is exact, set identities are
exact, and worker counts are integers. The only non-exact budgets are the
stated wall-clock limits, asserted directly.

Run with `pytest tests/test_acceptance.py -s` to see the verdict lines.
"""

import functools
import math
import random
import time

import pytest

from gridcat import construction, extension, ffield, protocol, search, tables

from opp_sources import random_opp_sources
from test_search import mutate_one_degree


def criterion(number, label):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                note = fn(*args, **kwargs)
            except BaseException:
                print(f"\n[acceptance] criterion {number} ({label}): FAIL")
                raise
            line = f"\n[acceptance] criterion {number} ({label}): PASS"
            if note:
                line += f" -- {note}"
            print(line)

        return wrapper

    return deco


# shared by criteria 3 and 4
@pytest.fixture(scope="module")
def theorem2_sweep():
    started = time.perf_counter()
    built = []
    for k in range(2, 9):
        for l in range(2, k + 1):
            for m in range(2, 9):
                for t in range(2, 9):
                    params = construction.grid_cat_params(k, m, l, t)
                    table = construction.build_grid_cat(k, m, l, t)
                    report = tables.validate(table)
                    built.append((params, table, report))
    return built, time.perf_counter() - started


# shared by criteria 5 and 6
@pytest.fixture(scope="module")
def extended_suite():
    sources = random_opp_sources(120, seed=20240811)
    results = []
    for source, modes, grid_m in sources:
        for mode in modes:
            gp = extension.extend(source, grid_m, mode)
            results.append((source, mode, grid_m, gp))
    return results


@criterion(1, "Fig 2 reproduction")
def test_criterion_1(fig2a, fig2b):
    started = time.perf_counter()
    extended = extension.extend_cat_to_cat(fig2a, 3)
    assert extended.beta_p == (0, 1, 2, 22, 23, 24, 15, 16, 17)
    assert extended.q == 29
    assert extended == fig2b
    report_a = tables.validate(fig2a)
    report_b = tables.validate(extended)
    assert report_a.ok and report_b.ok
    assert report_a.n == report_b.n == 29
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    return f"N=29 both tables, {elapsed:.3f}s"


@criterion(2, "Construction parameters at (2,4,2,5)")
def test_criterion_2():
    params = construction.grid_cat_params(2, 4, 2, 5)
    assert (params.x, params.z, params.y, params.q) == (5, 3, 15, 29)
    table = construction.build_grid_cat(2, 4, 2, 5)
    report = tables.validate(table)
    assert report.ok
    assert report.n <= 29
    return f"x=5 z=3 y=15 q=29, N={report.n} <= 29"


@criterion(3, "Theorem 2 bound across 2..8 sweep")
def test_criterion_3(theorem2_sweep):
    built, elapsed = theorem2_sweep
    assert len(built) == 28 * 7 * 7  # (K,L) pairs with K >= L, M, T
    for params, table, report in built:
        bound = params.k * (params.m + 1) * params.z - 1
        assert report.ok, (params.k, params.m, params.l, params.t, report.statuses())
        assert report.n <= bound
        assert construction.theorem2_bound(params) == bound
    assert elapsed < 60.0
    return f"{len(built)} tables validated, {elapsed:.1f}s"


@criterion(4, "Antidiagonal residue facts across the sweep")
def test_criterion_4(theorem2_sweep):
    built, _ = theorem2_sweep
    checked = 0
    for params, table, _ in built:
        for k in range(1, params.k + 1):
            for l in range(1, params.l + 1):
                rep = construction.lemma3_check(params, k, l)
                assert rep.u == (k - 1) * params.y + (l - 1) * params.x + params.m - 1
                assert rep.in_range  # base + mu < q - 1 for all mu in 0..2M-2
                assert rep.mod_x  # u mod x == M - 1
                assert rep.mod_y  # u mod y == (l-1)x + M - 1 (derivation form)
                checked += 1
    return f"{checked} block positions checked"


@criterion(5, "Extension property suite on randomized valid sources")
def test_criterion_5(extended_suite):
    n_sources = len({id(src) for src, _, _, _ in extended_suite})
    assert n_sources >= 100
    modes_seen = set()
    wrapped_fingerprint_misses = 0
    for source, mode, grid_m, gp in extended_suite:
        modes_seen.add(mode)
        assert search.brute_validate(source).ok  # sources confirmed by the oracle
        report = tables.validate(gp)
        assert report.ok, (tables.save_table(source), mode, report.statuses())
        assert extension.check_constant_antidiagonals(gp)
        bounds = extension.check_theorem1_bounds(source, gp, mode)
        assert bounds.within_bounds, (tables.save_table(source), mode, bounds)
        if mode == "dt-cat":
            assert bounds.lower_bound == bounds.n_prime - grid_m + 1
        else:
            assert bounds.lower_bound == bounds.n_prime
        ok2, _ = extension.check_lemma2_constraints(gp)
        if mode in ("dt-dt", "cat-cat"):
            assert ok2, (tables.save_table(source), mode)
        elif not ok2:
            # the new modulus may wrap a mask entry onto an A value; the
            # fingerprint claim is provable only for the plain and
            # modulus-preserving extensions (see decisions ledger)
            wrapped_fingerprint_misses += 1
    assert modes_seen == {"dt-dt", "cat-cat", "dt-cat"}
    return (
        f"{n_sources} sources, {len(extended_suite)} extensions; fingerprint "
        f"asserted on dt-dt/cat-cat, observed-not-asserted on dt-cat "
        f"({wrapped_fingerprint_misses} wrap cases)"
    )


@criterion(6, "Fingerprint separation witness")
def test_criterion_6(extended_suite):
    table = construction.build_grid_cat(2, 4, 2, 5)
    ok, witness = extension.check_lemma2_constraints(table)
    assert not ok
    assert witness.value == 0
    assert witness.block == (1, 1)
    assert witness.other == "TR"
    checked = 0
    for _, mode, _, gp in extended_suite:
        if mode in ("dt-dt", "cat-cat"):
            ok2, w = extension.check_lemma2_constraints(gp)
            assert ok2, w
            checked += 1
    return f"witness 0 in A[1][1] and TR; {checked} extended tables satisfy the fingerprint"


@criterion(7, "Exact end-to-end protocol with exhaustive audit")
def test_criterion_7(fig2b):
    started = time.perf_counter()
    report = protocol.end_to_end(
        "table-file", table=fig2b, block_size=2, seed=7, min_field=2, audit_policy="exhaustive"
    )
    elapsed_1 = time.perf_counter() - started
    assert report.field.p == 59
    assert report.decode_ok and report.product_check
    assert report.audit.checked == math.comb(29, 2)
    assert report.audit.all_passed
    assert elapsed_1 < 10.0

    # independent oracle for the expected prime: linear scan with naive primality
    def naive_prime(n):
        if n < 2:
            return False
        d = 2
        while d * d <= n:
            if n % d == 0:
                return False
            d += 1
        return True

    expected_p = 2**20 + 1
    while not (expected_p % 29 == 1 and naive_prime(expected_p)):
        expected_p += 1

    started = time.perf_counter()
    report2 = protocol.end_to_end(
        "construction1", k=2, m=4, l=2, t=5, block_size=2, seed=7, audit_policy="exhaustive"
    )
    elapsed_2 = time.perf_counter() - started
    assert report2.field.p == expected_p
    assert report2.decode_ok and report2.product_check
    assert report2.audit.checked == math.comb(29, 5)
    assert report2.audit.all_passed
    assert elapsed_2 < 10.0
    return (
        f"fig2b {elapsed_1:.2f}s (406 subsets), construction p={expected_p} "
        f"{elapsed_2:.2f}s (118755 subsets)"
    )


@criterion(8, "Validator equals brute-force oracle on 1000 mutations")
def test_criterion_8(fig2a, fig2b):
    for golden in (fig2a, fig2b):
        fast, slow = tables.validate(golden), search.brute_validate(golden)
        assert fast.statuses() == slow.statuses()
        assert fast.n == slow.n
    rng = random.Random(188211)
    agreements = 0
    for _ in range(1000):
        mutated = mutate_one_degree(rng.choice([fig2a, fig2b]), rng)
        fast, slow = tables.validate(mutated), search.brute_validate(mutated)
        assert fast.statuses() == slow.statuses(), tables.save_table(mutated)
        assert fast.n == slow.n
        agreements += 1
    return f"goldens + {agreements} seeded mutations agree"


@criterion(9, "Out-of-scale disclosure: no literature schemes generated")
def test_criterion_9(fig2a, fig2a_path, capsys):
    # the sweep offers exactly two scheme kinds: the built-in construction and
    # extensions of user-supplied table files
    from gridcat.cli import _parse_schemes
    from gridcat.errors import PreconditionError

    for name in ("gasp", "dog_rs", "cat_x", "a3s", "bgk", "rou", "mp", "ggasp", "sgpd"):
        with pytest.raises(PreconditionError, match="supply their tables as files"):
            _parse_schemes(name)

    # user-supplied tables are first-class: the golden OPP file drives a sweep row
    spec = search.ExtensionScheme(mode="cat-cat", table=fig2a, label=f"cat-cat={fig2a_path.name}")
    rows = search.sweep((2, 2), (3, 3), (3, 3), (2, 2), [spec, search.Construction1Scheme()])
    assert rows[0].valid and rows[0].n == 29
    assert rows[1].scheme == "construction1"
    return (
        "best-count table over 19^4 literature instances is out of reach by design; "
        "user-supplied table files are accepted for any scheme the user encodes"
    )
