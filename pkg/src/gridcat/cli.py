"""Command-line interface.

Thin client over the library: each subcommand parses flags, moves table
files and CSV in and out, and delegates to the same functions the HTTP
service exposes. Exit codes: 0 success, 1 semantic failure (validation,
decode, or audit), 2 malformed input (schema, preconditions, usage).

The default seed comes from --seed, then the GRIDCAT_SEED environment
variable, then 0, so every run is reproducible.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import construction, extension, protocol, search, tables
from .errors import (
    FieldSearchError,
    GridcatError,
    InvalidTableError,
    PointsNotFoundError,
    PreconditionError,
    SchemaError,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_BAD_INPUT = 2


def _default_seed(value: Optional[int]) -> int:
    if value is not None:
        return value
    env = os.environ.get("GRIDCAT_SEED")
    return int(env) if env else 0


def _parse_range(text: str) -> tuple[int, int]:
    """Accept "a..b" or a single "a"."""
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
    else:
        lo = hi = int(text)
    if lo < 1 or hi < lo:
        raise PreconditionError(f"malformed range {text!r}")
    return lo, hi


def _print_validation(report: tables.ValidationReport, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report.to_doc()))
        return
    print(f"N={report.n}")
    for name, status in report.named().items():
        line = f"property {name}: {status.status}"
        if status.witness is not None and isinstance(status.witness, tables.Witness):
            w = status.witness
            line += f" (entry {w.value} at {list(w.first)} and {list(w.second)})"
        elif status.note:
            line += f" ({status.note})"
        print(line)


def cmd_validate(args) -> int:
    table = tables.read_table_file(args.table)
    report = tables.validate(table)
    _print_validation(report, args.json)
    return EXIT_OK if report.ok else EXIT_FAILURE


def cmd_construct(args) -> int:
    if args.scheme != "grid-cat":
        raise PreconditionError(f"unknown scheme {args.scheme!r}")
    params = construction.grid_cat_params(args.k, args.m, args.l, args.t)
    table = construction.build_grid_cat(args.k, args.m, args.l, args.t)
    report = tables.validate(table)
    bound = construction.theorem2_bound(params)
    print(f"x={params.x} z={params.z} y={params.y} q={params.q} n={report.n} bound={bound}")
    if args.out:
        tables.write_table_file(table, args.out)
    return EXIT_OK if report.ok else EXIT_FAILURE


def cmd_extend(args) -> int:
    source = tables.read_table_file(args.table)
    extended = extension.extend(source, args.grid_m, args.mode)
    bounds = extension.check_theorem1_bounds(source, extended, args.mode)
    source_ok = tables.validate(source).ok
    extended_ok = tables.validate(extended).ok
    print(
        f"mode={bounds.mode} grid_m={bounds.grid_m} n_prime={bounds.n_prime} "
        f"n={bounds.n} lower={bounds.lower_bound} upper={bounds.upper_bound} "
        f"zeta={bounds.zeta} source_valid={str(source_ok).lower()} "
        f"extended_valid={str(extended_ok).lower()}"
    )
    if args.out:
        tables.write_table_file(extended, args.out)
    return EXIT_OK if source_ok and extended_ok and bounds.within_bounds else EXIT_FAILURE


def cmd_simulate(args) -> int:
    seed = _default_seed(args.seed)
    try:
        if args.table:
            report = protocol.end_to_end(
                "table-file",
                table=tables.read_table_file(args.table),
                block_size=args.block_size,
                seed=seed,
                min_field=args.min_field,
                audit_policy=args.audit,
            )
        elif args.scheme == "grid-cat":
            if None in (args.k, args.m, args.l, args.t):
                raise PreconditionError("--scheme grid-cat requires --k --m --l --t")
            report = protocol.end_to_end(
                "construction1",
                k=args.k,
                m=args.m,
                l=args.l,
                t=args.t,
                block_size=args.block_size,
                seed=seed,
                min_field=args.min_field,
                audit_policy=args.audit,
            )
        else:
            raise PreconditionError("provide --table PATH or --scheme grid-cat")
    except InvalidTableError as exc:
        print(json.dumps({"error": "invalid table", "validation": exc.report.to_doc()}))
        return EXIT_FAILURE
    except PointsNotFoundError as exc:
        print(json.dumps({"error": str(exc)}))
        return EXIT_FAILURE
    print(json.dumps(report.to_doc()))
    return EXIT_OK if report.ok else EXIT_FAILURE


def _parse_schemes(text: str) -> list[search.SchemeSpec]:
    """Comma-separated tokens: construction1 | <mode>=<table path> | none."""
    if text.strip() == "none":
        return []
    specs: list[search.SchemeSpec] = []
    for token in text.split(","):
        token = token.strip()
        if token == "construction1":
            specs.append(search.Construction1Scheme())
        elif "=" in token:
            mode, path = token.split("=", 1)
            if mode not in extension.MODES:
                raise PreconditionError(
                    f"unknown extension mode {mode!r}; known modes: {', '.join(extension.MODES)}"
                )
            specs.append(
                search.ExtensionScheme(mode=mode, table=tables.read_table_file(path), label=token)
            )
        else:
            raise PreconditionError(
                f"unknown scheme {token!r}: schemes from the literature are not bundled; "
                "supply their tables as files via <mode>=<path>"
            )
    return specs


def cmd_sweep(args) -> int:
    schemes = _parse_schemes(args.schemes)
    rows = search.sweep(
        _parse_range(args.k),
        _parse_range(args.m),
        _parse_range(args.l),
        _parse_range(args.t),
        schemes,
    )
    csv_text = search.sweep_to_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8", newline="") as fh:
            fh.write(render_sweep_svg(rows))
    return EXIT_OK


def cmd_search(args) -> int:
    q_candidates = None
    if args.q:
        q_candidates = tuple(int(v) for v in args.q.split(","))
    budget = search.SearchBudget(
        max_exponent=args.max_exponent,
        q_candidates=q_candidates,
        node_limit=args.node_limit,
    )
    outcome = search.search_min_table(args.k, args.m, args.l, args.t, budget)
    if outcome.table is None:
        print(f"no valid table found (complete={str(outcome.complete).lower()}, nodes={outcome.nodes})")
        return EXIT_OK
    print(f"n={outcome.n} complete={str(outcome.complete).lower()} nodes={outcome.nodes}")
    print(tables.dumps_table(outcome.table), end="")
    if args.out:
        tables.write_table_file(outcome.table, args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# SVG map of the sweep (self-contained emitter, no plotting dependency)

_PALETTE = ("#4c72b0", "#dd8452", "#55a05a", "#c44e52", "#8172b3", "#937860", "#da8bc3")
_CELL = 26
_MARGIN = 60


def render_sweep_svg(rows: list[search.SweepRow]) -> str:
    """Best-scheme map over the square slice K = L at the largest swept T.

    One cell per (M, K); the fill marks the scheme with the fewest workers
    among valid rows. The legend states explicitly that schemes from the
    literature are absent from the comparison.
    """
    square = [r for r in rows if r.k == r.l and r.valid and r.n is not None]
    t_slice = max((r.t for r in square), default=0)
    square = [r for r in square if r.t == t_slice]
    best: dict[tuple[int, int], search.SweepRow] = {}
    for r in square:
        key = (r.m, r.k)
        if key not in best or r.n < best[key].n:
            best[key] = r
    labels: list[str] = []
    for r in sorted(square, key=lambda r: (r.m, r.k, r.scheme)):
        if r.scheme not in labels:
            labels.append(r.scheme)
    color = {lab: _PALETTE[i % len(_PALETTE)] for i, lab in enumerate(labels)}

    ms = sorted({m for m, _ in best}) or [0]
    ks = sorted({k for _, k in best}) or [0]
    width = _MARGIN + _CELL * (len(ms) + 1) + 240
    height = _MARGIN + _CELL * (len(ks) + 1) + 40 + 18 * (len(labels) + 1)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<text x="{_MARGIN}" y="20" font-size="13">Fewest-worker scheme per (M, K=L) '
        f"at T={t_slice}</text>",
    ]
    for (m, k), row in sorted(best.items()):
        x = _MARGIN + _CELL * ms.index(m)
        y = _MARGIN + _CELL * ks.index(k)
        parts.append(
            f'<rect x="{x}" y="{y}" width="{_CELL - 2}" height="{_CELL - 2}" '
            f'fill="{color[row.scheme]}"><title>K=L={k} M={m} T={t_slice}: '
            f"{row.scheme}, n={row.n}</title></rect>"
        )
    for i, m in enumerate(ms):
        parts.append(
            f'<text x="{_MARGIN + _CELL * i + 4}" y="{_MARGIN - 8}" font-size="10">{m}</text>'
        )
    for i, k in enumerate(ks):
        parts.append(
            f'<text x="{_MARGIN - 20}" y="{_MARGIN + _CELL * i + 16}" font-size="10">{k}</text>'
        )
    legend_y = _MARGIN + _CELL * (len(ks) + 1) + 20
    for i, lab in enumerate(labels):
        y = legend_y + 18 * i
        parts.append(f'<rect x="{_MARGIN}" y="{y}" width="12" height="12" fill="{color[lab]}"/>')
        parts.append(f'<text x="{_MARGIN + 18}" y="{y + 10}" font-size="11">{lab}</text>')
    parts.append(
        f'<text x="{_MARGIN}" y="{legend_y + 18 * len(labels) + 14}" font-size="10">'
        "Note: schemes from the wider literature are not included in this comparison."
        "</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridcat",
        description="Degree tables for private distributed matrix multiplication "
        "under the grid partition.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a table file against the validity properties")
    p.add_argument("table")
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("construct", help="build a table from the grid-cat family")
    p.add_argument("--scheme", default="grid-cat")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--out", help="write the table file here")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("extend", help="lift an OPP table file to the grid partition")
    p.add_argument("--mode", required=True, choices=extension.MODES)
    p.add_argument("--grid-m", type=int, required=True, dest="grid_m")
    p.add_argument("table")
    p.add_argument("--out", help="write the extended table file here")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("simulate", help="run the full protocol once and report")
    p.add_argument("--table", help="table file to simulate")
    p.add_argument("--scheme", help="grid-cat (requires --k --m --l --t)")
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--block-size", type=int, default=2, dest="block_size")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--min-field", type=int, default=protocol.DEFAULT_MIN_FIELD, dest="min_field")
    p.add_argument("--audit", default="auto", choices=("auto", "exhaustive", "sample"))
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="tabulate worker counts over parameter ranges")
    p.add_argument("--k", required=True, help="range a..b (or a single value)")
    p.add_argument("--m", required=True)
    p.add_argument("--l", required=True)
    p.add_argument("--t", required=True)
    p.add_argument(
        "--schemes",
        required=True,
        help="comma-separated: construction1 | <mode>=<table path> | none",
    )
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.add_argument("--svg", help="also render a best-scheme map to this SVG file")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("search", help="exhaustively search for a minimum-worker table")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--max-exponent", type=int, required=True, dest="max_exponent")
    p.add_argument("--q", help="comma-separated cyclic moduli to try")
    p.add_argument("--node-limit", type=int, default=10**6, dest="node_limit")
    p.add_argument("--out", help="write the best table file here")
    p.set_defaults(func=cmd_search)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, PreconditionError, FieldSearchError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except GridcatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
