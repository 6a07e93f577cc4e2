"""CLI subcommands, exit codes, and byte-identical outputs."""

import json

import pytest

from gridcat import cli, tables


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidateCommand:
    def test_golden_passes(self, fig2a_path, capsys):
        code, out, _ = run(["validate", str(fig2a_path)], capsys)
        assert code == 0
        assert "N=29" in out

    def test_json_report(self, fig2a_path, capsys):
        code, out, _ = run(["validate", str(fig2a_path), "--json"], capsys)
        assert code == 0
        assert json.loads(out)["n"] == 29

    def test_corrupted_file_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.table"
        bad.write_text("{broken")
        code, _, err = run(["validate", str(bad)], capsys)
        assert code == 2
        assert "error" in err

    def test_validation_failure_exits_1(self, fig2a, tmp_path, capsys):
        doc = tables.save_table(fig2a)
        doc["alpha_s"] = [6, 6]
        path = tmp_path / "dup.table"
        path.write_text(json.dumps(doc))
        code, out, _ = run(["validate", str(path)], capsys)
        assert code == 1
        assert "property III: fail" in out
        assert "entry 6" in out


class TestConstructCommand:
    def test_reference_line(self, tmp_path, capsys):
        out_path = tmp_path / "c.table"
        code, out, _ = run(
            ["construct", "--k", "2", "--m", "4", "--l", "2", "--t", "5", "--out", str(out_path)],
            capsys,
        )
        assert code == 0
        assert "x=5 z=3 y=15 q=29" in out
        table = tables.read_table_file(out_path)
        assert table.q == 29

    def test_second_reference(self, capsys):
        code, out, _ = run(["construct", "--k", "2", "--m", "3", "--l", "2", "--t", "2"], capsys)
        assert code == 0
        assert "q=23" in out

    def test_domain_error_exits_2(self, capsys):
        code, _, err = run(["construct", "--k", "1", "--m", "1", "--l", "1", "--t", "1"], capsys)
        assert code == 2
        assert "M >= 2" in err


class TestExtendCommand:
    def test_reproduces_fig2b_byte_identically(self, fig2a_path, fig2b_path, tmp_path, capsys):
        out_path = tmp_path / "fig2b.table"
        code, out, _ = run(
            ["extend", "--mode", "cat-cat", "--grid-m", "3", str(fig2a_path), "--out", str(out_path)],
            capsys,
        )
        assert code == 0
        assert out_path.read_bytes() == fig2b_path.read_bytes()
        assert "n_prime=29" in out and "n=29" in out

    def test_dt_cat_line(self, tmp_path, capsys):
        src = tmp_path / "tiny.table"
        src.write_text(
            '{"k":2,"m":1,"l":1,"t":1,"q":null,"alpha_p":[0,1],"beta_p":[0],"alpha_s":[2],"beta_s":[3]}\n'
        )
        code, out, _ = run(["extend", "--mode", "dt-cat", "--grid-m", "2", str(src)], capsys)
        assert code == 0
        assert "n_prime=6" in out and "n=5" in out

    def test_indivisible_exits_2(self, fig2a_path, capsys):
        code, _, err = run(
            ["extend", "--mode", "cat-cat", "--grid-m", "4", str(fig2a_path)], capsys
        )
        assert code == 2
        assert "not divisible" in err


class TestSimulateCommand:
    def test_fig2b(self, fig2b_path, capsys):
        code, out, _ = run(
            ["simulate", "--table", str(fig2b_path), "--block-size", "2", "--seed", "7",
             "--min-field", "2"],
            capsys,
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["decode_ok"] is True
        assert doc["p"] == 59 and doc["n"] == 29
        assert doc["audit_checked"] == doc["audit_passed"] == 406

    def test_scheme_flags(self, capsys):
        code, out, _ = run(
            ["simulate", "--scheme", "grid-cat", "--k", "2", "--m", "3", "--l", "2", "--t", "2",
             "--seed", "7"],
            capsys,
        )
        assert code == 0
        assert json.loads(out)["decode_ok"] is True

    def test_invalid_table_exits_1(self, fig2a, tmp_path, capsys):
        doc = tables.save_table(fig2a)
        doc["alpha_s"] = [6, 6]
        path = tmp_path / "dup.table"
        path.write_text(json.dumps(doc))
        code, out, _ = run(["simulate", "--table", str(path)], capsys)
        assert code == 1
        assert json.loads(out)["error"] == "invalid table"

    def test_seed_env_fallback(self, fig2b_path, capsys, monkeypatch):
        monkeypatch.setenv("GRIDCAT_SEED", "7")
        code, out, _ = run(
            ["simulate", "--table", str(fig2b_path), "--min-field", "2"], capsys
        )
        assert code == 0
        assert json.loads(out)["seed"] == 7


class TestSweepCommand:
    def test_reference_point(self, tmp_path, capsys):
        out_path = tmp_path / "sweep.csv"
        code, _, _ = run(
            ["sweep", "--k", "2..3", "--m", "2..3", "--l", "2..3", "--t", "2..3",
             "--schemes", "construction1", "--out", str(out_path)],
            capsys,
        )
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[0] == "k,m,l,t,scheme,n,valid,bound"
        assert len(lines) == 1 + 16

    def test_byte_identical_reruns(self, tmp_path, capsys):
        args = ["sweep", "--k", "2..3", "--m", "2..3", "--l", "2", "--t", "2",
                "--schemes", "construction1"]
        _, out1, _ = run(args, capsys)
        _, out2, _ = run(args, capsys)
        assert out1 == out2

    def test_single_point_range(self, capsys):
        code, out, _ = run(
            ["sweep", "--k", "2", "--m", "4", "--l", "2", "--t", "5",
             "--schemes", "construction1"],
            capsys,
        )
        assert code == 0
        assert len(out.splitlines()) == 2

    def test_schemes_none_gives_header_only(self, capsys):
        code, out, _ = run(
            ["sweep", "--k", "2..4", "--m", "2..4", "--l", "2", "--t", "2",
             "--schemes", "none"],
            capsys,
        )
        assert code == 0
        assert out == "k,m,l,t,scheme,n,valid,bound\n"

    def test_literature_scheme_rejected(self, capsys):
        code, _, err = run(
            ["sweep", "--k", "2", "--m", "2", "--l", "2", "--t", "2", "--schemes", "gasp"],
            capsys,
        )
        assert code == 2
        assert "supply their tables as files" in err

    def test_extension_scheme_from_file(self, fig2a_path, capsys):
        code, out, _ = run(
            ["sweep", "--k", "2", "--m", "3", "--l", "3", "--t", "2",
             "--schemes", f"cat-cat={fig2a_path}"],
            capsys,
        )
        assert code == 0
        row = out.splitlines()[1]
        assert row.endswith(",29,true,")

    def test_svg_output(self, tmp_path, capsys):
        svg_path = tmp_path / "map.svg"
        code, _, _ = run(
            ["sweep", "--k", "2..4", "--m", "2..4", "--l", "2..4", "--t", "3",
             "--schemes", "construction1", "--out", str(tmp_path / "s.csv"),
             "--svg", str(svg_path)],
            capsys,
        )
        assert code == 0
        text = svg_path.read_text()
        assert text.startswith("<svg")
        assert "not included" in text

    def test_malformed_range_exits_2(self, capsys):
        code, _, _ = run(
            ["sweep", "--k", "3..2", "--m", "2", "--l", "2", "--t", "2",
             "--schemes", "construction1"],
            capsys,
        )
        assert code == 2


class TestSearchCommand:
    def test_tiny(self, tmp_path, capsys):
        out_path = tmp_path / "best.table"
        code, out, _ = run(
            ["search", "--k", "2", "--m", "1", "--l", "1", "--t", "1",
             "--max-exponent", "6", "--out", str(out_path)],
            capsys,
        )
        assert code == 0
        assert "n=5" in out and "complete=true" in out
        assert tables.read_table_file(out_path).params.k == 2

    def test_budget_flag_reported(self, capsys):
        code, out, _ = run(
            ["search", "--k", "1", "--m", "1", "--l", "1", "--t", "1",
             "--max-exponent", "6", "--node-limit", "1"],
            capsys,
        )
        assert code == 0
        assert "complete=false" in out


class TestRoundTrips:
    def test_construct_output_roundtrips(self, tmp_path, capsys):
        out_path = tmp_path / "c.table"
        run(["construct", "--k", "3", "--m", "2", "--l", "2", "--t", "2",
             "--out", str(out_path)], capsys)
        table = tables.read_table_file(out_path)
        assert tables.dumps_table(table) == out_path.read_text()

    def test_extend_grid_m_1_is_identity(self, fig2a_path, tmp_path, capsys):
        out_path = tmp_path / "same.table"
        code, _, _ = run(
            ["extend", "--mode", "cat-cat", "--grid-m", "1", str(fig2a_path),
             "--out", str(out_path)],
            capsys,
        )
        assert code == 0
        assert out_path.read_bytes() == fig2a_path.read_bytes()
