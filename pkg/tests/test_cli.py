"""Command-line behaviour: verbs, exit codes, JSON round-trips."""

import json

from crtk.catalog import expected_product
from crtk.cli import main, render_module
from crtk.crt_core import crt_isomorphic, module_from_json, module_to_json, zero_module
from crtk.free_crt import monogenic


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestVerbs:
    def test_verify_T(self, capsys):
        code, out, _ = run(["verify", "catalog:T"], capsys)
        assert code == 0
        assert "relations: pass, acyclic: pass, free: pass" in out

    def test_verify_cuntz_not_free(self, capsys):
        code, out, _ = run(["verify", "O4"], capsys)
        assert code == 0
        assert "free: no" in out

    def test_catalog_list(self, capsys):
        code, out, _ = run(["catalog", "list"], capsys)
        assert code == 0
        for name in ("R", "C", "T", "zero", "O3"):
            assert name in out.split()

    def test_tensor_zero(self, capsys):
        code, out, _ = run(["tensor", "catalog:zero", "catalog:R"], capsys)
        assert code == 0
        assert render_module(zero_module()) in out

    def test_kunneth_matches_table(self, tmp_path, capsys):
        out_json = tmp_path / "out.json"
        code, out, _ = run(["kunneth", "O3", "O3", "--json", str(out_json)], capsys)
        assert code == 0
        assert "split: False" in out
        with open(out_json) as fh:
            M = module_from_json(json.load(fh))
        assert crt_isomorphic(M, expected_product(2, 2)) is not None

    def test_compare_identical(self, tmp_path, capsys):
        path = tmp_path / "m.json"
        with open(path, "w") as fh:
            json.dump(module_to_json(monogenic("R", 0).realized), fh)
        code, out, _ = run(["compare", str(path), "R"], capsys)
        assert code == 0

    def test_compare_mismatch(self, capsys):
        code, out, _ = run(["compare", "O3", "O5"], capsys)
        assert code == 1
        assert "discrepanc" in out

    def test_tor_odd_pair(self, capsys):
        code, out, _ = run(["tor", "O4", "O7"], capsys)
        assert code == 0
        assert "Z_3" in out


class TestExitCodes:
    def test_unknown_verb_is_usage_error(self, capsys):
        assert main(["frobnicate"]) == 2

    def test_missing_file(self, capsys):
        code, _, err = run(["verify", "/nonexistent/mod.json"], capsys)
        assert code == 2

    def test_bad_json_file(self, tmp_path, capsys):
        p = tmp_path / "bad.json"
        p.write_text("{\"not\": \"a module\"}")
        code, _, err = run(["verify", str(p)], capsys)
        assert code == 2


class TestDeterminism:
    def test_json_output_byte_identical(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run(["tensor", "O4", "O7", "--json", str(a)], capsys)[0] == 0
        assert run(["tensor", "O4", "O7", "--json", str(b)], capsys)[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_round_trip_catalog_modules(self):
        for name in ("R", "C", "T", "O3", "O5"):
            from crtk.catalog import catalog_entry
            M = catalog_entry(name).module
            assert module_from_json(module_to_json(M)) == M
