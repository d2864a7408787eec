"""Fixture integrity: the Cuntz family, resolutions, and golden tables."""

import json

import pytest

from crtk.catalog import (
    _params,
    catalog_entry,
    catalog_names,
    cuntz_module,
    cuntz_resolution,
    data_dir,
    expected_product,
    expected_tensor,
    expected_tor,
)
from crtk.crt_core import (
    OP_NAMES,
    PARTS,
    is_acyclic,
    module_from_json,
    verify_relations,
)
from crtk.free_crt import monogenic
from crtk.zlinalg import FinAbGroup, Zmod

ZERO = FinAbGroup()


class TestCuntzModules:
    def test_k2_real_row(self):
        M = cuntz_module(2)
        assert [M.group("O", n) for n in range(8)] == [
            Zmod(2), Zmod(2), Zmod(4), Zmod(2), Zmod(2), ZERO, ZERO, ZERO]

    def test_k5_real_row(self):
        M = cuntz_module(5)
        assert [M.group("O", n) for n in range(8)] == [
            Zmod(5), ZERO, ZERO, ZERO, Zmod(5), ZERO, ZERO, ZERO]

    def test_k1_trivial(self):
        assert cuntz_module(1).is_zero()

    def test_k4_extension_class(self):
        # two order-2 generators, not a single order-4 one
        assert cuntz_module(4).group("O", 2) == FinAbGroup((2, 2))
        assert cuntz_module(2).group("O", 2) == Zmod(4)

    @pytest.mark.parametrize("k", range(1, 13))
    def test_complex_row(self, k):
        M = cuntz_module(k)
        for n in range(8):
            expect = Zmod(k) if n % 2 == 0 else ZERO
            assert M.group("U", n) == expect

    def test_rejects_bad_k(self):
        with pytest.raises(ValueError):
            cuntz_module(0)


class TestResolutions:
    @pytest.mark.parametrize("k", range(1, 13))
    def test_constructs_and_validates(self, k):
        res = cuntz_resolution(k)
        kinds = {s.kind for s in res.F1.summands}
        assert kinds == ({"R"} if k % 2 else {"C"})

    def test_odd_is_multiplication(self):
        res = cuntz_resolution(3)
        from crtk.free_crt import morphism_realize
        fam = morphism_realize(res.mu1)
        assert fam[("O", 0)].matrix.entries == ((3,),)


class TestExpectedTables:
    def test_product_coprime_odd_is_zero(self):
        assert expected_product(3, 5).is_zero()

    def test_tor_4_4_real_row(self):
        M = expected_tor(4, 4)
        assert [M.group("O", n) for n in range(8)] == [
            Zmod(4), ZERO, Zmod(2), ZERO, Zmod(2), ZERO, ZERO, ZERO]

    def test_product_2_4_row(self):
        M = expected_product(2, 4)
        assert M.group("O", 2) == FinAbGroup((2, 4))

    def test_product_symmetric_in_arguments(self):
        A = expected_product(4, 2)
        B = expected_product(2, 4)
        for p in PARTS:
            for n in range(8):
                assert A.group(p, n) == B.group(p, n)

    def test_odd_tensor_equals_tor(self):
        for (k, l) in [(3, 6), (3, 5), (9, 3)]:
            A, B = expected_tensor(k, l), expected_tor(k, l)
            assert all(A.group(p, n) == B.group(p, n) for p in PARTS for n in range(8))
            assert all(A.op(nm, n) == B.op(nm, n) for nm in OP_NAMES for n in range(8))

    def test_uncovered_cases_error(self):
        with pytest.raises(ValueError):
            expected_tensor(2, 2)
        with pytest.raises(ValueError):
            expected_tor(2, 4)

    @pytest.mark.parametrize("pair", [(3, 6), (2, 2), (2, 6), (4, 4), (4, 8),
                                      (2, 4), (6, 8), (12, 4)])
    def test_products_acyclic(self, pair):
        M = expected_product(*pair)
        assert verify_relations(M).ok()
        assert is_acyclic(M, check_relations=False).ok()

    def test_parity_parameters(self):
        assert _params(4, 4) == {"k": 4, "l": 4, "g": 4, "kp": 1, "lp": 1}
        assert _params(4, 8)["kp"] == 1
        assert _params(4, 8)["lp"] == 0
        assert _params(12, 8) == {"k": 12, "l": 8, "g": 4, "kp": 1, "lp": 0}


class TestEntriesAndData:
    def test_catalog_names(self):
        names = catalog_names()
        for expected in ("R", "C", "T", "zero", "O3"):
            assert expected in names

    def test_entry_lookup(self):
        ent = catalog_entry("O4")
        assert ent.params == {"k": 3}
        assert ent.resolution is not None
        assert verify_relations(ent.module).ok()
        with pytest.raises(KeyError):
            catalog_entry("X9")

    @pytest.mark.parametrize("name", ["R", "C", "T"])
    def test_shipped_fixture_matches_tables(self, name):
        path = data_dir() / f"{name}.json"
        assert path.exists()
        with open(path) as fh:
            M = module_from_json(json.load(fh))
        assert M == monogenic(name, 0).realized
        assert verify_relations(M).ok()
        assert is_acyclic(M, check_relations=False).ok()

    def test_data_dir_override(self, tmp_path, monkeypatch):
        from crtk.catalog import write_base_fixtures
        write_base_fixtures(tmp_path)
        monkeypatch.setenv("CRT_DATA_DIR", str(tmp_path))
        ent = catalog_entry("T")
        assert ent.module == monogenic("T", 0).realized
