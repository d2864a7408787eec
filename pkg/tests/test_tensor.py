"""Tensor products, induced maps, Tor, and the structural cross-checks."""

import pytest

from crtk.catalog import (
    cuntz_module,
    cuntz_resolution,
    expected_tensor,
    expected_tor,
)
from crtk.crt_core import (
    OP_NAMES,
    PARTS,
    crt_isomorphic,
    is_acyclic,
    suspend,
    zero_module,
)
from crtk.free_crt import (
    FreeMorphism,
    MonogenicKind,
    find_free_isomorphism,
    free_module,
    monogenic,
    scale_element,
)
from crtk.tensor import (
    complex_tensor_groups,
    complex_tor_groups,
    induced_tensor_map,
    tensor_and_tor,
    tensor_free,
    tensor_monogenic,
    tensor_symmetric_check,
)
from crtk.zlinalg import hom_scale, identity_hom

R = monogenic("R", 0).realized
C = monogenic("C", 0).realized
T = monogenic("T", 0).realized


def modules_equal(A, B):
    return (all(A.group(p, n) == B.group(p, n) for p in PARTS for n in range(8))
            and all(A.op(nm, n) == B.op(nm, n) for nm in OP_NAMES for n in range(8)))


class TestUnitLaw:
    @pytest.mark.parametrize("N", [R, C, T, cuntz_module(2), cuntz_module(3), cuntz_module(4)],
                             ids=["R", "C", "T", "O3", "O4", "O5"])
    def test_real_unit(self, N):
        TT = tensor_monogenic("R", 0, N)
        assert modules_equal(TT.module, N)


class TestMonogenicTensors:
    def test_complex_against_real_is_table_2(self):
        TT = tensor_monogenic("C", 0, R)
        M = TT.module
        assert [M.group("O", n) for n in range(8)] == [C.group("O", n) for n in range(8)]
        assert [M.group("U", n) for n in range(8)] == [C.group("U", n) for n in range(8)]
        assert [M.group("T", n) for n in range(8)] == [C.group("T", n) for n in range(8)]
        assert find_free_isomorphism(monogenic("C", 0), M) is not None

    def test_zero_factor(self):
        assert tensor_monogenic("T", 0, zero_module()).module.is_zero()

    def test_part_shapes_self_conjugate_kind(self):
        # generator sits one degree below the shift; the real part of the
        # product is the self-conjugate part of the factor, degree for degree
        TT = tensor_monogenic("T", 0, cuntz_module(4))
        N = cuntz_module(4)
        for n in range(8):
            assert TT.module.group("O", n) == N.group("T", n)

    @pytest.mark.parametrize("kind", ["R", "C", "T"])
    @pytest.mark.parametrize("N", [R, C, T], ids=["R", "C", "T"])
    def test_acyclic_factors_small(self, kind, N):
        TT = tensor_monogenic(kind, 0, N)
        assert is_acyclic(TT.module, check_relations=False).ok()


class TestTensorFree:
    def test_empty(self):
        F = free_module([])
        assert tensor_free(F, cuntz_module(3)).module.is_zero()

    def test_block_sum_squares_groups(self):
        N = cuntz_module(3)
        F = free_module([MonogenicKind("R", 0), MonogenicKind("R", 0)])
        TT = tensor_free(F, N)
        for p in PARTS:
            for n in range(8):
                single = N.group(p, n)
                doubled = TT.module.group(p, n)
                assert doubled.order() == single.order() ** 2

    def test_suspension_compatibility(self):
        # odd shifts flip the provenance signs, so the comparison is up to
        # isomorphism; even shifts agree on the nose for the real kind
        N = cuntz_module(4)
        for kind in ("R", "C", "T"):
            base = tensor_free(free_module([MonogenicKind(kind, 0)]), N).module
            for s in (1, 2, 3):
                A = tensor_free(free_module([MonogenicKind(kind, s)]), N).module
                B = suspend(base, s)
                for p in PARTS:
                    for n in range(8):
                        assert A.group(p, n) == B.group(p, n)
                assert crt_isomorphic(A, B) is not None
        assert modules_equal(
            tensor_free(free_module([MonogenicKind("R", 2)]), N).module,
            suspend(tensor_free(free_module([MonogenicKind("R", 0)]), N).module, 2))


class TestInducedMaps:
    def test_identity_and_scalars(self):
        F = monogenic("C", 0)
        N = cuntz_module(3)
        TT = tensor_free(F, N)
        gen = F.generator(0)
        fam = induced_tensor_map(FreeMorphism(F, F, [gen]), N, src=TT, tgt=TT)
        for p in PARTS:
            for n in range(8):
                assert fam[(p, n)] == identity_hom(TT.module.group(p, n))
        fam5 = induced_tensor_map(FreeMorphism(F, F, [scale_element(gen, 5)]), N, src=TT, tgt=TT)
        for p in PARTS:
            for n in range(8):
                assert fam5[(p, n)] == hom_scale(identity_hom(TT.module.group(p, n)), 5)

    def test_functoriality_through_a_resolution_map(self):
        # compose the even resolution map with multiplication by 3
        from crtk.free_crt import compose_morphisms
        res = cuntz_resolution(4)
        N = cuntz_module(4)
        f = res.mu1
        F0 = res.F0
        g = FreeMorphism(F0, F0, [scale_element(F0.generator(0), 3),
                                  scale_element(F0.generator(1), 3)])
        comp = FreeMorphism(f.source, F0, [scale_element(f.images[0], 3)])
        src = tensor_free(f.source, N)
        mid = tensor_free(F0, N)
        left = induced_tensor_map(comp, N, src=src, tgt=mid)
        right = compose_morphisms(induced_tensor_map(g, N, src=mid, tgt=mid),
                                  induced_tensor_map(f, N, src=src, tgt=mid))
        assert left == right


class TestTensorAndTor:
    def test_odd_case_matches_table(self):
        res = cuntz_resolution(3)
        tp = tensor_and_tor(res, cuntz_module(6))
        Et, Er = expected_tensor(3, 6), expected_tor(3, 6)
        assert modules_equal(tp.tensor, Et) or crt_isomorphic(tp.tensor, Et) is not None
        assert crt_isomorphic(tp.tor, Er) is not None

    def test_free_factor_has_no_tor(self):
        res = cuntz_resolution(3)
        tp = tensor_and_tor(res, R)
        assert tp.tor.is_zero()

    def test_0mod4_case_matches_tables(self):
        res = cuntz_resolution(4)
        tp = tensor_and_tor(res, cuntz_module(4))
        Et, Er = expected_tensor(4, 4), expected_tor(4, 4)
        for p in PARTS:
            for n in range(8):
                assert tp.tensor.group(p, n) == Et.group(p, n)
                assert tp.tor.group(p, n) == Er.group(p, n)
        assert crt_isomorphic(tp.tensor, Et) is not None
        assert crt_isomorphic(tp.tor, Er) is not None

    def test_euler_order_balance(self):
        for (k, l) in [(4, 4), (2, 4)]:
            res = cuntz_resolution(k)
            N = cuntz_module(l)
            tp = tensor_and_tor(res, N)
            for p in PARTS:
                for n in range(8):
                    lhs = tp.tor.group(p, n).order() * tp.t0.module.group(p, n).order()
                    rhs = tp.tensor.group(p, n).order() * tp.t1.module.group(p, n).order()
                    assert lhs == rhs

    def test_complex_part_shortcut(self):
        for (k, l) in [(3, 6), (4, 4), (2, 4)]:
            res = cuntz_resolution(k)
            N = cuntz_module(l)
            tp = tensor_and_tor(res, N)
            M = cuntz_module(k)
            tens = complex_tensor_groups(M, N)
            tor = complex_tor_groups(M, N)
            for n in range(8):
                assert tp.tensor.group("U", n) == tens[n]
                assert tp.tor.group("U", n) == tor[n]

    def test_symmetry(self):
        assert tensor_symmetric_check(cuntz_resolution(3), cuntz_resolution(5))
        assert tensor_symmetric_check(cuntz_resolution(4), cuntz_resolution(4))
        assert tensor_symmetric_check(cuntz_resolution(2), cuntz_resolution(1))
