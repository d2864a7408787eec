"""Structure, relations, acyclicity, sums, suspension, isomorphism search."""

import random

import pytest

from crtk.catalog import cuntz_module, expected_product
from crtk.crt_core import (
    GradedPart,
    OP_NAMES,
    PARTS,
    crt_isomorphic,
    direct_sum,
    eta_O,
    is_acyclic,
    is_free,
    make_module,
    module_from_json,
    module_to_json,
    morphism_commutes,
    morphism_is_iso,
    suspend,
    verify_relations,
    zero_module,
)
from crtk.free_crt import monogenic
from crtk.zlinalg import (
    GroupHom,
    IntMatrix,
    ZERO_GROUP,
    Zmod,
    automorphisms,
    hom_cokernel,
    hom_compose,
    hom_kernel,
    hom_scale,
    identity_hom,
)

R = monogenic("R", 0).realized
C = monogenic("C", 0).realized
T = monogenic("T", 0).realized


def test_graded_part_periodicity_enforced():
    with pytest.raises(ValueError):
        GradedPart(2, (Zmod(2),) + (ZERO_GROUP,) * 7)


class TestCatalogFixtures:
    @pytest.mark.parametrize("M", [R, C, T], ids=["R", "C", "T"])
    def test_base_modules(self, M):
        assert verify_relations(M).ok()
        assert is_acyclic(M, check_relations=False).ok()
        assert is_free(M)

    @pytest.mark.parametrize("k", range(1, 8))
    def test_cuntz_modules(self, k):
        M = cuntz_module(k)
        assert verify_relations(M).ok()
        assert is_acyclic(M, check_relations=False).ok()
        # torsion complex part: free only in the degenerate case
        assert is_free(M) == (k == 1)

    def test_rc_equals_2_on_table_1(self):
        lhs = hom_compose(R.op("r", 0), R.op("c", 0))
        assert lhs == hom_scale(identity_hom(R.group("O", 0)), 2)

    def test_involutions_square_to_identity(self):
        for M in (R, C, T, cuntz_module(4)):
            for n in range(8):
                psiU, psiT = M.op("psiU", n), M.op("psiT", n)
                assert hom_compose(psiU, psiU) == identity_hom(M.group("U", n))
                assert hom_compose(psiT, psiT) == identity_hom(M.group("T", n))


class TestRelationFailures:
    def test_negated_psiU_fails_cr(self):
        groups = {p: [R.group(p, n) for n in range(8)] for p in PARTS}
        mats = {name: [R.op(name, n).matrix for n in range(8)] for name in OP_NAMES}
        mats["psiU"] = [(-m if n == 0 else m) for n, m in enumerate(mats["psiU"])]
        M = make_module(groups, mats)
        rep = verify_relations(M)
        assert ("cr=1+psiU", 0) in rep.failures

    def test_zero_module_passes_everything(self):
        Z = zero_module()
        assert verify_relations(Z).ok()
        assert is_acyclic(Z).ok()
        assert is_free(Z)

    def test_is_acyclic_requires_relations(self):
        groups = {p: [R.group(p, n) for n in range(8)] for p in PARTS}
        mats = {name: [R.op(name, n).matrix for n in range(8)] for name in OP_NAMES}
        mats["psiU"] = [(-m if n == 0 else m) for n, m in enumerate(mats["psiU"])]
        M = make_module(groups, mats)
        with pytest.raises(ValueError):
            is_acyclic(M)


def lone_O_module():
    groups = {p: [ZERO_GROUP] * 8 for p in PARTS}
    groups["O"] = [Zmod(2)] + [ZERO_GROUP] * 7
    mats = {}
    for name in OP_NAMES:
        from crtk.crt_core import OP_SPECS
        src, tgt, shift = OP_SPECS[name]
        fam = []
        for n in range(8):
            dom = groups[src][n]
            cod = groups[tgt][(n + shift) % 8]
            fam.append(IntMatrix.zeros(cod.ngens, dom.ngens))
        mats[name] = fam
    return make_module(groups, mats)


class TestAcyclicity:
    def test_lone_real_part_not_acyclic(self):
        M = lone_O_module()
        assert verify_relations(M).ok()
        rep = is_acyclic(M, check_relations=False)
        assert not rep.ok()

    def test_acyclic_vanishing(self):
        # any module with trivial complex part is acyclic only if totally trivial
        M = lone_O_module()
        assert all(M.group("U", n).is_trivial() for n in range(8))
        assert not is_acyclic(M, check_relations=False).ok()
        assert is_acyclic(zero_module()).ok()


class TestSumsAndSuspension:
    def test_suspend_zero_and_full_period(self):
        assert suspend(R, 0) == R
        assert suspend(R, 8) == R

    def test_suspend_additivity(self):
        for a, b in [(1, 2), (3, 7), (5, 5)]:
            assert suspend(suspend(C, a), b) == suspend(C, a + b)

    def test_suspended_modules_stay_valid(self):
        for s in range(8):
            M = suspend(T, s)
            assert verify_relations(M).ok()
            assert is_acyclic(M, check_relations=False).ok()

    def test_direct_sum_with_zero(self):
        M = cuntz_module(3)
        assert direct_sum(M, zero_module()) == M

    def test_direct_sum_associative_up_to_iso(self):
        A, B, Cc = cuntz_module(2), cuntz_module(3), cuntz_module(4)
        left = direct_sum(direct_sum(A, B), Cc)
        right = direct_sum(A, direct_sum(B, Cc))
        for p in PARTS:
            for n in range(8):
                assert left.group(p, n) == right.group(p, n)
        assert crt_isomorphic(left, right) is not None

    def test_direct_sum_verifies(self):
        M = direct_sum(cuntz_module(2), cuntz_module(4))
        assert verify_relations(M).ok()
        assert is_acyclic(M, check_relations=False).ok()


class TestIsomorphism:
    def test_self_isomorphic_identity(self):
        M = cuntz_module(3)
        phi = crt_isomorphic(M, M)
        assert phi is not None
        assert morphism_commutes(M, M, phi)
        assert morphism_is_iso(phi)

    def test_permuted_copy_found(self):
        M = cuntz_module(3)
        rng = random.Random(5)
        twists = {}
        for p in PARTS:
            period = {"O": 8, "U": 2, "T": 4}[p]
            for n in range(period):
                auts = automorphisms(M.group(p, n))
                twists[(p, n)] = rng.choice(auts)
        u = {(p, n): twists[(p, n % {"O": 8, "U": 2, "T": 4}[p])]
             for p in PARTS for n in range(8)}
        from crtk.crt_core import OP_SPECS
        groups = {p: [M.group(p, n) for n in range(8)] for p in PARTS}
        mats = {}
        for name in OP_NAMES:
            src, tgt, shift = OP_SPECS[name]
            fam = []
            for n in range(8):
                # conjugated operation u_tgt . op . u_src^{-1}
                usrc = u[(src, n)]
                inv_cols = []
                G = usrc.domain
                from crtk.zlinalg import hom_preimage
                for kgen in range(G.ngens):
                    e = tuple(1 if j == kgen else 0 for j in range(G.ngens))
                    inv_cols.append(list(hom_preimage(usrc, e)))
                usrc_inv = GroupHom(G, G, IntMatrix.from_cols(inv_cols, rows=G.ngens))
                fam.append(hom_compose(u[(tgt, (n + shift) % 8)],
                                       hom_compose(M.op(name, n), usrc_inv)).matrix)
            mats[name] = fam
        M2 = make_module(groups, mats)
        assert verify_relations(M2).ok()
        assert crt_isomorphic(M2, M) is not None

    def test_distinguished_products(self):
        # same complexification, different real structure
        A = expected_product(2, 2)
        B = expected_product(2, 4)
        assert all(A.group("U", n) == B.group("U", n) for n in range(8))
        assert crt_isomorphic(A, B) is None

    def test_refuses_infinite(self):
        with pytest.raises(ValueError):
            crt_isomorphic(R, R)


class TestRigidity:
    def test_scalar_endomorphisms(self):
        # a morphism of acyclic modules with invertible complex part is
        # invertible in the other two parts as well
        for k in (2, 3, 4, 6):
            M = cuntz_module(k)
            for a in range(1, 13):
                phi = {(p, n): hom_scale(identity_hom(M.group(p, n)), a)
                       for p in PARTS for n in range(8)}
                assert morphism_commutes(M, M, phi)
                u_iso = all(
                    hom_kernel(phi[("U", n)])[0].is_trivial()
                    and hom_cokernel(phi[("U", n)])[0].is_trivial()
                    for n in range(8))
                if u_iso:
                    assert morphism_is_iso(phi)


class TestJson:
    @pytest.mark.parametrize("M", [R, C, T, cuntz_module(4), zero_module()],
                             ids=["R", "C", "T", "O5", "zero"])
    def test_round_trip(self, M):
        assert module_from_json(module_to_json(M)) == M

    def test_eta_O_is_tau_eps(self):
        for n in range(8):
            assert eta_O(R, n) == hom_compose(R.op("tau", n), R.op("eps", n))
