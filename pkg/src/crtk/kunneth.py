"""The Kunneth extension problem.

Given the tensor and Tor of a pair, the middle module K fits degreewise
extensions 0 -> tensor_n -> K_n -> tor_{n-1} -> 0 where the injection is
a CRT-morphism and the surjection a CRT-morphism of degree -1, and K must
satisfy the relations and be acyclic.  The solver enumerates extension
groups per slot (one slot per stored period: 8 real, 2 complex, 4
self-conjugate), fixes the extension maps up to automorphism of the
middle group, and then backtracks over the operation matrices.  For each
operation instance the intertwining conditions are an affine problem: one
particular solution is found by exact linear algebra, and the ambiguity
is exactly alpha . W . beta for W ranging over the finite group
Hom(tor_{n-1}, tensor_m), so the aggregate search space is small and is
pruned further by relation and exactness checks as operations fill in.

All consistent middles are returned, deduplicated up to CRT-isomorphism.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional

from .crt_core import (
    BudgetExceeded,
    CRTModule,
    Morphism,
    OP_NAMES,
    OP_SPECS,
    PARTS,
    PART_PERIOD,
    crt_isomorphic,
    direct_sum,
    is_acyclic,
    make_module,
    module_to_json,
    suspend,
    verify_relations,
)
from .zlinalg import (
    FinAbGroup,
    GroupHom,
    ZERO_GROUP,
    Zmod,
    automorphisms,
    extension_candidates,
    fin_ab_tensor,
    fin_ab_tor,
    hom_compose,
    hom_cokernel,
    hom_from_cols,
    hom_group_elements,
    hom_preimage,
    hom_scale,
    identity_hom,
    injections,
    is_exact_at,
    solve_matrix_system,
    zero_hom,
)


@dataclass(eq=False)
class KunnethProblem:
    """K_n is an extension of tor_{n-1} by tensor_n, degreewise."""

    tensor: CRTModule
    tor: CRTModule

    def __post_init__(self):
        if not (self.tensor.all_finite() and self.tor.all_finite()):
            raise ValueError("the extension solver requires finite parts")

    def sub(self, part: str, n: int) -> FinAbGroup:
        return self.tensor.group(part, n)

    def quot(self, part: str, n: int) -> FinAbGroup:
        return self.tor.group(part, n - 1)


@dataclass(eq=False)
class KunnethSolution:
    middle: CRTModule
    alpha: Morphism
    beta: Morphism
    split: Optional[bool] = None


_SLOTS = [("U", 0), ("U", 1), ("T", 0), ("T", 1), ("T", 2), ("T", 3)] + \
    [("O", n) for n in range(8)]


def _slot_of(part: str, n: int) -> tuple[str, int]:
    return (part, n % PART_PERIOD[part])


def _aut_with_inverse(G: FinAbGroup) -> list[tuple[GroupHom, GroupHom]]:
    auts = automorphisms(G)
    out = []
    for u in auts:
        cols = []
        for k in range(G.ngens):
            e = tuple(1 if j == k else 0 for j in range(G.ngens))
            cols.append(list(hom_preimage(u, e)))
        out.append((u, hom_from_cols(G, G, cols)))
    return out


def _extension_options(sub: FinAbGroup, quot: FinAbGroup, bound: int):
    """(K, alpha, beta) triples per slot, up to automorphisms of K."""
    if sub.is_trivial() and quot.is_trivial():
        z = ZERO_GROUP
        return [(z, zero_hom(sub, z), zero_hom(z, quot))]
    if sub.is_trivial():
        return [(quot, zero_hom(sub, quot), identity_hom(quot))]
    if quot.is_trivial():
        return [(sub, identity_hom(sub), zero_hom(sub, quot))]
    options = []
    for K in extension_candidates(sub, quot, bound=bound):
        pairs = []
        for alpha in injections(sub, K):
            Q, proj = hom_cokernel(alpha)
            if Q != quot:
                continue
            base = GroupHom(K, quot, proj.matrix)
            for v, _ in _aut_with_inverse(quot):
                pairs.append((alpha, hom_compose(v, base)))
        seen = set()
        for alpha, beta in pairs:
            key = min((hom_compose(u, alpha).matrix.entries,
                       hom_compose(beta, uinv).matrix.entries)
                      for u, uinv in _aut_with_inverse(K))
            if key in seen:
                continue
            seen.add(key)
            options.append((K, alpha, beta))
    return options


# Operation assignment order; psiT is derived from eps.r.zeta - 1.
_OP_ORDER = [(name, n) for name in ("zeta", "gamma", "psiU", "c", "r", "tau", "eps")
             for n in range(8)]
_ORDER_INDEX = {key: i for i, key in enumerate(_OP_ORDER)}


class _Search:
    def __init__(self, p: KunnethProblem, budget: int, ext_bound: int):
        self.p = p
        self.budget = budget
        self.nodes = 0
        self.solutions: list[KunnethSolution] = []
        self.ext_bound = ext_bound
        self.slot_options = {}
        for part, n in _SLOTS:
            sub = p.sub(part, n)
            quot = p.quot(part, n)
            self.slot_options[(part, n)] = _extension_options(sub, quot, ext_bound)

    # -- slot stage ---------------------------------------------------------

    def run(self):
        self._slot_choice = {}
        self._assign_slot(0)
        return self.solutions

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(
                f"Kunneth search budget exceeded after {self.nodes} nodes "
                f"({len(self.solutions)} solutions found so far)")

    def _assign_slot(self, idx: int):
        if idx == len(_SLOTS):
            self._op_stage()
            return
        slot = _SLOTS[idx]
        for opt in self.slot_options[slot]:
            self._tick()
            self._slot_choice[slot] = opt
            if self._slots_feasible(idx):
                self._assign_slot(idx + 1)
        self._slot_choice.pop(slot, None)

    def _slots_feasible(self, idx: int) -> bool:
        """Every op instance with both endpoint slots chosen must be solvable."""
        assigned = set(_SLOTS[: idx + 1])
        for name in OP_NAMES:
            if name == "psiT":
                continue
            src, tgt, shift = OP_SPECS[name]
            for n in range(8):
                s_src = _slot_of(src, n)
                s_tgt = _slot_of(tgt, n + shift)
                if s_src in assigned and s_tgt in assigned and \
                        (s_src == _SLOTS[idx] or s_tgt == _SLOTS[idx]):
                    if not self._instance_candidates(name, n):
                        return False
        return True

    # -- operation stage ----------------------------------------------------

    def _k_group(self, part, n) -> FinAbGroup:
        return self._slot_choice[_slot_of(part, n)][0]

    def _alpha(self, part, n) -> GroupHom:
        return self._slot_choice[_slot_of(part, n)][1]

    def _beta(self, part, n) -> GroupHom:
        return self._slot_choice[_slot_of(part, n)][2]

    def _instance_candidates(self, name: str, n: int) -> list[GroupHom]:
        """All operation matrices satisfying the intertwining constraints."""
        src, tgt, shift = OP_SPECS[name]
        m = (n + shift) % 8
        Ks = self._k_group(src, n)
        Kt = self._k_group(tgt, m)
        a_s, b_s = self._alpha(src, n), self._beta(src, n)
        a_t, b_t = self._alpha(tgt, m), self._beta(tgt, m)
        P = self.p.tensor.op(name, n)
        Q = self.p.tor.op(name, n - 1)
        cache_key = (name, n, Ks, Kt, a_s.matrix.entries, b_s.matrix.entries,
                     a_t.matrix.entries, b_t.matrix.entries)
        hit = self._cand_cache.get(cache_key) if hasattr(self, "_cand_cache") else None
        if hit is not None:
            return hit
        if not hasattr(self, "_cand_cache"):
            self._cand_cache = {}
        eqs = []
        rows, cols = Kt.ngens, Ks.ngens
        # well-definedness
        for i, e in enumerate(Kt.invariants):
            for j, d in enumerate(Ks.invariants):
                eqs.append(({(i, j): d}, 0, e))
        # theta . alpha_s = alpha_t . P
        B = a_t.matrix * P.matrix
        A = a_s.matrix
        for i, e in enumerate(Kt.invariants):
            for j in range(P.matrix.cols):
                coeffs = {(i, q): A.entries[q][j] for q in range(cols) if A.entries[q][j]}
                eqs.append((coeffs, B.entries[i][j], e))
        # beta_t . theta = Q . beta_s
        C = b_t.matrix
        D = Q.matrix * b_s.matrix
        for i, f in enumerate(self.p.tor.group(tgt, m - 1).invariants):
            for j in range(cols):
                coeffs = {(q, j): C.entries[i][q] for q in range(rows) if C.entries[i][q]}
                eqs.append((coeffs, D.entries[i][j], f))
        theta0 = solve_matrix_system(rows, cols, eqs)
        if theta0 is None:
            self._cand_cache[cache_key] = []
            return []
        base = GroupHom(Ks, Kt, theta0)
        out = []
        seen = set()
        for W in hom_group_elements(self.p.tor.group(src, n - 1), self.p.tensor.group(tgt, m)):
            mat = theta0 + a_t.matrix * W.matrix * b_s.matrix
            h = GroupHom(Ks, Kt, mat)
            if h.matrix.entries not in seen:
                seen.add(h.matrix.entries)
                out.append(h)
        self._cand_cache[cache_key] = out
        return out

    def _op_stage(self):
        ops: dict[tuple[str, int], GroupHom] = {}
        checks = self._build_checks()
        cand = {key: self._instance_candidates(*key) for key in _OP_ORDER}
        if any(not v for v in cand.values()):
            return

        def rec(i: int):
            if i == len(_OP_ORDER):
                self._finish(ops)
                return
            key = _OP_ORDER[i]
            for h in cand[key]:
                self._tick()
                ops[key] = h
                if key[0] == "eps":
                    psiT = self._derive_psiT(ops, key[1])
                    if psiT is None:
                        continue
                    ops[("psiT", key[1])] = psiT
                if all(chk(ops) for chk in checks.get(key, [])):
                    rec(i + 1)
            ops.pop(key, None)
            ops.pop(("psiT", key[1]), None)

        rec(0)

    def _derive_psiT(self, ops, n: int) -> Optional[GroupHom]:
        """psiT_n = eps_n r_n zeta_n - 1; also verify its intertwining."""
        h = hom_compose(ops[("eps", n)], hom_compose(ops[("r", n)], ops[("zeta", n)]))
        psiT = h - identity_hom(self._k_group("T", n))
        a, b = self._alpha("T", n), self._beta("T", n)
        if hom_compose(psiT, a) != hom_compose(a, self.p.tensor.op("psiT", n)):
            return None
        if hom_compose(b, psiT) != hom_compose(self.p.tor.op("psiT", n - 1), b):
            return None
        return psiT

    def _build_checks(self) -> dict[tuple[str, int], list[Callable]]:
        """Pruning checks, fired when their last-assigned operation arrives."""
        reg: dict[tuple[str, int], list[Callable]] = {}

        def at(requires, fn):
            keyed = [k for k in requires if k[0] != "psiT"]
            for name, n in requires:
                if name == "psiT":
                    keyed.append(("eps", n))
            trigger = max(keyed, key=lambda k: _ORDER_INDEX[k])
            reg.setdefault(trigger, []).append(fn)

        def exact(f, g):
            try:
                return is_exact_at(f, g)
            except ValueError:
                return False

        two = {n: hom_scale(identity_hom(self._k_group("O", n)), 2) for n in range(8)}
        idU = {n: identity_hom(self._k_group("U", n)) for n in range(8)}
        idT = {n: identity_hom(self._k_group("T", n)) for n in range(8)}

        for n in range(8):
            nn = n
            at([("zeta", (nn - 1) % 8), ("gamma", nn)],
               lambda o, n=nn: hom_compose(o[("zeta", (n - 1) % 8)], o[("gamma", n)]).is_zero_map())
            at([("zeta", (nn - 1) % 8), ("gamma", nn)],
               lambda o, n=nn: exact(o[("gamma", n)], o[("zeta", (n - 1) % 8)]))
            at([("psiU", nn), ("psiU", (nn + 2) % 8)],
               lambda o, n=nn: o[("psiU", (n + 2) % 8)] == -o[("psiU", n)])
            at([("psiU", nn)],
               lambda o, n=nn: hom_compose(o[("psiU", n)], o[("psiU", n)]) == idU[n])
            at([("psiU", nn), ("zeta", nn)],
               lambda o, n=nn: hom_compose(o[("psiU", n)], o[("zeta", n)]) == o[("zeta", n)])
            at([("psiU", nn), ("gamma", nn)],
               lambda o, n=nn: hom_compose(o[("gamma", n)], o[("psiU", n)]) == o[("gamma", n)])
            at([("psiU", nn), ("zeta", nn)],
               lambda o, n=nn: exact(o[("zeta", n)], idU[n] - o[("psiU", n)]))
            at([("psiU", nn), ("gamma", nn)],
               lambda o, n=nn: exact(idU[n] - o[("psiU", n)], o[("gamma", n)]))
            at([("zeta", (nn + 4) % 8), ("zeta", nn)],
               lambda o, n=nn: o[("zeta", (n + 4) % 8)] == o[("zeta", n)])
            at([("gamma", (nn + 4) % 8), ("gamma", nn)],
               lambda o, n=nn: o[("gamma", (n + 4) % 8)] == o[("gamma", n)])
            at([("c", nn), ("r", nn), ("psiU", nn)],
               lambda o, n=nn: hom_compose(o[("c", n)], o[("r", n)]) == idU[n] + o[("psiU", n)])
            at([("c", nn), ("r", nn)],
               lambda o, n=nn: hom_compose(o[("r", n)], o[("c", n)]) == two[n])
            at([("c", (nn + 2) % 8), ("r", nn)],
               lambda o, n=nn: exact(o[("c", (n + 2) % 8)], o[("r", n)]))
            at([("r", nn), ("tau", (nn - 1) % 8), ("gamma", nn)],
               lambda o, n=nn: o[("r", n)] == hom_compose(o[("tau", (n - 1) % 8)], o[("gamma", n)]))
            at([("c", nn), ("zeta", nn), ("eps", nn)],
               lambda o, n=nn: o[("c", n)] == hom_compose(o[("zeta", n)], o[("eps", n)]))
            at([("eps", nn), ("psiT", nn)],
               lambda o, n=nn: hom_compose(o[("psiT", n)], o[("psiT", n)]) == idT[n])
            at([("eps", nn), ("psiT", nn)],
               lambda o, n=nn: hom_compose(o[("psiT", n)], o[("eps", n)]) == o[("eps", n)])
            at([("tau", nn), ("psiT", nn)],
               lambda o, n=nn: hom_compose(o[("tau", n)], o[("psiT", n)]) == -o[("tau", n)])
            at([("gamma", (nn + 1) % 8), ("c", (nn + 1) % 8), ("tau", nn), ("psiT", nn)],
               lambda o, n=nn: hom_compose(
                   o[("gamma", (n + 1) % 8)],
                   hom_compose(o[("c", (n + 1) % 8)], o[("tau", n)])) == idT[n] - o[("psiT", n)])
            at([("tau", (nn + 4) % 8), ("eps", nn)],
               lambda o, n=nn: hom_compose(o[("tau", (n + 4) % 8)], o[("eps", n)]).is_zero_map())
            # exactness of the eta_O sequence nodes once eps arrives
            at([("eps", nn), ("tau", nn), ("c", (nn + 1) % 8)],
               lambda o, n=nn: exact(hom_compose(o[("tau", n)], o[("eps", n)]), o[("c", (n + 1) % 8)]))
        return reg

    def _finish(self, ops: dict):
        groups = {p: [self._k_group(p, n) for n in range(8)] for p in PARTS}
        mats = {}
        for name in OP_NAMES:
            mats[name] = [ops[(name, n)].matrix for n in range(8)]
        try:
            middle = make_module(groups, mats)
        except ValueError:
            return
        if not verify_relations(middle).ok():
            return
        if not is_acyclic(middle, check_relations=False).ok():
            return
        alpha = {(p, n): self._alpha(p, n) for p in PARTS for n in range(8)}
        beta = {(p, n): self._beta(p, n) for p in PARTS for n in range(8)}
        self.solutions.append(KunnethSolution(middle, alpha, beta))


def solve_middle(p: KunnethProblem, budget: int = 5_000_000,
                 ext_bound: int = 4096) -> list[KunnethSolution]:
    """All middles K for the extension problem, up to CRT-isomorphism.

    Raises BudgetExceeded when the node budget runs out; an empty result
    for a pair the tables cover signals a transcription error upstream.
    """
    search = _Search(p, budget, ext_bound)
    raw = search.run()
    kept: list[KunnethSolution] = []
    for sol in raw:
        if any(crt_isomorphic(sol.middle, other.middle) is not None for other in kept):
            continue
        kept.append(sol)
    for sol in kept:
        sol.split = split_check(sol, p)
    return kept


def split_model(p: KunnethProblem) -> CRTModule:
    """The split candidate: tensor ⊕ (tor shifted up one degree)."""
    return direct_sum(p.tensor, suspend(p.tor, 1))


def split_check(sol: KunnethSolution, p: KunnethProblem) -> bool:
    """Does the middle agree with tensor ⊕ shifted Tor up to isomorphism?"""
    model = split_model(p)
    if sol.middle.is_zero() and model.is_zero():
        return True
    for part in PARTS:
        for n in range(8):
            if sol.middle.group(part, n) != model.group(part, n):
                return False
    return crt_isomorphic(sol.middle, model) is not None


def classical_complex_kunneth(k: int, l: int) -> list[FinAbGroup]:
    """KU of the product of two Cuntz modules by the classical cyclic formula.

    Independent of the CRT machinery: the complex parts are Z_k and Z_l in
    even degrees, so even degrees carry the tensor and odd degrees the Tor
    of cyclic groups.
    """
    out = []
    for n in range(8):
        if n % 2 == 0:
            out.append(fin_ab_tensor(Zmod(k), Zmod(l)))
        else:
            out.append(fin_ab_tor(Zmod(k), Zmod(l)))
    return out


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class KunnethReport:
    name_a: str
    name_b: str
    k: int
    l: int
    tensor: CRTModule
    tor: CRTModule
    solutions: list[KunnethSolution]
    expected: Optional[CRTModule]
    matches_expected: list[bool]
    split: Optional[bool]

    def ok(self) -> bool:
        if not self.solutions:
            return False
        if self.expected is not None and not all(self.matches_expected):
            return False
        return True


def kunneth_pipeline(name_a: str, name_b: str, budget: int = 5_000_000) -> KunnethReport:
    """Catalog pair -> resolution -> tensor/Tor -> middle solutions -> report."""
    from .catalog import catalog_entry, expected_product
    from .tensor import tensor_and_tor

    ent_a = catalog_entry(name_a)
    ent_b = catalog_entry(name_b)
    if ent_a.resolution is None:
        raise ValueError(f"{name_a} has no resolution in the catalog")
    k = ent_a.params["k"]
    l = ent_b.params.get("k")
    if l is None:
        raise ValueError(f"{name_b} is not a Cuntz entry")
    tp = tensor_and_tor(ent_a.resolution, ent_b.module)
    problem = KunnethProblem(tp.tensor, tp.tor)
    solutions = solve_middle(problem, budget=budget)
    expected = expected_product(k, l)
    matches = [crt_isomorphic(s.middle, expected) is not None for s in solutions]
    if len(solutions) > 1:
        payload = json.dumps([module_to_json(s.middle) for s in solutions], indent=1)
        raise RuntimeError(
            "multiple non-isomorphic middles survive for a table-covered pair; "
            "this contradicts the printed determination and needs review:\n" + payload)
    split = solutions[0].split if solutions else None
    return KunnethReport(name_a, name_b, k, l, tp.tensor, tp.tor,
                         solutions, expected, matches, split)
