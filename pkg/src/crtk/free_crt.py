"""Free CRT-modules: monogenic building blocks, elements, and morphisms.

A free module is a direct sum of suspended monogenic modules; its elements
are integer vectors in the preferred generators and a morphism out of it
is determined by the images of the summand generators.  Realizing a
morphism pushes every basis word through the target's stored operation
matrices, so a transcription error in any table surfaces as a naturality
failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import _tables
from .crt_core import (
    CRTModule,
    Morphism,
    OP_NAMES,
    OP_SPECS,
    PARTS,
    direct_sum_with_layout,
    eta_O,
    eta_T,
    make_module,
    morphism_commutes,
    omega,
    suspend,
    xi,
)
from .zlinalg import FinAbGroup, GroupHom, IntMatrix

KINDS = ("R", "C", "T")

# Degree of the free generator relative to the declared shift: the
# self-conjugate table's generator sits one degree below its shift.
GEN_OFFSET = {"R": 0, "C": 0, "T": -1}
GEN_PART = {"R": "O", "C": "U", "T": "T"}


@dataclass(frozen=True)
class Element:
    """An element of one part of a CRT-module at a window degree."""

    part: str
    degree: int
    vec: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "degree", self.degree % 8)
        object.__setattr__(self, "vec", tuple(self.vec))


# Window shifts of the Bott tokens; coordinates are unchanged.
_BETA_TOKENS = {
    "betaU": ("U", 2), "betaU_inv": ("U", -2),
    "betaT": ("T", 4), "betaT_inv": ("T", -4),
    "betaO": ("O", 8), "betaO_inv": ("O", -8),
}
_DERIVED_TOKENS = {
    "etaO": (eta_O, "O", 1),
    "etaT": (eta_T, "T", 1),
    "omega": (omega, "T", 3),
    "xi": (xi, "O", 4),
}


def act(M: CRTModule, word: Sequence[str], x: Element) -> Element:
    """Apply an operation word (composition order, rightmost first).

    Tokens are the eight operation names, Bott shifts (betaU, betaT, betaO
    and their inverses) and the derived ring elements etaO, etaT, omega,
    xi acting through their defining composites.
    """
    for tok in reversed(list(word)):
        if tok in OP_SPECS:
            src, tgt, shift = OP_SPECS[tok]
            if x.part != src:
                raise ValueError(f"cannot apply {tok} to a {x.part}-part element")
            h = M.op(tok, x.degree)
            x = Element(tgt, x.degree + shift, h.apply(x.vec))
        elif tok in _BETA_TOKENS:
            part, shift = _BETA_TOKENS[tok]
            if x.part != part:
                raise ValueError(f"cannot apply {tok} to a {x.part}-part element")
            x = Element(part, x.degree + shift, x.vec)
        elif tok in _DERIVED_TOKENS:
            fn, part, shift = _DERIVED_TOKENS[tok]
            if x.part != part:
                raise ValueError(f"cannot apply {tok} to a {x.part}-part element")
            x = Element(part, x.degree + shift, fn(M, x.degree).apply(x.vec))
        else:
            raise ValueError(f"unknown operation token {tok!r}")
    return x


def scale_element(x: Element, k: int) -> Element:
    return Element(x.part, x.degree, tuple(k * v for v in x.vec))


def add_elements(M: CRTModule, x: Element, y: Element) -> Element:
    if (x.part, x.degree) != (y.part, y.degree):
        raise ValueError("cannot add elements in different degrees")
    G = M.group(x.part, x.degree)
    return Element(x.part, x.degree, G.reduce(tuple(a + b for a, b in zip(x.vec, y.vec))))


# ---------------------------------------------------------------------------
# Monogenic modules and free modules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonogenicKind:
    """One monogenic summand: kind R/C/T and a window shift."""

    kind: str
    shift: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "shift", self.shift % 8)

    @property
    def generator_part(self) -> str:
        return GEN_PART[self.kind]

    @property
    def generator_degree(self) -> int:
        return (self.shift + GEN_OFFSET[self.kind]) % 8


def _canonical_perm(invs: Sequence[int]) -> dict[int, int]:
    """Canonical slot of each kept listed generator (invariant-1 slots drop)."""
    kept = [i for i in range(len(invs)) if invs[i] != 1]
    order = sorted(kept, key=lambda i: (invs[i] == 0, invs[i], i))
    return {i: k for k, i in enumerate(order)}


def table_group(invs: Sequence[int]) -> FinAbGroup:
    """Canonical group for a listed invariant sequence (1 entries vanish)."""
    return FinAbGroup(tuple(sorted(t for t in invs if t >= 2)), list(invs).count(0))


def table_matrix(value, dom_invs: Sequence[int], cod_invs: Sequence[int]) -> IntMatrix:
    """Read a table entry into canonical generator order.

    Tables list generators in the source's printed order (e.g. Z + Z_2 with
    the free generator first); canonical groups put torsion first, so rows
    and columns are permuted accordingly.  Generators whose instantiated
    invariant is 1 are dropped together with their rows and columns, which
    realizes the Z_1 = 0 convention for parameterized tables.
    """
    raw = _shape(value, len(cod_invs), len(dom_invs))
    pr, pc = _canonical_perm(cod_invs), _canonical_perm(dom_invs)
    out = [[0] * len(pc) for _ in range(len(pr))]
    for i, row in enumerate(raw.entries):
        if i not in pr:
            continue
        for j, x in enumerate(row):
            if j in pc:
                out[pr[i]][pc[j]] = x
    return IntMatrix.from_rows(out, cols=len(pc))


def _base_module(kind: str) -> CRTModule:
    if kind not in _BASE_CACHE:
        table = _tables.BASE_TABLES[kind]
        inv_lists = table["groups"]
        groups = {p: [table_group(invs) for invs in inv_lists[p]] for p in PARTS}
        mats = {}
        for name in OP_NAMES:
            src, tgt, shift = OP_SPECS[name]
            fam = []
            for n in range(8):
                dom_invs = inv_lists[src][n]
                cod_invs = inv_lists[tgt][(n + shift) % 8]
                fam.append(table_matrix(table["ops"][name][n], dom_invs, cod_invs))
            mats[name] = fam
        _BASE_CACHE[kind] = make_module(groups, mats)
    return _BASE_CACHE[kind]


_BASE_CACHE: dict[str, CRTModule] = {}


def _shape(value, rows: int, cols: int) -> IntMatrix:
    """Normalize a table entry to a rows x cols matrix.

    A scalar means multiplication by that number (v times the identity on a
    square shape, the zero map otherwise); lists are read as rows.
    """
    if isinstance(value, int):
        if value == 0:
            return IntMatrix.zeros(rows, cols)
        if rows == cols:
            return IntMatrix.identity(rows).scale(value)
        raise ValueError(f"scalar {value} for a {rows}x{cols} entry")
    return IntMatrix.from_rows(value, cols=cols)


@dataclass(frozen=True, eq=False)
class BasisLabel:
    summand: int
    sign: int
    word: tuple[str, ...]

    def __str__(self) -> str:
        s = "-" if self.sign < 0 else ""
        if not self.word:
            return f"{s}b{self.summand}"
        return f"{s}{'.'.join(self.word)}(b{self.summand})"


@dataclass(eq=False)
class FreeCRT:
    """A direct sum of monogenic summands with its realized module."""

    summands: tuple[MonogenicKind, ...]
    realized: CRTModule
    layouts: dict

    def basis(self, part: str, n: int) -> list[BasisLabel]:
        """Raw-slot basis labels at (part, window degree)."""
        out = []
        for i, s in enumerate(self.summands):
            off = (n - s.generator_degree) % 8
            for sign, word in _words_for(s.kind, part, off):
                out.append(BasisLabel(i, sign, word))
        return out

    def generator(self, i: int) -> Element:
        """The i-th summand generator as an element of the realized module."""
        s = self.summands[i]
        part = s.generator_part
        deg = s.generator_degree
        _, _, coords = _tables.GENERATOR[s.kind]
        lay = self.layouts[(part, deg)]
        raw = [0] * sum(lay.widths)
        for j, v in enumerate(coords):
            raw[lay.offsets[i] + j] = v
        G = self.realized.group(part, deg)
        return Element(part, deg, G.reduce(lay.proj.apply(raw)))


def _words_for(kind: str, part: str, offset: int) -> list[tuple[int, tuple[str, ...]]]:
    return _tables.BASIS_WORDS[kind][part].get(offset % 8, [])


def monogenic(kind: str, n: int = 0) -> FreeCRT:
    """The free module on one generator of the given kind, shifted by n."""
    return free_module([MonogenicKind(kind, n)])


def free_module(summands: Sequence[MonogenicKind]) -> FreeCRT:
    summands = tuple(summands)
    realized, layouts = direct_sum_with_layout(
        [suspend(_base_module(s.kind), s.shift) for s in summands])
    return FreeCRT(summands, realized, layouts)


# ---------------------------------------------------------------------------
# Morphisms out of a free module
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class FreeMorphism:
    """Generator images determine a CRT-morphism of free modules."""

    source: FreeCRT
    target: FreeCRT
    images: tuple[Element, ...]

    def __post_init__(self):
        self.images = tuple(self.images)
        if len(self.images) != len(self.source.summands):
            raise ValueError("one image per source summand")
        for s, x in zip(self.source.summands, self.images):
            if x.part != s.generator_part or x.degree != s.generator_degree:
                raise ValueError(
                    f"image for a {s.kind}-summand must live in part "
                    f"{s.generator_part} degree {s.generator_degree}")


def realize_morphism(source: FreeCRT, target_module: CRTModule,
                     images: Sequence[Element], check: bool = True) -> Morphism:
    """Degreewise homomorphism family sending each basis word w(b_i) to w(image_i).

    The target may be any CRT-module.  With check=True the family is
    verified to commute with all eight operations; a failure signals a
    transcription error in the tables or an invalid image.
    """
    fam: Morphism = {}
    for part in PARTS:
        for n in range(8):
            src_group = source.realized.group(part, n)
            tgt_group = target_module.group(part, n)
            cols = []
            for i, s in enumerate(source.summands):
                off = (n - s.generator_degree) % 8
                for sign, word in _words_for(s.kind, part, off):
                    y = act(target_module, word, images[i])
                    cols.append([sign * v for v in y.vec])
            raw = IntMatrix.from_cols(cols, rows=tgt_group.ngens)
            lay = source.layouts[(part, n)]
            fam[(part, n)] = GroupHom(src_group, tgt_group, raw * lay.reps)
    if check and not morphism_commutes(source.realized, target_module, fam):
        raise ValueError("realized family does not commute with the operations")
    return fam


def morphism_realize(m: FreeMorphism, check: bool = True) -> Morphism:
    return realize_morphism(m.source, m.target.realized, m.images, check=check)


def compose_morphisms(g: Morphism, f: Morphism) -> Morphism:
    from .zlinalg import hom_compose
    out = {}
    for part in PARTS:
        for n in range(8):
            out[(part, n)] = hom_compose(g[(part, n)], f[(part, n)])
    return out


def free_to_json(F: FreeCRT) -> dict:
    """Summand list; the realized module is reconstructed on load."""
    return {"summands": [[s.kind, s.shift] for s in F.summands]}


def free_from_json(obj: dict) -> FreeCRT:
    return free_module([MonogenicKind(k, s) for k, s in obj["summands"]])


def free_morphism_to_json(m: FreeMorphism) -> dict:
    """Source and target summand lists plus generator image vectors."""
    return {
        "source": free_to_json(m.source),
        "target": free_to_json(m.target),
        "images": [list(x.vec) for x in m.images],
    }


def free_morphism_from_json(obj: dict) -> FreeMorphism:
    source = free_from_json(obj["source"])
    target = free_from_json(obj["target"])
    images = [Element(s.generator_part, s.generator_degree, tuple(v))
              for s, v in zip(source.summands, obj["images"])]
    return FreeMorphism(source, target, images)


def find_free_isomorphism(F: FreeCRT, M: CRTModule, bound: int = 2) -> Optional[Morphism]:
    """Search for an isomorphism from a free module onto M.

    A morphism out of F is a choice of generator images, so candidates are
    enumerated over small coordinate boxes; this covers modules with free
    parts, which the generic finite-group isomorphism search refuses.
    """
    import itertools

    from .crt_core import morphism_is_iso

    for p in PARTS:
        for n in range(8):
            if F.realized.group(p, n) != M.group(p, n):
                return None
    boxes = []
    for i, s in enumerate(F.summands):
        G = M.group(s.generator_part, s.generator_degree)
        rng = sorted(range(-bound, bound + 1), key=abs)
        boxes.append([G.reduce(v) for v in itertools.product(rng, repeat=G.ngens)])
    for combo in itertools.product(*boxes):
        images = [Element(s.generator_part, s.generator_degree, v)
                  for s, v in zip(F.summands, combo)]
        try:
            fam = realize_morphism(F, M, images, check=True)
        except ValueError:
            continue
        if morphism_is_iso(fam):
            return fam
    return None
