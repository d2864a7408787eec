"""Exact integer linear algebra for finitely generated abelian groups.

Everything downstream (graded modules, tensor products, the extension
solver) reduces to computations with integer matrices: Smith normal form,
kernels, images, cokernels and exactness of maps between finitely
generated abelian groups in invariant-factor form.  All arithmetic is
exact; intermediate Smith-form entries can blow up, so plain Python
integers (arbitrary precision) are mandatory.

Groups are always kept canonical: torsion coefficients >= 2 in ascending
divisibility order, followed by the free rank.  Two groups are equal iff
their fields are equal, and two homomorphisms are equal iff their reduced
matrices are equal.

>>> group_from_presentation(IntMatrix.diag([2, 3]))
FinAbGroup(torsion=(6,), free_rank=0)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Iterator, Optional, Sequence

Vec = tuple[int, ...]


class CompositionError(ValueError):
    """Raised when homomorphisms are combined along mismatched groups."""


# ---------------------------------------------------------------------------
# Integer matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    """Immutable rectangular integer matrix; rows*cols may be zero."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimensions")
        if len(self.entries) != self.rows:
            raise ValueError("row count mismatch")
        if any(len(row) != self.cols for row in self.entries):
            raise ValueError("ragged matrix")

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in row) for row in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return IntMatrix(len(rows), cols, tuple(rows))

    @staticmethod
    def zeros(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def diag(values: Sequence[int], rows: Optional[int] = None, cols: Optional[int] = None) -> "IntMatrix":
        values = list(values)
        if rows is None:
            rows = len(values)
        if cols is None:
            cols = len(values)
        return IntMatrix(
            rows, cols,
            tuple(tuple(values[i] if i == j and i < len(values) else 0 for j in range(cols)) for i in range(rows)),
        )

    @staticmethod
    def from_cols(cols: Sequence[Sequence[int]], rows: Optional[int] = None) -> "IntMatrix":
        cols = [tuple(c) for c in cols]
        if rows is None:
            rows = len(cols[0]) if cols else 0
        return IntMatrix(rows, len(cols), tuple(tuple(c[i] for c in cols) for i in range(rows)))

    def col(self, j: int) -> Vec:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[Vec]:
        return [self.col(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        if self.rows == 0:
            return IntMatrix(self.cols, 0, tuple(() for _ in range(self.cols)))
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ot = other.transpose().entries
        return IntMatrix(
            self.rows, other.cols,
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in ot) for row in self.entries),
        )

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntMatrix(
            self.rows, self.cols,
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)),
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(k * x for x in row) for row in self.entries))

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        return IntMatrix(self.rows, self.cols + other.cols,
                         tuple(r1 + r2 for r1, r2 in zip(self.entries, other.entries)))

    def apply(self, v: Sequence[int]) -> Vec:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    def det(self) -> int:
        """Determinant by fraction-free Gaussian elimination (Bareiss)."""
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(row) for row in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """U*A*V = D with U, V unimodular and D diagonal, d1 | d2 | ..."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    invariant_factors: tuple[int, ...]


class _SnfWorker:
    """Mutable Smith-form computation tracking U, U^-1, V, V^-1."""

    def __init__(self, A: IntMatrix):
        self.m, self.n = A.rows, A.cols
        self.M = [list(row) for row in A.entries]
        self.U = [[1 if i == j else 0 for j in range(self.m)] for i in range(self.m)]
        self.Ui = [[1 if i == j else 0 for j in range(self.m)] for i in range(self.m)]
        self.V = [[1 if i == j else 0 for j in range(self.n)] for i in range(self.n)]
        self.Vi = [[1 if i == j else 0 for j in range(self.n)] for i in range(self.n)]

    # Row operations act on the left; mirrored in U, inverted in Ui columns.
    def swap_rows(self, i, j):
        if i == j:
            return
        self.M[i], self.M[j] = self.M[j], self.M[i]
        self.U[i], self.U[j] = self.U[j], self.U[i]
        for r in self.Ui:
            r[i], r[j] = r[j], r[i]

    def negate_row(self, i):
        self.M[i] = [-x for x in self.M[i]]
        self.U[i] = [-x for x in self.U[i]]
        for r in self.Ui:
            r[i] = -r[i]

    def addmul_row(self, i, j, q):
        # row_i += q * row_j
        if q == 0:
            return
        self.M[i] = [a + q * b for a, b in zip(self.M[i], self.M[j])]
        self.U[i] = [a + q * b for a, b in zip(self.U[i], self.U[j])]
        for r in self.Ui:
            r[j] -= q * r[i]

    # Column operations act on the right; mirrored in V, inverted in Vi rows.
    def swap_cols(self, i, j):
        if i == j:
            return
        for r in self.M:
            r[i], r[j] = r[j], r[i]
        for r in self.V:
            r[i], r[j] = r[j], r[i]
        self.Vi[i], self.Vi[j] = self.Vi[j], self.Vi[i]

    def addmul_col(self, i, j, q):
        # col_i += q * col_j
        if q == 0:
            return
        for r in self.M:
            r[i] += q * r[j]
        for r in self.V:
            r[i] += q * r[j]
        self.Vi[j] = [a - q * b for a, b in zip(self.Vi[j], self.Vi[i])]

    def _pivot(self, t):
        """Smallest nonzero absolute value; ties broken by row then column."""
        best = None
        for i in range(t, self.m):
            row = self.M[i]
            for j in range(t, self.n):
                x = row[j]
                if x != 0 and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        return best[1], best[2]
        return (best[1], best[2]) if best else None

    def _eliminate(self, start):
        """Diagonalize the submatrix at rows/cols >= start."""
        t = start
        while self._pivot(t) is not None:
            # Re-selecting the minimal pivot after every reduction pass keeps
            # the multipliers small; swapping remainders in mid-pass makes
            # intermediate entries explode.
            while True:
                i, j = self._pivot(t)
                self.swap_rows(t, i)
                self.swap_cols(t, j)
                if self.M[t][t] < 0:
                    self.negate_row(t)
                p = self.M[t][t]
                for i in range(t + 1, self.m):
                    q = self.M[i][t] // p
                    if q:
                        self.addmul_row(i, t, -q)
                for j in range(t + 1, self.n):
                    q = self.M[t][j] // p
                    if q:
                        self.addmul_col(j, t, -q)
                if (all(self.M[i][t] == 0 for i in range(t + 1, self.m))
                        and all(self.M[t][j] == 0 for j in range(t + 1, self.n))):
                    break
            t += 1

    def run(self):
        self._eliminate(0)
        k = min(self.m, self.n)
        while True:
            for i in range(k):
                if self.M[i][i] < 0:
                    self.negate_row(i)
            bad = None
            for i in range(k - 1):
                a, b = self.M[i][i], self.M[i + 1][i + 1]
                if a != 0 and b != 0 and b % a != 0:
                    bad = i
                    break
            if bad is None:
                break
            # Merge the 2x2 block and re-diagonalize from that index.
            self.addmul_col(bad, bad + 1, 1)
            self._eliminate(bad)


_SNF_CACHE: dict[tuple, tuple[IntMatrix, IntMatrix, IntMatrix, IntMatrix, IntMatrix]] = {}


def _snf_full(A: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix, IntMatrix, IntMatrix]:
    """(U, Uinv, D, V, Vinv) with U*A*V = D; cached, deterministic."""
    key = (A.rows, A.cols, A.entries)
    hit = _SNF_CACHE.get(key)
    if hit is not None:
        return hit
    w = _SnfWorker(A)
    w.run()
    out = (
        IntMatrix.from_rows(w.U, cols=A.rows),
        IntMatrix.from_rows(w.Ui, cols=A.rows),
        IntMatrix.from_rows(w.M, cols=A.cols),
        IntMatrix.from_rows(w.V, cols=A.cols),
        IntMatrix.from_rows(w.Vi, cols=A.cols),
    )
    if len(_SNF_CACHE) > 200000:
        _SNF_CACHE.clear()
    _SNF_CACHE[key] = out
    return out


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form U*A*V = D.

    >>> smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]])).invariant_factors
    (2, 4)
    """
    U, _, D, V, _ = _snf_full(A)
    diag = [D.entries[i][i] for i in range(min(A.rows, A.cols))]
    inv = tuple(d for d in diag if d != 0)
    return SmithDecomposition(U, D, V, inv)


def _diag_of(A: IntMatrix, k: int) -> list[int]:
    return [A.entries[i][i] if i < min(A.rows, A.cols) else 0 for i in range(k)]


# ---------------------------------------------------------------------------
# Linear solving over Z
# ---------------------------------------------------------------------------


def solve_int(A: IntMatrix, b: Sequence[int]) -> Optional[Vec]:
    """One integer solution of A x = b, or None."""
    U, _, D, V, _ = _snf_full(A)
    c = U.apply(b)
    y = [0] * A.cols
    d = _diag_of(D, max(A.rows, A.cols))
    for i in range(A.rows):
        di = d[i]
        if di == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % di != 0:
                return None
            y[i] = c[i] // di
    return V.apply(y)


def kernel_lattice(A: IntMatrix) -> IntMatrix:
    """Columns generate {x : A x = 0} as a lattice."""
    _, _, D, V, _ = _snf_full(A)
    d = _diag_of(D, A.cols)
    cols = [V.col(j) for j in range(A.cols) if d[j] == 0]
    return IntMatrix.from_cols(cols, rows=A.cols)


def lattice_basis(L: IntMatrix) -> IntMatrix:
    """A Z-basis (as columns) of the column span of L."""
    _, Ui, D, _, _ = _snf_full(L)
    d = _diag_of(D, min(L.rows, L.cols))
    cols = [tuple(d[i] * x for x in Ui.col(i)) for i in range(len(d)) if d[i] != 0]
    return IntMatrix.from_cols(cols, rows=L.rows)


def lattice_contains(L: IntMatrix, x: Sequence[int]) -> bool:
    return solve_int(L, x) is not None


# ---------------------------------------------------------------------------
# Finitely generated abelian groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FinAbGroup:
    """Canonical form: torsion t1 | t2 | ... (each >= 2), then free rank."""

    torsion: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for t in self.torsion:
            if t < 2:
                raise ValueError("torsion coefficients must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError("torsion coefficients must form a divisibility chain")

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def invariants(self) -> Vec:
        """Invariant per generator; 0 marks a free generator."""
        return self.torsion + (0,) * self.free_rank

    def order(self) -> Optional[int]:
        if self.free_rank:
            return None
        n = 1
        for t in self.torsion:
            n *= t
        return n

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def reduce(self, v: Sequence[int]) -> Vec:
        if len(v) != self.ngens:
            raise ValueError("element length mismatch")
        return tuple(x % t if t else x for x, t in zip(v, self.invariants))

    def zero(self) -> Vec:
        return (0,) * self.ngens

    def elements(self) -> Iterator[Vec]:
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite group")
        yield from itertools.product(*(range(t) for t in self.torsion))

    def element_order(self, v: Sequence[int]) -> int:
        if not self.is_finite():
            raise ValueError("element order only for finite groups")
        o = 1
        for x, t in zip(v, self.torsion):
            ox = t // gcd(x, t)
            o = o * ox // gcd(o, ox)
        return o

    def relation_matrix(self) -> IntMatrix:
        """Columns t_j * e_j for the torsion generators."""
        cols = [tuple(t if i == j else 0 for i in range(self.ngens)) for j, t in enumerate(self.torsion)]
        return IntMatrix.from_cols(cols, rows=self.ngens)

    def __str__(self) -> str:
        if self.is_trivial():
            return "0"
        parts = [f"Z_{t}" for t in self.torsion]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return "+".join(parts)


ZERO_GROUP = FinAbGroup()
Z = FinAbGroup(free_rank=1)


def Zmod(n: int) -> FinAbGroup:
    """Cyclic group of order n, with the convention Z_1 = 0."""
    if n < 1:
        raise ValueError("modulus must be >= 1")
    return ZERO_GROUP if n == 1 else FinAbGroup((n,))


def group_from_invariants(values: Sequence[int]) -> FinAbGroup:
    """Canonical form of a direct sum of Z_{n_i} (n_i = 0 meaning Z)."""
    return _quotient_data(len(values), IntMatrix.diag(list(values)))[0]


# ---------------------------------------------------------------------------
# Presentations and subquotients
# ---------------------------------------------------------------------------


def _quotient_data(n: int, rels: IntMatrix) -> tuple[FinAbGroup, IntMatrix, IntMatrix]:
    """Z^n modulo the column span of rels.

    Returns (group, proj, reps): proj maps ambient coordinates to canonical
    generator coordinates, reps lifts canonical generators back to Z^n, and
    proj * reps is the identity on the group.
    """
    if rels.rows != n:
        raise ValueError("relation matrix has wrong number of rows")
    U, Ui, D, _, _ = _snf_full(rels)
    d = _diag_of(D, n)
    keep = [i for i in range(n) if d[i] != 1]
    torsion = tuple(d[i] for i in keep if d[i] >= 2)
    free = sum(1 for i in keep if d[i] == 0)
    group = FinAbGroup(torsion, free)
    proj_rows = [tuple(x % d[i] if d[i] else x for x in U.entries[i]) for i in keep]
    proj = IntMatrix.from_rows(proj_rows, cols=n)
    reps = IntMatrix.from_cols([Ui.col(i) for i in keep], rows=n)
    return group, proj, reps


def group_from_presentation(relations: IntMatrix) -> FinAbGroup:
    """Z^m / (column span of relations); m = relations.rows.

    >>> group_from_presentation(IntMatrix.from_rows([[4]]))
    FinAbGroup(torsion=(4,), free_rank=0)
    """
    return _quotient_data(relations.rows, relations)[0]


def group_presentation_matrix(G: FinAbGroup) -> IntMatrix:
    """A presentation whose quotient is G itself (diagonal invariants)."""
    return IntMatrix.diag(list(G.invariants), G.ngens, G.ngens)


# ---------------------------------------------------------------------------
# Homomorphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupHom:
    """Matrix of a homomorphism, codomain generators x domain generators.

    Entries are stored reduced modulo the codomain invariants (free rows
    unreduced), so equality of maps is equality of fields.  Construction
    fails unless the matrix is well-defined on the domain relations.
    """

    domain: FinAbGroup
    codomain: FinAbGroup
    matrix: IntMatrix

    def __post_init__(self):
        m = self.matrix
        if (m.rows, m.cols) != (self.codomain.ngens, self.domain.ngens):
            raise ValueError(
                f"matrix shape {m.rows}x{m.cols} does not match "
                f"{self.codomain.ngens}x{self.domain.ngens}")
        dom_inv = self.domain.invariants
        cod_inv = self.codomain.invariants
        reduced = []
        for i, row in enumerate(m.entries):
            e = cod_inv[i]
            new_row = []
            for j, x in enumerate(row):
                d = dom_inv[j]
                if e == 0:
                    if x * d != 0:
                        raise ValueError(f"entry ({i},{j}) not well-defined: torsion into free")
                    new_row.append(x)
                else:
                    if (x * d) % e != 0:
                        raise ValueError(f"entry ({i},{j})={x} not well-defined mod {e}")
                    new_row.append(x % e)
            reduced.append(tuple(new_row))
        object.__setattr__(self, "matrix", IntMatrix(m.rows, m.cols, tuple(reduced)))

    def apply(self, v: Sequence[int]) -> Vec:
        return self.codomain.reduce(self.matrix.apply(v))

    def is_zero_map(self) -> bool:
        return self.matrix.is_zero()

    def __neg__(self) -> "GroupHom":
        return GroupHom(self.domain, self.codomain, -self.matrix)

    def __add__(self, other: "GroupHom") -> "GroupHom":
        if self.domain != other.domain or self.codomain != other.codomain:
            raise CompositionError("sum of homs with different endpoints")
        return GroupHom(self.domain, self.codomain, self.matrix + other.matrix)

    def __sub__(self, other: "GroupHom") -> "GroupHom":
        return self + (-other)


def identity_hom(G: FinAbGroup) -> GroupHom:
    return GroupHom(G, G, IntMatrix.identity(G.ngens))


def zero_hom(domain: FinAbGroup, codomain: FinAbGroup) -> GroupHom:
    return GroupHom(domain, codomain, IntMatrix.zeros(codomain.ngens, domain.ngens))


def hom_from_cols(domain: FinAbGroup, codomain: FinAbGroup, cols: Sequence[Sequence[int]]) -> GroupHom:
    return GroupHom(domain, codomain, IntMatrix.from_cols(cols, rows=codomain.ngens))


def hom_compose(g: GroupHom, f: GroupHom) -> GroupHom:
    """g after f."""
    if f.codomain != g.domain:
        raise CompositionError(f"cannot compose: {f.codomain} != {g.domain}")
    return GroupHom(f.domain, g.codomain, g.matrix * f.matrix)


def hom_scale(f: GroupHom, k: int) -> GroupHom:
    return GroupHom(f.domain, f.codomain, f.matrix.scale(k))


def hom_kernel(f: GroupHom) -> tuple[FinAbGroup, GroupHom]:
    """Kernel subgroup K with its inclusion into the domain."""
    n = f.domain.ngens
    A = f.matrix.hstack(f.codomain.relation_matrix())
    ker = kernel_lattice(A)
    xs = IntMatrix.from_rows([ker.entries[i] for i in range(n)], cols=ker.cols)
    # The solution lattice always contains the domain relations.
    L = xs.hstack(f.domain.relation_matrix())
    return _subquotient(L, f.domain)


def hom_image(f: GroupHom) -> tuple[FinAbGroup, GroupHom]:
    """Image subgroup with its inclusion into the codomain."""
    L = f.matrix.hstack(f.codomain.relation_matrix())
    return _subquotient(L, f.codomain)


def hom_cokernel(f: GroupHom) -> tuple[FinAbGroup, GroupHom]:
    """Cokernel with the projection from the codomain."""
    rels = f.matrix.hstack(f.codomain.relation_matrix())
    Q, proj, _ = _quotient_data(f.codomain.ngens, rels)
    return Q, GroupHom(f.codomain, Q, proj)


def cokernel_data(f: GroupHom) -> tuple[FinAbGroup, GroupHom, IntMatrix]:
    """Cokernel, projection, and a lift matrix for the canonical generators."""
    rels = f.matrix.hstack(f.codomain.relation_matrix())
    Q, proj, reps = _quotient_data(f.codomain.ngens, rels)
    return Q, GroupHom(f.codomain, Q, proj), reps


def _subquotient(L: IntMatrix, ambient: FinAbGroup) -> tuple[FinAbGroup, GroupHom]:
    """(span of L columns)/(ambient relations) as a subgroup of ambient.

    L's span must contain the ambient relation lattice.  Returns the
    canonical group K together with the inclusion K -> ambient.
    """
    B = lattice_basis(L)
    R = ambient.relation_matrix()
    coeffs = []
    for j in range(R.cols):
        sol = solve_int(B, R.col(j))
        if sol is None:
            raise ValueError("subquotient: relations not inside the lattice")
        coeffs.append(sol)
    C = IntMatrix.from_cols(coeffs, rows=B.cols)
    K, _, reps = _quotient_data(B.cols, C)
    incl = GroupHom(K, ambient, B * reps)
    return K, incl


def subgroup_contains(incl: GroupHom, x: Sequence[int]) -> bool:
    """Is x (in ambient coordinates) inside the image of the inclusion?"""
    L = incl.matrix.hstack(incl.codomain.relation_matrix())
    return lattice_contains(L, x)


def hom_preimage(f: GroupHom, y: Sequence[int]) -> Optional[Vec]:
    """Some x with f(x) = y, or None."""
    A = f.matrix.hstack(f.codomain.relation_matrix())
    sol = solve_int(A, y)
    if sol is None:
        return None
    return f.domain.reduce(sol[: f.domain.ngens])


def subgroups_equal(incl_a: GroupHom, incl_b: GroupHom) -> bool:
    """Mutual membership of two subgroups of the same ambient group."""
    if incl_a.codomain != incl_b.codomain:
        raise CompositionError("subgroups of different ambient groups")
    amb = incl_a.codomain
    La = incl_a.matrix.hstack(amb.relation_matrix())
    Lb = incl_b.matrix.hstack(amb.relation_matrix())
    return (all(lattice_contains(Lb, incl_a.matrix.col(j)) for j in range(incl_a.matrix.cols))
            and all(lattice_contains(La, incl_b.matrix.col(j)) for j in range(incl_b.matrix.cols)))


def is_exact_at(f: GroupHom, g: GroupHom) -> bool:
    """Exactness at the middle of  . --f--> . --g--> .

    Requires g∘f = 0; image(f) and kernel(g) are compared as subgroups
    (mutual membership, not just isomorphism).
    """
    if f.codomain != g.domain:
        raise CompositionError("maps are not composable")
    if not hom_compose(g, f).is_zero_map():
        raise ValueError("composite g∘f is nonzero")
    _, im = hom_image(f)
    _, ker = hom_kernel(g)
    return subgroups_equal(im, ker)


# ---------------------------------------------------------------------------
# Brute-force oracle (relies only on element arithmetic)
# ---------------------------------------------------------------------------

ORACLE_BOUND = 4096


def oracle_enumerate(f: GroupHom) -> tuple[list[Vec], list[Vec]]:
    """Exhaustive (kernel elements, image elements) for small finite groups."""
    od, oc = f.domain.order(), f.codomain.order()
    if od is None or oc is None:
        raise ValueError("oracle requires finite groups")
    if od > ORACLE_BOUND or oc > ORACLE_BOUND:
        raise ValueError(f"oracle bound {ORACLE_BOUND} exceeded")
    kernel = []
    image = set()
    for v in f.domain.elements():
        w = tuple(sum(row[j] * v[j] for j in range(len(v))) % t
                  for row, t in zip(f.matrix.entries, f.codomain.invariants))
        image.add(w)
        if all(x == 0 for x in w):
            kernel.append(v)
    return kernel, sorted(image)


# ---------------------------------------------------------------------------
# Extension candidates
# ---------------------------------------------------------------------------


def _partitions(n: int) -> Iterator[tuple[int, ...]]:
    def rec(n, maxpart):
        if n == 0:
            yield ()
            return
        for first in range(min(n, maxpart), 0, -1):
            for rest in rec(n - first, first):
                yield (first,) + rest
    yield from rec(n, n)


def abelian_groups_of_order(n: int) -> list[FinAbGroup]:
    """All isomorphism classes of abelian groups of order n."""
    if n < 1:
        raise ValueError("order must be positive")
    if n == 1:
        return [ZERO_GROUP]
    factors = {}
    m, p = n, 2
    while p * p <= m:
        while m % p == 0:
            factors[p] = factors.get(p, 0) + 1
            m //= p
        p += 1
    if m > 1:
        factors[m] = factors.get(m, 0) + 1
    per_prime = [[(p, part) for part in _partitions(e)] for p, e in sorted(factors.items())]
    out = []
    for combo in itertools.product(*per_prime):
        width = max(len(part) for _, part in combo)
        invs = []
        for i in range(width):
            v = 1
            for p, part in combo:
                if i < len(part):
                    v *= p ** part[i]
            invs.append(v)
        out.append(FinAbGroup(tuple(sorted(invs))))
    return sorted(out, key=_group_sort_key)


def _group_sort_key(G: FinAbGroup):
    return (G.free_rank, len(G.torsion), G.torsion)


def _annihilated_elements(G: FinAbGroup, d: int) -> list[Vec]:
    """Elements x of a finite group with d*x = 0."""
    return [x for x in G.elements() if all((d * xi) % t == 0 for xi, t in zip(x, G.torsion))]


def injections(sub: FinAbGroup, G: FinAbGroup) -> Iterator[GroupHom]:
    """All injective homomorphisms sub -> G (finite groups)."""
    so = sub.order()
    if so is None or G.order() is None:
        raise ValueError("injection enumeration requires finite groups")
    pools = [_annihilated_elements(G, t) for t in sub.torsion]
    for cols in itertools.product(*pools):
        f = hom_from_cols(sub, G, [list(c) for c in cols])
        seen = set()
        for v in sub.elements():
            seen.add(f.apply(v))
        if len(seen) == so:
            yield f


def extension_candidates(sub: FinAbGroup, quot: FinAbGroup, bound: int = 4096) -> list[FinAbGroup]:
    """Isomorphism classes G fitting 0 -> sub -> G -> quot -> 0.

    Brute force: enumerate abelian groups of order |sub|*|quot| and search
    for an injection of sub whose cokernel is quot.

    >>> [str(G) for G in extension_candidates(Zmod(2), Zmod(2))]
    ['Z_4', 'Z_2+Z_2']
    """
    so, qo = sub.order(), quot.order()
    if so is None or qo is None:
        raise ValueError("extension candidates require finite groups")
    if so * qo > bound:
        raise ValueError(f"order {so * qo} exceeds bound {bound}")
    if sub.is_trivial():
        return [quot]
    if quot.is_trivial():
        return [sub]
    out = []
    for G in abelian_groups_of_order(so * qo):
        for f in injections(sub, G):
            coker, _ = hom_cokernel(f)
            if coker == quot:
                out.append(G)
                break
    return sorted(out, key=_group_sort_key)


_AUT_CACHE: dict[tuple, list[GroupHom]] = {}


def automorphisms(G: FinAbGroup) -> list[GroupHom]:
    """All automorphisms of a finite group (enumerated once, cached)."""
    if not G.is_finite():
        raise ValueError("automorphism enumeration requires a finite group")
    key = G.torsion
    hit = _AUT_CACHE.get(key)
    if hit is not None:
        return hit
    order = G.order()
    out = []
    pools = [_annihilated_elements(G, t) for t in G.torsion]
    for cols in itertools.product(*pools):
        f = hom_from_cols(G, G, [list(c) for c in cols])
        seen = set()
        for v in G.elements():
            seen.add(f.apply(v))
        if len(seen) == order:
            out.append(f)
    _AUT_CACHE[key] = out
    return out


def hom_group_elements(A: FinAbGroup, B: FinAbGroup) -> list[GroupHom]:
    """All homomorphisms A -> B; both groups must be finite."""
    if not (A.is_finite() and B.is_finite()):
        raise ValueError("hom enumeration requires finite groups")
    pools = [_annihilated_elements(B, d) for d in A.torsion]
    return [hom_from_cols(A, B, [list(c) for c in cols]) for cols in itertools.product(*pools)]


# ---------------------------------------------------------------------------
# Tensor and Tor of plain abelian groups
# ---------------------------------------------------------------------------


def fin_ab_tensor(A: FinAbGroup, B: FinAbGroup) -> FinAbGroup:
    """A ⊗_Z B in canonical form."""
    invs = []
    for a in A.invariants:
        for b in B.invariants:
            if a == 0:
                invs.append(b)
            elif b == 0:
                invs.append(a)
            else:
                invs.append(gcd(a, b))
    return group_from_invariants(invs)


def fin_ab_tor(A: FinAbGroup, B: FinAbGroup) -> FinAbGroup:
    """Tor_1^Z(A, B): pairwise gcd of the torsion parts."""
    return group_from_invariants([gcd(a, b) for a in A.torsion for b in B.torsion])


# ---------------------------------------------------------------------------
# Linear systems with modular rows (used by the extension solver)
# ---------------------------------------------------------------------------


def solve_matrix_system(
    nrows: int,
    ncols: int,
    equations: list[tuple[dict[tuple[int, int], int], int, int]],
) -> Optional[IntMatrix]:
    """Solve for an integer nrows x ncols matrix X.

    Each equation is (coeffs, rhs, modulus): sum of coeffs[(i,j)] * X[i][j]
    ≡ rhs (mod modulus), with modulus 0 meaning equality over Z.
    """
    nvars = nrows * ncols
    mod_rows = [k for k, (_, _, m) in enumerate(equations) if m != 0]
    slack = {k: t for t, k in enumerate(mod_rows)}
    total = nvars + len(mod_rows)
    rows, rhs = [], []
    for k, (coeffs, r, m) in enumerate(equations):
        row = [0] * total
        for (i, j), c in coeffs.items():
            row[i * ncols + j] += c
        if m != 0:
            row[nvars + slack[k]] = m
        rows.append(row)
        rhs.append(r)
    A = IntMatrix.from_rows(rows, cols=total)
    sol = solve_int(A, rhs)
    if sol is None:
        return None
    return IntMatrix.from_rows(
        [[sol[i * ncols + j] for j in range(ncols)] for i in range(nrows)], cols=ncols)
