"""Exact linear algebra over cyclotomic fields.

Vectors and matrices are plain tuples of CycloNum, so everything stays
immutable and hashable (group closures use matrices as dict keys).
On top of that sit the two structures the monodromy checks revolve
around: Hermitian forms with their kernels and definiteness tests,
and finitely generated Z-lattices inside Q(zeta)^n handled through an
integer Hermite normal form.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .cyclo import CycloField, CycloNum, parse_value

Vector = tuple[CycloNum, ...]
Matrix = tuple[Vector, ...]


# -- basic operations -----------------------------------------------------


def vector(field: CycloField, entries: Iterable, chi: CycloNum | None = None) -> Vector:
    """Build a vector from CycloNum, rational, or grammar-string entries."""
    out = []
    for e in entries:
        if isinstance(e, CycloNum):
            if e.field is not field:
                raise ValueError("mixed conductors in one vector")
            out.append(e)
        elif isinstance(e, str):
            out.append(parse_value(e, field, chi=chi))
        else:
            out.append(field.from_rational(e))
    return tuple(out)


def matrix(field: CycloField, rows: Iterable[Iterable], chi: CycloNum | None = None) -> Matrix:
    return tuple(vector(field, r, chi=chi) for r in rows)


def identity(field: CycloField, n: int) -> Matrix:
    return tuple(
        tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)
    )


def mat_vec(a: Matrix, v: Vector) -> Vector:
    return tuple(sum((r[j] * v[j] for j in range(1, len(v))), r[0] * v[0]) for r in a)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(_dot(ra, cb) for cb in bt) for ra in a)


def _dot(u: Vector, v: Vector) -> CycloNum:
    acc = u[0] * v[0]
    for x, y in zip(u[1:], v[1:]):
        acc = acc + x * y
    return acc


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def conj_vector(v: Vector) -> Vector:
    return tuple(x.conjugate() for x in v)


def conj_matrix(a: Matrix) -> Matrix:
    return tuple(conj_vector(r) for r in a)


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


def vec_scale(c, v: Vector) -> Vector:
    return tuple(c * x for x in v)


def is_zero_vector(v: Vector) -> bool:
    return all(x.is_zero() for x in v)


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(vec_sub(ra, rb) for ra, rb in zip(a, b))


def mat_scale(c, a: Matrix) -> Matrix:
    return tuple(vec_scale(c, r) for r in a)


# -- elimination ----------------------------------------------------------


def _echelon(rows: list[list[CycloNum]]) -> tuple[list[list[CycloNum]], list[int]]:
    """In-place reduced row echelon form; returns (rows, pivot columns)."""
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((k for k in range(r, len(rows)) if not rows[k][c].is_zero()), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [inv * x for x in rows[r]]
        for k in range(len(rows)):
            if k != r and not rows[k][c].is_zero():
                f = rows[k][c]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def mat_rank(a: Matrix) -> int:
    _, pivots = _echelon([list(r) for r in a])
    return len(pivots)


def nullspace(a: Matrix) -> list[Vector]:
    """Basis of {v : a v = 0}."""
    if not a:
        return []
    field = a[0][0].field
    n = len(a[0])
    rows, pivots = _echelon([list(r) for r in a])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * n
        v[fc] = field.one
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(tuple(v))
    return basis


def solve(a: Matrix, b: Vector) -> Vector | None:
    """One solution of a x = b, or None."""
    field = b[0].field
    n = len(a[0])
    rows = [list(r) + [bv] for r, bv in zip(a, b)]
    rows, pivots = _echelon(rows)
    if n in pivots:  # pivot in the augmented column: inconsistent
        return None
    x = [field.zero] * n
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][n]
    return tuple(x)


def mat_inverse(a: Matrix) -> Matrix:
    field = a[0][0].field
    n = len(a)
    rows = [list(r) + list(e) for r, e in zip(a, identity(field, n))]
    rows, pivots = _echelon(rows)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return tuple(tuple(r[n:]) for r in rows)


def det(a: Matrix) -> CycloNum:
    field = a[0][0].field
    rows = [list(r) for r in a]
    n = len(rows)
    acc = field.one
    sign = 1
    for c in range(n):
        pr = next((k for k in range(c, n) if not rows[k][c].is_zero()), None)
        if pr is None:
            return field.zero
        if pr != c:
            rows[c], rows[pr] = rows[pr], rows[c]
            sign = -sign
        piv = rows[c][c]
        acc = acc * piv
        inv = piv.inverse()
        for k in range(c + 1, n):
            if not rows[k][c].is_zero():
                f = rows[k][c] * inv
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[c])]
    return acc if sign == 1 else -acc


# -- Hermitian forms ------------------------------------------------------


class HermitianGram:
    """A Hermitian pairing given by its Gram matrix.

    The pairing is linear in the first slot and conjugate linear in the
    second: <u, v> = u^T G conj(v). Construction checks Hermitian symmetry.
    """

    def __init__(self, gram: Matrix):
        self.gram = gram
        self.field = gram[0][0].field
        self.n = len(gram)
        for i in range(self.n):
            for j in range(self.n):
                if gram[i][j] != gram[j][i].conjugate():
                    raise ValueError(f"matrix is not Hermitian at ({i}, {j})")

    def eval(self, u: Vector, v: Vector) -> CycloNum:
        return _dot(u, mat_vec(self.gram, conj_vector(v)))

    def kernel(self) -> list[Vector]:
        """Vectors pairing to zero with everything: {v : G conj(v) = 0}."""
        return [conj_vector(v) for v in nullspace(self.gram)]

    @property
    def rank(self) -> int:
        return mat_rank(self.gram)

    @property
    def corank(self) -> int:
        return self.n - self.rank

    def is_preserved_by(self, m: Matrix) -> bool:
        """Whether <m u, m v> = <u, v>: m^T G conj(m) = G."""
        return mat_mul(transpose(m), mat_mul(self.gram, conj_matrix(m))) == self.gram

    def principal_minor(self, idx: Sequence[int]) -> Fraction:
        sub = tuple(tuple(self.gram[i][j] for j in idx) for i in idx)
        d = det(sub)
        if not d.is_rational():
            raise ArithmeticError("Hermitian principal minor is not rational")
        return d.rational_value()

    def is_negative_semidefinite(self) -> bool:
        """Checked through every principal minor: (-1)^k det >= 0.

        Exact, and valid for singular forms where leading minors alone
        would not be conclusive.
        """
        for k in range(1, self.n + 1):
            s = 1 if k % 2 == 0 else -1
            for idx in combinations(range(self.n), k):
                if s * self.principal_minor(idx) < 0:
                    return False
        return True

    def is_negative_definite(self) -> bool:
        for k in range(1, self.n + 1):
            s = 1 if k % 2 == 0 else -1
            m = self.principal_minor(tuple(range(k)))
            if s * m <= 0:
                return False
        return True

    def restricted_to(self, basis: Sequence[Vector]) -> "HermitianGram":
        rows = tuple(
            tuple(self.eval(a, b) for b in basis) for a in basis
        )
        return HermitianGram(rows)


# -- integer lattices ------------------------------------------------------


def _hnf(rows: list[list[int]]) -> list[list[int]]:
    """Row Hermite normal form: positive pivots, entries above reduced."""
    rows = [r[:] for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    out: list[list[int]] = []
    r = 0
    for c in range(ncols):
        # gather nonzero entries in column c at or below r by gcd reduction
        while True:
            live = [k for k in range(r, len(rows)) if rows[k][c]]
            if not live:
                break
            k = min(live, key=lambda k: abs(rows[k][c]))
            rows[r], rows[k] = rows[k], rows[r]
            done = True
            for k in range(r + 1, len(rows)):
                if rows[k][c]:
                    q = rows[k][c] // rows[r][c]
                    rows[k] = [x - q * y for x, y in zip(rows[k], rows[r])]
                    if rows[k][c]:
                        done = False
            if done:
                break
        if r < len(rows) and rows[r][c]:
            if rows[r][c] < 0:
                rows[r] = [-x for x in rows[r]]
            r += 1
        if r == len(rows):
            break
    rows = [row for row in rows[:r] if any(row)]
    # reduce entries above each pivot into [0, pivot)
    piv = []
    for row in rows:
        c = next(j for j, x in enumerate(row) if x)
        piv.append(c)
    for k in range(len(rows) - 1, -1, -1):
        c = piv[k]
        p = rows[k][c]
        for up in range(k):
            q = rows[up][c] // p
            if q:
                rows[up] = [x - q * y for x, y in zip(rows[up], rows[k])]
    return rows


class ZLattice:
    """Finitely generated Z-submodule of Q(zeta_N)^n.

    Vectors are flattened to rational coordinates (power basis times
    ambient dimension), cleared to a common denominator and kept as an
    integer HNF basis. Membership, canonical reduction and equality are
    all exact.
    """

    def __init__(self, field: CycloField, dim: int, generators: Iterable[Vector]):
        self.field = field
        self.dim = dim
        self.flat_dim = dim * field.degree
        gens = [self._flatten(v) for v in generators]
        den = 1
        for g in gens:
            for q in g:
                den = den * q.denominator // _gcd(den, q.denominator)
        self.scale = den
        int_rows = [[int(q * den) for q in g] for g in gens]
        self.rows = _hnf(int_rows)
        self._pivots = [next(j for j, x in enumerate(r) if x) for r in self.rows]

    def _flatten(self, v: Vector) -> list[Fraction]:
        if len(v) != self.dim:
            raise ValueError("wrong ambient dimension")
        out: list[Fraction] = []
        for x in v:
            if x.field is not self.field:
                raise ValueError("wrong field for lattice vector")
            out.extend(x.coeffs)
        return out

    def _unflatten(self, flat: Sequence[Fraction]) -> Vector:
        d = self.field.degree
        return tuple(
            self.field.element(flat[k * d : (k + 1) * d]) for k in range(self.dim)
        )

    @property
    def rank(self) -> int:
        return len(self.rows)

    def is_zero(self) -> bool:
        return not self.rows

    def member(self, v: Vector) -> bool:
        t = [q * self.scale for q in self._flatten(v)]
        for row, c in zip(self.rows, self._pivots):
            q = t[c] / row[c]
            if q.denominator != 1:
                return False
            if q:
                t = [x - q * y for x, y in zip(t, row)]
        return not any(t)

    def reduce(self, v: Vector) -> Vector:
        """Canonical representative of v modulo the lattice."""
        t = [q * self.scale for q in self._flatten(v)]
        for row, c in zip(self.rows, self._pivots):
            q = _floor_div(t[c], row[c])
            if q:
                t = [x - q * y for x, y in zip(t, row)]
        return self._unflatten([x / self.scale for x in t])

    def join(self, other: "ZLattice") -> "ZLattice":
        return ZLattice(self.field, self.dim, self.basis_vectors() + other.basis_vectors())

    def scaled(self, c: CycloNum) -> "ZLattice":
        return ZLattice(
            self.field, self.dim, [vec_scale(c, v) for v in self.basis_vectors()]
        )

    def transformed(self, m: Matrix) -> "ZLattice":
        return ZLattice(
            self.field, self.dim, [mat_vec(m, v) for v in self.basis_vectors()]
        )

    def basis_vectors(self) -> list[Vector]:
        return [
            self._unflatten([Fraction(x, self.scale) for x in row]) for row in self.rows
        ]

    def contains(self, other: "ZLattice") -> bool:
        return all(self.member(v) for v in other.basis_vectors())

    def __eq__(self, other):
        if not isinstance(other, ZLattice):
            return NotImplemented
        if self.field is not other.field or self.dim != other.dim:
            return False
        return self.contains(other) and other.contains(self)

    def __hash__(self):
        raise TypeError("lattices are compared by inclusion, not hashed")

    def __repr__(self):
        return f"ZLattice(n={self.field.n}, dim={self.dim}, rank={self.rank})"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a) if a else 1


def _floor_div(a: Fraction, b: int) -> int:
    # HNF pivots are positive, so Python floor division is exact here
    return a.numerator // (a.denominator * b)
