"""Exact dense linear algebra over Q and Q(i).

Vectors are plain lists of :class:`~cliffock.scalars.Scalar`; a matrix with
``nrows`` rows and ``ncols`` columns represents a linear map from a space of
dimension ``ncols`` to one of dimension ``nrows`` acting on column vectors.

Subspaces are canonicalized: the stored basis is the unique reduced row
echelon form (leading coefficient one, zeros above and below each pivot),
so two subspaces are equal iff their stored rows are equal entrywise.

Determinant lines are handled through the canonical generator convention:
the generator of ``det(S)`` is the ordered wedge of the RREF basis rows of
``S``, and every determinant-line computation in this package is a scalar
coordinate with respect to those generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .errors import InternalError, InvalidInput, NotBalanced
from .scalars import Scalar


def _as_scalar_row(row, fld):
    out = []
    for x in row:
        if not isinstance(x, Scalar):
            x = Scalar.of(x, fld)
        if x.field != fld:
            raise InvalidInput("row entry in wrong field")
        out.append(x)
    return out


class Matrix:
    __slots__ = ("rows", "nrows", "ncols", "field")

    def __init__(self, rows: Sequence[Sequence[Scalar]], ncols: int | None = None, field: str | None = None):
        rows = [list(r) for r in rows]
        if not rows and (ncols is None or field is None):
            raise InvalidInput("empty matrix needs explicit ncols and field")
        if field is None:
            field = rows[0][0].field if rows and rows[0] else None
            if field is None:
                raise InvalidInput("cannot infer field of empty-width matrix")
        if ncols is None:
            ncols = len(rows[0])
        self.rows = [_as_scalar_row(r, field) for r in rows]
        for r in self.rows:
            if len(r) != ncols:
                raise InvalidInput("ragged matrix rows")
        self.nrows = len(self.rows)
        self.ncols = ncols
        self.field = field

    # -- constructors -------------------------------------------------

    @staticmethod
    def identity(n: int, fld: str) -> "Matrix":
        one, zero = Scalar.one(fld), Scalar.zero(fld)
        return Matrix([[one if i == j else zero for j in range(n)] for i in range(n)], n, fld)

    @staticmethod
    def zeros(nrows: int, ncols: int, fld: str) -> "Matrix":
        zero = Scalar.zero(fld)
        return Matrix([[zero] * ncols for _ in range(nrows)], ncols, fld)

    @staticmethod
    def from_rows(rows, fld: str, ncols: int | None = None) -> "Matrix":
        if ncols is None:
            rows = list(rows)
            if not rows:
                raise InvalidInput("from_rows needs ncols for empty input")
            ncols = len(rows[0])
        return Matrix(rows, ncols, fld)

    @staticmethod
    def column(vec: Sequence[Scalar], fld: str) -> "Matrix":
        return Matrix([[x] for x in vec], 1, fld)

    # -- basic ops ----------------------------------------------------

    def copy_rows(self) -> list[list[Scalar]]:
        return [list(r) for r in self.rows]

    def apply(self, vec: Sequence[Scalar]) -> list[Scalar]:
        if len(vec) != self.ncols:
            raise InvalidInput(f"apply: vector length {len(vec)} != ncols {self.ncols}")
        zero = Scalar.zero(self.field)
        out = []
        for r in self.rows:
            acc = zero
            for a, x in zip(r, vec):
                if not (a.is_zero() or x.is_zero()):
                    acc = acc + a * x
            out.append(acc)
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise InvalidInput(f"matmul shape mismatch {self.shape} @ {other.shape}")
        if self.field != other.field:
            raise InvalidInput("matmul field mismatch")
        zero = Scalar.zero(self.field)
        ot = other.transpose().rows
        out = []
        for r in self.rows:
            row = []
            for c in ot:
                acc = zero
                for a, b in zip(r, c):
                    if not (a.is_zero() or b.is_zero()):
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix(out, other.ncols, self.field)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape or self.field != other.field:
            raise InvalidInput("matrix add mismatch")
        return Matrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
            self.ncols, self.field,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self.rows], self.ncols, self.field)

    def scale(self, c: Scalar) -> "Matrix":
        return Matrix([[c * a for a in r] for r in self.rows], self.ncols, self.field)

    def transpose(self) -> "Matrix":
        return Matrix(
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            self.nrows, self.field,
        )

    def conj(self) -> "Matrix":
        return Matrix([[a.conj() for a in r] for r in self.rows], self.ncols, self.field)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def column_vec(self, j: int) -> list[Scalar]:
        return [r[j] for r in self.rows]

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.rows for a in r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.field == other.field and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, tuple(tuple(r) for r in self.rows)))

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}x{self.ncols} over {self.field})"

    def stack_h(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise InvalidInput("stack_h row mismatch")
        return Matrix([r1 + r2 for r1, r2 in zip(self.rows, other.rows)],
                      self.ncols + other.ncols, self.field)

    def stack_v(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise InvalidInput("stack_v col mismatch")
        return Matrix(self.rows + other.rows, self.ncols, self.field)

    # -- elimination --------------------------------------------------

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row echelon form and the tuple of pivot columns."""
        rows = self.copy_rows()
        pivots: list[int] = []
        r = 0
        for c in range(self.ncols):
            pr = None
            for i in range(r, len(rows)):
                if not rows[i][c].is_zero():
                    pr = i
                    break
            if pr is None:
                continue
            rows[r], rows[pr] = rows[pr], rows[r]
            lead = rows[r][c]
            if not lead.is_one():
                inv = lead.inv()
                rows[r] = [inv * x for x in rows[r]]
            for i in range(len(rows)):
                if i != r and not rows[i][c].is_zero():
                    f = rows[i][c]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == len(rows):
                break
        return Matrix(rows[:r] + rows[r:], self.ncols, self.field), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace_rows(self) -> list[list[Scalar]]:
        """Basis of the kernel {v : M v = 0}, one vector per row."""
        red, pivots = self.rref()
        pivset = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivset]
        zero, one = Scalar.zero(self.field), Scalar.one(self.field)
        out = []
        for f in free:
            v = [zero] * self.ncols
            v[f] = one
            for r, c in enumerate(pivots):
                v[c] = -red.rows[r][f]
            out.append(v)
        return out

    def solve(self, rhs: Sequence[Scalar]) -> list[Scalar] | None:
        """One particular solution of M x = rhs (free coordinates zero),
        or None if the system is inconsistent."""
        if len(rhs) != self.nrows:
            raise InvalidInput("solve: rhs length mismatch")
        aug = Matrix([list(r) + [b] for r, b in zip(self.rows, rhs)],
                     self.ncols + 1, self.field)
        red, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        zero = Scalar.zero(self.field)
        x = [zero] * self.ncols
        for r, c in enumerate(pivots):
            x[c] = red.rows[r][self.ncols]
        return x

    def det(self) -> Scalar:
        if self.nrows != self.ncols:
            raise InvalidInput("det of non-square matrix")
        n = self.nrows
        rows = self.copy_rows()
        acc = Scalar.one(self.field)
        sign = 1
        for c in range(n):
            pr = None
            for i in range(c, n):
                if not rows[i][c].is_zero():
                    pr = i
                    break
            if pr is None:
                return Scalar.zero(self.field)
            if pr != c:
                rows[c], rows[pr] = rows[pr], rows[c]
                sign = -sign
            lead = rows[c][c]
            acc = acc * lead
            inv = lead.inv()
            for i in range(c + 1, n):
                if not rows[i][c].is_zero():
                    f = rows[i][c] * inv
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
        if sign < 0:
            acc = -acc
        return acc

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise InvalidInput("inverse of non-square matrix")
        aug = self.stack_h(Matrix.identity(self.nrows, self.field))
        red, pivots = aug.rref()
        if tuple(range(self.nrows)) != pivots[: self.nrows] or len(pivots) != self.nrows:
            raise InvalidInput("matrix not invertible")
        return Matrix([r[self.nrows:] for r in red.rows[: self.nrows]], self.nrows, self.field)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    # -- tensor helpers ------------------------------------------------

    def kron(self, other: "Matrix") -> "Matrix":
        """Plain Kronecker product; row/col index = i*other.n + j."""
        if self.field != other.field:
            raise InvalidInput("kron field mismatch")
        out = []
        for r1 in self.rows:
            for r2 in other.rows:
                out.append([a * b for a in r1 for b in r2])
        return Matrix(out, self.ncols * other.ncols, self.field)

    def to_json(self):
        return [[a.to_json() for a in r] for r in self.rows]

    @staticmethod
    def from_json(data, fld: str, ncols: int | None = None) -> "Matrix":
        rows = [[Scalar.from_json(a, fld) for a in r] for r in data]
        return Matrix(rows, ncols, fld) if (rows or ncols is not None) else Matrix(rows, 0, fld)


def signed_kron(f: Matrix, g: Matrix, g_parity: int, left_parities: Sequence[int]) -> Matrix:
    """Matrix of ``f (x) g`` on a graded tensor product.

    The Koszul rule gives ``(f (x) g)(x (x) y) = (-1)^{|g| |x|} f(x) (x) g(y)``,
    so the sign depends on the parity of ``g`` and on the grading of the
    source of ``f`` (``left_parities``, one bit per source coordinate).
    """
    if f.field != g.field:
        raise InvalidInput("signed_kron field mismatch")
    if len(left_parities) != f.ncols:
        raise InvalidInput("signed_kron parity vector mismatch")
    out = []
    for i, r1 in enumerate(f.rows):
        for r2 in g.rows:
            row = []
            for a, px in zip(r1, left_parities):
                for b in r2:
                    v = a * b
                    if g_parity and px and not v.is_zero():
                        v = -v
                    row.append(v)
            out.append(row)
    return Matrix(out, f.ncols * g.ncols, f.field)


# -- subspaces ---------------------------------------------------------


class Subspace:
    """A subspace of K^ambient in canonical reduced row echelon form."""

    __slots__ = ("ambient", "field", "rows", "pivots")

    def __init__(self, ambient: int, fld: str, rows: Sequence[Sequence[Scalar]] = ()):
        self.ambient = ambient
        self.field = fld
        m = Matrix([_as_scalar_row(r, fld) for r in rows], ambient, fld)
        red, pivots = m.rref()
        self.rows = red.rows[: len(pivots)]
        self.pivots = pivots

    @staticmethod
    def full(ambient: int, fld: str) -> "Subspace":
        return Subspace(ambient, fld, Matrix.identity(ambient, fld).rows)

    @staticmethod
    def from_rref(ambient: int, fld: str, rows: Sequence[Sequence[Scalar]],
                  pivots: Sequence[int]) -> "Subspace":
        """Wrap rows that are already in reduced row echelon form.

        Only for internal callers that produced the rows by elimination;
        the canonical-form invariant is the caller's responsibility.
        """
        s = object.__new__(Subspace)
        s.ambient = ambient
        s.field = fld
        s.rows = [list(r) for r in rows]
        s.pivots = tuple(pivots)
        return s

    @staticmethod
    def zero(ambient: int, fld: str) -> "Subspace":
        return Subspace(ambient, fld, [])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis_matrix(self) -> Matrix:
        """Basis vectors as columns: a map K^dim -> K^ambient."""
        return Matrix(self.rows, self.ambient, self.field).transpose()

    def reduce_vector(self, vec: Sequence[Scalar]) -> list[Scalar]:
        v = list(vec)
        for r, c in zip(self.rows, self.pivots):
            f = v[c]
            if not f.is_zero():
                v = [x - f * y for x, y in zip(v, r)]
        return v

    def contains_vector(self, vec: Sequence[Scalar]) -> bool:
        return all(x.is_zero() for x in self.reduce_vector(vec))

    def coords_of(self, vec: Sequence[Scalar]) -> list[Scalar]:
        """Coordinates of vec in the canonical basis; raises if not a member."""
        if not self.contains_vector(vec):
            raise InvalidInput("vector not in subspace")
        return [vec[c] for c in self.pivots]

    def coords_matrix(self) -> Matrix:
        """Linear readout K^ambient -> K^dim restricting to coords_of on members."""
        zero, one = Scalar.zero(self.field), Scalar.one(self.field)
        out = []
        for c in self.pivots:
            row = [zero] * self.ambient
            row[c] = one
            out.append(row)
        return Matrix(out, self.ambient, self.field)

    def contains(self, other: "Subspace") -> bool:
        return all(self.contains_vector(r) for r in other.rows)

    def add(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        return Subspace(self.ambient, self.field, list(self.rows) + list(other.rows))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient, self.field)
        # v = sum a_i u_i = sum b_j w_j; solve for (a, b) in the kernel of
        # [U^T | -W^T] and read the vectors off the a-part.
        ut = Matrix(self.rows, self.ambient, self.field).transpose()
        wt = Matrix(other.rows, self.ambient, self.field).transpose()
        ker = ut.stack_h(-wt).nullspace_rows()
        vecs = []
        for k in ker:
            a = k[: self.dim]
            vec = [Scalar.zero(self.field)] * self.ambient
            for coef, row in zip(a, self.rows):
                if not coef.is_zero():
                    vec = [x + coef * y for x, y in zip(vec, row)]
            vecs.append(vec)
        return Subspace(self.ambient, self.field, vecs)

    def embed(self, ambient: int, offset: int) -> "Subspace":
        """The same subspace inside a larger ambient space, shifted by offset."""
        if offset + self.ambient > ambient:
            raise InvalidInput("embed out of range")
        zero = Scalar.zero(self.field)
        rows = [[zero] * offset + list(r) + [zero] * (ambient - offset - self.ambient)
                for r in self.rows]
        return Subspace(ambient, self.field, rows)

    def direct_sum(self, other: "Subspace") -> "Subspace":
        self._ensure_field(other)
        n = self.ambient + other.ambient
        rows = [r + [Scalar.zero(self.field)] * other.ambient for r in self.rows]
        rows += [[Scalar.zero(self.field)] * self.ambient + list(r) for r in other.rows]
        return Subspace(n, self.field, rows)

    def _check_compatible(self, other: "Subspace") -> None:
        if self.ambient != other.ambient:
            raise InvalidInput("subspace ambient mismatch")
        self._ensure_field(other)

    def _ensure_field(self, other: "Subspace") -> None:
        if self.field != other.field:
            raise InvalidInput("subspace field mismatch")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient == other.ambient and self.field == other.field
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.ambient, tuple(tuple(r) for r in self.rows)))

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} of K^{self.ambient})"

    def to_json(self):
        return {"ambient": self.ambient, "field": self.field,
                "rows": [[a.to_json() for a in r] for r in self.rows]}

    @staticmethod
    def from_json(data) -> "Subspace":
        fld = data["field"]
        rows = [[Scalar.from_json(a, fld) for a in r] for r in data["rows"]]
        return Subspace(data["ambient"], fld, rows)


def kernel_image(m: Matrix) -> tuple[Subspace, Subspace]:
    """Kernel (subspace of the domain) and image (subspace of the codomain)."""
    ker = Subspace(m.ncols, m.field, m.nullspace_rows())
    img = Subspace(m.nrows, m.field, m.transpose().rows)
    return ker, img


def pullback(f: Matrix, g: Matrix) -> Subspace:
    """Fiber product {(x, y) : f x = g y} as a subspace of K^{a+b}."""
    if f.nrows != g.nrows or f.field != g.field:
        raise InvalidInput("pullback target mismatch")
    return Subspace(f.ncols + g.ncols, f.field, f.stack_h(-g).nullspace_rows())


# -- quotients ---------------------------------------------------------


class Quotient:
    """V / U with a fixed linear section.

    The quotient coordinates are the canonical-basis coordinates of V that
    are not pivot columns of U written in V-coordinates; the section sends
    the t-th quotient coordinate to the corresponding canonical basis
    vector of V.  ``proj`` is an ambient-space matrix whose restriction to
    V is the projection, and ``proj @ section == identity``.
    """

    __slots__ = ("total", "sub", "dim", "proj", "section", "coord_parity")

    def __init__(self, total: Subspace, sub: Subspace, ambient_parity: Sequence[int] | None = None):
        full_total = total.dim == total.ambient
        if not full_total and not total.contains(sub):
            raise InvalidInput("quotient: U is not contained in V")
        self.total = total
        self.sub = sub
        fld = total.field
        if full_total:
            readout = None                                   # ambient coords are V coords
            sub_in_v = sub
        else:
            readout = total.coords_matrix()                  # ambient -> V coords
            sub_in_v = Subspace(total.dim, fld, [readout.apply(r) for r in sub.rows])
        pivset = set(sub_in_v.pivots)
        nonpiv = [c for c in range(total.dim) if c not in pivset]
        self.dim = len(nonpiv)
        zero, one = Scalar.zero(fld), Scalar.one(fld)
        # reduction mod U followed by readout at the non-pivot coordinates
        red_rows = []
        for t in nonpiv:
            row = [zero] * total.dim
            row[t] = one
            for srow, sc in zip(sub_in_v.rows, sub_in_v.pivots):
                if not srow[t].is_zero():
                    row[sc] = row[sc] - srow[t]
            red_rows.append(row)
        proj_v = Matrix(red_rows, total.dim, fld)
        self.proj = proj_v if readout is None else proj_v @ readout
        sec_cols = [total.rows[t] for t in nonpiv]
        self.section = Matrix(sec_cols, total.ambient, fld).transpose() if sec_cols else \
            Matrix.zeros(total.ambient, 0, fld)
        if (self.proj @ self.section) != Matrix.identity(self.dim, fld):
            raise InternalError("quotient section is not a section")
        self.coord_parity = None
        if ambient_parity is not None:
            self.coord_parity = self._grade(nonpiv, total, sub, ambient_parity)

    def _grade(self, nonpiv, total, sub, ambient_parity):
        def row_parity(row):
            ps = {ambient_parity[c] for c, x in enumerate(row) if not x.is_zero()}
            if len(ps) > 1:
                raise InternalError("quotient of a non-graded subspace")
            return ps.pop() if ps else 0

        for r in sub.rows:
            row_parity(r)
        return tuple(row_parity(total.rows[t]) for t in nonpiv)

    def project(self, vec: Sequence[Scalar]) -> list[Scalar]:
        if self.total.dim != self.total.ambient and not self.total.contains_vector(vec):
            raise InvalidInput("projecting a vector outside V")
        return self.proj.apply(vec)

    @property
    def field(self) -> str:
        return self.total.field


def quotient_space(total: Subspace, sub: Subspace,
                   ambient_parity: Sequence[int] | None = None) -> Quotient:
    return Quotient(total, sub, ambient_parity)


def descend(plain: Matrix, src: Quotient, dst: Quotient, check: bool = True) -> Matrix:
    """Matrix of the map induced on quotients by an ambient-level map.

    ``check`` verifies the map sends the source balancing subspace into the
    target one (otherwise the induced map is not well defined).
    """
    if plain.ncols != src.total.ambient or plain.nrows != dst.total.ambient:
        raise InvalidInput("descend: ambient shape mismatch")
    if check:
        dst_full = dst.total.dim == dst.total.ambient
        for r in src.sub.rows:
            img = plain.apply(r)
            if not dst_full and not dst.total.contains_vector(img):
                raise NotBalanced("descend: image leaves the target space")
            if any(not x.is_zero() for x in dst.proj.apply(img)):
                raise NotBalanced("descend: map does not preserve the balancing subspace")
    return dst.proj @ (plain @ src.section)


def parity_diag(parities: Sequence[int], fld: str) -> Matrix:
    """Diagonal matrix of (-1)^{parity}."""
    one, zero = Scalar.one(fld), Scalar.zero(fld)
    n = len(parities)
    return Matrix([[(-one if parities[i] % 2 else one) if i == j else zero
                    for j in range(n)] for i in range(n)], n, fld)


# -- determinant lines -------------------------------------------------


@dataclass(frozen=True)
class DetLine:
    """The determinant line of a subspace, generated by the ordered wedge
    of its canonical basis rows."""

    source: Subspace

    @property
    def parity(self) -> int:
        return self.source.dim % 2

    @property
    def field(self) -> str:
        return self.source.field

    def coordinate_of(self, rows: Sequence[Sequence[Scalar]]) -> Scalar:
        """The scalar c with wedge(rows) = c * generator.

        Zero iff the rows are dependent; raises if a row is not a member
        or the count differs from dim.
        """
        if len(rows) != self.source.dim:
            raise InvalidInput("wrong number of rows for determinant line")
        coeffs = [self.source.coords_of(r) for r in rows]
        if not coeffs:
            return Scalar.one(self.field)
        return Matrix(coeffs, self.source.dim, self.field).det()


def ses_det_iso(inj: Matrix, surj: Matrix, lifts: Matrix | None = None) -> Scalar:
    """Scalar coordinate of the determinant isomorphism of a short exact
    sequence 0 -> A -> B -> C -> 0 presented by matrices in canonical
    coordinates.

    The generator of det(A) (x) det(C) maps to the wedge of the injected
    A-basis followed by lifts of the C-basis, expressed against the
    canonical generator of det(B).  The result does not depend on the
    choice of lifts; ``lifts`` (columns lifting the C-basis) is accepted
    so tests can exercise that independence.
    """
    p, n, q = inj.ncols, inj.nrows, surj.nrows
    if surj.ncols != n:
        raise InvalidInput("ses_det_iso: shape mismatch")
    if p + q != n:
        raise InvalidInput("ses_det_iso: dimensions are not exact")
    if not (surj @ inj).is_zero():
        raise InvalidInput("ses_det_iso: composite is nonzero")
    if inj.rank() != p:
        raise InvalidInput("ses_det_iso: inj is not injective")
    if surj.rank() != q:
        raise InvalidInput("ses_det_iso: surj is not surjective")
    cols = [inj.column_vec(j) for j in range(p)]
    if lifts is None:
        one, zero = Scalar.one(surj.field), Scalar.zero(surj.field)
        for m in range(q):
            e = [one if t == m else zero for t in range(q)]
            x = surj.solve(e)
            if x is None:
                raise InternalError("ses_det_iso: lift solve failed")
            cols.append(x)
    else:
        if lifts.shape != (n, q):
            raise InvalidInput("ses_det_iso: bad lift shape")
        for m in range(q):
            col = lifts.column_vec(m)
            one, zero = Scalar.one(surj.field), Scalar.zero(surj.field)
            e = [one if t == m else zero for t in range(q)]
            if surj.apply(col) != e:
                raise InvalidInput("ses_det_iso: lifts do not lift the basis")
            cols.append(col)
    return Matrix(cols, n, inj.field).transpose().det()


# -- sparse kernel solver ----------------------------------------------


def _sparse_rref(rows: Iterable[dict[int, Scalar]], fld: str) -> dict[int, dict[int, Scalar]]:
    # pivot col -> reduced row (dict) with leading coefficient one
    pivot_rows: dict[int, dict[int, Scalar]] = {}
    for raw in rows:
        row = {c: v for c, v in raw.items() if not v.is_zero()}
        while row:
            lead = min(row)
            piv = pivot_rows.get(lead)
            if piv is None:
                inv = row[lead].inv()
                pivot_rows[lead] = {c: inv * v for c, v in row.items()}
                break
            f = row[lead]
            for c, v in piv.items():
                nv = row.get(c, Scalar.zero(fld)) - f * v
                if nv.is_zero():
                    row.pop(c, None)
                else:
                    row[c] = nv
    # back-substitute to reduced form
    for lead in sorted(pivot_rows, reverse=True):
        row = pivot_rows[lead]
        for other_lead, other in pivot_rows.items():
            if other_lead < lead and lead in other:
                f = other[lead]
                for c, v in row.items():
                    nv = other.get(c, Scalar.zero(fld)) - f * v
                    if nv.is_zero():
                        other.pop(c, None)
                    else:
                        other[c] = nv
    return pivot_rows


def sparse_kernel(rows: Iterable[dict[int, Scalar]], width: int, fld: str) -> list[list[Scalar]]:
    """Kernel basis of a sparse constraint system.

    ``rows`` are equations (coefficient dicts keyed by column); returns the
    canonical kernel basis as dense rows.  Used for the large balancing and
    hom-law systems where dense elimination would be wasteful.
    """
    pivot_rows = _sparse_rref(rows, fld)
    zero, one = Scalar.zero(fld), Scalar.one(fld)
    pivset = set(pivot_rows)
    out = []
    for f in range(width):
        if f in pivset:
            continue
        v = [zero] * width
        v[f] = one
        for lead, row in pivot_rows.items():
            coef = row.get(f)
            if coef is not None:
                v[lead] = -coef
        out.append(v)
    return out


def sparse_rowspace(rows: Iterable[dict[int, Scalar]], width: int, fld: str) -> Subspace:
    """Row space of sparse rows, as a canonical subspace of k^width."""
    pivot_rows = _sparse_rref(rows, fld)
    zero = Scalar.zero(fld)
    dense = []
    pivots = sorted(pivot_rows)
    for lead in pivots:
        row = pivot_rows[lead]
        out = [zero] * width
        for c, v in row.items():
            out[c] = v
        dense.append(out)
    return Subspace.from_rref(width, fld, dense, pivots)


# -- diagram checking --------------------------------------------------


@dataclass
class CoherenceReport:
    diagram_id: str
    verdict: bool
    failing_pair: int | None = None
    witness_entry: dict | None = None
    detail: str = ""

    def to_json(self):
        out = {"diagram_id": self.diagram_id, "verdict": self.verdict}
        if self.failing_pair is not None:
            out["failing_pair"] = self.failing_pair
        if self.witness_entry is not None:
            out["witness_entry"] = self.witness_entry
        if self.detail:
            out["detail"] = self.detail
        return out


def check_diagram(nodes: dict[str, int],
                  edges: dict[str, tuple[str, str, Matrix]],
                  path_pairs: Sequence[tuple[Sequence[str], Sequence[str]]],
                  diagram_id: str = "") -> CoherenceReport:
    """Compare composites along pairs of edge paths.

    ``nodes`` maps node name to dimension, ``edges`` maps edge name to
    (src node, dst node, matrix); a path lists edge names in application
    order (first edge applied first).  The report carries the first
    failing pair and a witness entry with both values.
    """
    for name, (src, dst, m) in edges.items():
        if src not in nodes or dst not in nodes:
            raise InvalidInput(f"edge {name} references unknown node")
        if m.shape != (nodes[dst], nodes[src]):
            raise InvalidInput(
                f"edge {name}: shape {m.shape} != ({nodes[dst]}, {nodes[src]})")

    def composite(path):
        if not path:
            raise InvalidInput("empty path")
        src = edges[path[0]][0]
        acc = None
        at = src
        for e in path:
            s, d, m = edges[e]
            if s != at:
                raise InvalidInput(f"path breaks at edge {e}: at {at}, edge starts {s}")
            acc = m if acc is None else m @ acc
            at = d
        return acc, src, at

    for idx, (p1, p2) in enumerate(path_pairs):
        m1, s1, d1 = composite(list(p1))
        m2, s2, d2 = composite(list(p2))
        if (s1, d1) != (s2, d2):
            raise InvalidInput(f"path pair {idx} endpoints differ")
        if m1 != m2:
            witness = None
            for r in range(m1.nrows):
                for c in range(m1.ncols):
                    if m1.rows[r][c] != m2.rows[r][c]:
                        witness = {"row": r, "col": c,
                                   "lhs": m1.rows[r][c].to_json(),
                                   "rhs": m2.rows[r][c].to_json()}
                        break
                if witness:
                    break
            return CoherenceReport(diagram_id, False, failing_pair=idx,
                                   witness_entry=witness)
    return CoherenceReport(diagram_id, True)
