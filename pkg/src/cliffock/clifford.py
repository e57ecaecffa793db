"""Clifford superalgebras of antiinvolutive spaces.

Cl(H) is presented on sorted-index monomials e_S over the coordinate basis
of H.  Products are computed by the polarized rewriting rule
e_s e_t + e_t e_s = -2 b(e_s, e_t), which handles off-diagonal forms; the
square relation e_t^2 = -b(e_t, e_t) is the diagonal case.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import InternalError, InvalidInput
from .hilbert import AntiinvolutiveSpace, direct_sum, negate
from .linalg import Matrix
from .scalars import Scalar
from .superalg import SuperAlgebra, graded_tensor, opposite


class CliffordAlgebra:
    """Cl(H) on 2^n monomials; index k encodes the subset by its bits."""

    __slots__ = ("space", "n", "algebra", "gamma", "_form", "_mono_cache")

    def __init__(self, space: AntiinvolutiveSpace):
        self.space = space
        self.n = space.dim
        self._form = space.form_matrix()
        self._mono_cache: dict[tuple[int, int], dict[int, Scalar]] = {}
        fld = space.field
        dim = 1 << self.n
        table = []
        for a in range(dim):
            row = []
            for b in range(dim):
                vec = [Scalar.zero(fld)] * dim
                for mask, c in self._mul_masks(a, b).items():
                    vec[mask] = c
                row.append(vec)
            table.append(row)
        parity = tuple(k.bit_count() & 1 for k in range(dim))
        unit = [Scalar.one(fld) if k == 0 else Scalar.zero(fld) for k in range(dim)]
        gens = tuple(1 << t for t in range(self.n))
        name = f"Cl({space.name})" if space.name else "Cl"
        self.algebra = SuperAlgebra(fld, parity, table, unit, gens, name)
        rows = [[Scalar.zero(fld)] * self.n for _ in range(dim)]
        for t in range(self.n):
            rows[1 << t][t] = Scalar.one(fld)
        self.gamma = Matrix(rows, self.n, fld)

    @property
    def dim(self) -> int:
        return 1 << self.n

    def __repr__(self) -> str:
        return f"<CliffordAlgebra n={self.n} over {self.space!r}>"

    def __eq__(self, other) -> bool:
        return isinstance(other, CliffordAlgebra) and self.space == other.space

    def subset(self, index: int) -> tuple[int, ...]:
        return tuple(t for t in range(self.n) if index >> t & 1)

    def index(self, subset) -> int:
        out = 0
        for t in subset:
            bit = 1 << t
            if not 0 <= t < self.n or out & bit:
                raise InvalidInput("subset must hold distinct valid indices")
            out |= bit
        return out

    def _mul_mask_gen(self, mask: int, t: int) -> dict[int, Scalar]:
        # e_S · e_t by moving e_t left past every larger index
        key = (mask, t)
        hit = self._mono_cache.get(key)
        if hit is not None:
            return hit
        fld = self.space.field
        bit = 1 << t
        if mask < bit:
            out = {mask | bit: Scalar.one(fld)}
        else:
            s = mask.bit_length() - 1
            rest = mask ^ (1 << s)
            b_st = self._form.rows[s][t]
            out = {}
            if s == t:
                if not b_st.is_zero():
                    out[rest] = -b_st
            else:
                for sub, c in self._mul_mask_gen(rest, t).items():
                    out[sub | (1 << s)] = -c
                if not b_st.is_zero():
                    correction = -(b_st + b_st)
                    prev = out.get(rest)
                    val = correction if prev is None else prev + correction
                    if val.is_zero():
                        out.pop(rest, None)
                    else:
                        out[rest] = val
        self._mono_cache[key] = out
        return out

    def _mul_masks(self, a: int, b: int) -> dict[int, Scalar]:
        fld = self.space.field
        acc = {a: Scalar.one(fld)}
        for t in range(self.n):
            if not b >> t & 1:
                continue
            nxt: dict[int, Scalar] = {}
            for m, c in acc.items():
                for m2, c2 in self._mul_mask_gen(m, t).items():
                    prev = nxt.get(m2)
                    val = c * c2 if prev is None else prev + c * c2
                    if val.is_zero():
                        nxt.pop(m2, None)
                    else:
                        nxt[m2] = val
            acc = nxt
        return acc

    def unit_element(self) -> "CliffordElement":
        return CliffordElement(self, {0: Scalar.one(self.space.field)})

    def monomial(self, subset) -> "CliffordElement":
        return CliffordElement(self, {self.index(subset): Scalar.one(self.space.field)})

    def element(self, coeffs: dict[int, Scalar]) -> "CliffordElement":
        return CliffordElement(self, coeffs)

    def coordinates(self, x: "CliffordElement") -> list[Scalar]:
        vec = [Scalar.zero(self.space.field)] * self.dim
        for mask, c in x.coeffs.items():
            vec[mask] = c
        return vec

    def from_coordinates(self, vec) -> "CliffordElement":
        if len(vec) != self.dim:
            raise InvalidInput("coordinate vector length mismatch")
        return CliffordElement(self, dict(enumerate(vec)))

    def to_json(self) -> dict:
        return {"space": self.space.to_json()}

    @staticmethod
    def from_json(data: dict) -> "CliffordAlgebra":
        return build_clifford(AntiinvolutiveSpace.from_json(data["space"]))


_CACHE: dict[tuple, CliffordAlgebra] = {}


def build_clifford(space: AntiinvolutiveSpace) -> CliffordAlgebra:
    """Cl(H, alpha); instances are cached per (field, involution matrix)."""
    key = (space.field, json.dumps(space.inv.to_json(), sort_keys=True))
    hit = _CACHE.get(key)
    if hit is None:
        hit = _CACHE[key] = CliffordAlgebra(space)
    return hit


class CliffordElement:
    """Sparse element: {subset mask: coefficient}, zero coefficients dropped."""

    __slots__ = ("parent", "coeffs")

    def __init__(self, parent: CliffordAlgebra, coeffs: dict[int, Scalar]):
        clean = {}
        for mask, c in coeffs.items():
            if not 0 <= mask < parent.dim:
                raise InvalidInput("monomial index out of range")
            if not c.is_zero():
                clean[mask] = c
        self.parent = parent
        self.coeffs = clean

    def __eq__(self, other) -> bool:
        return (isinstance(other, CliffordElement)
                and self.parent == other.parent and self.coeffs == other.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "<0>"
        bits = []
        for mask in sorted(self.coeffs):
            label = "1" if mask == 0 else "e" + "".join(str(t) for t in self.parent.subset(mask))
            bits.append(f"{self.coeffs[mask]}*{label}")
        return "<" + " + ".join(bits) + ">"

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "CliffordElement") -> "CliffordElement":
        _same_parent(self, other)
        out = dict(self.coeffs)
        for mask, c in other.coeffs.items():
            prev = out.get(mask)
            out[mask] = c if prev is None else prev + c
        return CliffordElement(self.parent, out)

    def __neg__(self) -> "CliffordElement":
        return CliffordElement(self.parent, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other: "CliffordElement") -> "CliffordElement":
        return self + (-other)

    def scale(self, s: Scalar) -> "CliffordElement":
        return CliffordElement(self.parent, {m: s * c for m, c in self.coeffs.items()})

    def __mul__(self, other: "CliffordElement") -> "CliffordElement":
        return clifford_multiply(self, other)

    def to_json(self) -> list:
        return [{"subset": list(self.parent.subset(mask)), "coeff": c.to_json()}
                for mask, c in sorted(self.coeffs.items())]


def _same_parent(x: CliffordElement, y: CliffordElement) -> None:
    if x.parent is not y.parent and x.parent != y.parent:
        raise InvalidInput("elements of different Clifford algebras")


def clifford_multiply(x: CliffordElement, y: CliffordElement) -> CliffordElement:
    _same_parent(x, y)
    cl = x.parent
    table = cl.algebra.table
    out: dict[int, Scalar] = {}
    for ma, ca in x.coeffs.items():
        for mb, cb in y.coeffs.items():
            cab = ca * cb
            for mask, c in enumerate(table[ma][mb]):
                if c.is_zero():
                    continue
                prev = out.get(mask)
                val = cab * c if prev is None else prev + cab * c
                out[mask] = val
    return CliffordElement(cl, out)


def include_vector(cl: CliffordAlgebra, v) -> CliffordElement:
    """The degree-1 embedding of an ambient vector."""
    if len(v) != cl.n:
        raise InvalidInput("vector length mismatch")
    return CliffordElement(cl, {1 << t: x for t, x in enumerate(v)})


def element_from_json(cl: CliffordAlgebra, data: list) -> CliffordElement:
    coeffs = {}
    for item in data:
        mask = cl.index(item["subset"])
        coeffs[mask] = Scalar.from_json(item["coeff"], cl.space.field)
    return CliffordElement(cl, coeffs)


# -- brute-force oracle -----------------------------------------------------


def reduce_word(cl: CliffordAlgebra, word) -> dict[int, Scalar]:
    """Normal form of a free generator word by naive term rewriting.

    Exponential in the worst case; meant for cross-checks on small spaces.
    """
    fld = cl.space.field
    form = cl._form
    pending: dict[tuple[int, ...], Scalar] = {tuple(word): Scalar.one(fld)}
    done: dict[int, Scalar] = {}
    while pending:
        w, c = pending.popitem()
        pos = -1
        for k in range(len(w) - 1):
            if w[k] >= w[k + 1]:
                pos = k
                break
        if pos < 0:
            mask = 0
            for t in w:
                mask |= 1 << t
            prev = done.get(mask)
            val = c if prev is None else prev + c
            if val.is_zero():
                done.pop(mask, None)
            else:
                done[mask] = val
            continue
        i, j = w[pos], w[pos + 1]
        shorter = w[:pos] + w[pos + 2:]
        if i == j:
            b_ii = form.rows[i][i]
            if not b_ii.is_zero():
                _merge_word(pending, shorter, -(b_ii * c))
        else:
            _merge_word(pending, w[:pos] + (j, i) + w[pos + 2:], -c)
            b_ij = form.rows[i][j]
            if not b_ij.is_zero():
                _merge_word(pending, shorter, -((b_ij + b_ij) * c))
    return done


def _merge_word(table, w, c):
    prev = table.get(w)
    val = c if prev is None else prev + c
    if val.is_zero():
        table.pop(w, None)
    else:
        table[w] = val


def oracle_multiply(cl: CliffordAlgebra, a: int, b: int) -> list[Scalar]:
    """Coordinate vector of e_a·e_b computed via reduce_word."""
    word = cl.subset(a) + cl.subset(b)
    vec = [Scalar.zero(cl.space.field)] * cl.dim
    for mask, c in reduce_word(cl, word).items():
        vec[mask] = c
    return vec


# -- structural isomorphisms -------------------------------------------------


@dataclass(frozen=True)
class AlgebraIso:
    """A verified graded algebra isomorphism, stored as its matrix."""

    source: SuperAlgebra
    target: SuperAlgebra
    matrix: Matrix

    def apply(self, vec) -> list[Scalar]:
        return self.matrix.apply(vec)

    def inverse_matrix(self) -> Matrix:
        return self.matrix.inverse()


def _extend_generator_map(n: int, target: SuperAlgebra, gen_images) -> Matrix:
    # phi(e_S) = product of generator images in ascending index order
    cols = []
    for mask in range(1 << n):
        img = list(target.unit)
        for t in range(n):
            if mask >> t & 1:
                img = target.mult(img, gen_images[t])
        cols.append(img)
    return Matrix(cols, target.dim, target.field).transpose()


def _verify_iso(iso: AlgebraIso, context: str) -> None:
    src, tgt, mat = iso.source, iso.target, iso.matrix
    if mat.apply(src.unit) != tgt.unit:
        raise InternalError(f"{context}: unit is not preserved")
    if not mat.is_invertible():
        raise InternalError(f"{context}: comparison map is singular")
    cols = [mat.column_vec(k) for k in range(src.dim)]
    for k in range(src.dim):
        p = src.parity[k]
        for t, x in enumerate(cols[k]):
            if not x.is_zero() and tgt.parity[t] != p:
                raise InternalError(f"{context}: grading is not preserved")
    for i in range(src.dim):
        for j in range(src.dim):
            if tgt.mult(cols[i], cols[j]) != mat.apply(src.table[i][j]):
                raise InternalError(f"{context}: not multiplicative on pair ({i},{j})")


def iso_opposite(space: AntiinvolutiveSpace) -> AlgebraIso:
    """Cl(H, -alpha) -> Cl(H, alpha)^op, v -> v on generators."""
    src = build_clifford(negate(space)).algebra
    tgt = opposite(build_clifford(space).algebra)
    gens = [tgt.basis_vector(1 << t) for t in range(space.dim)]
    iso = AlgebraIso(src, tgt, _extend_generator_map(space.dim, tgt, gens))
    _verify_iso(iso, "opposite comparison")
    return iso


def iso_direct_sum(a: AntiinvolutiveSpace, b: AntiinvolutiveSpace) -> AlgebraIso:
    """Cl(H (+) H') -> Cl(H) (x) Cl(H'), (v, v') -> v(x)1 + 1(x)v'."""
    if a.field != b.field:
        raise InvalidInput("direct sum needs a common field")
    src = build_clifford(direct_sum(a, b)).algebra
    cl_a = build_clifford(a).algebra
    cl_b = build_clifford(b).algebra
    tgt = graded_tensor(cl_a, cl_b)
    gens = []
    for t in range(a.dim):
        gens.append(tgt.basis_vector((1 << t) * cl_b.dim))
    for s in range(b.dim):
        gens.append(tgt.basis_vector(1 << s))
    iso = AlgebraIso(src, tgt, _extend_generator_map(a.dim + b.dim, tgt, gens))
    _verify_iso(iso, "direct sum comparison")
    return iso
