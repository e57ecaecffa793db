"""Finite-dimensional superalgebras and bimodules over exact scalars.

Everything is stored by structure constants relative to a fixed homogeneous
basis: an algebra is a tensor c[i][j][k], a bimodule a pair of action-matrix
families.  Relative tensor products are realized as explicit quotients with
canonical sections, so maps between them can be written at the plain tensor
level and descended.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from math import prod
from typing import Callable, Sequence

from .errors import InternalError, InvalidInput, NotBalanced
from .linalg import Matrix, Quotient, Subspace, descend, signed_kron, sparse_kernel, sparse_rowspace
from .scalars import Scalar


class SuperAlgebra:
    """Associative unital superalgebra given by a structure-constant tensor.

    ``table[i][j]`` is the coordinate vector of e_i·e_j, ``parity[i]`` the
    grading, ``unit`` the coordinate vector of 1.  ``generators`` indexes a
    subset whose unital closure spans the algebra; balancing and hom systems
    only quantify over it.
    """

    __slots__ = ("field", "dim", "parity", "table", "unit", "generators", "name",
                 "_left_cache", "_right_cache")

    def __init__(self, field: str, parity: Sequence[int], table, unit: Sequence[Scalar],
                 generators: Sequence[int] | None = None, name: str = ""):
        self.field = field
        self.parity = tuple(int(p) % 2 for p in parity)
        self.dim = len(self.parity)
        if self.dim == 0:
            raise InvalidInput("algebra must have positive dimension")
        if len(table) != self.dim or any(len(row) != self.dim for row in table):
            raise InvalidInput("structure table shape mismatch")
        for row in table:
            for vec in row:
                if len(vec) != self.dim:
                    raise InvalidInput("structure table shape mismatch")
                for x in vec:
                    if x.field != field:
                        raise InvalidInput("structure constant field mismatch")
        self.table = [[list(vec) for vec in row] for row in table]
        if len(unit) != self.dim:
            raise InvalidInput("unit vector shape mismatch")
        self.unit = list(unit)
        gens = tuple(generators) if generators is not None else tuple(range(self.dim))
        for g in gens:
            if not 0 <= g < self.dim:
                raise InvalidInput("generator index out of range")
        self.generators = gens
        self.name = name
        self._left_cache: dict[int, Matrix] = {}
        self._right_cache: dict[int, Matrix] = {}

    def __repr__(self) -> str:
        tag = self.name or "SuperAlgebra"
        return f"<{tag} dim={self.dim} field={self.field}>"

    def zero_vector(self) -> list[Scalar]:
        return [Scalar.zero(self.field)] * self.dim

    def basis_vector(self, i: int) -> list[Scalar]:
        v = self.zero_vector()
        v[i] = Scalar.one(self.field)
        return v

    def mult(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> list[Scalar]:
        if len(x) != self.dim or len(y) != self.dim:
            raise InvalidInput("element coordinate length mismatch")
        out = self.zero_vector()
        for i, xi in enumerate(x):
            if xi.is_zero():
                continue
            ti = self.table[i]
            for j, yj in enumerate(y):
                if yj.is_zero():
                    continue
                c = xi * yj
                for k, s in enumerate(ti[j]):
                    if not s.is_zero():
                        out[k] = out[k] + c * s
        return out

    def left_mult_matrix(self, i: int) -> Matrix:
        m = self._left_cache.get(i)
        if m is None:
            m = Matrix([[self.table[i][j][k] for j in range(self.dim)]
                        for k in range(self.dim)], self.dim, self.field)
            self._left_cache[i] = m
        return m

    def right_mult_matrix(self, j: int) -> Matrix:
        m = self._right_cache.get(j)
        if m is None:
            m = Matrix([[self.table[i][j][k] for i in range(self.dim)]
                        for k in range(self.dim)], self.dim, self.field)
            self._right_cache[j] = m
        return m

    def vector_parity(self, vec: Sequence[Scalar]) -> int:
        ps = {self.parity[i] for i, x in enumerate(vec) if not x.is_zero()}
        if len(ps) > 1:
            raise InvalidInput("element is not parity homogeneous")
        return ps.pop() if ps else 0

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "field": self.field,
            "parity": list(self.parity),
            "mul": [[[x.to_json() for x in vec] for vec in row] for row in self.table],
            "unit": [x.to_json() for x in self.unit],
            "generators": list(self.generators),
            "name": self.name,
        }

    @staticmethod
    def from_json(data: dict) -> "SuperAlgebra":
        fld = data["field"]
        table = [[[Scalar.from_json(x, fld) for x in vec] for vec in row] for row in data["mul"]]
        unit = [Scalar.from_json(x, fld) for x in data["unit"]]
        return SuperAlgebra(fld, data["parity"], table, unit,
                            data.get("generators"), data.get("name", ""))


def ground_algebra(fld: str) -> SuperAlgebra:
    one = Scalar.one(fld)
    return SuperAlgebra(fld, (0,), [[[one]]], [one], generators=(), name=f"ground({fld})")


def _same_algebra(a: SuperAlgebra, b: SuperAlgebra) -> bool:
    if a is b:
        return True
    return (a.field == b.field and a.parity == b.parity
            and a.unit == b.unit and a.table == b.table)


@dataclass
class ValidationReport:
    subject: str
    violations: list[str] = dc_field(default_factory=list)
    info: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"subject": self.subject, "ok": self.ok,
                "violations": list(self.violations), "info": dict(self.info)}


def validate_superalgebra(alg: SuperAlgebra) -> ValidationReport:
    """Check associativity, unit laws, parity additivity and generator closure."""
    rep = ValidationReport(alg.name or "superalgebra")
    n = alg.dim
    for i in range(n):
        for j in range(n):
            pk = (alg.parity[i] + alg.parity[j]) % 2
            for k, s in enumerate(alg.table[i][j]):
                if not s.is_zero() and alg.parity[k] != pk:
                    rep.violations.append(f"parity: component {k} of e{i}*e{j} breaks grading")
    for j in range(n):
        ej = alg.basis_vector(j)
        if alg.mult(alg.unit, ej) != ej:
            rep.violations.append(f"unit: 1*e{j} != e{j}")
        if alg.mult(ej, alg.unit) != ej:
            rep.violations.append(f"unit: e{j}*1 != e{j}")
    for i in range(n):
        for j in range(n):
            ij = alg.table[i][j]
            for k in range(n):
                lhs = alg.mult(ij, alg.basis_vector(k))
                rhs = alg.mult(alg.basis_vector(i), alg.table[j][k])
                if lhs != rhs:
                    rep.violations.append(f"associativity fails at triple ({i},{j},{k})")
    span = Subspace(n, alg.field, [alg.unit] + [alg.basis_vector(g) for g in alg.generators])
    while span.dim < n:
        new_rows = [alg.mult(row, alg.basis_vector(g))
                    for row in span.rows for g in alg.generators]
        bigger = span.add(Subspace(n, alg.field, new_rows))
        if bigger.dim == span.dim:
            break
        span = bigger
    if span.dim != n:
        rep.violations.append("generators do not generate the algebra")
    return rep


def graded_tensor(a: SuperAlgebra, b: SuperAlgebra) -> SuperAlgebra:
    """Tensor product algebra with the Koszul sign on crossing factors."""
    if a.field != b.field:
        raise InvalidInput("graded_tensor: field mismatch")
    fld = a.field
    dim = a.dim * b.dim
    par = [(a.parity[i] + b.parity[j]) % 2 for i in range(a.dim) for j in range(b.dim)]
    zero = Scalar.zero(fld)
    table = [[[zero] * dim for _ in range(dim)] for _ in range(dim)]
    for i in range(a.dim):
        for k in range(a.dim):
            ca = a.table[i][k]
            for j in range(b.dim):
                sgn = b.parity[j] * a.parity[k]
                row = table[i * b.dim + j]
                for l in range(b.dim):
                    cb = b.table[j][l]
                    vec = row[k * b.dim + l]
                    for m, xa in enumerate(ca):
                        if xa.is_zero():
                            continue
                        for nn, xb in enumerate(cb):
                            if xb.is_zero():
                                continue
                            v = xa * xb
                            vec[m * b.dim + nn] = -v if sgn else v
    unit = [a.unit[i] * b.unit[j] for i in range(a.dim) for j in range(b.dim)]
    gens: Sequence[int] | None = None
    ua, ub = _basis_unit_index(a), _basis_unit_index(b)
    if ua is not None and ub is not None:
        gens = tuple(g * b.dim + ub for g in a.generators) + \
               tuple(ua * b.dim + h for h in b.generators)
    return SuperAlgebra(fld, par, table, unit, gens,
                        name=f"{a.name or 'A'}(x){b.name or 'B'}")


def _basis_unit_index(alg: SuperAlgebra) -> int | None:
    idx = None
    for i, x in enumerate(alg.unit):
        if x.is_zero():
            continue
        if idx is not None or not x.is_one():
            return None
        idx = i
    return idx


def opposite(alg: SuperAlgebra) -> SuperAlgebra:
    """Reversed multiplication with the sign (-1)^{|a||b|}."""
    n = alg.dim
    table = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            vec = list(alg.table[j][i])
            if alg.parity[i] and alg.parity[j]:
                vec = [-x for x in vec]
            table[i][j] = vec
    return SuperAlgebra(alg.field, alg.parity, table, alg.unit, alg.generators,
                        name=f"op({alg.name})" if alg.name else "")


class SuperBimodule:
    """Left/right module structure over a pair of superalgebras.

    Action matrices can be supplied up front or through providers; providers
    let large relative tensors stay lazy (only generator actions are needed
    for balancing and hom systems).
    """

    __slots__ = ("left_alg", "right_alg", "field", "dim", "parity", "name",
                 "_left", "_right", "_left_fn", "_right_fn")

    def __init__(self, left_alg: SuperAlgebra, right_alg: SuperAlgebra,
                 parity: Sequence[int],
                 left_mats: Sequence[Matrix] | None = None,
                 right_mats: Sequence[Matrix] | None = None,
                 left_fn: Callable[[int], Matrix] | None = None,
                 right_fn: Callable[[int], Matrix] | None = None,
                 name: str = ""):
        if left_alg.field != right_alg.field:
            raise InvalidInput("bimodule: algebra fields differ")
        self.left_alg = left_alg
        self.right_alg = right_alg
        self.field = left_alg.field
        self.parity = tuple(int(p) % 2 for p in parity)
        self.dim = len(self.parity)
        self.name = name
        if left_mats is not None and len(left_mats) != left_alg.dim:
            raise InvalidInput("bimodule: one left action matrix per algebra basis element")
        if right_mats is not None and len(right_mats) != right_alg.dim:
            raise InvalidInput("bimodule: one right action matrix per algebra basis element")
        self._left = dict(enumerate(left_mats)) if left_mats is not None else {}
        self._right = dict(enumerate(right_mats)) if right_mats is not None else {}
        self._left_fn = left_fn
        self._right_fn = right_fn
        for m in self._left.values():
            self._check_shape(m)
        for m in self._right.values():
            self._check_shape(m)

    def _check_shape(self, m: Matrix) -> None:
        if m.shape != (self.dim, self.dim) or m.field != self.field:
            raise InvalidInput("action matrix shape or field mismatch")

    def __repr__(self) -> str:
        tag = self.name or "SuperBimodule"
        return f"<{tag} dim={self.dim} over ({self.left_alg!r}, {self.right_alg!r})>"

    def left(self, idx: int) -> Matrix:
        m = self._left.get(idx)
        if m is None:
            if self._left_fn is None:
                raise InternalError("left action matrix unavailable")
            m = self._left_fn(idx)
            self._check_shape(m)
            self._left[idx] = m
        return m

    def right(self, idx: int) -> Matrix:
        m = self._right.get(idx)
        if m is None:
            if self._right_fn is None:
                raise InternalError("right action matrix unavailable")
            m = self._right_fn(idx)
            self._check_shape(m)
            self._right[idx] = m
        return m

    def left_of_vector(self, coeffs: Sequence[Scalar]) -> Matrix:
        return self._combine(coeffs, self.left, self.left_alg.dim)

    def right_of_vector(self, coeffs: Sequence[Scalar]) -> Matrix:
        return self._combine(coeffs, self.right, self.right_alg.dim)

    def _combine(self, coeffs: Sequence[Scalar], get: Callable[[int], Matrix],
                 adim: int) -> Matrix:
        if len(coeffs) != adim:
            raise InvalidInput("algebra element coordinate length mismatch")
        out = Matrix.zeros(self.dim, self.dim, self.field)
        for i, c in enumerate(coeffs):
            if not c.is_zero():
                out = out + get(i).scale(c)
        return out

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "parity": list(self.parity),
            "left_alg": self.left_alg.to_json(),
            "right_alg": self.right_alg.to_json(),
            "left_action": [self.left(i).to_json() for i in range(self.left_alg.dim)],
            "right_action": [self.right(i).to_json() for i in range(self.right_alg.dim)],
            "name": self.name,
        }

    @staticmethod
    def from_json(data: dict) -> "SuperBimodule":
        la = SuperAlgebra.from_json(data["left_alg"])
        ra = SuperAlgebra.from_json(data["right_alg"])
        left = [Matrix.from_json(m, la.field) for m in data["left_action"]]
        right = [Matrix.from_json(m, la.field) for m in data["right_action"]]
        return SuperBimodule(la, ra, data["parity"], left, right, name=data.get("name", ""))


def regular_bimodule(alg: SuperAlgebra) -> SuperBimodule:
    """The algebra acting on itself on both sides."""
    left = [alg.left_mult_matrix(i) for i in range(alg.dim)]
    right = [alg.right_mult_matrix(i) for i in range(alg.dim)]
    return SuperBimodule(alg, alg, alg.parity, left, right,
                         name=f"reg({alg.name})" if alg.name else "reg")


def validate_bimodule(mod: SuperBimodule) -> ValidationReport:
    """Check unit, module axioms, action commutation and parity additivity."""
    rep = ValidationReport(mod.name or "bimodule")
    la, ra = mod.left_alg, mod.right_alg
    fld = mod.field
    ident = Matrix.identity(mod.dim, fld)
    lu = mod.left_of_vector(la.unit)
    if lu != ident:
        rep.violations.append("left unit does not act as identity")
    ru = mod.right_of_vector(ra.unit)
    if ru != ident:
        rep.violations.append("right unit does not act as identity")
    for i in range(la.dim):
        li = mod.left(i)
        pi = la.parity[i]
        for t in range(mod.dim):
            for s in range(mod.dim):
                if not li.rows[t][s].is_zero() and mod.parity[t] != (mod.parity[s] + pi) % 2:
                    rep.violations.append(f"left action of e{i} breaks grading at ({t},{s})")
    for j in range(ra.dim):
        rj = mod.right(j)
        pj = ra.parity[j]
        for t in range(mod.dim):
            for s in range(mod.dim):
                if not rj.rows[t][s].is_zero() and mod.parity[t] != (mod.parity[s] + pj) % 2:
                    rep.violations.append(f"right action of e{j} breaks grading at ({t},{s})")
    for i in range(la.dim):
        li = mod.left(i)
        for j in range(la.dim):
            if li @ mod.left(j) != mod.left_of_vector(la.table[i][j]):
                rep.violations.append(f"left module axiom fails at pair ({i},{j})")
    for i in range(ra.dim):
        for j in range(ra.dim):
            # m·(e_i e_j) applies e_i first
            if mod.right(j) @ mod.right(i) != mod.right_of_vector(ra.table[i][j]):
                rep.violations.append(f"right module axiom fails at pair ({i},{j})")
    for i in range(la.dim):
        li = mod.left(i)
        for j in range(ra.dim):
            rj = mod.right(j)
            if li @ rj != rj @ li:
                rep.violations.append(f"left and right actions do not commute at ({i},{j})")
    return rep


def dual_bimodule(mod: SuperBimodule) -> SuperBimodule:
    """Linear dual with transposed actions and Koszul signs.

    For the dual basis functional xi_i (parity of m_i):
    (a·xi)(m) = (-1)^{|a|(|xi|+|m|)} xi(m·a)  and  (xi·b)(m) = xi(b·m).
    """
    la, ra = mod.left_alg, mod.right_alg
    fld = mod.field
    par = mod.parity
    n = mod.dim

    def left_fn(a_idx: int) -> Matrix:
        pa = ra.parity[a_idx]
        src = mod.right(a_idx)
        rows = []
        for j in range(n):
            row = []
            for i in range(n):
                v = src.rows[i][j]
                if pa and not v.is_zero() and (par[i] + par[j]) % 2:
                    v = -v
                row.append(v)
            rows.append(row)
        return Matrix(rows, n, fld)

    def right_fn(b_idx: int) -> Matrix:
        return mod.left(b_idx).transpose()

    return SuperBimodule(ra, la, par, left_fn=left_fn, right_fn=right_fn,
                         name=f"dual({mod.name})" if mod.name else "dual")


# -- relative tensor products ------------------------------------------


def _apply_first(l_mat: Matrix, d_rest: int, vec: Sequence[Scalar], fld: str) -> list[Scalar]:
    # (L (x) id) on flattened coordinates, leftmost factor most significant
    out = [Scalar.zero(fld)] * (l_mat.nrows * d_rest)
    for s in range(l_mat.nrows):
        base_out = s * d_rest
        row = l_mat.rows[s]
        for i in range(l_mat.ncols):
            c = row[i]
            if c.is_zero():
                continue
            base_in = i * d_rest
            for r in range(d_rest):
                v = vec[base_in + r]
                if not v.is_zero():
                    out[base_out + r] = out[base_out + r] + c * v
    return out


def _apply_last(r_mat: Matrix, d_lead: int, vec: Sequence[Scalar], fld: str) -> list[Scalar]:
    # (id (x) R) on flattened coordinates
    dm = r_mat.ncols
    out = [Scalar.zero(fld)] * (d_lead * r_mat.nrows)
    for lead in range(d_lead):
        base = lead * dm
        out_base = lead * r_mat.nrows
        for t in range(r_mat.nrows):
            acc = Scalar.zero(fld)
            row = r_mat.rows[t]
            for j in range(dm):
                v = vec[base + j]
                if not v.is_zero() and not row[j].is_zero():
                    acc = acc + row[j] * v
            if not acc.is_zero():
                out[out_base + t] = acc
    return out


class RelativeTensor(SuperBimodule):
    """Quotient of a plain tensor product of bimodules by all middle balancing.

    ``factors`` are composable left to right (each right algebra equals the
    next left algebra); the result is a bimodule over the outer pair.  The
    quotient of the full plain product makes re-association maps identities.
    """

    __slots__ = ("factors", "quotient", "plain_dim", "plain_parity", "_strides",
                 "_section_cols")

    def __init__(self, factors: Sequence[SuperBimodule]):
        factors = tuple(factors)
        if not factors:
            raise InvalidInput("relative tensor needs at least one factor")
        fld = factors[0].field
        for q in range(len(factors) - 1):
            if not _same_algebra(factors[q].right_alg, factors[q + 1].left_alg):
                raise InvalidInput("adjacent factors are not modules over a common algebra")
        dims = [f.dim for f in factors]
        plain_dim = prod(dims)
        strides = [prod(dims[r + 1:]) for r in range(len(dims))]
        plain_parity = []
        for combo in itertools.product(*[range(d) for d in dims]):
            plain_parity.append(sum(f.parity[i] for f, i in zip(factors, combo)) % 2)
        rows = _balancing_rows(factors, dims, strides, fld)
        sub = sparse_rowspace(rows, plain_dim, fld)
        quot = Quotient(Subspace.full(plain_dim, fld), sub, tuple(plain_parity))
        super().__init__(factors[0].left_alg, factors[-1].right_alg, quot.coord_parity,
                         left_fn=self._descended_left, right_fn=self._descended_right,
                         name="(x)_rel".join(f.name or "?" for f in factors))
        self.factors = factors
        self.quotient = quot
        self.plain_dim = plain_dim
        self.plain_parity = tuple(plain_parity)
        self._strides = strides
        self._section_cols = [quot.section.column_vec(q) for q in range(quot.dim)]

    def _descend_plain_action(self, plain_apply) -> Matrix:
        cols = [self.quotient.proj.apply(plain_apply(sc)) for sc in self._section_cols]
        if not cols:
            return Matrix([], 0, self.field)
        return Matrix([[cols[q][t] for q in range(self.dim)]
                       for t in range(self.dim)], self.dim, self.field)

    def _descended_left(self, idx: int) -> Matrix:
        l_mat = self.factors[0].left(idx)
        d_rest = self.plain_dim // self.factors[0].dim if self.factors[0].dim else 0
        return self._descend_plain_action(
            lambda v: _apply_first(l_mat, d_rest, v, self.field))

    def _descended_right(self, idx: int) -> Matrix:
        r_mat = self.factors[-1].right(idx)
        d_lead = self.plain_dim // self.factors[-1].dim if self.factors[-1].dim else 0
        return self._descend_plain_action(
            lambda v: _apply_last(r_mat, d_lead, v, self.field))

    def project_plain(self, vec: Sequence[Scalar]) -> list[Scalar]:
        if len(vec) != self.plain_dim:
            raise InvalidInput("plain coordinate length mismatch")
        return self.quotient.proj.apply(vec)

    def project_pure(self, *vecs: Sequence[Scalar]) -> list[Scalar]:
        return self.project_plain(self.pure_plain(*vecs))

    def pure_plain(self, *vecs: Sequence[Scalar]) -> list[Scalar]:
        if len(vecs) != len(self.factors):
            raise InvalidInput("one coordinate vector per tensor factor expected")
        for v, f in zip(vecs, self.factors):
            if len(v) != f.dim:
                raise InvalidInput("tensor factor coordinate length mismatch")
        plain = [Scalar.zero(self.field)] * self.plain_dim
        items = [[(i, x) for i, x in enumerate(v) if not x.is_zero()] for v in vecs]
        for combo in itertools.product(*items):
            flat = sum(i * s for (i, _), s in zip(combo, self._strides))
            val = combo[0][1]
            for _, x in combo[1:]:
                val = val * x
            plain[flat] = val
        return plain

    def lift(self, qvec: Sequence[Scalar]) -> list[Scalar]:
        if len(qvec) != self.dim:
            raise InvalidInput("quotient coordinate length mismatch")
        return self.quotient.section.apply(qvec)


def _balancing_rows(factors, dims, strides, fld):
    rows = []
    npos = len(factors)
    for q in range(npos - 1):
        mid = factors[q].right_alg
        n_mod, m_mod = factors[q], factors[q + 1]
        others = [r for r in range(npos) if r not in (q, q + 1)]
        other_ranges = [range(dims[r]) for r in others]
        for g in mid.generators:
            rg = n_mod.right(g)
            lg = m_mod.left(g)
            r_cols = [[(s, rg.rows[s][i]) for s in range(n_mod.dim)
                       if not rg.rows[s][i].is_zero()] for i in range(n_mod.dim)]
            l_cols = [[(t, lg.rows[t][j]) for t in range(m_mod.dim)
                       if not lg.rows[t][j].is_zero()] for j in range(m_mod.dim)]
            for i in range(n_mod.dim):
                for j in range(m_mod.dim):
                    for combo in itertools.product(*other_ranges):
                        base = sum(idx * strides[r] for idx, r in zip(combo, others))
                        row: dict[int, Scalar] = {}
                        for s, v in r_cols[i]:
                            row[base + s * strides[q] + j * strides[q + 1]] = v
                        for t, v in l_cols[j]:
                            key = base + i * strides[q] + t * strides[q + 1]
                            prev = row.get(key)
                            row[key] = -v if prev is None else prev - v
                        if row:
                            rows.append(row)
    return rows


def relative_tensor(n_mod: SuperBimodule, m_mod: SuperBimodule) -> RelativeTensor:
    """N (x)_B M for N a (C,B)- and M a (B,A)-bimodule."""
    return RelativeTensor((n_mod, m_mod))


def relative_tensor_chain(factors: Sequence[SuperBimodule]) -> RelativeTensor:
    """Iterated relative tensor as a single quotient of the full plain product."""
    return RelativeTensor(factors)


def parity_shift(mod: SuperBimodule, flip: int) -> SuperBimodule:
    """The same space with parity flipped when ``flip`` is odd.

    The right action picks up the sign of moving algebra elements past an
    odd line sitting on the far side; the left action is unchanged.
    """
    if flip % 2 == 0:
        return mod
    ralg = mod.right_alg
    parity = tuple((p + 1) % 2 for p in mod.parity)

    def right_fn(k: int) -> Matrix:
        m = mod.right(k)
        return -m if ralg.parity[k] % 2 else m

    return SuperBimodule(mod.left_alg, ralg, parity, left_fn=mod.left,
                         right_fn=right_fn,
                         name=f"shift({mod.name})" if mod.name else "shift")


# -- graded hom spaces --------------------------------------------------


@dataclass
class HomSpace:
    """Solution space of the graded bimodule-hom law, split by parity.

    A hom of parity p satisfies phi(a·m·b) = (-1)^{p|a|} a·phi(m)·b; its
    matrix X obeys X·L_a = (-1)^{p|a|} L_a·X and X·R_b = R_b·X.
    """

    source: SuperBimodule
    target: SuperBimodule
    even_basis: list[Matrix]
    odd_basis: list[Matrix]

    @property
    def dim(self) -> int:
        return len(self.even_basis) + len(self.odd_basis)

    @property
    def basis(self) -> list[Matrix]:
        return list(self.even_basis) + list(self.odd_basis)

    @property
    def parities(self) -> tuple[int, ...]:
        return (0,) * len(self.even_basis) + (1,) * len(self.odd_basis)

    def to_json(self) -> dict:
        return {"even_basis": [m.to_json() for m in self.even_basis],
                "odd_basis": [m.to_json() for m in self.odd_basis]}


def bimodule_hom_space(src: SuperBimodule, dst: SuperBimodule) -> HomSpace:
    """Canonical basis of graded bimodule homs src -> dst, one system per parity."""
    if not _same_algebra(src.left_alg, dst.left_alg) or \
            not _same_algebra(src.right_alg, dst.right_alg):
        raise InvalidInput("hom space requires the same algebra pair on both sides")
    fld = src.field
    la, ra = src.left_alg, src.right_alg
    by_parity: dict[int, list[Matrix]] = {0: [], 1: []}
    for p in (0, 1):
        allowed = [(t, s) for t in range(dst.dim) for s in range(src.dim)
                   if dst.parity[t] == (src.parity[s] + p) % 2]
        if not allowed:
            continue
        pos = {ts: q for q, ts in enumerate(allowed)}
        eq_rows = []
        for g in la.generators:
            lm, ln = src.left(g), dst.left(g)
            flip = p and la.parity[g]
            _hom_condition_rows(eq_rows, pos, lm, ln, flip, dst.dim, src.dim)
        for g in ra.generators:
            rm, rn = src.right(g), dst.right(g)
            _hom_condition_rows(eq_rows, pos, rm, rn, False, dst.dim, src.dim)
        for kv in sparse_kernel(eq_rows, len(allowed), fld):
            rows = [[Scalar.zero(fld)] * src.dim for _ in range(dst.dim)]
            for q, (t, s) in enumerate(allowed):
                rows[t][s] = kv[q]
            by_parity[p].append(Matrix(rows, src.dim, fld))
    # canonicalize each parity block through a joint reduced form
    width = dst.dim * src.dim
    out: dict[int, list[Matrix]] = {0: [], 1: []}
    for p in (0, 1):
        vecs = [[m.rows[t][s] for t in range(dst.dim) for s in range(src.dim)]
                for m in by_parity[p]]
        canon = Subspace(width, fld, vecs) if width else None
        if canon is None:
            continue
        for row in canon.rows:
            out[p].append(Matrix([[row[t * src.dim + s] for s in range(src.dim)]
                                  for t in range(dst.dim)], src.dim, fld))
    return HomSpace(src, dst, out[0], out[1])


def _hom_condition_rows(eq_rows, pos, act_src, act_dst, flip, dst_dim, src_dim):
    # X·A_src - (-1)^flip A_dst·X = 0, restricted to the allowed variables
    for t in range(dst_dim):
        for s in range(src_dim):
            row: dict[int, Scalar] = {}
            for u in range(src_dim):
                c = act_src.rows[u][s]
                if c.is_zero():
                    continue
                q = pos.get((t, u))
                if q is not None:
                    prev = row.get(q)
                    row[q] = c if prev is None else prev + c
            for v in range(dst_dim):
                c = act_dst.rows[t][v]
                if c.is_zero():
                    continue
                q = pos.get((v, s))
                if q is not None:
                    c = c if flip else -c
                    prev = row.get(q)
                    row[q] = c if prev is None else prev + c
            if row:
                eq_rows.append(row)


# -- invertibility -------------------------------------------------------


@dataclass
class InvertibilityReport:
    dims_match: bool
    left_dual_bijective: bool
    right_dual_bijective: bool
    details: dict

    @property
    def invertible(self) -> bool:
        return self.dims_match and self.left_dual_bijective and self.right_dual_bijective

    def to_json(self) -> dict:
        return {"invertible": self.invertible, "dims_match": self.dims_match,
                "left_dual_bijective": self.left_dual_bijective,
                "right_dual_bijective": self.right_dual_bijective,
                "details": dict(self.details)}


def invertibility_check(mod: SuperBimodule) -> InvertibilityReport:
    """Decide invertibility of a (B,A)-bimodule through the two evaluations.

    Checks dim M^2 = dim A · dim B, then that evaluation against the dual
    identifies M^v (x)_B M with the dual of A and M (x)_A M^v with the dual
    of B.
    """
    b_alg, a_alg = mod.left_alg, mod.right_alg
    fld = mod.field
    dual = dual_bimodule(mod)
    dims_match = mod.dim * mod.dim == a_alg.dim * b_alg.dim
    n = mod.dim

    # xi_i (x) m_j  |->  (a |-> xi_i(m_j·a))
    t_right = relative_tensor(dual, mod)
    p_rows = []
    for k in range(a_alg.dim):
        rk = mod.right(k)
        p_rows.append([rk.rows[i][j] for i in range(n) for j in range(n)])
    right_ok = _dual_eval_bijective(p_rows, t_right, a_alg.dim, fld)

    # m_j (x) xi_i  |->  (b |-> (-1)^{p_i(|b|+p_j)} xi_i(b·m_j))
    t_left = relative_tensor(mod, dual)
    q_rows = []
    for k in range(b_alg.dim):
        lk = mod.left(k)
        pk = b_alg.parity[k]
        row = []
        for j in range(n):
            for i in range(n):
                v = lk.rows[i][j]
                if not v.is_zero() and mod.parity[i] and (pk + mod.parity[j]) % 2:
                    v = -v
                row.append(v)
        q_rows.append(row)
    left_ok = _dual_eval_bijective(q_rows, t_left, b_alg.dim, fld)

    details = {"module_dim": mod.dim, "left_algebra_dim": b_alg.dim,
               "right_algebra_dim": a_alg.dim,
               "left_tensor_dim": t_left.dim, "right_tensor_dim": t_right.dim}
    return InvertibilityReport(dims_match, left_ok, right_ok, details)


def _dual_eval_bijective(plain_rows, tensor: RelativeTensor, target_dim: int, fld: str) -> bool:
    plain = Matrix(plain_rows, tensor.plain_dim, fld)
    for r in tensor.quotient.sub.rows:
        if any(not x.is_zero() for x in plain.apply(r)):
            raise InternalError("evaluation map does not kill the balancing subspace")
    if tensor.dim != target_dim:
        return False
    return (plain @ tensor.quotient.section).is_invertible()


# -- hom plumbing ---------------------------------------------------------


def compose_and_tensor_homs(h1, h2, mode: str, *, g_parity: int = 0,
                            left_parities: Sequence[int] | None = None,
                            check: bool = True) -> Matrix:
    """Combine maps: plain composition, Kronecker tensoring, or quotient descent.

    mode "compose":     h1 after h2.
    mode "left_tensor": h1 (x) h2 with h1 on the leading factor; ``g_parity``
                        is the parity of h2 and ``left_parities`` grades the
                        source of h1 (signs vanish for even h2).
    mode "right_tensor": h1 (x) h2, same layout (the sign rule only ever
                        involves the trailing map's parity).
    mode "descend_to_quotient": h1 is a plain-level map, h2 a Quotient or a
                        (source, target) pair of Quotients.
    """
    if mode == "compose":
        return h1 @ h2
    if mode in ("left_tensor", "right_tensor"):
        if left_parities is None:
            if g_parity % 2:
                raise InvalidInput("tensoring an odd map needs the leading source grading")
            left_parities = [0] * h1.ncols
        return signed_kron(h1, h2, g_parity, left_parities)
    if mode == "descend_to_quotient":
        if isinstance(h2, Quotient):
            src_q = dst_q = h2
        else:
            src_q, dst_q = h2
        return descend(h1, src_q, dst_q, check=check)
    raise InvalidInput(f"unknown hom combination mode: {mode}")
