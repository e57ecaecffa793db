"""Antiinvolutive spaces, Lagrangian subspaces, correspondences, and spans.

A space carries an antilinear involution alpha(v) = A·conj(v) (conj is the
identity over the rationals).  The induced symmetric form is
b(v, w) = <alpha(v)|w> = v^T·conj(A)^T·w; Lagrangians are half-dimensional
isotropic subspaces, and correspondences between spaces are Lagrangians of
(-source)(+)target.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .errors import InternalError, InvalidInput, Unsupported
from .linalg import Matrix, Subspace, pullback
from .scalars import Q, QI, Scalar
from .superalg import ValidationReport


class AntiinvolutiveSpace:
    """Finite-dimensional space with alpha(v) = A·conj(v), alpha^2 = id."""

    __slots__ = ("field", "dim", "inv", "name", "_form")

    def __init__(self, field: str, inv: Matrix, name: str = ""):
        if inv.field != field:
            raise InvalidInput("involution matrix field mismatch")
        if inv.nrows != inv.ncols:
            raise InvalidInput("involution matrix must be square")
        self.field = field
        self.dim = inv.nrows
        self.inv = inv
        self.name = name
        ident = Matrix.identity(self.dim, field)
        if inv @ inv.conj() != ident:
            raise InvalidInput("involution is not involutive: A·conj(A) != I")
        if inv.conj().transpose() @ inv != ident:
            raise InvalidInput("involution is not antiunitary: conj(A)^T·A != I")
        self._form = inv.conj().transpose()

    def __repr__(self) -> str:
        tag = self.name or "H"
        return f"<{tag} dim={self.dim} field={self.field}>"

    def __eq__(self, other) -> bool:
        return (isinstance(other, AntiinvolutiveSpace)
                and self.field == other.field and self.inv == other.inv)

    def alpha(self, vec: Sequence[Scalar]) -> list[Scalar]:
        if len(vec) != self.dim:
            raise InvalidInput("vector length mismatch")
        return self.inv.apply([x.conj() for x in vec])

    def form_matrix(self) -> Matrix:
        return self._form

    def zero_vector(self) -> list[Scalar]:
        return [Scalar.zero(self.field)] * self.dim

    def to_json(self) -> dict:
        return {"field": self.field, "dim": self.dim, "inv": self.inv.to_json(),
                "name": self.name}

    @staticmethod
    def from_json(data: dict) -> "AntiinvolutiveSpace":
        fld = data["field"]
        inv = Matrix.from_json(data["inv"], fld, ncols=data.get("dim"))
        return AntiinvolutiveSpace(fld, inv, data.get("name", ""))


def standard_space(fld: str, dim: int, name: str = "") -> AntiinvolutiveSpace:
    """Plain conjugation space: A = identity."""
    return AntiinvolutiveSpace(fld, Matrix.identity(dim, fld), name)


def bilinear_form(space: AntiinvolutiveSpace, v: Sequence[Scalar],
                  w: Sequence[Scalar]) -> Scalar:
    """b(v, w) = <alpha(v)|w>, symmetric and nondegenerate."""
    if len(v) != space.dim or len(w) != space.dim:
        raise InvalidInput("vector length mismatch")
    gw = space.form_matrix().apply(w)
    out = Scalar.zero(space.field)
    for a, b in zip(v, gw):
        if not a.is_zero() and not b.is_zero():
            out = out + a * b
    return out


def alpha_subspace(space: AntiinvolutiveSpace, sub: Subspace) -> Subspace:
    return Subspace(space.dim, space.field, [space.alpha(r) for r in sub.rows])


def negate(space: AntiinvolutiveSpace) -> AntiinvolutiveSpace:
    """The dual space (H, -alpha)."""
    return AntiinvolutiveSpace(space.field, -space.inv,
                               f"-{space.name}" if space.name else "")


def direct_sum(a: AntiinvolutiveSpace, b: AntiinvolutiveSpace) -> AntiinvolutiveSpace:
    if a.field != b.field:
        raise InvalidInput("direct sum needs a common field")
    fld = a.field
    zero = Scalar.zero(fld)
    n, m = a.dim, b.dim
    rows = []
    for t in range(n):
        rows.append(list(a.inv.rows[t]) + [zero] * m)
    for t in range(m):
        rows.append([zero] * n + list(b.inv.rows[t]))
    name = f"{a.name}(+){b.name}" if a.name or b.name else ""
    return AntiinvolutiveSpace(fld, Matrix(rows, n + m, fld), name)


class LagrangianSubspace:
    """A validated Lagrangian: isotropic with H = L (+) alpha(L)."""

    __slots__ = ("space", "sub")

    def __init__(self, space: AntiinvolutiveSpace, sub: Subspace):
        self.space = space
        self.sub = sub

    @property
    def dim(self) -> int:
        return self.sub.dim

    def __eq__(self, other) -> bool:
        return (isinstance(other, LagrangianSubspace)
                and self.space == other.space and self.sub == other.sub)

    def __repr__(self) -> str:
        return f"<Lagrangian dim={self.dim} of {self.space!r}>"

    def to_json(self) -> dict:
        return {"space": self.space.to_json(),
                "basis": [[x.to_json() for x in r] for r in self.sub.rows]}

    @staticmethod
    def from_json(data: dict, space: AntiinvolutiveSpace | None = None) -> "LagrangianSubspace":
        if space is None:
            space = AntiinvolutiveSpace.from_json(data["space"])
        rows = [[Scalar.from_json(x, space.field) for x in r] for r in data["basis"]]
        return lagrangian(space, rows)


def validate_lagrangian(space: AntiinvolutiveSpace, sub: Subspace) -> ValidationReport:
    """Isotropy of the form plus the splitting H = S (+) alpha(S)."""
    if sub.ambient != space.dim or sub.field != space.field:
        raise InvalidInput("subspace does not live in the given space")
    rep = ValidationReport("lagrangian")
    for a in range(sub.dim):
        for b in range(a, sub.dim):
            val = bilinear_form(space, sub.rows[a], sub.rows[b])
            if not val.is_zero():
                rep.violations.append(
                    f"form does not vanish on basis pair ({a},{b}): {val}")
    if 2 * sub.dim != space.dim:
        rep.violations.append(
            f"dimension {sub.dim} is not half of ambient {space.dim}")
    stacked = Subspace(space.dim, space.field,
                       list(sub.rows) + [space.alpha(r) for r in sub.rows])
    if stacked.dim != min(space.dim, 2 * sub.dim):
        rep.violations.append("subspace meets its alpha-image")
    rep.info["dim"] = sub.dim
    return rep


def validate_sublagrangian(space: AntiinvolutiveSpace, sub: Subspace) -> ValidationReport:
    """Isotropic with S + alpha(S) the whole space (no directness required)."""
    if sub.ambient != space.dim or sub.field != space.field:
        raise InvalidInput("subspace does not live in the given space")
    rep = ValidationReport("sublagrangian")
    for a in range(sub.dim):
        for b in range(a, sub.dim):
            if not bilinear_form(space, sub.rows[a], sub.rows[b]).is_zero():
                rep.violations.append(f"form does not vanish on basis pair ({a},{b})")
    stacked = Subspace(space.dim, space.field,
                       list(sub.rows) + [space.alpha(r) for r in sub.rows])
    if stacked.dim != space.dim:
        rep.violations.append("S + alpha(S) is a proper subspace")
    return rep


def lagrangian(space: AntiinvolutiveSpace, rows) -> LagrangianSubspace:
    """Validating constructor from spanning rows (or a Subspace)."""
    sub = rows if isinstance(rows, Subspace) else Subspace(space.dim, space.field, rows)
    rep = validate_lagrangian(space, sub)
    if not rep.ok:
        raise InvalidInput("not a Lagrangian: " + "; ".join(rep.violations))
    return LagrangianSubspace(space, sub)


def direct_sum_lagrangians(l1: LagrangianSubspace, l2: LagrangianSubspace) -> LagrangianSubspace:
    """L1 (+) L2 inside the direct sum of the ambient spaces."""
    amb = direct_sum(l1.space, l2.space)
    zero = Scalar.zero(amb.field)
    rows = [list(r) + [zero] * l2.space.dim for r in l1.sub.rows]
    rows += [[zero] * l1.space.dim + list(r) for r in l2.sub.rows]
    return lagrangian(amb, rows)


# -- correspondences ----------------------------------------------------


def corr_ambient(src: AntiinvolutiveSpace, dst: AntiinvolutiveSpace) -> AntiinvolutiveSpace:
    """(-source) (+) target, the home of correspondences src -> dst."""
    return direct_sum(negate(src), dst)


class Correspondence:
    """A Lagrangian of (-H_i) (+) H_j, read as a morphism H_i -> H_j."""

    __slots__ = ("source", "target", "lag")

    def __init__(self, source: AntiinvolutiveSpace, target: AntiinvolutiveSpace,
                 lag: LagrangianSubspace):
        self.source = source
        self.target = target
        self.lag = lag

    @property
    def sub(self) -> Subspace:
        return self.lag.sub

    @property
    def dim(self) -> int:
        return self.lag.dim

    def __eq__(self, other) -> bool:
        return (isinstance(other, Correspondence) and self.source == other.source
                and self.target == other.target and self.lag == other.lag)

    def __repr__(self) -> str:
        return f"<Correspondence {self.source!r} -> {self.target!r} dim={self.dim}>"

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "basis": [[x.to_json() for x in r] for r in self.sub.rows]}

    @staticmethod
    def from_json(data: dict) -> "Correspondence":
        src = AntiinvolutiveSpace.from_json(data["source"])
        dst = AntiinvolutiveSpace.from_json(data["target"])
        amb = corr_ambient(src, dst)
        rows = [[Scalar.from_json(x, amb.field) for x in r] for r in data["basis"]]
        return correspondence(src, dst, rows)


def correspondence(src: AntiinvolutiveSpace, dst: AntiinvolutiveSpace,
                   rows) -> Correspondence:
    amb = corr_ambient(src, dst)
    return Correspondence(src, dst, lagrangian(amb, rows))


def identity_corr(space: AntiinvolutiveSpace) -> Correspondence:
    """The diagonal {(v, v)}."""
    zero, one = Scalar.zero(space.field), Scalar.one(space.field)
    n = space.dim
    rows = []
    for t in range(n):
        row = [zero] * (2 * n)
        row[t] = one
        row[n + t] = one
        rows.append(row)
    return correspondence(space, space, rows)


def _middle_projection(sub: Subspace, offset: int, width: int) -> Matrix:
    # component map: coefficient vector on sub -> chosen coordinate block
    cols = [[r[offset + t] for t in range(width)] for r in sub.rows]
    if not cols:
        return Matrix.zeros(width, 0, sub.field)
    return Matrix(cols, width, sub.field).transpose()


def compose_corr(l_ij: Correspondence, l_jk: Correspondence) -> Correspondence:
    """Composite correspondence: match the middle components, project to the ends.

    The output is re-validated; failure is an internal error since closure
    of Lagrangians under composition is a theorem.
    """
    if l_ij.target != l_jk.source:
        raise InvalidInput("correspondences are not composable")
    ni = l_ij.source.dim
    nj = l_ij.target.dim
    nk = l_jk.target.dim
    fld = l_ij.source.field
    mj_left = _middle_projection(l_ij.sub, ni, nj)
    mj_right = _middle_projection(l_jk.sub, 0, nj)
    fiber = pullback(mj_left, mj_right)
    d1 = l_ij.dim
    rows = []
    for p in fiber.rows:
        x, y = p[:d1], p[d1:]
        amb = [Scalar.zero(fld)] * (ni + nk)
        for c, brow in zip(x, l_ij.sub.rows):
            if not c.is_zero():
                for t in range(ni):
                    if not brow[t].is_zero():
                        amb[t] = amb[t] + c * brow[t]
        for c, brow in zip(y, l_jk.sub.rows):
            if not c.is_zero():
                for t in range(nk):
                    if not brow[nj + t].is_zero():
                        amb[ni + t] = amb[ni + t] + c * brow[nj + t]
        rows.append(amb)
    amb_space = corr_ambient(l_ij.source, l_jk.target)
    sub = Subspace(amb_space.dim, fld, rows)
    rep = validate_lagrangian(amb_space, sub)
    if not rep.ok:
        raise InternalError("composite correspondence is not Lagrangian: "
                            + "; ".join(rep.violations))
    return Correspondence(l_ij.source, l_jk.target,
                          LagrangianSubspace(amb_space, sub))


# -- generalized Lagrangians and spans -----------------------------------


class GeneralizedLagrangian:
    """A linear map eta: W -> H whose image is Lagrangian."""

    __slots__ = ("space", "w_dim", "eta")

    def __init__(self, space: AntiinvolutiveSpace, eta: Matrix):
        self.space = space
        self.w_dim = eta.ncols
        self.eta = eta

    @property
    def kernel_dim(self) -> int:
        return self.w_dim - self.eta.rank()

    def image(self) -> Subspace:
        return Subspace(self.space.dim, self.space.field,
                        [self.eta.column_vec(c) for c in range(self.w_dim)])

    def __eq__(self, other) -> bool:
        return (isinstance(other, GeneralizedLagrangian)
                and self.space == other.space and self.eta == other.eta)


class Span:
    """A generalized Lagrangian of (-source) (+) target."""

    __slots__ = ("source", "target", "gen")

    def __init__(self, source: AntiinvolutiveSpace, target: AntiinvolutiveSpace,
                 gen: GeneralizedLagrangian):
        self.source = source
        self.target = target
        self.gen = gen

    @property
    def w_dim(self) -> int:
        return self.gen.w_dim

    @property
    def eta(self) -> Matrix:
        return self.gen.eta

    def __repr__(self) -> str:
        return (f"<Span {self.source!r} -> {self.target!r} "
                f"w_dim={self.w_dim} ker={self.gen.kernel_dim}>")

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "w_dim": self.w_dim, "eta": self.eta.to_json()}

    @staticmethod
    def from_json(data: dict) -> "Span":
        src = AntiinvolutiveSpace.from_json(data["source"])
        dst = AntiinvolutiveSpace.from_json(data["target"])
        eta = Matrix.from_json(data["eta"], src.field, ncols=data.get("w_dim"))
        return span(src, dst, eta)


def validate_span(sp: Span) -> ValidationReport:
    """Image must be Lagrangian; the kernel dimension is reported, not constrained."""
    amb = corr_ambient(sp.source, sp.target)
    if sp.eta.nrows != amb.dim or sp.eta.field != amb.field:
        raise InvalidInput("span matrix does not map into (-source)(+)target")
    rep = validate_lagrangian(amb, sp.gen.image())
    rep.subject = "span"
    rep.info["ker_dim"] = sp.gen.kernel_dim
    rep.info["w_dim"] = sp.w_dim
    return rep


def span(src: AntiinvolutiveSpace, dst: AntiinvolutiveSpace, eta: Matrix) -> Span:
    """Validating constructor."""
    amb = corr_ambient(src, dst)
    if eta.nrows != amb.dim or eta.field != amb.field:
        raise InvalidInput("span matrix does not map into (-source)(+)target")
    out = Span(src, dst, GeneralizedLagrangian(amb, eta))
    rep = validate_span(out)
    if not rep.ok:
        raise InvalidInput("span image is not Lagrangian: " + "; ".join(rep.violations))
    return out


def inclusion_span(corr: Correspondence) -> Span:
    """The span with W = the Lagrangian itself and eta its inclusion."""
    return span(corr.source, corr.target, corr.sub.basis_matrix())


def span_image(sp: Span) -> Correspondence:
    rep = validate_span(sp)
    if not rep.ok:
        raise InvalidInput("span image is not Lagrangian")
    amb = corr_ambient(sp.source, sp.target)
    sub = sp.gen.image()
    return Correspondence(sp.source, sp.target, LagrangianSubspace(amb, sub))


def span_fiber(s_ij: Span, s_jk: Span) -> Subspace:
    """Fiber product of the two parameter spaces over the middle space.

    A subspace of W_ij (+) W_jk, with W_ij coordinates first; its canonical
    basis is the parameter space of the composite span.
    """
    if s_ij.target != s_jk.source:
        raise InvalidInput("spans are not composable")
    ni = s_ij.source.dim
    nj = s_ij.target.dim
    pj_left = Matrix([s_ij.eta.rows[ni + t] for t in range(nj)], s_ij.w_dim,
                     s_ij.source.field)
    pj_right = Matrix([s_jk.eta.rows[t] for t in range(nj)], s_jk.w_dim,
                      s_jk.source.field)
    return pullback(pj_left, pj_right)


def compose_spans(s_ij: Span, s_jk: Span) -> Span:
    """Fiber product over the middle space, with the outer projections.

    The image of the composite is checked against the composite of the
    images; a mismatch is an internal error.
    """
    ni = s_ij.source.dim
    nj = s_ij.target.dim
    nk = s_jk.target.dim
    fld = s_ij.source.field
    fiber = span_fiber(s_ij, s_jk)
    w1 = s_ij.w_dim
    cols = []
    for p in fiber.rows:
        x, y = p[:w1], p[w1:]
        top = s_ij.eta.apply(x)[:ni]
        bottom = s_jk.eta.apply(y)[nj:]
        cols.append(top + bottom)
    if cols:
        eta = Matrix(cols, ni + nk, fld).transpose()
    else:
        eta = Matrix.zeros(ni + nk, 0, fld)
    out = Span(s_ij.source, s_jk.target,
               GeneralizedLagrangian(corr_ambient(s_ij.source, s_jk.target), eta))
    rep = validate_span(out)
    if not rep.ok:
        raise InternalError("composite span image is not Lagrangian: "
                            + "; ".join(rep.violations))
    expected = compose_corr(span_image(s_ij), span_image(s_jk))
    if span_image(out).sub != expected.sub:
        raise InternalError("composite span image differs from composed images")
    return out


# -- seeded random generation --------------------------------------------


def _diag_signs(inv: Matrix) -> list[int] | None:
    n = inv.nrows
    signs = []
    for t in range(n):
        for s in range(n):
            x = inv.rows[t][s]
            if t == s:
                if x.is_one():
                    signs.append(1)
                elif (-x).is_one():
                    signs.append(-1)
                else:
                    return None
            elif not x.is_zero():
                return None
    return signs


def _random_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-3, 3), rng.choice((1, 1, 2, 3)))


def random_scalar(rng: random.Random, fld: str) -> Scalar:
    re = _random_fraction(rng)
    if fld == Q:
        return Scalar(re)
    return Scalar(re, _random_fraction(rng))


def random_vector(rng: random.Random, dim: int, fld: str) -> list[Scalar]:
    return [random_scalar(rng, fld) for _ in range(dim)]


def _reference_lagrangian_rows(space: AntiinvolutiveSpace,
                               signs: list[int]) -> list[list[Scalar]]:
    fld = space.field
    zero, one = Scalar.zero(fld), Scalar.one(fld)
    plus = [t for t, s in enumerate(signs) if s > 0]
    minus = [t for t, s in enumerate(signs) if s < 0]
    if fld == Q and len(plus) != len(minus):
        raise Unsupported("no Lagrangian subspace: nonzero signature over the rationals")
    rows = []
    k = min(len(plus), len(minus))
    for p, m in zip(plus[:k], minus[:k]):
        row = [zero] * space.dim
        row[p] = one
        row[m] = one
        rows.append(row)
    leftover = plus[k:] + minus[k:]
    for a, b in zip(leftover[::2], leftover[1::2]):
        row = [zero] * space.dim
        row[a] = one
        row[b] = Scalar.i()
        rows.append(row)
    return rows


def random_lagrangian(space: AntiinvolutiveSpace, seed: int) -> LagrangianSubspace:
    """Deterministic sampling: a reference Lagrangian moved by a random
    form-orthogonal Cayley transform."""
    signs = _diag_signs(space.inv)
    if signs is None:
        raise Unsupported("random Lagrangians are only drawn for diagonal +-1 involutions")
    if space.dim % 2:
        raise Unsupported("no Lagrangian subspace: odd dimension")
    ref = _reference_lagrangian_rows(space, signs)
    fld = space.field
    n = space.dim
    ident = Matrix.identity(n, fld)
    rng = random.Random(seed)
    for _ in range(32):
        skew_rows = [[Scalar.zero(fld)] * n for _ in range(n)]
        for a in range(n):
            for b in range(a + 1, n):
                x = random_scalar(rng, fld)
                skew_rows[a][b] = x
                skew_rows[b][a] = -x
        k_mat = space.inv @ Matrix(skew_rows, n, fld)
        plus = ident + k_mat
        if not plus.is_invertible():
            continue
        t_mat = (ident - k_mat) @ plus.inverse()
        cand = Subspace(n, fld, [t_mat.apply(r) for r in ref])
        rep = validate_lagrangian(space, cand)
        if rep.ok:
            return LagrangianSubspace(space, cand)
    raise InternalError("random Lagrangian sampling did not converge")


def random_correspondence(src: AntiinvolutiveSpace, dst: AntiinvolutiveSpace,
                          seed: int) -> Correspondence:
    amb = corr_ambient(src, dst)
    lag = random_lagrangian(amb, seed)
    return Correspondence(src, dst, lag)


def matched_correspondence(src: AntiinvolutiveSpace, dst: AntiinvolutiveSpace,
                           seed: int, pair_first=None) -> Correspondence:
    """Seeded correspondence whose Lagrangian pairs ambient coordinates.

    Each basis row joins two coordinates p, q of the ambient as
    e_p + c e_q, with c chosen so the row is isotropic (i when the diagonal
    form gives both coordinates the same sign, 1 otherwise) and a seeded sign
    flip.  Rows have disjoint supports, so the span is Lagrangian by
    construction.  Unlike the Cayley-transform sampler this family hits
    degenerate compositions: forcing a row inside one summand (``pair_first``
    = (p, q, flip)) plants a middle vector shared with a neighbour.
    """
    amb = corr_ambient(src, dst)
    signs = _diag_signs(amb.inv)
    if signs is None:
        raise Unsupported("matched Lagrangians need a diagonal +-1 involution")
    n = amb.dim
    if n % 2:
        raise Unsupported("no Lagrangian subspace: odd dimension")
    fld = amb.field
    rng = random.Random(seed)
    coords = list(range(n))
    pairs = []
    if pair_first is not None:
        p, q, flip = pair_first
        coords.remove(p)
        coords.remove(q)
        pairs.append((p, q, flip))
    rng.shuffle(coords)
    for t in range(len(coords) // 2):
        pairs.append((coords[2 * t], coords[2 * t + 1], rng.randrange(2) == 1))
    rows = []
    for p, q, flip in pairs:
        if signs[p] == signs[q]:
            if fld != QI:
                raise Unsupported("same-sign coordinate pair needs i in the field")
            c = Scalar.i()
        else:
            c = Scalar.one(fld)
        row = [Scalar.zero(fld)] * n
        row[p] = Scalar.one(fld)
        row[q] = -c if flip else c
        rows.append(row)
    return Correspondence(src, dst, lagrangian(amb, rows))


def random_span(src: AntiinvolutiveSpace, dst: AntiinvolutiveSpace, seed: int,
                extra: int = 1) -> Span:
    """A span whose image is a random correspondence and whose kernel has
    dimension ``extra``."""
    corr = random_correspondence(src, dst, seed)
    basis = corr.sub.basis_matrix()
    d = corr.dim
    rng = random.Random(seed ^ 0x5EED)
    for _ in range(32):
        coef = Matrix([[random_scalar(rng, src.field) for _ in range(d + extra)]
                       for _ in range(d)], d + extra, src.field)
        if coef.rank() == d:
            return span(src, dst, basis @ coef)
    raise InternalError("random span sampling did not converge")


# -- fixtures -------------------------------------------------------------


def fix_r2() -> tuple[AntiinvolutiveSpace, LagrangianSubspace]:
    """(Q^2, diag(1,-1)) with L = span{(1,1)}."""
    one = Scalar.one(Q)
    inv = Matrix([[one, Scalar.zero(Q)], [Scalar.zero(Q), -one]], 2, Q)
    space = AntiinvolutiveSpace(Q, inv, "R2")
    return space, lagrangian(space, [[one, one]])


def fix_c1() -> AntiinvolutiveSpace:
    return standard_space(QI, 1, "C1")


def fix_c2() -> AntiinvolutiveSpace:
    return standard_space(QI, 2, "C2")


def fix_lplus(space: AntiinvolutiveSpace | None = None) -> LagrangianSubspace:
    space = space or fix_c2()
    one = Scalar.one(QI)
    return lagrangian(space, [[one, Scalar.i()]])


def fix_lminus(space: AntiinvolutiveSpace | None = None) -> LagrangianSubspace:
    space = space or fix_c2()
    one = Scalar.one(QI)
    return lagrangian(space, [[one, -Scalar.i()]])


def fix_graph_matrix() -> Matrix:
    """A complex-orthogonal g with g^T g = I and no real entries off the diagonal."""
    zero = Fraction(0)
    ft = Fraction(5, 3)
    fi = Fraction(4, 3)
    return Matrix([[Scalar(ft, zero), Scalar(zero, fi)],
                   [Scalar(zero, -fi), Scalar(ft, zero)]], 2, QI)


def graph_correspondence(space: AntiinvolutiveSpace, g: Matrix) -> Correspondence:
    """The graph {(v, g·v)} as a correspondence space -> space."""
    if g.nrows != space.dim or g.ncols != space.dim:
        raise InvalidInput("graph matrix shape mismatch")
    rows = []
    for t in range(space.dim):
        e = [Scalar.zero(space.field)] * space.dim
        e[t] = Scalar.one(space.field)
        rows.append(e + g.column_vec(t))
    return correspondence(space, space, rows)


def fix_graph_corr() -> Correspondence:
    return graph_correspondence(fix_c2(), fix_graph_matrix())


def fix_pair() -> tuple[Correspondence, Correspondence]:
    """Two composable correspondences C2 -> C2 whose middle match has rank
    deficiency one: L1 = L- (+) L+, L2 = L+ (+) L+."""
    h = fix_c2()
    l1 = correspondence(h, h, _pair_rows(minus_first=True))
    l2 = correspondence(h, h, _pair_rows(minus_first=False))
    return l1, l2


def _pair_rows(minus_first: bool) -> list[list[Scalar]]:
    one, zero, i = Scalar.one(QI), Scalar.zero(QI), Scalar.i()
    first = [one, -i if minus_first else i, zero, zero]
    second = [zero, zero, one, i]
    return [first, second]
