"""Pfaffian lines of composable Lagrangian correspondences.

A composable pair (l_ij, l_jk) has two incarnations of its Pfaffian line:
the hom line Hom(F(l_ik), F(l_jk) (x)_Cl F(l_ij)) over the composite
l_ik = l_jk o l_ij, and the determinant line of the kernel of the fiber
product's projection to the outer coordinates.  Both are computed here in
exact arithmetic, together with the vacuum-normalized isomorphism between
them, the four-index comparison scalar phi, and the two coherence checkers
(the pentagon for phi alone and the mixed square tying phi to the hom
picture).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .clifford import build_clifford  # noqa: F401  (re-export convenience for callers)
from .errors import InternalError, InvalidInput, NotBalanced
from .fock import FockModule, build_fock, fock_bimodule
from .hilbert import Correspondence, compose_corr, random_scalar
from .linalg import (CoherenceReport, DetLine, Matrix, Subspace, check_diagram,
                     descend, parity_diag, ses_det_iso)
from .scalars import Scalar
from .superalg import (HomSpace, RelativeTensor, SuperBimodule, parity_shift,
                       relative_tensor, relative_tensor_chain)

__all__ = [
    "pf_kernel", "pf_det", "pf_hom", "lambda_iso", "LambdaIso",
    "pfaffian_line", "PfaffianLine", "phi_iso", "PhiIso",
    "check_fock_pentagon", "check_fock_mixed",
]


def _require_composable(l_ij: Correspondence, l_jk: Correspondence) -> None:
    if l_ij.target != l_jk.source:
        raise InvalidInput("correspondences do not share a middle space")


def _combo(coeffs, rows, width: int, fld: str) -> list[Scalar]:
    out = [Scalar.zero(fld)] * width
    for c, r in zip(coeffs, rows):
        if not c.is_zero():
            out = [a + c * b for a, b in zip(out, r)]
    return out


def pf_kernel(l_ij: Correspondence, l_jk: Correspondence) -> Subspace:
    """Kernel of the outer projection of the fiber product, as concatenated pairs.

    Elements are (v_ij, v_jk) with v_ij in l_ij, v_jk in l_jk, vanishing outer
    components and matching middle components; the ambient is the direct sum
    of the two correspondence ambients.
    """
    _require_composable(l_ij, l_jk)
    ni, nj, nk = l_ij.source.dim, l_ij.target.dim, l_jk.target.dim
    fld = l_ij.source.field
    rows1, rows2 = l_ij.sub.rows, l_jk.sub.rows
    d1, d2 = len(rows1), len(rows2)
    zero = Scalar.zero(fld)
    cons: list[list[Scalar]] = []
    for t in range(ni):
        cons.append([r[t] for r in rows1] + [zero] * d2)
    for t in range(nj):
        cons.append([r[ni + t] for r in rows1] + [-r[t] for r in rows2])
    for t in range(nk):
        cons.append([zero] * d1 + [r[nj + t] for r in rows2])
    coeffs = Matrix(cons, d1 + d2, fld).nullspace_rows()
    width = (ni + nj) + (nj + nk)
    vecs = [_combo(c[:d1], rows1, ni + nj, fld) + _combo(c[d1:], rows2, nj + nk, fld)
            for c in coeffs]
    return Subspace(width, fld, vecs)


def _triple_kernel(l_ij: Correspondence, l_jk: Correspondence,
                   l_kl: Correspondence) -> Subspace:
    # triples (v_ij, v_jk, v_kl) with vanishing outermost components and both
    # middle components matching
    ni, nj = l_ij.source.dim, l_ij.target.dim
    nk, nl = l_jk.target.dim, l_kl.target.dim
    fld = l_ij.source.field
    rows1, rows2, rows3 = l_ij.sub.rows, l_jk.sub.rows, l_kl.sub.rows
    d1, d2, d3 = len(rows1), len(rows2), len(rows3)
    zero = Scalar.zero(fld)
    cons: list[list[Scalar]] = []
    for t in range(ni):
        cons.append([r[t] for r in rows1] + [zero] * (d2 + d3))
    for t in range(nj):
        cons.append([r[ni + t] for r in rows1] + [-r[t] for r in rows2] + [zero] * d3)
    for t in range(nk):
        cons.append([zero] * d1 + [r[nj + t] for r in rows2] + [-r[t] for r in rows3])
    for t in range(nl):
        cons.append([zero] * (d1 + d2) + [r[nk + t] for r in rows3])
    coeffs = Matrix(cons, d1 + d2 + d3, fld).nullspace_rows()
    width = (ni + nj) + (nj + nk) + (nk + nl)
    vecs = [_combo(c[:d1], rows1, ni + nj, fld)
            + _combo(c[d1:d1 + d2], rows2, nj + nk, fld)
            + _combo(c[d1 + d2:], rows3, nk + nl, fld)
            for c in coeffs]
    return Subspace(width, fld, vecs)


def pf_det(l_ij: Correspondence, l_jk: Correspondence) -> DetLine:
    """Determinant-line incarnation of the Pfaffian line of a composable pair."""
    return DetLine(pf_kernel(l_ij, l_jk))


# -- hom incarnation -----------------------------------------------------


@dataclass(frozen=True)
class _HomSetup:
    l_ik: Correspondence
    source: SuperBimodule
    tensor: RelativeTensor
    fock_mid: FockModule
    ni: int
    sign: Matrix


def _hom_setup(l_ij: Correspondence, l_jk: Correspondence) -> _HomSetup:
    _require_composable(l_ij, l_jk)
    l_ik = compose_corr(l_ij, l_jk)
    source = fock_bimodule(l_ik)
    tensor = relative_tensor(fock_bimodule(l_jk), fock_bimodule(l_ij))
    fock_ik = build_fock(l_ik.lag)
    sign = parity_diag(tensor.parity, tensor.field)
    return _HomSetup(l_ik, source, tensor, fock_ik, l_ij.source.dim, sign)


def _vector_algebra_coords(adim: int, v, fld: str) -> list[Scalar]:
    # coordinates of a degree-one element in the Clifford monomial basis
    out = [Scalar.zero(fld)] * adim
    for t, x in enumerate(v):
        out[1 << t] = x
    return out


def _outer_action(st: _HomSetup, vec) -> Matrix:
    # action of an ambient vector of the composite on the tensor: the target
    # component acts from the left, the source component from the right
    # through the parity involution
    fld = st.tensor.field
    v_i, v_k = vec[:st.ni], vec[st.ni:]
    left = st.tensor.left_of_vector(
        _vector_algebra_coords(st.tensor.left_alg.dim, v_k, fld))
    right = st.tensor.right_of_vector(
        _vector_algebra_coords(st.tensor.right_alg.dim, v_i, fld))
    return left - right @ st.sign


def _graded_vacuum_solutions(st: _HomSetup) -> tuple[Subspace, Subspace]:
    fld = st.tensor.field
    ops = [_outer_action(st, v) for v in st.l_ik.sub.rows]
    if ops:
        stacked = ops[0]
        for m in ops[1:]:
            stacked = stacked.stack_v(m)
        sols = stacked.nullspace_rows()
    else:
        sols = Matrix.identity(st.tensor.dim, fld).copy_rows()
    space = Subspace(st.tensor.dim, fld, sols)
    parts = []
    for p in (0, 1):
        axis_rows = [[Scalar.one(fld) if r == t else Scalar.zero(fld)
                      for r in range(st.tensor.dim)]
                     for t in range(st.tensor.dim) if st.tensor.parity[t] == p]
        parts.append(space.intersect(Subspace(st.tensor.dim, fld, axis_rows)))
    if parts[0].dim + parts[1].dim != space.dim:
        raise InternalError("vacuum solution space is not parity graded")
    return parts[0], parts[1]


def _hom_from_vacuum(st: _HomSetup, vac_value, q: int) -> Matrix:
    # a hom is determined by its vacuum value: creation by the wedge basis of
    # the composite on the source matches the outer action on the target, up
    # to the sign of moving an odd hom past a degree-one element
    fld = st.tensor.field
    dim_src = st.source.dim
    ops = [_outer_action(st, a) for a in st.fock_mid.y_rows]
    images: list[list[Scalar] | None] = [None] * dim_src
    images[0] = list(vac_value)
    for mask in range(1, dim_src):
        t = (mask & -mask).bit_length() - 1
        img = ops[t].apply(images[mask ^ (1 << t)])
        if q:
            img = [-x for x in img]
        images[mask] = img
    return Matrix(images, st.tensor.dim, fld).transpose()


def _verify_hom(st: _HomSetup, mat: Matrix, q: int) -> None:
    src, dst = st.source, st.tensor
    for g in src.left_alg.generators:
        rhs = dst.left(g) @ mat
        if q:
            rhs = -rhs
        if mat @ src.left(g) != rhs:
            raise InternalError("vacuum-built candidate violates the left module law")
    for g in src.right_alg.generators:
        if mat @ src.right(g) != dst.right(g) @ mat:
            raise InternalError("vacuum-built candidate violates the right module law")


def _pf_hom_from_setup(st: _HomSetup) -> HomSpace:
    even_sols, odd_sols = _graded_vacuum_solutions(st)
    if even_sols.dim + odd_sols.dim != 1:
        raise InternalError(
            f"hom line has dimension {even_sols.dim + odd_sols.dim}, expected 1")
    fld = st.tensor.field
    blocks: dict[int, list[Matrix]] = {0: [], 1: []}
    for q, sols in ((0, even_sols), (1, odd_sols)):
        for y in sols.rows:
            mat = _hom_from_vacuum(st, y, q)
            _verify_hom(st, mat, q)
            blocks[q].append(mat)
    src_dim, dst_dim = st.source.dim, st.tensor.dim
    width = dst_dim * src_dim
    out: dict[int, list[Matrix]] = {0: [], 1: []}
    for p in (0, 1):
        vecs = [[m.rows[t][s] for t in range(dst_dim) for s in range(src_dim)]
                for m in blocks[p]]
        canon = Subspace(width, fld, vecs) if width else None
        if canon is None:
            continue
        for row in canon.rows:
            out[p].append(Matrix([[row[t * src_dim + s] for s in range(src_dim)]
                                  for t in range(dst_dim)], src_dim, fld))
    return HomSpace(st.source, st.tensor, out[0], out[1])


def pf_hom(l_ij: Correspondence, l_jk: Correspondence) -> HomSpace:
    """Hom-line incarnation: graded bimodule homs F(l_ik) -> F(l_jk) (x) F(l_ij).

    Solved through vacuum values (a hom is determined by where it sends the
    vacuum, which must be killed by the outer action of the composite), then
    canonicalized exactly like the generic hom solver.  The line always has
    total dimension one; anything else is an internal invariant violation.
    """
    return _pf_hom_from_setup(_hom_setup(l_ij, l_jk))


# -- the vacuum-normalized isomorphism between the two incarnations ------


@dataclass(frozen=True)
class LambdaIso:
    """Isomorphism F(l_ik) (x) det-line -> F(l_jk) (x)_Cl F(l_ij), line absorbed.

    ``matrix`` is the absorbed map against the canonical generator of the
    determinant line; ``comparison`` is its coefficient against the canonical
    hom-line basis vector.
    """

    pair: tuple[Correspondence, Correspondence]
    matrix: Matrix
    parity: int
    hom: HomSpace
    line: DetLine
    target: RelativeTensor
    comparison: Scalar


def lambda_iso(l_ij: Correspondence, l_jk: Correspondence,
               kernel_rows=None) -> LambdaIso:
    """Vacuum-normalized iso between the two Pfaffian incarnations.

    The candidate sends vacuum (x) (u_1 ^ ... ^ u_n) to
    vacuum_jk (x) (u_1 ... u_n · vacuum_ij), each kernel element acting through
    the ambient involution of its middle component (the middle itself lies in
    both Lagrangians and would annihilate both vacua; its involution image is
    the attached creation direction, and inserting it on either side of the
    balanced product gives the same class).  ``kernel_rows`` overrides the
    canonical kernel basis (rows must lie in the kernel); the result is
    checked to lie in the hom line and to be invertible.
    """
    st = _hom_setup(l_ij, l_jk)
    hom = _pf_hom_from_setup(st)
    kernel = pf_kernel(l_ij, l_jk)
    if kernel_rows is None:
        rows = [list(r) for r in kernel.rows]
    else:
        rows = [list(r) for r in kernel_rows]
        for r in rows:
            if not kernel.contains_vector(r):
                raise InvalidInput("kernel row is not in the outer-projection kernel")
        if len(rows) != kernel.dim:
            raise InvalidInput("kernel basis size mismatch")
    fld = st.tensor.field
    ni, nj = l_ij.source.dim, l_ij.target.dim
    fock_ij = build_fock(l_ij.lag)
    fock_jk = build_fock(l_jk.lag)
    acted = list(fock_ij.vacuum)
    for u in reversed(rows):
        mid = [Scalar.zero(fld)] * ni + list(u[ni:ni + nj])
        acted = fock_ij.rho(fock_ij.space.alpha(mid)).apply(acted)
    vac_value = st.tensor.project_pure(fock_jk.vacuum, acted)
    basis_mat = hom.basis[0]
    q = hom.parities[0]
    basis_vac = basis_mat.column_vec(0)
    coeff = None
    for r, x in enumerate(basis_vac):
        if not x.is_zero():
            coeff = vac_value[r] / x
            break
    if coeff is None:
        raise InternalError("hom line basis kills the vacuum")
    if [coeff * x for x in basis_vac] != vac_value:
        raise InternalError("vacuum candidate leaves the hom line")
    if coeff.is_zero():
        raise InternalError("vacuum candidate vanishes; the comparison is not invertible")
    mat = basis_mat.scale(coeff)
    if mat.nrows != mat.ncols or not mat.is_invertible():
        raise InternalError("vacuum candidate is not invertible")
    if q != kernel.dim % 2:
        raise InternalError("hom parity disagrees with the kernel parity")
    return LambdaIso((l_ij, l_jk), mat, q, hom, DetLine(kernel), st.tensor, coeff)


@dataclass(frozen=True)
class PfaffianLine:
    """Both incarnations of the Pfaffian line of a composable pair."""

    pair: tuple[Correspondence, Correspondence]
    as_hom: HomSpace
    as_det: DetLine
    comparison: Scalar

    @property
    def parity(self) -> int:
        return self.as_det.parity


def pfaffian_line(l_ij: Correspondence, l_jk: Correspondence) -> PfaffianLine:
    """Pfaffian line of a composable pair, with the comparison coefficient."""
    lam = lambda_iso(l_ij, l_jk)
    if lam.hom.dim != 1:
        raise InternalError("hom incarnation is not a line")
    if lam.hom.parities[0] != lam.line.parity:
        raise InternalError("incarnation parities disagree")
    return PfaffianLine(lam.pair, lam.hom, lam.line, lam.comparison)


# -- the four-index comparison -------------------------------------------


@dataclass(frozen=True)
class PhiIso:
    """Comparison of the two ways to split a triple composite.

    Maps det K(l_ij,l_jk) (x) det K(l_ik,l_kl) to
    det K(l_jk,l_kl) (x) det K(l_ij,l_jl) on canonical generators; ``scalar``
    is the ratio of the two short-exact-sequence determinants through the
    kernel of the triple fiber product.
    """

    triple: tuple[Correspondence, Correspondence, Correspondence]
    scalar: Scalar
    source_lines: tuple[DetLine, DetLine]
    target_lines: tuple[DetLine, DetLine]
    middle_dim: int

    @property
    def inverse(self) -> Scalar:
        return self.scalar.inv()


def _cols_matrix(cols: list[list[Scalar]], nrows: int, fld: str) -> Matrix:
    if not cols:
        return Matrix([[] for _ in range(nrows)], 0, fld)
    return Matrix(cols, nrows, fld).transpose()


def _random_lifts(inj: Matrix, surj: Matrix, seed: int, fld: str) -> Matrix:
    # any valid lift differs from a particular one by the injected image
    rng = random.Random(seed)
    n, p = inj.nrows, inj.ncols
    cols = []
    for m in range(surj.nrows):
        rhs = [Scalar.one(fld) if t == m else Scalar.zero(fld)
               for t in range(surj.nrows)]
        base = surj.solve(rhs)
        if base is None:
            raise InternalError("surjection has no preimage for a basis vector")
        noise = inj.apply([random_scalar(rng, fld) for _ in range(p)])
        cols.append([a + b for a, b in zip(base, noise)])
    return _cols_matrix(cols, n, fld)


def phi_iso(l_ij: Correspondence, l_jk: Correspondence, l_kl: Correspondence,
            _lift_seed: int | None = None) -> PhiIso:
    """Comparison scalar for a composable triple.

    Both reassociation kernels embed in the kernel of the triple fiber
    product; the scalar is the determinant of the first short exact sequence
    against the second, oriented so the mixed coherence square commutes.  It
    does not depend on the choice of lifts (``_lift_seed`` draws random valid
    lifts to witness that).
    """
    _require_composable(l_ij, l_jk)
    _require_composable(l_jk, l_kl)
    fld = l_ij.source.field
    ni, nj = l_ij.source.dim, l_ij.target.dim
    nk, nl = l_jk.target.dim, l_kl.target.dim
    k_ijk = pf_kernel(l_ij, l_jk)
    k_jkl = pf_kernel(l_jk, l_kl)
    l_ik = compose_corr(l_ij, l_jk)
    l_jl = compose_corr(l_jk, l_kl)
    k_ikl = pf_kernel(l_ik, l_kl)
    k_ijl = pf_kernel(l_ij, l_jl)
    m_sub = _triple_kernel(l_ij, l_jk, l_kl)
    if m_sub.dim != k_ijk.dim + k_ikl.dim or m_sub.dim != k_jkl.dim + k_ijl.dim:
        raise InternalError("triple kernel dimension breaks exactness")
    zero = Scalar.zero(fld)
    try:
        inj1 = _cols_matrix([m_sub.coords_of(list(u) + [zero] * (nk + nl))
                             for u in k_ijk.rows], m_sub.dim, fld)
        inj2 = _cols_matrix([m_sub.coords_of([zero] * (ni + nj) + list(u))
                             for u in k_jkl.rows], m_sub.dim, fld)
        surj1_cols, surj2_cols = [], []
        for w in m_sub.rows:
            v_ij = list(w[:ni + nj])
            v_jk = list(w[ni + nj:ni + 2 * nj + nk])
            v_kl = list(w[ni + 2 * nj + nk:])
            surj1_cols.append(k_ikl.coords_of(v_ij[:ni] + v_jk[nj:] + v_kl))
            surj2_cols.append(k_ijl.coords_of(v_ij + v_jk[:nj] + v_kl[nk:]))
        surj1 = _cols_matrix(surj1_cols, k_ikl.dim, fld)
        surj2 = _cols_matrix(surj2_cols, k_ijl.dim, fld)
        lifts1 = lifts2 = None
        if _lift_seed is not None:
            lifts1 = _random_lifts(inj1, surj1, _lift_seed, fld)
            lifts2 = _random_lifts(inj2, surj2, _lift_seed + 1, fld)
        s1 = ses_det_iso(inj1, surj1, lifts=lifts1)
        s2 = ses_det_iso(inj2, surj2, lifts=lifts2)
    except InvalidInput as exc:
        raise InternalError(f"short exact sequence assembly failed: {exc}") from exc
    if s2.is_zero():
        raise InternalError("second sequence determinant vanishes")
    return PhiIso((l_ij, l_jk, l_kl), s1 / s2,
                  (DetLine(k_ijk), DetLine(k_ikl)),
                  (DetLine(k_jkl), DetLine(k_ijl)), m_sub.dim)


# -- coherence checkers ---------------------------------------------------


def check_fock_pentagon(l_ij: Correspondence, l_jk: Correspondence,
                        l_kl: Correspondence, l_lm: Correspondence,
                        _drop_koszul: bool = False) -> CoherenceReport:
    """Pentagon for the comparison scalars of a composable quadruple.

    All nodes are products of three Pfaffian lines, hence one-dimensional;
    the only sign is the crossing of the two unrelated lines on the short
    side.  ``_drop_koszul`` replaces that sign by +1 (a deliberate defect
    knob for negative controls).
    """
    _require_composable(l_ij, l_jk)
    _require_composable(l_jk, l_kl)
    _require_composable(l_kl, l_lm)
    fld = l_ij.source.field
    l_ik = compose_corr(l_ij, l_jk)
    l_jl = compose_corr(l_jk, l_kl)
    l_km = compose_corr(l_kl, l_lm)
    p_ijkl = phi_iso(l_ij, l_jk, l_kl).scalar
    p_ijlm = phi_iso(l_ij, l_jl, l_lm).scalar
    p_jklm = phi_iso(l_jk, l_kl, l_lm).scalar
    p_iklm = phi_iso(l_ik, l_kl, l_lm).scalar
    p_ijkm = phi_iso(l_ij, l_jk, l_km).scalar
    q_front = pf_kernel(l_ij, l_jk).dim % 2
    q_back = pf_kernel(l_kl, l_lm).dim % 2
    one = Scalar.one(fld)
    swap = one if (_drop_koszul or not (q_front and q_back)) else -one

    def edge(c: Scalar) -> Matrix:
        return Matrix([[c]], 1, fld)

    # A..F: triple line products, named after the pentagon positions;
    # A = (jk,kl)(ij,jl)(il,lm)  B = (ij,jk)(ik,kl)(il,lm)
    # C = (ij,jk)(kl,lm)(ik,km)  D = (jk,kl)(jl,lm)(ij,jm)
    # E = (kl,lm)(ij,jk)(ik,km)  F = (kl,lm)(jk,km)(ij,jm)
    nodes = {"A": 1, "B": 1, "C": 1, "D": 1, "E": 1, "F": 1}
    edges = {
        "phi_jklm x id": ("F", "D", edge(p_jklm)),
        "id x phi_ijlm": ("D", "A", edge(p_ijlm)),
        "phi_ijkl x id": ("A", "B", edge(p_ijkl)),
        "id x phi_ijkm": ("F", "E", edge(p_ijkm)),
        "swap front lines": ("E", "C", edge(swap)),
        "id x phi_iklm": ("C", "B", edge(p_iklm)),
    }
    paths = [(["phi_jklm x id", "id x phi_ijlm", "phi_ijkl x id"],
              ["id x phi_ijkm", "swap front lines", "id x phi_iklm"])]
    return check_diagram(nodes, edges, paths, diagram_id="fock-pentagon")


def check_fock_mixed(l_ij: Correspondence, l_jk: Correspondence,
                     l_kl: Correspondence) -> CoherenceReport:
    """Mixed coherence square tying phi to the vacuum-normalized isos.

    Both routes carry F(l_il) (with its two absorbed lines) into the iterated
    relative tensor F(l_kl) (x) F(l_jk) (x) F(l_ij); absorbed odd lines twist
    the maps by the parity involution of the factor they slide past, and an
    odd line trapped inside the right bracket shifts that factor's parity.
    """
    _require_composable(l_ij, l_jk)
    _require_composable(l_jk, l_kl)
    fld = l_ij.source.field
    l_ik = compose_corr(l_ij, l_jk)
    l_jl = compose_corr(l_jk, l_kl)
    if compose_corr(l_ik, l_kl) != compose_corr(l_ij, l_jl):
        raise InternalError("composition of correspondences is not associative")
    lam1 = lambda_iso(l_ij, l_jk)   # F(l_ik) -> F(l_jk) (x) F(l_ij)
    lam2 = lambda_iso(l_ik, l_kl)   # F(l_il) -> F(l_kl) (x) F(l_ik)
    lam3 = lambda_iso(l_jk, l_kl)   # F(l_jl) -> F(l_kl) (x) F(l_jk)
    lam4 = lambda_iso(l_ij, l_jl)   # F(l_il) -> F(l_jl) (x) F(l_ij)
    phi = phi_iso(l_ij, l_jk, l_kl)
    q1, q2, q3, q4 = lam1.parity, lam2.parity, lam3.parity, lam4.parity
    t_mid = lam1.target
    t_left = lam2.target
    t_back = lam3.target
    t_right = lam4.target
    f_kl = t_left.factors[0]
    f_ik = t_left.factors[1]
    f_jl = t_right.factors[0]
    f_ij = t_right.factors[1]
    chain = relative_tensor_chain([f_kl, t_mid.factors[0], t_mid.factors[1]])
    d_il = lam2.matrix.ncols
    if lam4.matrix.ncols != d_il:
        raise InternalError("the two composite modules have different dimensions")
    one = Scalar.one(fld)

    def par_or_id(mod: SuperBimodule, q: int) -> Matrix:
        return parity_diag(mod.parity, fld) if q else Matrix.identity(mod.dim, fld)

    def scal(c: Scalar, n: int) -> Matrix:
        return Matrix.identity(n, fld).scale(c)

    # absorbed-line dictionary: a map defined against the line generator
    # differs from the matrix solved in hom conventions by the parity
    # involution of its source when the line is odd
    lam1_abs = lam1.matrix @ par_or_id(lam1.hom.source, q1)
    lam2_abs = lam2.matrix @ par_or_id(lam2.hom.source, q2)
    lam3_abs = lam3.matrix @ par_or_id(lam3.hom.source, q3)
    lam4_abs = lam4.matrix @ par_or_id(lam4.hom.source, q4)

    shifted = parity_shift(f_jl, q3)
    u_right = relative_tensor(shifted, f_ij)

    try:
        big_left = descend(
            Matrix.identity(f_kl.dim, fld).kron(t_mid.quotient.section @ lam1_abs),
            t_left.quotient, chain.quotient)
        slide_right = descend(
            Matrix.identity(f_jl.dim, fld).kron(par_or_id(f_ij, q3)),
            t_right.quotient, u_right.quotient)
        big_right = descend(
            (t_back.quotient.section @ lam3_abs).kron(Matrix.identity(f_ij.dim, fld)),
            u_right.quotient, chain.quotient)
    except NotBalanced as exc:
        raise InternalError(f"a route does not respect balancing: {exc}") from exc

    sign_left = -one if (q1 and q2) else one
    sign_right = -one if (q3 and q4) else one
    nodes = {
        "XR": d_il, "WR": d_il, "VR": t_right.dim, "UR": u_right.dim,
        "XL": d_il, "WL": d_il, "VL": t_left.dim, "UL": t_left.dim,
        "T": chain.dim,
    }
    edges = {
        "id x phi": ("XR", "XL", scal(phi.scalar, d_il)),
        "swap lines left": ("XL", "WL", scal(sign_left, d_il)),
        "lambda_ik_kl x id": ("WL", "VL", lam2_abs),
        "reassociate left": ("VL", "UL", Matrix.identity(t_left.dim, fld)),
        "id x lambda_ij_jk": ("UL", "T", big_left),
        "swap lines right": ("XR", "WR", scal(sign_right, d_il)),
        "lambda_ij_jl x id": ("WR", "VR", lam4_abs),
        "slide line right": ("VR", "UR", slide_right),
        "lambda_jk_kl x id": ("UR", "T", big_right),
    }
    paths = [(["id x phi", "swap lines left", "lambda_ik_kl x id",
               "reassociate left", "id x lambda_ij_jk"],
              ["swap lines right", "lambda_ij_jl x id", "slide line right",
               "lambda_jk_kl x id"])]
    return check_diagram(nodes, edges, paths, diagram_id="fock-mixed")
