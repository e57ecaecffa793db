"""Twisting lines of spans, the kernel-line trivialization, and the
twisted Fock assignment: frozen fixture values, the scaling laws of the
trivialization scalar, and the two coherence checkers."""

import random

import pytest

from cliffock.errors import InvalidInput
from cliffock.fock import fock_bimodule
from cliffock.hilbert import (
    GeneralizedLagrangian,
    Span,
    compose_spans,
    corr_ambient,
    fix_c1,
    fix_c2,
    fix_graph_corr,
    fix_pair,
    identity_corr,
    inclusion_span,
    random_scalar,
    random_span,
    span,
    span_fiber,
    span_image,
)
from cliffock.linalg import Matrix, Subspace, descend, ses_det_iso
from cliffock.pfaffian import _random_lifts, lambda_iso, pf_kernel
from cliffock.scalars import QI, Scalar
from cliffock.superalg import invertibility_check
from cliffock.twist import (
    beta_line,
    check_beta_coherence,
    check_twisted_functoriality,
    compose_iso,
    psi_iso,
    twisted_fock,
)


I = Scalar.i()
ONE = Scalar.one(QI)
ZERO = Scalar.zero(QI)
TWO = Scalar.of(2, QI)


def _collapsed():
    # rank-1 eta onto the diagonal of C1 with a one-dimensional kernel
    return span(fix_c1(), fix_c1(),
                Matrix([[ONE, ONE], [ONE, ONE]], 2, QI))


def _span_with_image(corr, seed, extra):
    basis = corr.sub.basis_matrix()
    d = corr.dim
    rng = random.Random(seed ^ 0xA5A5)
    while True:
        coef = Matrix([[random_scalar(rng, corr.source.field)
                        for _ in range(d + extra)] for _ in range(d)],
                      d + extra, corr.source.field)
        if coef.rank() == d:
            return span(corr.source, corr.target, basis @ coef)


def _odd_koszul_triple(seed):
    # first kernel line odd and the back pair's Pfaffian line odd, so the
    # hexagon's swap carries a real sign
    l1, l2 = fix_pair()
    sg = inclusion_span(fix_graph_corr())
    im_b = span_image(compose_spans(inclusion_span(l1), sg))
    a = random_span(fix_c2(), fix_c2(), 400 + seed, extra=1)
    b = _span_with_image(im_b, 500 + seed, 0)
    c = _span_with_image(l2, 600 + seed, 0)
    return a, b, c


def test_beta_line_parities():
    l1, l2 = fix_pair()
    assert beta_line(inclusion_span(l1)).parity == 0
    assert beta_line(inclusion_span(l1)).line.source.dim == 0

    tl = beta_line(_collapsed())
    assert tl.parity == 1
    assert tl.line.source.rows == [[ONE, -ONE]]

    comp = compose_spans(inclusion_span(l1), inclusion_span(l2))
    tl = beta_line(comp)
    assert tl.parity == 1 and tl.line.source.dim == 1


def test_beta_line_rejects_invalid_spans():
    # full image is not isotropic
    amb = corr_ambient(fix_c1(), fix_c1())
    bad = Span(fix_c1(), fix_c1(),
               GeneralizedLagrangian(amb, Matrix.identity(2, QI)))
    with pytest.raises(InvalidInput):
        beta_line(bad)


def test_psi_unit_and_frozen_fixture_values():
    id2 = inclusion_span(identity_corr(fix_c2()))
    assert psi_iso(id2, id2).scalar == ONE

    l1, l2 = fix_pair()
    s12, s21 = inclusion_span(l1), inclusion_span(l2)
    assert psi_iso(s12, s21).scalar == ONE
    assert psi_iso(s21, s12).scalar == ONE
    p = psi_iso(s12, s21)
    assert p.scalar * p.inverse == ONE
    assert p.target_line.parity == 1
    assert p.source_lines[2].parity == 1


def test_psi_reduces_to_the_kernel_identification_on_inclusions():
    # with both span kernels zero the sequence degenerates and psi is the
    # change of basis between ker eta of the composite and the pair kernel
    l1, l2 = fix_pair()
    g = fix_graph_corr()
    pairs = [(l1, l2), (l2, l1), (g, g), (identity_corr(fix_c2()), l1)]
    for l_ij, l_jk in pairs:
        s_ij, s_jk = inclusion_span(l_ij), inclusion_span(l_jk)
        comp = compose_spans(s_ij, s_jk)
        ker = Subspace(comp.w_dim, QI, comp.eta.nullspace_rows())
        pf_sub = pf_kernel(l_ij, l_jk)
        # ker eta of the composite lives in fiber coordinates
        fib = span_fiber(s_ij, s_jk)
        w1 = s_ij.w_dim
        rows = []
        for gen in ker.rows:
            raw = [ZERO] * (w1 + s_jk.w_dim)
            for c, coef in enumerate(gen):
                if not coef.is_zero():
                    raw = [x + coef * y for x, y in zip(raw, fib.rows[c])]
            x, y = raw[:w1], raw[w1:]
            rows.append(pf_sub.coords_of(
                s_ij.eta.apply(list(x)) + s_jk.eta.apply(list(y))))
        if not rows:
            assert psi_iso(s_ij, s_jk).scalar == ONE
            continue
        p = Matrix(rows, pf_sub.dim, QI)
        assert psi_iso(s_ij, s_jk).scalar * p.det() == ONE


def test_psi_coordinate_scales_with_the_kernel_generators():
    a, b = _collapsed(), _collapsed()
    p = psi_iso(a, b)
    # jk-kernel columns come first in the inclusion
    scaled = Matrix([[TWO * v if j == p.inj.ncols - 1 else v
                      for j, v in enumerate(row)] for row in p.inj.rows],
                    p.inj.ncols, QI)
    assert ses_det_iso(scaled, p.surj) == TWO * p.scalar

    # shrinking the pair-kernel generator inflates the lift by the same
    # factor; exercised on a pair whose quotient side is nonzero
    l1, l2 = fix_pair()
    q = psi_iso(inclusion_span(l1), inclusion_span(l2))
    half = Matrix([[v / TWO for v in row] for row in q.surj.rows],
                  q.surj.ncols, QI)
    assert ses_det_iso(q.inj, half) == TWO * q.scalar


def test_psi_ignores_lift_choice():
    for seed in (0, 3, 9):
        a = random_span(fix_c2(), fix_c2(), seed * 5 + 1, extra=1)
        b = random_span(fix_c2(), fix_c2(), seed * 5 + 2, extra=2)
        p = psi_iso(a, b)
        for lift_seed in (11, 199):
            lifts = _random_lifts(p.inj, p.surj, lift_seed, QI)
            assert ses_det_iso(p.inj, p.surj, lifts=lifts) == p.scalar


def test_psi_rejects_incomposable_spans():
    id1 = inclusion_span(identity_corr(fix_c1()))
    id2 = inclusion_span(identity_corr(fix_c2()))
    with pytest.raises(InvalidInput):
        psi_iso(id1, id2)


def test_hexagon_on_fixture_triples():
    l1, l2 = fix_pair()
    s12, s21 = inclusion_span(l1), inclusion_span(l2)
    sg = inclusion_span(fix_graph_corr())
    id2 = inclusion_span(identity_corr(fix_c2()))
    col = _collapsed()
    for triple in ((id2, id2, id2), (s12, s21, s12), (s12, sg, s21),
                   (col, col, col)):
        rep = check_beta_coherence(*triple)
        assert rep.verdict, (rep.failing_pair, rep.witness_entry)
        assert rep.diagram_id == "twist-hexagon"


def test_hexagon_requires_the_koszul_sign():
    a, b, c = _odd_koszul_triple(0)
    assert check_beta_coherence(a, b, c).verdict
    rep = check_beta_coherence(a, b, c, _drop_koszul=True)
    assert not rep.verdict
    assert rep.witness_entry is not None

    # nothing to drop when the swapped lines are even
    id2 = inclusion_span(identity_corr(fix_c2()))
    assert check_beta_coherence(id2, id2, id2, _drop_koszul=True).verdict


def test_twisted_fock_of_inclusions_is_plain():
    l1, _ = fix_pair()
    s = inclusion_span(l1)
    tf = twisted_fock(s)
    plain = fock_bimodule(l1)
    assert tf.bimodule.parity == plain.parity
    n = len(tf.bimodule.left_alg.parity)
    assert all(tf.bimodule.left(k).rows == plain.left(k).rows
               for k in range(n))
    assert all(tf.bimodule.right(k).rows == plain.right(k).rows
               for k in range(n))
    assert tf.line.parity == 0


def test_twisted_fock_of_an_odd_span_shifts_parity():
    col = _collapsed()
    tf = twisted_fock(col)
    plain = fock_bimodule(span_image(col))
    assert tf.bimodule.parity == tuple((p + 1) % 2 for p in plain.parity)
    ralg = plain.right_alg
    n = len(ralg.parity)
    assert all(tf.bimodule.left(k).rows == plain.left(k).rows
               for k in range(n))
    for k in range(n):
        if ralg.parity[k] % 2:
            assert tf.bimodule.right(k).rows == (-plain.right(k)).rows
        else:
            assert tf.bimodule.right(k).rows == plain.right(k).rows


def test_twisted_fock_stays_invertible():
    l1, _ = fix_pair()
    for s in (inclusion_span(l1), _collapsed(),
              random_span(fix_c2(), fix_c2(), 42, extra=1)):
        assert invertibility_check(twisted_fock(s).bimodule).invertible


def test_unit_composition_is_the_vacuum_comparison():
    for c in (fix_c1(), fix_c2()):
        idc = identity_corr(c)
        ids = inclusion_span(idc)
        ci = compose_iso(ids, ids)
        assert ci.psi.scalar == ONE
        lam = lambda_iso(idc, idc)
        reindex = descend(Matrix.identity(lam.target.quotient.total.ambient, QI),
                          lam.target.quotient, ci.tensor.quotient)
        assert ci.matrix.rows == (reindex @ lam.matrix).rows


def test_functoriality_on_fixture_triples():
    l1, l2 = fix_pair()
    s12, s21 = inclusion_span(l1), inclusion_span(l2)
    sg = inclusion_span(fix_graph_corr())
    id1 = inclusion_span(identity_corr(fix_c1()))
    col = _collapsed()
    for triple in ((id1, id1, id1), (s12, s21, s12), (s12, sg, s21),
                   (col, col, col), (col, id1, col)):
        rep = check_twisted_functoriality(*triple)
        assert rep.verdict, (rep.failing_pair, rep.witness_entry)
        assert rep.diagram_id == "twist-functoriality"


def test_functoriality_rejects_incomposable_triples():
    id1 = inclusion_span(identity_corr(fix_c1()))
    id2 = inclusion_span(identity_corr(fix_c2()))
    with pytest.raises(InvalidInput):
        check_twisted_functoriality(id1, id2, id2)


def test_seeded_spans_trivialize_the_cocycle():
    c2 = fix_c2()
    nontrivial = 0
    for seed in range(15):
        a = random_span(c2, c2, seed * 3 + 1, extra=1)
        b = random_span(c2, c2, seed * 3 + 2, extra=1 + seed % 2)
        p = psi_iso(a, b)
        assert not p.scalar.is_zero()
        nontrivial += p.target_line.parity
    assert nontrivial
    for seed in range(4):
        a = random_span(c2, c2, seed * 3 + 1, extra=1)
        b = random_span(c2, c2, seed * 3 + 2, extra=1 + seed % 2)
        c = random_span(c2, c2, seed * 3 + 3, extra=1)
        assert check_beta_coherence(a, b, c).verdict
        assert check_twisted_functoriality(a, b, c).verdict


def test_odd_koszul_triples_commute():
    for seed in range(2):
        a, b, c = _odd_koszul_triple(seed)
        assert beta_line(a).parity == 1
        assert check_beta_coherence(a, b, c).verdict
        assert check_twisted_functoriality(a, b, c).verdict
