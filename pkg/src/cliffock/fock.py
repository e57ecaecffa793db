"""Fock supermodules of Lagrangian subspaces.

F(L) is the exterior algebra on the canonical basis of alpha(L), graded by
wedge degree.  An ambient vector acts by creation with its alpha(L)-part and
by the annihilation derivation with its L-part; a correspondence upgrades
F(L) to a bimodule over the Clifford algebras of its two ends.
"""

from __future__ import annotations

from .clifford import build_clifford
from .errors import InternalError, InvalidInput
from .hilbert import (
    Correspondence,
    LagrangianSubspace,
    alpha_subspace,
    bilinear_form,
    validate_lagrangian,
)
from .linalg import Matrix, parity_diag
from .scalars import Scalar
from .superalg import SuperBimodule, ground_algebra

KAPPA = -2


class FockModule:
    """Exterior module with basis indexed by subset masks of the alpha(L) basis."""

    __slots__ = ("lag", "space", "d", "dim", "parity", "l_rows", "y_rows",
                 "kappa", "vacuum", "_module", "_decomp", "_b_vals", "_rho_cache")

    def __init__(self, lag: LagrangianSubspace, kappa: Scalar):
        space = lag.space
        fld = space.field
        self.lag = lag
        self.space = space
        self.kappa = kappa
        self.d = lag.dim
        self.dim = 1 << self.d
        self.parity = tuple(k.bit_count() & 1 for k in range(self.dim))
        self.l_rows = list(lag.sub.rows)
        self.y_rows = list(alpha_subspace(space, lag.sub).rows)
        basis_cols = Matrix(self.l_rows + self.y_rows, space.dim, fld).transpose()
        if not basis_cols.is_invertible():
            raise InternalError("L and alpha(L) do not split the ambient space")
        self._decomp = basis_cols.inverse()
        self._b_vals = [[bilinear_form(space, lr, yt) for yt in self.y_rows]
                        for lr in self.l_rows]
        self._rho_cache: dict[int, Matrix] = {}
        self.vacuum = [Scalar.one(fld) if k == 0 else Scalar.zero(fld)
                       for k in range(self.dim)]
        self._module: SuperBimodule | None = None
        self._assert_clifford_relation()

    @property
    def module(self) -> SuperBimodule:
        """Left module over the full ambient Clifford algebra (built lazily:
        the algebra has dimension 2^ambient)."""
        if self._module is None:
            fld = self.space.field
            self._module = SuperBimodule(
                build_clifford(self.space).algebra, ground_algebra(fld), self.parity,
                left_fn=self._left_monomial,
                right_fn=lambda _k: Matrix.identity(self.dim, fld),
                name=f"F({self.space.name})" if self.space.name else "F")
        return self._module

    def __repr__(self) -> str:
        return f"<FockModule d={self.d} over {self.space!r}>"

    def zero_element(self) -> list[Scalar]:
        return [Scalar.zero(self.space.field)] * self.dim

    def rho(self, v) -> Matrix:
        """The action matrix of an ambient vector."""
        if len(v) != self.space.dim:
            raise InvalidInput("ambient vector length mismatch")
        fld = self.space.field
        coords = self._decomp.apply(v)
        ann = coords[:self.d]
        cre = coords[self.d:]
        # b(v_L, y_t), scaled by the normalization
        bv = []
        for t in range(self.d):
            acc = Scalar.zero(fld)
            for r in range(self.d):
                if not ann[r].is_zero() and not self._b_vals[r][t].is_zero():
                    acc = acc + ann[r] * self._b_vals[r][t]
            bv.append(self.kappa * acc)
        cols = []
        for mask in range(self.dim):
            col = [Scalar.zero(fld)] * self.dim
            for t in range(self.d):
                bit = 1 << t
                below = (mask & (bit - 1)).bit_count()
                if mask & bit:
                    if not bv[t].is_zero():
                        val = bv[t] if below % 2 == 0 else -bv[t]
                        col[mask ^ bit] = col[mask ^ bit] + val
                else:
                    if not cre[t].is_zero():
                        val = cre[t] if below % 2 == 0 else -cre[t]
                        col[mask | bit] = col[mask | bit] + val
            cols.append(col)
        return Matrix(cols, self.dim, fld).transpose()

    def _rho_basis(self, t: int) -> Matrix:
        m = self._rho_cache.get(t)
        if m is None:
            fld = self.space.field
            e = [Scalar.zero(fld)] * self.space.dim
            e[t] = Scalar.one(fld)
            m = self._rho_cache[t] = self.rho(e)
        return m

    def _left_monomial(self, mask: int) -> Matrix:
        out = Matrix.identity(self.dim, self.space.field)
        for t in range(self.space.dim):
            if mask >> t & 1:
                out = out @ self._rho_basis(t)
        return out

    def _assert_clifford_relation(self) -> None:
        n = self.space.dim
        fld = self.space.field
        ident = Matrix.identity(self.dim, fld)
        for s in range(n):
            es = [Scalar.zero(fld)] * n
            es[s] = Scalar.one(fld)
            for t in range(s, n):
                et = [Scalar.zero(fld)] * n
                et[t] = Scalar.one(fld)
                b_st = bilinear_form(self.space, es, et)
                lhs = self._rho_basis(s) @ self._rho_basis(t) \
                    + self._rho_basis(t) @ self._rho_basis(s)
                if lhs != ident.scale(-(b_st + b_st)):
                    raise InternalError(
                        "Fock action violates the Clifford relation on basis pair "
                        f"({s},{t}); normalization {self.kappa} is inconsistent")

    def subset(self, index: int) -> tuple[int, ...]:
        return tuple(t for t in range(self.d) if index >> t & 1)

    def element_to_json(self, vec) -> list:
        return [{"subset": list(self.subset(k)), "coeff": x.to_json()}
                for k, x in enumerate(vec) if not x.is_zero()]

    def element_from_json(self, data: list) -> list[Scalar]:
        fld = self.space.field
        vec = self.zero_element()
        for item in data:
            mask = 0
            for t in item["subset"]:
                bit = 1 << t
                if not 0 <= t < self.d or mask & bit:
                    raise InvalidInput("subset must hold distinct valid indices")
                mask |= bit
            vec[mask] = Scalar.from_json(item["coeff"], fld)
        return vec


def build_fock(lag: LagrangianSubspace, *, _kappa: int | Scalar | None = None) -> FockModule:
    """F(L) as a left module over the ambient Clifford algebra."""
    rep = validate_lagrangian(lag.space, lag.sub)
    if not rep.ok:
        raise InvalidInput("not a Lagrangian: " + "; ".join(rep.violations))
    kappa = KAPPA if _kappa is None else _kappa
    if not isinstance(kappa, Scalar):
        kappa = Scalar.of(kappa, lag.space.field)
    return FockModule(lag, kappa)


def fock_act(fock: FockModule, v, omega) -> list[Scalar]:
    """Decompose v along L (+) alpha(L) and apply annihilation + creation."""
    if len(omega) != fock.dim:
        raise InvalidInput("module element length mismatch")
    return fock.rho(v).apply(omega)


def fock_bimodule(corr: Correspondence, *, _kappa: int | Scalar | None = None) -> SuperBimodule:
    """F of the underlying Lagrangian as a (Cl(target), Cl(source))-bimodule.

    A target vector u acts on the left through (0, u); a source vector u acts
    on the right through -(u, 0) composed with the parity sign of the input.
    """
    fock = build_fock(corr.lag, _kappa=_kappa)
    fld = corr.source.field
    ni, nj = corr.source.dim, corr.target.dim
    left_alg = build_clifford(corr.target).algebra
    right_alg = build_clifford(corr.source).algebra
    sign = parity_diag(fock.parity, fld)
    l_gens = [fock._rho_basis(ni + t) for t in range(nj)]
    r_gens = [-(fock._rho_basis(t) @ sign) for t in range(ni)]

    def left_fn(mask: int) -> Matrix:
        out = Matrix.identity(fock.dim, fld)
        for t in range(nj):
            if mask >> t & 1:
                out = out @ l_gens[t]
        return out

    def right_fn(mask: int) -> Matrix:
        # m·(xy) = (m·x)·y, so a monomial folds with later indices outermost
        out = Matrix.identity(fock.dim, fld)
        for t in range(ni):
            if mask >> t & 1:
                out = r_gens[t] @ out
        return out

    return SuperBimodule(left_alg, right_alg, fock.parity,
                         left_fn=left_fn, right_fn=right_fn,
                         name="F(corr)")
