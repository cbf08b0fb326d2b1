"""Bounded complexes over a finite projective category and their homotopy category.

Used to derive fixture data: Hom is chain maps modulo null-homotopic maps,
E(X, Y) = Hom(X, Y[1]), and conflations come from cocones of chain maps
C -> A[1], identified with sums of the listed indecomposables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .fincat import FinAddCategory, Morphism, Obj
from .linalg import (Field, Matrix, cokernel_section, image_basis, kernel_basis,
                     left_inverse, rank, rref)


class ComplexError(ValueError):
    pass


def path_category(fld: Field, n: int, prefix: str = "P") -> FinAddCategory:
    """Projectives of the linearly oriented A_n quiver 1 <- 2 <- ... <- n.

    Hom(P_i, P_j) is one-dimensional (an inclusion) exactly when i <= j.
    """
    names = [f"{prefix}{i + 1}" for i in range(n)]
    hom_dim, comp, ident = {}, {}, {}
    for i in range(n):
        ident[i] = Matrix.column(fld, [1])
        for j in range(n):
            hom_dim[i, j] = 1 if i <= j else 0
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                comp[i, j, k] = Matrix.from_rows(fld, [[1]])
    return FinAddCategory(fld, names, hom_dim, comp, ident)


def assemble(P: FinAddCategory, src_parts: Sequence[Obj], tgt_parts: Sequence[Obj],
             blocks: Mapping) -> Morphism:
    """Morphism between concatenated sums from blocks ``(r, c) -> Morphism``."""
    src = Obj(sum((p.summands for p in src_parts), ()))
    tgt = Obj(sum((p.summands for p in tgt_parts), ()))
    soff = [sum(len(p) for p in src_parts[:r]) for r in range(len(src_parts))]
    toff = [sum(len(p) for p in tgt_parts[:c]) for c in range(len(tgt_parts))]
    out = {}
    for (r, c), f in blocks.items():
        if f.src != src_parts[r] or f.tgt != tgt_parts[c]:
            raise ComplexError("block does not match the summands")
        for s in range(len(f.src)):
            for t in range(len(f.tgt)):
                b = f.block(s, t)
                if b.rows and not b.is_zero():
                    key = (soff[r] + s, toff[c] + t)
                    out[key] = out[key] + b if key in out else b
    return P.from_blocks(src, tgt, out)


def extract(P: FinAddCategory, f: Morphism, src_parts: Sequence[Obj], tgt_parts: Sequence[Obj],
            r: int, c: int) -> Morphism:
    soff = sum(len(p) for p in src_parts[:r])
    toff = sum(len(p) for p in tgt_parts[:c])
    blocks = {(s, t): f.block(soff + s, toff + t)
              for s in range(len(src_parts[r])) for t in range(len(tgt_parts[c]))}
    return P.from_blocks(src_parts[r], tgt_parts[c], blocks)


@dataclass(eq=False)
class Complex:
    P: FinAddCategory
    terms: dict
    diffs: dict
    name: str = "X"

    def __post_init__(self):
        self.terms = {d: o for d, o in self.terms.items() if not o.is_zero}
        for d, f in list(self.diffs.items()):
            if f.src != self.term(d) or f.tgt != self.term(d + 1):
                raise ComplexError(f"{self.name}: differential in degree {d} has the wrong shape")
        for d in self.degrees():
            if not self.P.compose(self.diff(d + 1), self.diff(d)).is_zero():
                raise ComplexError(f"{self.name}: d o d != 0 in degree {d}")

    def degrees(self) -> list[int]:
        return sorted(self.terms)

    def term(self, d: int) -> Obj:
        return self.terms.get(d, Obj())

    def diff(self, d: int) -> Morphism:
        f = self.diffs.get(d)
        if f is None:
            return self.P.zero(self.term(d), self.term(d + 1))
        return f

    def shift(self, k: int) -> "Complex":
        """X[k] with X[k]^d = X^{d+k} and differential (-1)^k d."""
        sign = -1 if k % 2 else 1
        return Complex(self.P, {d - k: o for d, o in self.terms.items()},
                       {d - k: f.scale(sign) for d, f in self.diffs.items()},
                       f"{self.name}[{k}]")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def to_json(self) -> dict:
        P = self.P
        return {"terms": {str(d): [P.names[i] for i in o] for d, o in sorted(self.terms.items())},
                "diffs": {str(d): self.diff(d).blocks_json() for d in self.degrees()
                          if not self.diff(d).is_zero()}}


def direct_sum(P: FinAddCategory, parts: Sequence[Complex], name: str = "") -> Complex:
    degs = sorted({d for X in parts for d in X.degrees()})
    terms, diffs = {}, {}
    for d in degs:
        terms[d] = Obj(sum((X.term(d).summands for X in parts), ()))
    for d in degs:
        diffs[d] = assemble(P, [X.term(d) for X in parts], [X.term(d + 1) for X in parts],
                            {(r, r): X.diff(d) for r, X in enumerate(parts)})
    return Complex(P, terms, diffs, name or "+".join(X.name for X in parts))


@dataclass(eq=False)
class ChainMap:
    src: Complex
    tgt: Complex
    comps: dict

    def at(self, d: int) -> Morphism:
        f = self.comps.get(d)
        if f is None:
            return self.src.P.zero(self.src.term(d), self.tgt.term(d))
        return f

    def degrees(self) -> list[int]:
        return sorted(set(self.src.degrees()) & set(self.tgt.degrees()))

    def is_chain_map(self) -> bool:
        P = self.src.P
        for d in sorted(set(self.src.degrees()) | set(d - 1 for d in self.tgt.degrees())):
            lhs = P.compose(self.tgt.diff(d), self.at(d))
            rhs = P.compose(self.at(d + 1), self.src.diff(d))
            if lhs != rhs:
                return False
        return True

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other."""
        P = self.src.P
        comps = {d: P.compose(self.at(d), other.at(d)) for d in other.degrees()
                 if d in self.tgt.terms}
        return ChainMap(other.src, self.tgt, comps)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        degs = set(self.degrees()) | set(other.degrees())
        return ChainMap(self.src, self.tgt, {d: self.at(d) + other.at(d) for d in degs})

    def scale(self, s) -> "ChainMap":
        return ChainMap(self.src, self.tgt, {d: f.scale(s) for d, f in self.comps.items()})

    def shift(self, k: int) -> "ChainMap":
        return ChainMap(self.src.shift(k), self.tgt.shift(k),
                        {d - k: f for d, f in self.comps.items()})

    def to_json(self) -> dict:
        return {str(d): self.at(d).blocks_json() for d in self.degrees()}


def identity_map(X: Complex) -> ChainMap:
    return ChainMap(X, X, {d: X.P.identity(X.term(d)) for d in X.degrees()})


def zero_map(X: Complex, Y: Complex) -> ChainMap:
    return ChainMap(X, Y, {})


class HomK:
    """Hom(X, Y) in the homotopy category, with coordinates on chain maps."""

    def __init__(self, X: Complex, Y: Complex):
        P = X.P
        self.X, self.Y, self.P = X, Y, P
        fld = P.field
        self.degs = sorted(set(X.degrees()) & set(Y.degrees()))
        self.layout = {d: P.layout(X.term(d), Y.term(d)) for d in self.degs}
        self.offsets, acc = {}, 0
        for d in self.degs:
            self.offsets[d] = acc
            acc += self.layout[d].dim
        self.ambient = acc
        # chain map condition d_Y f^d - f^{d+1} d_X = 0 as maps X^d -> Y^{d+1}
        eqs = []
        for d in sorted(set(X.degrees()) | set(e - 1 for e in Y.degrees())):
            rows = P.layout(X.term(d), Y.term(d + 1)).dim
            if not rows:
                continue
            blocks = []
            if d in self.offsets:
                blocks.append((d, P.postcompose_matrix(Y.diff(d), X.term(d))))
            if d + 1 in self.offsets:
                blocks.append((d + 1, -P.precompose_matrix(X.diff(d), Y.term(d + 1))))
            eqs.append(self._row(rows, blocks))
        system = Matrix.vstack(fld, acc, eqs)
        zb = kernel_basis(system).basis
        # null-homotopic maps d_Y h^d + h^{d+1} d_X from h^d: X^d -> Y^{d-1}
        hdegs = [d for d in X.degrees() if not Y.term(d - 1).is_zero]
        hcols = []
        for d in hdegs:
            hdim = P.layout(X.term(d), Y.term(d - 1)).dim
            blocks = []
            if d in self.offsets:
                blocks.append((d, P.postcompose_matrix(Y.diff(d - 1), X.term(d))))
            if d - 1 in self.offsets:
                blocks.append((d - 1, P.precompose_matrix(X.diff(d - 1), Y.term(d - 1))))
            cols = self._column(hdim, blocks)
            hcols.append(cols)
        hmat = Matrix.hstack(fld, acc, hcols)
        self.cycles = zb
        self._zinv = left_inverse(zb) if zb.cols else Matrix.zeros(fld, 0, acc)
        hz = self._zinv @ hmat
        if zb @ hz != hmat:
            raise ComplexError("null-homotopic maps are not chain maps")
        proj, sec = cokernel_section(hz)
        self._proj = proj
        self.reps = zb @ sec
        self.dim = proj.rows

    def _row(self, rows: int, blocks) -> Matrix:
        fld = self.P.field
        parts = []
        placed = dict()
        for d, m in blocks:
            placed[d] = placed[d] + m if d in placed else m
        for d in self.degs:
            parts.append(placed.get(d, Matrix.zeros(fld, rows, self.layout[d].dim)))
        return Matrix.hstack(fld, rows, parts)

    def _column(self, cols: int, blocks) -> Matrix:
        fld = self.P.field
        placed = dict()
        for d, m in blocks:
            placed[d] = placed[d] + m if d in placed else m
        parts = [placed.get(d, Matrix.zeros(fld, self.layout[d].dim, cols)) for d in self.degs]
        return Matrix.vstack(fld, cols, parts)

    def vectorize(self, f: ChainMap) -> Matrix:
        parts = [f.at(d).vec for d in self.degs]
        return Matrix.vstack(self.P.field, 1, parts)

    def coords(self, f: ChainMap) -> Matrix:
        v = self.vectorize(f)
        c = self._zinv @ v
        if self.cycles @ c != v:
            raise ComplexError("not a chain map")
        return self._proj @ c

    def chain_map(self, coords: Matrix) -> ChainMap:
        v = self.reps @ coords
        comps = {}
        for d in self.degs:
            o = self.offsets[d]
            comps[d] = self.P.morphism(self.X.term(d), self.Y.term(d),
                                       v.row_slice(o, o + self.layout[d].dim))
        return ChainMap(self.X, self.Y, comps)

    def basis_map(self, k: int) -> ChainMap:
        return self.chain_map(Matrix.unit(self.P.field, self.dim, k))

    def is_null(self, f: ChainMap) -> bool:
        return self.coords(f).is_zero()


class ComplexModel:
    """The full subcategory of the homotopy category on a list of indecomposables."""

    def __init__(self, P: FinAddCategory, indecs: Sequence[tuple[str, Complex]]):
        self.P = P
        self.field = P.field
        self.names = [nm for nm, _ in indecs]
        self.objs = [X for _, X in indecs]
        n = len(self.objs)
        self.homs = {(i, j): HomK(self.objs[i], self.objs[j]) for i in range(n) for j in range(n)}
        self.exts = {(i, j): HomK(self.objs[i], self.objs[j].shift(1))
                     for i in range(n) for j in range(n)}
        self.cat = self._category()
        self.E = self._bimodule()

    def _category(self) -> FinAddCategory:
        fld, n = self.field, len(self.objs)
        hom_dim = {k: h.dim for k, h in self.homs.items()}
        comp, ident = {}, {}
        for i in range(n):
            ident[i] = self.homs[i, i].coords(identity_map(self.objs[i]))
            for j in range(n):
                for k in range(n):
                    hij, hjk, hik = self.homs[i, j], self.homs[j, k], self.homs[i, k]
                    cols = []
                    for a in range(hij.dim):
                        fa = hij.basis_map(a)
                        for b in range(hjk.dim):
                            cols.append(hik.coords(hjk.basis_map(b).compose(fa)))
                    comp[i, j, k] = Matrix.hstack(fld, hik.dim, cols)
        return FinAddCategory(fld, self.names, hom_dim, comp, ident)

    def _bimodule(self):
        from .funcat import Bimodule
        fld, n = self.field, len(self.objs)
        dims = {k: h.dim for k, h in self.exts.items()}
        left, right = {}, {}
        for i in range(n):
            for j in range(n):
                e = self.exts[i, j]
                for j2 in range(n):
                    h, e2 = self.homs[j, j2], self.exts[i, j2]
                    for k in range(h.dim):
                        b1 = h.basis_map(k).shift(1)
                        left[i, j, j2, k] = Matrix.hstack(
                            fld, e2.dim, [e2.coords(b1.compose(e.basis_map(g)))
                                          for g in range(e.dim)])
                for i2 in range(n):
                    h, e2 = self.homs[i2, i], self.exts[i2, j]
                    for k in range(h.dim):
                        c = h.basis_map(k)
                        right[i2, i, j, k] = Matrix.hstack(
                            fld, e2.dim, [e2.coords(e.basis_map(g).compose(c))
                                          for g in range(e.dim)])
        return Bimodule(self.cat, dims, left, right)

    # objects of the model as complexes

    def realize(self, X: Obj) -> Complex:
        return direct_sum(self.P, [self.objs[i] for i in X], self.cat.obj_name(X))

    def inclusion(self, X: Obj, s: int, SX: Complex | None = None) -> ChainMap:
        SX = SX or self.realize(X)
        parts = [self.objs[i] for i in X]
        comps = {}
        for d in parts[s].degrees():
            tparts = [Y.term(d) for Y in parts]
            comps[d] = assemble(self.P, [parts[s].term(d)], tparts,
                                {(0, s): self.P.identity(parts[s].term(d))})
        return ChainMap(parts[s], SX, comps)

    def projection(self, X: Obj, t: int, SX: Complex | None = None) -> ChainMap:
        SX = SX or self.realize(X)
        parts = [self.objs[i] for i in X]
        comps = {}
        for d in parts[t].degrees():
            sparts = [Y.term(d) for Y in parts]
            comps[d] = assemble(self.P, sparts, [parts[t].term(d)],
                                {(t, 0): self.P.identity(parts[t].term(d))})
        return ChainMap(SX, parts[t], comps)

    def morphism_to_chain(self, f: Morphism, SX: Complex | None = None,
                          SY: Complex | None = None) -> ChainMap:
        SX = SX or self.realize(f.src)
        SY = SY or self.realize(f.tgt)
        total = zero_map(SX, SY)
        for s, i in enumerate(f.src):
            for t, j in enumerate(f.tgt):
                b = f.block(s, t)
                if b.is_zero():
                    continue
                piece = self.homs[i, j].chain_map(b)
                total = total + self.inclusion(f.tgt, t, SY).compose(
                    piece.compose(self.projection(f.src, s, SX)))
        return total

    def chain_to_morphism(self, g: ChainMap, X: Obj, Y: Obj) -> Morphism:
        """Coordinates of a chain map between realized sums."""
        blocks = {}
        for s, i in enumerate(X):
            inc = self.inclusion(X, s, g.src)
            for t, j in enumerate(Y):
                piece = self.projection(Y, t, g.tgt).compose(g.compose(inc))
                blocks[s, t] = self.homs[i, j].coords(piece)
        return self.cat.from_blocks(X, Y, blocks)

    def extension_to_chain(self, delta: Matrix, C: Obj, A: Obj) -> ChainMap:
        """A chain map C -> A[1] representing delta in E(C, A)."""
        SC, SA1 = self.realize(C), self.realize(A).shift(1)
        lay = self.E.layout(C, A)
        total = zero_map(SC, SA1)
        for s, i in enumerate(C):
            for t, j in enumerate(A):
                b = lay.block(delta, s, t)
                if b.is_zero():
                    continue
                piece = self.exts[i, j].chain_map(b)
                inc = self.inclusion(A, t).shift(1)
                inc = ChainMap(piece.tgt, SA1, inc.comps)
                total = total + inc.compose(piece.compose(self.projection(C, s, SC)))
        return total

    # cocones and decomposition

    def cocone(self, delta: Matrix, C: Obj, A: Obj):
        """B with B^d = A^d + C^d and d_B = [[d_A, g], [0, d_C]], plus x: A -> B, y: B -> C."""
        P = self.P
        SA, SC = self.realize(A), self.realize(C)
        g = self.extension_to_chain(delta, C, A)
        degs = sorted(set(SA.degrees()) | set(SC.degrees()))
        terms, diffs = {}, {}
        for d in degs:
            terms[d] = SA.term(d) + SC.term(d)
        for d in degs:
            blocks = {(0, 0): SA.diff(d), (1, 1): SC.diff(d), (1, 0): g.at(d)}
            diffs[d] = assemble(P, [SA.term(d), SC.term(d)], [SA.term(d + 1), SC.term(d + 1)],
                                blocks)
        B = Complex(P, terms, diffs, f"cocone({self.cat.obj_name(C)}->{self.cat.obj_name(A)}[1])")
        x = ChainMap(SA, B, {d: assemble(P, [SA.term(d)], [SA.term(d), SC.term(d)],
                                         {(0, 0): P.identity(SA.term(d))}) for d in SA.degrees()})
        y = ChainMap(B, SC, {d: assemble(P, [SA.term(d), SC.term(d)], [SC.term(d)],
                                         {(1, 0): P.identity(SC.term(d))}) for d in SC.degrees()})
        for f in (x, y):
            if not f.is_chain_map():
                raise ComplexError("cocone maps are not chain maps")
        return B, x, y, SA, SC

    def decompose(self, B: Complex):
        """An isomorphism phi: S -> B in the homotopy category with S a sum of
        listed indecomposables; returns (S, phi, phi_inv).

        Multiplicities are ranks of the pairings Hom(X_j, B) x Hom(B, X_j) ->
        End(X_j) / rad, which count the summands isomorphic to X_j.
        """
        cat, fld = self.cat, self.field
        us, vs = [], []
        summands = []
        for j, Xj in enumerate(self.objs):
            into, out = HomK(Xj, B), HomK(B, Xj)
            if not into.dim or not out.dim:
                continue
            chi = cat.residue(j)
            end = self.homs[j, j]
            umaps = [into.basis_map(a) for a in range(into.dim)]
            vmaps = [out.basis_map(b) for b in range(out.dim)]
            beta = Matrix.from_rows(fld, [[(chi @ end.coords(v.compose(u)))[0, 0] for u in umaps]
                                          for v in vmaps], len(umaps))
            _, cpiv = rref(beta)
            _, rpiv = rref(beta.T)
            r = len(cpiv)
            if not r:
                continue
            sub = beta.submatrix(rpiv, cpiv)
            from .linalg import inverse
            inv = inverse(sub)
            for a in range(r):
                us.append(umaps[cpiv[a]])
                v = zero_map(B, Xj)
                for c in range(r):
                    coef = inv[a, c]
                    if coef:
                        v = v + vmaps[rpiv[c]].scale(coef)
                vs.append(v)
                summands.append(j)
        S = Obj(tuple(summands))
        SS = self.realize(S)
        phi = zero_map(SS, B)
        for s, u in enumerate(us):
            phi = phi + u.compose(self.projection(S, s, SS))
        psi = zero_map(B, SS)
        for t, v in enumerate(vs):
            psi = psi + self.inclusion(S, t, SS).compose(v)
        theta = self.chain_to_morphism(psi.compose(phi), S, S)
        w = cat.inverse(theta)
        phi_inv = self.morphism_to_chain(w, SS, SS).compose(psi)
        check = HomK(B, B)
        diff = phi.compose(phi_inv) + identity_map(B).scale(-1)
        if not check.is_null(diff):
            raise ComplexError(f"{B.name} is not a sum of the listed indecomposables")
        return S, SS, phi, phi_inv
