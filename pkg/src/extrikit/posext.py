"""Higher extensions E^n as n-fold coends, cup products and long exact sequences.

E^n(x, y) for indecomposables x, y is the quotient of the chain space

    S_n(x, y) = (+) over (m_1, ..., m_{n-1}) of
                E(x, m_1) (x) E(m_1, m_2) (x) ... (x) E(m_{n-1}, y)

by the relations identifying ``f_* lam (x) kap`` with ``lam (x) f^* kap`` at
each inner slot.  Tensors are Kronecker products with the first factor
major.  ``pi`` is the quotient map and ``sigma`` a section of it.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .fincat import FinAddCategory, Morphism, Obj
from .funcat import (Bimodule, CModule, FunctorError, ModuleMorphism, hom_bimodule,
                     module_cokernel, representable)
from .linalg import (Matrix, cokernel_section, kernel_basis, kronecker_tensor, rank, solve)


class TowerError(ValueError):
    pass


def _kron_all(fld, mats: Sequence[Matrix]) -> Matrix:
    out = Matrix.identity(fld, 1)
    for m in mats:
        out = kronecker_tensor(out, m)
    return out


@dataclass
class ChainSpace:
    """Layout of S_n(x, y): blocks keyed by the tuple of inner indecomposables."""

    n: int
    x: int
    y: int
    keys: list
    offsets: dict
    factor_dims: dict
    sizes: dict
    dim: int


@dataclass
class Conflation:
    """A realized extension ``A --x--> B --y--> C`` of ``delta`` in E(C, A)."""

    id: str
    A: Obj
    B: Obj
    C: Obj
    x: Morphism
    y: Morphism
    delta: Matrix
    dominant: bool = False
    codominant: bool = False

    def errors(self, E: Bimodule) -> list[str]:
        cat = E.cat
        errs = []
        if self.x.src != self.A or self.x.tgt != self.B:
            errs.append(f"{self.id}: inflation has the wrong source or target")
        if self.y.src != self.B or self.y.tgt != self.C:
            errs.append(f"{self.id}: deflation has the wrong source or target")
        if errs:
            return errs
        if self.delta.shape != (E.space_dim(self.C, self.A), 1):
            return [f"{self.id}: extension has the wrong length"]
        if not cat.compose(self.y, self.x).is_zero():
            errs.append(f"{self.id}: y o x != 0")
        if not (E.left_matrix(self.x, self.C) @ self.delta).is_zero():
            errs.append(f"{self.id}: x_* delta != 0")
        if not (E.right_matrix(self.y, self.A) @ self.delta).is_zero():
            errs.append(f"{self.id}: y^* delta != 0")
        return errs

    def to_json(self, cat: FinAddCategory) -> dict:
        fld = cat.field
        return {"id": self.id, "A": cat.obj_json(self.A), "B": cat.obj_json(self.B),
                "C": cat.obj_json(self.C), "x": self.x.blocks_json(), "y": self.y.blocks_json(),
                "delta": [fld.to_json(v) for v in self.delta.vector()] if self.delta.rows else [],
                "dominant": self.dominant, "codominant": self.codominant}

    @classmethod
    def from_json(cls, cat: FinAddCategory, data: Mapping) -> "Conflation":
        A, B, C = (cat.obj(data[k]) for k in ("A", "B", "C"))
        x = cat.from_blocks_json(A, B, data["x"])
        y = cat.from_blocks_json(B, C, data["y"])
        delta = Matrix.column(cat.field, data["delta"]) if data["delta"] else \
            Matrix.zeros(cat.field, 0, 1)
        return cls(data["id"], A, B, C, x, y, delta,
                   bool(data.get("dominant", False)), bool(data.get("codominant", False)))


@dataclass
class ResolutionChain:
    """Conflations ``Omega^k Y -> P_{k-1} -> Omega^{k-1} Y`` for k = 1..n."""

    Y: Obj
    conflations: list
    projectives: list = dc_field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.conflations)

    def omega(self, k: int) -> Obj:
        return self.Y if k == 0 else self.conflations[k - 1].A

    def projective(self, k: int) -> Obj:
        if k < self.length:
            return self.conflations[k].B
        return self.omega(self.length)

    def errors(self, tower: "ExtTower") -> list[str]:
        errs = []
        prev = self.Y
        for k, conf in enumerate(self.conflations, 1):
            if conf.C != prev:
                errs.append(f"step {k}: {conf.id} does not end at Omega^{k - 1}")
            if not tower.is_projective(conf.B):
                errs.append(f"step {k}: middle term of {conf.id} is not projective")
            prev = conf.A
        if not tower.is_projective(prev):
            errs.append("last syzygy is not projective")
        return errs


class ExtTower:
    """The tower E^0 = Hom, E^1 = E, E^2, ... for a fixed bimodule E."""

    def __init__(self, cat: FinAddCategory, E: Bimodule):
        if E.cat is not cat:
            raise TowerError("bimodule over a different category")
        self.cat = cat
        self.E = E
        self.field = cat.field
        self._levels: dict = {0: hom_bimodule(cat), 1: E}
        self._paths: dict = {}
        self._chains: dict = {}
        self._quot: dict = {}
        self._zero_from: int | None = 1 if E.is_zero() else None

    # chain spaces

    def paths(self, start: int, end: int, r: int) -> list:
        """Inner vertex tuples of chains start -> end with r nonzero E-factors."""
        key = (start, end, r)
        out = self._paths.get(key)
        if out is not None:
            return out
        E = self.E
        if r == 0:
            out = [((), ())] if start == end else []
        elif r == 1:
            d = E.dim(start, end)
            out = [((), (d,))] if d else []
        else:
            out = []
            for m in range(self.cat.n):
                d = E.dim(start, m)
                if not d:
                    continue
                for inner, dims in self.paths(m, end, r - 1):
                    out.append(((m,) + inner, (d,) + dims))
        self._paths[key] = out
        return out

    def chain_space(self, n: int, x: int, y: int) -> ChainSpace:
        key = (n, x, y)
        cs = self._chains.get(key)
        if cs is None:
            if n < 1:
                raise TowerError("chain spaces start at level 1")
            keys, offsets, fdims, sizes, acc = [], {}, {}, {}, 0
            for inner, dims in self.paths(x, y, n):
                size = 1
                for d in dims:
                    size *= d
                keys.append(inner)
                offsets[inner] = acc
                fdims[inner] = dims
                sizes[inner] = size
                acc += size
            cs = ChainSpace(n, x, y, keys, offsets, fdims, sizes, acc)
            self._chains[key] = cs
        return cs

    def relations(self, n: int, x: int, y: int) -> Matrix:
        """Columns spanning the coend relations inside S_n(x, y)."""
        cat, E, fld = self.cat, self.E, self.field
        cs = self.chain_space(n, x, y)
        cols = []
        for k in range(1, n):
            for p in range(cat.n):
                lefts = self.paths(x, p, k - 1)
                if not lefts:
                    continue
                for q in range(cat.n):
                    rights = self.paths(q, y, n - k - 1)
                    if not rights:
                        continue
                    for M in range(cat.n):
                        dpm = E.dim(p, M)
                        if not dpm:
                            continue
                        for N in range(cat.n):
                            dnq = E.dim(N, q)
                            if not dnq:
                                continue
                            for f in range(cat.hom_dim[M, N]):
                                lf = E.left(p, M, N, f)
                                rf = E.right(M, N, q, f)
                                for linner, ldims in lefts:
                                    U = 1
                                    for d in ldims:
                                        U *= d
                                    for rinner, rdims in rights:
                                        V = 1
                                        for d in rdims:
                                            V *= d
                                        head = linner + ((p,) if k >= 2 else ())
                                        tail = ((q,) if k <= n - 2 else ()) + rinner
                                        cols.append(self._relation_column(
                                            cs, head, tail, M, N, U, V, dpm, dnq, lf, rf))
        return Matrix.hstack(fld, cs.dim, cols)

    def _relation_column(self, cs, head, tail, M, N, U, V, dpm, dnq, lf, rf) -> Matrix:
        fld = self.field
        width = U * dpm * dnq * V
        blocks = {}
        key_n = head + (N,) + tail
        if key_n in cs.offsets:
            blocks[key_n] = _kron_all(fld, [Matrix.identity(fld, U), lf,
                                            Matrix.identity(fld, dnq), Matrix.identity(fld, V)])
        key_m = head + (M,) + tail
        if key_m in cs.offsets:
            term = -_kron_all(fld, [Matrix.identity(fld, U), Matrix.identity(fld, dpm), rf,
                                    Matrix.identity(fld, V)])
            blocks[key_m] = blocks[key_m] + term if key_m in blocks else term
        idx = {k: r for r, k in enumerate(cs.keys)}
        return Matrix.from_blocks(fld, [cs.sizes[k] for k in cs.keys], [width],
                                  {(idx[k], 0): b for k, b in blocks.items()})

    def quotient(self, n: int, x: int, y: int) -> tuple[Matrix, Matrix]:
        """(pi_n, sigma_n) for the pair (x, y)."""
        key = (n, x, y)
        q = self._quot.get(key)
        if q is None:
            cs = self.chain_space(n, x, y)
            if n == 1:
                eye = Matrix.identity(self.field, cs.dim)
                q = (eye, eye)
            elif self._known_zero(n):
                q = (Matrix.zeros(self.field, 0, cs.dim), Matrix.zeros(self.field, cs.dim, 0))
            else:
                q = cokernel_section(self.relations(n, x, y))
            self._quot[key] = q
        return q

    def _known_zero(self, n: int) -> bool:
        if self._zero_from is not None and n >= self._zero_from:
            return True
        return n >= 2 and self.level(n - 1).is_zero()

    def dim(self, n: int, x: int, y: int) -> int:
        if n == 0:
            return self.cat.hom_dim[x, y]
        if n == 1:
            return self.E.dim(x, y)
        return self.quotient(n, x, y)[0].rows

    # levels as bimodules

    def level(self, n: int) -> Bimodule:
        if n < 0:
            raise TowerError("negative level")
        lev = self._levels.get(n)
        if lev is not None:
            return lev
        cat = self.cat
        dims = {(x, y): self.dim(n, x, y) for x in range(cat.n) for y in range(cat.n)}
        lev = Bimodule(cat, dims, lambda i, j, j2, k: self._left_action(n, i, j, j2, k),
                       lambda i2, i, j, k: self._right_action(n, i2, i, j, k), name=f"E^{n}")
        self._levels[n] = lev
        if lev.is_zero() and (self._zero_from is None or n < self._zero_from):
            self._zero_from = n
        return lev

    def _left_action(self, n, i, j, j2, k) -> Matrix:
        fld, E = self.field, self.E
        src, tgt = self.chain_space(n, i, j), self.chain_space(n, i, j2)
        blocks = {}
        tidx = {key: r for r, key in enumerate(tgt.keys)}
        for c, key in enumerate(src.keys):
            if key not in tidx:
                continue
            last = key[-1] if key else i
            dims = src.factor_dims[key]
            lead = src.sizes[key] // dims[-1]
            blocks[tidx[key], c] = kronecker_tensor(Matrix.identity(fld, lead),
                                                    E.left(last, j, j2, k))
        m = Matrix.from_blocks(fld, [tgt.sizes[key] for key in tgt.keys],
                               [src.sizes[key] for key in src.keys], blocks)
        return self.quotient(n, i, j2)[0] @ m @ self.quotient(n, i, j)[1]

    def _right_action(self, n, i2, i, j, k) -> Matrix:
        fld, E = self.field, self.E
        src, tgt = self.chain_space(n, i, j), self.chain_space(n, i2, j)
        blocks = {}
        tidx = {key: r for r, key in enumerate(tgt.keys)}
        for c, key in enumerate(src.keys):
            if key not in tidx:
                continue
            first = key[0] if key else j
            dims = src.factor_dims[key]
            trail = src.sizes[key] // dims[0]
            blocks[tidx[key], c] = kronecker_tensor(E.right(i2, i, first, k),
                                                    Matrix.identity(fld, trail))
        m = Matrix.from_blocks(fld, [tgt.sizes[key] for key in tgt.keys],
                               [src.sizes[key] for key in src.keys], blocks)
        return self.quotient(n, i2, j)[0] @ m @ self.quotient(n, i, j)[1]

    # cup products

    def _concat(self, q: int, x: int, m: int, p: int, y: int, fixed: Matrix, side: str) -> Matrix:
        """Chain-level concatenation S_q(x,m) x S_p(m,y) -> S_{p+q}(x,y), linear in
        the free side (``side == 'left'`` fixes the right chain)."""
        fld = self.field
        A, B = self.chain_space(q, x, m), self.chain_space(p, m, y)
        T = self.chain_space(p + q, x, y)
        tidx = {key: r for r, key in enumerate(T.keys)}
        free, other = (A, B) if side == "left" else (B, A)
        blocks = {}
        for a_key in A.keys:
            for b_key in B.keys:
                key = a_key + (m,) + b_key
                if key not in tidx:
                    continue
                if side == "left":
                    o = B.offsets[b_key]
                    r = fixed.row_slice(o, o + B.sizes[b_key])
                    if r.is_zero():
                        continue
                    blk = kronecker_tensor(Matrix.identity(fld, A.sizes[a_key]), r)
                    col = A.keys.index(a_key)
                else:
                    o = A.offsets[a_key]
                    u = fixed.row_slice(o, o + A.sizes[a_key])
                    if u.is_zero():
                        continue
                    blk = kronecker_tensor(u, Matrix.identity(fld, B.sizes[b_key]))
                    col = B.keys.index(b_key)
                k2 = (tidx[key], col)
                blocks[k2] = blocks[k2] + blk if k2 in blocks else blk
        return Matrix.from_blocks(fld, [T.sizes[key] for key in T.keys],
                                  [free.sizes[key] for key in free.keys], blocks)

    def cup_left_basic(self, rho: Matrix, p: int, m: int, y: int, q: int, x: int) -> Matrix:
        """lam -> rho u lam as a matrix E^q(x,m) -> E^{p+q}(x,y), rho in E^p(m,y)."""
        if p == 0:
            return self.level(q).left_basic(x, m, y, rho)
        if q == 0:
            # lam in Hom(x, m): rho u lam = lam^* rho
            lev = self.level(p)
            cols = [lev.right(x, m, y, k) @ rho for k in range(self.cat.hom_dim[x, m])]
            return Matrix.hstack(self.field, lev.dim(x, y), cols)
        pi, _ = self.quotient(p + q, x, y)
        if not pi.rows or rho.is_zero():
            return Matrix.zeros(self.field, pi.rows, self.dim(q, x, m))
        r = self.quotient(p, m, y)[1] @ rho
        return pi @ self._concat(q, x, m, p, y, r, "left") @ self.quotient(q, x, m)[1]

    def cup_right_basic(self, lam: Matrix, q: int, x: int, m: int, p: int, y: int) -> Matrix:
        """rho -> rho u lam as a matrix E^p(m,y) -> E^{p+q}(x,y), lam in E^q(x,m)."""
        if q == 0:
            return self.level(p).right_basic(x, m, y, lam)
        if p == 0:
            lev = self.level(q)
            cols = [lev.left(x, m, y, k) @ lam for k in range(self.cat.hom_dim[m, y])]
            return Matrix.hstack(self.field, lev.dim(x, y), cols)
        pi, _ = self.quotient(p + q, x, y)
        if not pi.rows or lam.is_zero():
            return Matrix.zeros(self.field, pi.rows, self.dim(p, m, y))
        u = self.quotient(q, x, m)[1] @ lam
        return pi @ self._concat(q, x, m, p, y, u, "right") @ self.quotient(p, m, y)[1]

    def cup_left_matrix(self, rho: Matrix, p: int, M: Obj, Y: Obj, q: int, X: Obj) -> Matrix:
        """lam -> rho u lam: E^q(X, M) -> E^{p+q}(X, Y) for rho in E^p(M, Y)."""
        lp, lq, lt = self.level(p), self.level(q), self.level(p + q)
        rl, ql, tl = lp.layout(M, Y), lq.layout(X, M), lt.layout(X, Y)
        blocks = {}
        for s, xs in enumerate(X):
            for t, mt in enumerate(M):
                for u, yu in enumerate(Y):
                    r = rl.block(rho, t, u)
                    if r.is_zero():
                        continue
                    blk = self.cup_left_basic(r, p, mt, yu, q, xs)
                    key = (s * len(Y) + u, s * len(M) + t)
                    blocks[key] = blocks[key] + blk if key in blocks else blk
        return Matrix.from_blocks(self.field, [tl.dims[s, u] for s in range(len(X)) for u in range(len(Y))],
                                  [ql.dims[s, t] for s in range(len(X)) for t in range(len(M))], blocks)

    def cup_right_matrix(self, lam: Matrix, q: int, X: Obj, M: Obj, p: int, Y: Obj) -> Matrix:
        """rho -> rho u lam: E^p(M, Y) -> E^{p+q}(X, Y) for lam in E^q(X, M)."""
        lp, lq, lt = self.level(p), self.level(q), self.level(p + q)
        rl, ql, tl = lp.layout(M, Y), lq.layout(X, M), lt.layout(X, Y)
        blocks = {}
        for s, xs in enumerate(X):
            for t, mt in enumerate(M):
                lb = ql.block(lam, s, t)
                if lb.is_zero():
                    continue
                for u, yu in enumerate(Y):
                    blk = self.cup_right_basic(lb, q, xs, mt, p, yu)
                    key = (s * len(Y) + u, t * len(Y) + u)
                    blocks[key] = blocks[key] + blk if key in blocks else blk
        return Matrix.from_blocks(self.field, [tl.dims[s, u] for s in range(len(X)) for u in range(len(Y))],
                                  [rl.dims[t, u] for t in range(len(M)) for u in range(len(Y))], blocks)

    def cup(self, rho: Matrix, p: int, M: Obj, Y: Obj, lam: Matrix, q: int, X: Obj) -> Matrix:
        return self.cup_left_matrix(rho, p, M, Y, q, X) @ lam

    def class_of(self, rho: Matrix, M: Obj, A: Obj, lam: Matrix, n: int, X: Obj) -> Matrix:
        """rho u lam in E^{n+1}(X, A) for rho in E(M, A) and lam in E^n(X, M)."""
        return self.cup(rho, 1, M, A, lam, n, X)

    def descends_errors(self, delta: Matrix, C: Obj, A: Obj, n: int) -> list[str]:
        """The chain-level lift of delta u - must kill the relations of S_n(m, c)."""
        errs = []
        if n < 2:
            return errs
        rl = self.E.layout(C, A)
        for m in range(self.cat.n):
            for t, ct in enumerate(C):
                rel = self.relations(n, m, ct)
                if not rel.cols:
                    continue
                for u, au in enumerate(A):
                    d = rl.block(delta, t, u)
                    if d.is_zero():
                        continue
                    pi = self.quotient(n + 1, m, au)[0]
                    r = d
                    lifted = pi @ self._concat(n, m, ct, 1, au, r, "left") @ rel
                    if not lifted.is_zero():
                        errs.append(f"relations at ({self.cat.names[m]},{self.cat.names[ct]}) "
                                    f"are not killed at level {n}")
        return errs

    def delta_lower_sharp(self, delta: Matrix, C: Obj, A: Obj, n: int) -> ModuleMorphism:
        """delta u -: E^n(-, C) -> E^{n+1}(-, A)."""
        src = self.level(n).contravariant_slice(C)
        tgt = self.level(n + 1).contravariant_slice(A)
        comps = {m: self.cup_left_matrix(delta, 1, C, A, n, Obj((m,))) for m in range(self.cat.n)}
        return ModuleMorphism(src, tgt, comps)

    def delta_upper_sharp(self, delta: Matrix, C: Obj, A: Obj, n: int) -> ModuleMorphism:
        """- u delta: E^n(A, -) -> E^{n+1}(C, -)."""
        src = self.level(n).covariant_slice(A)
        tgt = self.level(n + 1).covariant_slice(C)
        comps = {m: self.cup_right_matrix(delta, 1, C, A, n, Obj((m,))) for m in range(self.cat.n)}
        return ModuleMorphism(src, tgt, comps)

    # projectivity

    def is_projective(self, X: Obj) -> bool:
        return all(self.E.dim(i, m) == 0 for i in X for m in range(self.cat.n))

    def is_injective(self, X: Obj) -> bool:
        return all(self.E.dim(m, i) == 0 for i in X for m in range(self.cat.n))

    def projective_indecs(self) -> list[int]:
        return [i for i in range(self.cat.n) if self.is_projective(Obj((i,)))]

    def injective_indecs(self) -> list[int]:
        return [i for i in range(self.cat.n) if self.is_injective(Obj((i,)))]


def ext_power(tower: ExtTower, n: int) -> Bimodule:
    return tower.level(n)


def binary_coend_dim(F: Bimodule, G: Bimodule, x: int, y: int) -> int:
    """dim of (G <> F)(x, y) = coend over M of G(M, y) (x) F(x, M)."""
    cat, fld = F.cat, F.field
    blocks_dim = [F.dim(x, M) * G.dim(M, y) for M in range(cat.n)]
    cols = []
    for M in range(cat.n):
        for N in range(cat.n):
            w = F.dim(x, M) * G.dim(N, y)
            if not w:
                continue
            for f in range(cat.hom_dim[M, N]):
                blocks = {}
                if blocks_dim[N]:
                    blocks[N, 0] = kronecker_tensor(F.left(x, M, N, f),
                                                    Matrix.identity(fld, G.dim(N, y)))
                if blocks_dim[M]:
                    term = -kronecker_tensor(Matrix.identity(fld, F.dim(x, M)),
                                             G.right(M, N, y, f))
                    blocks[M, 0] = blocks[M, 0] + term if (M, 0) in blocks else term
                cols.append(Matrix.from_blocks(fld, blocks_dim, [w], blocks))
    total = sum(blocks_dim)
    return total - rank(Matrix.hstack(fld, total, cols))


# dominance


def dominance_map(E: Bimodule, theta: Matrix, C: Obj, F: Obj, m: int) -> Matrix:
    """theta^# at m: Hom(F, m) -> E(C, m), f -> f_* theta."""
    cat = E.cat
    dim = cat.layout(F, Obj((m,))).dim
    cols = [E.left_matrix(cat.morphism(F, Obj((m,)), Matrix.unit(cat.field, dim, k)), C) @ theta
            for k in range(dim)]
    return Matrix.hstack(cat.field, E.space_dim(C, Obj((m,))), cols)


def codominance_map(E: Bimodule, iota: Matrix, J: Obj, A: Obj, m: int) -> Matrix:
    """iota_# at m: Hom(m, J) -> E(m, A), g -> g^* iota."""
    cat = E.cat
    dim = cat.layout(Obj((m,)), J).dim
    cols = [E.right_matrix(cat.morphism(Obj((m,)), J, Matrix.unit(cat.field, dim, k)), A) @ iota
            for k in range(dim)]
    return Matrix.hstack(cat.field, E.space_dim(Obj((m,)), A), cols)


def is_dominant_extension(E: Bimodule, theta: Matrix, C: Obj, F: Obj) -> bool:
    return all(rank(dominance_map(E, theta, C, F, m)) == E.space_dim(C, Obj((m,)))
               for m in range(E.cat.n))


def is_codominant_extension(E: Bimodule, iota: Matrix, J: Obj, A: Obj) -> bool:
    return all(rank(codominance_map(E, iota, J, A, m)) == E.space_dim(Obj((m,)), A)
               for m in range(E.cat.n))


def verify_dominant(E: Bimodule, conf: Conflation) -> bool:
    return is_dominant_extension(E, conf.delta, conf.C, conf.A)


def verify_codominant(E: Bimodule, conf: Conflation) -> bool:
    return is_codominant_extension(E, conf.delta, conf.C, conf.A)


def _top_generators(E: Bimodule, c: int, covariant: bool, minimal: bool) -> list[tuple[int, Matrix]]:
    cat, fld = E.cat, E.field
    gens = []
    for X in range(cat.n):
        d = E.dim(c, X) if covariant else E.dim(X, c)
        if not d:
            continue
        if not minimal:
            gens.extend((X, Matrix.unit(fld, d, k)) for k in range(d))
            continue
        cols = []
        for Y in range(cat.n):
            dy = E.dim(c, Y) if covariant else E.dim(Y, c)
            if not dy:
                continue
            if covariant:
                rad = cat.radical(Y, X)
                for r in range(rad.dim):
                    cols.append(E.left_basic(c, Y, X, rad.basis.col(r)))
            else:
                rad = cat.radical(X, Y)
                for r in range(rad.dim):
                    cols.append(E.right_basic(X, Y, c, rad.basis.col(r)))
        _, sec = cokernel_section(Matrix.hstack(fld, d, cols))
        gens.extend((X, sec.col(k)) for k in range(sec.cols))
    return gens


def find_dominant_extension(E: Bimodule, c: int, minimal: bool = True) -> tuple[Obj, Matrix]:
    """theta in E(c, F) with theta^# onto E(c, -), from generators of E(c, -).

    ``minimal`` keeps only generators of the top E(c, -)/rad E(c, -); otherwise a
    full basis of each E(c, X) is used.
    """
    gens = _top_generators(E, c, True, minimal)
    F = Obj(tuple(X for X, _ in gens))
    theta = E.from_blocks(Obj((c,)), F, {(0, t): v for t, (_, v) in enumerate(gens)})
    if not is_dominant_extension(E, theta, Obj((c,)), F):
        raise TowerError("generator recipe did not produce a dominant extension")
    return F, theta


def find_codominant_extension(E: Bimodule, a: int, minimal: bool = True) -> tuple[Obj, Matrix]:
    gens = _top_generators(E, a, False, minimal)
    J = Obj(tuple(X for X, _ in gens))
    iota = E.from_blocks(J, Obj((a,)), {(s, 0): v for s, (_, v) in enumerate(gens)})
    if not is_codominant_extension(E, iota, J, Obj((a,))):
        raise TowerError("generator recipe did not produce a codominant extension")
    return J, iota


# trivializations


def has_trivialization(conf: Conflation, F: CModule, lam: Matrix,
                       rho: Matrix | None = None) -> bool:
    """Whether lam in F(C) lifts along F(y): F(B) -> F(C)."""
    if F.variance != "co":
        raise FunctorError("trivializations are taken in covariant functors")
    if rho is not None and rho != conf.delta:
        raise TowerError(f"{conf.id} does not realize the given extension")
    return solve(F.map_of(conf.y), lam) is not None


# long exact sequences


@dataclass
class ExactnessReport:
    checked: int = 0
    violations: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "ExactnessReport") -> "ExactnessReport":
        self.checked += other.checked
        self.violations.extend(other.violations)
        return self


def check_sequence(dims: Sequence[int], maps: Sequence[Matrix], labels: Sequence[str],
                   where: str) -> ExactnessReport:
    """Exactness at interior terms of ``V_0 -> V_1 -> ... -> V_k``."""
    rep = ExactnessReport()
    ranks = [rank(m) for m in maps]
    for i, m in enumerate(maps):
        if m.shape != (dims[i + 1], dims[i]):
            raise TowerError(f"{where}: map {i} has shape {m.shape}")
    for i in range(1, len(dims) - 1):
        rep.checked += 1
        f, g = maps[i - 1], maps[i]
        if not (g @ f).is_zero():
            rep.violations.append(f"{where}: composite through {labels[i]} is nonzero")
        elif ranks[i - 1] != dims[i] - ranks[i]:
            rep.violations.append(f"{where}: not exact at {labels[i]} "
                                  f"(dim {dims[i]}, in-rank {ranks[i - 1]}, out-rank {ranks[i]})")
    return rep


def positive_sequence(tower: ExtTower, conf: Conflation, m: int, n_max: int, covariant: bool):
    """Terms and maps of the long exact sequence at m, levels 0..n_max."""
    cat = tower.cat
    M = Obj((m,))
    dims, maps, labels = [], [], []
    names = [cat.obj_name(conf.A), cat.obj_name(conf.B), cat.obj_name(conf.C)]
    for k in range(n_max + 1):
        lev = tower.level(k)
        if covariant:
            terms = [(conf.A, f"E^{k}(-,{names[0]})"), (conf.B, f"E^{k}(-,{names[1]})"),
                     (conf.C, f"E^{k}(-,{names[2]})")]
            dims += [lev.space_dim(M, t) for t, _ in terms]
            maps += [lev.left_matrix(conf.x, M), lev.left_matrix(conf.y, M)]
            if k < n_max:
                maps.append(tower.cup_left_matrix(conf.delta, 1, conf.C, conf.A, k, M))
        else:
            terms = [(conf.C, f"E^{k}({names[2]},-)"), (conf.B, f"E^{k}({names[1]},-)"),
                     (conf.A, f"E^{k}({names[0]},-)")]
            dims += [lev.space_dim(t, M) for t, _ in terms]
            maps += [lev.right_matrix(conf.y, M), lev.right_matrix(conf.x, M)]
            if k < n_max:
                maps.append(tower.cup_right_matrix(conf.delta, 1, conf.C, conf.A, k, M))
        labels += [lab for _, lab in terms]
    return dims, maps, labels


def les_check(tower: ExtTower, conf: Conflation, n_max: int = 3) -> ExactnessReport:
    rep = ExactnessReport()
    for covariant in (True, False):
        for m in range(tower.cat.n):
            dims, maps, labels = positive_sequence(tower, conf, m, n_max, covariant)
            where = f"{conf.id} at {tower.cat.names[m]} ({'co' if covariant else 'contra'})"
            rep.merge(check_sequence(dims, maps, labels, where))
    return rep


@dataclass(frozen=True)
class GlobalDimension:
    value: int
    exact: bool

    def __str__(self):
        return str(self.value) if self.exact else f"≥ {self.value}"

    def to_json(self):
        return self.value if self.exact else f">= {self.value}"


def pos_gldim(tower: ExtTower, n_max: int = 4) -> GlobalDimension:
    cat = tower.cat
    for k in range(1, n_max + 1):
        if all(tower.dim(k, x, y) == 0 for x in range(cat.n) for y in range(cat.n)):
            return GlobalDimension(k - 1, True)
    return GlobalDimension(n_max, False)


# satellites


class SatelliteTower:
    """E^n(c, -) by iterated cokernels along designated dominant conflations."""

    def __init__(self, cat: FinAddCategory, E: Bimodule, dominant: Mapping):
        self.cat, self.E, self.field = cat, E, cat.field
        self.dominant = dominant
        self._mods: dict = {}
        self._res: dict = {}
        self._pulls: dict = {}
        self._lifts: dict = {}

    def _conf(self, c: int) -> Conflation:
        conf = self.dominant.get(c)
        if conf is None:
            raise TowerError(f"no designated dominant conflation for {self.cat.names[c]}")
        return conf

    def module(self, n: int, c: int) -> CModule:
        key = (n, c)
        mod = self._mods.get(key)
        if mod is not None:
            return mod
        if n == 0:
            mod = representable(self.cat, Obj((c,)), "co")
        else:
            conf = self._conf(c)
            res = module_cokernel(self.pull_object(n - 1, conf.x))
            self._res[key] = res
            mod = res.module
        self._mods[key] = mod
        return mod

    def sum_module(self, n: int, X: Obj) -> CModule:
        mods = [self.module(n, i) for i in X]
        dims = [sum(md.dims[m] for md in mods) for m in range(self.cat.n)]

        def act(i, j, k):
            from .linalg import block_diag
            return block_diag(self.field, [md.act(i, j, k) for md in mods])

        return CModule(self.cat, "co", dims, act, name=f"sat^{n}")

    def _lift(self, c2: int, c: int, k: int) -> Morphism:
        """a: F' -> F with a_* theta' = b^* theta for the basis morphism b: c2 -> c."""
        key = (c2, c, k)
        a = self._lifts.get(key)
        if a is not None:
            return a
        cat, E = self.cat, self.E
        conf, conf2 = self._conf(c), self._conf(c2)
        F, F2 = conf.A, conf2.A
        b = cat.basis_morphism(c2, c, k)
        target = E.right_matrix(b, F) @ conf.delta
        dim = cat.layout(F2, F).dim
        cols = [E.left_matrix(cat.morphism(F2, F, Matrix.unit(self.field, dim, t)), Obj((c2,)))
                @ conf2.delta for t in range(dim)]
        sol = solve(Matrix.hstack(self.field, target.rows, cols), target)
        if sol is None:
            raise TowerError("no morphism of extensions lifts the given morphism")
        a = cat.morphism(F2, F, sol.particular)
        self._lifts[key] = a
        return a

    def pull_basis(self, n: int, c2: int, c: int, k: int) -> ModuleMorphism:
        """E^n(c, -) -> E^n(c2, -) induced by the basis morphism k of Hom(c2, c)."""
        key = (n, c2, c, k)
        mm = self._pulls.get(key)
        if mm is not None:
            return mm
        cat = self.cat
        src, tgt = self.module(n, c), self.module(n, c2)
        if n == 0:
            comps = {m: cat.pre_basis(c2, c, m, k) for m in range(cat.n)}
        else:
            a = self._lift(c2, c, k)
            res, res2 = self._res[n, c], self._res[n, c2]
            astar = self.pull_object(n - 1, a)
            comps = {m: res2.map.comps[m] @ astar.comps[m] @ res.bases[m] for m in range(cat.n)}
        mm = ModuleMorphism(src, tgt, comps)
        self._pulls[key] = mm
        return mm

    def pull_object(self, n: int, f: Morphism) -> ModuleMorphism:
        """f^*: E^n(tgt f, -) -> E^n(src f, -) assembled blockwise."""
        cat, fld = self.cat, self.field
        comps = {}
        for m in range(cat.n):
            rdims = [self.module(n, i).dims[m] for i in f.src]
            cdims = [self.module(n, j).dims[m] for j in f.tgt]
            blocks = {}
            for s, i in enumerate(f.src):
                for t, j in enumerate(f.tgt):
                    fb = f.block(s, t)
                    acc = None
                    for k, _, v in fb.nonzero_items():
                        term = self.pull_basis(n, i, j, k).comps[m].scale(v)
                        acc = term if acc is None else acc + term
                    if acc is not None:
                        blocks[s, t] = acc
            comps[m] = Matrix.from_blocks(fld, rdims, cdims, blocks)
        return ModuleMorphism(self.sum_module(n, f.tgt), self.sum_module(n, f.src), comps)


def satellite_ext(cat: FinAddCategory, E: Bimodule, dominant: Mapping, n: int, c: int) -> CModule:
    return SatelliteTower(cat, E, dominant).module(n, c)
