"""Finite Krull-Schmidt K-linear categories given by structure constants."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from sympy import Poly, Symbol

from .linalg import (Field, Matrix, Subspace, image_basis, kernel_basis,
                     kronecker_tensor, rank)


class CategoryError(ValueError):
    pass


@dataclass(frozen=True)
class Obj:
    """A finite direct sum of indecomposables, listed in order.

    Bundles always use the canonical (sorted) order; arbitrary orders are
    allowed internally so that direct sums are plain concatenation.
    """

    summands: tuple[int, ...] = ()

    @classmethod
    def from_mult(cls, mult: Sequence[int]) -> "Obj":
        if any(m < 0 for m in mult):
            raise CategoryError("negative multiplicity")
        return cls(tuple(i for i, m in enumerate(mult) for _ in range(m)))

    def mult(self, n: int) -> tuple[int, ...]:
        out = [0] * n
        for i in self.summands:
            out[i] += 1
        return tuple(out)

    def __add__(self, other: "Obj") -> "Obj":
        return Obj(self.summands + other.summands)

    def __len__(self):
        return len(self.summands)

    def __iter__(self):
        return iter(self.summands)

    def __getitem__(self, k):
        return self.summands[k]

    def canonical(self) -> "Obj":
        return Obj(tuple(sorted(self.summands)))

    @property
    def is_zero(self) -> bool:
        return not self.summands


ZERO = Obj()


@dataclass(frozen=True)
class HomLayout:
    src: Obj
    tgt: Obj
    offsets: dict
    dims: dict
    dim: int

    def block(self, v: Matrix, s: int, t: int) -> Matrix:
        o = self.offsets[s, t]
        return v.row_slice(o, o + self.dims[s, t])


@dataclass(frozen=True, eq=False)
class Morphism:
    cat: "FinAddCategory"
    src: Obj
    tgt: Obj
    vec: Matrix

    @property
    def layout(self) -> HomLayout:
        return self.cat.layout(self.src, self.tgt)

    def block(self, s: int, t: int) -> Matrix:
        return self.layout.block(self.vec, s, t)

    def __add__(self, other: "Morphism") -> "Morphism":
        self._check_parallel(other)
        return Morphism(self.cat, self.src, self.tgt, self.vec + other.vec)

    def __sub__(self, other: "Morphism") -> "Morphism":
        self._check_parallel(other)
        return Morphism(self.cat, self.src, self.tgt, self.vec - other.vec)

    def __neg__(self) -> "Morphism":
        return Morphism(self.cat, self.src, self.tgt, -self.vec)

    def scale(self, s) -> "Morphism":
        return Morphism(self.cat, self.src, self.tgt, self.vec.scale(s))

    def is_zero(self) -> bool:
        return self.vec.is_zero()

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return self.src == other.src and self.tgt == other.tgt and self.vec == other.vec

    def __hash__(self):
        return hash((self.src, self.tgt))

    def _check_parallel(self, other: "Morphism"):
        if self.src != other.src or self.tgt != other.tgt:
            raise CategoryError("morphisms are not parallel")

    def blocks_json(self) -> list:
        """Nested ``[s][t] -> coefficient list`` form used in bundles."""
        fld = self.cat.field
        return [[[fld.to_json(x) for x in self.block(s, t).vector()]
                 for t in range(len(self.tgt))] for s in range(len(self.src))]


class FinAddCategory:
    """Indecomposables ``0..n-1`` with Hom bases and structure constants.

    ``comp[i, j, k]`` has shape ``dim Hom(i,k) x (dim Hom(i,j) * dim Hom(j,k))``;
    column ``a * dim Hom(j,k) + b`` holds ``b_b o a_a``.
    """

    def __init__(self, fld: Field, names: Sequence[str], hom_dim: Mapping,
                 comp: Mapping, ident: Mapping, labels: Mapping | None = None):
        self.field = fld
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise CategoryError("duplicate indecomposable names")
        self.n = len(self.names)
        self._index = {nm: i for i, nm in enumerate(self.names)}
        self.hom_dim = {(i, j): int(hom_dim.get((i, j), 0))
                        for i in range(self.n) for j in range(self.n)}
        self.comp = {}
        for i in range(self.n):
            for j in range(self.n):
                for k in range(self.n):
                    shape = (self.hom_dim[i, k], self.hom_dim[i, j] * self.hom_dim[j, k])
                    m = comp.get((i, j, k))
                    if m is None:
                        m = Matrix.zeros(fld, *shape)
                    if m.shape != shape:
                        raise CategoryError(f"structure constants {(i, j, k)} have shape {m.shape}")
                    self.comp[i, j, k] = m
        self.ident = {i: ident[i] for i in range(self.n)}
        self.labels = {}
        for i in range(self.n):
            for j in range(self.n):
                given = (labels or {}).get((i, j))
                d = self.hom_dim[i, j]
                self.labels[i, j] = tuple(given) if given else tuple(
                    f"{self.names[i]}>{self.names[j]}#{k}" for k in range(d))
        self._layouts: dict = {}
        self._post: dict = {}
        self._pre: dict = {}
        self._rad: dict = {}
        self._residue: dict = {}

    # names and objects

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise CategoryError(f"unknown indecomposable {name!r}") from None

    def obj(self, spec=None, **kw) -> Obj:
        """Object from a ``name -> multiplicity`` map or a list of names."""
        if spec is None:
            spec = kw
        if isinstance(spec, Obj):
            return spec
        if isinstance(spec, str):
            return Obj((self.index(spec),))
        if isinstance(spec, Mapping):
            mult = [0] * self.n
            for nm, m in spec.items():
                mult[self.index(nm)] += int(m)
            return Obj.from_mult(mult)
        return Obj(tuple(self.index(nm) if isinstance(nm, str) else int(nm) for nm in spec))

    def indec(self, i: int) -> Obj:
        return Obj((i,))

    def obj_json(self, x: Obj) -> dict:
        mult = x.mult(self.n)
        if x != x.canonical():
            raise CategoryError("only canonically ordered objects are serialized")
        return {self.names[i]: m for i, m in enumerate(mult) if m}

    def obj_name(self, x: Obj) -> str:
        if x.is_zero:
            return "0"
        return "+".join(self.names[i] for i in x)

    # hom spaces

    def layout(self, x: Obj, y: Obj) -> HomLayout:
        key = (x, y)
        lay = self._layouts.get(key)
        if lay is None:
            offsets, dims, acc = {}, {}, 0
            for s, i in enumerate(x):
                for t, j in enumerate(y):
                    offsets[s, t] = acc
                    dims[s, t] = self.hom_dim[i, j]
                    acc += dims[s, t]
            lay = HomLayout(x, y, offsets, dims, acc)
            self._layouts[key] = lay
        return lay

    def hom_space(self, x: Obj, y: Obj) -> tuple[int, list[tuple[int, int, str]]]:
        """Dimension and the canonical basis enumeration (s, t, label)."""
        lay = self.layout(x, y)
        basis = []
        for s, i in enumerate(x):
            for t, j in enumerate(y):
                basis.extend((s, t, lab) for lab in self.labels[i, j])
        return lay.dim, basis

    def morphism(self, x: Obj, y: Obj, vec: Matrix) -> Morphism:
        if vec.shape != (self.layout(x, y).dim, 1):
            raise CategoryError("coefficient vector has the wrong length")
        return Morphism(self, x, y, vec)

    def from_blocks(self, x: Obj, y: Obj, blocks: Mapping) -> Morphism:
        """Morphism from a sparse map ``(s, t) -> column vector``."""
        lay = self.layout(x, y)
        parts = []
        for s in range(len(x)):
            for t in range(len(y)):
                b = blocks.get((s, t))
                parts.append(b if b is not None else Matrix.zeros(self.field, lay.dims[s, t], 1))
        return Morphism(self, x, y, Matrix.vstack(self.field, 1, parts))

    def from_blocks_json(self, x: Obj, y: Obj, nested) -> Morphism:
        blocks = {}
        for s in range(len(x)):
            for t in range(len(y)):
                blocks[s, t] = Matrix.column(self.field, nested[s][t]) if nested[s][t] else \
                    Matrix.zeros(self.field, 0, 1)
        return self.from_blocks(x, y, blocks)

    def zero(self, x: Obj, y: Obj) -> Morphism:
        return Morphism(self, x, y, Matrix.zeros(self.field, self.layout(x, y).dim, 1))

    def identity(self, x: Obj) -> Morphism:
        return self.from_blocks(x, x, {(s, s): self.ident[i] for s, i in enumerate(x)})

    def basis_morphism(self, i: int, j: int, k: int) -> Morphism:
        return Morphism(self, Obj((i,)), Obj((j,)), Matrix.unit(self.field, self.hom_dim[i, j], k))

    def inclusion(self, parts: Sequence[Obj], r: int) -> Morphism:
        """Canonical inclusion of ``parts[r]`` into their concatenated sum."""
        total = Obj(sum((p.summands for p in parts), ()))
        off = sum(len(p) for p in parts[:r])
        return self.from_blocks(parts[r], total,
                                {(s, off + s): self.ident[i] for s, i in enumerate(parts[r])})

    def projection(self, parts: Sequence[Obj], r: int) -> Morphism:
        total = Obj(sum((p.summands for p in parts), ()))
        off = sum(len(p) for p in parts[:r])
        return self.from_blocks(total, parts[r],
                                {(off + s, s): self.ident[i] for s, i in enumerate(parts[r])})

    def reorder(self, x: Obj, perm: Sequence[int]) -> Morphism:
        """Isomorphism ``x -> Obj(x[perm[0]], x[perm[1]], ...)``."""
        y = Obj(tuple(x[p] for p in perm))
        return self.from_blocks(x, y, {(p, t): self.ident[x[p]] for t, p in enumerate(perm)})

    def to_canonical(self, x: Obj) -> Morphism:
        perm = sorted(range(len(x)), key=lambda s: (x[s], s))
        return self.reorder(x, perm)

    # composition

    def compose_basic(self, i: int, j: int, k: int, g: Matrix, f: Matrix) -> Matrix:
        """``g o f`` for ``f`` in Hom(i,j), ``g`` in Hom(j,k) (coefficient columns)."""
        if not self.hom_dim[i, k] or f.is_zero() or g.is_zero():
            return Matrix.zeros(self.field, self.hom_dim[i, k], 1)
        return self.comp[i, j, k] @ kronecker_tensor(f, g)

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        if f.tgt != g.src:
            raise CategoryError(
                f"cannot compose: {self.obj_name(f.tgt)} is not {self.obj_name(g.src)}")
        x, y, z = f.src, f.tgt, g.tgt
        blocks = {}
        for s, i in enumerate(x):
            for u, k in enumerate(z):
                acc = None
                for t, j in enumerate(y):
                    fb, gb = f.block(s, t), g.block(t, u)
                    if fb.is_zero() or gb.is_zero():
                        continue
                    term = self.compose_basic(i, j, k, gb, fb)
                    acc = term if acc is None else acc + term
                if acc is not None:
                    blocks[s, u] = acc
        return self.from_blocks(x, z, blocks)

    def post_basic(self, i: int, j: int, k: int, g: Matrix) -> Matrix:
        """Matrix of ``g o -``: Hom(i,j) -> Hom(i,k)."""
        dij = self.hom_dim[i, j]
        return self.comp[i, j, k] @ kronecker_tensor(Matrix.identity(self.field, dij), g)

    def pre_basic(self, i: int, j: int, k: int, f: Matrix) -> Matrix:
        """Matrix of ``- o f``: Hom(j,k) -> Hom(i,k)."""
        djk = self.hom_dim[j, k]
        return self.comp[i, j, k] @ kronecker_tensor(f, Matrix.identity(self.field, djk))

    def post_basis(self, i: int, j: int, k: int, b: int) -> Matrix:
        key = (i, j, k, b)
        m = self._post.get(key)
        if m is None:
            m = self.post_basic(i, j, k, Matrix.unit(self.field, self.hom_dim[j, k], b))
            self._post[key] = m
        return m

    def pre_basis(self, i: int, j: int, k: int, b: int) -> Matrix:
        key = (i, j, k, b)
        m = self._pre.get(key)
        if m is None:
            m = self.pre_basic(i, j, k, Matrix.unit(self.field, self.hom_dim[i, j], b))
            self._pre[key] = m
        return m

    def postcompose_matrix(self, g: Morphism, x: Obj) -> Matrix:
        """Matrix of ``g o -``: Hom(x, src g) -> Hom(x, tgt g)."""
        return self._linear_map(self.layout(x, g.src).dim,
                                lambda f: self.compose(g, f), x, g.src)

    def precompose_matrix(self, f: Morphism, z: Obj) -> Matrix:
        """Matrix of ``- o f``: Hom(tgt f, z) -> Hom(src f, z)."""
        return self._linear_map(self.layout(f.tgt, z).dim,
                                lambda g: self.compose(g, f), f.tgt, z)

    def _linear_map(self, n: int, fn, x: Obj, y: Obj) -> Matrix:
        cols = [fn(self.morphism(x, y, Matrix.unit(self.field, n, k))).vec for k in range(n)]
        out = fn(self.zero(x, y))
        return Matrix.hstack(self.field, out.vec.rows, cols)

    # radical and minimality

    def residue(self, i: int) -> Matrix:
        """The algebra map End(i) -> K as a row vector (End(i) split local)."""
        r = self._residue.get(i)
        if r is None:
            self._local_structure(i)
            r = self._residue[i]
        return r

    def radical(self, i: int, j: int) -> Subspace:
        if i != j:
            return Subspace.full(self.field, self.hom_dim[i, j])
        if i not in self._rad:
            self._local_structure(i)
        return self._rad[i]

    def _local_structure(self, i: int) -> None:
        fld = self.field
        d = self.hom_dim[i, i]
        if d == 0:
            raise CategoryError(f"{self.names[i]} is a zero object")
        values = []
        for b in range(d):
            values.append(_single_eigenvalue(self.post_basis(i, i, i, b), self.names[i]))
        chi = Matrix.from_rows(fld, [values], d)
        if (chi @ self.ident[i])[0, 0] != fld.one:
            raise CategoryError(f"End({self.names[i]}) has no residue map")
        rad = kernel_basis(chi)
        for c in range(rad.dim):
            v = rad.basis.col(c)
            mult = self.post_basic(i, i, i, v)
            power = mult
            for _ in range(d):
                power = power @ mult
            if not power.is_zero():
                raise CategoryError(f"End({self.names[i]}) is not local")
        self._residue[i] = chi
        self._rad[i] = rad

    def radical_of(self, i: int, y: Obj) -> Subspace:
        """rad(i, y) inside Hom(i, y), blockwise over the copies in y."""
        lay = self.layout(Obj((i,)), y)
        cols = []
        for t, j in enumerate(y):
            r = self.radical(i, j)
            for c in range(r.dim):
                parts = [r.basis.col(c) if u == t else Matrix.zeros(self.field, lay.dims[0, u], 1)
                         for u in range(len(y))]
                cols.append(Matrix.vstack(self.field, 1, parts))
        return Subspace(Matrix.hstack(self.field, lay.dim, cols))

    def is_right_minimal(self, f: Morphism) -> bool:
        for i in range(self.n):
            killed = kernel_basis(self.postcompose_matrix(f, Obj((i,))))
            if not self.radical_of(i, f.src).contains_subspace(killed):
                return False
        return True

    def is_iso(self, f: Morphism) -> bool:
        """``f`` is invertible iff ``f o -`` is bijective on Hom(i, -) for all i."""
        for i in range(self.n):
            m = self.postcompose_matrix(f, Obj((i,)))
            if m.rows != m.cols or rank(m) != m.rows:
                return False
        return True

    def inverse(self, f: Morphism) -> Morphism:
        from .linalg import solve
        m = self.postcompose_matrix(f, f.tgt)
        sol = solve(m, self.identity(f.tgt).vec)
        if sol is None:
            raise CategoryError("morphism is not a split epimorphism")
        g = self.morphism(f.tgt, f.src, sol.particular)
        if self.compose(g, f) != self.identity(f.src):
            raise CategoryError("morphism is not invertible")
        return g

    # validation

    def validate(self) -> list[str]:
        """Associativity, unit laws and locality; returns violated identities."""
        errs = []
        fld = self.field
        rng = range(self.n)
        for i in rng:
            for j in rng:
                for k in range(self.hom_dim[i, j]):
                    a = Matrix.unit(fld, self.hom_dim[i, j], k)
                    if self.compose_basic(i, j, j, self.ident[j], a) != a:
                        errs.append(f"left unit fails on {self.labels[i, j][k]}")
                    if self.compose_basic(i, i, j, a, self.ident[i]) != a:
                        errs.append(f"right unit fails on {self.labels[i, j][k]}")
        for i in rng:
            for j in rng:
                if not self.hom_dim[i, j]:
                    continue
                for k in rng:
                    if not self.hom_dim[j, k]:
                        continue
                    for l in rng:
                        if not self.hom_dim[k, l]:
                            continue
                        for c in range(self.hom_dim[k, l]):
                            cm = Matrix.unit(fld, self.hom_dim[k, l], c)
                            # (c o -) o (- o a) versus c o (b o a) for all a, b at once
                            left = self.post_basic(i, k, l, cm) @ self.comp[i, j, k]
                            right = self.comp[i, j, l] @ kronecker_tensor(
                                Matrix.identity(fld, self.hom_dim[i, j]),
                                self.post_basic(j, k, l, cm))
                            if left != right:
                                errs.append("associativity fails on "
                                            f"{self.names[i]}>{self.names[j]}>"
                                            f"{self.names[k]}>{self.names[l]} with "
                                            f"{self.labels[k, l][c]}")
        for i in rng:
            try:
                self._local_structure(i)
            except CategoryError as exc:
                errs.append(str(exc))
        return errs

    # serialization

    def to_json(self) -> dict:
        fld = self.field
        hom, comp, ident = {}, {}, {}
        nm = self.names
        for i in range(self.n):
            ident[nm[i]] = [fld.to_json(x) for x in self.ident[i].vector()]
            for j in range(self.n):
                d = self.hom_dim[i, j]
                if d:
                    hom[f"{nm[i]}|{nm[j]}"] = {"dim": d, "basis": list(self.labels[i, j])}
                for k in range(self.n):
                    dij, djk, dik = d, self.hom_dim[j, k], self.hom_dim[i, k]
                    m = self.comp[i, j, k]
                    if not (dij and djk and dik) or m.is_zero():
                        continue
                    comp[f"{nm[i]}|{nm[j]}|{nm[k]}"] = [
                        [[fld.to_json(m[r, a * djk + b]) for r in range(dik)]
                         for b in range(djk)] for a in range(dij)]
        return {"indecomposables": list(nm), "hom": hom, "comp": comp, "id": ident}

    @classmethod
    def from_json(cls, fld: Field, data: Mapping) -> "FinAddCategory":
        names = list(data["indecomposables"])
        idx = {n: i for i, n in enumerate(names)}

        def key(s, n):
            parts = s.split("|")
            if len(parts) != n or any(p not in idx for p in parts):
                raise CategoryError(f"bad key {s!r}")
            return tuple(idx[p] for p in parts)

        hom_dim, labels = {}, {}
        for s, v in data.get("hom", {}).items():
            k = key(s, 2)
            hom_dim[k] = int(v["dim"])
            if v.get("basis"):
                if len(v["basis"]) != hom_dim[k]:
                    raise CategoryError(f"basis label count mismatch at {s}")
                labels[k] = v["basis"]
        comp = {}
        for s, nested in data.get("comp", {}).items():
            i, j, k = key(s, 3)
            dij, djk, dik = (hom_dim.get((i, j), 0), hom_dim.get((j, k), 0),
                             hom_dim.get((i, k), 0))
            rows = [[0] * (dij * djk) for _ in range(dik)]
            if len(nested) != dij or any(len(r) != djk for r in nested):
                raise CategoryError(f"structure constants {s} have the wrong shape")
            for a in range(dij):
                for b in range(djk):
                    vec = nested[a][b]
                    if len(vec) != dik:
                        raise CategoryError(f"structure constants {s} have the wrong shape")
                    for r in range(dik):
                        rows[r][a * djk + b] = vec[r]
            comp[i, j, k] = Matrix.from_rows(fld, rows, dij * djk)
        ident = {}
        for n in names:
            i = idx[n]
            vals = data["id"][n]
            if len(vals) != hom_dim.get((i, i), 0):
                raise CategoryError(f"identity of {n} has the wrong length")
            ident[i] = Matrix.column(fld, vals)
        return cls(fld, names, hom_dim, comp, ident, labels)


def _single_eigenvalue(m: Matrix, name: str):
    """The unique eigenvalue of ``m``, which must have exactly one in K."""
    fld = m.field
    d = m.rows
    tr = sum((m[k, k] for k in range(d)), fld.zero)
    if fld.characteristic == 0 or d % fld.characteristic:
        lam = tr / fld(d)
    else:
        coeffs = m._dm.charpoly()
        t = Symbol("t")
        poly = Poly(list(coeffs), t, domain=fld.domain)
        roots = {-f.nth(0) / f.LC() for f, _ in poly.factor_list()[1] if f.degree() == 1}
        if len(roots) != 1:
            raise CategoryError(f"End({name}) is not split local")
        lam = fld(roots.pop())
    shifted = m - Matrix.identity(fld, d).scale(lam)
    power = shifted
    for _ in range(d):
        power = power @ shifted
    if not power.is_zero():
        raise CategoryError(f"End({name}) is not local")
    return lam
