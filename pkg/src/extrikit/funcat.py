"""Bimodules, one-sided modules and natural transformations over a FinAddCategory.

Every functor is stored pointwise on indecomposables; values and maps on
general objects are assembled blockwise.  Action matrices are produced on
demand by provider callables and cached.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Mapping

from .fincat import CategoryError, FinAddCategory, HomLayout, Morphism, Obj
from .linalg import (Matrix, Subspace, cokernel_section, image_basis, kernel_basis,
                     kronecker_tensor, left_inverse, solve_matrix)


class FunctorError(ValueError):
    pass


def _layout(x: Obj, y: Obj, dim) -> HomLayout:
    offsets, dims, acc = {}, {}, 0
    for s, i in enumerate(x):
        for t, j in enumerate(y):
            offsets[s, t] = acc
            dims[s, t] = dim(i, j)
            acc += dims[s, t]
    return HomLayout(x, y, offsets, dims, acc)


def flatten(m: Matrix) -> Matrix:
    """Row-major vectorization."""
    fld = m.field
    entries = {i * m.cols + j: {0: v} for i, j, v in m.nonzero_items()}
    return Matrix._from_sdm(fld, entries, m.rows * m.cols, 1)


def unflatten(v: Matrix, rows: int, cols: int) -> Matrix:
    entries: dict = {}
    for r, _, val in v.nonzero_items():
        entries.setdefault(r // cols, {})[r % cols] = val
    return Matrix._from_sdm(v.field, entries, rows, cols)


class Bimodule:
    """A bilinear functor C^op x C -> Vect.

    ``left(i, j, j2, k)`` is the action E(i,j) -> E(i,j2) of the basis
    morphism ``k`` of Hom(j,j2); ``right(i2, i, j, k)`` is E(i,j) -> E(i2,j)
    for the basis morphism ``k`` of Hom(i2,i).
    """

    def __init__(self, cat: FinAddCategory, dims: Mapping, left: Callable | Mapping,
                 right: Callable | Mapping, name: str = "E", labels: Mapping | None = None):
        self.cat = cat
        self.field = cat.field
        self.name = name
        self.dims = {(i, j): int(dims.get((i, j), 0)) for i in range(cat.n) for j in range(cat.n)}
        self._left_src = left
        self._right_src = right
        self._left: dict = {}
        self._right: dict = {}
        self._layouts: dict = {}
        self.labels = {}
        for (i, j), d in self.dims.items():
            given = (labels or {}).get((i, j))
            self.labels[i, j] = tuple(given) if given else tuple(
                f"{name}({cat.names[i]},{cat.names[j]})#{k}" for k in range(d))

    def dim(self, i: int, j: int) -> int:
        return self.dims[i, j]

    def is_zero(self) -> bool:
        return not any(self.dims.values())

    # basis actions

    def left(self, i: int, j: int, j2: int, k: int) -> Matrix:
        key = (i, j, j2, k)
        m = self._left.get(key)
        if m is None:
            shape = (self.dims[i, j2], self.dims[i, j])
            if not shape[0] or not shape[1]:
                m = Matrix.zeros(self.field, *shape)
            elif callable(self._left_src):
                m = self._left_src(i, j, j2, k)
            else:
                m = self._left_src.get(key) or Matrix.zeros(self.field, *shape)
            if m.shape != shape:
                raise FunctorError(f"left action {key} has shape {m.shape}, expected {shape}")
            self._left[key] = m
        return m

    def right(self, i2: int, i: int, j: int, k: int) -> Matrix:
        key = (i2, i, j, k)
        m = self._right.get(key)
        if m is None:
            shape = (self.dims[i2, j], self.dims[i, j])
            if not shape[0] or not shape[1]:
                m = Matrix.zeros(self.field, *shape)
            elif callable(self._right_src):
                m = self._right_src(i2, i, j, k)
            else:
                m = self._right_src.get(key) or Matrix.zeros(self.field, *shape)
            if m.shape != shape:
                raise FunctorError(f"right action {key} has shape {m.shape}, expected {shape}")
            self._right[key] = m
        return m

    def left_basic(self, i: int, j: int, j2: int, g: Matrix) -> Matrix:
        out = Matrix.zeros(self.field, self.dims[i, j2], self.dims[i, j])
        for k, _, c in g.nonzero_items():
            out = out + self.left(i, j, j2, k).scale(c)
        return out

    def right_basic(self, i2: int, i: int, j: int, c: Matrix) -> Matrix:
        out = Matrix.zeros(self.field, self.dims[i2, j], self.dims[i, j])
        for k, _, v in c.nonzero_items():
            out = out + self.right(i2, i, j, k).scale(v)
        return out

    # general objects

    def layout(self, x: Obj, y: Obj) -> HomLayout:
        lay = self._layouts.get((x, y))
        if lay is None:
            lay = _layout(x, y, self.dim)
            self._layouts[x, y] = lay
        return lay

    def space_dim(self, x: Obj, y: Obj) -> int:
        return self.layout(x, y).dim

    def left_matrix(self, a: Morphism, x: Obj) -> Matrix:
        """a_*: E(x, src a) -> E(x, tgt a)."""
        src, tgt = self.layout(x, a.src), self.layout(x, a.tgt)
        blocks = {}
        keys_r = [(s, u) for s in range(len(x)) for u in range(len(a.tgt))]
        keys_c = [(s, t) for s in range(len(x)) for t in range(len(a.src))]
        for s, xi in enumerate(x):
            for t, yj in enumerate(a.src):
                for u, zj in enumerate(a.tgt):
                    ab = a.block(t, u)
                    if ab.is_zero():
                        continue
                    blocks[s * len(a.tgt) + u, s * len(a.src) + t] = \
                        self.left_basic(xi, yj, zj, ab)
        return Matrix.from_blocks(self.field, [tgt.dims[k] for k in keys_r],
                                  [src.dims[k] for k in keys_c], blocks)

    def right_matrix(self, c: Morphism, y: Obj) -> Matrix:
        """c^*: E(tgt c, y) -> E(src c, y)."""
        src, tgt = self.layout(c.tgt, y), self.layout(c.src, y)
        keys_r = [(r, t) for r in range(len(c.src)) for t in range(len(y))]
        keys_c = [(s, t) for s in range(len(c.tgt)) for t in range(len(y))]
        blocks = {}
        for r, xi2 in enumerate(c.src):
            for s, xi in enumerate(c.tgt):
                cb = c.block(r, s)
                if cb.is_zero():
                    continue
                for t, yj in enumerate(y):
                    blocks[r * len(y) + t, s * len(y) + t] = \
                        self.right_basic(xi2, xi, yj, cb)
        return Matrix.from_blocks(self.field, [tgt.dims[k] for k in keys_r],
                                  [src.dims[k] for k in keys_c], blocks)

    def push(self, a: Morphism, x: Obj, v: Matrix) -> Matrix:
        return self.left_matrix(a, x) @ v

    def pull(self, c: Morphism, y: Obj, v: Matrix) -> Matrix:
        return self.right_matrix(c, y) @ v

    def zero(self, x: Obj, y: Obj) -> Matrix:
        return Matrix.zeros(self.field, self.space_dim(x, y), 1)

    def from_blocks(self, x: Obj, y: Obj, blocks: Mapping) -> Matrix:
        lay = self.layout(x, y)
        parts = []
        for s in range(len(x)):
            for t in range(len(y)):
                b = blocks.get((s, t))
                parts.append(b if b is not None else Matrix.zeros(self.field, lay.dims[s, t], 1))
        return Matrix.vstack(self.field, 1, parts)

    def direct_sum_extension(self, c1: Obj, a1: Obj, d1: Matrix,
                             c2: Obj, a2: Obj, d2: Matrix) -> Matrix:
        """The extension d1 (+) d2 in E(c1+c2, a1+a2)."""
        l1, l2 = self.layout(c1, a1), self.layout(c2, a2)
        blocks = {}
        for s in range(len(c1)):
            for t in range(len(a1)):
                blocks[s, t] = l1.block(d1, s, t)
        for s in range(len(c2)):
            for t in range(len(a2)):
                blocks[len(c1) + s, len(a1) + t] = l2.block(d2, s, t)
        return self.from_blocks(c1 + c2, a1 + a2, blocks)

    # slices

    def covariant_slice(self, x: Obj) -> "CModule":
        """E(x, -)."""
        lay = {m: self.layout(x, Obj((m,))) for m in range(self.cat.n)}

        def act(i, j, k):
            blocks = {(s, s): self.left(xi, i, j, k) for s, xi in enumerate(x)}
            return Matrix.from_blocks(self.field, [lay[j].dims[s, 0] for s in range(len(x))],
                                      [lay[i].dims[s, 0] for s in range(len(x))], blocks)

        return CModule(self.cat, "co", [lay[m].dim for m in range(self.cat.n)], act,
                       name=f"{self.name}({self.cat.obj_name(x)},-)")

    def contravariant_slice(self, y: Obj) -> "CModule":
        """E(-, y)."""
        lay = {m: self.layout(Obj((m,)), y) for m in range(self.cat.n)}

        def act(i, j, k):
            blocks = {(t, t): self.right(i, j, yj, k) for t, yj in enumerate(y)}
            return Matrix.from_blocks(self.field, [lay[i].dims[0, t] for t in range(len(y))],
                                      [lay[j].dims[0, t] for t in range(len(y))], blocks)

        return CModule(self.cat, "contra", [lay[m].dim for m in range(self.cat.n)], act,
                       name=f"{self.name}(-,{self.cat.obj_name(y)})")

    # validation

    def validate(self) -> list[str]:
        errs = []
        cat, fld, n = self.cat, self.field, self.cat.n
        for i in range(n):
            for j in range(n):
                if not self.dims[i, j]:
                    continue
                eye = Matrix.identity(fld, self.dims[i, j])
                if self.left_basic(i, j, j, cat.ident[j]) != eye:
                    errs.append(f"{self.name}: left unit fails at ({cat.names[i]},{cat.names[j]})")
                if self.right_basic(i, i, j, cat.ident[i]) != eye:
                    errs.append(f"{self.name}: right unit fails at ({cat.names[i]},{cat.names[j]})")
        for i in range(n):
            for j in range(n):
                for j2 in range(n):
                    for j3 in range(n):
                        if not (self.dims[i, j] and self.dims[i, j3]):
                            continue
                        for a in range(cat.hom_dim[j, j2]):
                            for b in range(cat.hom_dim[j2, j3]):
                                ua = Matrix.unit(fld, cat.hom_dim[j, j2], a)
                                ub = Matrix.unit(fld, cat.hom_dim[j2, j3], b)
                                ba = cat.compose_basic(j, j2, j3, ub, ua)
                                if self.left(i, j2, j3, b) @ self.left(i, j, j2, a) != \
                                        self.left_basic(i, j, j3, ba):
                                    errs.append(f"{self.name}: left action not multiplicative on "
                                                f"{cat.labels[j2, j3][b]} o {cat.labels[j, j2][a]}")
        for j in range(n):
            for i in range(n):
                for i2 in range(n):
                    for i3 in range(n):
                        if not (self.dims[i, j] and self.dims[i3, j]):
                            continue
                        for a in range(cat.hom_dim[i2, i]):
                            for b in range(cat.hom_dim[i3, i2]):
                                ua = Matrix.unit(fld, cat.hom_dim[i2, i], a)
                                ub = Matrix.unit(fld, cat.hom_dim[i3, i2], b)
                                ab = cat.compose_basic(i3, i2, i, ua, ub)
                                if self.right(i3, i2, j, b) @ self.right(i2, i, j, a) != \
                                        self.right_basic(i3, i, j, ab):
                                    errs.append(f"{self.name}: right action not multiplicative on "
                                                f"{cat.labels[i2, i][a]} o {cat.labels[i3, i2][b]}")
        for i in range(n):
            for i2 in range(n):
                for j in range(n):
                    for j2 in range(n):
                        if not (self.dims[i, j] and self.dims[i2, j2]):
                            continue
                        for c in range(cat.hom_dim[i2, i]):
                            for a in range(cat.hom_dim[j, j2]):
                                lhs = self.right(i2, i, j2, c) @ self.left(i, j, j2, a)
                                rhs = self.left(i2, j, j2, a) @ self.right(i2, i, j, c)
                                if lhs != rhs:
                                    errs.append(f"{self.name}: actions do not commute for "
                                                f"{cat.labels[i2, i][c]}, {cat.labels[j, j2][a]}")
        return errs

    # serialization

    def to_json(self) -> dict:
        cat, fld = self.cat, self.field
        nm = cat.names
        ext, left, right = {}, {}, {}
        for (i, j), d in self.dims.items():
            if d:
                ext[f"{nm[i]}|{nm[j]}"] = {"dim": d, "basis": list(self.labels[i, j])}
        for j in range(cat.n):
            for j2 in range(cat.n):
                for k in range(cat.hom_dim[j, j2]):
                    entry = {}
                    for i in range(cat.n):
                        m = self.left(i, j, j2, k)
                        if m.rows and m.cols and not m.is_zero():
                            entry[nm[i]] = m.to_json()
                    if entry:
                        left[cat.labels[j, j2][k]] = entry
        for i2 in range(cat.n):
            for i in range(cat.n):
                for k in range(cat.hom_dim[i2, i]):
                    entry = {}
                    for j in range(cat.n):
                        m = self.right(i2, i, j, k)
                        if m.rows and m.cols and not m.is_zero():
                            entry[nm[j]] = m.to_json()
                    if entry:
                        right[cat.labels[i2, i][k]] = entry
        return {"ext": ext, "ext_left_act": left, "ext_right_act": right}

    @classmethod
    def from_json(cls, cat: FinAddCategory, data: Mapping) -> "Bimodule":
        fld = cat.field
        dims, labels = {}, {}
        for s, v in data.get("ext", {}).items():
            a, b = s.split("|")
            key = (cat.index(a), cat.index(b))
            dims[key] = int(v["dim"])
            if v.get("basis"):
                labels[key] = v["basis"]
        where = {}
        for (i, j), labs in cat.labels.items():
            for k, lab in enumerate(labs):
                where[lab] = (i, j, k)
        left, right = {}, {}
        for lab, entry in data.get("ext_left_act", {}).items():
            if lab not in where:
                raise FunctorError(f"unknown basis morphism {lab!r}")
            j, j2, k = where[lab]
            for nm, rows in entry.items():
                i = cat.index(nm)
                left[i, j, j2, k] = Matrix.from_rows(fld, rows, dims.get((i, j), 0))
        for lab, entry in data.get("ext_right_act", {}).items():
            if lab not in where:
                raise FunctorError(f"unknown basis morphism {lab!r}")
            i2, i, k = where[lab]
            for nm, rows in entry.items():
                j = cat.index(nm)
                right[i2, i, j, k] = Matrix.from_rows(fld, rows, dims.get((i, j), 0))
        return cls(cat, dims, left, right, labels=labels)


def hom_bimodule(cat: FinAddCategory) -> Bimodule:
    """Hom as a bimodule: left action by postcomposition, right by precomposition."""
    return Bimodule(cat, dict(cat.hom_dim),
                    lambda i, j, j2, k: cat.post_basis(i, j, j2, k),
                    lambda i2, i, j, k: cat.pre_basis(i2, i, j, k),
                    name="Hom", labels=cat.labels)


def zero_bimodule(cat: FinAddCategory) -> Bimodule:
    return Bimodule(cat, {}, {}, {})


class CModule:
    """A one-sided functor C -> Vect (``co``) or C^op -> Vect (``contra``).

    ``act(i, j, k)`` for the basis morphism ``k`` of Hom(i,j) is
    F(i) -> F(j) when covariant and F(j) -> F(i) when contravariant.
    """

    def __init__(self, cat: FinAddCategory, variance: str, dims, act: Callable | Mapping,
                 name: str = "F"):
        if variance not in ("co", "contra"):
            raise FunctorError(f"unknown variance {variance!r}")
        self.cat = cat
        self.field = cat.field
        self.variance = variance
        self.dims = list(dims)
        self._act_src = act
        self._act: dict = {}
        self.name = name

    def dim(self, m: int) -> int:
        return self.dims[m]

    def is_zero(self) -> bool:
        return not any(self.dims)

    def act(self, i: int, j: int, k: int) -> Matrix:
        key = (i, j, k)
        m = self._act.get(key)
        if m is None:
            shape = (self.dims[j], self.dims[i]) if self.variance == "co" else \
                (self.dims[i], self.dims[j])
            if not shape[0] or not shape[1]:
                m = Matrix.zeros(self.field, *shape)
            elif callable(self._act_src):
                m = self._act_src(i, j, k)
            else:
                m = self._act_src.get(key) or Matrix.zeros(self.field, *shape)
            if m.shape != shape:
                raise FunctorError(f"{self.name}: action {key} has shape {m.shape}, expected {shape}")
            self._act[key] = m
        return m

    def act_basic(self, i: int, j: int, f: Matrix) -> Matrix:
        shape = (self.dims[j], self.dims[i]) if self.variance == "co" else \
            (self.dims[i], self.dims[j])
        out = Matrix.zeros(self.field, *shape)
        for k, _, c in f.nonzero_items():
            out = out + self.act(i, j, k).scale(c)
        return out

    def value_dim(self, x: Obj) -> int:
        return sum(self.dims[i] for i in x)

    def map_of(self, f: Morphism) -> Matrix:
        """F(f): F(src) -> F(tgt) (co) or F(tgt) -> F(src) (contra)."""
        blocks = {}
        for s, i in enumerate(f.src):
            for t, j in enumerate(f.tgt):
                fb = f.block(s, t)
                if fb.is_zero():
                    continue
                m = self.act_basic(i, j, fb)
                blocks[(t, s) if self.variance == "co" else (s, t)] = m
        sd = [self.dims[i] for i in f.src]
        td = [self.dims[j] for j in f.tgt]
        if self.variance == "co":
            return Matrix.from_blocks(self.field, td, sd, blocks)
        return Matrix.from_blocks(self.field, sd, td, blocks)

    def validate(self) -> list[str]:
        errs = []
        cat, fld, n = self.cat, self.field, self.cat.n
        for i in range(n):
            if self.dims[i] and self.act_basic(i, i, cat.ident[i]) != \
                    Matrix.identity(fld, self.dims[i]):
                errs.append(f"{self.name}: unit fails at {cat.names[i]}")
        for i in range(n):
            for j in range(n):
                for l in range(n):
                    for a in range(cat.hom_dim[i, j]):
                        for b in range(cat.hom_dim[j, l]):
                            ua = Matrix.unit(fld, cat.hom_dim[i, j], a)
                            ub = Matrix.unit(fld, cat.hom_dim[j, l], b)
                            ba = self.act_basic(i, l, cat.compose_basic(i, j, l, ub, ua))
                            if self.variance == "co":
                                two = self.act(j, l, b) @ self.act(i, j, a)
                            else:
                                two = self.act(i, j, a) @ self.act(j, l, b)
                            if two != ba:
                                errs.append(f"{self.name}: not functorial on "
                                            f"{cat.labels[j, l][b]} o {cat.labels[i, j][a]}")
        return errs


def representable(cat: FinAddCategory, x: Obj, variance: str) -> CModule:
    """C(x, -) when ``variance == 'co'``, C(-, x) when ``'contra'``."""
    hom = hom_bimodule(cat)
    return hom.covariant_slice(x) if variance == "co" else hom.contravariant_slice(x)


def zero_module(cat: FinAddCategory, variance: str) -> CModule:
    return CModule(cat, variance, [0] * cat.n, {}, name="0")


@dataclass
class ModuleMorphism:
    src: CModule
    tgt: CModule
    comps: dict

    def __post_init__(self):
        if self.src.variance != self.tgt.variance:
            raise FunctorError("variance mismatch")
        for m in range(self.src.cat.n):
            c = self.comps.get(m)
            shape = (self.tgt.dims[m], self.src.dims[m])
            if c is None:
                self.comps[m] = Matrix.zeros(self.src.field, *shape)
            elif c.shape != shape:
                raise FunctorError(f"component at {m} has shape {c.shape}, expected {shape}")

    def naturality_errors(self) -> list[str]:
        cat = self.src.cat
        errs = []
        for i in range(cat.n):
            for j in range(cat.n):
                for k in range(cat.hom_dim[i, j]):
                    if self.src.variance == "co":
                        lhs = self.tgt.act(i, j, k) @ self.comps[i]
                        rhs = self.comps[j] @ self.src.act(i, j, k)
                    else:
                        lhs = self.tgt.act(i, j, k) @ self.comps[j]
                        rhs = self.comps[i] @ self.src.act(i, j, k)
                    if lhs != rhs:
                        errs.append(f"naturality fails on {cat.labels[i, j][k]}")
        return errs

    def is_natural(self) -> bool:
        return not self.naturality_errors()

    def compose(self, other: "ModuleMorphism") -> "ModuleMorphism":
        """self o other."""
        return ModuleMorphism(other.src, self.tgt,
                              {m: self.comps[m] @ other.comps[m] for m in range(self.src.cat.n)})

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps.values())

    def at_object(self, x: Obj) -> Matrix:
        fld = self.src.field
        return Matrix.from_blocks(fld, [self.tgt.dims[i] for i in x],
                                  [self.src.dims[i] for i in x],
                                  {(s, s): self.comps[i] for s, i in enumerate(x)})


@dataclass
class SubquotientResult:
    module: CModule
    map: ModuleMorphism
    bases: dict = dc_field(default_factory=dict)


def _induced_sub(src: CModule, bases: dict, name: str) -> CModule:
    """Submodule of ``src`` spanned pointwise by the columns of ``bases[m]``."""
    inv = {m: left_inverse(b) if b.cols else Matrix.zeros(src.field, 0, b.rows)
           for m, b in bases.items()}

    def act(i, j, k):
        if src.variance == "co":
            moved = src.act(i, j, k) @ bases[i]
            return inv[j] @ moved
        moved = src.act(i, j, k) @ bases[j]
        return inv[i] @ moved

    mod = CModule(src.cat, src.variance, [bases[m].cols for m in range(src.cat.n)], act, name=name)
    for i in range(src.cat.n):
        for j in range(src.cat.n):
            for k in range(src.cat.hom_dim[i, j]):
                a = mod.act(i, j, k)
                if src.variance == "co":
                    ok = bases[j] @ a == src.act(i, j, k) @ bases[i]
                else:
                    ok = bases[i] @ a == src.act(i, j, k) @ bases[j]
                if not ok:
                    raise FunctorError(f"{name}: subspace not stable under {src.cat.labels[i, j][k]}")
    return mod


def module_kernel(phi: ModuleMorphism) -> SubquotientResult:
    if not phi.is_natural():
        raise FunctorError("kernel of a non-natural map")
    bases = {m: kernel_basis(phi.comps[m]).basis for m in range(phi.src.cat.n)}
    mod = _induced_sub(phi.src, bases, f"Ker({phi.src.name}->{phi.tgt.name})")
    return SubquotientResult(mod, ModuleMorphism(mod, phi.src, dict(bases)), bases)


def module_image(phi: ModuleMorphism) -> SubquotientResult:
    if not phi.is_natural():
        raise FunctorError("image of a non-natural map")
    bases = {m: image_basis(phi.comps[m]).basis for m in range(phi.src.cat.n)}
    mod = _induced_sub(phi.tgt, bases, f"Im({phi.src.name}->{phi.tgt.name})")
    return SubquotientResult(mod, ModuleMorphism(mod, phi.tgt, dict(bases)), bases)


def module_cokernel(phi: ModuleMorphism) -> SubquotientResult:
    """Cokernel with the projection ``tgt -> Cok``; ``bases`` holds the sections."""
    if not phi.is_natural():
        raise FunctorError("cokernel of a non-natural map")
    tgt = phi.tgt
    proj, sec = {}, {}
    for m in range(tgt.cat.n):
        proj[m], sec[m] = cokernel_section(phi.comps[m])

    def act(i, j, k):
        if tgt.variance == "co":
            return proj[j] @ tgt.act(i, j, k) @ sec[i]
        return proj[i] @ tgt.act(i, j, k) @ sec[j]

    mod = CModule(tgt.cat, tgt.variance, [proj[m].rows for m in range(tgt.cat.n)], act,
                  name=f"Cok({phi.src.name}->{phi.tgt.name})")
    pmap = ModuleMorphism(tgt, mod, dict(proj))
    if not pmap.is_natural():
        raise FunctorError("induced cokernel actions are not natural")
    return SubquotientResult(mod, pmap, sec)


def submodule_from_bases(src: CModule, bases: dict, name: str = "Sub") -> SubquotientResult:
    mod = _induced_sub(src, bases, name)
    return SubquotientResult(mod, ModuleMorphism(mod, src, dict(bases)), bases)


class NatSpace:
    """Natural transformations F -> G as a solution space.

    Components are row-major vectorized and concatenated over the
    indecomposables; ``basis`` holds the solutions as columns.
    """

    def __init__(self, F: CModule, G: CModule):
        if F.variance != G.variance:
            raise FunctorError("natural transformations need equal variance")
        if F.cat is not G.cat:
            raise FunctorError("modules over different categories")
        self.F, self.G = F, G
        cat, fld = F.cat, F.field
        n = cat.n
        self.shapes = [(G.dims[m], F.dims[m]) for m in range(n)]
        self.offsets = []
        acc = 0
        for r, c in self.shapes:
            self.offsets.append(acc)
            acc += r * c
        self.ambient = acc
        eqs = []
        for i in range(n):
            for j in range(n):
                for k in range(cat.hom_dim[i, j]):
                    if F.variance == "co":
                        # G(b) phi_i - phi_j F(b), equation rows of shape G(j) x F(i)
                        a_src, b_src, lhs_at, rhs_at = G.act(i, j, k), F.act(i, j, k), i, j
                    else:
                        # G(b) phi_j - phi_i F(b), rows of shape G(i) x F(j)
                        a_src, b_src, lhs_at, rhs_at = G.act(i, j, k), F.act(i, j, k), j, i
                    rows = a_src.rows * b_src.cols
                    if not rows:
                        continue
                    blocks = {}
                    gl, fl = self.shapes[lhs_at]
                    if gl * fl:
                        blocks[lhs_at] = kronecker_tensor(a_src, Matrix.identity(fld, fl))
                    gr, fr = self.shapes[rhs_at]
                    if gr * fr:
                        term = -kronecker_tensor(Matrix.identity(fld, gr), b_src.T)
                        blocks[rhs_at] = blocks[rhs_at] + term if rhs_at in blocks else term
                    eqs.append(Matrix.from_blocks(fld, [rows], [r * c for r, c in self.shapes],
                                                  {(0, m): b for m, b in blocks.items()}))
        system = Matrix.vstack(fld, acc, eqs)
        self.basis = kernel_basis(system).basis
        self._coord = None

    @property
    def dim(self) -> int:
        return self.basis.cols

    def components(self, v: Matrix) -> dict:
        out = {}
        for m, (r, c) in enumerate(self.shapes):
            o = self.offsets[m]
            out[m] = unflatten(v.row_slice(o, o + r * c), r, c)
        return out

    def morphism(self, v: Matrix) -> ModuleMorphism:
        return ModuleMorphism(self.F, self.G, self.components(v))

    def basis_morphisms(self) -> list[ModuleMorphism]:
        return [self.morphism(self.basis.col(k)) for k in range(self.dim)]

    def vectorize(self, comps: Mapping) -> Matrix:
        parts = [flatten(comps[m]) for m in range(len(self.shapes))]
        return Matrix.vstack(self.F.field, 1, parts)

    def coordinates(self, comps: Mapping) -> Matrix:
        """Coordinates of a natural transformation given by its components."""
        if self._coord is None:
            self._coord = left_inverse(self.basis) if self.dim else \
                Matrix.zeros(self.F.field, 0, self.ambient)
        v = self.vectorize(comps)
        c = self._coord @ v
        if self.basis @ c != v:
            raise FunctorError("components are not a natural transformation")
        return c


def nat_space(F: CModule, G: CModule) -> NatSpace:
    return NatSpace(F, G)


def projective_ideal(E: Bimodule, x: Obj, y: Obj) -> Subspace:
    """Morphisms f: x -> y with E(f, -) = 0."""
    cat, fld = E.cat, E.field
    dim = cat.layout(x, y).dim
    cols = []
    for k in range(dim):
        f = cat.morphism(x, y, Matrix.unit(fld, dim, k))
        parts = [flatten(E.right_matrix(f, Obj((a,)))) for a in range(cat.n)]
        cols.append(Matrix.vstack(fld, 1, parts))
    rows = sum(E.space_dim(x, Obj((a,))) * E.space_dim(y, Obj((a,))) for a in range(cat.n))
    return kernel_basis(Matrix.hstack(fld, rows, cols))


def injective_ideal(E: Bimodule, x: Obj, y: Obj) -> Subspace:
    """Morphisms f: x -> y with E(-, f) = 0."""
    cat, fld = E.cat, E.field
    dim = cat.layout(x, y).dim
    cols = []
    for k in range(dim):
        f = cat.morphism(x, y, Matrix.unit(fld, dim, k))
        parts = [flatten(E.left_matrix(f, Obj((b,)))) for b in range(cat.n)]
        cols.append(Matrix.vstack(fld, 1, parts))
    rows = sum(E.space_dim(Obj((b,)), x) * E.space_dim(Obj((b,)), y) for b in range(cat.n))
    return kernel_basis(Matrix.hstack(fld, rows, cols))


@dataclass
class StableHom:
    dim: int
    projection: Matrix
    section: Matrix
    ideal: Subspace


def stable_hom(E: Bimodule, x: Obj, y: Obj, ideal: str = "P") -> StableHom:
    """Hom(x, y) modulo the projective (``"P"``) or injective (``"I"``) ideal."""
    if ideal == "P":
        sub = projective_ideal(E, x, y)
    elif ideal == "I":
        sub = injective_ideal(E, x, y)
    else:
        raise FunctorError(f"unknown ideal {ideal!r}")
    proj, sec = cokernel_section(sub.basis)
    return StableHom(proj.rows, proj, sec, sub)


def ideal_errors(E: Bimodule, ideal: str = "P") -> list[str]:
    """Two-sidedness of the ideal on basis compositions between indecomposables."""
    cat = E.cat
    errs = []
    getter = projective_ideal if ideal == "P" else injective_ideal
    spaces = {(i, j): getter(E, Obj((i,)), Obj((j,))) for i in range(cat.n) for j in range(cat.n)}
    for i in range(cat.n):
        for j in range(cat.n):
            sub = spaces[i, j]
            for c in range(sub.dim):
                f = sub.basis.col(c)
                for k in range(cat.n):
                    for b in range(cat.hom_dim[j, k]):
                        g = cat.compose_basic(i, j, k, Matrix.unit(cat.field, cat.hom_dim[j, k], b), f)
                        if not spaces[i, k].contains(g):
                            errs.append(f"ideal {ideal} not closed under postcomposition at "
                                        f"{cat.labels[j, k][b]}")
                    for b in range(cat.hom_dim[k, i]):
                        g = cat.compose_basic(k, i, j, f, Matrix.unit(cat.field, cat.hom_dim[k, i], b))
                        if not spaces[k, j].contains(g):
                            errs.append(f"ideal {ideal} not closed under precomposition at "
                                        f"{cat.labels[k, i][b]}")
    return errs
