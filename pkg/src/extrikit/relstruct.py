"""Cohomology of the complexes Gamma_F(delta) and a witness-bounded relative substructure.

A connected sequence F^n is laid out as

    ... -> F^n(-,A) -> F^n(-,B) -> F^n(-,C) -> F^{n+1}(-,A) -> ...

with F^n(-,A), F^n(-,B), F^n(-,C) in degrees 3n-2, 3n-1, 3n.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .fincat import Obj
from .linalg import Matrix, Subspace, image_basis, rank, sum_subspaces
from .negext import NegTower
from .posext import Conflation, ExtTower


class RelstructError(ValueError):
    pass


def _single(m: int) -> Obj:
    return Obj((m,))


class ConnectedSequence:
    """Pointwise data of a connected sequence F^n(-, X), evaluated at an indecomposable m.

    Subclasses supply the term dimensions, the maps induced by morphisms in
    the second variable and the connecting maps F^n(-, C) -> F^{n+1}(-, A).
    """

    name = "F"

    def dim(self, n: int, m: int, X: Obj) -> int:
        raise NotImplementedError

    def induced(self, n: int, m: int, f) -> Matrix:
        raise NotImplementedError

    def connecting(self, n: int, m: int, conf: Conflation) -> Matrix:
        raise NotImplementedError


class EISequence(ConnectedSequence):
    """E_I^{-n} for n > 0, Hom in degree 0, E^n for n > 0."""

    name = "E_I"

    def __init__(self, tower: ExtTower, neg: NegTower | None = None):
        self.tower = tower
        self.neg = neg or NegTower(tower)

    def dim(self, n, m, X):
        if n < 0:
            return self.neg.dim_I(-n, _single(m), X)
        return self.tower.level(n).space_dim(_single(m), X)

    def induced(self, n, m, f):
        if n < 0:
            return self.neg.map_I(-n, _single(m), f)
        return self.tower.level(n).left_matrix(f, _single(m))

    def connecting(self, n, m, conf):
        if n < 0:
            return self.neg.connecting_I(conf.delta, conf.C, conf.A, -n - 1, _single(m))
        return self.tower.cup_left_matrix(conf.delta, 1, conf.C, conf.A, n, _single(m))


class PositiveSequence(EISequence):
    """E^n for n >= 0, truncated to zero in negative degrees."""

    name = "E_pos"

    def dim(self, n, m, X):
        return 0 if n < 0 else super().dim(n, m, X)

    def induced(self, n, m, f):
        if n < 0:
            return Matrix.zeros(self.tower.field, 0, 0)
        return super().induced(n, m, f)

    def connecting(self, n, m, conf):
        if n < 0:
            return Matrix.zeros(self.tower.field, self.dim(n + 1, m, conf.A), 0)
        return super().connecting(n, m, conf)


def make_sequence(kind: str, tower: ExtTower, neg: NegTower | None = None) -> ConnectedSequence:
    if kind == "E_I":
        return EISequence(tower, neg)
    if kind in ("positive", "E_pos"):
        return PositiveSequence(tower, neg)
    raise RelstructError(f"unknown sequence {kind!r}")


def _term(seq: ConnectedSequence, conf: Conflation, d: int, m: int) -> int:
    n, p = divmod(d + 2, 3)
    return seq.dim(n, m, (conf.A, conf.B, conf.C)[p])


def _out(seq: ConnectedSequence, conf: Conflation, d: int, m: int) -> Matrix:
    n, p = divmod(d + 2, 3)
    if p == 0:
        return seq.induced(n, m, conf.x)
    if p == 1:
        return seq.induced(n, m, conf.y)
    return seq.connecting(n, m, conf)


@dataclass
class GammaCohomology:
    conf_id: str
    sequence: str
    window: int
    dims: dict = dc_field(default_factory=dict)

    @property
    def acyclic(self) -> bool:
        return not any(any(v) for v in self.dims.values())

    def nonzero_degrees(self) -> list[int]:
        return sorted(d for d, v in self.dims.items() if any(v))

    def to_json(self, cat) -> dict:
        return {"conflation": self.conf_id, "sequence": self.sequence, "window": self.window,
                "acyclic": self.acyclic,
                "H": {str(d): dict(zip(cat.names, v)) for d, v in sorted(self.dims.items())}}


def gamma_cohomology(seq: ConnectedSequence, conf: Conflation, window: int = 6,
                     cat=None) -> GammaCohomology:
    """Pointwise dims of H^d(Gamma(delta)) for -window <= d <= window."""
    if window < 0:
        raise RelstructError("window must be non-negative")
    cat = cat or getattr(seq, "tower").cat
    out = GammaCohomology(conf.id, seq.name, window)
    for m in range(cat.n):
        maps = {d: _out(seq, conf, d, m) for d in range(-window - 1, window + 1)}
        for d in range(-window - 1, window):
            g, f = maps[d + 1], maps[d]
            if g.cols and f.rows and not (g @ f).is_zero():
                raise RelstructError(f"{conf.id}: Gamma is not a complex at degree {d + 1} "
                                     f"({cat.names[m]})")
        for d in range(-window, window + 1):
            dim = _term(seq, conf, d, m)
            val = dim - rank(maps[d]) - rank(maps[d - 1])
            out.dims.setdefault(d, [0] * cat.n)[m] = val
    return out


@dataclass
class WitnessSubfunctor:
    spaces: dict
    acyclic: list
    non_acyclic: list
    excluded: list
    proper: bool
    caveats: list = dc_field(default_factory=list)

    def dims(self) -> dict:
        return {k: s.dim for k, s in self.spaces.items()}

    def to_json(self, cat) -> dict:
        return {
            "dims": {f"{cat.names[c]}|{cat.names[a]}": s.dim for (c, a), s in sorted(self.spaces.items())},
            "acyclic": list(self.acyclic),
            "non_acyclic": list(self.non_acyclic),
            "excluded": list(self.excluded),
            "proper": self.proper,
            "caveats": list(self.caveats),
        }


def _blocks(E, delta: Matrix, C: Obj, A: Obj):
    lay = E.layout(C, A)
    for s, c in enumerate(C):
        for t, a in enumerate(A):
            yield c, a, lay.block(delta, s, t)


def closure(E, seeds: dict) -> dict:
    """Smallest sub-bifunctor of E containing the seed vectors at indecomposable pairs."""
    cat, fld = E.cat, E.field
    n = cat.n
    spaces = {(c, a): image_basis(Matrix.hstack(fld, E.dim(c, a), seeds.get((c, a), [])))
              for c in range(n) for a in range(n)}
    changed = True
    while changed:
        changed = False
        for (c, a), sp in list(spaces.items()):
            if not sp.dim:
                continue
            for j in range(n):
                for k in range(cat.hom_dim[a, j]):
                    moved = E.left(c, a, j, k) @ sp.basis
                    if not spaces[c, j].contains(moved):
                        spaces[c, j] = sum_subspaces(spaces[c, j], image_basis(moved))
                        changed = True
                for k in range(cat.hom_dim[j, c]):
                    moved = E.right(j, c, a, k) @ sp.basis
                    if not spaces[j, a].contains(moved):
                        spaces[j, a] = sum_subspaces(spaces[j, a], image_basis(moved))
                        changed = True
    return spaces


def subbifunctor_errors(E, spaces: dict) -> list[str]:
    cat = E.cat
    errs = []
    for (c, a), sp in spaces.items():
        for j in range(cat.n):
            for k in range(cat.hom_dim[a, j]):
                if not spaces[c, j].contains(E.left(c, a, j, k) @ sp.basis):
                    errs.append(f"not stable under {cat.labels[a, j][k]} on the left at "
                                f"({cat.names[c]}, {cat.names[a]})")
            for k in range(cat.hom_dim[j, c]):
                if not spaces[j, a].contains(E.right(j, c, a, k) @ sp.basis):
                    errs.append(f"not stable under {cat.labels[j, c][k]} on the right at "
                                f"({cat.names[c]}, {cat.names[a]})")
    return errs


def contains_extension(E, spaces: dict, delta: Matrix, C: Obj, A: Obj) -> bool:
    return all(spaces[c, a].contains(v) for c, a, v in _blocks(E, delta, C, A))


def acyclic_witness_subfunctor(inst, seq: ConnectedSequence, window: int = 6) -> WitnessSubfunctor:
    """Sub-bifunctor generated by the table extensions whose Gamma is acyclic in the window."""
    if not inst.conflations:
        raise RelstructError("empty conflation table")
    E = inst.E
    seeds, acyc, bad = {}, [], []
    for conf in inst.conflations:
        if gamma_cohomology(seq, conf, window, inst.cat).acyclic:
            acyc.append(conf.id)
            for c, a, v in _blocks(E, conf.delta, conf.C, conf.A):
                seeds.setdefault((c, a), []).append(v)
        else:
            bad.append(conf.id)
    spaces = closure(E, seeds)
    errs = subbifunctor_errors(E, spaces)
    if errs:
        raise RelstructError(errs[0])
    excluded = [conf.id for conf in inst.conflations
                if conf.id in bad and not contains_extension(E, spaces, conf.delta, conf.C, conf.A)]
    proper = any(sp.dim < E.dim(*k) for k, sp in spaces.items())
    caveats = ["witness-bounded: generated by table extensions only; a lower approximation "
               "of the largest relative theory",
               f"acyclicity tested on degrees -{window}..{window}"]
    return WitnessSubfunctor(spaces, acyc, bad, excluded, proper, caveats)


def relstruct_report(inst, kind: str = "positive", window: int = 6) -> dict:
    seq = make_sequence(kind, inst.tower)
    cat = inst.cat
    table = [gamma_cohomology(seq, conf, window, cat) for conf in inst.conflations]
    sub = acyclic_witness_subfunctor(inst, seq, window)
    return {"sequence": seq.name, "window": window,
            "gamma": [g.to_json(cat) for g in table],
            "subfunctor": sub.to_json(cat)}
