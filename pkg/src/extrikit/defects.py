"""Contravariant defects and their reflection properties.

Theta_delta = Im(delta_#: C(-, C) -> E(-, A)) is stored pointwise as a
submodule of E(-, A), together with the epi wp: C(-, C) -> Theta and the
inclusion i: Theta -> E(-, A).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .fincat import FinAddCategory, Morphism, Obj
from .funcat import (CModule, ModuleMorphism, NatSpace, module_cokernel, projective_ideal,
                     representable, submodule_from_bases)
from .linalg import Matrix, image_basis, kernel_basis, left_inverse, rank, solve


class DefectError(ValueError):
    pass


def _single(m: int) -> Obj:
    return Obj((m,))


def _pull(E, delta: Matrix, C: Obj, A: Obj, X: Obj) -> Matrix:
    cat = E.cat
    dim = cat.layout(X, C).dim
    cols = [E.right_matrix(cat.morphism(X, C, Matrix.unit(cat.field, dim, k)), A) @ delta
            for k in range(dim)]
    return Matrix.hstack(cat.field, E.space_dim(X, A), cols)


def _push(E, delta: Matrix, C: Obj, A: Obj, Y: Obj) -> Matrix:
    cat = E.cat
    dim = cat.layout(A, Y).dim
    cols = [E.left_matrix(cat.morphism(A, Y, Matrix.unit(cat.field, dim, k)), C) @ delta
            for k in range(dim)]
    return Matrix.hstack(cat.field, E.space_dim(C, Y), cols)


def _inv(b: Matrix) -> Matrix:
    return left_inverse(b) if b.cols else Matrix.zeros(b.field, 0, b.rows)


@dataclass
class Defect:
    E: object
    C: Obj
    A: Obj
    delta: Matrix
    module: CModule
    incl: ModuleMorphism
    wp: ModuleMorphism
    name: str = "Theta"

    @property
    def cat(self) -> FinAddCategory:
        return self.E.cat

    @property
    def dims(self) -> list:
        return list(self.module.dims)

    def is_zero(self) -> bool:
        return not any(self.module.dims)

    def errors(self) -> list[str]:
        cat, E = self.cat, self.E
        errs = []
        for m in range(cat.n):
            if self.incl.comps[m] @ self.wp.comps[m] != _pull(E, self.delta, self.C, self.A, _single(m)):
                errs.append(f"{self.name}: i o wp differs from delta_# at {cat.names[m]}")
        errs += [f"{self.name}: {e}" for e in self.incl.naturality_errors()]
        errs += [f"{self.name}: {e}" for e in self.wp.naturality_errors()]
        # vanishing on projective morphisms between indecomposables
        for i in range(cat.n):
            for j in range(cat.n):
                P = projective_ideal(E, _single(i), _single(j))
                for k in range(P.dim):
                    f = cat.morphism(_single(i), _single(j), P.basis.col(k))
                    if not self.module.map_of(f).is_zero():
                        errs.append(f"{self.name}: nonzero on a projective morphism "
                                    f"{cat.names[i]} -> {cat.names[j]}")
        return errs


def defect_module(E, delta: Matrix, C: Obj, A: Obj, name: str | None = None) -> Defect:
    cat = E.cat
    if delta.shape != (E.space_dim(C, A), 1):
        raise DefectError("extension vector has the wrong length")
    name = name or f"Theta({cat.obj_name(C)},{cat.obj_name(A)})"
    ambient = E.contravariant_slice(A)
    pulls = {m: _pull(E, delta, C, A, _single(m)) for m in range(cat.n)}
    bases = {m: image_basis(pulls[m]).basis for m in range(cat.n)}
    sub = submodule_from_bases(ambient, bases, name)
    wp = ModuleMorphism(representable(cat, C, "contra"), sub.module,
                        {m: _inv(bases[m]) @ pulls[m] for m in range(cat.n)})
    return Defect(E, C, A, delta, sub.module, sub.map, wp, name)


def defect_of(E, conf) -> Defect:
    return defect_module(E, conf.delta, conf.C, conf.A, name=f"Theta[{conf.id}]")


def eta(src: Defect, tgt: Defect, a: Morphism, c: Morphism) -> ModuleMorphism:
    """eta_(a,c): Theta_delta -> Theta_rho for a morphism of extensions (a, c): delta -> rho."""
    E = src.E
    if a.src != src.A or a.tgt != tgt.A or c.src != src.C or c.tgt != tgt.C:
        raise DefectError("(a, c) has the wrong endpoints")
    if E.left_matrix(a, src.C) @ src.delta != E.right_matrix(c, tgt.A) @ tgt.delta:
        raise DefectError("(a, c) is not a morphism of extensions: a_* delta != c^* rho")
    comps = {}
    for m in range(src.cat.n):
        moved = E.left_matrix(a, _single(m)) @ src.incl.comps[m]
        b = tgt.incl.comps[m]
        coords = _inv(b) @ moved
        if b @ coords != moved:
            raise DefectError("a_* does not map the defect into the target defect")
        comps[m] = coords
    mm = ModuleMorphism(src.module, tgt.module, comps)
    errs = mm.naturality_errors()
    if errs:
        raise DefectError(f"eta is not natural: {errs[0]}")
    return mm


# stable Yoneda


def stable_yoneda_errors(theta: Defect) -> list[str]:
    """For dominant theta: Ker(theta_#) = P(-, C) pointwise, so Theta = stable C(-, C)."""
    E, cat = theta.E, theta.cat
    errs = []
    for m in range(cat.n):
        M = _single(m)
        ker = kernel_basis(_pull(E, theta.delta, theta.C, theta.A, M))
        P = projective_ideal(E, M, theta.C)
        hom = cat.layout(M, theta.C).dim
        if theta.module.dims[m] != hom - P.dim:
            errs.append(f"{theta.name}: dim at {cat.names[m]} is {theta.module.dims[m]}, "
                        f"stable Hom has dim {hom - P.dim}")
        elif ker != P:
            errs.append(f"{theta.name}: kernel at {cat.names[m]} is not the projective ideal")
    return errs


# reflections


def _precompose_matrix(alpha: ModuleMorphism, src: NatSpace, tgt: NatSpace) -> Matrix:
    """psi -> psi o alpha from Nat(alpha.tgt, G) to Nat(alpha.src, G)."""
    fld = alpha.src.field
    cols = []
    for k in range(src.dim):
        comps = src.components(src.basis.col(k))
        cols.append(tgt.coordinates({m: comps[m] @ alpha.comps[m] for m in comps}))
    return Matrix.hstack(fld, tgt.dim, cols)


def _postcompose_matrix(beta: ModuleMorphism, src: NatSpace, tgt: NatSpace) -> Matrix:
    """psi -> beta o psi from Nat(F, beta.src) to Nat(F, beta.tgt)."""
    fld = beta.src.field
    cols = []
    for k in range(src.dim):
        comps = src.components(src.basis.col(k))
        cols.append(tgt.coordinates({m: beta.comps[m] @ comps[m] for m in comps}))
    return Matrix.hstack(fld, tgt.dim, cols)


@dataclass
class ReflectionResult:
    checked: int = 0
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def merge(self, other: "ReflectionResult") -> "ReflectionResult":
        self.checked += other.checked
        self.failures.extend(other.failures)
        return self


def universal_check(unit: ModuleMorphism, samples: Sequence[Defect], label: str) -> ReflectionResult:
    """Every phi: F -> Theta factors uniquely as eta o unit, for each sampled Theta."""
    res = ReflectionResult()
    for th in samples:
        through = NatSpace(unit.tgt, th.module)
        direct = NatSpace(unit.src, th.module)
        mat = _precompose_matrix(unit, through, direct)
        for k in range(direct.dim):
            res.checked += 1
            if solve(mat, Matrix.unit(unit.src.field, direct.dim, k)) is None:
                res.failures.append(f"{label}: a map to {th.name} does not factor")
                break
        res.checked += 1
        if kernel_basis(mat).dim:
            res.failures.append(f"{label}: factorization through {th.name} is not unique")
    return res


def reflection_check(theta: Defect, samples: Sequence[Defect]) -> ReflectionResult:
    """(Theta_theta, wp_theta) reflects C(-, C) against the sampled defects."""
    res = ReflectionResult()
    cat = theta.cat
    for th in samples:
        nat = NatSpace(theta.wp.src, th.module)
        res.checked += 1
        if nat.dim != sum(th.module.dims[c] for c in theta.C):
            res.failures.append(f"Yoneda count fails for {th.name}")
    return res.merge(universal_check(theta.wp, samples, theta.name))


def table_defects(inst) -> list[Defect]:
    return [defect_of(inst.E, conf) for conf in inst.conflations]


# dominant data for sums


def _sum_morphism(cat: FinAddCategory, morphs: Sequence[Morphism]) -> Morphism:
    src = Obj(sum((f.src.summands for f in morphs), ()))
    tgt = Obj(sum((f.tgt.summands for f in morphs), ()))
    blocks, so, to = {}, 0, 0
    for f in morphs:
        for s in range(len(f.src)):
            for t in range(len(f.tgt)):
                b = f.block(s, t)
                if not b.is_zero():
                    blocks[so + s, to + t] = b
        so += len(f.src)
        to += len(f.tgt)
    return cat.from_blocks(src, tgt, blocks)


@dataclass
class SumConflation:
    A: Obj
    B: Obj
    C: Obj
    x: Morphism
    y: Morphism
    delta: Matrix


def dominant_for(inst, C: Obj) -> SumConflation:
    """Direct sum of the designated dominant conflations of the summands of C."""
    cat, E = inst.cat, inst.E
    confs = []
    for c in C:
        conf = inst.dominant_conf(c)
        if conf is None:
            raise DefectError(f"no designated dominant conflation for {cat.names[c]}")
        confs.append(conf)
    A, Cs, delta = Obj(()), Obj(()), Matrix.zeros(inst.field, 0, 1)
    for conf in confs:
        delta = E.direct_sum_extension(Cs, A, delta, conf.C, conf.A, conf.delta)
        A, Cs = A + conf.A, Cs + conf.C
    if not confs:
        z = Obj(())
        zero = cat.zero(z, z)
        return SumConflation(z, z, z, zero, zero, delta)
    x = _sum_morphism(cat, [c.x for c in confs])
    y = _sum_morphism(cat, [c.y for c in confs])
    return SumConflation(A, x.tgt, Cs, x, y, delta)


# finitely presented functors


@dataclass
class FpPresentation:
    """F = Cok(C(-, Cp) -> C(-, C)) induced by c: Cp -> C."""
    Cp: Obj
    C: Obj
    c: Morphism

    def errors(self) -> list[str]:
        if self.c.src != self.Cp or self.c.tgt != self.C:
            return ["presentation morphism has the wrong endpoints"]
        return []

    def functor(self, cat: FinAddCategory):
        phi = ModuleMorphism(representable(cat, self.Cp, "contra"), representable(cat, self.C, "contra"),
                             {m: cat.postcompose_matrix(self.c, _single(m)) for m in range(cat.n)})
        return module_cokernel(phi)


@dataclass
class FpReflection:
    functor: CModule
    gamma: CModule
    unit: ModuleMorphism
    a: Morphism
    b: Morphism
    eta: ModuleMorphism
    check: ReflectionResult


def reflect_fp_functor(inst, pres: FpPresentation, samples: Sequence[Defect] | None = None
                       ) -> FpReflection:
    """Gamma_F = Cok(eta_(a,c): Theta_theta' -> Theta_theta) with unit gamma_F: F -> Gamma_F."""
    errs = pres.errors()
    if errs:
        raise DefectError(errs[0])
    cat, E = inst.cat, inst.E
    dom, domp = dominant_for(inst, pres.C), dominant_for(inst, pres.Cp)
    # a: F' -> F with a_* theta' = c^* theta
    target = E.right_matrix(pres.c, dom.A) @ dom.delta
    sol = solve(_push(E, domp.delta, pres.Cp, domp.A, dom.A), target)
    if sol is None:
        raise DefectError("no a with a_* theta' = c^* theta: dominance data is corrupt")
    a = cat.morphism(domp.A, dom.A, sol.particular)
    # b: B' -> B with b x' = x a and y b = c y'
    lhs = Matrix.vstack(inst.field, cat.layout(domp.B, dom.B).dim,
                        [cat.precompose_matrix(domp.x, dom.B), cat.postcompose_matrix(dom.y, domp.B)])
    rhs = Matrix.vstack(inst.field, 1, [cat.compose(dom.x, a).vec, cat.compose(pres.c, domp.y).vec])
    solb = solve(lhs, rhs)
    if solb is None:
        raise DefectError("no middle morphism completes (a, c): lifting system unsolvable")
    b = cat.morphism(domp.B, dom.B, solb.particular)
    th = defect_module(E, dom.delta, dom.C, dom.A, name=f"Theta_dom({cat.obj_name(pres.C)})")
    thp = defect_module(E, domp.delta, domp.C, domp.A, name=f"Theta_dom({cat.obj_name(pres.Cp)})")
    e = eta(thp, th, a, pres.c)
    cok = module_cokernel(e)
    F = pres.functor(cat)
    comps = {}
    for m in range(cat.n):
        through = cok.map.comps[m] @ th.wp.comps[m]
        if not (through @ cat.postcompose_matrix(pres.c, _single(m))).is_zero():
            raise DefectError("unit does not descend to the presented functor")
        comps[m] = through @ F.bases[m]
    unit = ModuleMorphism(F.module, cok.module, comps)
    nat = unit.naturality_errors()
    if nat:
        raise DefectError(f"unit is not natural: {nat[0]}")
    if samples is None:
        samples = table_defects(inst)
    check = universal_check(unit, samples, f"Gamma[{cat.obj_name(pres.Cp)}->{cat.obj_name(pres.C)}]")
    return FpReflection(F.module, cok.module, unit, a, b, e, check)


def round_trip_errors(inst, conf, samples: Sequence[Defect] | None = None) -> list[str]:
    """Reflecting Theta_delta = Cok(C(-, y)) returns Theta_delta up to the canonical iso."""
    cat = inst.cat
    d = defect_of(inst.E, conf)
    ref = reflect_fp_functor(inst, FpPresentation(conf.B, conf.C, conf.y), samples)
    errs = list(ref.check.failures)
    F = FpPresentation(conf.B, conf.C, conf.y).functor(cat)
    to_d = ModuleMorphism(F.module, d.module, {m: d.wp.comps[m] @ F.bases[m] for m in range(cat.n)})
    through = NatSpace(ref.gamma, d.module)
    direct = NatSpace(F.module, d.module)
    mat = _precompose_matrix(ref.unit, through, direct)
    sol = solve(mat, direct.coordinates(to_d.comps))
    if sol is None:
        return errs + [f"{conf.id}: canonical map does not factor through Gamma"]
    psi = through.components(through.basis @ sol.particular)
    for m in range(cat.n):
        p = psi[m]
        if p.rows != p.cols or rank(p) != p.rows:
            errs.append(f"{conf.id}: Gamma -> Theta is not invertible at {cat.names[m]}")
    return errs


# enough projectives in the defect category


def covering_epis(inst) -> list[tuple[str, Defect, Defect, ModuleMorphism]]:
    """eta_(a, id): Theta_theta -> Theta_delta for each table conflation, theta dominant for C."""
    cat, E = inst.cat, inst.E
    out = []
    for conf in inst.conflations:
        dom = dominant_for(inst, conf.C)
        sol = solve(_push(E, dom.delta, conf.C, dom.A, conf.A), conf.delta)
        if sol is None:
            raise DefectError(f"{conf.id}: extension not reached from the dominant extension")
        a = cat.morphism(dom.A, conf.A, sol.particular)
        th = defect_module(E, dom.delta, dom.C, dom.A, name=f"Theta_dom({cat.obj_name(conf.C)})")
        d = defect_of(E, conf)
        out.append((conf.id, th, d, eta(th, d, a, cat.identity(conf.C))))
    return out


def projectivity_errors(theta: Defect, epis: Sequence[ModuleMorphism]) -> list[str]:
    """Every map Theta_theta -> tgt lifts along each sampled epi."""
    errs = []
    for epi in epis:
        if any(rank(epi.comps[m]) != epi.tgt.dims[m] for m in range(theta.cat.n)):
            errs.append(f"{epi.src.name} -> {epi.tgt.name} is not an epimorphism")
            continue
        src = NatSpace(theta.module, epi.src)
        tgt = NatSpace(theta.module, epi.tgt)
        mat = _postcompose_matrix(epi, src, tgt)
        if rank(mat) != tgt.dim:
            errs.append(f"{theta.name}: a map to {epi.tgt.name} does not lift to {epi.src.name}")
    return errs


def defect_report(inst, reflect: bool = False) -> dict:
    cat, E = inst.cat, inst.E
    table = table_defects(inst)
    out = {"defects": [], "stable_yoneda": [], "errors": []}
    for conf, d in zip(inst.conflations, table):
        out["defects"].append({"conflation": conf.id, "dims": dict(zip(cat.names, d.dims))})
        out["errors"] += d.errors()
    thetas = []
    if inst.has_dominant_data:
        for i in range(cat.n):
            conf = inst.dominant_conf(i)
            th = defect_of(E, conf)
            thetas.append(th)
            errs = stable_yoneda_errors(th)
            out["stable_yoneda"].append({"object": cat.names[i], "conflation": conf.id,
                                         "ok": not errs, "errors": errs})
    if reflect and thetas:
        res = ReflectionResult()
        for th in thetas:
            res.merge(reflection_check(th, table))
        trips = []
        for conf in inst.conflations:
            trips += round_trip_errors(inst, conf, table)
        epis = covering_epis(inst)
        proj = []
        for th in thetas:
            proj += projectivity_errors(th, [e for _, _, _, e in epis])
        out["reflection"] = {"checked": res.checked, "failures": res.failures,
                             "round_trip_failures": trips, "projectivity_failures": proj}
    return out
