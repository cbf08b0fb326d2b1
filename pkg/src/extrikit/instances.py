"""Instance bundles: schema, loading, validation and the fixture builders.

Shipped fixtures live in ``extrikit/data`` and are regenerated with
``python3 -m extrikit.instances``.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .complexes import Complex, ComplexModel, path_category
from .fincat import CategoryError, FinAddCategory, Obj
from .funcat import Bimodule, FunctorError, zero_bimodule
from .linalg import Field, Matrix, field
from .posext import (Conflation, ExtTower, ResolutionChain, SatelliteTower, TowerError,
                     find_codominant_extension, find_dominant_extension, les_check,
                     verify_codominant, verify_dominant)

SCHEMA_VERSION = 1
FIXTURES = ("split1", "split2", "pt", "twoterm_k", "twoterm_a2", "twoterm_a3", "a4sub",
            "extclosed_m")


class InstanceError(ValueError):
    pass


@dataclass(eq=False)
class ExtriInstance:
    name: str
    cat: FinAddCategory
    E: Bimodule
    conflations: list
    designated_dominant: dict = dc_field(default_factory=dict)
    designated_codominant: dict = dc_field(default_factory=dict)
    resolutions: dict = dc_field(default_factory=dict)
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self._by_id = {}
        for c in self.conflations:
            if c.id in self._by_id:
                raise InstanceError(f"duplicate conflation id {c.id!r}")
            self._by_id[c.id] = c

    @property
    def field(self) -> Field:
        return self.cat.field

    def conf(self, cid: str) -> Conflation:
        try:
            return self._by_id[cid]
        except KeyError:
            raise InstanceError(f"unknown conflation {cid!r}") from None

    def dominant_conf(self, i: int) -> Conflation | None:
        cid = self.designated_dominant.get(i)
        return None if cid is None else self.conf(cid)

    def codominant_conf(self, i: int) -> Conflation | None:
        cid = self.designated_codominant.get(i)
        return None if cid is None else self.conf(cid)

    @property
    def has_dominant_data(self) -> bool:
        return len(self.designated_dominant) == self.cat.n

    @property
    def has_codominant_data(self) -> bool:
        return len(self.designated_codominant) == self.cat.n

    @cached_property
    def tower(self) -> ExtTower:
        return ExtTower(self.cat, self.E)

    @cached_property
    def satellite(self) -> SatelliteTower:
        if not self.has_dominant_data:
            raise InstanceError(f"{self.name} lacks designated dominant conflations")
        return SatelliteTower(self.cat, self.E,
                              {i: self.dominant_conf(i) for i in range(self.cat.n)})

    def resolution_chain(self, i: int) -> ResolutionChain:
        ids = self.resolutions.get(i)
        if ids is None:
            raise InstanceError(f"no resolution chain for {self.cat.names[i]}")
        return ResolutionChain(Obj((i,)), [self.conf(c) for c in ids])

    # serialization

    def to_json(self) -> dict:
        cat = self.cat
        nm = cat.names
        data = {"schema": SCHEMA_VERSION, "name": self.name,
                "field": {"characteristic": self.field.characteristic}}
        data.update(cat.to_json())
        data.update(self.E.to_json())
        data["conflations"] = [c.to_json(cat) for c in self.conflations]
        data["designated_dominant"] = {nm[i]: c for i, c in sorted(self.designated_dominant.items())}
        data["designated_codominant"] = {nm[i]: c
                                         for i, c in sorted(self.designated_codominant.items())}
        data["resolutions"] = {nm[i]: list(c) for i, c in sorted(self.resolutions.items())}
        data["meta"] = self.meta
        return data

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1, ensure_ascii=False) + "\n"

    def content_hash(self) -> str:
        data = self.to_json()
        data.pop("meta", None)
        blob = json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    @classmethod
    def from_json(cls, data: Mapping, characteristic: int | None = None) -> "ExtriInstance":
        if int(data.get("schema", SCHEMA_VERSION)) != SCHEMA_VERSION:
            raise InstanceError(f"unsupported schema version {data.get('schema')}")
        char = data["field"]["characteristic"] if characteristic is None else characteristic
        fld = field(int(char))
        try:
            cat = FinAddCategory.from_json(fld, data)
            E = Bimodule.from_json(cat, data)
            confs = [Conflation.from_json(cat, c) for c in data.get("conflations", [])]
        except (KeyError, TypeError, ZeroDivisionError) as exc:
            raise InstanceError(f"malformed bundle: {exc!r}") from exc
        idx = cat.index
        return cls(data.get("name", "unnamed"), cat, E, confs,
                   {idx(k): v for k, v in data.get("designated_dominant", {}).items()},
                   {idx(k): v for k, v in data.get("designated_codominant", {}).items()},
                   {idx(k): list(v) for k, v in data.get("resolutions", {}).items()},
                   dict(data.get("meta", {})))


# validation


@dataclass
class ValidationReport:
    instance: str
    checks: list = dc_field(default_factory=list)
    errors: list = dc_field(default_factory=list)
    caveats: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def record(self, name: str, errs: Sequence[str]) -> None:
        self.checks.append((name, not errs))
        self.errors.extend(f"{name}: {e}" for e in errs)

    def to_json(self) -> dict:
        return {"instance": self.instance, "ok": self.ok,
                "checks": [{"name": n, "ok": ok} for n, ok in self.checks],
                "errors": list(self.errors), "caveats": list(self.caveats)}


def validate_instance(inst: ExtriInstance, les_nmax: int = 2) -> ValidationReport:
    """Check every necessary condition carried by the bundle data."""
    rep = ValidationReport(inst.name)
    cat, E = inst.cat, inst.E
    rep.record("category", cat.validate())
    rep.record("bimodule", E.validate())
    if not rep.ok:
        return rep
    errs = []
    for c in inst.conflations:
        errs += c.errors(E)
        if c.dominant and not verify_dominant(E, c):
            errs.append(f"{c.id}: flagged dominant but delta^# is not onto")
        if c.codominant and not verify_codominant(E, c):
            errs.append(f"{c.id}: flagged codominant but delta_# is not onto")
    rep.record("conflations", errs)
    errs = []
    for table, verify, end in ((inst.designated_dominant, verify_dominant, "C"),
                               (inst.designated_codominant, verify_codominant, "A")):
        for i, cid in sorted(table.items()):
            try:
                c = inst.conf(cid)
            except InstanceError as exc:
                errs.append(str(exc))
                continue
            if getattr(c, end) != Obj((i,)):
                errs.append(f"{cid} does not end at {cat.names[i]}")
            elif not verify(E, c):
                errs.append(f"{cid} is designated for {cat.names[i]} but fails the check")
    rep.record("designated", errs)
    errs = []
    for i in sorted(inst.resolutions):
        try:
            errs += [f"{cat.names[i]}: {e}" for e in inst.resolution_chain(i).errors(inst.tower)]
        except InstanceError as exc:
            errs.append(str(exc))
    rep.record("resolutions", errs)
    errs = []
    for c in inst.conflations:
        errs += les_check(inst.tower, c, les_nmax).violations
    rep.record(f"long exact sequences (n <= {les_nmax})", errs)
    rep.caveats.append("only necessary conditions are checked; the axioms (ET3) and (ET4) "
                       "are not certified from finite data")
    return rep


# loading


def _field_override() -> int | None:
    raw = os.environ.get("EXTRIKIT_FIELD")
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        raise InstanceError(f"EXTRIKIT_FIELD must be an integer, got {raw!r}") from None


def load_instance(path, characteristic: int | None = None) -> ExtriInstance:
    if characteristic is None:
        characteristic = _field_override()
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: {exc}") from exc
    return ExtriInstance.from_json(data, characteristic)


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("extrikit") / "data" / f"{name}.json"))


def load_fixture(name_or_path: str, characteristic: int | None = None) -> ExtriInstance:
    """A shipped fixture by name, or any bundle by file path."""
    p = Path(name_or_path)
    if p.suffix == ".json" or p.exists():
        return load_instance(p, characteristic)
    fp = fixture_path(name_or_path)
    if not fp.exists():
        raise InstanceError(f"unknown fixture {name_or_path!r}; known: {', '.join(FIXTURES)}")
    return load_instance(fp, characteristic)


# building blocks shared by the builders


class _Table:
    def __init__(self, cat: FinAddCategory, E: Bimodule):
        self.cat, self.E = cat, E
        self.confs: list = []
        self._keys: dict = {}

    def add(self, conf: Conflation) -> str:
        cat = self.cat
        key = json.dumps([cat.obj_json(conf.A), cat.obj_json(conf.B), cat.obj_json(conf.C),
                          conf.x.blocks_json(), conf.y.blocks_json(),
                          [cat.field.to_json(v) for v in conf.delta.vector()]
                          if conf.delta.rows else []], sort_keys=True)
        if key in self._keys:
            return self._keys[key]
        conf.dominant = verify_dominant(self.E, conf)
        conf.codominant = verify_codominant(self.E, conf)
        self.confs.append(conf)
        self._keys[key] = conf.id
        return conf.id


def split_conflation(cat: FinAddCategory, E: Bimodule, A: Obj, C: Obj, cid: str) -> Conflation:
    """A -> A + C -> C with delta = 0, middle term canonically ordered."""
    B = A + C
    x = cat.inclusion([A, C], 0)
    y = cat.projection([A, C], 1)
    can = cat.to_canonical(B)
    back = cat.inverse(can)
    return Conflation(cid, A, B.canonical(), C, cat.compose(can, x), cat.compose(y, back),
                      E.zero(C, A))


def _resolutions(inst_tower: ExtTower, cat: FinAddCategory, dominant: Mapping,
                 table: _Table) -> dict:
    """Length <= 1 chains: [] for projectives, [dom(Y)] when its ends are projective."""
    out = {}
    for i in range(cat.n):
        if inst_tower.is_projective(Obj((i,))):
            out[i] = []
            continue
        conf = next(c for c in table.confs if c.id == dominant[i])
        if inst_tower.is_projective(conf.B) and inst_tower.is_projective(conf.A):
            out[i] = [conf.id]
    return out


def build_split(cat: FinAddCategory, name: str = "split", meta: Mapping | None = None
                ) -> ExtriInstance:
    E = zero_bimodule(cat)
    table = _Table(cat, E)
    n = cat.n
    names = cat.names
    dom, codom = {}, {}
    for i in range(n):
        I = Obj((i,))
        dom[i] = table.add(split_conflation(cat, E, Obj(), I, f"dom({names[i]})"))
        codom[i] = table.add(split_conflation(cat, E, I, Obj(), f"codom({names[i]})"))
    for a in range(n):
        for c in range(n):
            table.add(split_conflation(cat, E, Obj((a,)), Obj((c,)),
                                       f"split({names[a]},{names[c]})"))
    res = {i: [] for i in range(n)}
    return ExtriInstance(name, cat, E, table.confs, dom, codom, res, dict(meta or {}))


def _scalar_category(fld: Field, names: Sequence[str]) -> FinAddCategory:
    """Indecomposables with End = K and no maps between distinct ones."""
    n = len(names)
    one = Matrix.from_rows(fld, [[1]])
    return FinAddCategory(fld, names, {(i, i): 1 for i in range(n)},
                          {(i, i, i): one for i in range(n)},
                          {i: Matrix.column(fld, [1]) for i in range(n)})


def build_split1(fld: Field | None = None) -> ExtriInstance:
    return build_split(_scalar_category(fld or field(0), ["X"]), "split1")


def build_split2(fld: Field | None = None) -> ExtriInstance:
    return build_split(_scalar_category(fld or field(0), ["X", "Y"]), "split2")


def build_periodic_point(fld: Field | None = None) -> ExtriInstance:
    """One object T with End(T) = K and E(T, T) = K acted on by scalars."""
    fld = fld or field(0)
    cat = _scalar_category(fld, ["T"])
    one = Matrix.from_rows(fld, [[1]])
    E = Bimodule(cat, {(0, 0): 1}, {(0, 0, 0, 0): one}, {(0, 0, 0, 0): one},
                 labels={(0, 0): ("delta_gen",)})
    T, Z = Obj((0,)), Obj()
    gen = Conflation("gen", T, Z, T, cat.zero(T, Z), cat.zero(Z, T), Matrix.column(fld, [1]))
    table = _Table(cat, E)
    table.add(gen)
    table.add(split_conflation(cat, E, T, T, "split(T,T)"))
    meta = {"model": "1-periodic derived category of K-vector spaces; T[1] = T"}
    return ExtriInstance("pt", cat, E, table.confs, {0: "gen"}, {0: "gen"}, {}, meta)


def _realize(model: ComplexModel, delta: Matrix, C: Obj, A: Obj, cid: str,
             window: tuple[int, int] | None):
    cat = model.cat
    B, x, y, SA, SC = model.cocone(delta, C, A)
    if window is not None and any(not window[0] <= d <= window[1] for d in B.degrees()):
        raise InstanceError(f"{cid}: cocone leaves the degree window {window}")
    S, SS, phi, phi_inv = model.decompose(B)
    xs = model.chain_to_morphism(phi_inv.compose(x), A, S)
    ys = model.chain_to_morphism(y.compose(phi), S, C)
    conf = Conflation(cid, A, S, C, xs, ys, delta)
    prov = {"cocone": B.to_json(), "phi": phi.to_json(), "phi_inv": phi_inv.to_json(),
            "middle": cat.obj_name(S)}
    return conf, prov


def build_from_complexes(P: FinAddCategory, indecs: Sequence[tuple[str, Complex]], name: str,
                         window: tuple[int, int] | None = None, meta: Mapping | None = None
                         ) -> tuple[ExtriInstance, dict]:
    """Bundle for the full subcategory of K^b(proj) on the given indecomposables.

    Conflations are cocones of chain maps C -> A[1] decomposed into the listed
    indecomposables; the category must be closed under these cocones.
    """
    model = ComplexModel(P, indecs)
    cat, E = model.cat, model.E
    fld = cat.field
    names = cat.names
    table = _Table(cat, E)
    provenance = {}

    def add(delta, C, A, cid):
        conf, prov = _realize(model, delta, C, A, cid, window)
        got = table.add(conf)
        provenance.setdefault(got, prov)
        return got

    for c in range(cat.n):
        for a in range(cat.n):
            for k in range(E.dim(c, a)):
                add(Matrix.unit(fld, E.dim(c, a), k), Obj((c,)), Obj((a,)),
                    f"ext({names[c]},{names[a]})#{k}")
    dom, codom = {}, {}
    for i in range(cat.n):
        I = Obj((i,))
        F, theta = find_dominant_extension(E, i)
        dom[i] = add(theta, I, F, f"dom({names[i]})")
        J, iota = find_codominant_extension(E, i)
        codom[i] = add(iota, J, I, f"codom({names[i]})")
    for i in range(cat.n):
        table.add(split_conflation(cat, E, Obj((i,)), Obj((i,)),
                                   f"split({names[i]},{names[i]})"))
    tower = ExtTower(cat, E)
    res = _resolutions(tower, cat, dom, table)
    info = dict(meta or {})
    info["complexes"] = {nm: X.to_json() for nm, X in indecs}
    info["projective_category"] = {"indecomposables": list(P.names)}
    inst = ExtriInstance(name, cat, E, table.confs, dom, codom, res, info)
    return inst, provenance


def _stalk(P: FinAddCategory, i: int, d: int, name: str) -> Complex:
    return Complex(P, {d: Obj((i,))}, {}, name)


def _two_term(P: FinAddCategory, i: int, j: int, name: str, low: int = -1, sign: int = 1
              ) -> Complex:
    f = P.basis_morphism(i, j, 0).scale(sign)
    return Complex(P, {low: Obj((i,)), low + 1: Obj((j,))}, {low: f}, name)


def two_term_indecomposables(P: FinAddCategory) -> list[tuple[str, Complex]]:
    """Stalks P_i, shifted stalks P_i[1] and the cones (P_i -> P_j), i < j.

    For the linearly oriented A_n these are all indecomposable two-term complexes.
    """
    out = []
    for i in range(P.n):
        out.append((P.names[i], _stalk(P, i, 0, P.names[i])))
    for i in range(P.n):
        nm = f"{P.names[i]}[1]"
        out.append((nm, _stalk(P, i, -1, nm)))
    for i in range(P.n):
        for j in range(i + 1, P.n):
            nm = f"({P.names[i]}->{P.names[j]})"
            out.append((nm, _two_term(P, i, j, nm)))
    return out


def build_two_term(P: FinAddCategory, indecs: Sequence[tuple[str, Complex]] | None = None,
                   name: str = "twoterm") -> ExtriInstance:
    """Two-term complexes in degrees -1, 0 over a projective category."""
    indecs = list(indecs) if indecs is not None else two_term_indecomposables(P)
    for nm, X in indecs:
        if any(d not in (-1, 0) for d in X.degrees()):
            raise InstanceError(f"{nm} is not a two-term complex in degrees -1, 0")
    meta = {"model": "two-term complexes K^[-1,0](proj)"}
    return build_from_complexes(P, indecs, name, window=(-1, 0), meta=meta)[0]


def build_a4sub(fld: Field | None = None) -> tuple[ExtriInstance, dict]:
    """add(3[-1] + 2 + [4;3;2] + [4;3]) inside D^b of the A4 quiver 1 <- 2 <- 3 <- 4."""
    P = path_category(fld or field(0), 4)
    indecs = [
        ("3[-1]", _two_term(P, 1, 2, "3[-1]", low=0, sign=-1)),
        ("2", _two_term(P, 0, 1, "2")),
        ("[4;3;2]", _two_term(P, 0, 3, "[4;3;2]")),
        ("[4;3]", _two_term(P, 1, 3, "[4;3]")),
    ]
    meta = {"model": "extension-closed subcategory of D^b(mod KA4), quiver 1<-2<-3<-4, "
                     "modules as projective resolutions"}
    return build_from_complexes(P, indecs, "a4sub", meta=meta)


def extclosed_indecomposables(P: FinAddCategory, m: int) -> list[tuple[str, Complex]]:
    one = _stalk(P, 0, -1, "1[1]")
    f = P.basis_morphism(0, 2, 0).scale(-1 if m % 2 else 1)
    nm = f"[3;2][-{m}]"
    x32 = Complex(P, {m - 1: Obj((0,)), m: Obj((2,))}, {m - 1: f}, nm)
    return [("1[1]", one), (nm, x32)]


def build_extclosed(m: int = 1, fld: Field | None = None) -> ExtriInstance:
    """add(1[1] + [3;2][-m]) inside D^b of the A3 quiver 1 <- 2 <- 3."""
    if m < 1:
        raise InstanceError("m must be positive")
    P = path_category(fld or field(0), 3)
    meta = {"model": f"extension-closed subcategory of D^b(mod KA3), m = {m}", "m": m}
    return build_from_complexes(P, extclosed_indecomposables(P, m), "extclosed_m", meta=meta)[0]


def build_fixture(name: str, fld: Field | None = None) -> ExtriInstance:
    fld = fld or field(0)
    if name == "split1":
        return build_split1(fld)
    if name == "split2":
        return build_split2(fld)
    if name == "pt":
        return build_periodic_point(fld)
    if name == "twoterm_k":
        return build_two_term(path_category(fld, 1), name="twoterm_k")
    if name == "twoterm_a2":
        return build_two_term(path_category(fld, 2), name="twoterm_a2")
    if name == "twoterm_a3":
        return build_two_term(path_category(fld, 3), name="twoterm_a3")
    if name == "a4sub":
        return build_a4sub(fld)[0]
    if name == "extclosed_m":
        return build_extclosed(1, fld)
    raise InstanceError(f"unknown fixture {name!r}")


def write_fixtures(outdir: Path | None = None) -> list[Path]:
    outdir = Path(outdir) if outdir else Path(__file__).parent / "data"
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for name in FIXTURES:
        if name == "a4sub":
            inst, prov = build_a4sub()
            p = outdir / "a4sub.provenance.json"
            p.write_text(json.dumps(prov, sort_keys=True, indent=1) + "\n", encoding="utf-8")
            written.append(p)
        else:
            inst = build_fixture(name)
        rep = validate_instance(inst)
        if not rep.ok:
            raise InstanceError(f"{name} does not validate: {rep.errors}")
        p = outdir / f"{name}.json"
        p.write_text(inst.dumps(), encoding="utf-8")
        written.append(p)
    return written


if __name__ == "__main__":
    for p in write_fixtures():
        print(p)
