import pytest

from extrikit.defects import (DefectError, FpPresentation, covering_epis, defect_module, defect_of,
                              eta, projectivity_errors, reflect_fp_functor, reflection_check,
                              round_trip_errors, stable_yoneda_errors, table_defects)
from extrikit.fincat import Obj
from extrikit.funcat import stable_hom
from extrikit.linalg import Matrix, QQ_FIELD

from conftest import fixture

DOMINANT = ["pt", "split2", "twoterm_a2", "a4sub", "extclosed_m"]


def test_zero_extension_has_zero_defect():
    inst = fixture("twoterm_a2")
    C, A = Obj((4,)), Obj((0,))
    d = defect_module(inst.E, inst.E.zero(C, A), C, A)
    assert d.is_zero()


def test_point_defect():
    inst = fixture("pt")
    d = defect_of(inst.E, inst.conf("gen"))
    assert d.dims == [1]
    assert d.errors() == []


@pytest.mark.parametrize("name", DOMINANT)
def test_table_defects_are_well_formed(name):
    for d in table_defects(fixture(name)):
        assert d.errors() == []


@pytest.mark.parametrize("name", DOMINANT)
def test_stable_yoneda(name):
    inst = fixture(name)
    for i in range(inst.cat.n):
        th = defect_of(inst.E, inst.dominant_conf(i))
        assert stable_yoneda_errors(th) == []
        C = Obj((i,))
        assert th.dims == [stable_hom(inst.E, Obj((m,)), C, "P").dim for m in range(inst.cat.n)]


@pytest.mark.parametrize("name", DOMINANT)
def test_reflection_of_representables(name):
    inst = fixture(name)
    table = table_defects(inst)
    for i in range(inst.cat.n):
        res = reflection_check(defect_of(inst.E, inst.dominant_conf(i)), table)
        assert res.ok, res.failures
        assert res.checked > 0


def test_non_dominant_defects_do_not_reflect():
    inst = fixture("twoterm_a2")
    table = table_defects(inst)
    seen = 0
    for conf, d in zip(inst.conflations, table):
        if conf.dominant or d.is_zero():
            continue
        assert not reflection_check(d, table).ok
        seen += 1
    assert seen > 0


def test_reflection_against_zero_defect():
    inst = fixture("pt")
    T = Obj((0,))
    zero = defect_module(inst.E, inst.E.zero(T, T), T, T)
    assert reflection_check(defect_of(inst.E, inst.conf("gen")), [zero]).ok


@pytest.mark.parametrize("name", ["pt", "twoterm_a2", "a4sub"])
def test_reflect_representable_gives_theta(name):
    inst = fixture(name)
    cat, z = inst.cat, Obj(())
    for i in range(cat.n):
        C = Obj((i,))
        ref = reflect_fp_functor(inst, FpPresentation(z, C, cat.zero(z, C)))
        assert ref.gamma.dims == defect_of(inst.E, inst.dominant_conf(i)).dims
        assert ref.check.ok


@pytest.mark.parametrize("name", ["pt", "twoterm_a2"])
def test_reflect_zero_functor(name):
    inst = fixture(name)
    for i in range(inst.cat.n):
        C = Obj((i,))
        ref = reflect_fp_functor(inst, FpPresentation(C, C, inst.cat.identity(C)))
        assert not any(ref.gamma.dims)


@pytest.mark.parametrize("name", ["pt", "twoterm_a2", "a4sub"])
def test_round_trip_on_table_defects(name):
    inst = fixture(name)
    table = table_defects(inst)
    for conf in inst.conflations:
        assert round_trip_errors(inst, conf, table) == []


def test_enough_projectives_in_defects():
    inst = fixture("twoterm_a2")
    epis = covering_epis(inst)
    assert len(epis) == len(inst.conflations)
    for i in range(inst.cat.n):
        th = defect_of(inst.E, inst.dominant_conf(i))
        assert projectivity_errors(th, [e for *_, e in epis]) == []


def test_eta_requires_morphism_of_extensions():
    inst = fixture("pt")
    conf = inst.conf("gen")
    d = defect_of(inst.E, conf)
    T = Obj((0,))
    a = inst.cat.morphism(T, T, Matrix.column(QQ_FIELD, [2]))
    with pytest.raises(DefectError):
        eta(d, d, a, inst.cat.identity(T))
    assert eta(d, d, a, a).comps[0] == Matrix.from_rows(QQ_FIELD, [[2]])


def test_presentation_with_wrong_ends():
    inst = fixture("pt")
    T = Obj((0,))
    with pytest.raises(DefectError):
        reflect_fp_functor(inst, FpPresentation(T, Obj(()), inst.cat.identity(T)))
