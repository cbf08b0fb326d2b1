import json

import pytest
from hypothesis import given, settings, strategies as st

from extrikit.complexes import path_category
from extrikit.fincat import FinAddCategory, Obj
from extrikit.funcat import (Bimodule, NatSpace, module_cokernel, module_kernel, representable,
                             stable_hom)
from extrikit.instances import ExtriInstance, fixture_path, validate_instance
from extrikit.linalg import Matrix, QQ_FIELD

from conftest import fixture


def test_path_category_is_valid():
    P = path_category(QQ_FIELD, 3)
    assert P.validate() == []
    assert [P.hom_dim[0, j] for j in range(3)] == [1, 1, 1]
    assert P.hom_dim[2, 0] == 0


def test_corrupted_associativity_is_reported():
    # in A_3 one rescaled composite is a coboundary; A_4 has a genuine 4-chain
    P = path_category(QQ_FIELD, 4)
    comp = dict(P.comp)
    comp[0, 1, 2] = Matrix.from_rows(QQ_FIELD, [[2]])
    bad = FinAddCategory(QQ_FIELD, P.names, P.hom_dim, comp, P.ident)
    assert any(e.startswith("associativity fails") for e in bad.validate())


def test_corrupted_split2_constant_is_reported():
    data = json.loads(fixture_path("split2").read_text())
    data["comp"]["X|X|X"] = [[[2]]]
    rep = validate_instance(ExtriInstance.from_json(data))
    assert not rep.ok
    assert any("X" in e for e in rep.errors)


def test_category_json_round_trip(any_fixture):
    cat = any_fixture.cat
    again = FinAddCategory.from_json(cat.field, json.loads(json.dumps(cat.to_json())))
    assert again.to_json() == cat.to_json()


def test_sum_object_composition_is_associative():
    cat = fixture("twoterm_a2").cat
    X = Obj((0, 4))
    Y = Obj((1, 4, 2))
    f = cat.identity(X)
    assert cat.compose(cat.identity(X), f) == f
    g = cat.projection([Obj((0,)), Obj((4,))], 1)
    assert cat.compose(g, cat.inclusion([Obj((0,)), Obj((4,))], 1)) == cat.identity(Obj((4,)))
    assert cat.compose(g, cat.inclusion([Obj((0,)), Obj((4,))], 0)).is_zero()
    assert cat.layout(X, Y).dim == sum(cat.hom_dim[i, j] for i in X for j in Y)


def test_bimodules_validate(any_fixture):
    assert any_fixture.E.validate() == []


@pytest.mark.parametrize("name", ["twoterm_a2", "a4sub"])
def test_yoneda_count(name):
    # Nat(C(-, x), F) has dim F(x)
    inst = fixture(name)
    cat = inst.cat
    for x in range(cat.n):
        for y in range(cat.n):
            F = inst.E.contravariant_slice(Obj((y,)))
            nat = NatSpace(representable(cat, Obj((x,)), "contra"), F)
            assert nat.dim == F.dims[x]


def test_natspace_basis_is_natural():
    inst = fixture("twoterm_a2")
    cat = inst.cat
    F = representable(cat, Obj((2,)), "co")
    G = inst.E.covariant_slice(Obj((2,)))
    for mm in NatSpace(F, G).basis_morphisms():
        assert mm.naturality_errors() == []


def test_kernel_and_cokernel_modules():
    inst = fixture("twoterm_a2")
    cat = inst.cat
    y = cat.index("(P1->P2)")
    x = cat.index("P2")
    f = cat.basis_morphism(x, y, 0)
    from extrikit.funcat import ModuleMorphism
    phi = ModuleMorphism(representable(cat, Obj((x,)), "contra"), representable(cat, Obj((y,)), "contra"),
                         {m: cat.postcompose_matrix(f, Obj((m,))) for m in range(cat.n)})
    ker, cok = module_kernel(phi), module_cokernel(phi)
    for m in range(cat.n):
        assert ker.module.dims[m] + phi.tgt.dims[m] == cok.module.dims[m] + phi.src.dims[m]
    assert ker.module.validate() == []
    assert cok.module.validate() == []


def test_stable_hom_of_projective_target_vanishes():
    inst = fixture("twoterm_a2")
    for P in inst.tower.projective_indecs():
        for x in range(inst.cat.n):
            assert stable_hom(inst.E, Obj((x,)), Obj((P,)), "P").dim == 0


def test_ideal_errors_clean(any_fixture):
    from extrikit.funcat import ideal_errors
    assert ideal_errors(any_fixture.E, "P") == []
    assert ideal_errors(any_fixture.E, "I") == []


@given(st.lists(st.integers(-2, 2), min_size=5, max_size=5),
       st.lists(st.integers(-2, 2), min_size=5, max_size=5))
@settings(max_examples=25, deadline=None)
def test_bimodule_actions_commute(xs, ys):
    # (a_* c^*) = (c^* a_*) on random morphisms into and out of sums
    inst = fixture("twoterm_a2")
    cat, E = inst.cat, inst.E
    A, A2 = Obj((0, 2)), Obj((2, 3))
    C, C2 = Obj((4,)), Obj((2, 4))
    a = cat.morphism(A, A2, Matrix.column(QQ_FIELD, (xs * 2)[:cat.layout(A, A2).dim]))
    c = cat.morphism(C2, C, Matrix.column(QQ_FIELD, (ys * 2)[:cat.layout(C2, C).dim]))
    lhs = E.left_matrix(a, C2) @ E.right_matrix(c, A)
    rhs = E.right_matrix(c, A2) @ E.left_matrix(a, C)
    assert lhs == rhs
