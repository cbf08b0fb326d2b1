import pytest
from hypothesis import given, settings, strategies as st

from extrikit.fincat import Obj
from extrikit.linalg import Matrix, QQ_FIELD, rank
from extrikit.posext import (find_codominant_extension, find_dominant_extension,
                             has_trivialization, is_codominant_extension, is_dominant_extension,
                             les_check, pos_gldim, verify_codominant, verify_dominant)

from conftest import fixture

ALL = ["split1", "split2", "pt", "twoterm_k", "twoterm_a2", "twoterm_a3", "a4sub", "extclosed_m"]
ORACLE = ["pt", "twoterm_k", "twoterm_a2", "twoterm_a3"]


def test_periodic_point_dims():
    tower = fixture("pt").tower
    assert [tower.dim(n, 0, 0) for n in range(7)] == [1] * 7


def test_a4sub_is_hereditary():
    tower = fixture("a4sub").tower
    assert tower.level(2).is_zero()
    assert pos_gldim(tower).value == 1


@pytest.mark.parametrize("name,expected", [("twoterm_a2", 1), ("twoterm_a3", 1), ("twoterm_k", 1),
                                           ("split2", 0), ("extclosed_m", 0)])
def test_gldim(name, expected):
    g = pos_gldim(fixture(name).tower)
    assert g.exact and g.value == expected


def test_gldim_of_periodic_point_is_a_bound():
    g = pos_gldim(fixture("pt").tower, 4)
    assert not g.exact and str(g) == "≥ 4"


def test_twoterm_projectives_and_injectives():
    inst = fixture("twoterm_a2")
    names = inst.cat.names
    assert sorted(names[i] for i in inst.tower.projective_indecs()) == ["P1", "P2"]
    assert sorted(names[i] for i in inst.tower.injective_indecs()) == ["P1[1]", "P2[1]"]


@pytest.mark.parametrize("name", ORACLE)
def test_coend_matches_satellite(name):
    inst = fixture(name)
    tower, sat = inst.tower, inst.satellite
    for n in range(4):
        for c in range(inst.cat.n):
            assert sat.module(n, c).dims == [tower.dim(n, c, m) for m in range(inst.cat.n)]


@pytest.mark.parametrize("name", ["pt", "twoterm_a2", "a4sub"])
def test_relations_die_in_quotient(name):
    tower = fixture(name).tower
    cat = tower.cat
    for n in (2, 3):
        for x in range(cat.n):
            for y in range(cat.n):
                pi, sigma = tower.quotient(n, x, y)
                rel = tower.relations(n, x, y)
                if rel.cols:
                    assert (pi @ rel).is_zero()
                assert pi @ sigma == Matrix.identity(QQ_FIELD, pi.rows)


@pytest.mark.parametrize("name", ALL)
def test_cup_descends(name):
    inst = fixture(name)
    for conf in inst.conflations:
        for n in (2, 3):
            assert inst.tower.descends_errors(conf.delta, conf.C, conf.A, n) == []


@pytest.mark.parametrize("name", ALL)
def test_long_exact_sequences(name):
    inst = fixture(name)
    for conf in inst.conflations:
        rep = les_check(inst.tower, conf, 3)
        assert rep.ok, rep.violations[:3]


@pytest.mark.parametrize("name", ["pt", "twoterm_a2", "a4sub"])
def test_trivialization_iff_vanishing(name):
    inst = fixture(name)
    tower, cat = inst.tower, inst.cat
    for conf in inst.conflations:
        for n in range(3):
            lev = tower.level(n)
            for x in range(cat.n):
                X = Obj((x,))
                F = lev.covariant_slice(X)
                dim = lev.space_dim(X, conf.C)
                vecs = [Matrix.unit(QQ_FIELD, dim, k) for k in range(dim)]
                if dim:
                    vecs.append(Matrix.column(QQ_FIELD, [k + 1 for k in range(dim)]))
                for lam in vecs:
                    vanishes = tower.class_of(conf.delta, conf.C, conf.A, lam, n, X).is_zero()
                    assert has_trivialization(conf, F, lam, conf.delta) == vanishes


@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4))
@settings(max_examples=30, deadline=None)
def test_class_of_is_bilinear(cs):
    inst = fixture("pt")
    tower = inst.tower
    T = Obj((0,))
    a, b, c, d = (Matrix.column(QQ_FIELD, [v]) for v in cs)
    for n in range(3):
        lhs = tower.class_of(a + b, T, T, c + d, n, T)
        rhs = sum((tower.class_of(r, T, T, l, n, T) for r in (a, b) for l in (c, d)),
                  Matrix.zeros(QQ_FIELD, 1, 1))
        assert lhs == rhs


@given(st.integers(0, 4), st.lists(st.integers(-2, 2), min_size=3, max_size=3))
@settings(max_examples=30, deadline=None)
def test_class_of_linear_in_lambda_twoterm(idx, coeffs):
    inst = fixture("twoterm_a2")
    tower, conf = inst.tower, inst.conflations[idx % len(inst.conflations)]
    X = Obj((idx,))
    dim = tower.level(1).space_dim(X, conf.C)
    lam = Matrix.column(QQ_FIELD, (coeffs * 3)[:dim])
    two = tower.class_of(conf.delta, conf.C, conf.A, lam.scale(2), 1, X)
    one = tower.class_of(conf.delta, conf.C, conf.A, lam, 1, X)
    assert two == one.scale(2)


@pytest.mark.parametrize("name", ALL)
def test_flags_are_verified(name):
    inst = fixture(name)
    for conf in inst.conflations:
        assert conf.errors(inst.E) == []
        assert conf.dominant == verify_dominant(inst.E, conf)
        assert conf.codominant == verify_codominant(inst.E, conf)


@pytest.mark.parametrize("name", ["pt", "twoterm_a2", "a4sub", "twoterm_a3"])
def test_generator_recipe(name):
    inst = fixture(name)
    for c in range(inst.cat.n):
        F, theta = find_dominant_extension(inst.E, c)
        assert is_dominant_extension(inst.E, theta, Obj((c,)), F)
        J, iota = find_codominant_extension(inst.E, c)
        assert is_codominant_extension(inst.E, iota, J, Obj((c,)))


def test_designated_dominant_middles_are_projective():
    inst = fixture("twoterm_a2")
    for i in range(inst.cat.n):
        assert inst.tower.is_projective(inst.dominant_conf(i).B)
        assert inst.tower.is_injective(inst.codominant_conf(i).B)


def test_trivialization_rejects_foreign_extension():
    inst = fixture("pt")
    conf = inst.conf("gen")
    F = inst.tower.level(1).covariant_slice(Obj((0,)))
    with pytest.raises(ValueError):
        has_trivialization(conf, F, Matrix.column(QQ_FIELD, [1]), rho=conf.delta.scale(2))
