import pytest
from hypothesis import given, settings, strategies as st

from extrikit.fincat import Obj
from extrikit.linalg import Matrix, QQ_FIELD, rank
from extrikit.negext import (KernelTower, NegError, acyclicity_check, alternating_sum_check,
                             balance_report, comparison_images, neg_ext_I, neg_ext_II)

import oracle
from conftest import fixture, neg_tower


def O(inst, name):
    return Obj((inst.cat.index(name),))


def test_periodic_point():
    neg = neg_tower("pt")
    T = Obj((0,))
    assert [neg.dim_I(n, T, T) for n in range(7)] == [1] * 7
    assert [neg.dim_II(n, T, T) for n in range(7)] == [1] * 7


@pytest.mark.parametrize("name", ["split1", "split2", "extclosed_m"])
def test_vanishing(name):
    inst, neg = fixture(name), neg_tower(name)
    for c in range(inst.cat.n):
        for a in range(inst.cat.n):
            for n in range(1, 5):
                assert neg.dim_I(n, Obj((c,)), Obj((a,))) == 0
                assert neg.dim_II(n, Obj((c,)), Obj((a,))) == 0


def test_a4sub_unbalanced():
    inst, neg = fixture("a4sub"), neg_tower("a4sub")
    C = O(inst, "3[-1]")
    assert [neg.dim_II(1, C, Obj((m,))) for m in range(inst.cat.n)] == [0] * inst.cat.n
    assert neg.dim_I(1, C, O(inst, "[4;3]")) == 1


def test_a4sub_dim_matches_hom_kernel():
    # 0 -> E_I^{-1}(C, [4;3]) -> C(C, 2) -> C(C, [4;3;2]) with the conflation 2 -> [4;3;2] -> [4;3]
    inst, neg = fixture("a4sub"), neg_tower("a4sub")
    C = O(inst, "3[-1]")
    conf = next(c for c in inst.conflations
                if (c.A, c.B, c.C) == (O(inst, "2"), O(inst, "[4;3;2]"), O(inst, "[4;3]")))
    assert conf.dominant
    m = inst.cat.postcompose_matrix(conf.x, C)
    assert neg.dim_I(1, C, conf.C) == m.cols - rank(m) == 1



@pytest.mark.parametrize("name, family", [("a4sub", oracle.A4SUB),
                                          ("twoterm_k", oracle.two_term_family(1)),
                                          ("twoterm_a2", oracle.two_term_family(2))])
def test_degree_one_matches_homotopy_oracle(name, family):
    # independent check: E_I^{-1}(X, Y) against Hom_K(X, Y[-1]) in the homotopy category
    inst, neg = fixture(name), neg_tower(name)
    nm = inst.cat.names
    got = {(x, y): neg.dim_I(1, Obj((i,)), Obj((j,))) for i, x in enumerate(nm) for j, y in enumerate(nm)}
    want = {(x, y): oracle.hom_k_dim(family[x], family[y].shift(-1)) for x in nm for y in nm}
    assert got == want

def test_degree_zero_is_hom():
    inst = fixture("twoterm_a2")
    for c in range(inst.cat.n):
        for a in range(inst.cat.n):
            assert neg_ext_I(inst.tower, 0, Obj((c,)), Obj((a,))).dim == inst.cat.hom_dim[c, a]
            assert neg_ext_II(inst.tower, 0, Obj((c,)), Obj((a,))).dim == inst.cat.hom_dim[c, a]


def test_negative_degree_rejected():
    with pytest.raises(NegError):
        neg_ext_I(fixture("pt").tower, -1, Obj((0,)), Obj((0,)))


def test_projective_and_injective_vanishing():
    inst, neg = fixture("twoterm_a2"), neg_tower("twoterm_a2")
    for n in range(1, 4):
        for x in range(inst.cat.n):
            for p in inst.tower.projective_indecs():
                assert neg.dim_I(n, Obj((x,)), Obj((p,))) == 0
            for i in inst.tower.injective_indecs():
                assert neg.dim_II(n, Obj((i,)), Obj((x,))) == 0


@pytest.mark.parametrize("name", ["pt", "twoterm_k", "twoterm_a2", "twoterm_a3"])
def test_end_matches_kernel_iteration(name):
    inst, neg = fixture(name), neg_tower(name)
    cat = inst.cat
    kt = KernelTower(cat, inst.E, {i: inst.dominant_conf(i) for i in range(cat.n)})
    for n in range(5):
        for c in range(cat.n):
            assert kt.module(n, c).dims == [neg.dim_I(n, Obj((m,)), Obj((c,))) for m in range(cat.n)]
            assert kt.module(n, c).validate() == []


@pytest.mark.parametrize("name", ["pt", "split2", "twoterm_k", "twoterm_a2", "a4sub", "extclosed_m"])
@pytest.mark.parametrize("kind", ["I", "II"])
def test_acyclicity(name, kind):
    inst, neg = fixture(name), neg_tower(name)
    for conf in inst.conflations:
        rep = acyclicity_check(neg, conf, 4, 3, kind)
        assert rep.ok, rep.violations[:3]
        assert rep.checked > 0


def test_modules_are_functors():
    inst, neg = fixture("twoterm_a2"), neg_tower("twoterm_a2")
    for a in range(inst.cat.n):
        assert neg.module_I(1, Obj((a,))).validate() == []
        assert neg.module_II(1, Obj((a,))).validate() == []


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
@settings(max_examples=30, deadline=None)
def test_induced_maps_compose(x, i, j):
    # E_I^{-1}(X, g o f) = E_I^{-1}(X, g) E_I^{-1}(X, f) on composable basis morphisms
    inst, neg = fixture("twoterm_a2"), neg_tower("twoterm_a2")
    cat = inst.cat
    X = Obj((x,))
    for k in range(cat.n):
        if not (cat.hom_dim[i, j] and cat.hom_dim[j, k]):
            continue
        f, g = cat.basis_morphism(i, j, 0), cat.basis_morphism(j, k, 0)
        for n in (0, 1):
            assert neg.map_I(n, X, cat.compose(g, f)) == neg.map_I(n, X, g) @ neg.map_I(n, X, f)
            assert neg.map_II(n, cat.compose(g, f), X) == neg.map_II(n, f, X) @ neg.map_II(n, g, X)


def test_twoterm_balance():
    inst = fixture("twoterm_a2")
    br = balance_report(inst, 4, neg_tower("twoterm_a2"))
    assert br.balanced
    assert all(d == (0, 0) for (c, a, n), d in br.dims.items() if n > 1)
    assert all(br.conditions.values())
    assert br.enough_objects and br.conditions_consistent
    assert br.comparisons and all(c["equal"] for c in br.comparisons)


def test_a4sub_balance():
    inst = fixture("a4sub")
    br = balance_report(inst, 2, neg_tower("a4sub"))
    nm = inst.cat.names
    assert [(nm[c], nm[a], n) for c, a, n in br.unbalanced] == [("3[-1]", "[4;3]", 1)]
    assert not br.conditions["NI"] and br.conditions["NII"]
    assert not br.conditions["NI+"]
    assert br.conditions_consistent
    assert any("witness-bounded" in c for c in br.caveats)


def test_comparison_images_pairwise():
    inst, neg = fixture("twoterm_a2"), neg_tower("twoterm_a2")
    for x in range(inst.cat.n):
        for y in range(inst.cat.n):
            res = comparison_images(inst, x, y, neg)
            assert res.equal
            assert res.image_I.ambient == inst.E.space_dim(inst.codominant_conf(x).C,
                                                            inst.dominant_conf(y).A)


def test_alternating_sums():
    inst, neg = fixture("twoterm_a2"), neg_tower("twoterm_a2")
    checked = 0
    for y in sorted(inst.resolutions):
        chain = inst.resolution_chain(y)
        for x in range(inst.cat.n):
            s = alternating_sum_check(inst, chain, x, neg)
            assert s.holds, s.to_json(inst.cat)
            checked += 1
    assert checked == inst.cat.n * len(inst.resolutions) > 0


def test_connecting_degree_zero_on_point():
    # the generator of E_I^{-1}(T, T) maps to a nonzero endomorphism
    neg = neg_tower("pt")
    conf = fixture("pt").conf("gen")
    T = Obj((0,))
    m = neg.connecting_I(conf.delta, conf.C, conf.A, 0, T)
    assert m.shape == (1, 1) and rank(m) == 1
    m2 = neg.connecting_II(conf.delta, conf.C, conf.A, 0, T)
    assert rank(m2) == 1
