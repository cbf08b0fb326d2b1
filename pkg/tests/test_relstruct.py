import pytest

from extrikit.relstruct import (ConnectedSequence, RelstructError, acyclic_witness_subfunctor,
                                closure, gamma_cohomology, make_sequence, subbifunctor_errors)
from extrikit.linalg import Matrix, QQ_FIELD

from conftest import fixture, neg_tower


def test_split_conflations_are_acyclic():
    inst = fixture("split2")
    seq = make_sequence("positive", inst.tower)
    for conf in inst.conflations:
        assert gamma_cohomology(seq, conf, 4, inst.cat).acyclic


@pytest.mark.parametrize("name", ["pt", "twoterm_a2", "a4sub"])
def test_full_sequence_is_acyclic(name):
    inst = fixture(name)
    seq = make_sequence("E_I", inst.tower, neg_tower(name))
    for conf in inst.conflations:
        assert gamma_cohomology(seq, conf, 5, inst.cat).acyclic


def test_truncation_detects_non_exactness():
    inst = fixture("a4sub")
    seq = make_sequence("positive", inst.tower)
    conf = next(c for c in inst.conflations if c.dominant and c.codominant and c.delta.rows
                and not c.delta.is_zero())
    h = gamma_cohomology(seq, conf, 4, inst.cat)
    assert h.nonzero_degrees() == [-2]
    assert h.dims[-2][inst.cat.index("3[-1]")] == 1


def test_witness_subfunctor_split2():
    inst = fixture("split2")
    sub = acyclic_witness_subfunctor(inst, make_sequence("positive", inst.tower), 3)
    assert all(d == 0 for d in sub.dims().values())
    assert not sub.proper


def test_witness_subfunctor_full_when_all_acyclic():
    inst = fixture("twoterm_a2")
    sub = acyclic_witness_subfunctor(inst, make_sequence("E_I", inst.tower, neg_tower("twoterm_a2")), 3)
    assert sub.non_acyclic == []
    assert all(d == inst.E.dim(c, a) for (c, a), d in sub.dims().items())


def test_a4sub_proper_substructure():
    inst = fixture("a4sub")
    sub = acyclic_witness_subfunctor(inst, make_sequence("positive", inst.tower), 4)
    assert sub.proper
    assert sub.excluded == sub.non_acyclic and len(sub.excluded) == 1
    assert subbifunctor_errors(inst.E, sub.spaces) == []
    assert any("lower approximation" in c for c in sub.caveats)


def test_closure_is_stable():
    inst = fixture("twoterm_a2")
    E = inst.E
    c, a = inst.cat.index("P1[1]"), inst.cat.index("P1")
    spaces = closure(E, {(c, a): [Matrix.unit(QQ_FIELD, E.dim(c, a), 0)]})
    assert subbifunctor_errors(E, spaces) == []
    assert spaces[c, a].dim == 1


class _Broken(ConnectedSequence):
    """Nonzero composite: identity maps along a three-term chain."""

    name = "broken"

    def dim(self, n, m, X):
        return 1

    def induced(self, n, m, f):
        return Matrix.identity(QQ_FIELD, 1)

    def connecting(self, n, m, conf):
        return Matrix.identity(QQ_FIELD, 1)


def test_non_complex_is_rejected():
    inst = fixture("pt")
    with pytest.raises(RelstructError):
        gamma_cohomology(_Broken(), inst.conf("gen"), 1, inst.cat)


def test_unknown_sequence():
    with pytest.raises(RelstructError):
        make_sequence("nope", fixture("pt").tower)
