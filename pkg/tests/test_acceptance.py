"""Acceptance criteria 1-12.  Each check is exact; one PASS/FAIL line per criterion
is printed in the terminal summary (and when run as a script)."""

import io
from contextlib import redirect_stdout

import pytest

from extrikit.cli import main as cli_main
from extrikit.defects import (FpPresentation, defect_of, reflect_fp_functor, reflection_check,
                              round_trip_errors, stable_yoneda_errors, table_defects)
from extrikit.fincat import Obj
from extrikit.instances import FIXTURES, load_fixture
from extrikit.linalg import Matrix, QQ_FIELD
from extrikit.negext import (KernelTower, NegTower, acyclicity_check, alternating_sum_check,
                             balance_report)
from extrikit.posext import has_trivialization, les_check, pos_gldim

RESULTS = {}

_cache = {}


def inst(name):
    if name not in _cache:
        _cache[name] = load_fixture(name)
    return _cache[name]


def neg(name):
    key = ("neg", name)
    if key not in _cache:
        _cache[key] = NegTower(inst(name).tower)
    return _cache[key]


def record(n, title, failures):
    RESULTS[n] = (title, list(failures))
    return failures


def O(i):
    return Obj((i,))


# criteria


def criterion_1():
    fails = []
    for name in ("twoterm_a2", "twoterm_a3"):
        g = pos_gldim(inst(name).tower, 4)
        if not (g.exact and g.value == 1):
            fails.append(f"{name}: positive global dimension {g}")
    return record(1, "positive global dimension 1 for two-term complexes (A2, A3)", fails)


def criterion_2():
    fails = []
    pt = inst("pt")
    dims_pos = [pt.tower.dim(n, 0, 0) for n in range(7)]
    dims_neg = [neg("pt").dim_I(n, O(0), O(0)) for n in range(7)]
    if dims_pos != [1] * 7:
        fails.append(f"E^n(T,T) = {dims_pos}")
    if dims_neg != [1] * 7:
        fails.append(f"E_I^-n(T,T) = {dims_neg}")
    buf = io.StringIO()
    with redirect_stdout(buf):
        cli_main(["gldim", "pt"])
    if "positive global dimension: ≥ 4" not in buf.getvalue():
        fails.append(f"gldim pt printed {buf.getvalue()!r}")
    return record(2, "periodic point: E^n = E_I^-n = 1 for n <= 6, gldim >= n_max", fails)


def criterion_3():
    fails = []
    for name in ("split1", "split2", "extclosed_m"):
        I = inst(name)
        # E^1 = 0 forces every level, hence every negative extension, to vanish
        if not I.tower.level(1).is_zero():
            fails.append(f"{name}: E != 0")
        for c in range(I.cat.n):
            for a in range(I.cat.n):
                for n in range(1, 7):
                    d1, d2 = neg(name).dim_I(n, O(c), O(a)), neg(name).dim_II(n, O(c), O(a))
                    if d1 or d2:
                        fails.append(f"{name}: ({c},{a},{n}) -> {d1}, {d2}")
    return record(3, "split fixtures and extclosed_m: negative extensions vanish", fails)


def criterion_4():
    I = inst("a4sub")
    cat = I.cat
    C = O(cat.index("3[-1]"))
    fails = []
    dII = [neg("a4sub").dim_II(1, C, O(m)) for m in range(cat.n)]
    if dII != [0] * cat.n:
        fails.append(f"E_II^-1(3[-1], -) = {dII}")
    dI = neg("a4sub").dim_I(1, C, O(cat.index("[4;3]")))
    if dI != 1:
        fails.append(f"E_I^-1(3[-1], [4;3]) = {dI}")
    return record(4, "a4sub: E_II^-1(3[-1],-) = 0 and dim E_I^-1(3[-1],[4;3]) = 1", fails)


def criterion_5():
    fails, checked = [], 0
    for name in FIXTURES:
        I = inst(name)
        for conf in I.conflations:
            rep = les_check(I.tower, conf, 3)
            checked += rep.checked
            fails += [f"{name}: {v}" for v in rep.violations]
    if not checked:
        fails.append("nothing checked")
    return record(5, f"long exact sequences, both variances, n_max 3 ({checked} positions)", fails)


def criterion_6():
    fails, checked = [], 0
    for name in FIXTURES:
        I = inst(name)
        if not (I.has_dominant_data and I.has_codominant_data):
            continue
        for conf in I.conflations:
            for kind in ("I", "II"):
                rep = acyclicity_check(neg(name), conf, 4, 3, kind)
                checked += rep.checked
                fails += [f"{name}: {v}" for v in rep.violations]
    if not checked:
        fails.append("nothing checked")
    return record(6, f"delta-functor acyclicity over degrees -4..3 ({checked} positions)", fails)


def criterion_7():
    fails = []
    for name in ("pt", "twoterm_k", "twoterm_a2", "twoterm_a3"):
        I = inst(name)
        cat = I.cat
        kt = KernelTower(cat, I.E, {i: I.dominant_conf(i) for i in range(cat.n)})
        for c in range(cat.n):
            for n in range(4):
                coend = [I.tower.dim(n, c, m) for m in range(cat.n)]
                if I.satellite.module(n, c).dims != coend:
                    fails.append(f"{name}: coend/satellite differ at E^{n}({cat.names[c]}, -)")
            for n in range(5):
                end = [neg(name).dim_I(n, O(m), O(c)) for m in range(cat.n)]
                if kt.module(n, c).dims != end:
                    fails.append(f"{name}: end/kernel differ at E_I^-{n}(-, {cat.names[c]})")
    return record(7, "oracle equivalence: coend = satellite (<= 3), end = kernel (<= 4)", fails)


def criterion_8():
    fails = []
    for name in FIXTURES:
        I = inst(name)
        tower, cat = I.tower, I.cat
        for n in (2, 3):
            for x in range(cat.n):
                for y in range(cat.n):
                    rel = tower.relations(n, x, y)
                    if rel.cols and not (tower.quotient(n, x, y)[0] @ rel).is_zero():
                        fails.append(f"{name}: relation survives at level {n} ({x},{y})")
        for conf in I.conflations:
            for n in range(3):
                lev = tower.level(n)
                for x in range(cat.n):
                    X = O(x)
                    dim = lev.space_dim(X, conf.C)
                    units = [Matrix.unit(QQ_FIELD, dim, k) for k in range(dim)]
                    F = lev.covariant_slice(X)
                    for lam in units:
                        van = tower.class_of(conf.delta, conf.C, conf.A, lam, n, X).is_zero()
                        if has_trivialization(conf, F, lam, conf.delta) != van:
                            fails.append(f"{name}: trivialization mismatch for {conf.id}, n={n}")
                    if len(units) >= 2:
                        lam = units[0] + units[1].scale(3)
                        lhs = tower.class_of(conf.delta.scale(2), conf.C, conf.A, lam, n, X)
                        rhs = (tower.class_of(conf.delta, conf.C, conf.A, units[0], n, X)
                               + tower.class_of(conf.delta, conf.C, conf.A, units[1], n, X).scale(3)
                               ).scale(2)
                        if lhs != rhs:
                            fails.append(f"{name}: class_of not bilinear for {conf.id}, n={n}")
    return record(8, "coend soundness: relations, bilinearity, trivialization iff vanishing", fails)


def criterion_9():
    I = inst("twoterm_a2")
    br = balance_report(I, 4, neg("twoterm_a2"))
    fails = []
    if not br.balanced:
        fails.append(f"unbalanced at {br.unbalanced}")
    for (c, a, n), (d1, d2) in br.dims.items():
        if n > 1 and (d1 or d2):
            fails.append(f"nonzero in degree -{n} at ({c},{a})")
    for key, ok in br.conditions.items():
        if not ok:
            fails.append(f"({key}) fails: {br.violations[key][:1]}")
    if len(br.comparisons) != I.cat.n ** 2:
        fails.append("image comparisons missing")
    fails += [f"images differ at ({c['X']}, {c['Y']})" for c in br.comparisons if not c["equal"]]
    return record(9, "twoterm_a2 balance, (NI)/(NII)/(NI+)/(NII+), image comparisons", fails)


def criterion_10():
    fails = []
    a4 = balance_report(inst("a4sub"), 4, neg("a4sub"))
    if a4.balanced:
        fails.append("a4sub is balanced")
    if a4.conditions["NI"] and a4.conditions["NII"]:
        fails.append("a4sub satisfies both (NI) and (NII)")
    if not a4.conditions_consistent:
        fails.append("a4sub: conditions disagree with balance")
    tt = balance_report(inst("twoterm_a2"), 4, neg("twoterm_a2"))
    if not (tt.balanced and tt.conditions["NI"] and tt.conditions["NII"] and tt.conditions_consistent):
        fails.append("twoterm_a2: expected balance with (NI) and (NII)")
    return record(10, "(NI) and (NII) hold exactly when dimensions balance", fails)


def criterion_11():
    fails = []
    for name in FIXTURES:
        I = inst(name)
        if not I.has_dominant_data:
            continue
        table = table_defects(I)
        for i in range(I.cat.n):
            th = defect_of(I.E, I.dominant_conf(i))
            fails += [f"{name}: {e}" for e in stable_yoneda_errors(th)]
            res = reflection_check(th, table)
            fails += [f"{name}: {e}" for e in res.failures]
            z, C = Obj(()), O(i)
            ref = reflect_fp_functor(I, FpPresentation(z, C, I.cat.zero(z, C)), table)
            if ref.gamma.dims != th.dims or not ref.check.ok:
                fails.append(f"{name}: reflection of C(-, {I.cat.names[i]}) is not Theta")
        for conf in I.conflations:
            fails += [f"{name}: {e}" for e in round_trip_errors(I, conf, table)]
    return record(11, "defects: stable Yoneda, reflections, fp round trips", fails)


def criterion_12():
    I = inst("twoterm_a2")
    fails, checked = [], 0
    for y in sorted(I.resolutions):
        chain = I.resolution_chain(y)
        for x in range(I.cat.n):
            s = alternating_sum_check(I, chain, x, neg("twoterm_a2"))
            checked += 1
            if not s.holds:
                fails.append(f"({I.cat.names[x]}, {I.cat.names[y]}): {s.lhs} != {s.rhs}")
    if not checked:
        fails.append("no resolution chains")
    return record(12, f"alternating-sum identity on twoterm_a2 ({checked} pairs)", fails)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


def summary_lines():
    lines = []
    for n in sorted(RESULTS):
        title, fails = RESULTS[n]
        lines.append(f"criterion {n:2d}: {'PASS' if not fails else 'FAIL'}  {title}")
        lines += [f"    {f}" for f in fails[:5]]
    return lines


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 13)])
def test_criterion(check):
    fails = check()
    assert not fails, fails[:5]


if __name__ == "__main__":
    for check in CRITERIA:
        check()
    print("\n".join(summary_lines()))
