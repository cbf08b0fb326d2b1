"""Command-line front end: ``extrikit <command> <bundle> [options]``.

A bundle is a JSON file path or the name of a shipped fixture.  Every
command prints a text summary, or with ``--json`` the canonical report.
Exit codes: 0 clean, 1 property violation (or a finding under --strict),
2 validation failure or bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .fincat import Obj
from .instances import InstanceError, load_fixture, validate_instance
from .negext import KernelTower, NegTower, acyclicity_check, alternating_sum_check, balance_report
from .posext import les_check, pos_gldim
from .defects import defect_report
from .relstruct import relstruct_report

REPORT_SCHEMA = 1
DEFAULT_NMAX = 4
LARGE_NMAX = 8


class UsageError(Exception):
    pass


class Report:
    def __init__(self, command: str, args: dict, inst):
        self.command = command
        self.args = args
        self.inst = inst
        self.result: dict = {}
        self.violations: list = []
        self.findings: list = []
        self.caveats: list = []

    def to_json(self) -> dict:
        return {"schema": REPORT_SCHEMA, "command": {"name": self.command, "args": self.args},
                "instance": self.inst.name, "hash": self.inst.content_hash(),
                "result": self.result, "violations": self.violations,
                "findings": self.findings, "caveats": self.caveats}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def _obj(inst, name: str) -> Obj:
    try:
        return Obj((inst.cat.index(name),))
    except (KeyError, ValueError):
        raise UsageError(f"unknown indecomposable {name!r}") from None


def _pairs(inst, specs):
    cat = inst.cat
    if not specs:
        return [(c, a) for c in range(cat.n) for a in range(cat.n)]
    out = []
    for spec in specs:
        parts = [p.strip() for p in spec.split(",")]
        if len(parts) != 2:
            raise UsageError(f"--pairs expects C,A, got {spec!r}")
        out.append((_obj(inst, parts[0])[0], _obj(inst, parts[1])[0]))
    return out


def _nmax(args) -> int:
    n = args.nmax
    if n < 0:
        raise UsageError("--nmax must be non-negative")
    if n > LARGE_NMAX and not args.allow_large:
        raise UsageError(f"--nmax above {LARGE_NMAX} needs --allow-large")
    return n


# commands


def cmd_validate(rep: Report, args) -> None:
    v = validate_instance(rep.inst)
    rep.result["validation"] = v.to_json()
    rep.caveats += v.caveats
    if not v.ok:
        rep.violations += v.errors


def cmd_ext(rep: Report, args) -> None:
    inst = rep.inst
    cat = inst.cat
    pairs = _pairs(inst, args.pairs)
    rows, mism = [], []
    if args.pos is not None:
        n_top = args.pos
        method = args.method or "coend"
        if method not in ("coend", "satellite"):
            raise UsageError("--pos supports --method coend|satellite")
        methods = ["coend", "satellite"] if args.cross_check else [method]
        tower = inst.tower
        sat = inst.satellite if "satellite" in methods else None
        for c, a in pairs:
            for n in range(n_top + 1):
                row = {"C": cat.names[c], "A": cat.names[a], "n": n}
                if "coend" in methods:
                    row["coend"] = tower.dim(n, c, a)
                if sat is not None:
                    row["satellite"] = sat.module(n, c).dims[a]
                if len(methods) == 2 and row["coend"] != row["satellite"]:
                    mism.append(f"E^{n}({row['C']},{row['A']}): coend {row['coend']} "
                                f"!= satellite {row['satellite']}")
                rows.append(row)
    else:
        n_top = args.neg
        method = args.method or "end"
        if method not in ("end", "kernel"):
            raise UsageError("--neg supports --method end|kernel")
        methods = ["end", "kernel"] if args.cross_check else [method]
        neg = NegTower(inst.tower)
        kt = None
        if "kernel" in methods:
            kt = KernelTower(cat, inst.E, {i: inst.dominant_conf(i) for i in range(cat.n)})
        for c, a in pairs:
            for n in range(1, n_top + 1):
                row = {"C": cat.names[c], "A": cat.names[a], "n": -n}
                if "end" in methods:
                    row["E_I"] = neg.dim_I(n, Obj((c,)), Obj((a,)))
                    row["E_II"] = neg.dim_II(n, Obj((c,)), Obj((a,)))
                if kt is not None:
                    row["E_I_kernel"] = kt.module(n, a).dims[c]
                if len(methods) == 2 and row["E_I"] != row["E_I_kernel"]:
                    mism.append(f"E_I^-{n}({row['C']},{row['A']}): end {row['E_I']} "
                                f"!= kernel {row['E_I_kernel']}")
                rows.append(row)
    rep.result["ext"] = {"methods": methods, "rows": rows}
    if len(methods) == 2:
        rep.result["ext"]["agree"] = not mism
    rep.violations += mism


def cmd_les(rep: Report, args) -> None:
    inst = rep.inst
    n = _nmax(args)
    tower = inst.tower
    out = {"positive": {"checked": 0}, "E_I": {"checked": 0}, "E_II": {"checked": 0}}
    neg = NegTower(tower)
    for conf in inst.conflations:
        r = les_check(tower, conf, n)
        out["positive"]["checked"] += r.checked
        rep.violations += r.violations
        for kind in ("I", "II"):
            r = acyclicity_check(neg, conf, n, max(n - 1, 0), kind)
            out["E_" + kind]["checked"] += r.checked
            rep.violations += r.violations
    out["degrees"] = [-n, max(n - 1, 0)]
    rep.result["les"] = out


def cmd_balance(rep: Report, args) -> None:
    inst = rep.inst
    n = _nmax(args)
    neg = NegTower(inst.tower)
    br = balance_report(inst, n, neg)
    rep.result["balance"] = br.to_json(inst.cat)
    rep.caveats += br.caveats
    nm = inst.cat.names
    for c, a, k in br.unbalanced:
        rep.findings.append(f"unbalanced at ({nm[c]}, {nm[a]}, {k})")
    for key in ("NI", "NII", "NI+", "NII+"):
        if not br.conditions[key]:
            rep.findings.append(f"({key}) fails")
    for comp in br.comparisons:
        if not comp["equal"]:
            rep.violations.append(f"image comparison differs at ({comp['X']}, {comp['Y']})")
    if br.enough_objects and not br.conditions_consistent:
        rep.violations.append("(NI) and (NII) disagree with dimension balance")
    alts = []
    for i in range(inst.cat.n):
        if i not in inst.resolutions:
            continue
        chain = inst.resolution_chain(i)
        for x in range(inst.cat.n):
            s = alternating_sum_check(inst, chain, x, neg)
            alts.append(s.to_json(inst.cat))
            if not s.holds:
                rep.violations.append(f"alternating sum fails for ({nm[x]}, {nm[i]})")
    rep.result["alternating_sums"] = alts


def cmd_gldim(rep: Report, args) -> None:
    g = pos_gldim(rep.inst.tower, _nmax(args))
    rep.result["gldim"] = {"value": g.value, "exact": g.exact, "display": str(g)}


def cmd_defect(rep: Report, args) -> None:
    out = defect_report(rep.inst, reflect=args.reflect)
    rep.result["defect"] = out
    rep.violations += out["errors"]
    for s in out["stable_yoneda"]:
        rep.violations += s["errors"]
    if "reflection" in out:
        r = out["reflection"]
        rep.violations += r["failures"] + r["round_trip_failures"] + r["projectivity_failures"]


def cmd_relstruct(rep: Report, args) -> None:
    out = relstruct_report(rep.inst, args.sequence, args.window)
    rep.result["relstruct"] = out
    rep.caveats += out["subfunctor"]["caveats"]
    for g in out["gamma"]:
        if not g["acyclic"]:
            rep.findings.append(f"Gamma({g['conflation']}) is not acyclic")


def cmd_report(rep: Report, args) -> None:
    cmd_validate(rep, args)
    if rep.violations:
        return
    args.pos, args.neg, args.pairs, args.method, args.cross_check = None, args.nmax, None, None, True
    if rep.inst.has_dominant_data:
        cmd_ext(rep, args)
    cmd_les(rep, args)
    cmd_balance(rep, args)
    cmd_gldim(rep, args)
    args.reflect = rep.inst.has_dominant_data
    cmd_defect(rep, args)
    cmd_relstruct(rep, args)


COMMANDS = {"validate": cmd_validate, "ext": cmd_ext, "les-check": cmd_les,
            "balance": cmd_balance, "gldim": cmd_gldim, "defect": cmd_defect,
            "relstruct": cmd_relstruct, "report": cmd_report}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="extrikit", description="Exact computations on extriangulated bundles.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("bundle", help="bundle path or fixture name")
        sp.add_argument("--strict", action="store_true", help="treat findings as failures")
        if name != "report":
            sp.add_argument("--json", action="store_true", help="print the JSON report")
        return sp

    def nmax(sp):
        sp.add_argument("--nmax", type=int, default=DEFAULT_NMAX)
        sp.add_argument("--allow-large", action="store_true", help=f"permit --nmax above {LARGE_NMAX}")

    add("validate", "validate a bundle")
    sp = add("ext", "dimension tables for positive or negative extensions")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--pos", type=int, metavar="N")
    g.add_argument("--neg", type=int, metavar="N")
    sp.add_argument("--pairs", action="append", metavar="C,A")
    sp.add_argument("--method", choices=["coend", "satellite", "end", "kernel"])
    sp.add_argument("--cross-check", action="store_true")
    for name, help_ in (("les-check", "long exact sequences over the table"),
                        ("balance", "balance report"), ("gldim", "positive global dimension")):
        nmax(add(name, help_))
    sp = add("defect", "defects and reflections")
    sp.add_argument("--reflect", action="store_true")
    sp = add("relstruct", "Gamma cohomology and the witness-bounded substructure")
    sp.add_argument("--sequence", choices=["positive", "E_I"], default="positive")
    sp.add_argument("--window", type=int, default=6)
    sp = add("report", "all of the above as JSON")
    sp.add_argument("--json", dest="out", required=True, metavar="OUT", help="output file")
    sp.add_argument("--sequence", choices=["positive", "E_I"], default="positive")
    sp.add_argument("--window", type=int, default=6)
    nmax(sp)
    return p


def _echo(args) -> dict:
    skip = {"command", "json", "out", "bundle"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _text(rep: Report) -> str:
    lines = [f"{rep.command} {rep.inst.name} [{rep.inst.content_hash()}]"]
    res = rep.result
    if "gldim" in res:
        lines.append(f"positive global dimension: {res['gldim']['display']}")
    if "ext" in res:
        for row in res["ext"]["rows"]:
            vals = ", ".join(f"{k}={v}" for k, v in row.items() if k not in ("C", "A", "n"))
            lines.append(f"  ({row['C']}, {row['A']}) n={row['n']}: {vals}")
        if "agree" in res["ext"]:
            lines.append("oracles agree" if res["ext"]["agree"] else "oracles DISAGREE")
    if "les" in res:
        les = res["les"]
        lines.append(f"exactness checked: positive {les['positive']['checked']}, "
                     f"E_I {les['E_I']['checked']}, E_II {les['E_II']['checked']} "
                     f"(degrees {les['degrees'][0]}..{les['degrees'][1]})")
    if "balance" in res:
        b = res["balance"]
        lines.append(f"balanced: {b['balanced']}")
        for k, v in b["conditions"].items():
            lines.append(f"  ({k}): {'holds' if v else 'fails'}")
        eq = sum(1 for c in b["comparisons"] if c["equal"])
        lines.append(f"  image comparisons equal: {eq}/{len(b['comparisons'])}")
    if "defect" in res:
        d = res["defect"]
        lines.append(f"defects: {len(d['defects'])}, stable-Yoneda ok: "
                     f"{sum(1 for s in d['stable_yoneda'] if s['ok'])}/{len(d['stable_yoneda'])}")
        if "reflection" in d:
            lines.append(f"reflection checks: {d['reflection']['checked']}")
    if "relstruct" in res:
        s = res["relstruct"]["subfunctor"]
        lines.append(f"acyclic: {len(s['acyclic'])}, not acyclic: {len(s['non_acyclic'])}, "
                     f"proper substructure: {s['proper']}")
    if "validation" in res:
        v = res["validation"]
        lines.append(f"valid: {v['ok']} ({len(v['checks'])} checks)")
    lines += [f"finding: {f}" for f in rep.findings]
    lines += [f"VIOLATION: {v}" for v in rep.violations]
    lines += [f"caveat: {c}" for c in rep.caveats]
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        inst = load_fixture(args.bundle)
    except (InstanceError, OSError, ValueError, KeyError) as exc:
        print(f"error: cannot load {args.bundle}: {exc}", file=sys.stderr)
        return 2
    rep = Report(args.command, _echo(args), inst)
    if args.command != "validate":
        v = validate_instance(inst)
        if not v.ok:
            rep.violations += v.errors
            sys.stdout.write(rep.dumps() if getattr(args, "json", False) else _text(rep))
            return 2
    try:
        COMMANDS[args.command](rep, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.command == "report":
        Path(args.out).write_text(rep.dumps(), encoding="utf-8")
        sys.stdout.write(_text(rep))
    elif args.json:
        sys.stdout.write(rep.dumps())
    else:
        sys.stdout.write(_text(rep))
    if args.command == "validate" and rep.violations:
        return 2
    if rep.violations or (args.strict and rep.findings):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
