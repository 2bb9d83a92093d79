"""Command-line front end: JSON ingestion, subcommand dispatch and reports.

Exit codes: 0 success, 2 unparseable or invalid input, 3 a budget was
exceeded (rerun with --slow or a larger --budget), 4 the class-2 formula and
the cohomology oracle disagree.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from brunr import __version__, class2, cohomology, groups, lattices
from brunr.budgets import Budgets, from_env, parse_budget_string
from brunr.errors import BrunrError, BudgetExceeded
from brunr.exactalg import factorize, is_prime, rref_mod_p

REPORT_SCHEMA = "brunr.report/1"
SPEC_SCHEMA = "brunr.groupspec/1"

EXIT_OK, EXIT_PARSE, EXIT_BUDGET, EXIT_DISAGREE = 0, 2, 3, 4


class InputError(Exception):
    """Raised for anything that should map to exit code 2."""


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    return "sha256:" + hashlib.sha256(canonical_json(obj).encode()).hexdigest()


# ---------------------------------------------------------------------------
# group specifications

SPEC_KINDS = ("cayley", "abelian", "permutation", "central_extension")
_PAYLOAD_KEYS = {
    "cayley": {"table"},
    "abelian": {"invariants"},
    "permutation": {"degree", "generators"},
    "central_extension": {"p", "gamma_rank", "c_rank", "lambda"},
}


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    payload: dict
    name: str = ""

    def __post_init__(self):
        if self.kind not in SPEC_KINDS:
            raise InputError(f"unknown group kind {self.kind!r}; expected one of {SPEC_KINDS}")
        keys = set(self.payload)
        need = _PAYLOAD_KEYS[self.kind]
        if self.kind == "central_extension":
            need = need - {"c_rank"}
        if not need <= keys or not keys <= _PAYLOAD_KEYS[self.kind]:
            raise InputError(f"{self.kind} spec needs keys {sorted(need)}, got {sorted(keys)}")
        try:
            self._validate()
        except (TypeError, ValueError) as exc:
            raise InputError(f"invalid {self.kind} spec: {exc}") from exc

    def _validate(self):
        P = self.payload
        if self.kind == "cayley":
            T = P["table"]
            n = len(T)
            if n == 0 or any(len(r) != n for r in T):
                raise ValueError("table must be a nonempty square array")
            if any(not 0 <= int(x) < n for r in T for x in r):
                raise ValueError("table entries out of range")
        elif self.kind == "abelian":
            if any(int(x) < 2 for x in P["invariants"]):
                raise ValueError("invariants must be at least 2")
        elif self.kind == "permutation":
            deg = int(P["degree"])
            for g in P["generators"]:
                if sorted(int(x) for x in g) != list(range(deg)):
                    raise ValueError(f"{g} is not a permutation of range({deg})")
        else:
            class2.CentralExtensionData.from_json(P)  # validates p and the shape

    @property
    def extension(self):
        return class2.CentralExtensionData.from_json(self.payload) if self.kind == "central_extension" else None

    def to_json(self) -> dict:
        out = {"schema": SPEC_SCHEMA, "kind": self.kind, **self.payload}
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, obj) -> "GroupSpec":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InputError("a group spec is a JSON object with a 'kind' field")
        schema = obj.get("schema", SPEC_SCHEMA)
        if schema != SPEC_SCHEMA:
            raise InputError(f"unsupported spec schema {schema!r}")
        payload = {k: v for k, v in obj.items() if k not in ("schema", "kind", "name")}
        if obj["kind"] == "central_extension" and "c_rank" not in payload and "lambda" in payload:
            payload["c_rank"] = len(payload["lambda"])
        return cls(obj["kind"], payload, obj.get("name", ""))

    def digest(self) -> str:
        return digest(self.to_json())

    def build(self, order_bound=groups.DEFAULT_ORDER_BOUND) -> groups.CayleyGroup:
        P = self.payload
        if self.kind == "cayley":
            G = groups.from_cayley_table(P["table"], name=self.name)
        elif self.kind == "abelian":
            G = groups.from_abelian(P["invariants"], name=self.name)
        elif self.kind == "permutation":
            G = groups.from_permutations(int(P["degree"]), [tuple(g) for g in P["generators"]],
                                         order_bound=order_bound, name=self.name)
        else:
            G = groups.from_central_extension(self.extension, order_bound=order_bound, name=self.name)
        return G


def _load_json(text_or_path: str):
    s = text_or_path.strip()
    try:
        if s.startswith("{") or s.startswith("["):
            return json.loads(s)
        return json.loads(Path(s).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {text_or_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {text_or_path}: {exc}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc


def spec_from_group_string(text: str) -> GroupSpec:
    """``abelian:2,2,2``, ``cyclic:6``, ``named:S4`` or a bare catalog name."""
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if not rest:
        kind, rest = "named", text
    if kind == "abelian":
        return GroupSpec("abelian", {"invariants": _int_list(rest)})
    if kind == "cyclic":
        return GroupSpec("abelian", {"invariants": _int_list(rest)[:1]})
    if kind == "named":
        try:
            G = groups.named_group(rest)
        except KeyError as exc:
            raise InputError(str(exc)) from exc
        return GroupSpec("cayley", {"table": G.table.tolist()}, name=G.name)
    if kind in ("spec", "file"):
        return GroupSpec.from_json(_load_json(rest))
    raise InputError(f"unknown group source {kind!r}")


def group_spec_from_args(args) -> GroupSpec:
    sources = [(k, getattr(args, k, None)) for k in ("spec", "abelian", "perm", "cayley", "ext", "group", "named")]
    given = [(k, v) for k, v in sources if v is not None]
    if len(given) != 1:
        raise InputError("give exactly one group source (--spec, --abelian, --perm, --cayley, --ext, --group, --named)")
    k, v = given[0]
    if k == "spec":
        return GroupSpec.from_json(_load_json(v))
    if k == "abelian":
        return GroupSpec("abelian", {"invariants": _int_list(v)})
    if k == "perm":
        obj = _load_json(v)
        return GroupSpec("permutation", {"degree": obj["degree"], "generators": obj["generators"]}, obj.get("name", ""))
    if k == "cayley":
        obj = _load_json(v)
        table = obj["table"] if isinstance(obj, dict) else obj
        return GroupSpec("cayley", {"table": table}, obj.get("name", "") if isinstance(obj, dict) else "")
    if k == "ext":
        obj = dict(_load_json(v))
        obj.pop("schema", None)
        obj["kind"] = "central_extension"
        return GroupSpec.from_json(obj)
    if k == "group":
        return spec_from_group_string(v)
    return spec_from_group_string("named:" + v)


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    command: str
    args: dict
    input: dict | None
    result: dict
    witnesses: dict = field(default_factory=dict)
    budgets: dict = field(default_factory=dict)
    timing: dict | None = None
    summary: list = field(default_factory=list)
    exit_code: int = 0

    @property
    def input_digest(self):
        return digest(self.input) if self.input is not None else None

    def to_json(self) -> dict:
        out = {
            "schema": REPORT_SCHEMA,
            "version": __version__,
            "command": self.command,
            "args": self.args,
            "input": self.input,
            "input_digest": self.input_digest,
            "result": self.result,
            "witnesses": self.witnesses,
            "budgets": self.budgets,
            "summary": self.summary,
            "exit_code": self.exit_code,
        }
        if self.timing is not None:
            out["timing"] = self.timing
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, obj: dict) -> "Report":
        if obj.get("schema") != REPORT_SCHEMA:
            raise InputError(f"unsupported report schema {obj.get('schema')!r}")
        r = cls(obj["command"], obj["args"], obj["input"], obj["result"], obj.get("witnesses", {}),
                obj.get("budgets", {}), obj.get("timing"), obj.get("summary", []), obj.get("exit_code", 0))
        if obj.get("input_digest") != r.input_digest:
            raise InputError("input digest does not match the embedded input")
        return r


def _factors(st) -> list[int]:
    return list(st.invariant_factors)


def _fmt(factors) -> str:
    factors = list(factors)
    return "trivial" if not factors else " + ".join(f"Z/{d}" for d in factors)


def _tables(gens, n):
    return [np.asarray(g, dtype=object).reshape(n, n, -1).squeeze(-1).tolist() if n else [] for g in gens]


# ---------------------------------------------------------------------------
# commands


def _budgets(args, primary_key) -> Budgets:
    b = from_env()
    if args.budget is not None:
        b = parse_budget_string(args.budget, b)
    if b.primary is not None:
        from dataclasses import replace

        b = replace(b, **{primary_key: b.primary}, primary=None)
    if args.slow:
        b = b.lifted()
    return b


def _group_json(G):
    return {"order": G.order, "name": G.name}


def cmd_b0(args) -> Report:
    spec = group_spec_from_args(args)
    b = _budgets(args, "b0")
    ext = spec.extension
    result, witnesses, summary = {}, {}, []
    code = EXIT_OK
    formula = None
    if ext is not None:
        formula = class2.bogomolov_class2(ext, budget=b.sbic)
        result["formula"] = {"invariant_factors": _factors(formula), "group_order": ext.group_order}
        witnesses["formula_complement"] = [list(g) for g in formula.generators]
        summary.append(f"class-2 formula: B_G = {_fmt(formula.invariant_factors)} (|G| = {ext.group_order})")
        if b.b0 is not None and ext.group_order > b.b0:
            result["oracle"] = {"skipped": f"|G| = {ext.group_order} exceeds the b0 budget {b.b0}"}
            result["agreement"] = None
            summary.append(f"cohomology oracle skipped: |G| = {ext.group_order} over budget {b.b0}")
            return Report("b0", _args_echo(args), spec.to_json(), result, witnesses, b.to_json(), summary=summary)
    G = spec.build()
    B = cohomology.b0(G, args.family, budget=b.b0)
    result["group"] = _group_json(G)
    result["oracle"] = {"family": args.family, "invariant_factors": _factors(B)}
    witnesses["oracle_cocycles"] = _tables(B.generators or (), G.order)
    summary.append(f"b0(G) over {args.family} subgroups: {_fmt(B.invariant_factors)} (|G| = {G.order})")
    if formula is not None:
        agree = B.invariant_factors == formula.invariant_factors
        result["agreement"] = agree
        summary.append("formula and oracle agree" if agree else "DISAGREEMENT between formula and oracle")
        if not agree:
            code = EXIT_DISAGREE
    return Report("b0", _args_echo(args), spec.to_json(), result, witnesses, b.to_json(), summary=summary,
                  exit_code=code)


def cmd_classify(args) -> Report:
    obj = _load_json(args.subspace)
    try:
        p, d, basis = int(obj["p"]), int(obj.get("d", 4)), [[int(x) for x in r] for r in obj["basis"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"subspace JSON needs p, d and basis: {exc}") from exc
    if not is_prime(p):
        raise InputError(f"p = {p} is not prime")
    if any(len(r) != class2.wedge_dim(d) for r in basis):
        raise InputError(f"basis rows must have length {class2.wedge_dim(d)}")
    b = _budgets(args, "sbic")
    c = class2.classify_subspace(basis, p, d, budget=b.sbic)
    inp = {"p": p, "d": d, "basis": basis}
    summary = [f"{c.label}: |G| = {c.predicted_group_order}, B_G = {_fmt(c.b_factors)}"]
    return Report("classify", _args_echo(args), inp, c.to_json(), {"basis": basis}, b.to_json(), summary=summary)


def cmd_examples(args) -> Report:
    b = _budgets(args, "sbic")
    cases = sorted(class2.CASES) if args.case == "all" else [int(args.case)]
    rows, witnesses, summary = [], {}, []
    for case in cases:
        if case not in class2.CASES:
            raise InputError(f"case must be 1..5 or 'all', got {case}")
        ext = class2.example_case(case, args.p)
        B = class2.bogomolov_class2(ext, budget=b.sbic)
        label = class2.CASES[case][0]
        rows.append({"case": case, "label": label, "group_order": ext.group_order,
                     "B_G": _factors(B)})
        witnesses[f"case{case}"] = ext.to_json()
        summary.append(f"case {case} ({label}): |G| = {ext.group_order} = {args.p}^{ext.gamma_rank + ext.c_rank}, "
                       f"B_G = {_fmt(B.invariant_factors)}")
    return Report("examples", _args_echo(args), {"case": args.case, "p": args.p}, {"rows": rows}, witnesses,
                  b.to_json(), summary=summary)


def cmd_pfaffian(args) -> Report:
    b = _budgets(args, "sbic")
    m, p = args.m, args.p
    if not is_prime(p):
        raise InputError(f"p = {p} is not prime")
    S, hyper = class2.pfaffian_family_subspace(m, p)
    ext = class2.pfaffian_family(m, p, budget=b.sbic)
    Sb = class2.s_bic(S, 2 * m, p, budget=b.sbic)
    hyper_rref = rref_mod_p(hyper, class2.wedge_dim(2 * m), p) if hyper else []
    B = class2.bogomolov_class2(ext, budget=b.sbic)
    result = {"gamma_rank": 2 * m, "dim_S": len(S), "dim_S_bic": len(Sb),
              "s_bic_is_hyperplane": Sb == hyper_rref, "group_order": ext.group_order, "B_G": _factors(B)}
    summary = [f"block family m={m}, p={p}: S_bic {'=' if result['s_bic_is_hyperplane'] else '!='} "
               f"{{lambda = 0}}, B_G = {_fmt(B.invariant_factors)}"]
    return Report("pfaffian", _args_echo(args), {"m": m, "p": p}, result,
                  {"S": S, "S_bic": Sb, "extension": ext.to_json()}, b.to_json(), summary=summary)


def cmd_lattice(args) -> Report:
    spec = group_spec_from_args(args)
    b = _budgets(args, "lattice")
    G = spec.build()
    if args.lattice:
        L = lattices.lattice_from_json(G, _load_json(args.lattice))
        inp = {"group": spec.to_json(), "lattice": L.to_json()}
    else:
        L = lattices.make_lattice(G, args.kind, budget=b.rank)
        inp = {"group": spec.to_json(), "lattice_kind": args.kind}
    H = lattices.h2_lattice(G, L, route=args.route, budget=b.lattice)
    result = {"group": _group_json(G), "rank": L.rank, "kind": L.kind,
              "tate_h0": _factors(lattices.tate_h0(G, L)), "h2": H.to_json()}
    summary = [f"L = {L.kind} lattice of rank {L.rank} over |G| = {G.order}",
               f"H0^(G, L) = {_fmt(result['tate_h0'])}",
               f"H^2(G, L) = {_fmt(H.invariant_factors)} ({H.route} route)"]
    if L.kind == "standard":
        so = lattices.standard_obstruction(G)
        result["standard_obstruction"] = _factors(so)
        summary.append(f"standard obstruction = {_fmt(so.invariant_factors)}")
    mk = lattices.multiplicative_kernel(G, L, route="shifted" if H.route == "shifted" else "direct",
                                        budget=b.lattice, b0_budget=b.b0)
    result["multiplicative_kernel"] = _factors(mk)
    summary.append(f"multiplicative kernel = {_fmt(mk.invariant_factors)}")
    return Report("lattice", _args_echo(args), inp, result, {}, b.to_json(), summary=summary)


def cmd_sylow(args) -> Report:
    spec = group_spec_from_args(args)
    G = spec.build()
    per = {}
    for p in sorted(factorize(G.order)):
        P, _ = groups.as_group(groups.sylow_subgroup(G, p))
        per[str(p)] = {"order": P.order, "abelian": groups.is_abelian(P), "cyclic": groups.is_cyclic(P),
                       "bicyclic": groups.is_bicyclic(P)}
    result = {"group": _group_json(G), "sylow": per,
              "all_sylow_bicyclic": all(v["bicyclic"] for v in per.values()),
              "all_sylow_cyclic": all(v["cyclic"] for v in per.values())}
    summary = [f"all Sylow subgroups bicyclic: {result['all_sylow_bicyclic']}",
               f"all Sylow subgroups cyclic: {result['all_sylow_cyclic']}"]
    return Report("sylow", _args_echo(args), spec.to_json(), result, {}, {}, summary=summary)


def small_extension_sweep(p=2, max_gamma=3, max_c=2, max_order=32):
    """Every datum (lambda over Gamma-rank <= max_gamma, C-rank <= max_c) with |G| <= max_order."""
    out = []
    for d in range(max_gamma + 1):
        for c in range(max_c + 1):
            if p ** (d + c) > max_order:
                continue
            D = class2.wedge_dim(d)
            for flat in itertools.product(range(p), repeat=c * D):
                rows = [flat[i * D:(i + 1) * D] for i in range(c)]
                out.append(class2.CentralExtensionData.from_lambda(p, d, rows))
    return out


def cmd_oracle_compare(args) -> Report:
    b = _budgets(args, "b0")
    if args.ext:
        exts = [class2.CentralExtensionData.from_json(_load_json(x)) for x in args.ext]
    else:
        exts = small_extension_sweep() + [class2.CentralExtensionData.from_lambda(3, 2, [[1]])]
    rows, bad = [], 0
    for ext in exts:
        formula = class2.bogomolov_class2(ext, budget=b.sbic)
        G = groups.from_central_extension(ext)
        oracle = cohomology.b0(G, args.family, budget=b.b0)
        agree = oracle.invariant_factors == formula.invariant_factors
        bad += not agree
        rows.append({"extension": ext.to_json(), "formula": _factors(formula), "oracle": _factors(oracle),
                     "agree": agree})
    summary = [f"{len(rows) - bad}/{len(rows)} data agree"]
    inp = {"extensions": [e.to_json() for e in exts]}
    return Report("oracle-compare", _args_echo(args), inp, {"rows": rows, "disagreements": bad}, {},
                  b.to_json(), summary=summary, exit_code=EXIT_DISAGREE if bad else EXIT_OK)


# ---------------------------------------------------------------------------
# argument parsing

_ECHO_SKIP = {"func", "json", "no_timing"}


def _args_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in _ECHO_SKIP and v is not None}


def _common(p: argparse.ArgumentParser):
    p.add_argument("--json", action="store_true", help="print the full JSON report")
    p.add_argument("--slow", action="store_true", help="lift every budget")
    p.add_argument("--budget", help="N (primary budget of this command) or key=value,... (h2, b0, sbic, lattice, rank)")
    p.add_argument("--seedless", action="store_true", help="accepted for compatibility; nothing here is random")
    p.add_argument("--no-timing", action="store_true", help="omit wall-clock timing (byte-stable reports)")


def _group_sources(p: argparse.ArgumentParser):
    g = p.add_argument_group("group source (exactly one)")
    g.add_argument("--spec", help="GroupSpec JSON file or inline JSON")
    g.add_argument("--abelian", help="invariants, e.g. 2,2,2")
    g.add_argument("--perm", help="JSON file with degree and generators")
    g.add_argument("--cayley", help="JSON file with a multiplication table")
    g.add_argument("--ext", help="central-extension JSON (p, gamma_rank, c_rank, lambda)")
    g.add_argument("--group", help="kind:args, e.g. abelian:2,2,2, cyclic:6, named:S4")
    g.add_argument("--named", help="a catalog group name, e.g. S4, Q8, Heis27")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="brunr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"brunr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("b0", help="Bogomolov obstruction of a group")
    _group_sources(p)
    p.add_argument("--family", choices=["bicyclic", "abelian"], default="bicyclic")
    _common(p)
    p.set_defaults(func=cmd_b0)

    p = sub.add_parser("classify", help="classify a subspace S of Lambda^2 (F_p)^4")
    p.add_argument("subspace", help="JSON file or inline JSON with p, d, basis")
    _common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("examples", help="the five class-2 example groups")
    p.add_argument("case", help="1..5 or all")
    p.add_argument("p", type=int)
    _common(p)
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("pfaffian", help="the block-matrix Pfaffian family")
    p.add_argument("m", type=int)
    p.add_argument("p", type=int)
    _common(p)
    p.set_defaults(func=cmd_pfaffian)

    p = sub.add_parser("lattice", help="Tate H^0, H^2 and obstructions of a G-lattice")
    _group_sources(p)
    p.add_argument("--kind", choices=["trivial", "regular", "pair", "augmentation", "standard"], default="standard")
    p.add_argument("--lattice", help="GLattice JSON (rank, action) instead of --kind")
    p.add_argument("--route", choices=["auto", "direct", "shifted"], default="auto")
    _common(p)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("sylow", help="Sylow subgroup criteria")
    _group_sources(p)
    _common(p)
    p.set_defaults(func=cmd_sylow)

    p = sub.add_parser("oracle-compare", help="class-2 formula versus cohomology oracle")
    p.add_argument("--ext", action="append", help="central-extension JSON (repeatable); default: the small sweep")
    p.add_argument("--family", choices=["bicyclic", "abelian"], default="bicyclic")
    _common(p)
    p.set_defaults(func=cmd_oracle_compare)
    return parser


def run(argv=None):
    """Parse and execute; returns (exit code, report or None, error message, args)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        report = args.func(args)
    except InputError as exc:
        return EXIT_PARSE, None, f"input error: {exc}", args
    except BudgetExceeded as exc:
        return EXIT_BUDGET, None, f"budget exceeded: {exc}; rerun with --slow or a larger --budget", args
    except (BrunrError, KeyError, ValueError) as exc:
        return EXIT_PARSE, None, f"invalid input: {exc}", args
    if not args.no_timing:
        report.timing = {"seconds": round(time.perf_counter() - t0, 6)}
    return report.exit_code, report, "", args


def main(argv=None) -> int:
    try:
        code, report, err, args = run(argv)
    except SystemExit as exc:  # argparse
        return int(exc.code or 0)
    if report is None:
        print(err, file=sys.stderr)
        return code
    if args.json:
        sys.stdout.write(report.dumps())
    else:
        for line in report.summary:
            print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
