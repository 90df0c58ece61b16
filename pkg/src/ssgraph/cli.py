"""Command-line front end: graphs, Ob tables, trace predictions and cross-method verification."""
import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from time import perf_counter

from sympy import isprime, primerange

from . import __version__
from .curves import DEFAULT_SEED, minimal_torsion_field
from .errors import FieldTooLarge, SsgraphError, UnsupportedFormat, ValidationError
from .fields import DEFAULT_FIELD_CAP
from .isograph import IsogenyGraph, adjacency_matrix, graph_method, structural_checks, supersingular_set
from .mcmethod import mc_method, ob, ob_table, ob_table_csv
from .modular_data import available_levels
from .search import find_supersingular
from .tracecalc import (DEFAULT_STRATEGY, STRATEGIES, SUPERSINGULAR_PRIMES, TWO_VERTEX_SHAPES,
                        c_ell_all, epsilon, frobenius_trace_table, self_loops_per_vertex,
                        trace_predict, two_vertex_solve)

SCHEMA_VERSION = 1

SCHEMAS = {
    "graph": {
        "type": "object",
        "required": ["schema", "p", "ell", "nonresidue", "vertices", "edges"],
        "properties": {
            "schema": {"const": SCHEMA_VERSION},
            "p": {"type": "integer"},
            "ell": {"type": "integer"},
            "nonresidue": {"type": "integer", "description": "n with w^2 = n in F_{p^2}"},
            "vertices": {"type": "array", "items": {"type": "string", "pattern": "^[0-9]+(\\+[0-9]+\\*w)?$"}},
            "edges": {"type": "array", "items": {"type": "array", "prefixItems": [
                {"type": "string"}, {"type": "string"}, {"type": "integer", "minimum": 1}]}},
        },
    },
    "atkin": {
        "type": "object",
        "required": ["ell", "a", "b"],
        "properties": {
            "ell": {"type": "integer"},
            "a": {"type": "array", "items": {"type": "string"}, "description": "ell + 1 decimal coefficients, constant first"},
            "b": {"type": "array", "items": {"type": "string"}, "description": "ell + 2 decimal coefficients, constant first"},
        },
    },
    "verify": {
        "type": "object",
        "required": ["schema", "results", "all_ok"],
        "properties": {
            "schema": {"const": SCHEMA_VERSION},
            "all_ok": {"type": "boolean"},
            "results": {"type": "array", "items": {"type": "object", "required": [
                "p", "ell", "graphs_equal", "velu", "trace_match", "loops_match", "regularity",
                "connectivity", "conjugation_symmetry"]}},
        },
    },
    "frobtable_csv": {"columns": ["j", "abs_trace"], "order": "j ascending, then abs_trace"},
    "adjacency_csv": {"rows": "one line per vertex in canonical order, comma separated multiplicities"},
    "ob_table_csv": {"header": "ell\\p followed by the primes", "diagonal": "-"},
}


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _prime_list(text):
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = (int(x) for x in part.split("-"))
            out.extend(primerange(lo, hi + 1))
        elif part:
            out.append(int(part))
    return out


def _emit(text, out):
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj):
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _require_prime(name, value, minimum=5):
    if not isprime(value) or value < minimum:
        raise ValidationError(f"--{name} must be a prime >= {minimum}, got {value}")


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("SSGRAPH_SEED")
    return int(env, 0) if env else DEFAULT_SEED


def cmd_find(args):
    _require_prime("p", args.p)
    rec = find_supersingular(args.p).as_record()
    _emit(_dump(rec), args.out)


def render_graph(G, fmt):
    if fmt == "json":
        return G.to_json()
    if fmt == "dot":
        return G.to_dot()
    if fmt == "csv":
        return G.to_csv()
    raise UnsupportedFormat(f"unknown format {fmt!r}")


def build_graph(p, ell, method, seed, cap, data_dir):
    if p == ell:
        raise ValidationError("p and ell must differ")
    if method == "velu":
        return graph_method(p, ell, seed, cap)
    return mc_method(p, ell, data_dir=data_dir)


def cmd_graph(args):
    _require_prime("p", args.p)
    _require_prime("ell", args.ell, 2)
    _check_cap(args)
    G = build_graph(args.p, args.ell, args.method, _seed(args), args.field_cap, args.data)
    _emit(render_graph(G, args.format), args.out)


def _check_cap(args):
    if args.field_cap is not None and args.field_cap < args.p ** 2:
        raise ValidationError("--field-cap must be at least p^2")


def cmd_ob(args):
    if not isprime(args.p):
        raise ValidationError(f"--p must be prime, got {args.p}")
    _require_prime("ell", args.ell, 2)
    _emit(f"{ob(args.p, args.ell, data_dir=args.data)}\n", args.out)


def _table_primes(args):
    if args.set == "supersingular":
        return [q for q in SUPERSINGULAR_PRIMES if q <= args.max]
    return list(primerange(2, args.max + 1))


def cmd_ob_table(args):
    primes = _table_primes(args)
    levels = [ell for ell in primes if ell in available_levels(args.data)]
    M, report = ob_table(primes, levels, args.data)
    if args.format == "json":
        text = _dump({"schema": SCHEMA_VERSION, "primes": primes, "levels": levels,
                      "matrix": M, "symmetry": report})
    else:
        text = ob_table_csv(primes, levels, M)
    _emit(text, args.out)
    if not report["symmetric"]:
        return 4


def cmd_frobtable(args):
    table = frobenius_trace_table(args.ell)
    text = "j,abs_trace\n" + "".join(f"{j},{a}\n" for j, a in table.rows())
    _emit(text, args.out)


def cmd_trace(args):
    _require_prime("p", args.p)
    _require_prime("ell", args.ell, 2)
    if args.p == args.ell:
        raise ValidationError("p and ell must differ")
    loops = self_loops_per_vertex(args.p, args.ell, args.strategy)
    rec = {
        "schema": SCHEMA_VERSION,
        "p": args.p,
        "ell": args.ell,
        "strategy": args.strategy,
        "trace": str(trace_predict(args.p, args.ell, args.strategy)),
        "epsilon": epsilon(args.p, args.ell),
        "loops": {str(j): str(v) for j, v in loops.items()},
    }
    _emit(_dump(rec), args.out)


def verify_pair(p, ell, seed, cap, data_dir, strategy, timings=False):
    t0 = perf_counter()
    M = mc_method(p, ell, data_dir=data_dir)
    t1 = perf_counter()
    try:
        G = graph_method(p, ell, seed, cap)
        velu = "ran"
        equal = G == M
    except FieldTooLarge:
        G, velu, equal = None, f"skipped: F_(p^{2 * minimal_torsion_field(p, ell)}) over the field cap", None
    t2 = perf_counter()
    ref = G if G is not None else M
    checks = structural_checks(ref)
    trace = adjacency_matrix(ref)[1]
    predicted = trace_predict(p, ell, strategy)
    loops = self_loops_per_vertex(p, ell, strategy)
    t3 = perf_counter()
    rec = {
        "p": p,
        "ell": ell,
        "vertices": len(ref.vertices),
        "velu": velu,
        "graphs_equal": equal,
        "trace": trace,
        "predicted_trace": str(predicted),
        "trace_match": predicted == trace,
        "loops_match": loops == ref.loops(),
        "regularity": checks["regular"],
        "connectivity": checks["connected"],
        "conjugation_symmetry": checks["conjugation_symmetric"],
        "aut_weight_symmetry": checks["aut_weight_symmetric"],
    }
    if timings:
        rec["timings"] = {"modular": round(t1 - t0, 4), "velu": round(t2 - t1, 4),
                          "trace": round(t3 - t2, 4)}
    return rec


def _ok(rec):
    return all(rec[k] is not False for k in ("graphs_equal", "trace_match", "loops_match", "regularity",
                                              "connectivity", "conjugation_symmetry",
                                              "aut_weight_symmetry"))


def cmd_verify(args):
    ps = _prime_list(args.p)
    ells = _prime_list(args.ell)
    for p in ps:
        _require_prime("p", p)
    for ell in ells:
        _require_prime("ell", ell, 2)
    pairs = [(p, ell) for p in ps for ell in ells if p != ell]
    if not pairs:
        raise ValidationError("no (p, ell) pairs with p != ell")
    seed = _seed(args)

    def run(pair):
        return verify_pair(pair[0], pair[1], seed, args.field_cap, args.data, args.strategy, args.timings)

    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        results = list(pool.map(run, pairs))
    all_ok = all(_ok(r) for r in results)
    _emit(_dump({"schema": SCHEMA_VERSION, "strategy": args.strategy, "seed": seed,
                 "results": results, "all_ok": all_ok}), args.out)
    return 0 if all_ok else 4


def _reference_table():
    text = (resources.files("ssgraph") / "data" / "table1.json").read_text()
    return json.loads(text)


def cmd_repro_table1(args):
    ref = _reference_table()
    primes = [q for q in ref["primes"] if q <= args.max]
    levels = [ell for ell in primes if ell in available_levels(args.data)]
    M, report = ob_table(primes, levels, args.data)
    idx = {q: i for i, q in enumerate(ref["primes"])}
    mismatches = []
    for ell, row in zip(levels, M):
        for p, value in zip(primes, row):
            if value is not None and value != ref["matrix"][idx[ell]][idx[p]]:
                mismatches.append({"p": p, "ell": ell, "computed": value,
                                   "reference": ref["matrix"][idx[ell]][idx[p]]})
    _emit(ob_table_csv(primes, levels, M), args.out)
    summary = {"levels": levels, "pairs": sum(1 for r in M for v in r if v is not None),
               "mismatches": mismatches, "symmetric": report["symmetric"]}
    print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return 0 if not mismatches and report["symmetric"] else 4


def cmd_repro_traces(args):
    out = []
    ok = True
    for p in sorted(TWO_VERTEX_SHAPES):
        for ell in [q for q in available_levels(args.data) if q != p and q <= args.max]:
            a, M = two_vertex_solve(p, ell, strategy=args.strategy)
            G = mc_method(p, ell, data_dir=args.data)
            actual = adjacency_matrix(G)[0]
            ok &= actual == M
            out.append({"p": p, "ell": ell, "a": a, "matrix": M, "matches_graph": actual == M,
                        "vertices": [str(v) for v in G.vertices]})
    _emit(_dump({"schema": SCHEMA_VERSION, "strategy": args.strategy, "results": out}), args.out)
    return 0 if ok else 4


def cmd_repro_frobtables(args):
    out = []
    ok = True
    for ell in primerange(5, args.max + 1):
        table = frobenius_trace_table(ell)
        census = sorted(table.by_trace[0])
        ss = sorted(j.a for j in supersingular_set(ell) if j.is_rational())
        row = {"ell": ell, "trace_zero": census, "supersingular_in_Fl": ss, "agree": census == ss}
        if ell <= args.c_max:
            cs = c_ell_all(ell)
            row["c"] = {str(-d): c for d, c in cs.items()}
            row["c_sum"] = sum(cs.values())
            row["agree"] = row["agree"] and row["c_sum"] == ell
        ok &= row["agree"]
        out.append(row)
    _emit(_dump({"schema": SCHEMA_VERSION, "results": out}), args.out)
    return 0 if ok else 4


def build_parser():
    parser = Parser(prog="ssgraph", description=__doc__)
    parser.add_argument("--version", action="version", version=f"ssgraph {__version__}")
    parser.add_argument("--describe", action="store_true", help="print the JSON schemas and exit")
    sub = parser.add_subparsers(dest="command", parser_class=Parser)

    def common(sp, out=True):
        sp.add_argument("--data", default=None, help="directory with atkin_<ell>.json files")
        sp.add_argument("--seed", type=lambda s: int(s, 0), default=None)
        sp.add_argument("--field-cap", type=int, default=DEFAULT_FIELD_CAP)
        sp.add_argument("--threads", type=int, default=1)
        if out:
            sp.add_argument("--out", default=None)

    sp = sub.add_parser("find", help="one supersingular curve over F_p")
    sp.add_argument("--p", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_find)

    sp = sub.add_parser("graph", help="the isogeny graph")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--method", choices=["modular", "velu"], default="modular")
    sp.add_argument("--format", choices=["json", "dot", "csv"], default="json")
    common(sp)
    sp.set_defaults(func=cmd_graph)

    sp = sub.add_parser("ob", help="quadratic factor count of the level-ell supersingular polynomial")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_ob)

    sp = sub.add_parser("ob-table", help="matrix of Ob values")
    sp.add_argument("--set", choices=["supersingular", "all"], default="supersingular")
    sp.add_argument("--max", type=int, default=19)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    common(sp)
    sp.set_defaults(func=cmd_ob_table)

    sp = sub.add_parser("frobtable", help="Frobenius trace census over F_ell")
    sp.add_argument("--ell", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_frobtable)

    sp = sub.add_parser("trace", help="predicted loop counts")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--strategy", choices=STRATEGIES, default=DEFAULT_STRATEGY)
    common(sp)
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("verify", help="run all three methods and compare")
    sp.add_argument("--p", required=True, help="prime, comma list or range like 5-50")
    sp.add_argument("--ell", required=True, help="prime, comma list or range")
    sp.add_argument("--strategy", choices=STRATEGIES, default=DEFAULT_STRATEGY)
    sp.add_argument("--timings", action="store_true", help="include wall-clock timings")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("repro-table1", help="recompute the Ob table and compare with the reference")
    sp.add_argument("--max", type=int, default=19)
    common(sp)
    sp.set_defaults(func=cmd_repro_table1)

    sp = sub.add_parser("repro-traces", help="two-vertex matrices for p = 11, 17, 19")
    sp.add_argument("--max", type=int, default=19)
    sp.add_argument("--strategy", choices=STRATEGIES, default=DEFAULT_STRATEGY)
    common(sp)
    sp.set_defaults(func=cmd_repro_traces)

    sp = sub.add_parser("repro-frobtables", help="Frobenius census against the supersingular sets")
    sp.add_argument("--max", type=int, default=31)
    sp.add_argument("--c-max", type=int, default=19)
    common(sp)
    sp.set_defaults(func=cmd_repro_frobtables)
    return parser


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.describe:
        sys.stdout.write(_dump(SCHEMAS))
        return 0
    if not args.command:
        parser.error("a command is required")
    try:
        code = args.func(args)
    except SsgraphError as exc:
        print(f"ssgraph: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"ssgraph: {exc}", file=sys.stderr)
        return 2
    return code or 0


def main(argv=None):
    sys.exit(run(argv))


def load_graph(path):
    with open(path) as fh:
        return IsogenyGraph.from_json(fh.read())
