"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 inconclusive
(budget exhausted or an approximation that could not be certified).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Optional

from . import coset_graph as cg
from .complexes import (
    SimplicialComplex,
    SubcomplexRef,
    _closure,
    bouquet_count_direct,
    bouquet_count_formula,
    contractibility_certificate,
    is_spanning_subcomplex,
)
from .errors import BudgetExceeded, InvalidInput, default_budget
from .growth import rank_growth, rho, subgroup_element_count, transversal_series
from .intersection import burns_audit, cogrowth_product_check, intersect
from .membership import INCONCLUSIVE, GwpInstance, GwpSolver, contains, normal_closure_graph, rewrite
from .pathological import build_pathological, pathological_transversals
from .rank_formula import ball_expressions, rank_estimate
from .transversal import STRATEGIES, schreier_basis, spanning_transversal
from .words import LETTERS, Word, ball_size, parse_letters

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --- input helpers ----------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc


def _load_json(path: str):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from exc


def _word_list(spec: str) -> list[str]:
    if spec.startswith("@"):
        spec = _read(spec[1:])
    return [w for w in spec.replace(",", " ").split() if w]


def _infer_rank(words) -> int:
    rank = 2
    for w in words:
        for ch in w:
            if ch.isalpha():
                rank = max(rank, LETTERS.index(ch.lower()) + 1)
    return rank


def _subgroup(args, flag: str = "subgroup"):
    """The graph named by --subgroup (words or @file) or --input (graph JSON)."""
    spec = getattr(args, flag, None)
    path = getattr(args, "input", None) if flag == "subgroup" else None
    if path:
        return cg.from_json(_load_json(path))
    if spec is None:
        raise InvalidInput(f"--{flag} or --input is required")
    if spec.startswith("@") and spec.endswith(".json"):
        return cg.from_json(_load_json(spec[1:]))
    words = _word_list(spec)
    rank = args.rank or _infer_rank(words)
    if getattr(args, "normal", False):
        closure = normal_closure_graph(rank, words, radius=args.horizon + 2)
        if not closure.exact:
            print(f"warning: normal closure is an approximation ({'; '.join(closure.notes)}); "
                  f"values are reliable only up to radius {args.horizon}", file=sys.stderr)
        return closure.graph
    return cg.build_from_generators(rank, words)


def _word(text: str, rank: int) -> Word:
    return Word.parse(text, rank)


def _emit(obj, args) -> None:
    if isinstance(obj, dict):
        obj = dict(obj)
        obj["seed"] = args.seed
        sys.stdout.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")
    else:
        sys.stdout.write(obj)


def _csv(rows, header, args) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if c is None else c for c in row])
    buf.write(f"# seed={args.seed}\n")
    return buf.getvalue()


def _fold_json(data) -> cg.CosetGraph:
    """Fold a possibly unfolded graph given as {"rank", "edges": [...]}."""
    try:
        rank = int(data["rank"])
        ids = {}
        folder = cg.Folder(rank)
        base = data.get("base", 0)
        ids[base] = 0
        for e in data["edges"]:
            for end in (e["from"], e["to"]):
                if end not in ids:
                    ids[end] = folder.new_vertex()
            x = parse_letters(e["label"], rank)
            if len(x) != 1:
                raise InvalidInput(f"bad edge label {e['label']!r}")
            folder.add_edge(ids[e["from"]], x[0], ids[e["to"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed graph JSON: {exc}") from exc
    return folder.graph()


# --- subcommands ------------------------------------------------------------


def _export(g: cg.CosetGraph, args) -> None:
    if args.export == "dot":
        _emit(cg.to_dot(g), args)
    else:
        _emit(cg.to_json(g), args)


def cmd_graph(args) -> int:
    if args.action == "build":
        g = _subgroup(args)
    elif args.action == "fold":
        g = _fold_json(_load_json(args.input)) if args.input else _subgroup(args)
    elif args.action == "core":
        g = cg.core(_subgroup(args))
    else:
        g = _subgroup(args)
    _export(g, args)
    return EXIT_OK


def cmd_transversal(args) -> int:
    """Labels one per line in ShortLex order, then the basis as a JSON array."""
    g = _subgroup(args)
    t = spanning_transversal(cg.LazyCompletion(g), args.strategy)
    lines = [str(w) for w in t.words()]
    lines.append(json.dumps([b.to_json() for b in schreier_basis(t)]))
    _emit("\n".join(lines) + "\n", args)
    return EXIT_OK


def cmd_rank(args) -> int:
    est = rank_estimate(_subgroup(args), args.horizon)
    out = _csv(enumerate(est.values), ["i", "r"], args)
    _emit(out + f"# verdict: {est.verdict}\n", args)
    return EXIT_OK


def cmd_growth(args) -> int:
    g = _subgroup(args)
    view = cg.LazyCompletion(g)
    h = args.horizon
    t = spanning_transversal(view, "shortlex-bfs")
    gamma, Gamma = transversal_series(t, h)
    r = ball_expressions(t, h)
    budget = args.budget or default_budget()
    rows = []
    for i in range(h + 1):
        fits = ball_size(g.rank, i) <= budget
        rk = rank_growth(view, i, budget) if fits else None
        count = subgroup_element_count(view, i, budget) if fits else None
        rows.append((i, gamma[i], Gamma[i], r[i], rho(view, i), rk, count))
    _emit(_csv(rows, ["i", "gamma", "Gamma", "r", "rho", "rk", "count"], args), args)
    return EXIT_OK


def cmd_member(args) -> int:
    g = _subgroup(args)
    print("yes" if contains(g, _word(args.word, g.rank)) else "no")
    return EXIT_OK


def cmd_rewrite(args) -> int:
    g = _subgroup(args)
    t = spanning_transversal(cg.LazyCompletion(g), args.strategy)
    _emit(rewrite(t, _word(args.word, g.rank)).to_json(), args)
    return EXIT_OK


def cmd_gwp(args) -> int:
    inst = GwpInstance.from_json(_load_json(args.instance), args.rank)
    solver = GwpSolver(inst, args.budget or 10**5)
    results = {}
    code = EXIT_OK
    for text in args.word:
        verdict = solver.decide(_word(text, inst.rank))
        if verdict is INCONCLUSIVE:
            code = EXIT_INCONCLUSIVE
            results[text] = "inconclusive"
        else:
            results[text] = "yes" if verdict else "no"
    report = {"decisions": results, "certified_radius": solver.certified, "ball_counts": solver.ball_counts}
    if solver.unverified_rule:
        report["note"] = "rk stopping rule is an unverified reading"
    _emit(report, args)
    return code


def cmd_intersect(args) -> int:
    g1, g2 = _subgroup(args), _subgroup(args, "other")
    h = intersect(g1, g2)
    audit = burns_audit(g1, g2, args.horizon, args.budget)
    product = cogrowth_product_check(g1, g2, args.horizon)
    _emit({
        "graph": cg.to_json(h),
        "rank": cg.cyclomatic_rank(h),
        "burns_table": audit.table(),
        "partial": audit.partial,
        "cogrowth_product": [list(row) for row in product.rows],
    }, args)
    return EXIT_OK


def cmd_patho(args) -> int:
    pg = build_pathological(args.c, args.steps)
    t_lin, t_exp = pathological_transversals(pg)
    horizon = pg.graph.num_vertices - 1
    _emit({
        "c": pg.c,
        "steps": pg.steps,
        "graph": cg.to_json(pg.graph),
        "T_linear": {"tree_edges": sorted(map(list, t_lin.tree_edges)),
                     "Gamma": transversal_series(t_lin, horizon)[1].values},
        "T_exp": {"tree_edges": sorted(map(list, t_exp.tree_edges)),
                  "Gamma": transversal_series(t_exp, horizon)[1].values},
    }, args)
    return EXIT_OK


def _complex(path: str) -> SimplicialComplex:
    return SimplicialComplex.from_json(_load_json(path))


def _sub(c: SimplicialComplex, path: Optional[str]) -> SubcomplexRef:
    if path is None:
        return c.whole()
    data = _load_json(path)
    if isinstance(data, dict):
        data = data.get("principal")
    try:
        return SubcomplexRef(c, _closure(data))
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed subcomplex: {exc}") from exc


def cmd_complex(args) -> int:
    c = _complex(args.complex)
    d = _sub(c, args.sub)
    if args.action == "check-spanning":
        _emit({"spanning": is_spanning_subcomplex(d, c)}, args)
    elif args.action == "certify":
        cert = contractibility_certificate(d, with_homology=True)
        _emit({"verdict": cert.verdict, "remaining": cert.remaining,
               "reduced_homology": [[f, t] for f, t in cert.homology]}, args)
    else:
        if args.method == "direct":
            _emit({"method": "direct", "r": bouquet_count_direct(c, d)}, args)
        else:
            res = bouquet_count_formula(c, d)
            _emit({"method": "formula", "r": res.limit, "values": [str(v) for v in res.values]}, args)
    return EXIT_OK


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stallings", description="Coset graphs, transversals and growth of subgroups of free groups.")
    p.add_argument("--seed", type=int, default=0, help="random seed, recorded in JSON and CSV outputs")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def subgroup_args(q, horizon: Optional[int] = None):
        q.add_argument("-g", "--subgroup", help="comma-separated generators, or @file")
        q.add_argument("-i", "--input", help="graph JSON file")
        q.add_argument("-n", "--rank", type=int, help="rank of the free group (default: from the letters, at least 2)")
        if horizon is not None:
            q.add_argument("--horizon", type=int, default=horizon, help="largest radius (default %(default)s)")

    q = sub.add_parser("graph", help="build, fold, core or export a folded graph")
    q.add_argument("action", choices=["build", "fold", "core", "export"])
    subgroup_args(q)
    q.add_argument("--export", choices=["json", "dot"], default="json")
    q.set_defaults(func=cmd_graph)

    q = sub.add_parser("transversal", help="spanning tree labels and Schreier basis")
    subgroup_args(q)
    q.add_argument("--strategy", choices=STRATEGIES[:2], default="shortlex-bfs")
    q.set_defaults(func=cmd_transversal)

    q = sub.add_parser("rank", help="rank formula over concentric tree balls")
    subgroup_args(q, horizon=8)
    q.set_defaults(func=cmd_rank)

    q = sub.add_parser("growth", help="growth series as CSV")
    subgroup_args(q, horizon=6)
    q.add_argument("--normal", action="store_true", help="treat generators as normal generators (finite quotients exact)")
    q.add_argument("--budget", type=int, help="enumeration budget for rk and count (default STALLINGS_BUDGET or 10^6)")
    q.set_defaults(func=cmd_growth)

    q = sub.add_parser("member", help="subgroup membership")
    subgroup_args(q)
    q.add_argument("-w", "--word", required=True)
    q.set_defaults(func=cmd_member)

    q = sub.add_parser("rewrite", help="rewrite a word in the Schreier basis")
    subgroup_args(q)
    q.add_argument("-w", "--word", required=True)
    q.add_argument("--strategy", choices=STRATEGIES[:2], default="shortlex-bfs")
    q.set_defaults(func=cmd_rewrite)

    q = sub.add_parser("gwp", help="generalized word problem with a growth oracle")
    q.add_argument("--instance", required=True, help="instance JSON")
    q.add_argument("-n", "--rank", type=int)
    q.add_argument("-w", "--word", action="append", required=True, help="word to decide (repeatable)")
    q.add_argument("--budget", type=int, help="relator attachments per radius (default 10^5)")
    q.set_defaults(func=cmd_gwp)

    q = sub.add_parser("intersect", help="intersection of two subgroups with audits")
    subgroup_args(q, horizon=8)
    q.add_argument("-G", "--other", required=True, help="generators of the second subgroup, or @file")
    q.add_argument("--budget", type=int)
    q.set_defaults(func=cmd_intersect)

    q = sub.add_parser("patho", help="graph with a linear and an exponential spanning tree")
    q.add_argument("-c", type=int, default=8)
    q.add_argument("-N", "--steps", type=int, default=6)
    q.set_defaults(func=cmd_patho)

    q = sub.add_parser("complex", help="spanning subcomplexes and bouquet counts")
    q.add_argument("action", choices=["check-spanning", "certify", "bouquet"])
    q.add_argument("--complex", required=True, help='complex JSON {"dim": d, "principal": [...]}')
    q.add_argument("--sub", help="subcomplex JSON: a list of principal simplices or {\"principal\": [...]}; default: the whole complex")
    q.add_argument("--method", choices=["direct", "formula"], default="direct")
    q.set_defaults(func=cmd_complex)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code is None else (exc.code if isinstance(exc.code, int) else EXIT_USAGE)
    try:
        if getattr(args, "horizon", 0) < 0:
            raise InvalidInput("horizon must be >= 0")
        if getattr(args, "budget", None) is not None and args.budget <= 0:
            raise InvalidInput("budget must be positive")
        if args.command == "intersect" and args.rank is None:
            args.rank = _infer_rank(_word_list(args.subgroup or "") + _word_list(args.other))
        return args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BudgetExceeded as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
