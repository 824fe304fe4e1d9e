"""Command-line interface: analyze, certify, enumerate, construct, suite.

Exit codes: 0 success (for certify: non-box-perfectness certified), 1 no
evidence found or a suite criterion failed, 2 error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import networkx as nx

from . import __version__
from .boxtdi import (BoxCertificate, RRecord, box_tdi_falsify_search,
                     make_R_certificate, verify_certificate)
from .classes import enumerate_Q, enumerate_S
from .config import DEFAULT, Budgets, load_budgets
from .constructions import NAMED_FAMILIES, build_named, collapse_closed_twins
from .errors import BoxPerfectError, BudgetExceeded, ParseError
from .esp import is_esp
from .graph import Graph, complement, dumps, induced_subgraph, read_file
from .invariants import (is_claw_free, is_comparability, is_incomparability,
                         is_parity, is_perfect, is_split, parameters)
from .search import contains_induced, is_isomorphic
from .tu import is_tu_graph


class _Timer:
    def __init__(self):
        self.times: dict[str, float] = {}

    def run(self, key: str, fn):
        start = time.perf_counter()
        try:
            return fn()
        finally:
            self.times[key] = round(time.perf_counter() - start, 4)


def _verdict(fn, method: str = "exhaustive") -> dict:
    """Run a predicate; a budget overrun becomes value None with the budget named."""
    try:
        value = fn()
    except BudgetExceeded as exc:
        return {"value": None, "method": "budget-limited", "note": str(exc),
                "budget": {exc.budget: exc.limit}}
    return {"value": value, "method": method}


def _load_graph(path: str) -> Graph:
    name, obj = read_file(path)
    if not isinstance(obj, Graph):
        raise ParseError(f"expected a graph, found a {type(obj).__name__.lower()}")
    return obj


def is_complement_of_line_graph(g: Graph) -> bool:
    """Is the complement of G the line graph of a multigraph?

    Parallel edges give adjacent twins in the line graph, so collapsing
    closed twins reduces the question to line graphs of simple graphs, which
    are recognised per component and then confirmed by rebuilding them.
    """
    h, _ = collapse_closed_twins(complement(g))
    nxg = nx.Graph()
    nxg.add_nodes_from(range(h.n))
    nxg.add_edges_from(h.edges())
    for comp in nx.connected_components(nxg):
        sub = nx.convert_node_labels_to_integers(nxg.subgraph(comp))
        if sub.number_of_nodes() == 1:
            continue
        try:
            root = nx.inverse_line_graph(sub)
        except nx.NetworkXError:
            return False
        back = nx.convert_node_labels_to_integers(nx.line_graph(root))
        a = Graph.from_edges(sub.number_of_nodes(), sub.edges())
        b = Graph.from_edges(back.number_of_nodes(), back.edges())
        if not is_isomorphic(a, b):
            return False
    return True


def analyze(g: Graph, budgets: Budgets = DEFAULT, timings: bool = False) -> dict:
    t = _Timer()
    s3 = build_named("S_n", [3])
    s3p = build_named("barS3plus")
    v = {
        "perfect": t.run("perfect", lambda: _verdict(lambda: is_perfect(g, budgets)[0])),
        "split": t.run("split", lambda: _verdict(lambda: is_split(g) is not None)),
        "claw_free": t.run("claw_free", lambda: _verdict(lambda: is_claw_free(g))),
        "parity": t.run("parity", lambda: _verdict(lambda: is_parity(g, budgets)[0])),
        "comparability": t.run("comparability", lambda: _verdict(lambda: is_comparability(g, budgets))),
        "incomparability": t.run("incomparability", lambda: _verdict(lambda: is_incomparability(g, budgets))),
        "tu": t.run("tu", lambda: _verdict(lambda: is_tu_graph(g, budgets).is_tu)),
        "esp": t.run("esp", lambda: _verdict(lambda: is_esp(g, "direct", budgets)[0])),
        "s3_free": t.run("s3_free", lambda: _verdict(lambda: contains_induced(g, s3) is None)),
        "barS3plus_free": t.run("barS3plus_free", lambda: _verdict(lambda: contains_induced(g, s3p) is None)),
        "complement_of_line_graph": t.run("colg", lambda: _verdict(lambda: is_complement_of_line_graph(g))),
    }
    try:
        params = t.run("parameters", lambda: parameters(g, budgets).to_dict())
    except BudgetExceeded as exc:
        params = {"note": str(exc)}
    report = {
        "n": g.n,
        "m": g.m,
        "verdicts": v,
        "parameters": params,
        "box_perfect": _predict(v),
        "budgets": budgets.to_dict(),
    }
    if timings:
        report["seconds"] = t.times
    return report


def _predict(v: dict) -> dict:
    """Combine verdicts through known sufficient conditions and characterisations."""
    val = {k: d["value"] for k, d in v.items()}
    reasons = []
    verdict = None

    def say(value: bool, why: str) -> None:
        nonlocal verdict
        if verdict is not None and verdict != value:
            reasons.append("CONFLICT: " + why)
            return
        verdict = value
        reasons.append(why)

    if val["perfect"] is False:
        say(False, "box-perfect graphs are perfect")
    if val["s3_free"] is False:
        say(False, "contains S_3, which is not box-perfect")
    if val["barS3plus_free"] is False:
        say(False, "contains barS3plus, which is not box-perfect")
    if val["tu"] is True:
        say(True, "totally unimodular graphs are box-perfect")
    if val["esp"] is True:
        say(True, "ESP graphs are box-perfect")
    if val["parity"] is True:
        say(True, "parity graphs are ESP")
    if val["incomparability"] is True:
        say(True, "incomparability graphs are ESP")
    if val["split"] is True and val["tu"] is not None:
        say(val["tu"], "split graph: box-perfect iff totally unimodular")
    if val["claw_free"] is True and val["perfect"] is True and val["s3_free"] is not None:
        say(val["s3_free"], "claw-free perfect graph: box-perfect iff S_3-free")
    if (val["complement_of_line_graph"] is True and val["perfect"] is True
            and val["s3_free"] is not None and val["barS3plus_free"] is not None):
        say(val["s3_free"] and val["barS3plus_free"],
            "perfect complement of a line graph: box-perfect iff {S_3, barS3plus}-free")
    return {"value": verdict, "reasons": reasons}


def _human_analysis(r: dict) -> str:
    lines = [f"n = {r['n']}, m = {r['m']}"]
    for key, d in r["verdicts"].items():
        val = "unknown" if d["value"] is None else str(d["value"]).lower()
        extra = f" ({d['note']})" if "note" in d else ""
        lines.append(f"  {key}: {val} [{d['method']}]{extra}")
    if "alpha" in r["parameters"]:
        p = r["parameters"]
        lines.append("  parameters: " + ", ".join(f"{k}={p[k]}" for k in sorted(p)))
    bp = r["box_perfect"]
    val = "unknown" if bp["value"] is None else str(bp["value"]).lower()
    lines.append(f"box-perfect: {val}")
    for why in bp["reasons"]:
        lines.append(f"  because {why}")
    if "seconds" in r:
        lines.append("  seconds: " + ", ".join(f"{k}={s}" for k, s in r["seconds"].items()))
    return "\n".join(lines)


# certify

def _remap_record(rec: RRecord, emb: tuple[int, ...]) -> RRecord:
    return RRecord(rec.m_rows, tuple(None if u is None else emb[u] for u in rec.u_vertices),
                   tuple(emb[v] for v in rec.v_vertices), rec.deleted, rec.m)


def _certify_from_s(g: Graph, budgets: Budgets, exhaustive: bool) -> dict | None:
    """Certificate for an induced member of S (found by search), if any."""
    limit = min(g.n, budgets.enumerate_s_max_n, 2 * budgets.enumerate_q_max_side)
    try:
        cat = enumerate_S(limit, budgets)
    except BudgetExceeded:
        return None
    for entry in cat:
        emb = contains_induced(g, entry.graph)
        if emb is None:
            continue
        keep = sorted(emb)
        sub = induced_subgraph(g, keep)
        pos = {v: i for i, v in enumerate(keep)}
        rec = _remap_record(RRecord.from_json(entry.record["R"]), tuple(pos[v] for v in emb))
        cert = make_R_certificate(sub, rec, budgets=budgets)
        rep = verify_certificate(sub, cert, exhaustive, budgets)
        if rep.passed:
            return {"method": "S-member", "subgraph_vertices": keep,
                    "member_hash": entry.hash, "certificate": cert.to_json(),
                    "verification": rep.to_json()}
    return None


def certify(g: Graph, mode: str, budgets: Budgets, record_path: str | None = None,
            cert_path: str | None = None, exhaustive: bool = True) -> tuple[int, dict]:
    tried = []
    if cert_path:
        cert = BoxCertificate.from_json(json.loads(Path(cert_path).read_text()))
        rep = verify_certificate(g, cert, exhaustive, budgets)
        out = {"method": "supplied", "certificate": cert.to_json(), "verification": rep.to_json()}
        return (0 if rep.passed else 1), out
    if mode in ("auto", "from-record") and record_path:
        rec = RRecord.from_json(json.loads(Path(record_path).read_text()))
        cert = make_R_certificate(g, rec, budgets=budgets)
        rep = verify_certificate(g, cert, exhaustive, budgets)
        out = {"method": "record", "certificate": cert.to_json(), "verification": rep.to_json()}
        if rep.passed:
            return 0, out
        tried.append(out)
    elif mode == "from-record":
        raise BoxPerfectError("--mode from-record needs --record")
    if mode == "auto":
        found = _certify_from_s(g, budgets, exhaustive)
        if found:
            return 0, found
        tried.append({"method": "S-member", "result": "no induced member of S"})
    if mode in ("auto", "falsify"):
        try:
            hit = box_tdi_falsify_search(g, budgets=budgets)
        except BudgetExceeded as exc:
            tried.append({"method": "falsify", "result": str(exc)})
        else:
            if hit is not None:
                return 0, {"method": "falsify", "counterexample": hit.to_json(),
                           "limits": {"max_w": budgets.falsify_max_w,
                                      "denoms": list(budgets.falsify_denoms)}}
            tried.append({"method": "falsify",
                          "result": "no violation within limits (this does not prove box-perfectness)"})
    return 1, {"method": None, "tried": tried}


# entry point

def _parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--budget", metavar="FILE", default=argparse.SUPPRESS,
                        help="TOML file with budget overrides")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for random corpora (suite only)")
    p = argparse.ArgumentParser(prog="boxperfect", description="Box-perfect graph toolkit.",
                                parents=[common])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(name: str, **kw) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], **kw)

    a = add("analyze", help="run the predicate battery on a graph file")
    a.add_argument("path")
    a.add_argument("--timings", action="store_true", help="include elapsed seconds")

    c = add("certify", help="certify non-box-perfectness")
    c.add_argument("path")
    c.add_argument("--mode", choices=("auto", "from-record", "falsify"), default="auto")
    c.add_argument("--record", help="JSON construction record (M, u_vertices, v_vertices, deleted, m)")
    c.add_argument("--cert", help="JSON certificate to verify instead of building one")
    c.add_argument("--no-exhaustive-dual", action="store_true",
                   help="skip the exhaustive integral dual search")

    e = add("enumerate", help="write a class catalog as JSON lines")
    e.add_argument("cls", choices=("Q", "S"))
    e.add_argument("size", type=int, help="max side for Q, max vertices for S")
    e.add_argument("-o", "--out")

    k = add("construct", help="write a named graph to a file")
    k.add_argument("name", choices=NAMED_FAMILIES)
    k.add_argument("params", nargs="*", type=int)
    k.add_argument("-o", "--out")

    s = add("suite", help="run the acceptance criteria")
    s.add_argument("--only", type=int, nargs="*", help="criterion numbers")
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    args.json = getattr(args, "json", False)
    args.budget = getattr(args, "budget", None)
    args.seed = getattr(args, "seed", 0)
    try:
        budgets = load_budgets(args.budget)
        if args.cmd == "analyze":
            g = _load_graph(args.path)
            rep = analyze(g, budgets, args.timings)
            print(json.dumps(rep, sort_keys=True, indent=2) if args.json else _human_analysis(rep))
            return 0
        if args.cmd == "certify":
            g = _load_graph(args.path)
            code, out = certify(g, args.mode, budgets, args.record, args.cert,
                                not args.no_exhaustive_dual)
            out["exit_code"] = code
            if args.json:
                print(json.dumps(out, sort_keys=True, indent=2))
            else:
                print(_human_certify(out))
            return code
        if args.cmd == "enumerate":
            cat = enumerate_Q(args.size, budgets) if args.cls == "Q" else enumerate_S(args.size, budgets)
            _emit(cat.dumps(), args.out)
            if args.out and not args.json:
                print(f"{len(cat)} members written to {args.out}")
            return 0
        if args.cmd == "construct":
            g = build_named(args.name, args.params)
            name = args.name + "".join(f"_{x}" for x in args.params)
            _emit(dumps(g, name), args.out)
            return 0
        if args.cmd == "suite":
            from .suite import run_all
            results = run_all(args.seed, budgets, args.only)
            if args.json:
                print(json.dumps([r.to_json() for r in results], indent=2))
            else:
                for r in results:
                    print(r.line())
            return 0 if all(r.ok for r in results) else 1
    except (BoxPerfectError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        if args.json:
            print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


def _human_certify(out: dict) -> str:
    if out["exit_code"] == 0:
        lines = [f"certified non-box-perfect by {out['method']}"]
        if "subgraph_vertices" in out:
            lines.append(f"  induced member of S on vertices {out['subgraph_vertices']}")
        if "verification" in out:
            for c in out["verification"]["checks"]:
                lines.append(f"  {'ok ' if c['ok'] else 'BAD'} {c['name']} {c['detail']}".rstrip())
        if "counterexample" in out:
            ce = out["counterexample"]
            lines.append(f"  u = {ce['u']}, w = {ce['w']}: {ce['lhs']} < {ce['rhs']}")
        return "\n".join(lines)
    lines = ["no evidence of non-box-perfectness"]
    if out.get("verification"):
        lines.append(f"  failed checks: {out['verification']['failed']}")
    for t in out.get("tried", []):
        lines.append(f"  {t['method']}: {t.get('result', 'certificate did not verify')}")
    return "\n".join(lines)


if __name__ == "__main__":
    sys.exit(main())
