"""Command-line front end.

Exit codes form a contract shell pipelines can branch on:
  0  success (a tangle exists where that was the question)
  1  certificate: the requested level has no tangle and an all-forbidden
     tree proves it
  2  invalid input (the message names the violated axiom)
  3  enumeration budget exceeded

All outputs are byte-identical across runs on identical inputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import families, grounds, oracle, system as system_mod, tree as tree_mod
from .build import certificates_of, dump_report, pipeline
from .build import build as build_tree
from .build import reduce as reduce_tree
from .errors import BudgetExceeded, TangleForgeError

ENV_BUDGET = "TANGLE_FORGE_BUDGET"


def _budget(args) -> oracle.OracleBudget:
    n = getattr(args, "budget", None)
    if n is None and os.environ.get(ENV_BUDGET):
        n = int(os.environ[ENV_BUDGET])
    if n is None:
        return oracle.OracleBudget()
    return oracle.OracleBudget(max_separations=n)


def _load_ground_system(args):
    chosen = [name for name in ("graph", "similarity", "answers", "system")
              if getattr(args, name, None)]
    if len(chosen) != 1:
        raise TangleForgeError(
            "exactly one of --graph/--similarity/--answers/--system is required")
    kind = chosen[0]
    text = Path(getattr(args, kind)).read_text()
    if kind == "system":
        return system_mod.load_system(text)
    if kind == "graph":
        g = grounds.Graph.from_edge_list(text)
        bound = _system_bound(args)
        return grounds.graph_system(g, bound)
    if kind == "similarity":
        sim = grounds.load_similarity_csv(text)
        ground = grounds.full_bipartition_ground(len(sim), similarity=sim)
        return grounds.bipartition_system(ground)
    g = grounds.load_answers_csv(text)
    return grounds.questionnaire_system(g)


def _system_bound(args) -> float:
    """Order bound for graph systems: the blocks parameter when the family
    is a blocks family, else the largest requested level, else everything."""
    fam = getattr(args, "family", None)
    if fam and fam.startswith("blocks:"):
        return float(fam.split(":", 1)[1])
    ks = getattr(args, "k", None)
    if ks:
        return max(float(k) for k in ks)
    return float("inf")


def _make_family(spec: str | None, sys_obj):
    if spec is None:
        return families.make_empty()
    if spec.endswith(".json") or "/" in spec:
        return families.load_family(Path(spec).read_text(), sys_obj)
    kind, _, param = spec.partition(":")
    if kind == "empty":
        return families.make_empty()
    if kind == "blocks":
        return families.make_blocks(int(param), sys_obj)
    if kind == "cluster":
        return families.make_cluster(int(param), sys_obj)
    if kind == "profile":
        return families.make_profile(sys_obj)
    if kind in ("strong-profile", "strong_profile"):
        return families.make_strong_profile(sys_obj)
    if kind in ("tangle", "graph-tangle", "graph_tangle"):
        return families.make_graph_tangle(sys_obj)
    raise TangleForgeError(f"unknown family spec {spec!r}")


def _write(args, text: str):
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _dump(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=1) + "\n"


def cmd_validate(args) -> int:
    chosen = getattr(args, "system", None)
    if chosen:
        try:
            d = json.loads(Path(chosen).read_text())
            sys_obj = system_mod.from_json_dict(d, check=False)
        except (TangleForgeError, KeyError, ValueError) as exc:
            _write(args, _dump({"ok": False, "issues": [str(exc)]}))
            return 2
        report = system_mod.validate(sys_obj)
    else:
        sys_obj = _load_ground_system(args)
        report = system_mod.validate(sys_obj)
    payload = {
        "ok": report.ok,
        "issues": [{"axiom": i.code, "detail": i.detail} for i in report.issues],
        "checked": report.checked,
    }
    _write(args, _dump(payload))
    return 0 if report.ok else 2


def cmd_build(args) -> int:
    sys_obj = _load_ground_system(args)
    fam = _make_family(args.family, sys_obj)
    thresholds = [float(k) for k in args.k] if args.k else None
    report = pipeline(sys_obj, fam, thresholds=thresholds)
    if args.format == "dot":
        _write(args, tree_mod.to_dot(report.tree_reduced, fam))
    else:
        _write(args, dump_report(report) + "\n")
    return 0


def cmd_tangles(args) -> int:
    sys_obj = _load_ground_system(args)
    fam = _make_family(args.family, sys_obj)
    t = build_tree(sys_obj, fam)
    ts = tree_mod.tangles(t, fam)
    payload = [{"members": sorted(tau),
                "minimal": sorted(oracle.minimal_elements(sys_obj, tau))}
               for tau in ts]
    _write(args, _dump(payload))
    return 0


def cmd_certify(args) -> int:
    sys_obj = _load_ground_system(args)
    fam = _make_family(args.family, sys_obj)
    k = float(args.k[0]) if args.k else float("inf")
    level = sys_obj.restrict_below(k)
    t = build_tree(level, fam)
    ts = tree_mod.tangles(t, fam)
    if ts:
        payload = {
            "level": args.k[0] if args.k else "inf",
            "tangle_exists": True,
            "tangles": [{"members": sorted(tau),
                         "minimal": sorted(oracle.minimal_elements(level, tau))}
                        for tau in ts],
        }
        _write(args, _dump(payload))
        return 0
    reduced, _ = reduce_tree(t, fam)
    if args.format == "dot":
        _write(args, tree_mod.to_dot(reduced, fam))
    else:
        payload = {
            "level": args.k[0] if args.k else "inf",
            "tangle_exists": False,
            "certificate_tree": tree_mod.tree_to_json_dict(reduced),
            "certificates": [
                {"leaf": leaf, "witness": w.to_json_dict()}
                for leaf, w in certificates_of(reduced, fam)],
        }
        _write(args, _dump(payload))
    return 1


def cmd_oracle(args) -> int:
    sys_obj = _load_ground_system(args)
    budget = _budget(args)
    if args.family:
        fam = _make_family(args.family, sys_obj)
        result = oracle.all_tangles(sys_obj, fam, budget)
    else:
        result = oracle.all_consistent_orientations(sys_obj, budget)
    _write(args, _dump([sorted(t) for t in result]))
    return 0


def cmd_restrict(args) -> int:
    if not args.k:
        raise TangleForgeError("restrict needs an order threshold (--k)")
    t = tree_mod.load_tree(Path(args.tree).read_text())
    k = float(args.k[0])
    restricted = tree_mod.restrict(t, k)
    _write(args, tree_mod.dump_tree(restricted) + "\n")
    return 0


def cmd_reduce(args) -> int:
    t = tree_mod.load_tree(Path(args.tree).read_text())
    fam = _make_family(args.family, t.system)
    reduced, trace = reduce_tree(t, fam)
    payload = {
        "tree": tree_mod.tree_to_json_dict(reduced),
        "steps": [list(s) for s in trace.steps],
    }
    _write(args, _dump(payload))
    return 0


def cmd_export_dot(args) -> int:
    t = tree_mod.load_tree(Path(args.tree).read_text())
    fam = _make_family(args.family, t.system) if args.family else None
    _write(args, tree_mod.to_dot(t, fam))
    return 0


def _add_io_flags(p, tree_input=False):
    if tree_input:
        p.add_argument("--tree", required=True, help="tree/v1 JSON file")
    else:
        p.add_argument("--graph", help="edge-list file, one 'u v' per line")
        p.add_argument("--similarity", help="CSV similarity matrix")
        p.add_argument("--answers", help="CSV binary answer matrix")
        p.add_argument("--system", help="sepsys/v1 JSON file")
    p.add_argument("--family", help="KIND[:PARAM] or a family/v1 JSON path")
    p.add_argument("--k", action="append", default=None,
                   help="order threshold (repeatable)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("--budget", type=int, default=None,
                   help=f"oracle separation budget (or ${ENV_BUDGET})")


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tangleforge",
        description="Build, reduce, restrict and verify tangle structure trees")
    sub = p.add_subparsers(dest="command", required=True)
    specs = [
        ("validate", cmd_validate, False, "check the axioms of a system"),
        ("build", cmd_build, False, "run the full pipeline and emit a report"),
        ("tangles", cmd_tangles, False, "list the tangles the tree displays"),
        ("certify", cmd_certify, False,
         "exit 0 with tangles, or 1 with an all-forbidden certificate tree"),
        ("oracle", cmd_oracle, False, "brute-force orientation/tangle lists"),
        ("restrict", cmd_restrict, True, "restrict a tree to orders below k"),
        ("reduce", cmd_reduce, True, "contract a tree until irreducible"),
        ("export-dot", cmd_export_dot, True, "emit Graphviz for a tree"),
    ]
    for name, fn, tree_input, help_text in specs:
        q = sub.add_parser(name, help=help_text)
        _add_io_flags(q, tree_input=tree_input)
        q.set_defaults(fn=fn)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except TangleForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
