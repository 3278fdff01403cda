"""Tree construction, contraction, necessity, reduction, and the pipeline.

Construction grows a single root by repeatedly splitting an unresolved leaf
on a cheapest separation its closure leaves open.  Reduction contracts edges
whose labels are needed neither as minimal elements of any displayed tangle
nor inside any forbidden-leaf witness, until every node is necessary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import (NodeCapExceeded, NonStandardFamily, NotAStructureTree,
                     NotParentChild, UnresolvedLeaf)
from .families import ForbiddenFamily
from .oracle import minimal_elements
from .system import SeparationSystem, fmt_oriented
from .tree import (StructureTree, classify_all, classify_leaf, is_f_tree,
                   is_structure_tree, restrict, tangles, tree_to_json_dict)


@dataclass(frozen=True)
class BuildConfig:
    """Choices the construction leaves open, pinned for reproducibility.

    ``tiebreak`` picks among minimum-order candidate separations (only
    "least-id" is defined: the smallest separation id wins).  ``child_order``
    fixes which orientation labels the first child.  ``max_nodes`` is a
    safety cap; exceeding the structural bound would mean a bug.
    """

    tiebreak: str = "least-id"
    child_order: str = "forward-first"
    max_nodes: int | None = None

    def node_cap(self, system) -> int:
        if self.max_nodes is not None:
            return self.max_nodes
        if system.count <= 20:
            return 2 ** (system.count + 1)
        return 1_000_000


def build(system: SeparationSystem, family: ForbiddenFamily,
          config: BuildConfig | None = None) -> StructureTree:
    """Grow a thoroughly ordered structure tree displaying every tangle.

    Every unresolved leaf is split on a separation of minimum order among
    those its closure does not orient, until each leaf either closes to a
    tangle or its labels contain a forbidden member.  When a leaf can no
    longer resolve because of a co-trivial label the family does not forbid,
    that is the family's fault and an error; a merely non-rich family yields
    a tree that fails the structure-tree check instead.
    """
    cfg = config or BuildConfig()
    if cfg.tiebreak != "least-id":
        raise ValueError(f"unknown tiebreak rule {cfg.tiebreak!r}")
    forward_first = cfg.child_order == "forward-first"
    cap = cfg.node_cap(system)
    tree = StructureTree.single_root(system)
    pending = [tree.root]
    while pending:
        pending.sort()
        v = pending.pop(0)
        cls = classify_leaf(tree, v, family)
        if cls.kind != "unresolved":
            continue
        beta = tree.beta(v)
        closure = system._closure_raw(beta)
        oriented = system.oriented_sep_set(closure)
        candidates = [s for s in system.seps() if s not in oriented]
        if not candidates:
            blockers = [o for o in sorted(beta) if system.is_cotrivial(o)]
            if blockers:
                raise NonStandardFamily(
                    f"leaf cannot resolve: co-trivial label "
                    f"{fmt_oriented(blockers[0])} is not forbidden by the family")
            continue  # family not rich enough; post-checks will flag the tree
        s = min(candidates, key=lambda t: (system.order(t), t))
        tree, kids = tree.split_leaf(v, s, forward_first=forward_first)
        if len(tree) > cap:
            raise NodeCapExceeded(f"tree exceeded {cap} nodes")
        pending.extend(kids)
    return tree


def contract(tree: StructureTree, v: int, w: int) -> StructureTree:
    """The tree with edge vw contracted and v's other branches deleted."""
    if w not in tree.nodes() or v not in tree.nodes() or tree.parent(w) != v:
        raise NotParentChild(f"{w} is not a child of {v}")
    return tree.contracted(v, w)


def necessary_for_leaf(tree, family, o: int, leaf: int,
                       cls=None) -> bool:
    """Is the oriented separation needed to keep this leaf classified?

    Tangle leaves need exactly their minimal labels.  For forbidden leaves
    the label is needed precisely when removing it leaves no forbidden
    member, which one oracle query decides.
    """
    cls = cls or classify_leaf(tree, leaf, family)
    beta = tree.beta(leaf)
    if cls.kind == "tangle":
        return o in beta and o in minimal_elements(tree.system, beta)
    if cls.kind == "forbidden":
        return family.forbidden_subset(tree.system, beta - {o}) is None
    raise UnresolvedLeaf(f"leaf {leaf} is unresolved")


def necessary_node(tree, family, v: int, classes=None) -> bool:
    """Every child edge label is necessary for some leaf behind it."""
    classes = classes or classify_all(tree, family)
    for w in tree.children(v):
        o = tree.label(w)
        if not any(tree.is_ancestor(w, leaf) and
                   necessary_for_leaf(tree, family, o, leaf, classes[leaf])
                   for leaf in tree.leaves()):
            return False
    return True


@dataclass
class ReductionTrace:
    """Contractions applied, with optional retained intermediate trees."""

    steps: list[tuple[int, int]] = field(default_factory=list)
    trees: list[StructureTree] | None = None

    def replay(self, tree: StructureTree) -> StructureTree:
        for v, w in self.steps:
            tree = contract(tree, v, w)
        return tree


def reduce(tree: StructureTree, family: ForbiddenFamily,
           keep_intermediates: bool = False):
    """Contract until every node is necessary; returns (tree, trace).

    Works deepest-first; among a dispensable node's children the least id
    whose edge label no leaf behind it needs is contracted into the node.
    """
    ok = is_structure_tree(tree, family)
    if not ok:
        raise NotAStructureTree(ok.why)
    trace = ReductionTrace(trees=[tree] if keep_intermediates else None)
    while True:
        classes = classify_all(tree, family)
        target = None
        for v in sorted(tree.nodes(),
                        key=lambda u: (-tree.depth(u), u)):
            if tree.is_leaf(v) or necessary_node(tree, family, v, classes):
                continue
            for w in tree.children(v):
                o = tree.label(w)
                if not any(tree.is_ancestor(w, leaf) and
                           necessary_for_leaf(tree, family, o, leaf, classes[leaf])
                           for leaf in tree.leaves()):
                    target = (v, w)
                    break
            if target:
                break
        if target is None:
            return tree, trace
        tree = contract(tree, *target)
        trace.steps.append(target)
        if keep_intermediates:
            trace.trees.append(tree)


# -- the full pipeline -----------------------------------------------------


@dataclass
class LevelReport:
    """One order threshold: the restricted tree and what it displays."""

    k: float
    tree: StructureTree
    reduced: StructureTree | None
    tangles: list[frozenset]
    f_tree: bool
    certificates: list[tuple[int, object]]  # (leaf, Witness)
    structure_ok: bool


@dataclass
class PipelineReport:
    system: SeparationSystem
    family: ForbiddenFamily
    tree_full: StructureTree
    tree_reduced: StructureTree
    trace: ReductionTrace
    tangles: list[frozenset]
    certificates: list[tuple[int, object]]
    levels: list[LevelReport]


def certificates_of(tree, family):
    out = []
    for leaf in tree.leaves():
        cls = classify_leaf(tree, leaf, family)
        if cls.kind == "forbidden":
            out.append((leaf, cls.witness))
    return out


def pipeline(system: SeparationSystem, family: ForbiddenFamily,
             config: BuildConfig | None = None,
             thresholds=None) -> PipelineReport:
    """Build, reduce, and restrict to every order threshold.

    Restrictions are always taken from the unreduced tree (reduction can
    hide lower-order tangles) and reduced afterwards, each independently.
    Default thresholds are the distinct order values of the system.
    """
    tree_full = build(system, family, config)
    full_ok = is_structure_tree(tree_full, family)
    if full_ok:
        tree_reduced, trace = reduce(tree_full, family)
        tangle_list = tangles(tree_reduced, family)
    else:
        tree_reduced, trace = tree_full, ReductionTrace()
        tangle_list = []
    if thresholds is None:
        thresholds = sorted({float(system.order(s)) for s in system.seps()})
    levels = []
    for k in thresholds:
        tk = restrict(tree_full, k)
        ok = is_structure_tree(tk, family)
        if ok:
            tkred, _ = reduce(tk, family)
            tl = tangles(tkred, family)
            ftree = bool(is_f_tree(tkred, family))
            certs = certificates_of(tkred, family)
        else:
            tkred, tl, ftree, certs = None, [], False, []
        levels.append(LevelReport(k, tk, tkred, tl, ftree, certs, bool(ok)))
    return PipelineReport(
        system, family, tree_full, tree_reduced, trace,
        tangle_list, certificates_of(tree_reduced, family), levels)


def report_to_json_dict(report: PipelineReport) -> dict:
    """Canonical JSON for a pipeline run (format "report/v1")."""
    system = report.system

    def tangle_entry(t):
        return {
            "members": sorted(t),
            "minimal": sorted(minimal_elements(system, t)),
        }

    def level_entry(lv: LevelReport):
        sub = lv.tree.system
        return {
            "k": lv.k,
            "tree": tree_to_json_dict(lv.reduced if lv.reduced is not None
                                      else lv.tree),
            "structure_ok": lv.structure_ok,
            "tangles": [{"members": sorted(t),
                         "minimal": sorted(minimal_elements(sub, t))}
                        for t in lv.tangles],
            "f_tree": lv.f_tree,
            "certificates": [{"leaf": leaf, "witness": w.to_json_dict()}
                             for leaf, w in lv.certificates],
        }

    return {
        "format": "report/v1",
        "family": report.family.to_json_dict(),
        "tree_full": tree_to_json_dict(report.tree_full),
        "tree_reduced": tree_to_json_dict(report.tree_reduced),
        "reduction_steps": [list(s) for s in report.trace.steps],
        "tangles": [tangle_entry(t) for t in report.tangles],
        "certificates": [{"leaf": leaf, "witness": w.to_json_dict()}
                         for leaf, w in report.certificates],
        "per_k": [level_entry(lv) for lv in report.levels],
    }


def dump_report(report: PipelineReport) -> str:
    return json.dumps(report_to_json_dict(report), sort_keys=True, indent=1)
