"""Rooted trees with oriented-separation edge labels.

Trees are persistent values: structural edits return new trees, so reduction
can retain every intermediate for audit.  Each node caches the label set of
its root path.  The predicate ladder (separation tree, consistent, ordered,
thoroughly ordered, efficient, structure tree, all-leaves-forbidden) lives
here, together with restriction to a lower order threshold.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

from .errors import (LeafHasNoSep, MalformedTree, NotAStructureTree,
                     NotOrdered, ValidationError)
from .families import ForbiddenFamily, Witness
from .system import fmt_oriented, from_json_dict, sep_of, to_json_dict


class Check(NamedTuple):
    """Predicate result carrying the first violation found."""

    ok: bool
    why: str | None = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class LeafClass:
    """Classification of a leaf: tangle, forbidden, or neither yet."""

    kind: str  # "tangle" | "forbidden" | "unresolved"
    tangle: frozenset | None = None
    witness: Witness | None = None


class StructureTree:
    """Immutable rooted tree; every non-root node stores its incoming label."""

    __slots__ = ("system", "root", "_parent", "_children", "_label", "_beta")

    def __init__(self, system, root, parent, children, label):
        self.system = system
        self.root = root
        self._parent = dict(parent)
        self._children = {v: tuple(c) for v, c in children.items()}
        self._label = dict(label)
        self._beta: dict[int, frozenset] = {}

    @classmethod
    def single_root(cls, system) -> "StructureTree":
        return cls(system, 0, {0: None}, {0: ()}, {0: None})

    # -- structure accessors -------------------------------------------------

    def nodes(self) -> list[int]:
        return sorted(self._parent)

    def __len__(self):
        return len(self._parent)

    def parent(self, v):
        return self._parent[v]

    def children(self, v):
        return self._children[v]

    def label(self, v):
        """Label of the edge from the parent into v (None at the root)."""
        return self._label[v]

    def is_leaf(self, v) -> bool:
        return not self._children[v]

    def leaves(self) -> list[int]:
        return [v for v in self.nodes() if self.is_leaf(v)]

    def non_leaves(self) -> list[int]:
        return [v for v in self.nodes() if not self.is_leaf(v)]

    def depth(self, v) -> int:
        d = 0
        while self._parent[v] is not None:
            v = self._parent[v]
            d += 1
        return d

    def path_from_root(self, v) -> list[int]:
        out = [v]
        while self._parent[out[-1]] is not None:
            out.append(self._parent[out[-1]])
        return out[::-1]

    def descendants(self, v) -> list[int]:
        out, stack = [], [v]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(self._children[u])
        return sorted(out)

    def is_ancestor(self, u, v) -> bool:
        """u lies on the root path of v (reflexively)."""
        while v is not None:
            if v == u:
                return True
            v = self._parent[v]
        return False

    def beta(self, v) -> frozenset[int]:
        """Edge labels on the path from the root to v."""
        if v not in self._beta:
            labels = [self._label[u] for u in self.path_from_root(v)
                      if self._label[u] is not None]
            self._beta[v] = frozenset(labels)
        return self._beta[v]

    def s_of(self, v) -> int:
        """The separation split at a non-leaf."""
        cs = self._children[v]
        if not cs:
            raise LeafHasNoSep(f"node {v} is a leaf")
        return sep_of(self._label[cs[0]])

    # -- structural edits (persistent) ----------------------------------------

    def _fresh_id(self) -> int:
        return max(self._parent) + 1

    def split_leaf(self, v, s, forward_first=True):
        """Attach children labelled with the orientations of s; returns
        (tree, child_ids)."""
        if not self.is_leaf(v):
            raise MalformedTree(f"node {v} is not a leaf")
        orients = list(self.system.orientations_of(s))
        if not forward_first:
            orients = orients[::-1]
        base = self._fresh_id()
        kids = tuple(range(base, base + len(orients)))
        parent = dict(self._parent)
        children = dict(self._children)
        label = dict(self._label)
        for i, (c, o) in enumerate(zip(kids, orients)):
            parent[c] = v
            children[c] = ()
            label[c] = o
        children[v] = kids
        return StructureTree(self.system, self.root, parent, children, label), kids

    def contracted(self, v, w) -> "StructureTree":
        """Contract the edge vw and delete v's other children with their
        subtrees; the merged node keeps w's identity and outgoing edges."""
        if self._parent.get(w) != v:
            raise MalformedTree(f"{w} is not a child of {v}")
        drop = set()
        for c in self._children[v]:
            if c != w:
                drop.update(self.descendants(c))
        parent = {u: p for u, p in self._parent.items() if u not in drop and u != v}
        children = {u: cs for u, cs in self._children.items()
                    if u not in drop and u != v}
        label = {u: l for u, l in self._label.items() if u not in drop and u != v}
        gp = self._parent[v]
        if gp is None:
            root = w
            parent[w] = None
            label[w] = None
        else:
            root = self.root
            parent[w] = gp
            label[w] = self._label[v]
            children[gp] = tuple(w if c == v else c for c in self._children[gp])
        return StructureTree(self.system, root, parent, children, label)

    def relabelled(self, system, label_map, keep_nodes) -> "StructureTree":
        keep = set(keep_nodes)
        parent = {u: p for u, p in self._parent.items() if u in keep}
        children = {u: tuple(c for c in cs if c in keep)
                    for u, cs in self._children.items() if u in keep}
        label = {u: (None if self._label[u] is None else label_map[self._label[u]])
                 for u in keep}
        return StructureTree(system, self.root, parent, children, label)


# -- derived data -----------------------------------------------------------


def first_forbidden_prefix(tree, family, v) -> int | None:
    """Shallowest ancestor u of v whose label set already contains a member.

    Walks the root path with incremental membership tests; None when the
    label set of v avoids the family.
    """
    path = tree.path_from_root(v)
    acc: set[int] = set()
    if family.forbidden_subset(tree.system, frozenset()) is not None:
        return path[0]
    for u in path:
        o = tree.label(u)
        if o is None:
            continue
        if family.extends_member(tree.system, frozenset(acc), o):
            return u
        acc.add(o)
    return None


def classify_leaf(tree, leaf, family: ForbiddenFamily) -> LeafClass:
    """Tangle leaf, forbidden leaf, or unresolved.

    A tangle leaf closes to a consistent full orientation avoiding the family;
    a forbidden leaf's own label set contains a member.  Returning a third
    state instead of raising lets construction use this as its loop test.
    """
    beta = tree.beta(leaf)
    system = tree.system
    if system.is_consistent(beta):
        closure = system.closure(beta)
        if system.orients_all(closure) and system.is_consistent(closure) \
                and family.forbidden_subset(system, closure) is None:
            return LeafClass("tangle", tangle=closure)
    hit = first_forbidden_prefix(tree, family, leaf)
    if hit is not None:
        witness = family.forbidden_subset(system, tree.beta(hit))
        return LeafClass("forbidden", witness=witness)
    return LeafClass("unresolved")


def classify_all(tree, family) -> dict[int, LeafClass]:
    return {leaf: classify_leaf(tree, leaf, family) for leaf in tree.leaves()}


def leaf_for_orientation(tree, tau) -> int:
    """The unique leaf whose label set the orientation contains."""
    tau = {tree.system.canon(o) for o in tau}
    v = tree.root
    while not tree.is_leaf(v):
        nxt = [c for c in tree.children(v)
               if tree.system.canon(tree.label(c)) in tau]
        if len(nxt) != 1:
            raise MalformedTree(
                f"orientation selects {len(nxt)} children at node {v}")
        v = nxt[0]
    return v


def tangles(tree, family) -> list[frozenset[int]]:
    """Closures of the tangle leaves; the complete tangle list of the system."""
    ok = is_structure_tree(tree, family)
    if not ok:
        raise NotAStructureTree(ok.why)
    out = {}
    for leaf in tree.leaves():
        cls = classify_leaf(tree, leaf, family)
        if cls.kind == "tangle":
            out[tuple(sorted(cls.tangle))] = cls.tangle
    return [out[k] for k in sorted(out)]


# -- the predicate ladder -----------------------------------------------------


def is_separation_tree(tree) -> Check:
    system = tree.system
    for v in tree.nodes():
        for c in tree.children(v):
            o = tree.label(c)
            if not (0 <= o < system.n_oriented):
                return Check(False, f"edge into {c} labelled with unknown id {o}")
        if tree.is_leaf(v):
            continue
        labels = [tree.label(c) for c in tree.children(v)]
        seps = {sep_of(o) for o in labels}
        if len(seps) != 1:
            return Check(False, f"node {v} splits more than one separation")
        if len(labels) != len({system.canon(o) for o in labels}):
            return Check(False, f"node {v} repeats an orientation on its edges")
        if len(labels) > 2:
            return Check(False, f"node {v} has {len(labels)} children")
        s = seps.pop()
        u = tree.parent(v)
        while u is not None:
            if not tree.is_leaf(u) and tree.s_of(u) == s:
                return Check(False,
                             f"separation {s} split at {v} and its ancestor {u}")
            u = tree.parent(u)
    return Check(True)


def is_consistent_tree(tree) -> Check:
    for v in tree.nodes():
        pair = tree.system.inconsistent_pair(tree.beta(v))
        if pair is not None:
            return Check(False,
                         f"labels {fmt_oriented(pair[0])}, {fmt_oriented(pair[1])} "
                         f"on the path to {v} point away from each other")
    return Check(True)


def is_ordered(tree) -> Check:
    for v in tree.non_leaves():
        u = tree.parent(v)
        while u is not None:
            if not tree.is_leaf(u):
                if tree.system.order(tree.s_of(u)) > tree.system.order(tree.s_of(v)):
                    return Check(False,
                                 f"order drops from node {u} to its descendant {v}")
            u = tree.parent(u)
    return Check(True)


def is_thoroughly_ordered(tree) -> Check:
    system = tree.system
    for v in tree.non_leaves():
        s = tree.s_of(v)
        closure = system._closure_raw(tree.beta(v))
        oriented = system.oriented_sep_set(closure)
        if s in oriented:
            return Check(False, f"split separation {s} at node {v} is already "
                                "oriented by the closure of the path labels")
        unoriented = [t for t in system.seps() if t not in oriented]
        best = min(system.order(t) for t in unoriented)
        if system.order(s) > best:
            return Check(False,
                         f"node {v} splits order {system.order(s)} while order "
                         f"{best} is available")
    return Check(True)


def is_efficient(tree) -> Check:
    system = tree.system
    for leaf in tree.leaves():
        beta = tree.beta(leaf)
        closure = system._closure_raw(beta)
        for x in sorted(beta):
            for y in sorted(closure):
                if y != x and system.lt(y, x) and \
                        system.order_of(y) < system.order_of(x):
                    return Check(False,
                                 f"label {fmt_oriented(x)} at leaf {leaf} is "
                                 f"eclipsed by {fmt_oriented(y)}")
    return Check(True)


def is_structure_tree(tree, family) -> Check:
    base = is_separation_tree(tree)
    if not base:
        return base
    cons = is_consistent_tree(tree)
    if not cons:
        return cons
    for v in tree.non_leaves():
        if first_forbidden_prefix(tree, family, v) is not None:
            return Check(False, f"inner node {v} has a forbidden label set")
    for leaf in tree.leaves():
        if classify_leaf(tree, leaf, family).kind == "unresolved":
            return Check(False, f"leaf {leaf} is neither a tangle leaf nor forbidden")
    return Check(True)


def is_f_tree(tree, family) -> Check:
    """A structure tree certifying non-existence: every leaf forbidden."""
    base = is_structure_tree(tree, family)
    if not base:
        return base
    for leaf in tree.leaves():
        if classify_leaf(tree, leaf, family).kind != "forbidden":
            return Check(False, f"leaf {leaf} is a tangle leaf")
    return Check(True)


# -- restriction -----------------------------------------------------------


def restrict(tree, k: float) -> StructureTree:
    """The subtree of edges below order k, over the correspondingly
    restricted system; node identities are preserved."""
    ok = is_ordered(tree)
    if not ok:
        raise NotOrdered(ok.why)
    sub = tree.system.restrict_below(k)
    new_sep = {old: new for new, old in enumerate(sub.back_map)}
    label_map = {}
    for o in range(tree.system.n_oriented):
        s = sep_of(o)
        if s in new_sep:
            label_map[o] = 2 * new_sep[s] + (o & 1)
    keep = []
    stack = [tree.root]
    while stack:
        v = stack.pop()
        keep.append(v)
        for c in tree.children(v):
            if tree.system.order_of(tree.label(c)) < k:
                stack.append(c)
    return tree.relabelled(sub, label_map, keep)


# -- JSON (format "tree/v1") and DOT export -------------------------------------


def tree_to_json_dict(tree) -> dict:
    return {
        "format": "tree/v1",
        "root": tree.root,
        "nodes": [{"id": v,
                   "parent": tree.parent(v),
                   "edge_label": tree.label(v)}
                  for v in tree.nodes()],
        "system_ref": to_json_dict(tree.system),
    }


def tree_from_json_dict(d, system=None) -> StructureTree:
    if d.get("format") != "tree/v1":
        raise ValidationError(f"unsupported tree format {d.get('format')!r}")
    if system is None:
        system = from_json_dict(d["system_ref"])
    parent, children, label = {}, {}, {}
    for nd in d["nodes"]:
        v = int(nd["id"])
        parent[v] = None if nd["parent"] is None else int(nd["parent"])
        label[v] = None if nd["edge_label"] is None else int(nd["edge_label"])
        children.setdefault(v, [])
    for v, p in parent.items():
        if p is not None:
            children[p].append(v)
    children = {v: tuple(sorted(cs)) for v, cs in children.items()}
    tree = StructureTree(system, int(d["root"]), parent, children, label)
    if tree.root not in parent or parent[tree.root] is not None:
        raise ValidationError("root must be a node without parent")
    return tree


def dump_tree(tree) -> str:
    return json.dumps(tree_to_json_dict(tree), sort_keys=True, indent=1)


def load_tree(text: str, system=None) -> StructureTree:
    return tree_from_json_dict(json.loads(text), system)


def _tangle_label(system, tangle) -> str:
    from .oracle import minimal_elements
    mins = sorted(minimal_elements(system, tangle))
    return "{" + ",".join(fmt_oriented(o) for o in mins) + "}"


def to_dot(tree, family=None) -> str:
    """Graphviz form: split separations with orders on inner nodes, leaves
    coloured by classification and annotated with minimal tangle elements or
    witness members."""
    lines = ["digraph structure_tree {", '  node [fontname="Helvetica"];']
    classes = classify_all(tree, family) if family is not None else {}
    for v in tree.nodes():
        if not tree.is_leaf(v):
            s = tree.s_of(v)
            lines.append(
                f'  n{v} [shape=circle label="s{s}\\n|s|={tree.system.order(s):g}"];')
            continue
        cls = classes.get(v)
        if cls is None:
            lines.append(f'  n{v} [shape=box label="leaf {v}"];')
        elif cls.kind == "tangle":
            lines.append(
                f'  n{v} [shape=box style=filled fillcolor=palegreen '
                f'label="tangle {_tangle_label(tree.system, cls.tangle)}"];')
        elif cls.kind == "forbidden":
            members = ",".join(fmt_oriented(o) for o in sorted(cls.witness.members))
            lines.append(
                f'  n{v} [shape=box style=filled fillcolor=lightcoral '
                f'label="forbidden {{{members}}}"];')
        else:
            lines.append(
                f'  n{v} [shape=box style=filled fillcolor=lightgray '
                f'label="unresolved"];')
    for v in tree.nodes():
        for c in tree.children(v):
            lines.append(f'  n{v} -> n{c} [label="{fmt_oriented(tree.label(c))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
