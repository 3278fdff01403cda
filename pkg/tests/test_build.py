"""Construction, contraction, necessity, reduction, and the pipeline."""

import json

import numpy as np
import pytest

import tangleforge as tf
from tangleforge.build import dump_report
from tangleforge.errors import (NonStandardFamily, NotAStructureTree,
                                NotParentChild, UnresolvedLeaf)

from conftest import (load_nonrich_fixture, random_subset_system,
                      redundant_split_family, redundant_split_system,
                      standardized_explicit, tree_shape, trivial_top_system)


# -- build -------------------------------------------------------------------


def test_empty_system_builds_a_single_tangle_root():
    empty = tf.SeparationSystem(np.zeros((0, 0), dtype=bool), [])
    fam = tf.make_empty()
    t = tf.build(empty, fam)
    assert len(t) == 1
    cls = tf.classify_leaf(t, t.root, fam)
    assert cls.kind == "tangle" and cls.tangle == frozenset()
    assert tf.tangles(t, fam) == [frozenset()]


def test_nested_pair_build_splits_the_cheap_separation_first(nested_pair):
    fam = tf.make_empty()
    t = tf.build(nested_pair, fam)
    assert t.s_of(t.root) == 0  # order 1 before order 2
    got = [sorted(x) for x in tf.tangles(t, fam)]
    assert got == [[0, 2], [0, 3], [1, 3]]
    shallow = [leaf for leaf in t.leaves() if t.depth(leaf) == 1]
    assert [sorted(t.beta(v)) for v in shallow] == [[1]]


def test_k4_build_finds_the_single_block(k4):
    s3 = tf.graph_system(k4, 3)
    fam = tf.make_blocks(3, s3)
    t = tf.build(s3, fam)
    ts = tf.tangles(t, fam)
    assert len(ts) == 1
    assert tf.block_of_tangle(s3, ts[0]) == frozenset(range(4))


def test_child_order_config_flips_the_first_edge(nested_pair):
    fam = tf.make_empty()
    a = tf.build(nested_pair, fam)
    b = tf.build(nested_pair, fam, tf.BuildConfig(child_order="backward-first"))
    first_a = a.label(a.children(a.root)[0])
    first_b = b.label(b.children(b.root)[0])
    assert first_a % 2 == 0 and first_b % 2 == 1


def test_non_standard_family_blocked_by_a_cotrivial_label():
    system = trivial_top_system()
    with pytest.raises(NonStandardFamily):
        tf.build(system, tf.make_empty())


def test_non_rich_family_yields_an_unresolved_leaf_not_an_error():
    system, family = load_nonrich_fixture()
    t = tf.build(system, family)
    ok = tf.is_structure_tree(t, family)
    assert not ok and "neither" in (ok.why or "")


def test_build_is_deterministic(k4):
    s3 = tf.graph_system(k4, 3)
    fam = tf.make_blocks(3, s3)
    a = tf.build(s3, fam)
    b = tf.build(s3, fam)
    assert tf.tree.dump_tree(a) == tf.tree.dump_tree(b)


# -- contraction ------------------------------------------------------------------


def test_contracting_into_a_leaf_child_leaves_a_single_node(nested_pair):
    t = tf.StructureTree.single_root(nested_pair)
    t, kids = t.split_leaf(t.root, 0)
    t2 = tf.contract(t, t.root, kids[0])
    assert len(t2) == 1 and t2.root == kids[0]
    assert t2.beta(t2.root) == frozenset()


def test_contracting_the_root_keeps_only_the_deeper_split(nested_pair):
    fam = tf.make_empty()
    t = tf.build(nested_pair, fam)
    deep_child = next(c for c in t.children(t.root) if not t.is_leaf(c))
    t2 = tf.contract(t, t.root, deep_child)
    assert t2.root == deep_child
    assert t2.s_of(t2.root) == 1  # only the second separation is split now
    assert sorted(sorted(t2.beta(l)) for l in t2.leaves()) == [[2], [3]]


def test_contraction_requires_a_parent_child_edge(nested_pair):
    fam = tf.make_empty()
    t = tf.build(nested_pair, fam)
    with pytest.raises(NotParentChild):
        tf.contract(t, t.leaves()[0], t.root)


@pytest.mark.parametrize("seed", range(8))
def test_contraction_preserves_consistency_and_order(seed):
    system = random_subset_system(seed, n_seps=4)
    fam = standardized_explicit(system, seed)
    t = tf.build(system, fam)
    for v in t.non_leaves():
        for w in t.children(v):
            t2 = tf.contract(t, v, w)
            assert tf.is_consistent_tree(t2)
            assert tf.is_ordered(t2)


# -- necessity ---------------------------------------------------------------------


def test_both_minimal_elements_are_necessary(nested_pair):
    fam = tf.make_empty()
    t = tf.build(nested_pair, fam)
    leaf = tf.leaf_for_orientation(t, frozenset({0, 3}))
    assert tf.necessary_for_leaf(t, fam, 0, leaf)
    assert tf.necessary_for_leaf(t, fam, 3, leaf)


def test_dominated_label_is_not_necessary(nested_pair):
    fam = tf.make_empty()
    t = tf.build(nested_pair, fam)
    leaf = tf.leaf_for_orientation(t, frozenset({0, 2}))
    # 2 < 0, so 0 is not minimal there
    assert not tf.necessary_for_leaf(t, fam, 0, leaf)
    assert tf.necessary_for_leaf(t, fam, 2, leaf)


def test_two_disjoint_witnesses_make_no_label_necessary():
    system = random_subset_system(3, n_seps=4)
    fam = tf.make_explicit([{0}, {2}], system)
    t = tf.StructureTree.single_root(system)
    t, kids = t.split_leaf(t.root, 0)
    fwd = next(c for c in kids if t.label(c) == 0)
    t, kids2 = t.split_leaf(fwd, 1)
    leaf = next(c for c in kids2 if t.label(c) == 2)
    assert tf.classify_leaf(t, leaf, fam).kind == "forbidden"
    for o in t.beta(leaf):
        assert not tf.necessary_for_leaf(t, fam, o, leaf)


def test_necessity_undefined_for_unresolved_leaves(k4):
    s3 = tf.graph_system(k4, 3)
    fam = tf.make_blocks(3, s3)
    t = tf.StructureTree.single_root(s3)
    with pytest.raises(UnresolvedLeaf):
        tf.necessary_for_leaf(t, fam, 0, t.root)


def test_leaves_are_vacuously_necessary(nested_pair):
    fam = tf.make_empty()
    t = tf.build(nested_pair, fam)
    for leaf in t.leaves():
        assert tf.necessary_node(t, fam, leaf)


def test_redundant_split_root_is_unnecessary():
    system = redundant_split_system()
    fam = redundant_split_family(system)
    t = tf.build(system, fam)
    assert not tf.necessary_node(t, fam, t.root)
    for v in t.non_leaves():
        if v != t.root:
            assert tf.necessary_node(t, fam, v)


# -- reduction ---------------------------------------------------------------------


def test_irreducible_tree_reduces_to_itself(nested_pair):
    fam = tf.make_empty()
    t = tf.build(nested_pair, fam)
    red, trace = tf.reduce(t, fam)
    assert trace.steps == []
    assert tree_shape(red) == tree_shape(t)


def test_redundant_split_is_contracted_away():
    system = redundant_split_system()
    fam = redundant_split_family(system)
    t = tf.build(system, fam)
    red, trace = tf.reduce(t, fam, keep_intermediates=True)
    assert len(trace.steps) == 1
    labels = {red.label(v) for v in red.nodes()} - {None}
    assert labels == {2, 3, 4, 5}  # the order-1 separation vanished
    assert [sorted(x) for x in tf.tangles(red, fam)] == \
        [sorted(x) for x in tf.tangles(t, fam)]
    assert tree_shape(trace.replay(t)) == tree_shape(red)


@pytest.mark.parametrize("seed", range(10))
def test_reduction_postconditions(seed):
    system = random_subset_system(seed, n_seps=4)
    fam = standardized_explicit(system, seed)
    t = tf.build(system, fam)
    if not tf.is_structure_tree(t, fam):
        return
    red, trace = tf.reduce(t, fam)
    # every node necessary
    for v in red.nodes():
        assert tf.necessary_node(red, fam, v)
    # tangles preserved
    assert sorted(map(sorted, tf.tangles(red, fam))) == \
        sorted(map(sorted, tf.tangles(t, fam)))
    # surviving nodes keep their relative order
    for u in red.nodes():
        for v in red.nodes():
            assert red.is_ancestor(u, v) == t.is_ancestor(u, v)
    # surviving leaves were leaves before, with the same incoming edge
    for leaf in red.leaves():
        assert t.is_leaf(leaf)
        assert red.label(leaf) == t.label(leaf) or red.root == leaf
        before = tf.classify_leaf(t, leaf, fam).kind
        after = tf.classify_leaf(red, leaf, fam).kind
        assert (before == "forbidden") == (after == "forbidden")
    assert tf.is_efficient(red)
    assert tf.is_ordered(red)


@pytest.mark.parametrize("seed", range(10))
def test_contraction_validity_matches_label_necessity(seed):
    """Contracting an edge keeps the structure property exactly when no leaf
    behind it needs its label."""
    system = random_subset_system(seed, n_seps=4)
    fam = standardized_explicit(system, seed)
    t = tf.build(system, fam)
    if not tf.is_structure_tree(t, fam):
        return
    classes = tf.tree.classify_all(t, fam)
    for v in t.non_leaves():
        for w in t.children(v):
            o = t.label(w)
            needed = any(t.is_ancestor(w, leaf) and
                         tf.necessary_for_leaf(t, fam, o, leaf, classes[leaf])
                         for leaf in t.leaves())
            still_structure = bool(
                tf.is_structure_tree(tf.contract(t, v, w), fam))
            assert still_structure == (not needed)


def test_reduce_rejects_non_structure_trees(k4):
    s3 = tf.graph_system(k4, 3)
    fam = tf.make_blocks(3, s3)
    with pytest.raises(NotAStructureTree):
        tf.reduce(tf.StructureTree.single_root(s3), fam)


# -- pipeline ---------------------------------------------------------------------


def test_p5_pipeline_certifies_no_block(p5):
    s3 = tf.graph_system(p5, 3)
    fam = tf.make_blocks(3, s3)
    report = tf.pipeline(s3, fam)
    assert report.tangles == []
    top = report.levels[-1]
    assert tf.is_f_tree(report.tree_reduced, fam)
    assert report.certificates
    for leaf, witness in report.certificates:
        assert fam.is_member(witness.members)


def test_k4_pipeline_reports_one_tangle_and_no_global_certificate(k4):
    s3 = tf.graph_system(k4, 3)
    fam = tf.make_blocks(3, s3)
    report = tf.pipeline(s3, fam)
    assert len(report.tangles) == 1
    assert not tf.is_f_tree(report.tree_reduced, fam)
    assert not any(lv.f_tree for lv in report.levels)


def test_cluster_pipeline_shows_two_tangles_at_the_low_level(six_cluster_system):
    fam = tf.make_cluster(3, six_cluster_system)
    report = tf.pipeline(six_cluster_system, fam)
    assert report.tangles == []  # every orientation of everything is forbidden
    by_k = {lv.k: lv for lv in report.levels}
    assert set(by_k) == {0.0, 2.0, 4.0}
    assert len(by_k[2.0].tangles) == 2
    assert by_k[2.0].f_tree is False
    assert by_k[4.0].tangles == [] and by_k[4.0].f_tree


def test_report_json_is_deterministic_and_wellformed(k4):
    s3 = tf.graph_system(k4, 3)
    fam = tf.make_blocks(3, s3)
    a = dump_report(tf.pipeline(s3, fam))
    b = dump_report(tf.pipeline(s3, fam))
    assert a == b
    d = json.loads(a)
    assert d["format"] == "report/v1"
    assert {"tree_full", "tree_reduced", "tangles", "certificates",
            "per_k"} <= d.keys()


def test_node_cap_guards_against_runaway_builds(k4):
    s3 = tf.graph_system(k4, 3)
    fam = tf.make_blocks(3, s3)
    from tangleforge.errors import NodeCapExceeded
    with pytest.raises(NodeCapExceeded):
        tf.build(s3, fam, tf.BuildConfig(max_nodes=3))


def test_degenerate_separation_builds_a_one_child_split():
    import numpy as np
    leq = np.eye(4, dtype=bool)
    for a, b in [(0, 1), (1, 0), (0, 2), (1, 2), (3, 0), (3, 1)]:
        leq[a, b] = True
    prev = None
    while prev is None or not np.array_equal(prev, leq):
        prev = leq
        leq = leq | ((leq.astype(np.uint8) @ leq.astype(np.uint8)) > 0)
    system = tf.SeparationSystem(leq, [1.0, 2.0], allow_degenerate=True)
    fam = tf.make_empty()
    tree = tf.build(system, fam)
    assert len(tree.children(tree.root)) == 1  # one orientation exists
    assert tf.is_structure_tree(tree, fam)
    assert [sorted(t) for t in tf.tangles(tree, fam)] == [[0, 2]]
