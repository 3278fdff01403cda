"""Separation-system structure: validation, predicates, closure, restriction."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import tangleforge as tf
from tangleforge.errors import InconsistentInput, ValidationError
from tangleforge.oracle import all_consistent_orientations
from tangleforge.system import backward, forward, inverse, sep_of, validate

from conftest import (antichain_system, random_relation_system,
                      random_subset_system)


def all_subsets(ids):
    out = [frozenset()]
    for x in ids:
        out += [s | {x} for s in out]
    return out


# -- validation ---------------------------------------------------------------


def test_nested_pair_validates_clean(nested_pair):
    assert validate(nested_pair).ok


def test_mutual_comparability_across_separations_is_rejected():
    leq = np.eye(4, dtype=bool)
    leq[0, 2] = leq[2, 0] = True
    with pytest.raises(ValidationError, match="antisymmetry"):
        tf.SeparationSystem(leq, [1.0, 1.0])


def test_broken_involution_is_rejected():
    leq = np.eye(4, dtype=bool)
    leq[0, 2] = True  # mirror pair 3 <= 1 missing
    with pytest.raises(ValidationError, match="involution"):
        tf.SeparationSystem(leq, [1.0, 1.0])


def test_missing_transitivity_is_rejected_and_closable():
    d = {"format": "sepsys/v1", "count": 3, "orders": [1, 1, 1],
         "leq": [[0, 2], [3, 1], [2, 4], [5, 3]]}
    with pytest.raises(ValidationError, match="transitivity"):
        tf.from_json_dict(d)
    sys2 = tf.from_json_dict(d, transitive_close=True)
    assert sys2.le(0, 4)


def test_nan_orders_rejected():
    leq = np.eye(2, dtype=bool)
    with pytest.raises(ValidationError, match="order-function"):
        tf.SeparationSystem(leq, [float("nan")])


def test_negative_orders_are_legal():
    assert tf.SeparationSystem(np.eye(2, dtype=bool), [-3.5]).order(0) == -3.5


def test_degenerate_rejected_by_default_and_admitted_on_request():
    leq = np.ones((2, 2), dtype=bool)
    with pytest.raises(ValidationError, match="degenerate"):
        tf.SeparationSystem(leq, [1.0])
    sysd = tf.SeparationSystem(leq, [1.0], allow_degenerate=True)
    assert sysd.is_degenerate(0)
    assert sysd.orientations_of(0) == (0,)


def test_validate_report_carries_all_failures():
    leq = np.eye(4, dtype=bool)
    leq[0, 2] = leq[2, 0] = True
    leq[1, 3] = leq[3, 1] = True
    sysb = tf.SeparationSystem(leq, [1.0, float("inf")], check=False)
    report = validate(sysb)
    codes = {i.code for i in report.issues}
    assert "antisymmetry" in codes and "order-function" in codes


# -- element predicates ------------------------------------------------------


def test_small_and_trivial_in_subset_ground():
    # all bipartitions of a 3-point set: the empty side is small, the full
    # side is trivial as soon as any proper bipartition exists
    sys3 = tf.bipartition_system(tf.full_bipartition_ground(3))
    ground = sys3.ground
    empty_id = next(o for o in sys3.all_oriented() if not ground.side(o))
    full_id = inverse(empty_id)
    assert sys3.is_small(empty_id)
    assert not sys3.is_trivial(empty_id)
    assert sys3.is_trivial(full_id)
    assert sys3.is_cotrivial(empty_id)
    # brute-force cross-check of triviality over all witness pairs
    for o in sys3.all_oriented():
        expect = any(sep_of(x) != sep_of(o)
                     and sys3.lt(x, o) and sys3.lt(inverse(x), o)
                     for x in sys3.all_oriented())
        assert sys3.is_trivial(o) == expect


def test_antichain_has_no_trivial_elements():
    sys2 = antichain_system(2)
    assert not any(sys2.is_trivial(o) for o in sys2.all_oriented())


def test_small_graph_separations_have_full_first_side(k4):
    s3 = tf.graph_system(k4, 3)
    verts = frozenset(k4.vertices())
    for o in s3.all_oriented():
        A, B = s3.ground.side_pair(o)
        if A == verts:
            assert s3.is_small(o)


# -- consistency, closure, stars ------------------------------------------------


def test_towards_pointing_pair_is_consistent(nested_pair):
    assert nested_pair.is_consistent({0, 3})
    assert nested_pair.is_consistent(frozenset())


def test_nested_pair_has_three_consistent_orientations(nested_pair):
    full = [{0, 2}, {0, 3}, {1, 2}, {1, 3}]
    ok = [sorted(t) for t in full if nested_pair.is_consistent(t)]
    assert ok == [[0, 2], [0, 3], [1, 3]]


def test_closure_examples(nested_pair):
    assert nested_pair.closure(frozenset()) == frozenset()
    assert nested_pair.closure({2}) == {0, 2}
    assert nested_pair.closure({1}) == {1, 3}


def test_closure_rejects_inconsistent_input(nested_pair):
    with pytest.raises(InconsistentInput):
        nested_pair.closure({1, 2})


@pytest.mark.parametrize("seed", range(12))
def test_closure_is_idempotent_and_a_requirement_fixed_point(seed):
    system = random_subset_system(seed, n_seps=4)
    ids = sorted(system.all_oriented())
    for members in all_subsets(ids):
        if not system.is_consistent(members):
            continue
        cl = system.closure(members)
        if system.is_consistent(cl):
            assert system._closure_raw(cl) == cl
        # independent oracle: a separation is required when taking its inverse
        # instead breaks consistency
        base = {system.canon(x) for x in members}
        required = set(base)
        for y in ids:
            cy = system.canon(y)
            if cy not in required and \
                    not system.is_consistent(set(members) | {inverse(y)}):
                required.add(cy)
        assert frozenset(required) == cl
        if not any(system.is_cotrivial(o) for o in members):
            # iterating the requirement step adds nothing more
            grown = set(required)
            for y in ids:
                cy = system.canon(y)
                if cy not in grown and \
                        not system.is_consistent(grown | {inverse(y)}):
                    grown.add(cy)
            assert frozenset(grown) == cl


@pytest.mark.parametrize("seed", range(8))
def test_closure_monotone_and_fixed_on_full_orientations(seed):
    system = random_subset_system(seed, n_seps=4)
    for tau in all_consistent_orientations(system):
        assert system.closure(tau) == tau
        subs = sorted(tau)
        for members in all_subsets(subs):
            assert system.closure(members) <= system.closure(tau)


@pytest.mark.parametrize("seed", range(8))
def test_closure_of_cotrivial_free_sets_stays_consistent(seed):
    system = random_relation_system(seed, n_seps=4)
    ids = sorted(system.all_oriented())
    for members in all_subsets(ids):
        if not system.is_consistent(members):
            continue
        if any(system.is_cotrivial(o) for o in members):
            continue
        cl = system.closure(members)
        assert system.is_consistent(cl)
        fresh = cl - frozenset(members)
        per_sep = {}
        for o in fresh:
            per_sep.setdefault(sep_of(o), set()).add(o)
        assert all(len(v) == 1 for v in per_sep.values())


@pytest.mark.parametrize("seed", range(8))
def test_consistent_orientations_never_contain_cotrivial_elements(seed):
    system = random_relation_system(seed, n_seps=4)
    for tau in all_consistent_orientations(system):
        assert not any(system.is_cotrivial(o) for o in tau)


def test_star_examples(nested_pair):
    assert nested_pair.is_star({0, 3})  # pointing towards each other
    assert nested_pair.is_star({0})
    assert nested_pair.is_star(frozenset())


@pytest.mark.parametrize("seed", range(10))
def test_both_orientations_spoil_a_star_unless_comparable(seed):
    system = random_subset_system(seed, n_seps=3)
    for s in system.seps():
        members = {forward(s), backward(s)}
        comparable = system.le(forward(s), backward(s)) or \
            system.le(backward(s), forward(s))
        if not comparable:
            assert not system.is_star(members)


# -- towards / nested -----------------------------------------------------------


def test_points_towards_nested_pair(nested_pair):
    assert nested_pair.points_towards(0, 1)  # 0 >= 2
    assert nested_pair.points_away(1, 1)
    assert nested_pair.is_nested(0, 1)
    assert nested_pair.is_nested(0, 0)


def test_crossing_bipartitions_are_not_nested():
    ground = tf.BipartitionGround(
        4, (frozenset({0, 1}), frozenset({2, 3}),
            frozenset({0, 2}), frozenset({1, 3})))
    sysx = tf.bipartition_system(ground)
    assert not sysx.is_nested(0, 1)


# -- involution / orders ---------------------------------------------------------


@pytest.mark.parametrize("seed", range(10))
def test_involution_is_an_order_reversing_bijection(seed):
    system = random_relation_system(seed, n_seps=4)
    for a in system.all_oriented():
        assert inverse(inverse(a)) == a
        assert system.order_of(a) == system.order_of(inverse(a))
        for b in system.all_oriented():
            assert system.le(a, b) == system.le(inverse(b), inverse(a))


# -- restriction ----------------------------------------------------------------


def test_restrict_below_edges(nested_pair):
    assert nested_pair.restrict_below(0.5).count == 0
    full = nested_pair.restrict_below(float("inf"))
    assert full.count == 2 and full.back_map == (0, 1)
    only_r = nested_pair.restrict_below(2)
    assert only_r.count == 1 and only_r.back_map == (0,)


@pytest.mark.parametrize("seed", range(6))
def test_restriction_composes_to_the_minimum_threshold(seed):
    system = random_subset_system(seed, n_seps=5)
    k1, k2 = 3.0, 2.0
    a = system.restrict_below(k1).restrict_below(k2)
    b = system.restrict_below(min(k1, k2))
    assert [a.parent.back_map[s] for s in a.back_map] == list(b.back_map)
    assert np.array_equal(a.leq, b.leq)
    assert np.array_equal(a.orders, b.orders)


# -- JSON -----------------------------------------------------------------------


@pytest.mark.parametrize("seed", range(6))
def test_json_round_trip_is_stable(seed):
    system = random_relation_system(seed, n_seps=4)
    text = tf.dump_system(system)
    again = tf.load_system(text)
    assert tf.dump_system(again) == text
    assert np.array_equal(system.leq, again.leq)
    assert np.array_equal(system.orders, again.orders)


def test_json_round_trip_keeps_universe_and_ground(six_cluster_system):
    text = tf.dump_system(six_cluster_system)
    again = tf.load_system(text)
    assert again.has_universe() and again.distributive
    assert again.ground.sides == six_cluster_system.ground.sides


# -- property tests ----------------------------------------------------------------


@given(st.integers(0, 10_000), st.integers(2, 5))
@settings(max_examples=40, deadline=None)
def test_random_subset_systems_always_validate(seed, n):
    assert validate(random_subset_system(seed, n_seps=n)).ok


@given(st.integers(0, 10_000), st.integers(2, 4))
@settings(max_examples=40, deadline=None)
def test_random_relation_systems_always_validate(seed, n):
    assert validate(random_relation_system(seed, n_seps=n)).ok
