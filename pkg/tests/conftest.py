"""Shared fixtures and deterministic instance generators for the suite.

Two random-system generators are used throughout: one realizes separations
as subsets of a small ground set (valid by construction), the other repairs
a random relation into a closed order with a mirrored involution.  Both are
seeded, so every test run sees identical instances.
"""

from __future__ import annotations

from itertools import combinations, permutations, product
from pathlib import Path

import numpy as np
import pytest

import tangleforge as tf
from tangleforge.system import inverse

FIXTURES = Path(__file__).parent / "fixtures"


# -- tiny named systems -----------------------------------------------------


def nested_pair_system():
    """Two nested separations: 2 < 0 and 1 < 3, orders 1 and 2."""
    leq = np.eye(4, dtype=bool)
    leq[2, 0] = leq[1, 3] = True
    return tf.SeparationSystem(leq, [1.0, 2.0])


def antichain_system(n=2, orders=None):
    """n pairwise incomparable separations."""
    leq = np.eye(2 * n, dtype=bool)
    return tf.SeparationSystem(leq, orders if orders is not None else [1.0] * n)


def redundant_split_system():
    """Order-1 separation 0 whose forward orientation is above both 2 and 4,
    with 3 < 4 interlocking the two order-2 separations; splitting on it is
    never needed once the family forbids its backward orientation."""
    strict = [(2, 0), (4, 0), (3, 4), (1, 3), (1, 5), (5, 2),
              (1, 4), (1, 0), (1, 2), (3, 0), (5, 0)]
    leq = np.eye(6, dtype=bool)
    for a, b in strict:
        leq[a, b] = True
    return tf.SeparationSystem(leq, [1.0, 2.0, 2.0])


def redundant_split_family(system):
    return tf.make_explicit([{1}], system)


def trivial_top_system():
    """Orientation 0 sits above both orientations of the other separation,
    so 0 is trivial and 1 co-trivial; orders make 0's separation split first."""
    strict = [(2, 0), (3, 0), (1, 3), (1, 2), (1, 0)]
    leq = np.eye(4, dtype=bool)
    for a, b in strict:
        leq[a, b] = True
    return tf.SeparationSystem(leq, [1.0, 2.0])


def load_nonrich_fixture():
    system = tf.load_system((FIXTURES / "nonrich_system.json").read_text())
    family = tf.family_from_json(
        __import__("json").loads((FIXTURES / "nonrich_family.json").read_text()),
        system)
    return system, family


# -- random generators ---------------------------------------------------------


def random_subset_system(seed, n_seps=4, universe=5, orders="random"):
    """Separations realized as subsets of a small set, ordered by inclusion."""
    rng = np.random.default_rng(seed)
    full = (1 << universe) - 1
    sides = []
    used = set()
    while len(sides) < 2 * n_seps:
        mask = int(rng.integers(0, full + 1))
        comp = full ^ mask
        if mask in used or comp in used:
            continue
        used.update((mask, comp))
        sides.extend((mask, comp))
    n2 = len(sides)
    leq = np.zeros((n2, n2), dtype=bool)
    for i in range(n2):
        for j in range(n2):
            leq[i, j] = (sides[i] & ~sides[j]) == 0
    if orders == "random":
        ords = rng.integers(1, 4, size=n_seps).astype(float)
    elif orders == "injective":
        ords = rng.permutation(n_seps).astype(float) + 1.0
    else:
        ords = np.array(orders, dtype=float)
    return tf.SeparationSystem(leq, ords)


def random_relation_system(seed, n_seps=4, orders="random", attempts=60):
    """Random strict pairs, mirrored through the involution and transitively
    closed; retried until antisymmetric."""
    rng = np.random.default_rng(seed)
    n2 = 2 * n_seps
    for _ in range(attempts):
        leq = np.eye(n2, dtype=bool)
        n_pairs = int(rng.integers(1, max(2, n2)))
        for _ in range(n_pairs):
            a, b = rng.integers(0, n2, size=2)
            if a != b:
                leq[a, b] = True
                leq[b ^ 1, a ^ 1] = True
        prev = None
        while prev is None or not np.array_equal(prev, leq):
            prev = leq
            leq = leq | ((leq.astype(np.uint8) @ leq.astype(np.uint8)) > 0)
        mutual = leq & leq.T
        np.fill_diagonal(mutual, False)
        if not mutual.any():
            if orders == "random":
                ords = rng.integers(1, 4, size=n_seps).astype(float)
            else:
                ords = rng.permutation(n_seps).astype(float) + 1.0
            return tf.SeparationSystem(leq, ords)
    return antichain_system(n_seps)


def minimization_closure(system, members):
    """All pointwise lowerings of the given member sets."""
    out = set(frozenset(m) for m in members)
    for m in list(out):
        downs = [[y for y in system.all_oriented() if system.leq[y, x]]
                 for x in sorted(m)]
        for choice in product(*downs):
            out.add(frozenset(choice))
    return out


def standardized_explicit(system, seed):
    """A seeded explicit family made standard and closed under lowering."""
    rng = np.random.default_rng(seed)
    members = set()
    ids = list(system.all_oriented())
    for _ in range(int(rng.integers(1, 3))):
        size = int(rng.integers(1, min(4, len(ids) + 1)))
        pick = rng.choice(ids, size=size, replace=False)
        members.add(frozenset(int(x) for x in pick))
    for o in system.trivial_orienteds():
        members.add(frozenset({inverse(o)}))
    return tf.make_explicit(sorted(minimization_closure(system, members),
                                   key=sorted), system)


_GRAPH_CACHE = {}


def all_graphs_up_to_iso(n):
    """Non-isomorphic simple graphs on exactly n labelled-then-canonized
    vertices."""
    if n in _GRAPH_CACHE:
        return _GRAPH_CACHE[n]
    pairs = list(combinations(range(n), 2))
    perm_maps = []
    for perm in permutations(range(n)):
        perm_maps.append([pairs.index(tuple(sorted((perm[u], perm[v]))))
                          for u, v in pairs])
    seen = set()
    out = []
    for bits in range(2 ** len(pairs)):
        canon = min(sum(((bits >> i) & 1) << pm[i] for i in range(len(pairs)))
                    for pm in perm_maps)
        if canon in seen:
            continue
        seen.add(canon)
        out.append(tf.Graph.from_edges(
            n, [pairs[i] for i in range(len(pairs)) if (canon >> i) & 1]))
    _GRAPH_CACHE[n] = out
    return out


# -- tree helpers ---------------------------------------------------------------


def tree_shape(tree):
    return (tree.root,
            {v: (tree.parent(v), tree.label(v)) for v in tree.nodes()})


def original_labels(tree, ancestor):
    """Node -> oriented id in the ancestor system, for comparing restrictions."""
    up = tree.system.oriented_into(ancestor)
    return {v: (None if tree.label(v) is None else up[tree.label(v)])
            for v in tree.nodes()}


def two_cluster_similarity():
    return [[1.0 if (u < 3) == (v < 3) else 0.0 for v in range(6)]
            for u in range(6)]


def submodular_subsystems(universe, max_size):
    """Subsystems in which every pair keeps its join or meet, parent-linked."""
    out = []
    seps = list(universe.seps())
    for bits in range(1, 2 ** len(seps)):
        ids = [s for i, s in enumerate(seps) if (bits >> i) & 1]
        if len(ids) > max_size:
            continue
        keep = {o for s in ids for o in (2 * s, 2 * s + 1)}
        good = all(int(universe.join[a, b]) in keep or
                   int(universe.meet[a, b]) in keep
                   for a in keep for b in keep)
        if good:
            out.append(universe.subsystem(ids))
    return out


@pytest.fixture(scope="session")
def nested_pair():
    return nested_pair_system()


@pytest.fixture(scope="session")
def k4():
    return tf.Graph.from_edges(4, combinations(range(4), 2))


@pytest.fixture(scope="session")
def p5():
    return tf.Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])


@pytest.fixture(scope="session")
def two_k4():
    edges = (list(combinations(range(4), 2))
             + [(u + 4, v + 4) for u, v in combinations(range(4), 2)]
             + [(3, 4)])
    return tf.Graph.from_edges(8, edges)


@pytest.fixture(scope="session")
def six_cluster_system():
    ground = tf.full_bipartition_ground(6, similarity=two_cluster_similarity())
    return tf.bipartition_system(ground)
