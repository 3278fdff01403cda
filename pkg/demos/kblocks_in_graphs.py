"""Finding k-blocks in graphs, or certifying that none exist.

Three graphs, one question each: is there a set of at least three vertices
that no two separator vertices can split?  A complete graph says yes, a path
says no (with a checkable certificate), and two complete graphs joined by a
bridge say yes twice.
"""

from itertools import combinations

import tangleforge as tf
from tangleforge.oracle import OracleBudget, all_kblocks, all_tangles

budget = OracleBudget(max_separations=128)


def analyse(name, graph, k=3):
    print(f"== {name} (n={graph.n}, {len(graph.edges)} edges), "
          f"separator bound {k}")
    system = tf.graph_system(graph, k)
    print(f"   {system.count} separations of order below {k}")
    family = tf.make_blocks(k, system)
    tree = tf.build(system, family)
    reduced, trace = tf.reduce(tree, family)
    print(f"   tree: {len(tree)} nodes, {len(reduced)} after "
          f"{len(trace.steps)} contractions")
    found = tf.tangles(reduced, family)
    if found:
        for tau in found:
            block = sorted(tf.block_of_tangle(system, tau))
            print(f"   tangle -> block {block}")
    else:
        assert tf.is_f_tree(reduced, family)
        leaf = reduced.leaves()[0]
        witness = tf.classify_leaf(reduced, leaf, family).witness
        print("   no tangle; every leaf carries a forbidden witness, e.g.")
        print(f"   leaf {leaf}: members {sorted(witness.members)}, "
              f"evidence {witness.evidence}")
    # cross-check against plain brute force
    assert sorted(map(sorted, found)) == \
        sorted(map(sorted, all_tangles(system, family, budget)))
    assert sorted(sorted(tf.block_of_tangle(system, t)) for t in found) == \
        [sorted(b) for b in all_kblocks(graph, k)]
    print()


k4 = tf.Graph.from_edges(4, combinations(range(4), 2))
analyse("complete graph on four vertices", k4)

p5 = tf.Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
analyse("path on five vertices", p5)

edges = (list(combinations(range(4), 2))
         + [(u + 4, v + 4) for u, v in combinations(range(4), 2)]
         + [(3, 4)])
analyse("two complete graphs joined by one edge", tf.Graph.from_edges(8, edges))

print("command-line equivalents:")
print("  tangleforge certify --graph k4.edges --family blocks:3   # exit 0")
print("  tangleforge certify --graph p5.edges --family blocks:3   # exit 1")
