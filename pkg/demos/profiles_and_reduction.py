"""Profile families, and why restriction must happen before reduction.

The first half runs the profile families on a subset universe: orientations
avoiding the pair-plus-join triples, with the strong variant additionally
closing downward on the third element.  On a submodular system inside a
distributive universe, the regular profiles and the strong family's tangles
are the same orientations.

The second half builds a tree containing a split that no displayed tangle
needs, contracts it away, and shows that the contracted tree has lost the
low-order level the original still carries.
"""

import numpy as np

import tangleforge as tf
from tangleforge.oracle import all_tangles
from tangleforge.system import fmt_oriented

universe = tf.bipartition_system(tf.full_bipartition_ground(3))
print(f"subset universe on 3 points: {universe.count} separations, "
      f"distributive lattice: {universe.distributive}")

profile = tf.make_profile(universe)
strong = tf.make_strong_profile(universe)
profiles = all_tangles(universe, profile)
regular = [t for t in profiles if not any(universe.is_small(o) for o in t)]
strong_tangles = all_tangles(universe, strong)
print(f"profiles: {len(profiles)}, regular: {len(regular)}, "
      f"strong-family tangles: {len(strong_tangles)}")
print("regular profiles equal the strong family's tangles:",
      sorted(map(sorted, regular)) == sorted(map(sorted, strong_tangles)))

tree = tf.build(universe, strong)
print("strong-family tree displays", len(tf.tangles(tree, strong)),
      "tangles; all-forbidden:", bool(tf.is_f_tree(tree, strong)))

# -- reduction versus restriction --------------------------------------------

print("\n-- a split nobody needs --")
strict = [(2, 0), (4, 0), (3, 4), (1, 3), (1, 5), (5, 2),
          (1, 4), (1, 0), (1, 2), (3, 0), (5, 0)]
leq = np.eye(6, dtype=bool)
for a, b in strict:
    leq[a, b] = True
system = tf.SeparationSystem(leq, [1.0, 2.0, 2.0])
family = tf.make_explicit([{1}], system)

tree = tf.build(system, family)
reduced, trace = tf.reduce(tree, family)
print(f"built {len(tree)} nodes; reduction contracted {trace.steps} "
      f"leaving {len(reduced)}")
print("labels left:", sorted(fmt_oriented(reduced.label(v))
                             for v in reduced.nodes()
                             if reduced.label(v) is not None))
print("tangles unchanged:",
      tf.tangles(reduced, family) == tf.tangles(tree, family))

low_from_full = tf.restrict(tree, 2.0)
print("\nrestrict the unreduced tree to orders below 2:",
      [sorted(map(fmt_oriented, t)) for t in tf.tangles(low_from_full, family)])
check = tf.is_structure_tree(tf.restrict(reduced, 2.0), family)
print("restrict the reduced tree instead:", check.why)
print("so per-level trees are always cut from the unreduced build, then "
      "reduced afterwards.")
