"""Cluster tangles in a small dataset, and mindsets in a questionnaire.

Cheap bipartitions cannot cut through a cluster, only chip points off it,
so clusters show up as tangles of the low-order levels.  Asking for them at
too high a level instead produces an all-forbidden certificate.
"""

import tangleforge as tf

# six points, two tight clusters {0,1,2} and {3,4,5}
similarity = [[1.0 if (u < 3) == (v < 3) else 0.0 for v in range(6)]
              for u in range(6)]
system = tf.bipartition_system(tf.full_bipartition_ground(6, similarity))
print(f"{system.count} bipartitions; distinct cut weights:",
      sorted({system.order(s) for s in system.seps()}))

family = tf.make_cluster(3, system)  # every chosen triple must agree on >= 3
report = tf.pipeline(system, family)

print("\nper-level results (threshold k keeps cuts of weight below k):")
for level in report.levels:
    tag = "all-forbidden certificate" if level.f_tree else \
        f"{len(level.tangles)} tangle(s)"
    print(f"  k={level.k:g}: {tag}")
    for tau in level.tangles:
        sides = [level.tree.system.ground.side(o) for o in tau]
        core = frozenset.intersection(*sides) if sides else frozenset(range(6))
        print(f"     cluster core {sorted(core)}")

print("\nfull-level outcome:",
      "no tangle at all" if not report.tangles else report.tangles)

# a questionnaire: eight people, three yes/no questions; persons 0-2 always
# answer yes, persons 5-7 always answer no, 3 and 4 float
answers = [[1 if p in {0, 1, 2, 3} else 0,
            1 if p in {0, 1, 2, 4} else 0,
            1 if p in {0, 1, 2} else 0] for p in range(8)]
sysq = tf.questionnaire_system(answers)
famq = tf.make_cluster(3, sysq)
tree = tf.build(sysq, famq)
print(f"\nquestionnaire: {sysq.count} distinct questions,"
      f" {len(tf.tangles(tree, famq))} mindsets:")
for tau in tf.tangles(tree, famq):
    core = frozenset.intersection(*[sysq.ground.side(o) for o in tau])
    print("  mindset with core persons", sorted(core))
