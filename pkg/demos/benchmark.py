"""
A small benchmark
=================

Every strategy on a handful of instances, each solved under three variable
permutations, aggregated with shifted geometric means.
"""

import random

import numpy as np

from pbconflict.bench import render_table, run_suite, shifted_geo_mean, summarize
from pbconflict.generators import pigeonhole, random_instance
from pbconflict.opb import from_constraints

rng = random.Random(1)
instances = [(f"php{n}", from_constraints(pigeonhole(n))) for n in (5, 6, 7)]
for i in range(4):
    formula, n = random_instance(rng, max_vars=16)
    p = from_constraints(formula)
    p.num_vars = n
    instances.append((f"rand{i}", p))

records = run_suite(instances, ["none", "clausal", "saturation", "division", "mir"], seeds=[0, 1, 2],
                    conflict_limit=20_000)
print(render_table(summarize(records)))

# the shift keeps tiny values from dominating: compare with the plain geometric mean
nodes = np.array([r.nodes for r in records if r.strategy == "mir"], dtype=float)
print()
print("mir nodes, plain geometric mean  ", np.exp(np.log(nodes + 1e-9).mean()))
print("mir nodes, shifted (s = 100)     ", shifted_geo_mean(nodes, 100))
