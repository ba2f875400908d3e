"""
Solving, optimizing and the command line
========================================
"""

import random
import tempfile
from pathlib import Path

from pbconflict import SolverConfig, solve
from pbconflict.cli import main
from pbconflict.generators import pigeonhole
from pbconflict.opb import from_constraints, write_opb

# pigeonhole: 7 pigeons, 6 holes
php = pigeonhole(7)
for analysis in ["none", "clausal", "saturation", "division", "mir"]:
    out = solve(php, config=SolverConfig(analysis=analysis, max_conflict_length_fraction=1))
    s = out.stats
    print(f"{analysis:<11} {out.status:<6} conflicts {s.conflicts:>5}  decisions {s.decisions:>5}  "
          f"mean learned length {s.mean_learned_length:5.2f}")

# linear search on an objective: each model tightens the bound
formula = pigeonhole(4, 4)
rng = random.Random(3)
cost = [(rng.randint(1, 20), v) for v in range(1, 17)]
out = solve(formula, objective=cost, on_solution=lambda m, value: print("  found cost", value))
print("optimal:", out.optimal, "cost", out.objective_value)

# the same thing through the command line front end
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "php.opb"
    path.write_text(write_opb(from_constraints(php)))
    code = main([str(path), "--analysis", "division", "--stats-json", str(Path(tmp) / "stats.json")])
    print("exit code", code)
    print((Path(tmp) / "stats.json").read_text())
