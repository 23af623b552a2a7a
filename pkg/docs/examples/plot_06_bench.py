"""
Checking every result against an independent oracle
===================================================

Each check compares an automaton-derived answer with plain integer
computations.  ``zeckauto paperbench`` runs the same thing.
"""

from zeckauto import bench

report = bench.run()
print(bench.format_report(report))
