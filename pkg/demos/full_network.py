"""
A full mobile network
=====================

22 nodes wander a 1000 m x 500 m field, five of them drop packets. Every
node keeps a table; here we look at what the network as a whole concluded
by the end of the run.
"""

import numpy as np

from manet_trust import preset, run
from manet_trust.reputation import format_node

sc = preset("table1").replace(seed=1)
result = run(sc)

print("packet fates:", {k.value: v for k, v in sorted(result.counts.items())})

# Average view of each node across all observers that hold an entry for it.
views = {}
for table in result.tables().values():
    for subject, value in table.items():
        views.setdefault(subject, []).append(value)

for subject in sorted(views):
    tag = "malicious" if subject in sc.malicious else ""
    vals = np.array(views[subject])
    print(f"{format_node(subject):>10}  n={len(vals):2d}  mean={vals.mean():.3f}  min={vals.min():.3f}  {tag}")

m = result.metrics
print(f"detected {m.detected_count}/{len(sc.malicious)}, false positives {m.false_positive_count}")
if m.mean_time_to_detection is not None:
    print(f"mean time to first flag: {m.mean_time_to_detection:.0f} s")
