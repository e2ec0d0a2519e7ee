"""
Light versus heavy droppers
===========================

Same chain as ``victim_view.py`` but with fast random phase switches. One
configuration drops 0-5 packets per second in Bad phases, the other 3-15.
Averaged over a handful of seeds, the heavy dropper ends up with the lower
reputation, and both hover well below 1.
"""

import numpy as np

from manet_trust import preset, run
from manet_trust.scenario import node_id
from manet_trust.trace import TraceEvent

for name in ("fig4", "fig5"):
    sc = preset(name)
    obs, subj = (node_id(i) for i in sc.focus)
    means = []
    for seed in range(5):
        series = run(sc.replace(seed=seed)).series(obs, subj, TraceEvent.WINDOW_CLOSE)
        means.append(np.mean([v for _, v in series]))
    print(f"{name}: drop {sc.drop_min_pps}-{sc.drop_max_pps} pkt/s  "
          f"mean reputation {np.mean(means):.3f} +/- {np.std(means):.3f}")
