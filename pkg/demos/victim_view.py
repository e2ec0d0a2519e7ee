"""
Watching one dropper from next door
===================================

Four nodes sit on a line, S - A - M - D, with S streaming to D. M drops
packets in its Bad phases and forwards everything in its Good phase. A is
the only node that hands packets to M, so A's table entry for M is the
direct measurement. We print that entry once per window.
"""

from manet_trust import preset, run
from manet_trust.scenario import node_id
from manet_trust.trace import TraceEvent

sc = preset("fig2_3")
result = run(sc)

observer, subject = (node_id(i) for i in sc.focus)
series = result.series(observer, subject, TraceEvent.WINDOW_CLOSE)

# The scripted timeline: Bad until 140 s, Good until 240 s, Bad until 400 s.
for t, value in series:
    bar = "#" * int(round(value * 40))
    print(f"{t:6.0f} s  {value:5.3f}  {bar}")

# A threshold of 0.5 turns the entry into a verdict.
print("flagged by A:", result.managers[observer].is_flagged(subject))
