"""
How far an accusation moves an opinion
======================================

X starts out trusting Y at 0.7. Two neighbors, one trusted at 0.6 and one
at 0.5, take turns accusing Y. Each accusation pulls X's value toward the
accused value by the accuser's weight.
"""

from manet_trust import RepMessage, TrustManager, merge_broadcast

X, Y, B1, B2 = 1, 2, 3, 4
tm = TrustManager(X, initial={Y: 0.7, B1: 0.6, B2: 0.5})

for t, (who, value) in enumerate([(B1, 0.3), (B2, 0.25), (B1, 0.2), (B2, 0.2)], start=1):
    before = tm.table.get(Y)
    tm.handle_message(RepMessage.broadcast(Y, value), who, float(t))
    after = tm.table.get(Y)
    check = merge_broadcast(tm.table.get(who), value, before)
    print(f"accuser trust {tm.table.get(who):.1f}, says {value:.2f}: {before:.3f} -> {after:.3f} (rule gives {check:.3f})")
