#!/usr/bin/env python3
"""Walk through attainment ratings on a tiny hand-built example.

Two owners, two achievements: the first achievement is unlocked by both
(so it is worthless as a signal), the second by only one. The rating is
the rarity-weighted fraction of unlocks.
"""
import numpy as np

from attainrec.attainment import AchievementTable, attainment_score, completion_rates

table = AchievementTable(
    game=0,
    names=("finish_tutorial", "beat_final_boss"),
    owners=(0, 1),
    bits=np.array([[1, 1], [1, 0]], dtype=np.uint8),
)

rates = completion_rates(table)
print("completion rates:", rates.rates)          # [1.0, 0.5]

for player in table.owners:
    score = attainment_score(table, rates, player)
    print(f"player {player}: rating {score}")
# player 0 unlocked both: (1*(1-1.0) + 1*(1-0.5)) / 2 = 0.25
# player 1 unlocked only the universal one: 0.0

# ratings never exceed 1 - 1/owners
print("upper bound for 2 owners:", 1 - 1 / len(table.owners))

# a storefront-style global completion override changes the weighting
with_global = AchievementTable(
    game=0,
    names=table.names,
    owners=table.owners,
    bits=table.bits,
    global_rates=np.array([0.9, 0.05]),
)
rates = completion_rates(with_global)
print("override rates:", rates.rates)
print("player 0 with global stats:", attainment_score(with_global, rates, 0))
