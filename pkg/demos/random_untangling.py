# Scramble the unknot with random moves, then look for the cheapest way back.
#
#    python3 demos/random_untangling.py [seed] [steps]

import sys

from knotdefect import format_move, generate_random_unknot
from knotdefect.moves import enumerate_moves, sequence_defect
from knotdefect.untangle import (classify_move, infer_special_set, min_defect_result,
                                 replay_special, swap_to_front)

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 2
steps = int(sys.argv[2]) if len(sys.argv) > 2 else 4

d, history = generate_random_unknot(seed, steps, return_moves=True)
print("scramble:", ", ".join(format_move(m) for m in history))
print(d.n, "crossings; undoing the scramble costs", sum(m.weight for m in history))

# the smallest budget that works, searched upward from 0
res = min_defect_result(d, 8, max_nodes=10**6)
if res is None:
    sys.exit("no untangling within defect 8")
ms = res.witness
print("min defect", res.k, "in", len(ms), "moves:")
for m in ms:
    print("   ", format_move(m))
print("2*moves - n =", 2 * len(ms) - d.n, " sum of weights =", sum(m.weight for m in ms))

# which crossings have to be guessed, and how each move looks against that guess
s = infer_special_set(d, ms)
print("special set", sorted(s), "size", len(s), "bound", 3 * sequence_defect(d, ms))
for m, (kind, st) in zip(ms, replay_special(d, s, ms)):
    print(f"    {format_move(m):22s} {kind:8s} S={sorted(st.s)}")

# any bigon away from the guess can go first without changing the cost
greedy = [g for g in enumerate_moves(d, ["II-"]) if g.x not in s and g.y not in s]
if greedy:
    g = greedy[-1]
    out = swap_to_front(d, s, ms, g)
    print("swapped", format_move(g), "to the front:", [format_move(m) for m in out])
    print("defect still", sequence_defect(d, out))
else:
    print("no bigon avoids the special set here")
