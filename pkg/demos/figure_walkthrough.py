# A two crossing diagram, taken apart by hand and then by the solvers.
#
#    python3 demos/figure_walkthrough.py

from knotdefect import enumerate_moves, figure_example, format_move, serialize_diagram
from knotdefect.diagram import compute_faces
from knotdefect.moves import apply_move, sequence_defect
from knotdefect.untangle import infer_special_set, untangle_brute, untangle_special_greedy

d = figure_example()
print(serialize_diagram(d))

# n crossings always give n + 2 faces, one of them marked outer
for i, face in enumerate(compute_faces(d)):
    print(i, face)

# removals come first, sorted by weight; insertions follow
for m in enumerate_moves(d)[:8]:
    print(f"{format_move(m):20s} weight {m.weight}")

# the bigon is a free move, and it leaves the crossing-free circle behind
ms = enumerate_moves(d, ["II-"])
print("after", format_move(ms[0]), "->", apply_move(d, ms[0]).n, "crossings")
print("defect", sequence_defect(d, ms[:1]))

# both solvers agree that budget 0 is enough
for solver in (untangle_brute, untangle_special_greedy):
    r = solver(d, 0)
    print(solver.__name__, r.answer, [format_move(m) for m in r.witness], r.nodes, "nodes")

# nothing needs to be guessed for a pure bigon untangling
print("special set:", sorted(infer_special_set(d, r.witness)))
