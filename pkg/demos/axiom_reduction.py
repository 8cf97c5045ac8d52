# Turn a tiny axiom-set instance into a knot diagram and untangle it
# along a known axiom set.
#
#    python3 demos/axiom_reduction.py [out.svg]

import sys
import time
from collections import Counter

from knotdefect.masred import (build_reduction, closure, cycle2, double_instance, format_mas,
                               min_axiom_set, stuck_after, witness_untangling)
from knotdefect.moves import sequence_defect
from knotdefect.render import render_svg
from knotdefect.untangle import infer_special_set

inst = cycle2()
print(format_mas(inst))
print("closure of {a}:", sorted(closure(inst, {"a"})))
print("smallest axiom set:", min_axiom_set(inst))

# the layout works on the doubled instance: every sentence gets a hatted twin
print(format_mas(double_instance(inst)))

t = time.perf_counter()
lay = build_reduction(inst)
d = lay.diagram
print(f"{d.n} crossings, built in {time.perf_counter() - t:.2f}s")
# crossing names in the atlas, grouped by family
print(Counter(name.split("(")[0].split("^")[0].split("_")[0] for name in lay.atlas))

# without axioms the free bigons run out long before the diagram is gone
print("crossings left with no axioms:", stuck_after(lay, []))
print("crossings left with {a}:", stuck_after(lay, ["a"]))

ms = witness_untangling(lay, ["a"])
print(len(ms), "moves, defect", sequence_defect(d, ms))
print("kinds:", Counter(m.kind for m in ms))
print("special crossings:", sorted(infer_special_set(d, ms)))

if len(sys.argv) > 1:
    with open(sys.argv[1], "w") as fh:
        fh.write(render_svg(d))
    print("wrote", sys.argv[1])
