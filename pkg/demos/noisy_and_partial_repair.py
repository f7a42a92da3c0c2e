# Noisy edges and partial repair
#
# Two variations on IP repair with a product-matrix MSR code (k=4, d=6, l=3).
# First, each edge message travels as a Reed-Solomon block through an
# adversarial channel. Second, only a fraction of the lost node is rebuilt.

from fractions import Fraction

import numpy as np

from graphregen import PmMsrCode, build_repair_tree, running_example, select_helpers, simulate_repair
from graphregen.channel import resilient_ip_transmit
from graphregen.engine import partial_repair

graph = running_example()
tree = build_repair_tree(graph, 0, select_helpers(graph, 0, 6))
code = PmMsrCode(7, 4)
rng = np.random.default_rng(3)
cw = code.encode_message(code.random_message(rng))

# ## Adversarial edges
#
# "floor" corrupts floor(rho N) symbols per block; "radius" spends the whole
# decoding radius, which is harsher on these short blocks.

for budget in ("floor", "radius"):
    rep, _ = resilient_ip_transmit(code, cw, tree, Fraction(1, 10), seed=0, budget=budget)
    print(f"{budget:6s} total={rep.total_symbols} bound={rep.extra['overhead_bound']} "
          f"errors={rep.extra['errors_injected']} exact={rep.verified}")

# ## Partial repair
#
# Restoring a third of the node caps every edge at one symbol.

full, _ = simulate_repair(code, cw, tree, "ip")
for gamma in (Fraction(1, 3), Fraction(2, 3), Fraction(1)):
    part, coords = partial_repair(code, cw, tree, gamma)
    print(f"gamma={gamma}: {part.total_symbols} symbols (full IP {full.total_symbols}), "
          f"coordinates {coords.tolist()} exact={part.verified}")
