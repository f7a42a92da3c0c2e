# Repairing a node over a graph
#
# A failed node cannot always reach its helpers directly. Here the helpers
# form a BFS tree rooted at the failed node, and every tree edge is metered.
# Forwarding everything (AF) is compared with aggregating on the way (IP).

import numpy as np

from graphregen import (
    DetCode,
    GpmCode,
    MoulinCode,
    PmMsrCode,
    build_repair_tree,
    running_example,
    select_helpers,
    simulate_repair,
)

graph = running_example()
tree = build_repair_tree(graph, 0, select_helpers(graph, 0, 6))
print("parent of each helper:", dict(sorted(tree.parent.items())))
print("subtree sizes:", dict(sorted(tree.subtree_size.items())))

# ## One codeword per family
#
# All four codes use n=7 and d=6 so they share the same repair tree.

rng = np.random.default_rng(1)
codes = [PmMsrCode(7, 4), GpmCode(7, 5, 3), MoulinCode(7, 5, 6, 4), DetCode(7, 6, 3)]

for code in codes:
    cw = code.encode_message(code.random_message(rng))
    af, _ = simulate_repair(code, cw, tree, "af")
    ip, rebuilt = simulate_repair(code, cw, tree, "ip")
    print(f"{code.family:8s} l={code.l:3d} beta={code.beta:2d}  AF={af.total_symbols:4d}  "
          f"IP={ip.total_symbols:4d}  bound={ip.lower_bound}  exact={np.array_equal(rebuilt, cw[:, 0])}")

# ## Where IP saves
#
# An IP node stops forwarding raw shares once they would exceed l symbols,
# so only edges with large subtrees get cheaper.

code = codes[2]
cw = code.encode_message(code.random_message(rng))
af, _ = simulate_repair(code, cw, tree, "af")
ip, _ = simulate_repair(code, cw, tree, "ip")
for child, parent, sym in ip.per_edge:
    print(f"  {child} -> {parent}: AF {af.edge(child):3d}  IP {sym:3d}")
