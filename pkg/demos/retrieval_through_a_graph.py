# Retrieving the file through a graph
#
# A data collector hangs off node 0 and needs the file stored on k=5 nodes.
# Relaying full node contents is compared with a product-matrix MBR scheme
# where nodes further from the collector send fewer symbols.

import numpy as np

from graphregen import PmMbrCode, plan_retrieval, retrieve_mbr_optimal, retrieve_relay, running_example
from graphregen.engine import retrieval_lower_bound

graph = running_example()
code = PmMbrCode(7, 5, 6)
message = code.random_message(np.random.default_rng(2))
codeword = code.encode(message)

plan = plan_retrieval(graph, [0, 1, 2, 3, 4], [0])
print("retrieval order:", plan.order)
print("per-node quotas:", plan.quotas(code.d))

# ## Both schemes recover the same file

file_relay, relay = retrieve_relay(code, codeword, plan)
file_opt, opt = retrieve_mbr_optimal(code, codeword, plan)
print("relay   total", relay.total_symbols, "exact", np.array_equal(file_relay, message))
print("optimal total", opt.total_symbols, "exact", np.array_equal(file_opt, message))
print("symbols reaching the collector:", opt.extra["dc_symbols"], "file size M =", code.M)

# ## Lower bounds on a-node subsets

for a in range(code.k + 1):
    print(f"  a={a}: at least {retrieval_lower_bound(a, code.k, code.d, code.l, code.beta)} symbols")
