"""
Inside the saddle point: the pessimistic labeling
=================================================

TCP alternates two steps. It fits the model to the current soft labeling
in closed form, then moves the labeling in the direction that hurts the
new model most relative to the source model. This script follows both
along the iterations.
"""

import numpy as np

from tcpda import da, synthetic, tcp

rng = np.random.default_rng(11)
X, y, Z, u = synthetic.shifted_pair(rng, D=3, n=200, m=100)
source = da.estimate(X, da.one_hot(y, 2), lam=1.0, shared=False)

# Record the risk and how far the labeling has drifted from the source posterior.
start = da.posterior(source, Z)
history = []


def watch(t, theta, q, value):
    history.append((t, value, np.abs(q - start).sum(axis=1).mean()))


result = tcp.fit(source, Z, tcp.TCPConfig(max_iters=300, tolerance=1e-8), callback=watch)
for t, value, drift in history[:: max(1, len(history) // 10)]:
    print(f"iter {t:4d}  TCP risk {value: .6f}  mean label drift {drift:.4f}")

# The worst-case risk is the contrast maximized over all labelings at once.
# It upper-bounds the contrast under the true labels, whatever they are.
q_star = result.worst_case_labels
print("labels pushed to a vertex:", int(np.sum(q_star.max(axis=1) > 1 - 1e-9)), "of", len(q_star))
print("worst-case risk over all labelings:", round(tcp.worst_case_risk(result.params, source, Z), 5))
print("contrast under the true labels:   ", round(tcp.tcp_risk(result.params, source, Z, da.one_hot(u, 2)), 5))
