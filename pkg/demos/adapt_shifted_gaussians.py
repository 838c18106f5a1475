"""
Adapting a classifier to a shifted target domain
================================================

A source LDA model is trained on labelled samples. The target domain has
the same classes, but their means are shifted. TCP adapts the model using
only the unlabelled target samples, and the adapted model's risk on the
true target labels is never above the source model's.
"""

import numpy as np

from tcpda import da, metrics, synthetic, tcp

rng = np.random.default_rng(7)

# Labelled source samples X, y and target samples Z; u is hidden from the estimator.
X, y, Z, u = synthetic.shifted_pair(rng, D=2, n=200, m=150, separation=2.0, shift_scale=1.5)

# Source model: hard labels are the one-hot special case of soft labels.
source = da.estimate(X, da.one_hot(y, 2), lam=1.0, shared=True)

# Adapt. Only Z goes in.
result = tcp.fit(source, Z, tcp.TCPConfig(lam=1.0))
print(f"iterations {result.iterations}, converged {result.converged}, TCP risk {result.tcp_risk:.5f}")

# Now peek at the true target labels to score both models.
for name, model in (("source", source), ("TCP", result.params)):
    report = metrics.evaluate(model, source, result.params, Z, u)
    print(f"{name:>6}: AUC {report.auc:.3f}  error {report.error_rate:.3f}")

U = da.one_hot(u, 2)
print("target risk, source model:", round(da.regularized_risk(source, Z, U), 5))
print("target risk, TCP model:   ", round(da.regularized_risk(result.params, Z, U), 5))
