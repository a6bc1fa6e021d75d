"""
Linear predictor versus the nonlinear plant
===========================================

The controller never simulates the vehicle online.  It uses the hover
linearization, discretized exactly over the lookahead horizon, and this
script shows how far that cheap prediction is from what the nonlinear
plant actually does.
"""

import numpy as np

from nrflow.predictor import build_system_matrices, make_predictor, predict_output
from nrflow.quad_model import QuadParams, hover_input, integrate_hold, make_state

params = QuadParams()
sysm = build_system_matrices(params)
mats = make_predictor(params, T=0.8)

np.set_printoptions(precision=4, suppress=True)
print("A^3 == 0:", np.all(sysm.A @ sysm.A @ sysm.A == 0))
print("C @ B_tilde (rows px, py, pz, psi; cols thrust, p, q, r):")
print(mats.CB_tilde)

# %%
# Hold a modest input for one horizon and compare the two answers.
x0 = make_state(p=(0.0, 0.0, 1.5), v=(0.5, 0.0, 0.0))
for roll_rate in (0.01, 0.1, 0.4):
    u = hover_input(params) + np.array([0.0, roll_rate, 0.0, 0.0])
    predicted = predict_output(x0, u, mats)
    realized = sysm.C @ integrate_hold(x0, u, 1e-3, 800, params)
    print(f"roll rate {roll_rate:4.2f} rad/s: |prediction error| = {np.linalg.norm(predicted - realized):.4f} m")
