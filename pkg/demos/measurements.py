"""
Measuring one side: chi_B and the other classical measures
==========================================================

chi_B asks how much a measurement on A tells about B.  For a qubit A the
best rank-one projective measurement is found over the Bloch sphere; general
POVMs are searched heuristically.  The comparison at the end puts chi_p next
to psi, C1 and C2.

Run with ``python demos/measurements.py``.
"""

import math

import numpy as np

from qcorrelations import MeasurementSet, measure_all
from qcorrelations.correlations import apply_measurement, chi_povm_search, chi_projective, holevo_term
from qcorrelations.families import random_density, werner_state
from qcorrelations.states import swap_subsystems

# Measuring A in the computational basis steers B of a Werner state to
# (I +- gamma Z)/2
rho = werner_state(0.6)
z = MeasurementSet.projective(0.0, 0.0)
probs, posts = apply_measurement(rho, z)
print("outcome probabilities", probs)
print("post-measurement spectra", [np.round(p.eigenvalues(), 3) for p in posts])
print("Holevo term of the Z measurement", holevo_term(rho, z))

# Werner states are rotation invariant, so every direction gives the same value
for theta, phi in [(0.0, 0.0), (1.0, 2.0), (math.pi / 2, 4.0)]:
    print(f"direction ({theta:.2f}, {phi:.2f}):", holevo_term(rho, MeasurementSet.projective(theta, phi)))

# A generic state has a preferred direction
rho = random_density((2, 2), 3, seed=21)
chi, (theta, phi) = chi_projective(rho, return_angles=True)
print(f"\nrandom state: chi_p = {chi:.6f} at theta = {theta:.4f}, phi = {phi:.4f}")

# Four-outcome POVMs include the projective ones; the search here found no
# improvement over the best projector, which is typical for two qubits.
value, povm = chi_povm_search(rho, outcomes=4, trials=300, seed=1)
print(f"best 4-outcome POVM found: {value:.6f}")

# chi_B is not symmetric: measuring B to learn about A is a different question
print("measuring B instead:", chi_projective(swap_subsystems(rho)))

report = measure_all(rho)
for key, val in report.as_dict().items():
    if key != "diagnostics":
        print(f"{key:>15}: {val:.6f}" if val is not None else f"{key:>15}: n/a")
