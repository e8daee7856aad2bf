"""
Joint detection and the correlation curve
=========================================

Each photon's rotation is a local phase e^{i phi}.  The joint detection
probability is the squared real part of the product of both rotations, which
gives E = cos 2(phi1 - phi2) and a CHSH sum of 2*sqrt(2).
"""

import math

import numpy as np

from phasebell import model
from phasebell.model import PairSourceSpec, PhaseRotor

deg = np.radians

# Joint probability does not factor into the single-side probabilities
a = deg(45)
print("joint p(45, 45)         =", model.joint_probability(a, a))
print("p(45) * p(45)           =", model.detection_probability(PhaseRotor(a)) ** 2)

# A common source phase cancels in the product
print("with phi0 = 1.0         =", model.joint_probability(a, a, PairSourceSpec(phi0=1.0)))

print("\n angle    E")
for d in range(0, 181, 15):
    print(f"{d:6d}  {float(model.correlation(deg(d), 0.0)):+.6f}")

s = model.chsh(*deg(model.CHSH_ANGLES_DEG))
print(f"\nS(0, 45, 22.5, 67.5) = {s:.12f}   2*sqrt(2) = {2 * math.sqrt(2):.12f}")

smax, quad = model.max_abs_chsh_grid(deg(np.arange(0, 180, 22.5)))
print(f"max |S| on a 22.5 deg grid = {smax:.6f} at {np.degrees(quad)}")
