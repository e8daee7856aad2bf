"""
Geometric algebra of 3-space and the Pauli matrices
===================================================

The trivector e1e2e3 squares to -1 and commutes with everything, so it acts
as the imaginary unit.  Vector products then follow the same rule as Pauli
matrix products: e_i e_j = delta_ij + i eps_ijk e_k.
"""

import itertools

import numpy as np

from phasebell import ga3
from phasebell.checks import to_pauli_matrix

i = ga3.pseudoscalar()
print("i * i =", ga3.geometric_product(i, i))

# The nine products of basis vectors, next to their Pauli images
for a, b in itertools.product((1, 2, 3), repeat=2):
    prod = ga3.geometric_product(ga3.basis_vector(a), ga3.basis_vector(b))
    print(f"e{a} e{b} = {prod}")
    assert np.allclose(to_pauli_matrix(prod), to_pauli_matrix(ga3.basis_vector(a)) @ to_pauli_matrix(ga3.basis_vector(b)))

# A rotor in the e1e2 plane is cos + sin * e1e2; composing adds the angles
plane = ga3.Bivector(e12=1.0)
r = ga3.geometric_product(ga3.rotor_exp(plane, 0.4), ga3.rotor_exp(plane, 0.7))
print("R(0.4) R(0.7) =", r)
print("R(1.1)        =", ga3.rotor_exp(plane, 1.1))

# The phase form exp(i phi) has the same scalar part
print("scalar parts:", ga3.scalar_part(ga3.rotor_exp(plane, 1.1)), ga3.scalar_part(ga3.pseudoscalar_exp(1.1)))
