"""Towers of finite-dimensional vector spaces.

A nilpotent shift X_{d+1} -> X_d kills everything after two steps, so the
pro-object is zero even though every stage is two-dimensional.  The identity
tower is its own epimorphic part.

    python3 demos/pro_vector_spaces.py
"""

from prokit.algebra import GF, QQ
from prokit.protower import (
    LevelMorphism,
    LinearTower,
    epi_part,
    level_cokernel,
    level_kernel,
    ml_report,
    mildness_evidence,
    zero_test,
)

F = GF(5)
shift = [[0, 1], [0, 0]]
T = LinearTower.constant(F, 2, 8, shift)
print(T)
for v in ml_report(T):
    print(f"  stage {v.stage}: {v}  images {list(v.image_dims)}")
# the last stages have too little room to the right to show two drops
print("zero test:", zero_test(T))

I = LinearTower.constant(QQ, 2, 4)
E, incl = epi_part(I)
print("identity tower epi part equals input:", E == I)

# a projection of constant towers, onto the first coordinate
S = LinearTower.constant(QQ, 2, 4)
Q = LinearTower.constant(QQ, 1, 4)
phi = LevelMorphism(S, Q, [[[1, 0]]] * 4)
print("kernel dims:", level_kernel(phi).dims)
print("cokernel dims:", level_cokernel(phi).dims)

m = mildness_evidence(T)
print("window limit dim:", m.limit_dim, "|", m.metadata["note"])
