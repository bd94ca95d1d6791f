"""Classical translation: the congruence group on which the minimal-type form
lives, and its character.

Gamma_{T,D}(N) consists of integral determinant-one matrices with a = d and
c = -bD mod N; the local characters glue to a character of this group that is
trivial on the principal congruence subgroup of level N^2.
"""

import random

import numpy as np

from minvec.characters import MinimalVectorSpec, enumerate_theta
from minvec.global_whittaker import build_D, gamma_TD
from minvec.matgroups import TorusSpec

spec = TorusSpec(3, 1)
mvs = [MinimalVectorSpec.build(spec, enumerate_theta(spec)[0])]
N = 3
D = build_D(mvs)
print(f"N = {N}, D = {D} (the torus parameter mod N)")

for g in ([[1, 3], [0, 1]], [[1, 0], [3, 1]], [[2, 3], [3, 5]], [[1, 1], [0, 1]]):
    member, chi = gamma_TD(g, mvs)
    val = chi.r if member else "-"
    print(f"  {g}: member = {member}, character exponent = {val}")

print("\ntrivial on the principal congruence subgroup of level N^2 = 9:")
for g in ([[1, 9], [0, 1]], [[1, 0], [9, 1]], [[82, 9], [9, 1]]):
    g = np.array(g)
    member, chi = gamma_TD(g, mvs)
    print(f"  {g.tolist()}: member = {member}, trivial = {chi.is_one}")

print("\nmultiplicativity spot check:")
random.seed(0)
pool = []
while len(pool) < 12:
    a, b, c, d = (random.randint(-9, 9) for _ in range(4))
    if a * d - b * c == 1 and (a - d) % N == 0 and (c + b * D) % N == 0:
        pool.append(np.array([[a, b], [c, d]]))
g1, g2 = pool[0], pool[1]
_, c1 = gamma_TD(g1, mvs)
_, c2 = gamma_TD(g2, mvs)
_, c3 = gamma_TD(g1 @ g2, mvs)
print(f"  chi(g1) chi(g2) = chi(g1 g2): {(c1 * c2).r == c3.r}")
