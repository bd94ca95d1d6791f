"""Sup-norm experiment: how large does a minimal-type form get?

The Fourier expansion runs only over an arithmetic progression m = b (mod N),
which concentrates mass and pushes the sup-norm up like C^(1/8) k^(1/4) in the
conductor C = N^4 and the weight k.  The scan covers the generating domain with
exact per-row FFTs and reports both the grid maximum and a single-term witness.
"""

import math

from minvec.characters import MinimalVectorSpec, enumerate_theta
from minvec.global_whittaker import (ArchParams, CoefficientSource,
                                     RamifiedData, scan_supnorm)
from minvec.matgroups import TorusSpec

src = CoefficientSource.sato_tate(seed=0)

print(f"{'k':>4} {'N':>3} {'C':>5} {'sup':>10} {'witness':>10} "
      f"{'sup/(C^1/8 k^1/4)':>18}")
for k in (12, 20, 40):
    arch = ArchParams("holomorphic", k=k)
    for N in (1, 3, 5):
        if N == 1:
            ram = RamifiedData.unramified()
        else:
            spec = TorusSpec(N, 1)
            ram = RamifiedData.build(
                [MinimalVectorSpec.build(spec, enumerate_theta(spec)[0])])
        rep = scan_supnorm(ram, src, arch)
        print(f"{k:>4} {N:>3} {rep.conductor:>5} {rep.sup:>10.4f} "
              f"{rep.witness:>10.4f} {rep.ratio:>18.4f}")

print("\nthe normalized ratio staying in a bounded window across the grid is")
print("the numerical signature of the C^(1/8) k^(1/4) growth law")
