"""Characters of the quadratic unit group and the invariant that pins down a
minimal vector.

For each admissible character theta there is exactly one unit a mod p^n making
the depth-n pairing identity hold; that unit determines both the character chi
of the compact group and the diagonal support of the Whittaker function.
"""

from minvec.characters import MinimalVectorSpec, enumerate_theta, solve_a_theta
from minvec.matgroups import TorusSpec

for (p, n) in [(3, 1), (5, 1)]:
    spec = TorusSpec(p, n)
    thetas = enumerate_theta(spec)
    print(f"(p, n) = ({p}, {n}):  alpha = {spec.alpha},  "
          f"{len(thetas)} admissible characters")
    for th in thetas:
        a = solve_a_theta(th, spec)
        print(f"  theta weights {th.label():>8}  ->  a_theta = {a}")
    print()

mv = MinimalVectorSpec.build(TorusSpec(3, 1), enumerate_theta(TorusSpec(3, 1))[0])
print("chosen vector at (3,1):")
print("  a_theta           =", mv.a_theta)
print("  conductor exponent =", mv.conductor_exponent)
print("  Whittaker support unit class =", mv.support_unit(), "mod 3")
