"""Truncated p-adic arithmetic: the number model everything else sits on.

Elements are p^v * u with the unit u tracked modulo p^M.  Addition of
near-cancelling values honestly loses precision instead of inventing digits.
"""

from fractions import Fraction

from minvec.residues import LocalElement, UnitRoot, psi

p = 3
x = LocalElement.from_rational(p, Fraction(5, 9), M=8)
y = LocalElement.from_rational(p, Fraction(4, 9), M=8)

print(f"x = 5/9 in Q_3:  valuation {x.v}, unit {x.u} mod 3^{x.M}")
print(f"x + y = 1:       valuation {(x + y).v} (cancellation raises it)")
print(f"x * y:           valuation {(x * y).v}")

# the additive character psi has conductor 1: trivial on integers,
# nontrivial on p^{-1} o
print("\npsi on Z_3 is trivial:", psi(LocalElement.from_rational(p, 2, 8)).is_one)
r = psi(LocalElement.from_rational(p, Fraction(1, 3), 8))
print("psi(1/3) as a root of unity:", r.r, "->", r.to_complex())

# phases are exact rationals mod 1, so products never drift
acc = UnitRoot(0)
for _ in range(1000):
    acc = acc * r
print("psi(1/3)^1000 is exactly", acc.r)
