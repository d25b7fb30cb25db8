"""Walk through the reference pricing setup end to end.

A firm worth V=199 has issued a unit-face zero-coupon bond maturing at
T=2. Default happens if the firm value ever touches the barrier at 100,
paying a recovery of 70% of the discounted face. A put lets the holder
redeem the bond early at E=0.9 at T1=1.
"""

import math

from credit_pricer import (
    BondSpec,
    MarketParams,
    OptionKind,
    OptionSpec,
    bond_option_price,
    bond_price,
    callable_bond_price,
    early_redemption_boundary,
    puttable_bond_price,
    survival_probability,
)

market = MarketParams(r=0.04, q=0.0, sigma=0.5)
bond = BondSpec(T=2.0, a=0.0, b=100.0, R=0.7)
put = OptionSpec(T1=1.0, E=0.9, kind=OptionKind.PUT)
call = OptionSpec(T1=1.0, E=0.9, kind=OptionKind.CALL)

print("defaultable bond, unit face, barrier 100, recovery 0.7")
print(f"{'V':>6} {'t':>5} {'survival':>10} {'price':>10}")
for v in (139.0, 199.0, 300.0):
    for t in (0.0, 0.5, 1.0):
        w = survival_probability(v, t, bond, market)
        p = bond_price(v, t, bond, market)
        print(f"{v:6.0f} {t:5.2f} {w:10.6f} {p:10.6f}")

# The early redemption boundary is the firm value at which redeeming at E
# and keeping the bond are worth the same at T1.
res = early_redemption_boundary(bond, put, market)
print(f"\nearly redemption boundary: K = {res.K:.3f}"
      f" (residual {res.residual:.1e}, {res.iterations} iterations)")

v, t = 199.0, 0.0
p = bond_option_price(v, t, bond, put, market)
c = bond_option_price(v, t, bond, call, market)
b = bond_price(v, t, bond, market)
print(f"\nat V={v:.0f}, t={t:.0f}:")
print(f"  bond        {b:.6f}")
print(f"  put         {p:.6f}   puttable  {puttable_bond_price(v, t, bond, put, market):.6f}")
print(f"  call        {c:.6f}   callable  {callable_bond_price(v, t, bond, call, market):.6f}")

# Sanity: the puttable bond dominates the straight bond, the callable is
# dominated, and both collapse to the bond when the option expires.
assert puttable_bond_price(v, t, bond, put, market) > b
assert callable_bond_price(v, t, bond, call, market) < b
t_after = put.T1 + 0.25
assert puttable_bond_price(v, t_after, bond, put, market) == bond_price(v, t_after, bond, market)

disc = math.exp(-market.r * (bond.T - put.T1))
print(f"\nexercise bracket at T1: ({bond.R * disc:.4f}, {disc:.4f}), E = {put.E}")
