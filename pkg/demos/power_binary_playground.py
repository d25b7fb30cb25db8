"""The building blocks behind every price in the library.

A power binary pays x^beta, weighted by a normal CDF of a log-ratio and
cut off by an indicator at K. Cash and asset binaries are the beta=0 and
beta=1 corners. Barrier versions come from the image transform, which
subtracts a reflected copy of the payoff so the value dies exactly on the
barrier.
"""

from credit_pricer import (
    IndicatorDirection,
    MarketParams,
    PowerBinaryParams,
    image_transform,
    power_binary_price,
    quadrature_green,
)

market = MarketParams(r=0.05, q=0.01, sigma=0.4)
X, tau = 1.2, 0.75

cash = PowerBinaryParams(beta=0.0, i=0.0, L=0.0, K=1.0, tau1=0.0, tau2=0.0,
                         tau3=1.0, direction=IndicatorDirection.ABOVE)
asset = PowerBinaryParams(beta=1.0, i=0.0, L=0.0, K=1.0, tau1=0.0, tau2=0.0,
                          tau3=1.0, direction=IndicatorDirection.ABOVE)
print("vanilla decomposition: a call struck at 1 is asset minus cash")
a = power_binary_price(X, 0.0, tau, asset, market)
c = power_binary_price(X, 0.0, tau, cash, market)
print(f"  asset binary {a:.6f}  cash binary {c:.6f}  call {a - c:.6f}")

# A second-order payoff: at expiry it pays the probability-weighted value
# of a LATER binary event, so the price needs the bivariate normal.
nested = PowerBinaryParams(beta=0.0, i=1.0, L=0.9, K=1.0, tau1=0.5, tau2=0.0,
                           tau3=0.5, direction=IndicatorDirection.ABOVE)
p = power_binary_price(X, 0.0, tau, nested, market)
q = quadrature_green(X, tau, nested, market)
print(f"\nsecond-order binary: closed {p:.10f}  quadrature {q:.10f}")

# Splitting any payoff at K into its above and below parts recovers the
# unrestricted claim.
below = PowerBinaryParams(beta=0.0, i=1.0, L=0.9, K=1.0, tau1=0.5, tau2=0.0,
                          tau3=0.5, direction=IndicatorDirection.BELOW)
full = PowerBinaryParams(beta=0.0, i=1.0, L=0.9, K=0.0, tau1=0.5, tau2=0.0,
                         tau3=0.5, direction=IndicatorDirection.ABOVE)
lhs = p + power_binary_price(X, 0.0, tau, below, market)
rhs = power_binary_price(X, 0.0, tau, full, market)
print(f"complement identity: above + below - full = {lhs - rhs:+.2e}")

# Image transform: knock the nested binary out at a barrier below spot.
barrier = 0.8
knocked = image_transform(
    lambda x, t: power_binary_price(x, t, tau, nested, market),
    barrier, market.r - market.q, market.sigma,
)
print(f"\nknockout at barrier {barrier}:")
for x in (0.8, 0.9, 1.2, 2.0):
    plain = power_binary_price(x, 0.0, tau, nested, market)
    print(f"  x={x:4.1f}  plain {plain:.6f}  knocked out {knocked(x, 0.0):.6f}")
