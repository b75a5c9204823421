"""Shared numeric tolerances (absolute unless stated otherwise).

Hypothesis-style checks (affinity, convexity, monotonicity, range
containment) run far below the margin tolerances of the inequality
checks, so rounding noise in a premise never masquerades as a violated
conclusion.
"""

# Structural hypothesis checks pass when the worst sampled defect stays
# below this.
EPS_HYP = 1e-9

# A self-map may overshoot its interval by at most this much.
EPS_RANGE = 1e-9

# Slack when enforcing a "nonnegative" codomain.
EPS_EVAL = 1e-12

# Smallest value accepted as "strictly positive".
EPS_POS = 1e-12

# Mixing weights for h-modulated classes live on the open unit interval;
# searches stay this far from the endpoints (1/t blows up at t=0).
DELTA_T = 1e-6

# Integral-mean intervals narrower than this are treated as degenerate.
EPS_DEG = 1e-12

# Default threshold separating a genuine membership violation from noise.
TOL_MARGIN = 1e-9

# Jensen weights must sum to one within this.
WEIGHT_SUM_TOL = 1e-12
