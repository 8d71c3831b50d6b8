"""Independent oracle values, computed once and frozen.

NAVIER_RADIAL: solution of the radial ODE u'' + u'/r = ln r, u(1) = 0,
u'(1) = -1/4 (the branch regular at the origin), integrated with scipy's
DOP853 at rtol 1e-13, atol 1e-15.  ``radial_navier_ode`` recomputes them.
"""

import numpy as np

NAVIER_RADIAL = {
    1.05: -0.012177211000800315,
    1.1: -0.02366867060919176,
    1.15: -0.034416207802213175,
    1.2: -0.04436423955417637,
    1.25: -0.05345955026788689,
    1.3: -0.06165109826248515,
    1.35: -0.06888984506481484,
    1.4: -0.07512860405560583,
}

# Green's representation and clamped-circle examples, by direct substitution
Y_SQUARED_AT = {(0.2, 0.5): 0.25}
CLAMPED_CIRCLE_AT_1_5 = 1.5**2 * np.log(1.5) - np.log(1.5)


def radial_navier_ode(r):
    from scipy.integrate import solve_ivp

    sol = solve_ivp(lambda t, y: [y[1], np.log(t) - y[1] / t], [1.0, r], [0.0, -0.25],
                    method="DOP853", rtol=1e-13, atol=1e-15)
    return float(sol.y[0, -1])
