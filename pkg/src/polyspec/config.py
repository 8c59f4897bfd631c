"""Central numeric tolerances and resource caps.

Every tolerance used by the library lives here so that acceptance checks
and the CLI agree on one set of defaults.  Values are plain module
attributes; tests pin behaviour against them.
"""

# --- root finding -----------------------------------------------------------
ABERTH_MAX_ITER = 500
# residual acceptance: |f(r)| <= ROOT_RESIDUAL_TOL * (sum_k |c_k| |r|^k)
ROOT_RESIDUAL_TOL = 1e-10
NEWTON_POLISH_STEPS = 3

# --- multiset comparison ----------------------------------------------------
# absolute tolerance after dividing distances by max(1, largest magnitude)
MULTISET_TOL = 1e-8

# --- polynomial arithmetic --------------------------------------------------
# float backend: a remainder coefficient below this times the dividend scale
# counts as zero in an exact division
EXACT_DIV_REL_TOL = 1e-10
# cap on deg(f^(n)) for symbolic iteration
ITERATE_DEGREE_CAP = 20000
# float pth-root verification: max |R^p - Q| <= tol * max(1, |Q| coeffs)
PTH_ROOT_REL_TOL = 1e-8

# --- multiplier polynomials -------------------------------------------------
# resultant-by-interpolation is used up to these dynatomic degrees; beyond,
# the trace/power-sum route (exact) or the cycle route (float) takes over
INTERP_MAX_NU_EXACT = 24
INTERP_MAX_NU_FLOAT = 64
# relative separation below which two dynatomic roots make cycle grouping
# ambiguous (near-parabolic guard)
NEAR_PARABOLIC_TOL = 1e-6

# --- Green functions / escape rates -----------------------------------------
GREEN_DEFAULT_TOL = 1e-12
GREEN_ITERATION_CAP = 10_000
# switch from complex iteration to the log recursion past this magnitude
GREEN_LOG_SWITCH = 1e100
# a critical point attains the maximal rate when |g(c) - M| <= tol*max(1, M)
COMPONENT_ATTAINMENT_TOL = 1e-4

# --- moduli -----------------------------------------------------------------
# |a_1| below this times the coefficient scale counts as zero for the
# quartic decomposition
QUARTIC_A1_TOL = 1e-9
SAME_CLASS_TOL = 1e-8

# --- truncated Puiseux series -----------------------------------------------
SERIES_WINDOW_DEFAULT = 40
SERIES_WINDOW_CAP = 160
SERIES_RAMIFICATION_CAP = 12
