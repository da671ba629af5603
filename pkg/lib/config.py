# ===============================================
#                   config.py
# -----------------------------------------------
# This file defines the configuration variables.
# ===============================================

import math

# ----------- PHYSICAL CONSTANTS -----------

P_0 = 10000.0 # Reference pressure (Pa)
T_0 = 273.0 # Reference temperature (K)
R_D = 287.05 # Gas constant of dry air (J/(kg K))
C_P = 1005.0 # Specific heat at constant pressure (J/(kg K))
GRAVITY = 9.80665 # (m/s^2)
R_EARTH = 6.371229e6 # (m)
OMEGA_EARTH = 2.0 * math.pi / 86400.0 # (1/s)
ATMOSPHERE_DEPTH = 8.0e4 # (m)

# ----------- BALANCED FLOW -----------

JET_U0 = 100.0 # Peak jet velocity (m/s)
JET_PHI_M = math.pi / 4.0 # Latitude of the jets
JET_SIGMA = 0.1 # Jet width
JET_QUAD_RTOL = 1e-8 # Relative to R_earth * Omega_earth * u_0
N_STAR_ROUNDED = 0.01873 # Buoyancy frequency at which the profiles separate

# ----------- GRIDS -----------

MAX_LEVELS = 8 # Finest icosahedral refinement that may be requested
DEFAULT_LEVELS = 4
DEFAULT_NR = 64
GRADINGS = ["uniform", "geometric"]

# ----------- OPERATOR -----------

COURANT = 10.0 # omega / h_L on the finest level

# ----------- SMOOTHER -----------

SMOOTHERS = ["block_sor", "block_jacobi"]
SWEEP_ORDERS = ["natural", "reversed"]
RHO_RELAX = 1.0
NU_PRE = 2
NU_POST = 2
COARSE_SOLVERS = ["direct", "smoother"]
COARSE_SOLVER = "direct"
COARSE_SWEEPS = 1 # nu_pre + nu_post on the coarsest level with the smoother
COARSE_RATIO_LIMIT = 1.0 # Coarsest conditioning ratio a single sweep can handle
TRANSFERS = ["linear", "constant"]
RESTRICTIONS = ["sum", "transpose"]

# ----------- SOLVERS -----------

SOLVERS = ["richardson", "bicgstab"]
PRECONDITIONERS = ["tpmg_full", "tpmg_factorized", "tpmg_partial", "none"]
PREC_ALIASES = {
    "full": "tpmg_full",
    "factorized": "tpmg_factorized",
    "partial": "tpmg_partial",
    "none": "none"
}
TOL = 1e-5
MU_CYCLES = 1
MAX_ITER = 100
DIVERGENCE_FACTOR = 1e4 # Relative residual above which a run is diverged
BREAKDOWN_EPS = 1e-30 # Relative to the squared initial residual

# ----------- VERIFICATION -----------

DENSE_CAP = 100000 # Maximum n_S * n_r for explicit matrices
THEORY_MAX_CELLS = 320
THEORY_MAX_NR = 16
PERTURBATION_SLACK = 0.05
DECOUPLING_TOL = 1e-9
DECOUPLING_VIOLATION = 1e-6
DECOUPLING_PAIRS = 20

# ----------- TIMING -----------

TIMING_REPETITIONS = 5
TIMING_WARMUP = 1
TIMING_NR = [16, 32, 64, 128, 256]
TIMING_REFERENCE_NR = 128

# ----------- FILES -----------

FORMAT_VERSION = "1.0"
PROFILE_LAYOUT = "column-major, k fastest"
ENCODINGS = ["decimal", "base64-f64le"]
PROFILE_NAMES = ["beta", "alpha_s", "alpha_r", "xi_r"]
HISTORY_HEADER = ["iter", "res_norm", "rel_res", "seconds"]
RESULTS_DIR = "results"
LOG_DIR = "log"
CACHE_DIR = "cache"

# ----------- EXIT CODES -----------

EXIT_OK = 0
EXIT_NOT_CONVERGED = 2
EXIT_FAILED = 3
EXIT_CONFIG = 4
STATUS_EXIT_CODES = {
    "converged": EXIT_OK,
    "max_iter": EXIT_NOT_CONVERGED,
    "breakdown": EXIT_FAILED,
    "diverged": EXIT_FAILED
}
