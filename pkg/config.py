import os

# Basic application configuration
DEBUG = os.getenv("QDEFORM_DEBUG", "false").lower() == "true"  # Enable debug mode for development
APP_NAME = "QDeform"  # Application name used by Sanic
HOST = os.getenv("QDEFORM_HOST", "0.0.0.0")  # Host address to bind the server to
PORT = int(os.getenv("QDEFORM_PORT", "8000"))  # Port number to listen on
LOG_LEVEL = os.getenv("QDEFORM_LOG_LEVEL", "INFO")  # Level for the CLI's stderr log
MAX_API_N = int(os.getenv("QDEFORM_MAX_API_N", "2000000"))  # Largest n accepted over HTTP

# Deformed algebra
CLASSICAL_EPS = 1e-8  # |q - 1| below this uses plain ln/exp
ALPHA_BRANCH_EPS = 1e-8  # |alpha -/+ 1| below this uses the KL branches

# Factorial tables
PREFIX_BLOCK = 1024  # Block size of the compensated prefix sum
FACTORIAL_CACHE_SIZE = 8  # Number of tables kept per process
C_Q_MIN_REFERENCE = 1000  # Smallest reference n for the Stirling constant

# Normalization root finding
BRACKET_MAX_EXPANSIONS = 200  # Geometric expansions of the lower bracket
BISECTION_RTOL = 1e-13  # Stop when |dt| < BISECTION_RTOL * (1 + |t|)
BISECTION_MAX_ITERATIONS = 400  # Hard cap on bisection steps

# Convergence experiments
RESIDUAL_WINDOW = 2.0  # Default |x| window for CLT residuals
DENSITY_WINDOW = 3.0  # Default |x| window for densities and fits
MIN_WINDOW_POINTS = 5  # Residual window must hold at least this many points
MIN_FIT_POINTS = 10  # q-Gaussian fit needs at least this many positive points
COLLAPSE_N_LIST = (50_000, 500_000)  # Default n values of the collapse experiment
SWEEP_WORKERS = int(os.getenv("QDEFORM_WORKERS", "1"))  # Threads used by n-sweeps
