"""Constants shared by the witbench modules"""
import math

SQRT3 = math.sqrt(3.0)

TWO_PI_E = 2.0 * math.pi * math.e

# Differential entropy of the unit variance Gaussian, in bits. Largest possible
# entropy for any unit variance noise.
GAUSSIAN_H_BITS = 0.5 * math.log2(TWO_PI_E)

# Confidence half-widths are this many standard errors
CI_MULTIPLIER = 3.0

# Adversarial noise is confined to the open interval (-SQRT3, SQRT3)
ADVERSARIAL_NOISE_BOUND = SQRT3

DEFAULT_ENTROPY_GRID = 100000
DEFAULT_MC_SAMPLES = 100000
MIN_MC_SAMPLES = 100
MC_CHUNK_SIZE = 65536

DEFAULT_MINIMIZER_GRID = 4096
DEFAULT_MINIMIZER_TOL = 1e-10

# Relative margin used when approaching the open noise boundary from inside
DEFAULT_Z_MARGIN = 1e-12

# Strategy labels, also used as strategy names on the command line
QUANTIZER = "quantizer"
ZERO_INPUT = "zero-input"
ZERO_FORCING = "zero-forcing"
ZERO_INPUT_PASSTHROUGH = "zero-input-passthrough"
LINEAR = "linear"
BEST = "best"
