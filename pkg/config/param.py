from enum import Enum

import numpy as np


class Parity(Enum):
    EVEN = 0
    ODD = 1


FRAME_LEN = 256
MIN_FRAME_LEN = 8
HOP = 192
N_PARTIALS = 20
SAMPLE_RATE = 48000

LINEAR_ITERS = 2
NONLINEAR_ITERS = 3
ALPHA = 1.0
OVERSAMPLE = 32

# frequencies stay inside (FREQ_EPS, pi - FREQ_EPS) during non-linear updates
FREQ_EPS = 1e-4
DUPLICATE_FREQ_TOL = 1e-9
AMP_FLOOR_SCALE = 1e-12

CHIRP_START_FREQS = (0.05, 0.1, 0.15, 0.2, 0.25)
CHIRP_END_FREQS = (2.0, 2.2, 2.4, 2.6, 2.8)
CHIRP_AMPS_DB = (0.0, -3.0, -6.0, -9.0, -12.0)
CHIRP_DURATION = 48000

SNR_GRID = (-10.0, 0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0, np.inf)

SINGLE_AM_FREQ = 0.1 * np.pi
SINGLE_AM_INIT = 0.095 * np.pi
SINGLE_AM_AMP = 1.0
SINGLE_AM_SLOPE = 5e-4
SINGLE_AM_PHASE = 0.5
CONVERGENCE_ALPHAS = (0.25, 0.5, 0.75, 1.0)
CONVERGENCE_MAX_ITER = 10
CONVERGENCE_TOL = 1e-6

# operation charges per sample and partial, on top of the counted inner loops
BASIS_FLOPS = 5
RECOVERY_FLOPS = 12

CSV_FLOAT_FORMAT = '%.9g'
