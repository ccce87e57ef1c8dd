from dataclasses import dataclass

import numpy as np

from config.param import BASIS_FLOPS, DUPLICATE_FREQ_TOL, Parity
from models.sinusoid import LinWeights
from models.utils import check_freqs

# column blocks of A, in storage order
BLOCKS = ('c', 's', 'd', 't')
BLOCK_PARITY = {'c': Parity.EVEN, 's': Parity.ODD, 'd': Parity.ODD, 't': Parity.EVEN}


@dataclass(frozen=True)
class BasisSet:
    """Windowed basis columns of the linearized model for N partials.

    columns is an (L, 4N) matrix ordered [c-type, s-type, d-type, t-type];
    every column has unit norm and col_norms keeps the original norms.
    half_columns holds the first L/2 samples of every column scaled by
    sqrt(2), which is all the even/odd solvers need.
    """
    freqs: np.ndarray
    columns: np.ndarray
    col_norms: np.ndarray
    parity: tuple
    half_columns: np.ndarray

    @property
    def n_partials(self):
        return self.freqs.size

    @property
    def n_columns(self):
        return self.columns.shape[1]

    @property
    def frame_len(self):
        return self.columns.shape[0]

    @property
    def even_mask(self):
        return np.array([p is Parity.EVEN for p in self.parity])

    def column_index(self, block, k):
        return BLOCKS.index(block) * self.n_partials + k

    def gram(self):
        return self.columns.T @ self.columns

    def denormalize(self, weights):
        if not weights.normalized:
            return weights
        return LinWeights.from_vector(weights.as_vector() / self.col_norms, normalized=False)

    def normalize(self, weights):
        if weights.normalized:
            return weights
        return LinWeights.from_vector(weights.as_vector() * self.col_norms, normalized=True)


def build_basis(freqs, cfg, counter=None):
    freqs = np.array(check_freqs(freqs))
    n_partials = freqs.size
    if n_partials < 1:
        raise ValueError('at least one frequency is required')
    if 4 * n_partials > cfg.frame_len:
        raise ValueError('{} partials need {} columns, more than the frame length {}'.format(
            n_partials, 4 * n_partials, cfg.frame_len))
    if n_partials > 1:
        gaps = np.diff(np.sort(freqs))
        if np.min(gaps) < DUPLICATE_FREQ_TOL:
            raise ValueError('frequencies closer than {} rad/sample make the basis rank deficient'.format(
                DUPLICATE_FREQ_TOL))

    n = cfg.time_index[:, None]
    h = cfg.window[:, None]
    phase = n * freqs[None, :]
    cos_part = h * np.cos(phase)
    sin_part = h * np.sin(phase)
    columns = np.hstack([cos_part, sin_part, n * cos_part, n * sin_part])
    col_norms = np.linalg.norm(columns, axis=0)
    columns = columns / col_norms
    if counter is not None:
        counter.add(BASIS_FLOPS * cfg.frame_len * n_partials)

    parity = tuple(BLOCK_PARITY[block] for block in BLOCKS for _ in range(n_partials))
    half_columns = np.sqrt(2) * columns[:cfg.half_len]
    for a in (freqs, columns, col_norms, half_columns):
        a.setflags(write=False)
    return BasisSet(freqs=freqs, columns=columns, col_norms=col_norms, parity=parity,
                    half_columns=half_columns)
