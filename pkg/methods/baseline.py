from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.fft import rfft
from scipy.signal import argrelmax

from config.param import OVERSAMPLE
from metrics.flops import FlopCounter
from models.sinusoid import SinusoidParams


def _check_partials(n_partials, cfg):
    if int(n_partials) != n_partials or n_partials < 1:
        raise ValueError('partial count must be a positive integer, got {}'.format(n_partials))
    if 4 * n_partials > cfg.frame_len:
        raise ValueError('{} partials do not fit a frame of {} samples'.format(n_partials, cfg.frame_len))
    return int(n_partials)


def _centred_spectrum(x, cfg):
    # DFT with the time origin at the frame centre, bins 0..L/2
    x_h = cfg.apply_window(x)
    spectrum = rfft(x_h)
    bin_freqs = 2 * np.pi * np.arange(spectrum.size) / cfg.frame_len
    return spectrum * np.exp(-1j * bin_freqs * cfg.time_index[0]), bin_freqs


def _largest_peaks(magnitude, n_partials):
    peaks = argrelmax(magnitude)[0]
    peaks = peaks[magnitude[peaks] > 0]
    order = np.argsort(-magnitude[peaks], kind='stable')
    return peaks[order][:n_partials]


def dft_peak_pick(x, cfg, n_partials):
    """Bin-centre frequencies of the largest strict local maxima of the windowed DFT magnitude.

    Frequencies come in descending magnitude order; fewer than n_partials are
    returned when the spectrum has fewer peaks, none for an all-zero frame.
    """
    n_partials = _check_partials(n_partials, cfg)
    spectrum, bin_freqs = _centred_spectrum(x, cfg)
    return bin_freqs[_largest_peaks(np.abs(spectrum), n_partials)]


def dft_peak_params(x, cfg, n_partials):
    """Peak-picking estimator: bin-centre frequency, amplitude 2|X|/sum(h) and centred phase."""
    n_partials = _check_partials(n_partials, cfg)
    spectrum, bin_freqs = _centred_spectrum(x, cfg)
    peaks = _largest_peaks(np.abs(spectrum), n_partials)
    gain = np.sum(cfg.window)
    return [SinusoidParams(2 * np.abs(spectrum[m]) / gain, bin_freqs[m], np.angle(spectrum[m])) for m in peaks]


@dataclass(frozen=True)
class Dictionary:
    """Oversampled grid of windowed, non-modulated sinusoids.

    The grid step is pi / (L * P) and the grid covers (0, pi) exclusive;
    atom tables are generated on first use.
    """
    cfg: object
    oversample: int = OVERSAMPLE

    def __post_init__(self):
        if int(self.oversample) != self.oversample or self.oversample < 1:
            raise ValueError('oversampling factor must be a positive integer, got {}'.format(self.oversample))

    @property
    def resolution(self):
        return np.pi / (self.cfg.frame_len * self.oversample)

    @property
    def grid(self):
        return self.resolution * np.arange(1, self.cfg.frame_len * self.oversample)

    @cached_property
    def tables(self):
        phase = self.cfg.time_index[:, None] * self.grid[None, :]
        cos_atoms = self.cfg.window[:, None] * np.cos(phase)
        sin_atoms = self.cfg.window[:, None] * np.sin(phase)
        gram_cc = np.sum(cos_atoms * cos_atoms, axis=0)
        gram_ss = np.sum(sin_atoms * sin_atoms, axis=0)
        gram_cs = np.sum(cos_atoms * sin_atoms, axis=0)
        return cos_atoms, sin_atoms, gram_cc, gram_ss, gram_cs


@dataclass
class PursuitResult:
    params: list
    residual_energy: np.ndarray
    flops: int


def matching_pursuit(x, cfg, dictionary, n_partials, counter=None):
    """
    Greedy matching pursuits over cos/sin atom pairs.

    Each round projects the residual on the 2-D span {h cos, h sin} of every
    grid frequency (exact 2x2 Gram solve), keeps the frequency that removes
    the most energy (lowest frequency on ties) and subtracts its projection.
    """
    if int(n_partials) != n_partials or n_partials < 1:
        raise ValueError('partial count must be a positive integer, got {}'.format(n_partials))
    counter = counter if counter is not None else FlopCounter()
    start = counter.total
    residual = cfg.apply_window(x).copy()
    cos_atoms, sin_atoms, gram_cc, gram_ss, gram_cs = dictionary.tables
    grid = dictionary.grid
    det = gram_cc * gram_ss - gram_cs ** 2
    det = np.maximum(det, 1e-12 * gram_cc * gram_ss)

    params = []
    energies = [float(residual @ residual)]
    for _ in range(int(n_partials)):
        proj_c = cos_atoms.T @ residual
        proj_s = sin_atoms.T @ residual
        counter.add(4 * cfg.frame_len * grid.size)
        a = (gram_ss * proj_c - gram_cs * proj_s) / det
        b = (gram_cc * proj_s - gram_cs * proj_c) / det
        gain = a * proj_c + b * proj_s
        j = int(np.argmax(gain))
        if not gain[j] > 0:
            params.append(SinusoidParams(0.0, grid[j]))
            energies.append(energies[-1])
            continue
        residual -= a[j] * cos_atoms[:, j] + b[j] * sin_atoms[:, j]
        counter.add(4 * cfg.frame_len)
        params.append(SinusoidParams(np.hypot(a[j], b[j]), grid[j], np.arctan2(-b[j], a[j])))
        energies.append(float(residual @ residual))
    return PursuitResult(params=params, residual_energy=np.array(energies), flops=counter.total - start)
