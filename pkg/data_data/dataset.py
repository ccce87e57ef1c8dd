from dataclasses import dataclass

import numpy as np
from scipy.signal import chirp

from config.param import (CHIRP_AMPS_DB, CHIRP_DURATION, CHIRP_END_FREQS, CHIRP_START_FREQS, FRAME_LEN, HOP)
from data_data.utils import frame_starts
from models.sinusoid import SinusoidParams
from models.utils import check_freqs, wrap_phase


@dataclass(frozen=True)
class ChirpSpec:
    """Sum of linear chirps with per-chirp levels, and the frame layout used to analyse it.

    :param start_freqs: instantaneous frequency at sample 0 (rad/sample)
    :param end_freqs: instantaneous frequency at sample `duration` (rad/sample)
    :param amps_db: level of every chirp relative to 0 dB = amplitude 1
    :param duration: signal length in samples
    :param frame_len: analysis frame length L
    :param hop: frame advance in samples
    """
    start_freqs: tuple = CHIRP_START_FREQS
    end_freqs: tuple = CHIRP_END_FREQS
    amps_db: tuple = CHIRP_AMPS_DB
    duration: int = CHIRP_DURATION
    frame_len: int = FRAME_LEN
    hop: int = HOP

    def __post_init__(self):
        if not len(self.start_freqs) == len(self.end_freqs) == len(self.amps_db):
            raise ValueError('start_freqs, end_freqs and amps_db must have equal length')
        if len(self.start_freqs) == 0:
            raise ValueError('at least one chirp is required')
        check_freqs(self.start_freqs, 'chirp start frequency')
        check_freqs(self.end_freqs, 'chirp end frequency')
        if self.duration < self.frame_len:
            raise ValueError('duration {} is shorter than one frame of {}'.format(self.duration, self.frame_len))
        if self.hop < 1:
            raise ValueError('hop must be >= 1, got {}'.format(self.hop))

    @property
    def n_chirps(self):
        return len(self.start_freqs)

    @property
    def amplitudes(self):
        return 10 ** (np.asarray(self.amps_db, dtype=float) / 20)


def _chirp_state(spec, k, t, phase0):
    # closed-form instantaneous frequency and phase of chirp k at time t
    start, end = spec.start_freqs[k], spec.end_freqs[k]
    rate = (end - start) / spec.duration
    freq = start + rate * t
    phase = phase0 + start * t + 0.5 * rate * t ** 2
    return freq, phase


def gen_chirps(spec, seed=0):
    """
    Generate the chirp mixture and its per-frame ground truth.

    Chirp k is a cos(phi_k + integral of theta_k), theta_k linear in time,
    with phi_k drawn uniformly in [-pi, pi) under `seed`.

    :return: (signal, truth) where truth[f] lists one SinusoidParams per chirp,
             evaluated at the centre of frame f
    """
    rng = np.random.default_rng(seed)
    phases0 = rng.uniform(-np.pi, np.pi, spec.n_chirps)
    t = np.arange(spec.duration, dtype=float)
    signal = np.zeros(spec.duration)
    for k, amp in enumerate(spec.amplitudes):
        f0 = spec.start_freqs[k] / (2 * np.pi)
        f1 = spec.end_freqs[k] / (2 * np.pi)
        signal += amp * chirp(t, f0=f0, t1=spec.duration, f1=f1, method='linear', phi=np.degrees(phases0[k]))

    truth = []
    for start in frame_starts(spec.duration, spec.frame_len, spec.hop):
        centre = start + (spec.frame_len - 1) / 2
        frame_truth = []
        for k, amp in enumerate(spec.amplitudes):
            freq, phase = _chirp_state(spec, k, centre, phases0[k])
            frame_truth.append(SinusoidParams(amp, freq, wrap_phase(phase)))
        truth.append(frame_truth)
    return signal, truth
