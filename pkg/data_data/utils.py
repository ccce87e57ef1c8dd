import os

import numpy as np

from config.io import SIGNAL_DTYPE


class SignalFileError(OSError):
    pass


def frame_starts(n_samples, frame_len, hop):
    if n_samples < frame_len:
        return np.zeros(0, dtype=int)
    return np.arange(0, n_samples - frame_len + 1, hop)


def extract_frames(signal, frame_len, hop):
    """Frames of `frame_len` samples every `hop` samples, as an (n_frames, frame_len) array."""
    signal = np.asarray(signal, dtype=float)
    starts = frame_starts(signal.size, frame_len, hop)
    if starts.size == 0:
        return np.zeros((0, frame_len))
    return np.stack([signal[s:s + frame_len] for s in starts])


def signal_energy(signal):
    signal = np.asarray(signal, dtype=float)
    return float(signal @ signal)


def measured_snr_db(clean, noisy):
    noise = np.asarray(noisy, dtype=float) - np.asarray(clean, dtype=float)
    return 10 * np.log10(signal_energy(clean) / signal_energy(noise))


def add_noise(signal, snr_db, seed):
    """
    White Gaussian noise scaled so the full-signal SNR is exactly snr_db.

    :param snr_db: target SNR in dB; +inf returns an unchanged copy
    :param seed: integer or sequence of integers for numpy.random.default_rng
    """
    signal = np.asarray(signal, dtype=float)
    if np.isposinf(snr_db):
        return signal.copy()
    energy = signal_energy(signal)
    if energy == 0:
        raise ValueError('SNR is undefined for a zero-energy signal')
    noise = np.random.default_rng(seed).standard_normal(signal.size)
    noise *= np.sqrt(energy / (signal_energy(noise) * 10 ** (snr_db / 10)))
    return signal + noise


def write_signal(path, signal):
    """Write headerless little-endian float64 samples, atomically."""
    tmp_path = '{}.tmp'.format(path)
    np.asarray(signal, dtype=SIGNAL_DTYPE).tofile(tmp_path)
    os.replace(tmp_path, path)


def read_signal(path):
    try:
        size = os.path.getsize(path)
        remainder = size % np.dtype(SIGNAL_DTYPE).itemsize
        if remainder:
            raise SignalFileError('{}: truncated sample at byte offset {}'.format(path, size - remainder))
        return np.fromfile(path, dtype=SIGNAL_DTYPE).astype(float)
    except SignalFileError:
        raise
    except OSError as exc:
        raise SignalFileError('{}: cannot read signal: {}'.format(path, exc.strerror or exc)) from exc
