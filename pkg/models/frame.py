from dataclasses import dataclass

import numpy as np

from config.param import MIN_FRAME_LEN


def _frozen(values):
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    return values


@dataclass(frozen=True)
class FrameConfig:
    """Frame length, sine analysis window and centred sample times of one frame.

    time_index[n] = (n + 1) - (L + 1) / 2, so n = 0 of the model lies between
    samples L/2 and L/2 + 1 (1-based) and the indices are symmetric about 0.
    """
    frame_len: int
    window: np.ndarray
    time_index: np.ndarray

    @property
    def half_len(self):
        return self.frame_len // 2

    def apply_window(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.frame_len,):
            raise ValueError('frame has shape {}, expected ({},)'.format(x.shape, self.frame_len))
        return self.window * x


def make_frame_config(frame_len):
    if int(frame_len) != frame_len:
        raise ValueError('frame length must be an integer, got {}'.format(frame_len))
    frame_len = int(frame_len)
    if frame_len < MIN_FRAME_LEN:
        raise ValueError('frame length {} is below the minimum of {}'.format(frame_len, MIN_FRAME_LEN))
    if frame_len % 2:
        raise ValueError('frame length {} must be even'.format(frame_len))

    n = np.arange(frame_len)
    time_index = (n + 1) - (frame_len + 1) / 2
    window = np.cos(np.pi * time_index / frame_len)
    return FrameConfig(frame_len=frame_len, window=_frozen(window), time_index=_frozen(time_index))


def split_even_odd(x):
    """Split a frame into scaled half-length even and odd parts.

    Both halves are multiplied by sqrt(2) so that inner products and energies
    computed on the halves equal the full-length ones.
    """
    x = np.asarray(x, dtype=float)
    half = x.size // 2
    head = x[:half]
    tail = x[::-1][:half]
    return (head + tail) / np.sqrt(2), (head - tail) / np.sqrt(2)


def merge_even_odd(even, odd):
    even = np.asarray(even, dtype=float)
    odd = np.asarray(odd, dtype=float)
    head = (even + odd) / np.sqrt(2)
    tail = (even - odd) / np.sqrt(2)
    return np.concatenate([head, tail[::-1]])
