from dataclasses import dataclass

import numpy as np

from models.utils import check_freqs, wrap_phase


@dataclass(frozen=True)
class SinusoidParams:
    """One partial: amplitude, frequency (rad/sample), phase and amplitude slope per sample."""
    amp: float
    freq: float
    phase: float = 0.0
    amp_slope: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.amp) or self.amp < 0:
            raise ValueError('amplitude must be finite and non-negative, got {}'.format(self.amp))
        check_freqs([self.freq])
        object.__setattr__(self, 'amp', float(self.amp))
        object.__setattr__(self, 'freq', float(self.freq))
        object.__setattr__(self, 'phase', wrap_phase(self.phase))
        object.__setattr__(self, 'amp_slope', float(self.amp_slope))


@dataclass(frozen=True)
class LinWeights:
    """Linear coefficients (c, s, d, t) of the four basis functions of every partial.

    With normalized=True the values are coordinates on unit-norm basis
    columns; BasisSet.denormalize maps them to the raw linear model.
    """
    c: np.ndarray
    s: np.ndarray
    d: np.ndarray
    t: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        arrays = [np.atleast_1d(np.array(getattr(self, name), dtype=float)) for name in 'csdt']
        if len({a.shape for a in arrays}) != 1 or arrays[0].ndim != 1:
            raise ValueError('c, s, d, t must be vectors of equal length')
        if not all(np.all(np.isfinite(a)) for a in arrays):
            raise ValueError('linear weights must be finite')
        for name, a in zip('csdt', arrays):
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def n_partials(self):
        return self.c.size

    def as_vector(self):
        return np.concatenate([self.c, self.s, self.d, self.t])

    @classmethod
    def from_vector(cls, w, normalized=False):
        w = np.asarray(w, dtype=float)
        if w.ndim != 1 or w.size % 4:
            raise ValueError('weight vector length {} is not a multiple of 4'.format(w.size))
        c, s, d, t = np.split(w, 4)
        return cls(c, s, d, t, normalized=normalized)

    @classmethod
    def zeros(cls, n_partials, normalized=False):
        return cls.from_vector(np.zeros(4 * n_partials), normalized=normalized)

    def partial(self, k):
        return self.c[k], self.s[k], self.d[k], self.t[k]


def weights_from_params(params, dtheta=0.0):
    """Linear weights (c, s, d, t) of one partial for a frequency correction dtheta."""
    amp, phase, slope = params.amp, params.phase, params.amp_slope
    cos_phi, sin_phi = np.cos(phase), np.sin(phase)
    c = amp * cos_phi
    s = -amp * sin_phi
    d = slope * cos_phi - amp * dtheta * sin_phi
    t = -slope * sin_phi - amp * dtheta * cos_phi
    return c, s, d, t


def params_from_weights(weights, theta0, amp_floor=0.0):
    """
    Recover amplitude, phase, amplitude slope and frequency correction of one partial.

    :param weights: raw (de-normalized) quadruple (c, s, d, t)
    :param theta0: frequency the basis was built at; returned params carry it unchanged
    :param amp_floor: amplitudes at or below this value mark the partial as vanished
    :return: (params, dtheta, vanished)
    """
    c, s, d, t = (float(v) for v in weights)
    amp = np.hypot(c, s)
    if amp <= amp_floor:
        return SinusoidParams(0.0, theta0, 0.0, 0.0), 0.0, True
    phase = np.arctan2(-s, c)
    slope = (d * c + s * t) / amp
    dtheta = (d * s - t * c) / amp ** 2
    return SinusoidParams(amp, theta0, phase, slope), dtheta, False


def synthesize(params, cfg, windowed=False):
    """Exact amplitude-modulated sinusoidal model evaluated at the centred frame times."""
    if len(params) == 0:
        raise ValueError('at least one partial is required')
    n = cfg.time_index
    frame = np.zeros(cfg.frame_len)
    for p in params:
        frame += (p.amp + p.amp_slope * n) * np.cos(p.freq * n + p.phase)
    if windowed:
        frame *= cfg.window
    return frame


def synthesize_linear(weights, freqs, cfg, windowed=False):
    """Linearized four-basis model for raw weights around the frequencies freqs."""
    if weights.normalized:
        raise ValueError('synthesize_linear needs de-normalized weights')
    freqs = check_freqs(freqs)
    if freqs.size != weights.n_partials:
        raise ValueError('{} frequencies for {} partials'.format(freqs.size, weights.n_partials))
    n = cfg.time_index[:, None]
    phase = n * freqs[None, :]
    cos_part = np.cos(phase) @ weights.c + (n * np.cos(phase)) @ weights.d
    sin_part = np.sin(phase) @ weights.s + (n * np.sin(phase)) @ weights.t
    frame = cos_part + sin_part
    if windowed:
        frame = frame * cfg.window
    return frame
