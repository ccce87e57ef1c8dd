import numpy as np

from config.param import FREQ_EPS


class EarlyStopping:
    """
    Early stopping for iterative solvers: stops when the residual energy no
    longer improves by a relative margin, or when the largest weight update
    of a sweep falls below an absolute threshold.
    """

    def __init__(self, tol=0.0, update_tol=0.0):
        """
        :param tol: minimum relative residual-energy reduction per sweep; 0
               disables the energy criterion
        :param update_tol: minimum largest absolute weight update per sweep;
               0 disables the update criterion
        """
        self.tol = tol
        self.update_tol = update_tol
        self.best_energy = None
        self.early_stop = False

    def __call__(self, energy, max_update=np.inf):
        if self.best_energy is not None and self.tol > 0:
            if energy == 0 or self.best_energy - energy < self.tol * self.best_energy:
                self.early_stop = True
        if self.update_tol > 0 and max_update < self.update_tol:
            self.early_stop = True
        if self.best_energy is None or energy < self.best_energy:
            self.best_energy = energy
        return self.early_stop


class DivergenceMonitor:
    # Flags divergence once the residual energy grew for `patience` consecutive iterations
    def __init__(self, patience=3):
        self.patience = patience
        self.counter = 0
        self.last_energy = None
        self.diverged = False

    def __call__(self, energy):
        if self.last_energy is not None and energy > self.last_energy:
            self.counter += 1
            if self.counter >= self.patience:
                self.diverged = True
        else:
            self.counter = 0
        self.last_energy = energy
        return self.diverged


def wrap_phase(phase):
    """Wrap a phase (scalar or array) to (-pi, pi]."""
    wrapped = np.mod(np.asarray(phase, dtype=float) + np.pi, 2 * np.pi) - np.pi
    wrapped = np.where(wrapped <= -np.pi, wrapped + 2 * np.pi, wrapped)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


def clamp_freqs(freqs, eps=FREQ_EPS):
    """Clamp frequencies to [eps, pi - eps]; returns (clamped, mask of clamped entries)."""
    freqs = np.asarray(freqs, dtype=float)
    clamped = np.clip(freqs, eps, np.pi - eps)
    return clamped, clamped != freqs


def check_freqs(freqs, name='frequency'):
    freqs = np.atleast_1d(np.asarray(freqs, dtype=float))
    if freqs.ndim != 1:
        raise ValueError('{} must be a vector, got shape {}'.format(name, freqs.shape))
    bad = ~np.isfinite(freqs) | (freqs <= 0) | (freqs >= np.pi)
    if np.any(bad):
        raise ValueError('{} {} outside the open interval (0, pi)'.format(name, freqs[bad][0]))
    return freqs


def rms(x):
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return 0.0
    return float(np.sqrt(np.mean(x * x)))
