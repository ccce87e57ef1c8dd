from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from config.param import ALPHA, DUPLICATE_FREQ_TOL, FREQ_EPS
from methods.linear import amp_floor, recover_params
from methods.solvers import SolveTrace, evenodd_residual, evenodd_sweep, full_residual, sweep_order
from metrics.flops import FlopCounter
from metrics.rms import reconstruction_rms
from models.basis import build_basis
from models.frame import split_even_odd
from models.sinusoid import LinWeights, SinusoidParams
from models.utils import check_freqs, clamp_freqs, rms


@dataclass
class NonlinearResult:
    params: list
    trace: SolveTrace
    freq_history: np.ndarray
    residual_history: np.ndarray
    clamp_events: list = field(default_factory=list)
    # partials that vanished at some iteration and kept their frequency from then on
    frozen: Optional[np.ndarray] = None


def _model_weights(amps, phases, slopes):
    # frequency corrections are folded into the frequencies, so d and t carry no dtheta term
    return LinWeights(amps * np.cos(phases), -amps * np.sin(phases),
                      slopes * np.cos(phases), -slopes * np.sin(phases))


def crowded(freqs, tol=DUPLICATE_FREQ_TOL):
    """Mask of frequencies lying within tol of another one."""
    gaps = np.abs(freqs[:, None] - freqs[None, :])
    np.fill_diagonal(gaps, np.inf)
    return np.any(gaps < tol, axis=1)


def keep_apart(updated, previous, tol=DUPLICATE_FREQ_TOL):
    """
    Send crowded partials back to their previous frequency until no two
    updated frequencies lie within tol of each other.

    Each pass reverts at least one partial that moved, so the loop ends once
    the survivors are apart or everything is back where it started.
    """
    updated = np.array(updated, dtype=float)
    previous = np.asarray(previous, dtype=float)
    while True:
        stuck = crowded(updated, tol) & (updated != previous)
        if not stuck.any():
            return updated
        updated[stuck] = previous[stuck]


def _current_params(amps, freqs, phases, slopes):
    return [SinusoidParams(a, f, p, s) for a, f, p, s in zip(amps, freqs, phases, slopes)]


def estimate_nonlinear(x, theta_init, cfg, iterations, alpha=ALPHA, order='grouped', counter=None):
    """
    Non-linear estimator: linear and frequency updates run together.

    Every outer iteration rebuilds the basis at the current frequencies,
    subtracts the current model from the windowed frame, runs one even/odd
    Gauss-Seidel sweep and moves every frequency by alpha * dtheta.

    :param iterations: number of outer iterations M (>= 1)
    :param alpha: step scale on the frequency update, in (0, 1]
    """
    if iterations < 1:
        raise ValueError('iterations must be >= 1, got {}'.format(iterations))
    if not 0 < alpha <= 1:
        raise ValueError('alpha must lie in (0, 1], got {}'.format(alpha))
    counter = counter if counter is not None else FlopCounter()
    start = counter.total

    theta = np.array(check_freqs(theta_init))
    n_partials = theta.size
    amps, phases, slopes = np.zeros(n_partials), np.zeros(n_partials), np.zeros(n_partials)
    frozen = np.zeros(n_partials, dtype=bool)
    vanished = np.zeros(n_partials, dtype=bool)

    x_h = cfg.apply_window(x)
    counter.add(cfg.frame_len)
    x_halves = np.vstack(split_even_odd(x_h))
    counter.add(cfg.frame_len)
    floor = amp_floor(x_h)
    sweep = sweep_order(n_partials, order)

    freq_history = [theta.copy()]
    residual_history = [rms(x_h)]
    energies = [float(np.sum(x_halves * x_halves))]
    clamp_events = []
    weights = LinWeights.zeros(n_partials, normalized=True)
    for i in range(1, iterations + 1):
        basis = build_basis(theta, cfg, counter=counter)
        w = basis.normalize(_model_weights(amps, phases, slopes)).as_vector().copy()
        if i == 1:
            halves = x_halves.copy()
        else:
            halves = evenodd_residual(basis, x_halves, w, counter)
        evenodd_sweep(basis, halves, w, sweep, counter)
        energies.append(float(np.sum(halves * halves)))

        weights = LinWeights.from_vector(w, normalized=True)
        params, dtheta, vanished = recover_params(basis.denormalize(weights), theta, floor, counter)
        frozen |= vanished
        amps = np.array([p.amp for p in params])
        phases = np.array([p.phase for p in params])
        slopes = np.array([p.amp_slope for p in params])

        step = np.where(frozen, 0.0, alpha * dtheta)
        updated, clamped = clamp_freqs(theta + step, FREQ_EPS)
        theta = keep_apart(updated, theta)
        clamp_events.extend((i, int(k)) for k in np.flatnonzero(clamped))
        freq_history.append(theta.copy())
        residual_history.append(reconstruction_rms(x_h, _current_params(amps, theta, phases, slopes), cfg))

    trace = SolveTrace(residual_energy=np.array(energies), weights=weights, iterations=iterations,
                       flops=counter.total - start, vanished=vanished.copy(), residual=full_residual(halves))
    final = _current_params(amps, theta, phases, slopes)
    return NonlinearResult(params=final, trace=trace, freq_history=np.array(freq_history),
                           residual_history=np.array(residual_history), clamp_events=clamp_events,
                           frozen=frozen.copy())
