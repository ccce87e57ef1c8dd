import numpy as np

from config.param import AMP_FLOOR_SCALE, RECOVERY_FLOPS
from methods.solvers import solve_gauss_seidel_evenodd
from metrics.flops import FlopCounter
from models.basis import build_basis
from models.sinusoid import SinusoidParams, params_from_weights
from models.utils import clamp_freqs


def amp_floor(x_h):
    """Amplitudes at or below this level are treated as vanished partials."""
    return AMP_FLOOR_SCALE * np.linalg.norm(x_h) / np.sqrt(x_h.size)


def recover_params(weights, freqs, floor, counter=None):
    """
    Map raw linear weights to sinusoidal parameters for every partial.

    :return: (params at the basis frequencies, dtheta per partial, vanished mask)
    """
    params, dtheta, vanished = [], np.zeros(len(freqs)), np.zeros(len(freqs), dtype=bool)
    for k, theta0 in enumerate(freqs):
        p, dtheta[k], vanished[k] = params_from_weights(weights.partial(k), theta0, floor)
        params.append(p)
    if counter is not None:
        counter.add(RECOVERY_FLOPS * len(freqs))
    return params, dtheta, vanished


def estimate_linear(x, theta_init, cfg, iterations, order='grouped', counter=None):
    """Linear estimator: one linearization around theta_init solved by even/odd Gauss-Seidel.

    Returns (params, dtheta, trace); params carry freq = theta_init + dtheta
    (clamped to the open band) and vanished partials have zero amplitude and
    keep their initial frequency.
    """
    counter = counter if counter is not None else FlopCounter()
    start = counter.total
    x_h = cfg.apply_window(x)
    counter.add(cfg.frame_len)
    basis = build_basis(theta_init, cfg, counter=counter)
    trace = solve_gauss_seidel_evenodd(basis, x_h, iterations, order=order, counter=counter)

    weights = basis.denormalize(trace.weights)
    base, dtheta, vanished = recover_params(weights, basis.freqs, amp_floor(x_h), counter)
    freqs, _ = clamp_freqs(basis.freqs + dtheta)
    params = [SinusoidParams(p.amp, f, p.phase, p.amp_slope) for p, f in zip(base, freqs)]
    trace.vanished = vanished
    trace.flops = counter.total - start
    return params, dtheta, trace
