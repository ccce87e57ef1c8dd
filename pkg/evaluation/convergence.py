import numpy as np
import pandas as pd
from tqdm import tqdm

from config.param import (ALPHA, CONVERGENCE_ALPHAS, CONVERGENCE_MAX_ITER, FRAME_LEN, SINGLE_AM_AMP,
                          SINGLE_AM_FREQ, SINGLE_AM_INIT, SINGLE_AM_PHASE, SINGLE_AM_SLOPE)
from data_data.dataset import ChirpSpec, gen_chirps
from data_data.utils import extract_frames
from evaluation.assessment import snap_to_bins
from methods.linear import estimate_linear
from methods.nonlinear import estimate_nonlinear
from models.frame import make_frame_config
from models.sinusoid import SinusoidParams, synthesize
from models.utils import rms

SCENARIOS = ('single-am', 'chirps')
CURVE_COLUMNS = ['scenario', 'method', 'alpha', 'iteration', 'freq_error', 'residual_rms']


def single_am_frame(cfg):
    truth = SinusoidParams(SINGLE_AM_AMP, SINGLE_AM_FREQ, SINGLE_AM_PHASE, SINGLE_AM_SLOPE)
    return synthesize([truth], cfg), truth


def _linear_curve(frames, inits, truths, cfg, max_iter):
    # the linear estimator has no outer loop, so iteration m is a fresh run with m sweeps
    curve = []
    for m in range(1, max_iter + 1):
        freq_sq, res_sq = [], []
        for frame, init, truth in zip(frames, inits, truths):
            params, _, trace = estimate_linear(frame, init, cfg, m)
            freq_sq.extend((p.freq - t.freq) ** 2 for p, t in zip(params, truth))
            # residual of the fitted linear model, not of the recovered sinusoids
            res_sq.append(rms(trace.residual) ** 2)
        curve.append((m, np.sqrt(np.mean(freq_sq)), np.sqrt(np.mean(res_sq))))
    return curve


def _nonlinear_curve(frames, inits, truths, cfg, max_iter, alpha):
    freq_sq = np.zeros(max_iter + 1)
    res_sq = np.zeros(max_iter + 1)
    for frame, init, truth in zip(frames, inits, truths):
        result = estimate_nonlinear(frame, init, cfg, max_iter, alpha=alpha)
        true_freqs = np.array([t.freq for t in truth])
        freq_sq += np.mean((result.freq_history - true_freqs) ** 2, axis=1)
        res_sq += result.residual_history ** 2
    n = len(frames)
    return [(m, np.sqrt(freq_sq[m] / n), np.sqrt(res_sq[m] / n)) for m in range(max_iter + 1)]


def run_convergence(scenario, alphas=CONVERGENCE_ALPHAS, methods=('nonlinear',), max_iter=CONVERGENCE_MAX_ITER,
                    spec=None, seed=0, frame_len=FRAME_LEN, progress=False):
    """
    Error against iteration count, one curve per (method, alpha).

    'single-am' analyses one frame holding a single amplitude-modulated
    sinusoid started off its true frequency; 'chirps' averages over all
    frames of the clean chirp mixture started from bin-snapped truth. Curves
    report the frequency error (absolute for one partial, RMS over partials
    and frames otherwise) and the residual RMS: x_h - A w of the fitted
    linear model on linear rows, the windowed reconstruction residual of the
    current sinusoids on non-linear rows. The
    non-linear curve starts at iteration 0 (the initialization); alpha is
    NaN on linear rows.
    """
    if scenario not in SCENARIOS:
        raise ValueError('unknown scenario {!r}, expected one of {}'.format(scenario, SCENARIOS))
    if max_iter < 1:
        raise ValueError('max_iter must be >= 1, got {}'.format(max_iter))
    if not methods:
        raise ValueError('no methods to evaluate')
    for method in methods:
        if method not in ('linear', 'nonlinear'):
            raise ValueError('convergence curves need an iterative method, got {!r}'.format(method))
    alphas = tuple(alphas) or (ALPHA,)

    if scenario == 'single-am':
        cfg = make_frame_config(frame_len)
        frame, truth = single_am_frame(cfg)
        frames, truths, inits = [frame], [[truth]], [np.array([SINGLE_AM_INIT])]
    else:
        spec = spec if spec is not None else ChirpSpec()
        cfg = make_frame_config(spec.frame_len)
        signal, truths = gen_chirps(spec, seed)
        frames = extract_frames(signal, spec.frame_len, spec.hop)
        inits = [snap_to_bins([p.freq for p in t], spec.frame_len) for t in truths]

    rows = []
    jobs = [('linear', None)] if 'linear' in methods else []
    if 'nonlinear' in methods:
        jobs.extend(('nonlinear', alpha) for alpha in alphas)
    for method, alpha in tqdm(jobs, desc='curves', disable=not progress):
        if method == 'linear':
            curve = _linear_curve(frames, inits, truths, cfg, max_iter)
        else:
            curve = _nonlinear_curve(frames, inits, truths, cfg, max_iter, alpha)
        label = np.nan if alpha is None else alpha
        rows.extend((scenario, method, label, m, freq, res) for m, freq, res in curve)
    return pd.DataFrame(rows, columns=CURVE_COLUMNS)


def first_iteration_below(curves, threshold, column='freq_error'):
    """Iteration at which each (method, alpha) curve first drops to `threshold`, NaN if never."""
    reached = {}
    for (method, alpha), curve in curves.groupby(['method', 'alpha'], dropna=False, sort=True):
        hits = curve.loc[curve[column] <= threshold, 'iteration']
        reached[(method, alpha)] = int(hits.min()) if not hits.empty else np.nan
    return reached
