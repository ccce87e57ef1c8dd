import os.path
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from tqdm import tqdm

from config.io import FLOP_COLUMNS, REPORT_COLUMNS
from config.param import ALPHA, CSV_FLOAT_FORMAT, LINEAR_ITERS, NONLINEAR_ITERS, OVERSAMPLE, SAMPLE_RATE
from data_data.dataset import gen_chirps
from data_data.utils import add_noise, extract_frames
from methods.baseline import Dictionary, dft_peak_params, matching_pursuit
from methods.linear import estimate_linear
from methods.nonlinear import estimate_nonlinear
from metrics.flops import FlopCounter, flop_model, mflops
from metrics.rms import pooled_rms, score_frame
from models.frame import make_frame_config

METHODS = ('linear', 'nonlinear', 'mp', 'dft')
FLOP_MODELS = {'linear': 'linear', 'nonlinear': 'nonlinear', 'mp': 'mp_slow'}


def snap_to_bins(freqs, frame_len):
    """Nearest DFT bin centre of every frequency, kept inside bins 1..L/2-1."""
    bins = np.clip(np.round(np.asarray(freqs) * frame_len / (2 * np.pi)), 1, frame_len // 2 - 1)
    if np.unique(bins).size != bins.size:
        raise ValueError('partials share a DFT bin, the common initialization is ambiguous')
    return 2 * np.pi * bins / frame_len


def default_iterations(iterations=None):
    merged = {'linear': LINEAR_ITERS, 'nonlinear': NONLINEAR_ITERS}
    merged.update(iterations or {})
    return merged


def run_method(method, frame, cfg, n_partials, theta_init, iterations, alpha=ALPHA, dictionary=None,
               counter=None):
    """Run one estimator on one raw frame; returns (params, iterations run)."""
    if method == 'linear':
        params, _, trace = estimate_linear(frame, theta_init, cfg, iterations['linear'], counter=counter)
        return params, trace.iterations
    if method == 'nonlinear':
        result = estimate_nonlinear(frame, theta_init, cfg, iterations['nonlinear'], alpha=alpha, counter=counter)
        return result.params, result.trace.iterations
    if method == 'mp':
        result = matching_pursuit(frame, cfg, dictionary, n_partials, counter=counter)
        return result.params, n_partials
    if method == 'dft':
        return dft_peak_params(frame, cfg, n_partials), 0
    raise ValueError('unknown method {!r}, expected one of {}'.format(method, METHODS))


@dataclass
class ExperimentReport:
    rows: pd.DataFrame
    frame_errors: pd.DataFrame
    iterations: dict
    frame_len: int
    n_partials: int
    oversample: int
    hop: int
    sample_rate: int = SAMPLE_RATE
    settings: dict = field(default_factory=dict)

    def model_flops(self, method, n_partials=None):
        if method not in FLOP_MODELS:
            return float('nan')
        return flop_model(FLOP_MODELS[method], self.frame_len, n_partials or self.n_partials,
                          self.iterations.get(method, 1), self.oversample)

    def to_frame(self, flops=False, model_partials=None):
        """Report rows sorted by SNR then method; `flops` appends the closed-form counts at `model_partials`."""
        table = self.rows.copy()
        table = table.sort_values(['snr_db', 'method'], kind='mergesort')
        table = table[REPORT_COLUMNS].reset_index(drop=True)
        if flops:
            table[FLOP_COLUMNS[0]] = [self.model_flops(m, model_partials) for m in table['method']]
            table[FLOP_COLUMNS[1]] = [mflops(v, self.sample_rate, self.hop) for v in table[FLOP_COLUMNS[0]]]
        return table

    def to_csv(self, path, flops=False, model_partials=None):
        write_results(self.to_frame(flops, model_partials), path)


def write_results(table, file_path):
    tmp_path = '{}.tmp'.format(file_path)
    table.to_csv(tmp_path, index=False, float_format=CSV_FLOAT_FORMAT)
    os.replace(tmp_path, file_path)


def run_snr_sweep(spec, snr_grid, methods, seed=0, iterations=None, alpha=ALPHA, oversample=OVERSAMPLE,
                  progress=False, writer=None):
    """
    Estimate the chirp mixture at every SNR with every method and pool the errors.

    Iterative methods start from the true per-frame frequencies snapped to the
    nearest DFT bin; matching pursuits and DFT peaks search freely and are
    held to the one-bin rule by the scoring. Noise for SNR point i is drawn
    from the stream (seed, i).
    """
    snr_grid = [float(s) for s in snr_grid]
    if not snr_grid:
        raise ValueError('SNR grid is empty')
    if not methods:
        raise ValueError('no methods to evaluate')
    for method in methods:
        if method not in METHODS:
            raise ValueError('unknown method {!r}, expected one of {}'.format(method, METHODS))
    iterations = default_iterations(iterations)
    cfg = make_frame_config(spec.frame_len)
    clean, truth = gen_chirps(spec, seed)
    clean_frames = extract_frames(clean, spec.frame_len, spec.hop)
    inits = [snap_to_bins([p.freq for p in frame_truth], spec.frame_len) for frame_truth in truth]
    dictionary = Dictionary(cfg, oversample) if 'mp' in methods else None

    rows, frame_rows = [], []
    for snr_index, snr_db in enumerate(tqdm(snr_grid, desc='SNR', disable=not progress)):
        noisy = add_noise(clean, snr_db, [seed, snr_index])
        frames = extract_frames(noisy, spec.frame_len, spec.hop)
        for method in methods:
            counter = FlopCounter()
            scores = []
            for f, frame in enumerate(frames):
                estimates, _ = run_method(method, frame, cfg, spec.n_chirps, inits[f], iterations, alpha,
                                          dictionary, counter)
                score = score_frame(estimates, truth[f], cfg, clean_frames[f])
                scores.append(score)
                frame_rows.append({
                    'snr_db': snr_db, 'method': method, 'frame_index': f,
                    'freq_sq_error': float(np.mean(score.freq_sq_errors)) if score.freq_sq_errors.size else np.nan,
                    'recon_sq_error': score.recon_sq_error,
                    'silence_sq_error': score.silence_sq_error,
                })
            freq_rms, amp_rms, recon_rms, outlier_rate = pooled_rms(scores)
            rows.append({'snr_db': snr_db, 'method': method, 'freq_rms': freq_rms, 'amp_rms': amp_rms,
                         'recon_rms': recon_rms, 'outlier_rate': outlier_rate,
                         'flops_per_frame': counter.total / max(len(frames), 1)})
            if writer is not None:
                writer.add_scalars('freq_rms', {method: freq_rms}, snr_index)
                writer.add_scalars('recon_rms', {method: recon_rms}, snr_index)
            if progress:
                tqdm.write('SNR {} dB {}: freq RMS {:.3e}, recon RMS {:.3e}'.format(
                    snr_db, method, freq_rms, recon_rms))

    report_iterations = dict(iterations)
    report_iterations.update({'mp': spec.n_chirps, 'dft': 0})
    return ExperimentReport(rows=pd.DataFrame(rows, columns=REPORT_COLUMNS), frame_errors=pd.DataFrame(frame_rows),
                            iterations={m: report_iterations[m] for m in methods}, frame_len=spec.frame_len,
                            n_partials=spec.n_chirps, oversample=oversample, hop=spec.hop,
                            settings={'seed': seed, 'alpha': alpha, 'duration': spec.duration})
