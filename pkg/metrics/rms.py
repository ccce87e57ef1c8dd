from dataclasses import dataclass

import numpy as np

from models.sinusoid import synthesize


@dataclass
class FrameScore:
    freq_sq_errors: np.ndarray
    amp_sq_errors: np.ndarray
    recon_sq_error: float
    n_samples: int
    n_truth: int
    outliers: int
    # error of estimating nothing, i.e. the windowed clean frame energy
    silence_sq_error: float = np.nan


def greedy_match(est_freqs, true_freqs):
    """Pairs (estimate index, truth index) matched greedily by increasing frequency distance."""
    est_freqs = np.asarray(est_freqs, dtype=float)
    true_freqs = np.asarray(true_freqs, dtype=float)
    if est_freqs.size == 0 or true_freqs.size == 0:
        return []
    dist = np.abs(est_freqs[:, None] - true_freqs[None, :])
    order = np.argsort(dist, axis=None, kind='stable')
    used_est, used_true, pairs = set(), set(), []
    for flat in order:
        i, j = np.unravel_index(flat, dist.shape)
        if i in used_est or j in used_true:
            continue
        used_est.add(i)
        used_true.add(j)
        pairs.append((int(i), int(j)))
    return pairs


def score_frame(estimates, truth, cfg, clean_frame):
    """
    Errors of one frame against its ground truth.

    Estimates are matched to true partials by frequency; a pair more than one
    DFT bin (2 pi / L) apart, and any true partial left unmatched, count as
    outliers and are left out of the frequency and amplitude errors. The
    reconstruction error compares the windowed resynthesis of all estimates
    with the windowed noise-free frame.
    """
    bin_width = 2 * np.pi / cfg.frame_len
    est_freqs = [p.freq for p in estimates]
    true_freqs = [p.freq for p in truth]
    freq_err, amp_err = [], []
    for i, j in greedy_match(est_freqs, true_freqs):
        delta = estimates[i].freq - truth[j].freq
        if abs(delta) > bin_width:
            continue
        freq_err.append(delta ** 2)
        amp_err.append((estimates[i].amp - truth[j].amp) ** 2)

    clean_h = cfg.apply_window(clean_frame)
    live = [p for p in estimates if p.amp > 0]
    recon = clean_h - synthesize(live, cfg, windowed=True) if live else clean_h
    return FrameScore(freq_sq_errors=np.array(freq_err), amp_sq_errors=np.array(amp_err),
                      recon_sq_error=float(recon @ recon), n_samples=cfg.frame_len,
                      n_truth=len(truth), outliers=len(truth) - len(freq_err),
                      silence_sq_error=float(clean_h @ clean_h))


def pooled_rms(scores):
    """(freq_rms, amp_rms, recon_rms, outlier_rate) pooled over all matched partials and samples."""
    freq = np.concatenate([s.freq_sq_errors for s in scores]) if scores else np.zeros(0)
    amp = np.concatenate([s.amp_sq_errors for s in scores]) if scores else np.zeros(0)
    samples = sum(s.n_samples for s in scores)
    truths = sum(s.n_truth for s in scores)
    freq_rms = float(np.sqrt(np.mean(freq))) if freq.size else float('nan')
    amp_rms = float(np.sqrt(np.mean(amp))) if amp.size else float('nan')
    recon_rms = float(np.sqrt(sum(s.recon_sq_error for s in scores) / samples)) if samples else float('nan')
    outlier_rate = sum(s.outliers for s in scores) / truths if truths else 0.0
    return freq_rms, amp_rms, recon_rms, outlier_rate


def reconstruction_rms(x_h, params, cfg):
    """RMS of the windowed frame minus the windowed resynthesis of the live partials."""
    x_h = np.asarray(x_h, dtype=float)
    live = [p for p in params if p.amp > 0]
    if not live:
        return float(np.sqrt(np.mean(x_h * x_h)))
    residual = x_h - synthesize(live, cfg, windowed=True)
    return float(np.sqrt(np.mean(residual * residual)))
