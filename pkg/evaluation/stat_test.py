import argparse

import numpy as np
import pandas as pd
from scipy.stats import wilcoxon

STATS_COLUMNS = ['snr_db', 'method', 'baseline', 'n_frames', 'median_diff', 'p_value', 'significant']


def paired_p_value(errors, base_errors):
    diff = np.asarray(errors) - np.asarray(base_errors)
    if diff.size == 0 or not np.any(diff):
        return 1.0
    _, p_value = wilcoxon(errors, base_errors)
    return float(p_value)


def compare_methods(frame_errors, baseline='mp', alpha=0.05, column='freq_sq_error'):
    """
    Paired Wilcoxon signed-rank test of per-frame errors, every method against `baseline`.

    Frames where either method matched no partial are dropped from the pair.
    median_diff < 0 means the method beats the baseline.
    """
    if baseline not in set(frame_errors['method']):
        raise ValueError('baseline {!r} is not among the evaluated methods'.format(baseline))
    rows = []
    for snr_db, at_snr in frame_errors.groupby('snr_db', sort=True):
        table = at_snr.pivot(index='frame_index', columns='method', values=column)
        for method in sorted(table.columns):
            if method == baseline:
                continue
            pair = table[[method, baseline]].dropna()
            p_value = paired_p_value(pair[method], pair[baseline])
            median_diff = float(np.median(pair[method] - pair[baseline])) if len(pair) else np.nan
            rows.append((snr_db, method, baseline, len(pair), median_diff, p_value, p_value < alpha))
    return pd.DataFrame(rows, columns=STATS_COLUMNS)


def create_parser():
    parser = argparse.ArgumentParser()
    parser.add_argument('-data', type=str, help='per-frame error CSV')
    parser.add_argument('-baseline', type=str, default='mp', help='baseline method')
    parser.add_argument('-alpha', type=float, default=0.05, help='alpha')
    options = parser.parse_args()
    return options


if __name__ == '__main__':
    opt = create_parser()
    stats = compare_methods(pd.read_csv(opt.data), opt.baseline, opt.alpha)
    print(stats.to_string(index=False))
