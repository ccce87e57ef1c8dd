import argparse
import sys
import time

import numpy as np
import pandas as pd
from tensorboardX import SummaryWriter
from tqdm import tqdm

from config.io import TRACK_COLUMNS, TRUTH_COLUMNS
from config.param import (CHIRP_DURATION, CONVERGENCE_TOL, FRAME_LEN, HOP, LINEAR_ITERS, N_PARTIALS, NONLINEAR_ITERS,
                          OVERSAMPLE)
from config.run import BENCH_METHODS, ESTIMATE_METHODS, RunConfig, parse_float_list, parse_snr
from data_data.dataset import ChirpSpec, gen_chirps
from data_data.utils import add_noise, extract_frames, read_signal, write_signal
from evaluation.assessment import run_snr_sweep, write_results
from evaluation.convergence import SCENARIOS, first_iteration_below, run_convergence
from evaluation.stat_test import compare_methods
from methods.baseline import Dictionary, dft_peak_pick, matching_pursuit
from methods.linear import estimate_linear
from methods.nonlinear import estimate_nonlinear
from metrics.rms import reconstruction_rms
from models.frame import make_frame_config


def say(config, message):
    if not config.quiet:
        tqdm.write(message, file=sys.stderr)


def chirp_spec(config):
    return ChirpSpec(duration=config.duration, frame_len=config.frame_len, hop=config.hop)


def cmd_synth(config):
    spec = chirp_spec(config)
    signal, truth = gen_chirps(spec, config.seed)
    snr_db = config.snr[0]
    signal = add_noise(signal, snr_db, [config.seed, 0])
    if config.truth_path:
        rows = [(f, k, p.freq, p.amp) for f, frame_truth in enumerate(truth) for k, p in enumerate(frame_truth)]
        write_results(pd.DataFrame(rows, columns=TRUTH_COLUMNS), config.truth_path)
    write_signal(config.out_path, signal)
    say(config, 'wrote {} samples of {} chirps at SNR {} dB to {}'.format(
        signal.size, spec.n_chirps, snr_db, config.out_path))
    return 0


def estimate_frame(config, frame, cfg, dictionary):
    """Estimate one frame; returns (params, iterations), params empty when the frame has no peak."""
    if config.method == 'mp':
        return matching_pursuit(frame, cfg, dictionary, config.n_partials).params, config.n_partials
    theta_init = np.sort(dft_peak_pick(frame, cfg, config.n_partials))
    if theta_init.size == 0:
        return [], 0
    if config.method == 'linear':
        iterations = config.iterations or LINEAR_ITERS
        params, _, _ = estimate_linear(frame, theta_init, cfg, iterations)
        return params, iterations
    iterations = config.iterations or NONLINEAR_ITERS
    return estimate_nonlinear(frame, theta_init, cfg, iterations, alpha=config.alpha).params, iterations


def cmd_estimate(config):
    cfg = make_frame_config(config.frame_len)
    signal = read_signal(config.in_path)
    if signal.size < cfg.frame_len:
        raise ValueError('{}: {} samples is shorter than one frame of {}'.format(
            config.in_path, signal.size, cfg.frame_len))
    dictionary = Dictionary(cfg, config.oversample) if config.method == 'mp' else None
    frames = extract_frames(signal, cfg.frame_len, config.hop)

    rows = []
    start = time.time()
    for f, frame in enumerate(tqdm(frames, desc='frames', disable=config.quiet, file=sys.stderr)):
        params, iterations = estimate_frame(config, frame, cfg, dictionary)
        if not params:
            continue
        residual = reconstruction_rms(cfg.apply_window(frame), params, cfg)
        rows.extend((f, k, p.amp, p.freq, p.phase, p.amp_slope, residual, iterations) for k, p in enumerate(params))
    write_results(pd.DataFrame(rows, columns=TRACK_COLUMNS), config.out_path)
    say(config, '{} frames estimated with {} in {:.2f} s'.format(len(frames), config.method, time.time() - start))
    return 0


def cmd_bench(config):
    methods = config.methods or ('linear', 'nonlinear', 'mp')
    iterations = {} if config.iterations is None else {'linear': config.iterations, 'nonlinear': config.iterations}
    writer = SummaryWriter(config.log_dir) if config.log_dir else None
    try:
        report = run_snr_sweep(chirp_spec(config), config.snr, methods, seed=config.seed, iterations=iterations,
                               alpha=config.alpha, oversample=config.oversample, progress=not config.quiet,
                               writer=writer)
    finally:
        if writer is not None:
            writer.close()
    if config.stats_path:
        baseline = 'mp' if 'mp' in methods else methods[0]
        write_results(compare_methods(report.frame_errors, baseline), config.stats_path)
    report.to_csv(config.out_path, flops=config.flops, model_partials=config.n_partials)
    say(config, 'report written to {}'.format(config.out_path))
    return 0


def cmd_convergence(config):
    if config.methods:
        methods = config.methods
    else:
        methods = ('nonlinear',) if config.scenario == 'single-am' else ('linear', 'nonlinear')
    curves = run_convergence(config.scenario, alphas=config.alphas, methods=methods, max_iter=config.max_iter,
                             spec=chirp_spec(config), seed=config.seed, frame_len=config.frame_len,
                             progress=not config.quiet)
    write_results(curves, config.out_path)
    say(config, '{} curve points written to {}'.format(len(curves), config.out_path))
    for (method, alpha), iteration in first_iteration_below(curves, CONVERGENCE_TOL).items():
        label = method if np.isnan(alpha) else '{} alpha={:g}'.format(method, alpha)
        reached = 'never' if np.isnan(iteration) else 'at iteration {}'.format(iteration)
        say(config, '{}: frequency error below {:g} {}'.format(label, CONVERGENCE_TOL, reached))
    return 0


COMMANDS = {
    'synth': cmd_synth,
    'estimate': cmd_estimate,
    'bench': cmd_bench,
    'convergence': cmd_convergence,
}


def run(config):
    return COMMANDS[config.command](config)


def snr_list(text):
    return parse_float_list(text, parse_snr)


def create_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--frame-len', dest='frame_len', type=int, help='frame length L (default {})'.format(FRAME_LEN))
    common.add_argument('--hop', type=int, help='frame advance in samples (default {})'.format(HOP))
    common.add_argument('--seed', type=int, help='random seed')
    common.add_argument('--out', dest='out_path', type=str, required=True, help='output path')
    common.add_argument('--quiet', action='store_true', default=None, help='no progress or diagnostics')

    parser = argparse.ArgumentParser(description='sinusoidal parameter estimation and chirp benchmarks')
    commands = parser.add_subparsers(dest='command', required=True)

    synth = commands.add_parser('synth', parents=[common], help='synthesize the chirp mixture')
    synth.add_argument('--snr', type=parse_snr, help='SNR in dB, or inf for a clean signal (default inf)')
    synth.add_argument('--duration', type=int, help='samples (default {})'.format(CHIRP_DURATION))
    synth.add_argument('--truth', dest='truth_path', type=str, help='per-frame ground truth CSV')
    synth.set_defaults(snr=float('inf'))

    estimate = commands.add_parser('estimate', parents=[common], help='estimate the partials of a signal file')
    estimate.add_argument('--in', dest='in_path', type=str, required=True, help='raw float64 signal')
    estimate.add_argument('--method', choices=ESTIMATE_METHODS, help='estimator (default nonlinear)')
    estimate.add_argument('--partials', dest='n_partials', type=int, help='partials per frame (default {})'.format(N_PARTIALS))
    estimate.add_argument('--iters', dest='iterations', type=int, help='iterations M')
    estimate.add_argument('--alpha', type=float, help='frequency step scale in (0, 1]')
    estimate.add_argument('--oversample', type=int, help='matching-pursuits grid oversampling (default {})'.format(OVERSAMPLE))

    bench = commands.add_parser('bench', parents=[common], help='SNR sweep over the chirp mixture')
    bench.add_argument('--method', dest='methods', action='append', choices=BENCH_METHODS,
                       help='method to evaluate, repeatable (default linear, nonlinear and mp)')
    bench.add_argument('--snr', type=snr_list, help='comma-separated SNR grid in dB, inf for clean')
    bench.add_argument('--partials', dest='n_partials', type=int,
                       help='partial count of the --flops model columns (default {})'.format(N_PARTIALS))
    bench.add_argument('--iters', dest='iterations', type=int, help='iterations of both iterative methods')
    bench.add_argument('--alpha', type=float, help='frequency step scale in (0, 1]')
    bench.add_argument('--oversample', type=int, help='matching-pursuits grid oversampling (default {})'.format(OVERSAMPLE))
    bench.add_argument('--duration', type=int, help='samples (default {})'.format(CHIRP_DURATION))
    bench.add_argument('--flops', action='store_true', default=None, help='append closed-form flop columns')
    bench.add_argument('--stats', dest='stats_path', type=str, help='paired significance tests CSV')
    bench.add_argument('--log-dir', dest='log_dir', type=str, help='tensorboard log directory')

    convergence = commands.add_parser('convergence', parents=[common], help='error against iteration count')
    convergence.add_argument('--scenario', choices=SCENARIOS, help='single-am or chirps (default single-am)')
    convergence.add_argument('--method', dest='methods', action='append', choices=('linear', 'nonlinear'),
                             help='iterative method, repeatable')
    convergence.add_argument('--alpha', dest='alphas', type=parse_float_list, help='comma-separated step scales')
    convergence.add_argument('--max-iter', dest='max_iter', type=int, help='outer iterations per curve')
    convergence.add_argument('--duration', type=int, help='chirp samples (default {})'.format(CHIRP_DURATION))
    return parser


def main(argv=None):
    parser = create_parser()
    try:
        opt = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return run(RunConfig.from_namespace(opt))
    except ValueError as exc:
        tqdm.write('error: {}'.format(exc), file=sys.stderr)
        return 2
    except (OSError, RuntimeError) as exc:
        tqdm.write('error: {}'.format(exc), file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
