import os.path
from dataclasses import dataclass, field, fields
from typing import Optional

import numpy as np

from config.io import (CURVES_FILE_TEMPLATE, REPORT_FILE_TEMPLATE, RESULTS_ROOT, SIGNAL_FILE_TEMPLATE,
                       STATS_FILE_TEMPLATE, TRACK_FILE_TEMPLATE, TRUTH_FILE_TEMPLATE)
from config.param import (ALPHA, CHIRP_DURATION, CONVERGENCE_ALPHAS, CONVERGENCE_MAX_ITER, FRAME_LEN, HOP,
                          MIN_FRAME_LEN, N_PARTIALS, OVERSAMPLE, SNR_GRID)

COMMANDS = ('synth', 'estimate', 'bench', 'convergence')
ESTIMATE_METHODS = ('linear', 'nonlinear', 'mp')
BENCH_METHODS = ('linear', 'nonlinear', 'mp', 'dft')


def parse_snr(value):
    """One SNR in dB; 'inf' and 'clean' mean no noise."""
    text = str(value).strip().lower()
    if text in ('inf', '+inf', 'clean'):
        return float('inf')
    snr = float(text)
    if np.isnan(snr):
        raise ValueError('SNR must be a number, got {!r}'.format(value))
    return snr


def parse_float_list(text, parse=float):
    items = [item for item in str(text).split(',') if item.strip()]
    if not items:
        raise ValueError('empty list {!r}'.format(text))
    return tuple(parse(item) for item in items)


@dataclass
class RunConfig:
    """Parameters of one CLI or experiment-file run; fields a command does not use are ignored."""
    command: str
    frame_len: int = FRAME_LEN
    hop: int = HOP
    n_partials: int = N_PARTIALS
    iterations: Optional[int] = None
    alpha: float = ALPHA
    method: str = 'nonlinear'
    methods: Optional[tuple] = None
    snr: tuple = SNR_GRID
    seed: int = 0
    in_path: Optional[str] = None
    out_path: Optional[str] = None
    truth_path: Optional[str] = None
    stats_path: Optional[str] = None
    log_dir: Optional[str] = None
    flops: bool = False
    duration: int = CHIRP_DURATION
    oversample: int = OVERSAMPLE
    scenario: str = 'single-am'
    alphas: tuple = CONVERGENCE_ALPHAS
    max_iter: int = CONVERGENCE_MAX_ITER
    quiet: bool = False
    experiment_name: Optional[str] = None
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.command not in COMMANDS:
            raise ValueError('unknown command {!r}, expected one of {}'.format(self.command, COMMANDS))
        if int(self.frame_len) != self.frame_len or self.frame_len < MIN_FRAME_LEN or self.frame_len % 2:
            raise ValueError('frame length must be an even integer >= {}, got {}'.format(MIN_FRAME_LEN, self.frame_len))
        for name in ('hop', 'n_partials', 'duration', 'oversample', 'max_iter'):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError('{} must be a positive integer, got {}'.format(name, value))
        if self.iterations is not None and (int(self.iterations) != self.iterations or self.iterations < 1):
            raise ValueError('iterations must be >= 1, got {}'.format(self.iterations))
        if not 0 < self.alpha <= 1:
            raise ValueError('alpha must lie in (0, 1], got {}'.format(self.alpha))
        for alpha in self.alphas:
            if not 0 < alpha <= 1:
                raise ValueError('alpha must lie in (0, 1], got {}'.format(alpha))
        if len(self.snr) == 0:
            raise ValueError('SNR list is empty')
        if self.command == 'synth' and len(self.snr) != 1:
            raise ValueError('synth takes a single SNR, got {}'.format(len(self.snr)))
        if self.command == 'convergence' and self.scenario not in ('single-am', 'chirps'):
            raise ValueError('unknown scenario {!r}'.format(self.scenario))
        if self.command == 'estimate' and self.method not in ESTIMATE_METHODS:
            raise ValueError('unknown method {!r}, expected one of {}'.format(self.method, ESTIMATE_METHODS))
        if self.command == 'bench' and self.methods is not None:
            if not self.methods:
                raise ValueError('no methods to benchmark')
            for method in self.methods:
                if method not in BENCH_METHODS:
                    raise ValueError('unknown method {!r}, expected one of {}'.format(method, BENCH_METHODS))
        if not self.out_path:
            raise ValueError('{} needs an output path'.format(self.command))
        if self.command == 'estimate' and not self.in_path:
            raise ValueError('estimate needs an input path')
        return self

    def with_experiment_paths(self, root=RESULTS_ROOT):
        """Fill missing output paths from the experiment name and the results root."""
        if not self.experiment_name:
            return self

        def path(template):
            return os.path.join(root, template.format(experiment_name=self.experiment_name))

        if self.command == 'synth':
            self.out_path = self.out_path or path(SIGNAL_FILE_TEMPLATE)
            self.truth_path = self.truth_path or path(TRUTH_FILE_TEMPLATE)
        elif self.command == 'estimate':
            self.out_path = self.out_path or path(TRACK_FILE_TEMPLATE)
        elif self.command == 'bench':
            self.out_path = self.out_path or path(REPORT_FILE_TEMPLATE)
            self.stats_path = self.stats_path or path(STATS_FILE_TEMPLATE)
        elif self.command == 'convergence':
            self.out_path = self.out_path or path(CURVES_FILE_TEMPLATE)
        return self

    @classmethod
    def from_dict(cls, ctx):
        known = {f.name for f in fields(cls)}
        values = {key: value for key, value in ctx.items() if key in known}
        values['extra'] = {key: value for key, value in ctx.items() if key not in known}
        if 'snr' in values:
            snr = values['snr']
            values['snr'] = tuple(parse_snr(s) for s in (snr if isinstance(snr, (list, tuple)) else [snr]))
        elif ctx.get('command') == 'synth':
            values['snr'] = (float('inf'),)
        for key in ('methods', 'alphas'):
            if key in values:
                values[key] = tuple(values[key])
        return cls(**values).with_experiment_paths().validate()

    @classmethod
    def from_namespace(cls, options):
        return cls.from_dict({key: value for key, value in vars(options).items() if value is not None})
