import os

PROCESS_ENV = os.environ.get('ENV', 'TEST')

RESULTS_ROOT = {
    'TEST': 'results',
    'PRODUCTION': os.environ.get('SINUSOIDS_RESULTS', '/var/lib/sinusoids/results'),
}
RESULTS_ROOT = RESULTS_ROOT[PROCESS_ENV]

SIGNAL_FILE_TEMPLATE = '{experiment_name}.f64'
TRUTH_FILE_TEMPLATE = '{experiment_name}_truth.csv'
TRACK_FILE_TEMPLATE = '{experiment_name}_tracks.csv'
REPORT_FILE_TEMPLATE = '{experiment_name}_report.csv'
CURVES_FILE_TEMPLATE = '{experiment_name}_curves.csv'
STATS_FILE_TEMPLATE = '{experiment_name}_stats.csv'

SIGNAL_DTYPE = '<f8'

REPORT_COLUMNS = ['snr_db', 'method', 'freq_rms', 'amp_rms', 'recon_rms', 'outlier_rate', 'flops_per_frame']
FLOP_COLUMNS = ['model_flops_per_frame', 'model_mflops']
TRACK_COLUMNS = ['frame_index', 'partial', 'amp', 'freq', 'phase', 'amp_slope', 'residual_rms', 'iters']
TRUTH_COLUMNS = ['frame_index', 'partial', 'freq', 'amp']
