class FlopCounter:
    """Running count of arithmetic operations (one multiply or one add each)."""

    def __init__(self):
        self.total = 0

    def add(self, ops):
        self.total += int(ops)
        return self.total

    def dot(self, length):
        # length multiplies, length additions
        return self.add(2 * length)

    def axpy(self, length):
        return self.add(2 * length)


def flop_model(method, frame_len, n_partials, iterations=1, oversample=1):
    """
    Closed-form operation count per frame.

    :param method: 'linear', 'nonlinear', 'mp_slow' or 'direct'
    :param frame_len: L
    :param n_partials: N
    :param iterations: M (linear and non-linear only)
    :param oversample: P (matching pursuits only)
    """
    for name, value in (('frame_len', frame_len), ('n_partials', n_partials),
                        ('iterations', iterations), ('oversample', oversample)):
        if int(value) != value or value < 1:
            raise ValueError('{} must be a positive integer, got {}'.format(name, value))
    L, N, M, P = int(frame_len), int(n_partials), int(iterations), int(oversample)
    if method == 'linear':
        return (8 * M + 5) * L * N
    if method == 'nonlinear':
        return (17 * M - 4) * L * N
    if method == 'mp_slow':
        return 4 * L * N ** 2 * P
    if method == 'direct':
        return 64 * N ** 3 + 32 * L * N ** 2
    raise ValueError('unknown flop model {!r}'.format(method))


def mflops(ops_per_frame, sample_rate, hop):
    """Real-time cost in Mflops for one frame every `hop` samples."""
    frames_per_second = sample_rate / hop
    return ops_per_frame * frames_per_second / 1e6
