"""Linear solvers for the normal equations of the linearized sinusoidal model.

All solvers work on the normalized basis columns and return weights in
normalized coordinates (LinWeights.normalized is True); BasisSet.denormalize
maps them back to the raw (c, s, d, t) of the linear model.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from config.param import Parity
from metrics.flops import FlopCounter
from models.frame import merge_even_odd, split_even_odd
from models.sinusoid import LinWeights
from models.utils import DivergenceMonitor, EarlyStopping

SWEEP_ORDERS = ('grouped', 'interleaved')


class SingularSystemError(RuntimeError):
    pass


@dataclass
class SolveTrace:
    residual_energy: np.ndarray
    weights: LinWeights
    iterations: int
    flops: int
    diverged: bool = False
    step_energy: Optional[np.ndarray] = None
    vanished: Optional[np.ndarray] = None
    # full-length x_h - A w after the last iteration
    residual: Optional[np.ndarray] = None


def _check_frame(basis, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (basis.frame_len,):
        raise ValueError('frame has shape {}, basis expects ({},)'.format(x.shape, basis.frame_len))
    return x


def _cholesky_solve(gram, rhs):
    try:
        factor = cho_factor(gram)
    except LinAlgError as exc:
        raise SingularSystemError('Gram matrix is not positive definite: {}'.format(exc)) from exc
    return cho_solve(factor, rhs)


def solve_direct(basis, x, split=False):
    """
    Exact least-squares weights w = (A^T A)^-1 A^T x_h by Cholesky factorization.

    :param split: solve the even columns [c, t] and the odd columns [s, d]
           as two independent systems, which is exact because every even
           column is orthogonal to every odd one
    """
    x = _check_frame(basis, x)
    gram = basis.gram()
    rhs = basis.columns.T @ x
    if not split:
        w = _cholesky_solve(gram, rhs)
    else:
        w = np.zeros(basis.n_columns)
        even = basis.even_mask
        for mask in (even, ~even):
            w[mask] = _cholesky_solve(gram[np.ix_(mask, mask)], rhs[mask])
    return LinWeights.from_vector(w, normalized=True)


def solve_jacobi(basis, x, iterations, counter=None):
    """Jacobi iteration w <- w + A^T (x_h - A w), starting from w = A^T x_h.

    Convergence is not guaranteed; growth of the residual energy over three
    consecutive iterations sets trace.diverged and iteration stops if the
    weights overflow.
    """
    if iterations < 0:
        raise ValueError('iterations must be >= 0, got {}'.format(iterations))
    x = _check_frame(basis, x)
    counter = counter if counter is not None else FlopCounter()
    start = counter.total
    columns = basis.columns
    L, K = columns.shape

    w = columns.T @ x
    residual = x - columns @ w
    counter.add(4 * L * K + L)
    energies = [float(residual @ residual)]
    monitor = DivergenceMonitor()
    monitor(energies[-1])
    done = 0
    with np.errstate(over='ignore', invalid='ignore'):
        for _ in range(iterations):
            w_next = w + columns.T @ residual
            residual_next = x - columns @ w_next
            energy = float(residual_next @ residual_next)
            if not (np.all(np.isfinite(w_next)) and np.isfinite(energy)):
                monitor.diverged = True
                break
            w, residual = w_next, residual_next
            counter.add(4 * L * K + L + K)
            energies.append(energy)
            monitor(energy)
            done += 1
    return SolveTrace(residual_energy=np.array(energies), weights=LinWeights.from_vector(w, normalized=True),
                      iterations=done, flops=counter.total - start, diverged=monitor.diverged,
                      residual=residual)


def sweep_order(n_partials, order='grouped'):
    """Column visiting order: all c, all s, all d, all t (grouped) or c, s, d, t per partial."""
    if order == 'grouped':
        return list(range(4 * n_partials))
    if order == 'interleaved':
        return [block * n_partials + k for k in range(n_partials) for block in range(4)]
    raise ValueError('sweep order must be one of {}, got {!r}'.format(SWEEP_ORDERS, order))


def solve_gauss_seidel(basis, x, iterations, order='grouped', tol=0.0, update_tol=0.0,
                       record_steps=False, counter=None):
    """Gauss-Seidel on the normal equations via recursive residual updates.

    Every inner step is an exact one-dimensional projection of the residual
    on a unit-norm column, so the residual energy never increases.
    """
    if iterations < 1:
        raise ValueError('iterations must be >= 1, got {}'.format(iterations))
    x = _check_frame(basis, x)
    counter = counter if counter is not None else FlopCounter()
    start = counter.total
    columns = basis.columns
    L = basis.frame_len
    sweep = sweep_order(basis.n_partials, order)

    residual = x.copy()
    w = np.zeros(basis.n_columns)
    energies = [float(residual @ residual)]
    steps = [energies[0]] if record_steps else None
    stopper = EarlyStopping(tol, update_tol)
    done = 0
    for _ in range(iterations):
        max_update = 0.0
        for k in sweep:
            column = columns[:, k]
            delta = column @ residual
            residual -= delta * column
            w[k] += delta
            counter.dot(L)
            counter.axpy(L)
            max_update = max(max_update, abs(delta))
            if record_steps:
                steps.append(float(residual @ residual))
        done += 1
        energies.append(float(residual @ residual))
        if stopper(energies[-1], max_update):
            break
    return SolveTrace(residual_energy=np.array(energies), weights=LinWeights.from_vector(w, normalized=True),
                      iterations=done, flops=counter.total - start,
                      step_energy=np.array(steps) if record_steps else None, residual=residual)


def parity_rows(basis):
    return np.array([0 if p is Parity.EVEN else 1 for p in basis.parity])


def evenodd_sweep(basis, halves, w, sweep, counter, steps=None):
    """One Gauss-Seidel sweep on the half-length residuals halves = [even, odd] (updated in place)."""
    rows = parity_rows(basis)
    half = basis.frame_len // 2
    max_update = 0.0
    for k in sweep:
        column = basis.half_columns[:, k]
        residual = halves[rows[k]]
        delta = column @ residual
        residual -= delta * column
        w[k] += delta
        counter.dot(half)
        counter.axpy(half)
        max_update = max(max_update, abs(delta))
        if steps is not None:
            steps.append(float(np.sum(halves * halves)))
    return max_update


def evenodd_residual(basis, x_halves, w, counter):
    """Half-length residuals [even, odd] of x - A w, built one parity at a time."""
    rows = parity_rows(basis)
    halves = np.array(x_halves, dtype=float)
    for row in (0, 1):
        mask = rows == row
        if np.any(w[mask]):
            halves[row] -= basis.half_columns[:, mask] @ w[mask]
        counter.add(basis.frame_len * np.count_nonzero(mask))
    return halves


def solve_gauss_seidel_evenodd(basis, x, iterations, order='grouped', tol=0.0, update_tol=0.0,
                               record_steps=False, counter=None):
    """Gauss-Seidel with the residual split into half-length even and odd parts.

    Even columns (c, t) only touch the even half and odd columns (s, d) only
    the odd half, which halves the inner-loop work without changing the
    result.
    """
    if iterations < 1:
        raise ValueError('iterations must be >= 1, got {}'.format(iterations))
    if basis.frame_len % 2:
        raise ValueError('even/odd split needs an even frame length, got {}'.format(basis.frame_len))
    x = _check_frame(basis, x)
    counter = counter if counter is not None else FlopCounter()
    start = counter.total
    sweep = sweep_order(basis.n_partials, order)

    halves = np.vstack(split_even_odd(x))
    counter.add(basis.frame_len)
    w = np.zeros(basis.n_columns)
    energies = [float(np.sum(halves * halves))]
    steps = [energies[0]] if record_steps else None
    stopper = EarlyStopping(tol, update_tol)
    done = 0
    for _ in range(iterations):
        max_update = evenodd_sweep(basis, halves, w, sweep, counter, steps)
        done += 1
        energies.append(float(np.sum(halves * halves)))
        if stopper(energies[-1], max_update):
            break
    return SolveTrace(residual_energy=np.array(energies), weights=LinWeights.from_vector(w, normalized=True),
                      iterations=done, flops=counter.total - start,
                      step_energy=np.array(steps) if record_steps else None, residual=full_residual(halves))


def full_residual(halves):
    """Full-length residual from its half-length [even, odd] parts."""
    return merge_even_odd(halves[0], halves[1])
