"""Statistical machinery for correlated time series.

Block-based standard errors for stationary series, and a low-variance
relaxation-time estimate for observables with a single exponential decay
(the energy of the weakly damped oscillator relaxes at the rate Gamma).
"""

from __future__ import annotations

import numpy as np

from .errors import InsufficientDataError


def block_sums(values: np.ndarray, block_len: int) -> tuple[np.ndarray, int]:
    """Sums over consecutive full blocks; the trailing partial block is dropped."""
    n_blocks = values.size // block_len
    if n_blocks < 1:
        raise InsufficientDataError(
            f"series of {values.size} samples is shorter than one block "
            f"({block_len})"
        )
    trimmed = values[: n_blocks * block_len]
    return trimmed.reshape(n_blocks, block_len).sum(axis=1), n_blocks


def bootstrap_se(
    per_point: dict[str, np.ndarray],
    statistic,
    block_len: int,
    rng: np.random.Generator,
    replicates: int = 200,
    min_blocks: int = 10,
) -> dict[str, float]:
    """Blocked bootstrap standard errors for statistics of stationary series.

    Every named series is cut into the same non-overlapping blocks; each
    replicate resamples block indices with replacement (jointly across
    series, preserving cross-correlations) and re-evaluates `statistic`,
    which maps {name: (block_sums, n_points)} to {row_name: value}.
    """
    names = list(per_point)
    n = per_point[names[0]].size
    n_blocks = n // block_len
    if n_blocks < min_blocks:
        raise InsufficientDataError(
            f"{n_blocks} blocks of length {block_len} from {n} samples; "
            f"need at least {min_blocks}"
        )
    sums = {name: block_sums(per_point[name], block_len)[0] for name in names}
    points_per_rep = n_blocks * block_len
    values: dict[str, list[float]] = {}
    for _ in range(replicates):
        idx = rng.integers(0, n_blocks, size=n_blocks)
        resampled = {
            name: (sums[name][idx].sum(), points_per_rep) for name in names
        }
        for row, val in statistic(resampled).items():
            values.setdefault(row, []).append(val)
    return {row: float(np.std(vals, ddof=1)) for row, vals in values.items()}


def autocorrelation(series: np.ndarray, max_lag: int) -> np.ndarray:
    """Normalized autocorrelation rho_0..rho_max_lag, computed by FFT."""
    x = np.asarray(series, dtype=float)
    n = x.size
    if max_lag >= n:
        raise ValueError(f"max_lag {max_lag} >= series length {n}")
    x = x - x.mean()
    size = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(x, n=size)
    acov = np.fft.irfft(f * np.conj(f), n=size)[: max_lag + 1]
    if acov[0] <= 0:
        raise InsufficientDataError("series has no variance")
    return acov / acov[0]


def relaxation_time(rho: np.ndarray, floor: float = np.exp(-1.0)) -> float:
    """Decay time, in sample units, of an exponentially decaying correlation.

    Integrates the autocorrelation up to its first crossing below `floor`
    and corrects for the truncated tail assuming exponential decay:
    area(0..t_c) = tau (1 - rho_c), so tau = area / (1 - rho_c).  Far less
    noisy than long-window sums when the series holds only hundreds of
    relaxation times.
    """
    below = np.nonzero(rho < floor)[0]
    if below.size == 0 or below[0] < 3:
        raise InsufficientDataError(
            "autocorrelation floor crossing too early or never reached; "
            "adjust the sampling stride"
        )
    cut = int(below[0])
    tail = rho[cut]
    area = 0.5 + rho[1:cut].sum() + 0.5 * tail
    return float(area / (1.0 - tail))
