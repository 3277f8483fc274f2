"""Direct sampling of the equilibrium phase-space distribution.

The equilibrium distribution is an independent Gaussian in every coordinate,
so i.i.d. samples are drawn directly; the Langevin simulator exists to check
that the dynamics reproduces these statistics, not to generate them.

Reproducibility contract: sample index i always receives the same value for
a given seed, independent of how the work is chunked.  Draws use the
counter-based Philox generator keyed by (seed, block) over fixed-size
blocks, and every reduction is performed over the ordered per-block partial
sums.  Chunked estimation therefore merges to a bit-identical result for
any chunk count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import stats as sps

from .errors import InsufficientDataError
from .estimates import EstimateRow, EstimateTable
from .model import OscillatorParams, ThermalState, mode_energy
from .oracles import QuantitySpec, TheorySide, reference_value
from . import oracles

#: Samples per generation/reduction block.  Fixed: changing it changes streams.
BLOCK_SIZE = 8192


_U64 = (1 << 64) - 1


def _block_generator(seed: int, block: int) -> np.random.Generator:
    key = np.array([seed & _U64, block & _U64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class PhaseSample:
    """A batch of phase-space points with generation metadata."""

    dims: int
    x: np.ndarray  # shape (dims, n)
    p: np.ndarray  # shape (dims, n)
    temperature: float
    seed: int

    def __post_init__(self) -> None:
        if self.dims not in (1, 3):
            raise ValueError(f"dims must be 1 or 3, got {self.dims}")
        if self.x.shape != self.p.shape or self.x.shape[0] != self.dims:
            raise ValueError("x and p must both have shape (dims, n)")
        if self.n < 1:
            raise ValueError("a sample must contain at least one point")

    @property
    def n(self) -> int:
        return self.x.shape[1]


def _draw_block(
    seed: int, block: int, count: int, dims: int, sx: float, sp: float
) -> tuple[np.ndarray, np.ndarray]:
    rng = _block_generator(seed, block)
    normals = rng.standard_normal((2 * dims, BLOCK_SIZE))[:, :count]
    return sx * normals[:dims], sp * normals[dims:]


def draw_phase_space(
    n: int,
    dims: int,
    params: OscillatorParams,
    state: ThermalState,
    seed: int,
) -> PhaseSample:
    """Draw n i.i.d. equilibrium points; deterministic under the seed."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    sx = np.sqrt(oracles.classical_variance_x(params, state))
    sp = np.sqrt(oracles.classical_variance_p(params, state))
    xs, ps = [], []
    for block in range((n + BLOCK_SIZE - 1) // BLOCK_SIZE):
        count = min(BLOCK_SIZE, n - block * BLOCK_SIZE)
        bx, bp = _draw_block(seed, block, count, dims, sx, sp)
        xs.append(bx)
        ps.append(bp)
    return PhaseSample(
        dims=dims,
        x=np.concatenate(xs, axis=1),
        p=np.concatenate(ps, axis=1),
        temperature=state.temperature,
        seed=seed,
    )


# -- per-point quantities -----------------------------------------------------


def _point_values(
    spec: QuantitySpec, x: np.ndarray, p: np.ndarray, params: OscillatorParams
) -> np.ndarray:
    if spec.kind == "x_moment":
        return x[0] ** spec.order
    if spec.kind == "p_moment":
        return p[0] ** spec.order
    if spec.kind == "H":
        return (p**2).sum(axis=0) / (2 * params.m) + (
            0.5 * params.m * params.omega0**2
        ) * (x**2).sum(axis=0)
    if spec.kind in ("H2", "H2_over_H_sq"):
        h = _point_values(QuantitySpec("H", dims=spec.dims), x, p, params)
        return h**2
    if spec.kind in ("Lx2", "Ly2", "Lz2", "L2"):
        lx = x[1] * p[2] - x[2] * p[1]
        ly = x[2] * p[0] - x[0] * p[2]
        lz = x[0] * p[1] - x[1] * p[0]
        if spec.kind == "Lx2":
            return lx**2
        if spec.kind == "Ly2":
            return ly**2
        if spec.kind == "Lz2":
            return lz**2
        return lx**2 + ly**2 + lz**2
    raise ValueError(f"quantity {spec.kind!r} is not a per-point estimator")


def _validate_specs(specs: Sequence[QuantitySpec], dims: int) -> None:
    for spec in specs:
        if not spec.is_point_estimator:
            raise ValueError(f"{spec.kind} has no per-point estimator")
        if spec.dims != dims:
            raise ValueError(
                f"quantity {spec.label} declared for dims={spec.dims}, "
                f"sample has dims={dims}"
            )


# -- blocked reduction ----------------------------------------------------------


def _block_slices(n: int) -> Iterable[slice]:
    for start in range(0, n, BLOCK_SIZE):
        yield slice(start, min(start + BLOCK_SIZE, n))


def _partials_from_arrays(
    specs: Sequence[QuantitySpec],
    x: np.ndarray,
    p: np.ndarray,
    params: OscillatorParams,
) -> dict:
    """Per-block sums of q, q^2 (and for ratio rows the base H powers)."""
    n = x.shape[1]
    out: dict[str, list[np.ndarray]] = {"count": []}
    per_point = {}
    for spec in specs:
        if spec.kind == "H2_over_H_sq":
            h = _point_values(QuantitySpec("H", dims=spec.dims), x, p, params)
            per_point[spec.label] = np.vstack([h, h**2, h**3, h**4])
        else:
            q = _point_values(spec, x, p, params)
            per_point[spec.label] = np.vstack([q, q**2])
        out[spec.label] = []
    for sl in _block_slices(n):
        out["count"].append(np.array(float(sl.stop - sl.start)))
        for spec in specs:
            out[spec.label].append(per_point[spec.label][:, sl].sum(axis=1))
    return out


def _reduce_partials(specs, partials, params, state) -> EstimateTable:
    counts = np.array(partials["count"], dtype=float)
    n = float(np.sum(counts))
    rows = []
    for spec in specs:
        sums = np.sum(np.array(partials[spec.label], dtype=float), axis=0)
        if spec.kind == "H2_over_H_sq":
            m1, m2, m3, m4 = sums / n
            est = m2 / m1**2
            # delta method for g(m1, m2) = m2/m1^2
            v11 = m2 - m1**2
            v12 = m3 - m1 * m2
            v22 = m4 - m2**2
            g1 = -2.0 * m2 / m1**3
            g2 = 1.0 / m1**2
            var = (g1 * g1 * v11 + 2 * g1 * g2 * v12 + g2 * g2 * v22) / n
            se = float(np.sqrt(max(var, 0.0)))
        else:
            s1, s2 = sums
            est = s1 / n
            var = (s2 - s1 * s1 / n) / (n - 1) if n > 1 else 0.0
            se = float(np.sqrt(max(var, 0.0) / n))
        ref = reference_value(spec, TheorySide.CLASSICAL, params, state)
        rows.append(EstimateRow(spec.label, float(est), se, int(n), ref))
    return EstimateTable.build(rows)


def estimate(
    sample: PhaseSample,
    quantities: Sequence[QuantitySpec],
    params: OscillatorParams,
) -> EstimateTable:
    """Plug-in estimates with i.i.d. standard errors and analytic references."""
    _validate_specs(quantities, sample.dims)
    state = ThermalState(sample.temperature)
    partials = _partials_from_arrays(quantities, sample.x, sample.p, params)
    return _reduce_partials(quantities, partials, params, state)


def estimate_chunked(
    n: int,
    dims: int,
    params: OscillatorParams,
    state: ThermalState,
    seed: int,
    quantities: Sequence[QuantitySpec],
    chunks: int = 1,
    max_workers: int = 1,
) -> EstimateTable:
    """Generate-and-estimate in chunks; result is independent of `chunks`.

    Chunks own disjoint ranges of the fixed block grid, so concatenating
    their per-block partial sums in block order reproduces the single-pass
    reduction bit for bit.
    """
    _validate_specs(quantities, dims)
    if chunks < 1:
        raise ValueError("chunks must be >= 1")
    sx = np.sqrt(oracles.classical_variance_x(params, state))
    sp = np.sqrt(oracles.classical_variance_p(params, state))
    n_blocks = (n + BLOCK_SIZE - 1) // BLOCK_SIZE
    bounds = np.linspace(0, n_blocks, chunks + 1).astype(int)

    def chunk_partials(c: int) -> dict:
        out: dict[str, list] = {"count": [], **{s.label: [] for s in quantities}}
        for block in range(bounds[c], bounds[c + 1]):
            count = min(BLOCK_SIZE, n - block * BLOCK_SIZE)
            bx, bp = _draw_block(seed, block, count, dims, sx, sp)
            part = _partials_from_arrays(quantities, bx, bp, params)
            out["count"] += part["count"]
            for s in quantities:
                out[s.label] += part[s.label]
        return out

    if max_workers > 1 and chunks > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            chunk_results = list(pool.map(chunk_partials, range(chunks)))
    else:
        chunk_results = [chunk_partials(c) for c in range(chunks)]

    merged: dict[str, list] = {"count": [], **{s.label: [] for s in quantities}}
    for part in chunk_results:  # ordered merge over the block grid
        for key in merged:
            merged[key] += part[key]
    return _reduce_partials(quantities, merged, params, state)


# -- distributional test -----------------------------------------------------


@dataclass(frozen=True)
class LawTestReport:
    law: str
    statistic: float
    pvalue: float
    level: float

    @property
    def passed(self) -> bool:
        return self.pvalue > self.level


def energy_law_test(
    sample: PhaseSample,
    params: OscillatorParams,
    state: ThermalState,
    level: float = 1e-3,
    law: str | None = None,
) -> LawTestReport:
    """Kolmogorov-Smirnov test of the per-point energy distribution.

    In equilibrium H is a quadratic form in 2*dims standard Gaussians:
    exponential with mean E for dims=1, gamma with shape 3 and scale E for
    dims=3, where E is the per-mode energy at the oscillator frequency.
    `law` ('exponential' or 'gamma3') overrides the dims-appropriate choice,
    which is useful as a negative control.
    """
    if sample.n < 10**3:
        raise InsufficientDataError(
            f"energy-law test needs >= 1000 samples, got {sample.n}"
        )
    h = _point_values(
        QuantitySpec("H", dims=sample.dims), sample.x, sample.p, params
    )
    scale = mode_energy(params.omega0, state, params, include_zero_point=True)
    if law is None:
        law = "exponential" if sample.dims == 1 else "gamma3"
    if law == "exponential":
        result = sps.kstest(h, "expon", args=(0.0, scale))
    elif law == "gamma3":
        result = sps.kstest(h, "gamma", args=(3.0, 0.0, scale))
    else:
        raise ValueError(f"unknown law {law!r}")
    return LawTestReport(law, float(result.statistic), float(result.pvalue), level)
