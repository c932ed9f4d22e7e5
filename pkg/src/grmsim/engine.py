"""Condition grid, seeded replications and per-cell aggregation.

Every cell gets its own 64-bit seed hashed from the master seed and the cell
parameters, and every replication draws from an independent substream keyed
by ``(cell_seed, rep_index, attempt)``.  Nothing depends on the order in
which cells are visited, so the output is identical for any worker count.
"""

from __future__ import annotations

import hashlib
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .dependency import DependencyProfile, sigma_for
from .errors import DegenerateInputError, DuplicateCellError, InvalidArgumentError
from .grm import Item, sample_latent, sample_response_matrix
from .stats import ols_simple, spearman, standardize

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 100
SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class PredictorSpec:
    """Third variable ``x = coefficient * theta + Normal(0, noise_sd)``."""

    coefficient: float = 0.5
    noise_sd: float = 0.2

    def __post_init__(self):
        if not math.isfinite(self.coefficient):
            raise InvalidArgumentError("predictor coefficient must be finite")
        if not self.noise_sd > 0:
            raise InvalidArgumentError("predictor noise_sd must be positive")

    @property
    def reference_slope(self) -> float:
        """Standardised slope an error-free continuous measure would show.

        With unit-variance true scores this is the population correlation
        between theta and x.
        """
        return self.coefficient / math.sqrt(self.coefficient**2 + self.noise_sd**2)


@dataclass(frozen=True)
class ConditionCell:
    num_categories: int
    sigma: float
    num_items: int
    sample_size: int
    replications: int
    cell_seed: int | None = None

    def __post_init__(self):
        if self.num_categories < 2:
            raise InvalidArgumentError("num_categories must be >= 2")
        if not self.sigma > 0:
            raise InvalidArgumentError("sigma must be positive")
        if self.num_items < 1:
            raise InvalidArgumentError("num_items must be >= 1")
        if self.sample_size < 10:
            raise InvalidArgumentError("sample_size must be >= 10")
        if self.replications < 1:
            raise InvalidArgumentError("replications must be >= 1")

    @property
    def key(self) -> tuple:
        return (self.num_categories, self.sigma, self.num_items, self.sample_size)


@dataclass(frozen=True)
class ReplicationResult:
    spearman_true_obs: float
    slope: float
    slope_se: float
    slope_bias: float
    discarded_regenerations: int = 0


@dataclass(frozen=True)
class CellSummary:
    cell: ConditionCell
    replications: int
    mean_spearman: float
    sd_spearman: float
    mean_slope: float
    sd_slope: float
    mean_slope_se: float
    sd_slope_se: float
    mean_bias: float
    sd_bias: float
    discards: int
    records: tuple = field(default=(), compare=False, repr=False)


def derive_cell_seed(master_seed: int, cell: ConditionCell) -> int:
    """64-bit seed for a cell, hashed from the master seed and cell parameters."""
    token = (
        f"grmsim-cell|{int(master_seed) & SEED_MASK}|{cell.num_categories}|"
        f"{float(cell.sigma)!r}|{cell.num_items}|{cell.sample_size}"
    )
    digest = hashlib.blake2b(token.encode("ascii"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def substream(cell_seed: int, rep_index: int, attempt: int = 0) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=int(cell_seed), spawn_key=(int(rep_index), int(attempt)))
    return np.random.Generator(np.random.PCG64(seq))


def _simulate(cell: ConditionCell, predictor: PredictorSpec, items, rng) -> ReplicationResult:
    n = cell.sample_size
    theta = sample_latent(n, rng)
    responses = sample_response_matrix(theta, items, rng).responses
    observed = responses[:, 0] if cell.num_items == 1 else responses.mean(axis=1)
    x = predictor.coefficient * theta + predictor.noise_sd * rng.standard_normal(n)
    recovery = spearman(theta, observed)
    fit = ols_simple(standardize(observed), standardize(x))
    return ReplicationResult(
        spearman_true_obs=recovery,
        slope=fit.slope,
        slope_se=fit.slope_se,
        slope_bias=fit.slope - predictor.reference_slope,
    )


def _cell_items(cell: ConditionCell) -> list[Item]:
    return [Item.with_categories(cell.num_categories, cell.sigma)] * cell.num_items


def run_replication(
    cell: ConditionCell, predictor_spec: PredictorSpec, rep_index: int, items=None
) -> ReplicationResult:
    """Simulate one data set for ``cell`` and compute its outcomes.

    If the draw is degenerate (e.g. every respondent lands in one category)
    it is thrown away and redrawn from the next attempt substream; the number
    of throwaways is reported on the result.
    """
    if cell.cell_seed is None:
        raise InvalidArgumentError("cell has no seed; derive one with derive_cell_seed")
    if not 0 <= rep_index < cell.replications:
        raise InvalidArgumentError(f"rep_index {rep_index} outside [0, {cell.replications})")
    if items is None:
        items = _cell_items(cell)
    for attempt in range(MAX_ATTEMPTS):
        rng = substream(cell.cell_seed, rep_index, attempt)
        try:
            result = _simulate(cell, predictor_spec, items, rng)
        except DegenerateInputError:
            continue
        return replace(result, discarded_regenerations=attempt)
    raise DegenerateInputError(
        f"cell K={cell.num_categories} sigma={cell.sigma} produced {MAX_ATTEMPTS} "
        f"degenerate draws in a row (replication {rep_index})"
    )


def _mean_sd(values: np.ndarray) -> tuple[float, float]:
    mean = float(values.mean())
    sd = float(values.std(ddof=1)) if values.size > 1 else float("nan")
    return mean, sd


def summarize_replications(
    cell: ConditionCell, results, keep_records: bool = False
) -> CellSummary:
    table = np.array(
        [[r.spearman_true_obs, r.slope, r.slope_se, r.slope_bias] for r in results]
    )
    stats = [_mean_sd(table[:, j]) for j in range(4)]
    return CellSummary(
        cell=cell,
        replications=len(results),
        mean_spearman=stats[0][0],
        sd_spearman=stats[0][1],
        mean_slope=stats[1][0],
        sd_slope=stats[1][1],
        mean_slope_se=stats[2][0],
        sd_slope_se=stats[2][1],
        mean_bias=stats[3][0],
        sd_bias=stats[3][1],
        discards=sum(r.discarded_regenerations for r in results),
        records=tuple(results) if keep_records else (),
    )


def run_cell(cell: ConditionCell, predictor_spec: PredictorSpec, keep_records: bool = False) -> CellSummary:
    items = _cell_items(cell)
    results = [
        run_replication(cell, predictor_spec, rep, items=items) for rep in range(cell.replications)
    ]
    return summarize_replications(cell, results, keep_records)


def _run_cell_job(args):
    return run_cell(*args)


def check_unique(cells) -> None:
    seen = set()
    for cell in cells:
        if cell.key in seen:
            k, sigma, j, n = cell.key
            raise DuplicateCellError(f"duplicate cell K={k} sigma={sigma} items={j} n={n}")
        seen.add(cell.key)


def run_grid(
    cells,
    predictor_spec: PredictorSpec,
    master_seed: int,
    workers: int = 1,
    keep_records: bool = False,
) -> list[CellSummary]:
    """Run every cell and return summaries in the order the cells were given."""
    cells = list(cells)
    if not cells:
        raise InvalidArgumentError("no cells to run")
    check_unique(cells)
    seeded = [replace(c, cell_seed=derive_cell_seed(master_seed, c)) for c in cells]
    jobs = [(c, predictor_spec, keep_records) for c in seeded]
    total_reps = sum(c.replications for c in seeded)
    logger.info("running %d cells (%d replications) on %d worker(s)", len(jobs), total_reps, workers)
    if workers <= 1 or len(jobs) == 1:
        return [_run_cell_job(job) for job in jobs]
    chunk = max(1, len(jobs) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_cell_job, jobs, chunksize=chunk))


def expand_grid(config) -> list[ConditionCell]:
    """Cells for a run configuration.

    Independent mode crosses K x sigma x items x N.  Dependency mode resolves
    one sigma per K from each profile and crosses that with items x N.
    """
    cells = []
    reps = config.replications
    if config.mode == "independent":
        pairs = [(k, float(s)) for k in config.k_values for s in config.sigma_values]
    else:
        pairs = []
        for profile in config.profiles:
            ks = config.k_values if config.k_values is not None else profile.k_values()
            pairs.extend((k, sigma_for(profile, k)) for k in ks)
    for k, sigma in pairs:
        for j in config.items_values:
            for n in config.sample_sizes:
                cells.append(ConditionCell(k, sigma, j, n, reps))
    check_unique(cells)
    return cells


def profile_for_cell(cell: ConditionCell, profiles) -> DependencyProfile | None:
    """The profile among ``profiles`` that assigns ``cell.sigma`` at ``cell.num_categories``."""
    for profile in profiles:
        try:
            if math.isclose(sigma_for(profile, cell.num_categories), cell.sigma, rel_tol=1e-8):
                return profile
        except InvalidArgumentError:
            continue
    return None
