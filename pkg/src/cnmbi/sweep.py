"""End-to-end cluster-count estimation and repeated-trial evaluation."""

from __future__ import annotations

import json
import logging
import math
import os
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Optional, Union

import numpy as np

from .boundary import BoundaryProfile, boundary_degree, core_subset
from .datasets import Dataset
from .density import build_distance_index, density_centers, density_profile
from .errors import ConfigError, DegenerateDataError
from .matching import build_cost_matrix, min_cost_matching, pairwise_sq_costs
from .partition import kmeans_centers

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def default_threads() -> int:
    env = os.environ.get("CNMBI_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer CNMBI_THREADS=%r", env)
    return os.cpu_count() or 1


@dataclass(frozen=True)
class SweepConfig:
    k_min: int = 2
    k_max: Union[int, str] = "auto"  # "auto" -> floor(sqrt(n)) of the unfiltered data
    lam: float = 0.10
    dc_percentile: float = 0.02
    restarts: int = 10
    max_iters: int = 300
    tol: float = 1e-6
    seed: int = 0
    filtering_enabled: bool = True
    mean_vs_mean_mode: bool = False
    boundary_p: float = 1.0
    keep_details: bool = True
    threads: Optional[int] = field(default=None, compare=False)

    def resolve_k_max(self, n: int) -> int:
        if self.k_max == "auto":
            return math.isqrt(n)
        return int(self.k_max)

    def validate(self, n: int) -> None:
        k_max = self.resolve_k_max(n)
        if self.k_min < 2:
            raise ConfigError(f"k_min must be >= 2, got {self.k_min}")
        if self.k_min > k_max:
            raise ConfigError(f"empty candidate range: k_min={self.k_min} > k_max={k_max}")
        if not 0 <= self.lam < 1:
            raise ConfigError(f"lambda must be in [0, 1), got {self.lam}")
        if not 0 < self.dc_percentile < 1:
            raise ConfigError(f"dc percentile must be in (0, 1), got {self.dc_percentile}")
        if self.restarts < 1 or self.max_iters < 1 or self.tol < 0:
            raise ConfigError("restarts and max_iters must be positive and tol non-negative")

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("threads")
        return d


@dataclass
class SweepReport:
    losses: list  # [(k, loss)] in increasing k
    k_star: int
    boundary: Optional[BoundaryProfile]
    config: SweepConfig
    n: int
    n_core: int
    k_range: tuple
    skipped: list = field(default_factory=list)  # [(k, reason)]
    per_k_details: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def loss_of(self, k: int) -> float:
        return dict(self.losses)[k]

    def to_dict(self, include_timings: bool = True) -> dict:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "config": self.config.to_dict(),
            "n": self.n,
            "n_core": self.n_core,
            "k_range": list(self.k_range),
            "losses": [{"k": k, "loss": loss} for k, loss in self.losses],
            "k_star": self.k_star,
            "skipped": [{"k": k, "reason": r} for k, r in self.skipped],
            "boundary": None if self.boundary is None else self.boundary.summary(),
            "per_k": {
                str(k): {
                    "assignment": det["assignment"].tolist(),
                    "pair_costs": det["pair_costs"].tolist(),
                    "mean_centers": det["mean_centers"].tolist(),
                    "density_centers": det["density_centers"].tolist(),
                }
                for k, det in sorted(self.per_k_details.items())
            },
        }
        if include_timings:
            doc["timings"] = dict(self.timings)
        return doc

    def to_json(self, include_timings: bool = True) -> str:
        return json.dumps(self.to_dict(include_timings), indent=2, sort_keys=True)

    def curve_csv(self) -> str:
        lines = ["k,loss"] + [f"{k},{loss!r}" for k, loss in self.losses]
        return "\n".join(lines) + "\n"


def _k_seed(seed: int, k: int, stream: int = 0) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, k, stream])


def estimate(data: Dataset, config: SweepConfig = SweepConfig()) -> SweepReport:
    """Estimate the number of clusters in ``data``.

    Filters boundary points, then for every candidate ``k`` pairs the top-``k``
    density peaks with the K-means centroids and records the minimum mean
    squared pair distance. The smallest ``k`` attaining the global minimum wins.
    """
    if data.n < 4:
        raise DegenerateDataError(f"need at least 4 points, got {data.n}")
    config.validate(data.n)
    timings = {}
    t0 = time.perf_counter()

    index = build_distance_index(data, config.dc_percentile)
    if config.filtering_enabled:
        phi, counts = boundary_degree(data, index, config.boundary_p)
        core, profile = core_subset(data, phi, config.lam, counts, index.dc)
    else:
        core, profile = data, None
    timings["filter_s"] = time.perf_counter() - t0

    k_min = config.k_min
    k_max = config.resolve_k_max(data.n)
    if k_max > core.n:
        raise ConfigError(f"k_max={k_max} exceeds the {core.n} points left after filtering")

    t1 = time.perf_counter()
    core_index = index if profile is None else build_distance_index(core, config.dc_percentile)
    dens = density_profile(core_index)
    timings["density_s"] = time.perf_counter() - t1

    def one_k(k):
        try:
            mean_set = kmeans_centers(
                core, k, config.restarts, config.max_iters, config.tol, _k_seed(config.seed, k)
            )
            if config.mean_vs_mean_mode:
                other = kmeans_centers(
                    core, k, config.restarts, config.max_iters, config.tol, _k_seed(config.seed, k, 1)
                )
                costs = pairwise_sq_costs(mean_set.centers, other.centers)
            else:
                other = density_centers(dens, core, k)
                costs = build_cost_matrix(mean_set, other)
        except DegenerateDataError as exc:
            return k, None, str(exc)
        res = min_cost_matching(costs)
        log.info("k=%d loss=%.6g", k, res.loss)
        return k, (res, mean_set.centers, other.centers), None

    t2 = time.perf_counter()
    ks = range(k_min, k_max + 1)
    threads = config.threads or default_threads()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one_k, ks))
    else:
        results = [one_k(k) for k in ks]
    timings["sweep_s"] = time.perf_counter() - t2

    losses, skipped, details = [], [], {}
    for k, out, reason in results:
        if out is None:
            skipped.append((k, reason))
            continue
        res, mc, dcn = out
        losses.append((k, res.loss))
        if config.keep_details:
            details[k] = {
                "assignment": res.assignment,
                "pair_costs": res.pair_costs,
                "mean_centers": mc,
                "density_centers": dcn,
            }
    if not losses:
        raise DegenerateDataError(f"every k in [{k_min}, {k_max}] was infeasible")
    best = min(loss for _, loss in losses)
    k_star = next(k for k, loss in losses if loss == best)
    timings["total_s"] = time.perf_counter() - t0
    return SweepReport(
        losses, k_star, profile, config, data.n, core.n, (k_min, k_max), skipped, details, timings
    )


@dataclass
class TrialsResult:
    nc: int
    acc: Optional[float]
    k_stars: list
    seeds: list
    true_k: Optional[int]

    def to_dict(self) -> dict:
        return asdict(self)


def trial_seeds(seed: int, trials: int) -> list:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(trials, dtype=np.uint32)]


def run_trials(data: Dataset, config: SweepConfig = SweepConfig(), trials: int = 50) -> TrialsResult:
    """Repeat :func:`estimate` under derived seeds.

    ``nc`` is the most frequent estimate (smallest on ties); ``acc`` is the
    share of trials hitting ``data.true_k``, or ``None`` without ground truth.
    """
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    seeds = trial_seeds(config.seed, trials)
    k_stars = [estimate(data, replace(config, seed=s, keep_details=False)).k_star for s in seeds]
    counts = Counter(k_stars)
    top = max(counts.values())
    nc = min(k for k, c in counts.items() if c == top)
    acc = None
    if data.true_k is not None:
        acc = sum(k == data.true_k for k in k_stars) / trials
    return TrialsResult(nc, acc, k_stars, seeds, data.true_k)
