"""Random sampling and local search over apparatus space.

``bound_campaign`` draws Haar unitaries and records how many classes each one
separates; ``hill_climb`` walks the unitary group with Givens rotations
looking for apparatuses with more classes. Neither should ever exceed the
class bound for its mode; a violation means a bug.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .apparatus import Apparatus, apparatus_to_dict, haar_random, haar_separate
from .bellcore import Statistics, check_n
from .partition import BoundMode, class_bound, class_count

log = logging.getLogger(__name__)

SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class CampaignConfig:
    n: int
    stats: Statistics = Statistics.BOSON
    trials: int = 100
    seed: int = 0
    mode: BoundMode = BoundMode.ONE_COPY

    def __post_init__(self):
        check_n(self.n)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        object.__setattr__(self, "stats", Statistics(self.stats))
        object.__setattr__(self, "mode", BoundMode(self.mode))
        object.__setattr__(self, "seed", int(self.seed) & SEED_MASK)

    def trial_seed(self, t: int) -> int:
        return (self.seed + t) & SEED_MASK

    def to_dict(self) -> dict:
        return {"n": self.n, "stats": self.stats.value, "trials": self.trials,
                "seed": self.seed, "mode": self.mode.value}


@dataclass
class CampaignReport:
    config: CampaignConfig
    histogram: dict[int, int]
    max_observed: int
    best_apparatus: Apparatus
    violations: list[dict] = field(default_factory=list)

    @property
    def bound(self) -> int:
        return class_bound(self.config.n, self.config.mode)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "bound": self.bound,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "maxObserved": self.max_observed,
            "violations": self.violations,
            "bestApparatus": apparatus_to_dict(self.best_apparatus),
        }


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("LELM_LAB_THREADS", "1")))
    except ValueError:
        return 1


def _sample(cfg: CampaignConfig, t: int) -> Apparatus:
    seed = cfg.trial_seed(t)
    if cfg.mode is BoundMode.SEPARATE_CHANNEL:
        return haar_separate(cfg.n, seed)
    return haar_random(cfg.n, seed)


def _summarize(cfg: CampaignConfig, results: list[tuple[int, Apparatus, int]]) -> CampaignReport:
    """Merge per-trial ``(count, apparatus, seed)`` results in trial order."""
    bound = class_bound(cfg.n, cfg.mode)
    histogram: dict[int, int] = {}
    violations = []
    best_count, best_app = -1, None
    for t, (count, app, seed) in enumerate(results):
        histogram[count] = histogram.get(count, 0) + 1
        if count > bound:
            violations.append({"trial": t, "seed": seed, "classCount": count})
        if count > best_count:
            best_count, best_app = count, app
    if violations:
        log.error("%d trials exceeded the bound %d", len(violations), bound)
    return CampaignReport(cfg, histogram, best_count, best_app, violations)


def bound_campaign(cfg: CampaignConfig) -> CampaignReport:
    def trial(t: int) -> tuple[int, Apparatus, int]:
        app = _sample(cfg, t)
        return class_count(app, cfg.stats), app, cfg.trial_seed(t)

    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(trial, range(cfg.trials)))
    else:
        results = [trial(t) for t in range(cfg.trials)]
    return _summarize(cfg, results)


def givens(U: np.ndarray, p: int, q: int, theta: float, phi: float) -> np.ndarray:
    """Mix output modes ``p`` and ``q`` (0-based rows) by a unitary 2x2 rotation."""
    c, s = np.cos(theta), np.sin(theta)
    out = U.copy()
    out[p] = c * U[p] - np.exp(-1j * phi) * s * U[q]
    out[q] = np.exp(1j * phi) * s * U[p] + c * U[q]
    return out


def _row_groups(app: Apparatus, mode: BoundMode) -> list[np.ndarray]:
    """Row sets a Givens step may mix without leaving the apparatus family."""
    if mode is BoundMode.ONE_COPY:
        return [np.arange(app.modes)]
    left_rows = np.flatnonzero(np.abs(app.U[:, 0::2]).max(axis=1) > 0)
    right_rows = np.setdiff1d(np.arange(app.modes), left_rows)
    return [g for g in (left_rows, right_rows) if g.size >= 2]


def _climb(cfg: CampaignConfig, start: Apparatus, budget: int, step_scale: float,
           rng: np.random.Generator) -> tuple[int, Apparatus]:
    U = start.U
    current = class_count(start, cfg.stats)
    groups = _row_groups(start, cfg.mode)
    if not groups:
        return current, start
    for _ in range(budget):
        rows = groups[rng.integers(len(groups))]
        p, q = rng.choice(rows, size=2, replace=False)
        theta = step_scale * rng.standard_normal()
        phi = rng.uniform(0.0, 2 * np.pi)
        trial_U = givens(U, int(p), int(q), theta, phi)
        count = class_count(Apparatus(cfg.n, trial_U), cfg.stats)
        if count >= current:
            U, current = trial_U, count
    return current, Apparatus(cfg.n, U, "hill-climb")


def hill_climb(cfg: CampaignConfig, budget: int, step_scale: float,
               starts: list[Apparatus] | None = None) -> CampaignReport:
    """Random-restart hill climb on class count.

    Restart ``r`` (``cfg.trials`` restarts in total) begins from ``starts[r]``
    when given, otherwise from a Haar sample seeded with ``cfg.seed + r``.
    Moves that do not lower the class count are accepted.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if step_scale < 0:
        raise ValueError("step_scale must be >= 0")
    starts = list(starts or [])
    for s in starts:
        if s.n != cfg.n:
            raise ValueError(f"start apparatus has n={s.n}, config has n={cfg.n}")

    def restart(r: int) -> tuple[int, Apparatus, int]:
        seed = cfg.trial_seed(r)
        start = starts[r] if r < len(starts) else _sample(cfg, r)
        rng = np.random.default_rng([seed, 1])
        count, app = _climb(cfg, start, budget, step_scale, rng)
        return count, app, seed

    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(restart, range(cfg.trials)))
    else:
        results = [restart(r) for r in range(cfg.trials)]
    return _summarize(cfg, results)
