"""Distinguishable Bell-state classes.

Two labels are confusable when some detection outcome has nonzero amplitude
for both. Classes are the connected components of that relation: an outcome
shared by two states certifies neither, and the closure follows.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .apparatus import Apparatus
from .bellcore import BellLabel, Statistics, enumerate_bell_labels
from .detection import DEFAULT_EPS, OutcomePair, SignatureTable, signature_table


class BoundMode(str, Enum):
    ONE_COPY = "one-copy"
    SEPARATE_CHANNEL = "separate-channel"


def class_bound(n: int, mode: BoundMode | str = BoundMode.ONE_COPY) -> int:
    """Largest number of classes any apparatus of the given kind can reach."""
    mode = BoundMode(mode)
    return 2 ** (n + 1) - 1 if mode is BoundMode.ONE_COPY else 2**n


class UnionFind:
    """Disjoint sets over ``0..size-1``; the smallest index is always the root."""

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)

    def roots(self) -> list[int]:
        return [self.find(x) for x in range(len(self.parent))]


@dataclass(frozen=True)
class Partition:
    n: int
    classes: tuple[tuple[BellLabel, ...], ...]

    @property
    def class_count(self) -> int:
        return len(self.classes)

    @property
    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    def class_of(self, label: BellLabel) -> int:
        for k, members in enumerate(self.classes):
            if label in members:
                return k
        raise KeyError(label)

    def is_complete(self) -> bool:
        return all(len(c) == 1 for c in self.classes)

    def refines(self, other: Partition) -> bool:
        """True when every class here sits inside a single class of ``other``."""
        return all(len({other.class_of(b) for b in c}) == 1 for c in self.classes)

    def as_sets(self) -> list[frozenset[BellLabel]]:
        return [frozenset(c) for c in self.classes]


def partition_from_roots(n: int, roots) -> Partition:
    labels = enumerate_bell_labels(n)
    groups: dict[int, list[BellLabel]] = defaultdict(list)
    for label, root in zip(labels, roots):
        groups[int(root)].append(label)
    # labels are in order, so groups inherit order of their smallest member
    ordered = sorted(groups.values(), key=lambda members: members[0].index)
    return Partition(n, tuple(tuple(m) for m in ordered))


def partition_classes(table: SignatureTable) -> Partition:
    if table.amplitudes.shape[0] != 4**table.n:
        raise ValueError(f"table covers {table.amplitudes.shape[0]} of {4**table.n} labels")
    roots = kernels.support_components(table.amplitudes, table.eps)
    return partition_from_roots(table.n, roots)


def apparatus_partition(app: Apparatus, stats: Statistics,
                        eps: float = DEFAULT_EPS) -> Partition:
    return partition_classes(signature_table(app, stats, eps))


def class_count(app: Apparatus, stats: Statistics, eps: float = DEFAULT_EPS) -> int:
    """Number of classes, skipping table and partition objects."""
    amps = kernels.amplitude_table(app.U, app.n, Statistics(stats).exchange_sign)
    if Statistics(stats) is Statistics.FERMION:
        d = app.modes
        idx = np.arange(d)
        amps[:, idx * d - idx * (idx - 1) // 2] = 0.0
    return int(np.unique(kernels.support_components(amps, eps)).size)


def _confusable(table: SignatureTable) -> np.ndarray:
    s = table.support_mask.astype(np.int64)
    return (s @ s.T) > 0


def two_copy_partition(app1: Apparatus, app2: Apparatus, stats: Statistics,
                       eps: float = DEFAULT_EPS) -> Partition:
    """Classes when one copy goes through ``app1`` and another through ``app2``.

    Two labels are joined only if they share an outcome in both apparatuses.
    """
    if app1.n != app2.n:
        raise ValueError(f"apparatus n mismatch: {app1.n} vs {app2.n}")
    edges = _confusable(signature_table(app1, stats, eps)) & \
        _confusable(signature_table(app2, stats, eps))
    uf = UnionFind(edges.shape[0])
    for a, b in zip(*np.nonzero(np.triu(edges, 1))):
        uf.union(int(a), int(b))
    return partition_from_roots(app1.n, uf.roots())


@dataclass(frozen=True)
class BoundReport:
    passed: bool
    mode: BoundMode
    n: int
    class_count: int
    bound: int
    class_sizes: list[int]

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "mode": self.mode.value,
            "n": self.n,
            "classCount": self.class_count,
            "bound": self.bound,
            "classSizes": self.class_sizes,
        }


def verify_bound(p: Partition, n: int, mode: BoundMode | str = BoundMode.ONE_COPY) -> BoundReport:
    if p.n != n:
        raise ValueError(f"partition is for n={p.n}, not n={n}")
    mode = BoundMode(mode)
    bound = class_bound(n, mode)
    return BoundReport(p.class_count <= bound, mode, n, p.class_count, bound, p.class_sizes)


@dataclass(frozen=True)
class ClassSignature:
    members: tuple[BellLabel, ...]
    owned: frozenset[OutcomePair]
    shared: frozenset[OutcomePair]


def class_signature_report(table: SignatureTable, p: Partition) -> list[ClassSignature]:
    """Outcomes each class can produce, split into ones unique to it and the rest."""
    mask = table.support_mask
    per_class = [np.any(mask[[b.index for b in members]], axis=0) for members in p.classes]
    hits = np.sum(per_class, axis=0)
    report = []
    for members, reach in zip(p.classes, per_class):
        owned = frozenset(table.outcomes[k] for k in np.flatnonzero(reach & (hits == 1)))
        shared = frozenset(table.outcomes[k] for k in np.flatnonzero(reach & (hits > 1)))
        report.append(ClassSignature(members, owned, shared))
    return report
