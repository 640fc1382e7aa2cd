"""Detection amplitudes and probabilities for hyper-Bell inputs.

A complete detection event is an unordered pair of detectors ``(i, j)``,
``i <= j``, 1-based. The amplitude of that event for Bell state ``B`` is the
vacuum projection ``<0| c_j c_i |B>`` with ``c_i = sum_m conj(U[i, m]) a_m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, NamedTuple

import numpy as np

from . import kernels
from .apparatus import Apparatus
from .bellcore import (
    BellLabel,
    LRVector,
    Statistics,
    enumerate_bell_labels,
    mode_count,
    pairing,
    sign,
)

DEFAULT_EPS = 1e-9


class OutcomePair(NamedTuple):
    i: int
    j: int

    @classmethod
    def of(cls, i: int, j: int) -> OutcomePair:
        return cls(min(i, j), max(i, j))

    def __str__(self) -> str:
        return f"({self.i},{self.j})"


def all_outcomes(d: int) -> list[OutcomePair]:
    """Every unordered detector pair for ``d`` detectors, row-major ``i <= j``."""
    return [OutcomePair(i, j) for i in range(1, d + 1) for j in range(i, d + 1)]


def outcome_column(out: OutcomePair, d: int) -> int:
    """Column of ``out`` in the amplitude arrays produced by the kernels."""
    i0, j0 = out.i - 1, out.j - 1
    return i0 * d - i0 * (i0 - 1) // 2 + (j0 - i0)


def _check(app: Apparatus, B: BellLabel, out: OutcomePair | None = None) -> None:
    if B.n != app.n:
        raise ValueError(f"label {B} has n={B.n}, apparatus has n={app.n}")
    if out is not None:
        d = app.modes
        if not (1 <= out.i <= d and 1 <= out.j <= d):
            raise ValueError(f"outcome {tuple(out)} out of range 1..{d}")


def outcome_amplitude(app: Apparatus, stats: Statistics, B: BellLabel, out) -> complex:
    """``<0| c_j c_i |B>`` evaluated term by term from the Bell pairing."""
    out = OutcomePair.of(*out)
    _check(app, B, out)
    stats = Statistics(stats)
    if stats is Statistics.FERMION and out.i == out.j:
        return 0j
    Uc = app.U.conj()
    i, j = out.i - 1, out.j - 1
    e = stats.exchange_sign
    acc = 0j
    for s in range(1, 2**app.n + 1):
        left = 2 * s - 2
        right = 2 * pairing(B, s) - 1
        term = Uc[i, left] * Uc[j, right] + e * Uc[j, left] * Uc[i, right]
        acc += -term if sign(B, s) else term
    return complex(acc * 2.0 ** (-app.n / 2))


def _probability(amp: complex | np.ndarray, double: bool | np.ndarray, stats: Statistics):
    p = np.abs(amp) ** 2
    if stats is Statistics.BOSON:
        p = p / np.where(double, 2.0, 1.0)
    return p


def outcome_probability(app: Apparatus, stats: Statistics, B: BellLabel, out) -> float:
    out = OutcomePair.of(*out)
    stats = Statistics(stats)
    amp = outcome_amplitude(app, stats, B, out)
    return float(_probability(amp, out.i == out.j, stats))


def signature_support(app: Apparatus, stats: Statistics, B: BellLabel,
                      eps: float = DEFAULT_EPS) -> frozenset[OutcomePair]:
    if eps <= 0:
        raise ValueError("eps must be positive")
    return signature_table(app, stats, eps).support(B)


@dataclass(frozen=True, eq=False)
class SignatureTable:
    """Amplitudes for every Bell label (rows) and outcome pair (columns)."""

    n: int
    stats: Statistics
    amplitudes: np.ndarray
    eps: float = DEFAULT_EPS
    labels: list[BellLabel] = field(init=False, repr=False)
    outcomes: list[OutcomePair] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", enumerate_bell_labels(self.n))
        object.__setattr__(self, "outcomes", all_outcomes(mode_count(self.n)))
        if self.amplitudes.shape != (len(self.labels), len(self.outcomes)):
            raise ValueError(
                f"table shape {self.amplitudes.shape} does not cover all "
                f"{len(self.labels)} labels x {len(self.outcomes)} outcomes"
            )

    @cached_property
    def support_mask(self) -> np.ndarray:
        return np.abs(self.amplitudes) > self.eps

    @cached_property
    def probabilities(self) -> np.ndarray:
        double = np.array([o.i == o.j for o in self.outcomes])
        return _probability(self.amplitudes, double[None, :], self.stats)

    def row(self, B: BellLabel) -> np.ndarray:
        return self.amplitudes[B.index]

    def support(self, B: BellLabel) -> frozenset[OutcomePair]:
        return frozenset(self.outcomes[k] for k in np.flatnonzero(self.support_mask[B.index]))

    def rows(self) -> Iterator[tuple[BellLabel, OutcomePair, complex, float]]:
        """Nonzero entries in label order, then outcome order."""
        for B in self.labels:
            for k in np.flatnonzero(self.support_mask[B.index]):
                yield B, self.outcomes[k], complex(self.amplitudes[B.index, k]), \
                    float(self.probabilities[B.index, k])


def signature_table(app: Apparatus, stats: Statistics, eps: float = DEFAULT_EPS) -> SignatureTable:
    stats = Statistics(stats)
    amps = kernels.amplitude_table(app.U, app.n, stats.exchange_sign)
    if stats is Statistics.FERMION:
        d = app.modes
        diag = [outcome_column(OutcomePair(i, i), d) for i in range(1, d + 1)]
        amps[:, diag] = 0.0
    return SignatureTable(app.n, stats, amps, eps)


def expected_click_rate(app: Apparatus, B: BellLabel, i: int,
                        stats: Statistics = Statistics.BOSON) -> float:
    """Mean number of particles registered by detector ``i`` for input ``B``.

    Summed from outcome probabilities, counting a double click twice.
    """
    _check(app, B)
    d = app.modes
    if not 1 <= i <= d:
        raise ValueError(f"detector {i} out of range 1..{d}")
    stats = Statistics(stats)
    total = 0.0
    for j in range(1, d + 1):
        p = outcome_probability(app, stats, B, (i, j))
        total += 2 * p if i == j else p
    return total


def detection_signature_vector(app: Apparatus, stats: Statistics, out) -> LRVector:
    """L-R projection of the (anti)symmetrized output pair ``|i>|j>``.

    Built in the full two-particle space and read off against the
    (anti)symmetrized ``|chi_a, L>|chi_b, R>`` basis. Independent of
    :func:`outcome_amplitude`; the two agree up to one constant for ``i != j``
    and another for ``i == j``.
    """
    out = OutcomePair.of(*out)
    d = app.modes
    if not (1 <= out.i <= d and 1 <= out.j <= d):
        raise ValueError(f"outcome {tuple(out)} out of range 1..{d}")
    e = Statistics(stats).exchange_sign
    ui, uj = app.U[out.i - 1], app.U[out.j - 1]
    prod = np.outer(ui, uj)
    if out.i == out.j:
        state = prod if e == 1 else np.zeros_like(prod)
    else:
        state = (prod + e * prod.T) / np.sqrt(2.0)
    parity = np.arange(d) % 2
    state = np.where(parity[:, None] != parity[None, :], state, 0.0)
    # overlap with (|aL>|bR> + e|bR>|aL>)/sqrt2
    coeffs = (state[0::2, 1::2] + e * state[1::2, 0::2].T) / np.sqrt(2.0)
    return LRVector(app.n, coeffs.reshape(-1))
