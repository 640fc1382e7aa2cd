"""Mode indexing and the hyper-Bell basis.

Single-particle input modes are numbered ``m = 1 .. 2**(n+1)``: odd ``m`` is
the left channel, even ``m`` the right channel, and ``s = ceil(m / 2)`` picks
the value string ``chi_s``. Bit ``v`` of ``s - 1`` is the eigenvalue of
variable ``v`` (``v = 0`` least significant).

Two-particle states with one particle per channel are stored as
:class:`LRVector` objects, a flat complex array indexed by ``(a, b)`` with
``a`` the left value string and ``b`` the right value string (both 1-based
externally, ``(a - 1) * 2**n + (b - 1)`` internally).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import product

import numpy as np

MAX_N = 8

TOKENS = ("phi+", "phi-", "psi+", "psi-")
UNICODE_TOKENS = ("Φ+", "Φ−", "Ψ+", "Ψ−")


class Statistics(str, Enum):
    BOSON = "boson"
    FERMION = "fermion"

    @property
    def exchange_sign(self) -> int:
        return 1 if self is Statistics.BOSON else -1


def check_n(n: int, max_n: int = MAX_N) -> int:
    """Validate a variable count and return it as ``int``."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"n must be an integer, got {type(n).__name__}")
    if not 1 <= n <= max_n:
        raise ValueError(f"n must lie in 1..{max_n}, got {n}")
    return int(n)


def mode_count(n: int) -> int:
    return 2 ** (n + 1)


def channel(m: int) -> str:
    """Return ``"L"`` or ``"R"`` for a 1-based mode index."""
    return "L" if m % 2 == 1 else "R"


def value_string(m: int) -> int:
    """1-based value-string index ``s`` of mode ``m``."""
    return (m + 1) // 2


def left_mode(s: int) -> int:
    return 2 * s - 1


def right_mode(s: int) -> int:
    return 2 * s


def bits(s: int, n: int) -> tuple[int, ...]:
    """Eigenvalues of variables ``0 .. n-1`` for value string ``s``."""
    return tuple(((s - 1) >> v) & 1 for v in range(n))


@dataclass(frozen=True, order=True)
class BellLabel:
    """A hyper-Bell state as a per-variable token sequence.

    ``tokens[v]`` is 0, 1, 2 or 3 for Phi+, Phi-, Psi+, Psi- on variable ``v``.
    Ordering is lexicographic on ``tokens``, so variable 0 is most significant.
    """

    tokens: tuple[int, ...]

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("a Bell label needs at least one variable")
        if any(t not in (0, 1, 2, 3) for t in self.tokens):
            raise ValueError(f"tokens must be in 0..3, got {self.tokens}")

    @property
    def n(self) -> int:
        return len(self.tokens)

    @cached_property
    def pairing_mask(self) -> int:
        return sum(1 << v for v, t in enumerate(self.tokens) if t >= 2)

    @cached_property
    def sign_mask(self) -> int:
        return sum(1 << v for v, t in enumerate(self.tokens) if t % 2 == 1)

    @property
    def index(self) -> int:
        """Position of this label in :func:`enumerate_bell_labels` order."""
        idx = 0
        for t in self.tokens:
            idx = 4 * idx + t
        return idx

    @classmethod
    def from_masks(cls, n: int, pairing_mask: int, sign_mask: int) -> BellLabel:
        return cls(tuple(
            2 * ((pairing_mask >> v) & 1) + ((sign_mask >> v) & 1) for v in range(n)
        ))

    @classmethod
    def from_index(cls, n: int, index: int) -> BellLabel:
        if not 0 <= index < 4**n:
            raise ValueError(f"label index {index} out of range for n={n}")
        tokens = []
        for _ in range(n):
            tokens.append(index % 4)
            index //= 4
        return cls(tuple(reversed(tokens)))

    @classmethod
    def parse(cls, text: str) -> BellLabel:
        """Parse ``"phi+ x psi-"`` (or the Unicode form) into a label."""
        parts = [p for p in text.replace("⊗", " x ").split() if p != "x"]
        lookup = {name: k for k, name in enumerate(TOKENS)}
        lookup.update({name: k for k, name in enumerate(UNICODE_TOKENS)})
        try:
            return cls(tuple(lookup[p if p in lookup else p.lower()] for p in parts))
        except KeyError as exc:
            raise ValueError(f"cannot parse Bell label {text!r}") from exc

    def ascii(self) -> str:
        return " x ".join(TOKENS[t] for t in self.tokens)

    def unicode(self) -> str:
        return "⊗".join(UNICODE_TOKENS[t] for t in self.tokens)

    def __str__(self) -> str:
        return self.ascii()


def enumerate_bell_labels(n: int) -> list[BellLabel]:
    """All ``4**n`` hyper-Bell labels in lexicographic token order."""
    n = check_n(n)
    return [BellLabel(t) for t in product(range(4), repeat=n)]


def pairing(label: BellLabel, s: int) -> int:
    """Right-channel partner of left value string ``s`` in ``label``."""
    return ((s - 1) ^ label.pairing_mask) + 1


def sign(label: BellLabel, s: int) -> int:
    """0 or 1: the exponent of -1 on the ``s`` term of ``label``."""
    return bin((s - 1) & label.sign_mask).count("1") & 1


@dataclass(frozen=True)
class LRVector:
    """Amplitudes over ``|chi_a, L>|chi_b, R>`` product states."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (4**self.n,):
            raise ValueError(f"LRVector for n={self.n} needs {4**self.n} entries, got {amps.shape}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def __getitem__(self, ab: tuple[int, int]) -> complex:
        a, b = ab
        return complex(self.amplitudes[(a - 1) * 2**self.n + (b - 1)])

    def as_matrix(self) -> np.ndarray:
        """Amplitudes reshaped so that ``[a-1, b-1]`` is the ``(a, b)`` entry."""
        return self.amplitudes.reshape(2**self.n, 2**self.n)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def bell_vector(label: BellLabel) -> LRVector:
    n = label.n
    dim = 2**n
    amps = np.zeros(dim * dim, dtype=complex)
    scale = 2.0 ** (-n / 2)
    for s in range(1, dim + 1):
        r = pairing(label, s)
        amps[(s - 1) * dim + (r - 1)] = (-1) ** sign(label, s) * scale
    return LRVector(n, amps)


def inner_product(u: LRVector, v: LRVector) -> complex:
    """Hermitian inner product ``<u|v>``."""
    if u.amplitudes.shape != v.amplitudes.shape:
        raise ValueError(
            f"dimension mismatch: {u.amplitudes.shape[0]} vs {v.amplitudes.shape[0]}"
        )
    return complex(np.vdot(u.amplitudes, v.amplitudes))


def first_quantized(vec: LRVector, stats: Statistics) -> np.ndarray:
    """Embed an L-R state in the full two-particle space and (anti)symmetrize.

    Returns a ``(2**(n+1), 2**(n+1))`` array ``psi[x, y]`` holding the amplitude
    for particle 1 in mode ``x + 1`` and particle 2 in mode ``y + 1``.
    """
    n = vec.n
    d = mode_count(n)
    product_state = np.zeros((d, d), dtype=complex)
    # left mode of value a sits at 0-based index 2(a-1), right mode at 2(b-1)+1
    product_state[0::2, 1::2] = vec.as_matrix()
    return (product_state + stats.exchange_sign * product_state.T) / np.sqrt(2.0)


def reduced_density(label: BellLabel, stats: Statistics = Statistics.BOSON) -> np.ndarray:
    """Single-particle reduced density matrix of the (anti)symmetrized state.

    Traces out particle 1 of :func:`first_quantized` applied to the Bell vector.
    """
    psi = first_quantized(bell_vector(label), Statistics(stats))
    # rho_2[y, y'] = sum_x psi[x, y] conj(psi[x, y'])
    return psi.T @ psi.conj()
