"""Linear-evolution apparatuses as unitaries over single-particle input modes.

Row ``i`` of ``U`` is output mode (detector) ``i`` written in input-mode
coordinates: ``|i> = sum_m U[i, m] |phi_m>``. Rows and columns are 1-based in
files and reports, 0-based in the arrays.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .bellcore import MAX_N, check_n, mode_count

EXACT_TOL = 1e-12
SAMPLED_TOL = 1e-9


class ApparatusFileError(ValueError):
    """Base class for problems reading an apparatus file."""


class ApparatusParseError(ApparatusFileError):
    pass


class ApparatusDimensionError(ApparatusFileError):
    pass


class UnitarityError(ApparatusFileError):
    pass


@dataclass(frozen=True)
class UnitarityReport:
    passed: bool
    max_deviation: float
    tol: float

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class LRSplit:
    """Decomposition ``|i> = alpha |l> + beta |r>`` of one output mode.

    ``l`` holds coefficients on the left modes ``1, 3, 5, ...`` and ``r`` on the
    right modes ``2, 4, 6, ...``; each is unit-norm, or zero when its
    coefficient vanishes.
    """

    alpha: complex
    l: np.ndarray
    beta: complex
    r: np.ndarray


@dataclass(frozen=True, eq=False)
class Apparatus:
    n: int
    U: np.ndarray
    name: str = ""

    def __post_init__(self):
        check_n(self.n)
        U = np.array(self.U, dtype=complex)
        d = mode_count(self.n)
        if U.shape != (d, d):
            raise ApparatusDimensionError(
                f"apparatus for n={self.n} needs a {d}x{d} matrix, got {U.shape}"
            )
        U.setflags(write=False)
        object.__setattr__(self, "U", U)

    @property
    def modes(self) -> int:
        return self.U.shape[0]

    def entry(self, i: int, m: int) -> complex:
        """``U_{im}`` with 1-based indices."""
        return complex(self.U[i - 1, m - 1])

    def is_channel_separated(self, tol: float = 0.0) -> bool:
        """True when no output mode mixes the left and right channels."""
        left = np.abs(self.U[:, 0::2]).max(axis=1) > tol
        right = np.abs(self.U[:, 1::2]).max(axis=1) > tol
        return not np.any(left & right)

    def __eq__(self, other):
        if not isinstance(other, Apparatus):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.U, other.U)

    __hash__ = None


def check_unitary(app: Apparatus | np.ndarray, tol: float = SAMPLED_TOL) -> UnitarityReport:
    U = app.U if isinstance(app, Apparatus) else np.asarray(app, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {U.shape}")
    dev = float(np.max(np.abs(U @ U.conj().T - np.eye(U.shape[0]))))
    return UnitarityReport(dev <= tol, dev, tol)


def hadamard_lr(n: int) -> Apparatus:
    """50/50 interference of ``|chi_s, L>`` and ``|chi_s, R>`` for every ``s``."""
    n = check_n(n)
    block = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    return Apparatus(n, np.kron(np.eye(2**n), block), "hadamard")


def projective_separate(n: int) -> Apparatus:
    n = check_n(n)
    return Apparatus(n, np.eye(mode_count(n)), "separate-projective")


def uopt_n1() -> Apparatus:
    U = 0.5 * np.array([
        [1, 1, 1, 1],
        [1, -1, 1, -1],
        [1, 1, -1, -1],
        [1, -1, -1, 1],
    ])
    return Apparatus(1, U, "uopt4")


def _value_hadamard(n: int, subset: Iterable[int]) -> np.ndarray:
    """``2**n`` square matrix applying H to the listed variables of ``chi_s``."""
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    out = np.eye(1)
    # kron builds most-significant factor first; variable v is bit v of s-1
    for v in reversed(range(n)):
        out = np.kron(out, h if v in subset else np.eye(2))
    return out


def diagonal_rotation(n: int, subset: Iterable[int]) -> Apparatus:
    """Measure the variables in ``subset`` in the (|0> +- |1>)/sqrt2 basis.

    The same single-variable Hadamard acts on both channels, so the result is
    channel-block-diagonal.
    """
    n = check_n(n)
    subset = set(subset)
    bad = [v for v in subset if not (isinstance(v, (int, np.integer)) and 0 <= v < n)]
    if bad:
        raise ValueError(f"variable indices {sorted(bad)} out of range 0..{n - 1}")
    W = _value_hadamard(n, subset)
    # channel is the fast index: mode 2(s-1)+c
    return Apparatus(n, np.kron(W, np.eye(2)), f"diagonal:{','.join(map(str, sorted(subset)))}")


def compose(outer: Apparatus, inner: Apparatus) -> Apparatus:
    """Apply ``inner`` first, then ``outer``: ``U = outer.U @ inner.U``."""
    if outer.n != inner.n:
        raise ApparatusDimensionError(f"cannot compose n={outer.n} with n={inner.n}")
    name = "+".join(x for x in (outer.name, inner.name) if x)
    return Apparatus(outer.n, outer.U @ inner.U, name)


def separate(uL: np.ndarray, uR: np.ndarray, n: int) -> Apparatus:
    """Channel-separated apparatus from independent left and right unitaries.

    Output mode ``2t - 1`` is row ``t`` of ``uL`` on the left modes and output
    mode ``2t`` is row ``t`` of ``uR`` on the right modes.
    """
    n = check_n(n)
    dim = 2**n
    blocks = []
    for side, u in (("left", uL), ("right", uR)):
        u = np.asarray(u, dtype=complex)
        if u.shape != (dim, dim):
            raise ApparatusDimensionError(f"{side} block must be {dim}x{dim}, got {u.shape}")
        if not check_unitary(u, SAMPLED_TOL):
            raise UnitarityError(f"{side} block is not unitary")
        blocks.append(u)
    U = np.zeros((2 * dim, 2 * dim), dtype=complex)
    U[0::2, 0::2] = blocks[0]
    U[1::2, 1::2] = blocks[1]
    return Apparatus(n, U, "separate")


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed ``dim x dim`` unitary (Gaussian matrix + QR phase fix)."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def haar_random(n: int, seed: int) -> Apparatus:
    n = check_n(n)
    rng = np.random.default_rng(seed)
    return Apparatus(n, haar_unitary(mode_count(n), rng), f"haar:{seed}")


def haar_separate(n: int, seed: int) -> Apparatus:
    """Random channel-separated apparatus with independent Haar blocks."""
    n = check_n(n)
    rng = np.random.default_rng(seed)
    uL = haar_unitary(2**n, rng)
    uR = haar_unitary(2**n, rng)
    app = separate(uL, uR, n)
    return Apparatus(n, app.U, f"haar-separate:{seed}")


def lr_split(app: Apparatus, i: int) -> LRSplit:
    if not 1 <= i <= app.modes:
        raise ValueError(f"mode index {i} out of range 1..{app.modes}")
    row = app.U[i - 1]
    left, right = row[0::2], row[1::2]
    a, b = np.linalg.norm(left), np.linalg.norm(right)
    l = left / a if a > 0 else np.zeros_like(left)
    r = right / b if b > 0 else np.zeros_like(right)
    return LRSplit(complex(a), l, complex(b), r)


def phase_shifted(app: Apparatus, phases: np.ndarray) -> Apparatus:
    """Left-multiply by ``diag(exp(i * phases))``: re-phase each detector mode."""
    return Apparatus(app.n, np.exp(1j * np.asarray(phases))[:, None] * app.U, app.name)


def apparatus_to_dict(app: Apparatus) -> dict:
    return {
        "n": app.n,
        "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in app.U],
    }


def dumps_apparatus(app: Apparatus) -> str:
    """Serialize with every entry printed to 17 significant digits."""

    def num(x: float) -> str:
        text = f"{x:.17g}"
        # keep JSON floats recognisable as floats
        return text if any(c in text for c in ".eEn") else text + ".0"

    rows = []
    for row in app.U:
        entries = ", ".join(f"[{num(z.real)}, {num(z.imag)}]" for z in row)
        rows.append(f"    [{entries}]")
    return '{\n  "n": %d,\n  "matrix": [\n%s\n  ]\n}\n' % (app.n, ",\n".join(rows))


def loads_apparatus(text: str, tol: float = SAMPLED_TOL, max_n: int = MAX_N) -> Apparatus:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ApparatusParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "n" not in doc or "matrix" not in doc:
        raise ApparatusParseError("apparatus document needs fields 'n' and 'matrix'")
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise ApparatusParseError(f"'n' must be an integer, got {n!r}")
    if not 1 <= n <= max_n:
        raise ApparatusDimensionError(f"n={n} out of range 1..{max_n}")
    rows = doc["matrix"]
    d = mode_count(n)
    if not isinstance(rows, list) or len(rows) != d or any(
        not isinstance(row, list) or len(row) != d for row in rows
    ):
        shape = (len(rows), len(rows[0]) if rows and isinstance(rows[0], list) else 0) \
            if isinstance(rows, list) else "?"
        raise ApparatusDimensionError(f"n={n} needs a {d}x{d} matrix, got {shape}")
    try:
        U = np.array([[complex(float(re), float(im)) for re, im in row] for row in rows])
    except (TypeError, ValueError) as exc:
        raise ApparatusParseError(f"matrix entries must be [re, im] pairs: {exc}") from exc
    report = check_unitary(U, tol)
    if not report:
        raise UnitarityError(
            f"matrix is not unitary: max |UU^dag - I| = {report.max_deviation:.3g} > {tol:g}"
        )
    return Apparatus(n, U)


def save_apparatus(app: Apparatus, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_apparatus(app))


def load_apparatus(path: str | os.PathLike, tol: float = SAMPLED_TOL, max_n: int = MAX_N) -> Apparatus:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except UnicodeDecodeError as exc:
        raise ApparatusParseError(f"{path}: not UTF-8 text") from exc
    app = loads_apparatus(text, tol, max_n)
    return Apparatus(app.n, app.U, os.fspath(path))
