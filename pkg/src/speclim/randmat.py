"""Complex Gaussian random-matrix primitives.

Everything random in the package flows through :class:`SeedSpec`, so each
draw is a pure function of (root_seed, stream_index) and independent trials
never share generator state. Channel entries are circularly symmetric
complex Gaussian with unit variance: Var(Re) = Var(Im) = 1/2, E[|g|^2] = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import NumericalError

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15  # 2^64 / golden ratio, odd


def mix64(z: int) -> int:
    """SplitMix64 finalizer. Bijective on 64-bit integers."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


@dataclass(frozen=True)
class SeedSpec:
    """Addressable random stream: a 64-bit root seed plus a stream index.

    The derived seed is mix64(root XOR stream_index * golden), so distinct
    stream indices give distinct derived seeds. ``substream`` chains the
    derivation, which lets callers carve hierarchical, collision-free
    streams out of a single root seed (per trial, per draw, ...).
    """

    root_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not (0 <= self.root_seed <= _MASK64):
            raise ValueError("root_seed must fit in 64 unsigned bits")
        if not (0 <= self.stream_index <= _MASK64):
            raise ValueError("stream_index must fit in 64 unsigned bits")

    def derived(self) -> int:
        return mix64(self.root_seed ^ ((self.stream_index * _GOLDEN) & _MASK64))

    def substream(self, index: int) -> "SeedSpec":
        return SeedSpec(self.derived(), index)

    def generator(self) -> np.random.Generator:
        # Philox is counter-based, so streams are cheap and contention-free.
        return np.random.Generator(np.random.Philox(key=self.derived()))


class SvdResult(NamedTuple):
    """Full SVD with squared singular values sorted descending."""

    left: np.ndarray      # U, rows x rows unitary
    squared: np.ndarray   # squared singular values, length min(rows, cols)
    right: np.ndarray    # V, cols x cols unitary (columns are right vectors)


def _as_complex_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError("expected a 2-D matrix with at least one row and column")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix entries must be finite")
    return m


def sample_cn_matrix(rows: int, cols: int, seed: SeedSpec) -> np.ndarray:
    """Sample a rows x cols matrix of IID CN(0, 1) entries."""
    if rows < 1 or cols < 1:
        raise ValueError(f"matrix dimensions must be positive, got {rows}x{cols}")
    rng = seed.generator()
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return (re + 1j * im) / np.sqrt(2.0)


def svd(m) -> SvdResult:
    """Full SVD returning squared singular values.

    The contract is the reconstruction tolerance (U diag(s) V^H recovers the
    input to 1e-10 relative Frobenius error), not a particular algorithm.
    """
    m = _as_complex_matrix(m)
    u, s, vh = np.linalg.svd(m, full_matrices=True)
    return SvdResult(u, s * s, vh.conj().T)


def reconstruct(result: SvdResult) -> np.ndarray:
    """Reassemble U Sigma V^H from an SvdResult."""
    s = np.sqrt(result.squared)
    r = s.size
    return (result.left[:, :r] * s) @ result.right[:, :r].conj().T


def isotropic_unit_vector(dim: int, seed: SeedSpec) -> np.ndarray:
    """Draw g with IID CN(0,1) entries and return g / ||g||."""
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    g = sample_cn_matrix(dim, 1, seed).ravel()
    return g / np.linalg.norm(g)


def quadratic_form_inverse(u, a) -> float:
    """Evaluate u^H A^{-1} u for Hermitian positive-definite A.

    Computed through a Cholesky solve rather than an explicit inverse:
    with A = L L^H and y = L^{-1} u the value is ||y||^2, which is real and
    non-negative by construction.
    """
    u = np.asarray(u, dtype=np.complex128).ravel()
    a = np.asarray(a, dtype=np.complex128)
    if a.shape != (u.size, u.size):
        raise ValueError(f"dimension mismatch: u has {u.size}, a is {a.shape}")
    try:
        chol = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Cholesky factorization failed: {exc}") from exc
    y = scipy.linalg.solve_triangular(chol, u, lower=True)
    val = float(np.real(np.vdot(y, y)))
    if not np.isfinite(val):
        raise NumericalError("quadratic form evaluated to a non-finite value")
    return val


def wishart_squared_singular_values(n_rows: int, k_cols: int, seed: SeedSpec) -> np.ndarray:
    """Squared singular values of G / sqrt(n_rows), G being n_rows x k_cols CN(0,1).

    These are the nonzero eigenvalues of the normalized Gram matrix
    G G^H / n_rows, returned sorted descending. Requires the tall-matrix
    convention k_cols <= n_rows.
    """
    if k_cols < 1:
        raise ValueError("k_cols must be at least 1")
    if n_rows < k_cols:
        raise ValueError(f"need n_rows >= k_cols, got {n_rows} < {k_cols}")
    g = sample_cn_matrix(n_rows, k_cols, seed)
    s = np.linalg.svd(g, compute_uv=False)
    return np.sort(s * s)[::-1] / n_rows
