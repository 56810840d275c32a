"""Deterministic synthetic problem instances with prescribed singular spectra.

Randomness contract
-------------------
Every random draw in this package comes from the SplitMix64 counter
generator seeded with a user-supplied 64-bit integer (seed arithmetic is
mod 2^64). Uniforms are the top 53 bits of each output word; standard
normals come from the Box-Muller transform applied to consecutive uniform
pairs. Both are implemented below, so (shape, seed) -> bits is reproducible
on a fixed build and independent of numpy's own generator internals.
Matrices are filled from the stream in row-major order.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .dense_core import DimensionMismatch, _freeze, as_spectrum, gram_schmidt
from .errors import RankDeficient

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def splitmix64(seed: int, count: int) -> np.ndarray:
    """First ``count`` output words of SplitMix64 started at ``seed``."""
    state = seed & _MASK64
    out = np.empty(count, dtype=np.uint64)
    for i in range(count):
        state = (state + _GAMMA) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        out[i] = z ^ (z >> 31)
    return out


def standard_normals(seed: int, count: int) -> np.ndarray:
    """``count`` standard normals via Box-Muller over SplitMix64 uniforms.

    Consecutive word pairs (w1, w2) map to u1 = (top53(w1)+1) * 2^-53 in
    (0, 1] and u2 = top53(w2) * 2^-53 in [0, 1); each pair yields the
    interleaved outputs r*cos(2 pi u2), r*sin(2 pi u2) with
    r = sqrt(-2 ln u1).
    """
    pairs = (count + 1) // 2
    words = splitmix64(seed, 2 * pairs)
    u1 = ((words[0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53
    u2 = (words[1::2] >> np.uint64(11)).astype(np.float64) * 2.0**-53
    r = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    out = np.empty(2 * pairs)
    out[0::2] = r * np.cos(angle)
    out[1::2] = r * np.sin(angle)
    return out[:count]


@dataclass(frozen=True)
class GenSpec:
    """Recipe for one synthetic instance: ambient dim, samples, spectrum, seed."""

    p: int
    n: int
    spectrum: tuple[float, ...]
    seed: int

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"p must be >= 1, got {self.p}")
        if self.n <= self.p:
            raise ValueError(f"need N > p, got N={self.n}, p={self.p}")
        if len(self.spectrum) != self.p:
            raise ValueError(
                f"spectrum length {len(self.spectrum)} does not match p={self.p}"
            )
        as_spectrum(self.spectrum)
        object.__setattr__(self, "spectrum", tuple(float(s) for s in self.spectrum))
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)


@dataclass(frozen=True)
class GeneratedInstance:
    """A generated data matrix together with its ground truth.

    ``data`` is the (p, N) sample matrix; ``principal_basis`` is the p x p
    orthogonal factor whose first d columns span the top-d principal
    subspace for any d (exactly, by construction, whenever the spectrum has
    a gap there); ``gen`` is the recipe that produced both.
    """

    data: np.ndarray
    principal_basis: np.ndarray
    gen: GenSpec


def random_orthonormal(p: int, d: int, seed: int) -> np.ndarray:
    """Deterministic random (p, d) matrix with orthonormal columns.

    Fills p x d with standard normals from the documented stream and
    orthonormalizes. Identical (p, d, seed) gives bit-identical output on a
    fixed build. A Gaussian draw is rank deficient with probability zero;
    should the pivot check ever fire, the draw is retried with seed+1 and a
    warning records the reseed.
    """
    if not 1 <= d <= p:
        raise DimensionMismatch(f"need 1 <= d <= p, got p={p}, d={d}")
    s = int(seed) & _MASK64
    while True:
        G = standard_normals(s, p * d).reshape(p, d)
        try:
            return gram_schmidt(G)
        except RankDeficient:
            warnings.warn(
                f"rank-deficient Gaussian draw at seed {s}; retrying with seed+1"
            )
            s = (s + 1) & _MASK64


def generate_with_spectrum(gen: GenSpec) -> GeneratedInstance:
    """Build R = P diag(spectrum) Q^T with known singular structure.

    P is a random p x p orthogonal matrix (seed), Q a random N x p matrix
    with orthonormal columns (seed+1), so R's singular values equal the
    prescribed spectrum up to rounding and the top-d principal subspace is
    spanned by P's first d columns.
    """
    P = random_orthonormal(gen.p, gen.p, gen.seed)
    Q = random_orthonormal(gen.n, gen.p, (gen.seed + 1) & _MASK64)
    R = (P * np.asarray(gen.spectrum)) @ Q.T
    return GeneratedInstance(data=_freeze(R), principal_basis=P, gen=gen)
