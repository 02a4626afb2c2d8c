"""The max pseudo-summation: CDF products, max-stability, and n-th roots.

Everything here works in alphabet index order and assumes the alphabet is
sorted ascending (the canonical alphabet 0..n-1 is); a table built by
``make_max_lut`` takes the larger index.  Callers with unsorted alphabets
should relabel first.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidityError
from .dist import Distribution
from .lut import Alphabet, LutTable

_TAIL_EPS = 1e-12  # "no mass above x" tolerance


class Cdf:
    """Cumulative probabilities F_k = Pr(X <= x_k) in index order."""

    def __init__(self, F, tol: float = 1e-9):
        arr = np.asarray(F, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise ValidityError("cdf must be a non-empty 1-d sequence")
        if (np.diff(arr) < -tol).any():
            raise ValidityError("cdf must be non-decreasing")
        if arr.min() < -tol or arr.max() > 1.0 + tol:
            raise ValidityError("cdf values must lie in [0, 1]")
        if abs(arr[-1] - 1.0) > tol:
            raise ValidityError(f"cdf must end at 1, got {arr[-1]!r}")
        arr = np.clip(arr, 0.0, 1.0)
        arr[-1] = 1.0
        arr.setflags(write=False)
        self.F = arr

    @property
    def n(self) -> int:
        return int(self.F.size)

    @classmethod
    def from_distribution(cls, p: Distribution) -> "Cdf":
        return cls(np.cumsum(p.p))

    def to_distribution(self) -> Distribution:
        steps = np.diff(self.F, prepend=0.0)
        return Distribution(np.clip(steps, 0.0, None))


def make_max_lut(n: int) -> LutTable:
    """The table x (+) y = max(x, y) on the canonical alphabet."""
    if n < 1:
        raise ValidityError("n must be >= 1")
    idx = np.arange(n)
    return LutTable(Alphabet.canonical(n), np.maximum.outer(idx, idx))


def max_convolve(p: Distribution, q: Distribution) -> Distribution:
    """Law of max(X, Y) for independent X ~ p, Y ~ q: the CDF is the product
    of the CDFs."""
    if p.n != q.n:
        raise ValidityError(f"dimension mismatch: {p.n} != {q.n}")
    Fp = np.cumsum(p.p)
    Fq = np.cumsum(q.p)
    prod = Fp * Fq
    prod[-1] = 1.0
    return Cdf(prod).to_distribution()


def max_stable_set(n: int) -> list[Distribution]:
    """All laws fixed by max-self-convolution: exactly the n point masses."""
    if n < 1:
        raise ValidityError("n must be >= 1")
    return [Distribution.point_mass(n, k) for k in range(n)]


def max_doa(p: Distribution, x: int) -> bool:
    """Whether p is attracted to the point mass at x under max folding:
    no mass above x and positive mass at x."""
    if not 0 <= x < p.n:
        raise ValidityError(f"index {x} out of range for n={p.n}")
    return bool(p.p[x + 1 :].sum() <= _TAIL_EPS and p.p[x] > 0.0)


def max_nth_root(p: Distribution, n_parts: int) -> Distribution:
    """The law whose n_parts-fold max equals p: CDF raised to 1/n_parts.

    Always exists (every law is infinitely divisible under max); zero CDF
    entries stay zero.
    """
    if n_parts < 1:
        raise ValidityError("n_parts must be >= 1")
    F = np.cumsum(p.p)
    F[-1] = 1.0
    root = F ** (1.0 / n_parts)
    return Cdf(root).to_distribution()
