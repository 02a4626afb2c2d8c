"""Cyclic pseudo-summation through a relabeling permutation.

The table is modular addition conjugated by a permutation s:
``x (+) y = s_inv[(s[x] + s[y]) % N]``.  Under the relabeling Y = s(X) every
law gets a characteristic function (the DFT of the relabeled probability
vector), multiplicative under convolution, which drives everything here:
stable laws are exactly the uniform laws on subgroups (pushed through s_inv),
domains of attraction are read off the spectrum, and infinitely divisible
laws factor as shift (+) subgroup-uniform (+) compound Poisson.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ValidityError
from .dist import Distribution, convolve, power, tv_distance
from .lut import Alphabet, LutTable

ZERO_EPS = 1e-9    # |spectrum value| at or below this counts as a true zero
_MASS_EPS = 1e-12  # probability-mass comparisons against 0 and 1
_COMBO_CAP = 65536  # exhaustive log-branch search bound; heuristic beyond


class Permutation:
    """A bijection s of 0..n-1 together with its inverse."""

    def __init__(self, s):
        arr = np.asarray(s, dtype=np.intp)
        if arr.ndim != 1 or arr.size < 1:
            raise ValidityError("permutation must be a non-empty 1-d sequence")
        if not np.array_equal(np.sort(arr), np.arange(arr.size)):
            raise ValidityError("permutation must be a bijection on [0, n)")
        inv = np.empty_like(arr)
        inv[arr] = np.arange(arr.size)
        arr.setflags(write=False)
        inv.setflags(write=False)
        self.s = arr
        self.inv = inv

    @property
    def n(self) -> int:
        return int(self.s.size)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n))

    @classmethod
    def from_json(cls, doc: dict) -> "Permutation":
        try:
            n = int(doc["n"])
            s = doc["s"]
        except (KeyError, TypeError) as exc:
            raise ValidityError(f"permutation document missing field: {exc}") from exc
        if len(s) != n:
            raise ValidityError(f"permutation length {len(s)} does not match n={n}")
        return cls(s)

    def to_json(self) -> dict:
        return {"n": self.n, "s": self.s.tolist()}

    def __repr__(self):
        return f"Permutation({self.s.tolist()})"


class Spectrum:
    """Characteristic values f(0..n-1) of a law on the relabeled cycle.

    Valid spectra have f(0) = 1, modulus at most 1, and the conjugate
    symmetry f(t) = conj(f(n-t)) of real probability vectors.
    """

    def __init__(self, f, tol: float = 1e-9):
        arr = np.asarray(f, dtype=complex)
        if arr.ndim != 1 or arr.size < 1:
            raise ValidityError("spectrum must be a non-empty 1-d sequence")
        if abs(arr[0] - 1.0) > tol:
            raise ValidityError(f"spectrum must have f(0) = 1, got {arr[0]!r}")
        if (np.abs(arr) > 1.0 + 1e-12).any():
            raise ValidityError("spectrum values must have modulus at most 1")
        mirrored = np.conj(np.concatenate([arr[:1], arr[:0:-1]]))
        if np.abs(arr - mirrored).max() > tol:
            raise ValidityError("spectrum lacks the conjugate symmetry of a real law")
        arr.setflags(write=False)
        self.f = arr

    @property
    def n(self) -> int:
        return int(self.f.size)

    def __repr__(self):
        return f"Spectrum({self.f.tolist()})"


@dataclass(frozen=True)
class StableLaw:
    """Descriptor of a stable law for the cyclic table: the uniform law on
    the subgroup of index m (equivalently on r = n/m points spaced m apart,
    pushed through s_inv).  m = n encodes the point mass at s_inv[0]."""

    m: int
    r: int

    def __post_init__(self):
        if self.m < 1 or self.r < 1:
            raise ValidityError("stable law requires m >= 1 and r >= 1")

    @property
    def n(self) -> int:
        return self.m * self.r


@dataclass(frozen=True)
class IdDecomposition:
    """Canonical factorization of an infinitely divisible law: a point shift
    ``a``, a uniform component on the subgroup descriptor ``m``, and a
    compound Poisson part with intensity ``lam`` and jump law ``jump``."""

    a: int
    m: int
    lam: float
    jump: Distribution

    def __post_init__(self):
        n = self.jump.n
        if self.lam < 0:
            raise ValidityError("intensity must be nonnegative")
        if self.m < 1 or n % self.m != 0:
            raise ValidityError(f"m={self.m} must divide n={n}")
        if not 0 <= self.a < n:
            raise ValidityError(f"shift {self.a} out of range for n={n}")


def _ident(s: Permutation | None, n: int) -> Permutation:
    if s is None:
        return Permutation.identity(n)
    if s.n != n:
        raise ValidityError(f"permutation size {s.n} does not match n={n}")
    return s


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def make_cyclic_lut(n: int, s: Permutation | None = None) -> LutTable:
    """The table x (+) y = s_inv[(s[x] + s[y]) % n] on the canonical alphabet."""
    if n < 1:
        raise ValidityError("n must be >= 1")
    s = _ident(s, n)
    grid = (s.s[:, None] + s.s[None, :]) % n
    return LutTable(Alphabet.canonical(n), s.inv[grid])


def make_mod_lut(n: int) -> LutTable:
    """Plain mod-n addition (identity permutation)."""
    return make_cyclic_lut(n)


def relabel(p: Distribution, s: Permutation) -> Distribution:
    """The law of s(X): mass at index k moves to index s[k]."""
    if s.n != p.n:
        raise ValidityError(f"permutation size {s.n} does not match n={p.n}")
    q = np.empty(p.n)
    q[s.s] = p.p
    return Distribution(q)


def _relabeled_raw(p: Distribution, s: Permutation) -> np.ndarray:
    q = np.empty(p.n)
    q[s.s] = p.p
    return q


def _spectrum_raw(q: np.ndarray) -> np.ndarray:
    # positive-exponent transform of the relabeled vector
    return np.fft.ifft(q) * q.size


def spectrum(p: Distribution, s: Permutation | None = None) -> Spectrum:
    """Characteristic values f(t) = sum_k p_k exp(2i pi s[k] t / n)."""
    s = _ident(s, p.n)
    return Spectrum(_spectrum_raw(_relabeled_raw(p, s)))


def from_spectrum(F: Spectrum, s: Permutation | None = None, tol: float = 1e-9) -> Distribution:
    """Invert a spectrum back to a law on the original labels.

    Rejects inverses that are not probability vectors: imaginary parts or
    negative masses beyond tol.  Tiny negatives are clamped and the vector
    renormalized.
    """
    s = _ident(s, F.n)
    q = np.fft.fft(F.f) / F.n
    if np.abs(q.imag).max() > tol:
        raise ValidityError("spectrum does not invert to a real vector")
    re = q.real
    if re.min() < -tol:
        raise ValidityError("spectrum does not invert to a nonnegative vector")
    re = np.clip(re, 0.0, None)
    p = re[s.s]
    return Distribution(p / p.sum())


def multiply_spectra(F: Spectrum, G: Spectrum) -> Spectrum:
    """Pointwise product; the spectrum of the convolution of the two laws."""
    if F.n != G.n:
        raise ValidityError(f"dimension mismatch: {F.n} != {G.n}")
    return Spectrum(F.f * G.f)


def stable_distribution(law: StableLaw, s: Permutation | None = None) -> Distribution:
    """The law described by a StableLaw: uniform mass 1/r at the indices
    s_inv[j * m], j = 0..r-1."""
    n = law.n
    s = _ident(s, n)
    q = np.zeros(n)
    q[np.arange(law.r) * law.m] = 1.0 / law.r
    return Distribution(q[s.s])


def enumerate_stable(
    n: int, s: Permutation | None = None
) -> list[tuple[StableLaw, Distribution]]:
    """All stable laws for the cyclic table on n points: one per divisor m of
    n, ordered from the point mass (m = n) down to the full uniform (m = 1).
    The list is exhaustive."""
    if n < 1:
        raise ValidityError("n must be >= 1")
    s = _ident(s, n)
    out = []
    for m in reversed(_divisors(n)):
        law = StableLaw(m, n // m)
        out.append((law, stable_distribution(law, s)))
    return out


def classify_stable(
    p: Distribution, s: Permutation | None = None, tol: float = 1e-9
) -> StableLaw | None:
    """The stable law matching p within total variation tol, or None."""
    s = _ident(s, p.n)
    for law, q in enumerate_stable(p.n, s):
        if tv_distance(p, q) <= tol:
            return law
    return None


def _doa_mass_criterion(q: np.ndarray, m: int, r: int) -> tuple[bool, float, float]:
    """Mass form of the attraction test on the relabeled vector q.

    Returns (attracted, off_support_mass, max_concentration): q must live on
    the multiples of m, and the quotient law y must put probability < 1 on
    every coset { y : (y - a) t == 0 mod r }.
    """
    on = q[::m]
    off_mass = float(q.sum() - on.sum()) if m > 1 else 0.0
    if off_mass > _MASS_EPS:
        return False, off_mass, 0.0
    y = on / on.sum()
    conc_max = 0.0
    idx = np.arange(r)
    for t_star in range(1, r):
        for a in range(r):
            mass = float(y[((idx - a) * t_star) % r == 0].sum())
            conc_max = max(conc_max, mass)
    return conc_max < 1.0 - _MASS_EPS, off_mass, conc_max


def _doa_spectral_parts(q: np.ndarray, r: int) -> tuple[float, float]:
    """Spectral margins: max |f(t) - 1| on the subgroup t = 0 mod r, and
    max |f(t)| off it."""
    f = _spectrum_raw(q)
    on = np.abs(f[::r] - 1.0).max()
    off = f[np.arange(q.size) % r != 0]
    return float(on), float(np.abs(off).max()) if off.size else 0.0


def in_doa(p: Distribution, target: StableLaw, s: Permutation | None = None) -> bool:
    """Whether p is attracted to the given stable law (its fold powers
    converge to it in distribution)."""
    n = p.n
    if target.n != n:
        raise ValidityError(f"target law is for n={target.n}, distribution has n={n}")
    s = _ident(s, n)
    q = _relabeled_raw(p, s)
    result, off_mass, conc_max = _doa_mass_criterion(q, target.m, target.r)
    # spectral cross-check, gated so boundary inputs stay decided by the mass
    # test alone: flag only contradictions the margin bounds rule out
    sup_dev, strict_max = _doa_spectral_parts(q, target.r)
    if result and off_mass <= _MASS_EPS and conc_max <= 1.0 - 1e-6:
        if sup_dev > 1e-9 or strict_max > 1.0 - 1e-9:
            raise RuntimeError("attraction criteria disagree (mass says yes)")
    if off_mass > 1e-6 and sup_dev < 1e-12:
        raise RuntimeError("attraction criteria disagree (support mass escaped)")
    if conc_max > 1.0 - _MASS_EPS and strict_max < 1.0 - 1e-6:
        raise RuntimeError("attraction criteria disagree (concentration found)")
    return result


def doa_attractor(p: Distribution, s: Permutation | None = None) -> StableLaw | None:
    """The stable law attracting p, or None when the fold powers cycle.

    Divisors are scanned from the most spread-out candidate (m = 1, full
    uniform) upward, so the maximal attracting law is reported.
    """
    s = _ident(s, p.n)
    for m in _divisors(p.n):
        law = StableLaw(m, p.n // m)
        if in_doa(p, law, s):
            return law
    return None


def construct_id(d: IdDecomposition, s: Permutation | None = None) -> Distribution:
    """Exact law of shift (+) subgroup-uniform (+) compound Poisson.

    Built in the relabeled coordinates: linear phase for the shift, the
    subgroup indicator for the uniform part, exp(lam * (f_jump - 1)) for the
    compound Poisson part, then inverted through s_inv.
    """
    n = d.jump.n
    s = _ident(s, n)
    r = n // d.m
    t = np.arange(n)
    a_rel = int(s.s[d.a])
    phase = np.exp(2j * np.pi * a_rel * t / n)
    uniform_part = (t % r == 0).astype(float)
    f_jump = _spectrum_raw(_relabeled_raw(d.jump, s))
    F = phase * uniform_part * np.exp(d.lam * (f_jump - 1.0))
    return from_spectrum(Spectrum(F), s)


def _branch_candidates(im: float, lam: float, slack: float = 1e-6) -> list[int]:
    """Integers w such that im + 2*pi*w lies in [-lam - slack, lam + slack];
    the imaginary part of a compound-Poisson log-spectrum is bounded by lam."""
    lo = int(np.ceil((-lam - slack - im) / (2 * np.pi)))
    hi = int(np.floor((lam + slack - im) / (2 * np.pi)))
    return list(range(lo, hi + 1))


def decompose_id(
    p: Distribution, s: Permutation | None = None, tol: float = 1e-9
) -> IdDecomposition | None:
    """Canonical factorization of an infinitely divisible law, or None.

    The zero set of the spectrum must be the complement of a subgroup (that
    fixes the uniform component); on the subgroup, the log-spectrum is
    searched over shifts and 2*pi log branches for nonnegative jump
    intensities.  The canonical form has the jump law supported on the
    residues 1..m-1 (relabeled), jump mass at 0 folded out of the intensity,
    and the shift reduced modulo m.
    """
    n = p.n
    s = _ident(s, n)
    q = _relabeled_raw(p, s)
    f = _spectrum_raw(q)
    support = np.flatnonzero(np.abs(f) > ZERO_EPS)
    m = support.size
    if m == 0 or n % m != 0:
        return None
    r = n // m
    if not np.array_equal(support, np.arange(m) * r):
        return None
    g = f[::r]
    lam_bound = max(0.0, -float(np.log(np.abs(g)).mean()))

    half = (m - 1) // 2
    even = m % 2 == 0
    u = np.arange(m)
    best: tuple[float, np.ndarray, int] | None = None  # (negativity, C, a_rel)
    for a_rel in range(m):
        ga = g * np.exp(-2j * np.pi * a_rel * u / m)
        L = np.log(ga)
        if even and abs(L[m // 2].imag) > 1e-7:
            continue  # the half-frequency value must be real positive
        cand_lists = [_branch_candidates(float(L[v].imag), lam_bound) for v in range(1, half + 1)]
        if any(not c for c in cand_lists):
            continue
        total = 1
        for c in cand_lists:
            total *= len(c)
        if total > _COMBO_CAP:
            # phase-unwrap heuristic instead of exhaustive branch search
            combos = [None]
        else:
            combos = itertools.product(*cand_lists)
        for combo in combos:
            psi = np.zeros(m, dtype=complex)
            if combo is None:
                psi.imag = np.unwrap(L.imag)
                psi.real = L.real
                psi[0] = 0.0
                for v in range(1, half + 1):
                    psi[m - v] = np.conj(psi[v])
            else:
                for v, w in zip(range(1, half + 1), combo):
                    psi[v] = L[v] + 2j * np.pi * w
                    psi[m - v] = np.conj(psi[v])
            if even:
                psi[m // 2] = L[m // 2].real
            C = (np.fft.fft(psi) / m).real[1:]
            negativity = float(-C[C < 0].sum())
            if best is None or negativity < best[0]:
                best = (negativity, C, a_rel)
            if negativity <= 1e-13:
                break
        if best is not None and best[0] <= 1e-13:
            break
    if best is None:
        return None
    _, C, a_rel = best
    if C.size and C.min() < -tol:
        return None
    C = np.clip(C, 0.0, None)
    lam = float(C.sum())
    jump_rel = np.zeros(n)
    if lam > tol:
        jump_rel[1:m] = C / lam
    else:
        lam = 0.0
        jump_rel[0] = 1.0
    out = IdDecomposition(
        a=int(s.inv[a_rel]), m=m, lam=lam, jump=Distribution(jump_rel[s.s])
    )
    # the factorization must actually reproduce the law
    if tv_distance(construct_id(out, s), p) > 1e-7:
        return None
    return out


def is_infinitely_divisible(
    p: Distribution, s: Permutation | None = None, tol: float = 1e-9
) -> bool:
    """True when p factors as shift (+) subgroup-uniform (+) compound
    Poisson.  Such laws have fold roots of every order; the converse does
    not hold (nth_root_oracle can find roots for laws this rejects)."""
    return decompose_id(p, s, tol) is not None


def nth_root_oracle(
    p: Distribution, n_parts: int, s: Permutation | None = None
) -> Distribution | None:
    """Brute-force witness for n-fold divisibility: a law q whose n_parts-fold
    pseudo-sum, shifted by some point, reproduces p within 1e-8.

    Enumerates every shift and every branch assignment of the n-th roots of
    the relabeled spectrum (zero values take root zero), inverts each
    candidate, and verifies the first valid one through the fold itself.
    Guarded to n <= 8 alphabet points and n_parts <= 4.
    """
    n = p.n
    if n > 8 or n_parts > 4:
        raise ValidityError("oracle guard: requires n <= 8 and n_parts <= 4")
    if n_parts < 1:
        raise ValidityError("n_parts must be >= 1")
    s = _ident(s, n)
    f = _spectrum_raw(_relabeled_raw(p, s))
    lut = make_cyclic_lut(n, s)
    t = np.arange(n)
    for a_rel in range(n):
        target = f * np.exp(-2j * np.pi * a_rel * t / n)
        zero = np.abs(target) <= ZERO_EPS
        base = np.zeros(n, dtype=complex)
        nz = ~zero
        base[nz] = np.abs(target[nz]) ** (1.0 / n_parts) * np.exp(
            1j * np.angle(target[nz]) / n_parts
        )
        base[0] = 1.0
        free = [v for v in range(1, n) if not zero[v]]
        k = len(free)
        count = n_parts**k
        digits = (
            np.arange(count)[:, None] // n_parts ** np.arange(k - 1, -1, -1)
        ) % n_parts
        cands = np.repeat(base[None, :], count, axis=0)
        if k:
            cands[:, free] = cands[:, free] * np.exp(2j * np.pi * digits / n_parts)
        Q = np.fft.fft(cands, axis=1) / n
        ok = (np.abs(Q.imag).max(axis=1) <= 1e-10) & (Q.real.min(axis=1) >= -1e-10)
        for row in np.flatnonzero(ok):
            qq = np.clip(Q[row].real, 0.0, None)
            root = Distribution(qq[s.s] / qq.sum())
            folded = power(lut, root, n_parts)
            shifted = convolve(lut, folded, Distribution.point_mass(n, int(s.inv[a_rel])))
            if tv_distance(shifted, p) <= 1e-8:
                return root
    return None
