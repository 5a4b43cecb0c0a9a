"""Pure-state channel PSC(theta), its dual BSC(p), and elementary probabilities.

Each bit j may have its own angle theta_j in [0, pi/2]. The dual error
rate is p_j = (1 - cos theta_j) / 2, evaluated as sin^2(theta_j / 2) so
that tiny angles keep a nonzero rate.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .codebook import as_message, codewords
from .errors import DimensionMismatch, OutOfRange
from .gf2core import CodePair

HALF_PI = math.pi / 2
_ANGLE_SLACK = 1e-12


def _rate(theta: np.ndarray) -> np.ndarray:
    p = np.sin(theta / 2.0) ** 2
    # float(pi/2) does not give exactly 1/2; the endpoint is meant to be exact
    p[theta == HALF_PI] = 0.5
    return p


def _check_theta(theta: float) -> float:
    if not math.isfinite(theta) or theta < -_ANGLE_SLACK or theta > HALF_PI + _ANGLE_SLACK:
        raise OutOfRange(f"theta={theta} outside [0, pi/2]")
    return min(max(theta, 0.0), HALF_PI)


def _check_p(p: float) -> float:
    if not math.isfinite(p) or p < 0.0 or p > 0.5:
        raise OutOfRange(f"p={p} outside [0, 1/2]")
    return p


def dual_parameter(theta: float) -> float:
    """BSC error rate dual to PSC(theta)."""
    theta = _check_theta(float(theta))
    return float(_rate(np.array([theta]))[0])


def helstrom_error(theta: float) -> float:
    """Optimal single-use error for distinguishing the two PSC outputs."""
    theta = _check_theta(float(theta))
    return (1.0 - math.sin(theta)) / 2.0


@dataclass(frozen=True, eq=False)
class ChannelVector:
    """Per-bit PSC angles and their dual BSC error rates."""

    thetas: np.ndarray
    ps: np.ndarray

    @classmethod
    def from_thetas(cls, thetas: float | Sequence[float], n: int | None = None) -> ChannelVector:
        t = np.atleast_1d(np.asarray(thetas, dtype=float)).copy()
        if t.ndim != 1:
            raise DimensionMismatch("angles must be a scalar or a 1-D sequence")
        t = np.array([_check_theta(float(x)) for x in t])
        if n is not None:
            t = _broadcast(t, n)
        t.setflags(write=False)
        ps = _rate(t)
        ps.setflags(write=False)
        return cls(t, ps)

    @classmethod
    def from_ps(cls, ps: float | Sequence[float], n: int | None = None) -> ChannelVector:
        p = np.atleast_1d(np.asarray(ps, dtype=float)).copy()
        if p.ndim != 1:
            raise DimensionMismatch("error rates must be a scalar or a 1-D sequence")
        p = np.array([_check_p(float(x)) for x in p])
        if n is not None:
            p = _broadcast(p, n)
        t = 2.0 * np.arcsin(np.sqrt(p))
        t[p == 0.5] = HALF_PI
        p.setflags(write=False)
        t.setflags(write=False)
        return cls(t, p)

    @property
    def n(self) -> int:
        return int(self.ps.size)

    @property
    def cos(self) -> np.ndarray:
        """cos theta_j, taken as 1 - 2 p_j so both sides share one number."""
        return 1.0 - 2.0 * self.ps

    @property
    def is_uniform(self) -> bool:
        return bool(np.all(self.ps == self.ps[0])) if self.n else True

    def with_bit(self, i: int, *, p: float | None = None, theta: float | None = None) -> ChannelVector:
        """Copy with bit i (0-based) replaced by the given parameter."""
        ps = self.ps.copy()
        if (p is None) == (theta is None):
            raise DimensionMismatch("give exactly one of p or theta")
        ps[i] = _check_p(p) if p is not None else dual_parameter(theta)
        return ChannelVector.from_ps(ps)

    def require_length(self, n: int) -> None:
        if self.n != n:
            raise DimensionMismatch(f"channel has {self.n} bits, code has length {n}")


def _broadcast(values: np.ndarray, n: int) -> np.ndarray:
    if values.size == 1:
        return np.full(n, values[0])
    if values.size != n:
        raise DimensionMismatch(f"got {values.size} per-bit parameters for length {n}")
    return values


def overlaps(pair: CodePair, ch: ChannelVector) -> np.ndarray:
    """s(g) = prod over the support of c_g of cos theta_i, for every message g."""
    ch.require_length(pair.n)
    words = codewords(pair, "C")
    s = np.ones(words.size)
    for j, c in enumerate(ch.cos):
        s = np.where((words >> j) & 1, s * c, s)
    return s


def overlap(pair: CodePair, ch: ChannelVector, g) -> float:
    ch.require_length(pair.n)
    g = as_message(g, pair.k)
    return float(overlaps(pair, ch)[g])


def bsc_probs(ch: ChannelVector) -> np.ndarray:
    """P(e) = prod p_i^e_i (1-p_i)^(1-e_i) for every e in Z_2^n."""
    out = np.ones(1)
    for p in ch.ps:
        out = np.concatenate((out * (1.0 - p), out * p))
    return out


def bsc_prob(ch: ChannelVector, e) -> float:
    e = as_message(e, ch.n)
    prob = 1.0
    for j, p in enumerate(ch.ps):
        prob *= p if (e >> j) & 1 else 1.0 - p
    return prob


def psc_amplitudes(ch: ChannelVector) -> np.ndarray:
    """Amplitudes of |theta_1> ... |theta_n> in the computational basis.

    Per bit the state is cos(theta/2)|0> + sin(theta/2)|1>, written as
    sqrt(1 - p)|0> + sqrt(p)|1> so it shares p with every other routine. The
    Z(c) shifted states only flip signs, so every amplitude is real.
    """
    out = np.ones(1)
    for p in ch.ps:
        out = np.concatenate((out * math.sqrt(1.0 - p), out * math.sqrt(p)))
    return out


def eta(p: float) -> float:
    """Binary entropy in bits."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def eta_inverse(h: float, tol: float = 1e-12) -> float:
    """The p in [0, 1/2] with eta(p) = h, by safeguarded Newton iteration."""
    if not (0.0 <= h <= 1.0):
        raise OutOfRange(f"entropy {h} outside [0, 1]")
    if h == 0.0:
        return 0.0
    if h == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    p = 0.25
    for _ in range(200):
        f = eta(p) - h
        if f > 0:
            hi = p
        else:
            lo = p
        if abs(f) <= tol * 1e-3 or hi - lo <= 1e-17:
            return p
        slope = math.log2((1.0 - p) / p)
        step = p - f / slope if slope > 0 else None
        p = step if step is not None and lo < step < hi else 0.5 * (lo + hi)
    if abs(eta(p) - h) > tol:
        raise OutOfRange(f"eta inversion did not converge for h={h}")
    return p
