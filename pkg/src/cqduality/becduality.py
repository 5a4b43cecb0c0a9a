"""Erasure-channel baseline: every entropy is a rank, so every check is exact.

Primal setup: X = [U S] A = U G_C + S G_Ct, observed on the unerased
positions E^c. Dual setup: X' = [S' U'] B = S' G_Ctperp + U' G_Cperp,
observed on the erased positions E.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import asdict, dataclass
from fractions import Fraction

from .errors import DimensionMismatch, IdentityViolation
from .gf2core import BitMatrix, CodePair, nullspace, rank


@dataclass(frozen=True)
class ErasurePattern:
    """Erased positions, 1-based."""

    n: int
    erased: frozenset[int]

    @classmethod
    def of(cls, n: int, positions: Iterable[int]) -> ErasurePattern:
        pos = list(positions)
        if len(set(pos)) != len(pos):
            raise DimensionMismatch(f"duplicate erasure positions in {pos}")
        for p in pos:
            if not 1 <= p <= n:
                raise DimensionMismatch(f"erasure position {p} outside 1..{n}")
        return cls(n, frozenset(pos))

    @property
    def erased_columns(self) -> list[int]:
        return sorted(p - 1 for p in self.erased)

    @property
    def observed_columns(self) -> list[int]:
        return [j for j in range(self.n) if j + 1 not in self.erased]

    @property
    def size(self) -> int:
        return len(self.erased)


def _check(pair: CodePair, E: ErasurePattern) -> None:
    if E.n != pair.n:
        raise DimensionMismatch(f"pattern has length {E.n}, code has length {pair.n}")


def _projected_rank(M: BitMatrix, shift: int, width: int) -> int:
    """Rank of the left null space of M restricted to coordinates shift..shift+width-1."""
    left = nullspace(M.T)
    mask = (1 << width) - 1
    return rank(BitMatrix(left.rows, width, tuple((w >> shift) & mask for w in left.data)))


def bec_cond_entropy(pair: CodePair, E: ErasurePattern) -> int:
    """H(X | X_{E^c}) = k - rank(G_{E^c}), confirmed against |E| - rank(H_E)."""
    _check(pair, E)
    primal = pair.k - rank(pair.G.select_columns(E.observed_columns))
    dual = E.size - rank(pair.G_dual.select_columns(E.erased_columns))
    if primal != dual:
        raise IdentityViolation(f"k - rank(G_Ec) = {primal} but |E| - rank(H_E) = {dual}")
    return primal


@dataclass(frozen=True)
class EntropyDualityReport:
    dual_entropy: int
    primal_entropy: int
    observed: int
    k: int

    @property
    def rhs(self) -> int:
        return self.primal_entropy + self.observed - self.k

    @property
    def passed(self) -> bool:
        return self.dual_entropy == self.rhs


def bec_entropy_duality_check(pair: CodePair, E: ErasurePattern) -> EntropyDualityReport:
    """H(X' | X'_E) = H(X | X_{E^c}) + |E^c| - k, with X' in C-perp."""
    _check(pair, E)
    nk = pair.n - pair.k
    dual = nk - rank(pair.G_dual.select_columns(E.erased_columns))
    return EntropyDualityReport(dual, bec_cond_entropy(pair, E), pair.n - E.size, pair.k)


@dataclass(frozen=True)
class SecrecySumReport:
    h_s: int
    h_u: int
    erased: int
    perfect_secrecy_applies: bool
    perfect_secrecy: bool
    correctable: bool

    @property
    def passed(self) -> bool:
        ok = self.h_s + self.h_u == self.erased
        if self.perfect_secrecy_applies:
            ok = ok and self.perfect_secrecy == self.correctable
        return ok


def secrecy_coding_sum_check(pair: CodePair, E: ErasurePattern) -> SecrecySumReport:
    """H(S | X_{E^c}) + H(U | X_{E^c}, S) = |E|.

    H(S | X_{E^c}) is the dimension of the S-part of {[u s] : [u s] A_{E^c} = 0};
    H(U | X_{E^c}, S) = k - rank(G_{E^c}). When |E| = n - k, full secrecy
    (H(S | X_{E^c}) = n - k) holds exactly when E is correctable for C.
    """
    _check(pair, E)
    obs = E.observed_columns
    nk = pair.n - pair.k
    h_s = _projected_rank(pair.A.select_columns(obs), pair.k, nk)
    h_u = pair.k - rank(pair.G.select_columns(obs))
    applies = E.size == nk
    return SecrecySumReport(h_s, h_u, E.size, applies, h_s == nk, h_u == 0)


@dataclass(frozen=True)
class GuessingReport:
    d: int
    f: int
    k: int
    guessing_probability: Fraction
    b_squared: Fraction

    @property
    def passed(self) -> bool:
        return self.f == self.k - self.d and self.guessing_probability == self.b_squared


def bec_bhattacharyya_guessing_check(pair: CodePair, E: ErasurePattern) -> GuessingReport:
    """Guessing probability 2^-d equals B^2 = 2^(f-k) for the dual posterior.

    d = H(U | X_{E^c}, S=0) and f = H(S' | X'_E), the S'-part of the left
    null space of B_E.
    """
    _check(pair, E)
    d = pair.k - rank(pair.G.select_columns(E.observed_columns))
    f = _projected_rank(pair.B.select_columns(E.erased_columns), 0, pair.k)
    two = Fraction(2)
    return GuessingReport(d, f, pair.k, two ** (-d), two ** (f - pair.k))


def report_dict(pair: CodePair, E: ErasurePattern) -> dict:
    dual = bec_entropy_duality_check(pair, E)
    sec = secrecy_coding_sum_check(pair, E)
    guess = bec_bhattacharyya_guessing_check(pair, E)
    g = asdict(guess)
    g["guessing_probability"] = str(guess.guessing_probability)
    g["b_squared"] = str(guess.b_squared)
    return {
        "erased": sorted(E.erased),
        "cond_entropy": bec_cond_entropy(pair, E),
        "entropy_duality": {**asdict(dual), "rhs": dual.rhs, "passed": dual.passed},
        "secrecy_coding_sum": {**asdict(sec), "passed": sec.passed},
        "guessing": {**g, "passed": guess.passed},
    }
