"""Channel coding with C-perp on BSC(p), viewed as diagonal CQ states.

Messages z in Z_2^(n-k) are sent as c_z = z G_Cperp. The states phi_z are
diagonal, so the MAP measurement is a family of 0/1 diagonal projectors and
the SRM is a diagonal POVM.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channelmodels import ChannelVector, bsc_probs
from .codebook import DEFAULT_ENUM_CAP, codewords, dual_coset_index
from .errors import SizeLimit
from .gf2core import CodePair, vec_mat_t
from .psccoding import DEFAULT_ORACLE_CAP

LEADER_RTOL = 1e-12


def _enum(pair: CodePair, ch: ChannelVector, cap: int) -> tuple[np.ndarray, np.ndarray]:
    ch.require_length(pair.n)
    if pair.n > cap:
        raise SizeLimit(f"2^{pair.n} vectors exceeds cap 2^{cap}")
    return bsc_probs(ch), dual_coset_index(pair)


def map_leaders(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """Most probable member of each coset of C-perp; ties go to the smallest integer."""
    probs, _ = _enum(pair, ch, cap)
    members = codewords(pair, "Ctperp")[:, None] ^ codewords(pair, "Cperp")[None, :]
    p = probs[members]
    best = p.max(axis=1, keepdims=True)
    cand = p >= best * (1.0 - LEADER_RTOL)
    return np.where(cand, members, np.iinfo(np.int64).max).min(axis=1)


def map_success_bsc(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_ENUM_CAP) -> float:
    """Sum over cosets of C-perp of the largest member probability."""
    probs, idx = _enum(pair, ch, cap)
    best = np.zeros(1 << pair.k)
    np.maximum.at(best, idx, probs)
    return float(best.sum())


def srm_terms(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_ENUM_CAP) -> tuple[np.ndarray, np.ndarray]:
    """Per-coset first and second moments (sum p, sum p^2)."""
    probs, idx = _enum(pair, ch, cap)
    size = 1 << pair.k
    return (
        np.bincount(idx, weights=probs, minlength=size),
        np.bincount(idx, weights=probs**2, minlength=size),
    )


def srm_success_bsc(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_ENUM_CAP) -> float:
    """Sum over cosets of (sum p^2) / (sum p); empty-mass cosets contribute 0."""
    s1, s2 = srm_terms(pair, ch, cap)
    ok = s1 > 0
    return float(np.sum(s2[ok] / s1[ok]))


def srm_second_moment(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_ENUM_CAP) -> float:
    """E[X^2] with X the per-coset 2-norm over 1-norm ratio, weighted by coset mass."""
    probs, idx = _enum(pair, ch, cap)
    size = 1 << pair.k
    l1 = np.bincount(idx, weights=probs, minlength=size)
    l2 = np.sqrt(np.bincount(idx, weights=probs**2, minlength=size))
    ok = l1 > 0
    x = l2[ok] / l1[ok]
    return float(np.sum(l1[ok] * x**2))


def syndrome_decoder_success(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_ORACLE_CAP) -> float:
    """Exhaustive simulation of a table-lookup syndrome decoder.

    The lookup table maps each syndrome of G_C (the parity check of C-perp)
    to the most probable error pattern, found by scanning all words.
    """
    ch.require_length(pair.n)
    if pair.n > cap:
        raise SizeLimit(f"2^{pair.n} error patterns exceeds cap 2^{cap}")
    probs = bsc_probs(ch)
    syn = np.array([vec_mat_t(e, pair.G) for e in range(1 << pair.n)], dtype=np.int64)
    table: dict[int, int] = {}
    for e in range(1 << pair.n):
        best = table.get(int(syn[e]))
        if best is None or probs[e] > probs[best] * (1.0 + LEADER_RTOL):
            table[int(syn[e])] = e
    lookup = np.zeros(1 << pair.k, dtype=np.int64)
    for s, e in table.items():
        lookup[s] = e
    nk = pair.n - pair.k
    errors = np.arange(1 << pair.n)
    total = 0.0
    for c in codewords(pair, "Cperp"):
        y = errors ^ c
        decoded = y ^ lookup[syn[y]]
        total += float(probs[decoded == c].sum())
    return total * 2.0 ** (-nk)


@dataclass(frozen=True)
class MapMeasurementReport:
    success_from_projectors: float
    success_closed_form: float
    success_syndrome_decoder: float
    complete: bool
    orthogonal: bool
    projector_ranks: tuple[int, ...]

    @property
    def residual(self) -> float:
        return max(
            abs(self.success_from_projectors - self.success_closed_form),
            abs(self.success_syndrome_decoder - self.success_closed_form),
        )


def map_measurement_check(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_ORACLE_CAP) -> MapMeasurementReport:
    """Build phi_z and Pi_z = sum over leaders |c_z + v*><c_z + v*| explicitly."""
    ch.require_length(pair.n)
    if pair.n > cap:
        raise SizeLimit(f"2^{pair.n} basis states exceeds cap 2^{cap}")
    probs = bsc_probs(ch)
    leaders = map_leaders(pair, ch, cap)
    nk = pair.n - pair.k
    words = codewords(pair, "Cperp")
    v = np.arange(1 << pair.n)
    cover = np.zeros(1 << pair.n, dtype=np.int64)
    success = 0.0
    ranks = []
    idempotent = True
    for z in range(1 << nk):
        proj = np.zeros(1 << pair.n, dtype=np.int64)
        proj[words[z] ^ leaders] = 1
        idempotent &= bool(np.array_equal(proj * proj, proj))
        phi = probs[v ^ words[z]]
        success += float(phi @ proj) * 2.0 ** (-nk)
        cover += proj
        ranks.append(int(proj.sum()))
    complete = bool(np.all(cover == 1))
    orthogonal = idempotent and bool(np.all(cover <= 1))
    return MapMeasurementReport(
        success,
        map_success_bsc(pair, ch, cap),
        syndrome_decoder_success(pair, ch, cap),
        complete,
        orthogonal,
        tuple(ranks),
    )


def srm_povm_success(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_ORACLE_CAP) -> float:
    """Trace average with the SRM POVM diagonals P(v + c_z) / alpha'(v).

    alpha'(v) = sum_z P(v + c_z) is the diagonal of the sum of all states;
    zero entries are skipped, as in a pseudo-inverse.
    """
    ch.require_length(pair.n)
    if pair.n > cap:
        raise SizeLimit(f"2^{pair.n} basis states exceeds cap 2^{cap}")
    probs = bsc_probs(ch)
    nk = pair.n - pair.k
    words = codewords(pair, "Cperp")
    v = np.arange(1 << pair.n)
    states = probs[v[None, :] ^ words[:, None]]
    alpha = states.sum(axis=0)
    # divide directly: 1 / alpha overflows for subnormal alpha
    povm = np.divide(states, alpha, out=np.zeros_like(states), where=alpha > 0)
    return float(np.sum(states * povm)) * 2.0 ** (-nk)


def nonoptimality_witness(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_ENUM_CAP) -> float:
    """max/min of the diagonal p_v / sqrt(alpha'(v)) over v with p_v > 0.

    For the SRM to be optimal by the geometric-uniformity criterion this
    diagonal would have to be a multiple of the identity, i.e. ratio 1.
    """
    probs, idx = _enum(pair, ch, cap)
    masses = np.bincount(idx, weights=probs, minlength=1 << pair.k)
    alpha = masses[idx]
    ok = probs > 0
    diag = probs[ok] / np.sqrt(alpha[ok])
    return float(diag.max() / diag.min())
