"""Shannon and Von Neumann entropies, their dualities, and GEXIT/EXIT checks.

All entropies are in bits. PSC-side (primal) Von Neumann entropies come from
the spectral table; BSC-side (dual) conditional entropies are brute-forced
over every received word, so the two sides share no code path beyond the
channel parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channelmodels import ChannelVector, bsc_probs, eta, eta_inverse
from .codebook import codewords
from .errors import OutOfRange, SizeLimit, StepTooSmall
from .gf2core import BitMatrix, CodePair, nullspace, span
from .wht import wht

DEFAULT_BRUTE_CAP = 12
MIN_STEP = 1e-6


def shannon(d) -> float:
    """-sum p log2 p with 0 log 0 = 0."""
    p = np.asarray(d, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def _xlogx_ratio(joint: np.ndarray, marginal: np.ndarray) -> float:
    """-sum joint log2(joint / marginal), skipping zero entries of joint."""
    ok = joint > 0
    return float(-np.sum(joint[ok] * np.log2(joint[ok] / np.broadcast_to(marginal, joint.shape)[ok])))


def code_spectrum(G: BitMatrix, ch: ChannelVector) -> np.ndarray:
    """Eigenvalues 2^(-k/2) shat(h) of the PSC output state of the code spanned by G."""
    words = span(G)
    s = np.ones(words.size)
    for j, c in enumerate(ch.cos):
        s = np.where((words >> j) & 1, s * c, s)
    return np.clip(wht(s) * 2.0 ** (-G.rows / 2), 0.0, None)


def vn_entropy(G: BitMatrix, ch: ChannelVector) -> float:
    """H(Y | S=0) for PSC outputs of the code spanned by G."""
    return shannon(code_spectrum(G, ch))


def _brute_check(pair: CodePair, ch: ChannelVector, cap: int) -> None:
    ch.require_length(pair.n)
    if pair.n > cap:
        raise SizeLimit(f"brute force over 2^{pair.n} received words exceeds cap 2^{cap}")


def h_sprime_given_yprime(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_BRUTE_CAP) -> float:
    """H(S' | Y') by explicit Bayes over (secret, dither, received word)."""
    _brute_check(pair, ch, cap)
    probs = bsc_probs(ch)
    y = np.arange(1 << pair.n)
    reps = codewords(pair, "Ctperp")
    joint = np.zeros((y.size, reps.size))
    for u in codewords(pair, "Cperp"):
        joint += probs[y[:, None] ^ reps[None, :] ^ u]
    joint *= 2.0 ** (-pair.n)
    return _xlogx_ratio(joint, joint.sum(axis=1, keepdims=True))


def _dual_joint(pair: CodePair, probs: np.ndarray, s: int) -> tuple[np.ndarray, np.ndarray]:
    """P(y', u' | S' = s') 2^-k, plus the transmitted words, for one secret."""
    y = np.arange(1 << pair.n)
    sent = int(codewords(pair, "Ctperp")[s]) ^ codewords(pair, "Cperp")
    return probs[y[:, None] ^ sent[None, :]] * 2.0 ** (-pair.n), sent


def h_xprime_given_yprime_sprime(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_BRUTE_CAP) -> float:
    """H(X' | Y', S'), which equals H(U' | Y', S'), by brute force."""
    _brute_check(pair, ch, cap)
    probs = bsc_probs(ch)
    total = 0.0
    for s in range(1 << pair.k):
        joint, _ = _dual_joint(pair, probs, s)
        total += _xlogx_ratio(joint, joint.sum(axis=1, keepdims=True))
    return total


def h_bit_given_yprime_sprime(pair: CodePair, ch: ChannelVector, i: int, cap: int = DEFAULT_BRUTE_CAP) -> float:
    """H(X'_i | Y', S') for 0-based bit i, by brute force."""
    _brute_check(pair, ch, cap)
    probs = bsc_probs(ch)
    total = 0.0
    for s in range(1 << pair.k):
        joint, sent = _dual_joint(pair, probs, s)
        bit = ((sent >> i) & 1).astype(bool)
        by_bit = np.stack((joint[:, ~bit].sum(axis=1), joint[:, bit].sum(axis=1)), axis=1)
        total += _xlogx_ratio(by_bit, by_bit.sum(axis=1, keepdims=True))
    return total


@dataclass(frozen=True)
class EntropyReport:
    h_y_given_s0: float
    h_sprime_given_yprime: float
    h_u_given_y_s0: float
    h_uprime_given_yprime_sprime: float
    eta_sum: float
    k: int

    @property
    def secrecy_residual(self) -> float:
        return abs(self.h_y_given_s0 - self.h_sprime_given_yprime)

    @property
    def coding_rhs(self) -> float:
        return self.h_u_given_y_s0 + self.eta_sum - self.k

    @property
    def coding_residual(self) -> float:
        return abs(self.h_uprime_given_yprime_sprime - self.coding_rhs)


def entropy_report(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_BRUTE_CAP) -> EntropyReport:
    """Evaluate both sides of the Von Neumann secrecy and coding dualities.

    The eta term is sum_i eta(p_i), which reduces to n eta(p) for uniform p.
    """
    h_y = vn_entropy(pair.G, ch)
    h_s = h_sprime_given_yprime(pair, ch, cap)
    return EntropyReport(
        h_y_given_s0=h_y,
        h_sprime_given_yprime=h_s,
        h_u_given_y_s0=pair.k - h_y,
        h_uprime_given_yprime_sprime=h_xprime_given_yprime_sprime(pair, ch, cap),
        eta_sum=float(sum(eta(p) for p in ch.ps)),
        k=pair.k,
    )


def vn_secrecy_equality_check(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_BRUTE_CAP) -> tuple[float, float]:
    """(Shannon entropy of the PSC spectrum, brute-force H(S' | Y'))."""
    return vn_entropy(pair.G, ch), h_sprime_given_yprime(pair, ch, cap)


def vn_coding_duality_check(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_BRUTE_CAP) -> tuple[float, float]:
    """(brute-force H(U' | Y', S'), H(U | Y, S=0) + sum eta(p_i) - k)."""
    rep = entropy_report(pair, ch, cap)
    return rep.h_uprime_given_yprime_sprime, rep.coding_rhs


# GEXIT ------------------------------------------------------------------------


def _dual_entropy_at(pair: CodePair, ch: ChannelVector, i: int, h_prime: float, cap: int) -> float:
    return h_xprime_given_yprime_sprime(pair, ch.with_bit(i, p=eta_inverse(h_prime)), cap)


def _primal_entropy_at(pair: CodePair, ch: ChannelVector, i: int, h_prime: float) -> float:
    """H(X | Y, S=0) with bit i on the PSC of angle arccos(1 - 2 p_i)."""
    return pair.k - vn_entropy(pair.G, ch.with_bit(i, p=eta_inverse(h_prime)))


def _stencil(h: float, step: float) -> tuple[list[float], list[float]]:
    """Points and weights of a second-order first-derivative stencil inside [0, 1]."""
    if h - step >= 0.0 and h + step <= 1.0:
        return [h - step, h + step], [-0.5 / step, 0.5 / step]
    if h + step > 1.0:
        return [h, h - step, h - 2 * step], [1.5 / step, -2.0 / step, 0.5 / step]
    return [h, h + step, h + 2 * step], [-1.5 / step, 2.0 / step, -0.5 / step]


def _derivative(fn, h: float, step: float) -> float:
    points, w = _stencil(h, step)
    return float(sum(wi * fn(x) for x, wi in zip(points, w)))


@dataclass(frozen=True)
class GexitReport:
    bit: int
    h_prime: float
    step: float
    g_dual: float
    g_primal: float
    g_dual_half: float
    g_primal_half: float
    tolerance: float = 1e-4

    @property
    def total(self) -> float:
        return self.g_dual + self.g_primal

    @property
    def total_half(self) -> float:
        return self.g_dual_half + self.g_primal_half

    @property
    def total_richardson(self) -> float:
        return (4.0 * self.total_half - self.total) / 3.0

    @property
    def residual(self) -> float:
        return max(abs(self.total - 1.0), abs(self.total_half - 1.0), abs(self.total_richardson - 1.0))

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


def gexit_duality_check(
    pair: CodePair,
    ch: ChannelVector,
    i: int,
    step: float = 1e-3,
    cap: int = DEFAULT_BRUTE_CAP,
) -> GexitReport:
    """g'_i + g_i at bit i (0-based), at the given step and at step / 2.

    g'_i differentiates the brute-force H(X' | Y', S') in h'_i = eta(p_i);
    g_i differentiates the PSC-side H(X | Y, S=0) in h_i = 1 - h'_i.
    """
    if not 0 <= i < pair.n:
        raise OutOfRange(f"bit index {i} outside 0..{pair.n - 1}")
    if not (step > 0.0 and step < 0.25) or math.isnan(step):
        raise OutOfRange(f"step {step} outside (0, 1/4)")
    if step < MIN_STEP:
        raise StepTooSmall(f"step {step} is below the noise floor {MIN_STEP}")
    _brute_check(pair, ch, cap)
    h = eta(float(ch.ps[i]))

    def dual(x: float) -> float:
        return _dual_entropy_at(pair, ch, i, x, cap)

    def primal(x: float) -> float:
        return _primal_entropy_at(pair, ch, i, x)

    vals = []
    for s in (step, step / 2):
        g_dual = _derivative(dual, h, s)
        # d/dh_i = -d/dh'_i
        g_primal = -_derivative(primal, h, s)
        vals += [g_dual, g_primal]
    return GexitReport(i, h, step, *vals)


# EXIT endpoint ----------------------------------------------------------------


def shortened_generator(G: BitMatrix, i: int) -> BitMatrix:
    """Generator of {c in C : c_i = 0} for 0-based position i."""
    col = sum(((r >> i) & 1) << j for j, r in enumerate(G.data))
    msgs = nullspace(BitMatrix(1, G.rows, (col,)))
    rows = []
    for m in msgs.data:
        w = 0
        for j, r in enumerate(G.data):
            if (m >> j) & 1:
                w ^= r
        rows.append(w)
    return BitMatrix(len(rows), G.cols, tuple(rows))


@dataclass(frozen=True)
class ExitReport:
    bit: int
    dual_entropy: float
    primal_entropy: float
    mutual_information: float
    tolerance: float = 1e-9

    @property
    def total(self) -> float:
        return self.dual_entropy + self.primal_entropy

    @property
    def residual(self) -> float:
        return abs(self.total - 1.0)

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


def exit_endpoint_check(pair: CodePair, ch: ChannelVector, i: int, cap: int = DEFAULT_BRUTE_CAP) -> ExitReport:
    """H(X'_i | Y'_~i, S') + H(X_i | Y_~i, S=0) = 1 at bit i (0-based).

    Dual side: brute force with p_i = 1/2, so Y'_i carries nothing.
    Primal side: with theta_i = 0, Q = I(X_i; Y_~i) is the Von Neumann
    entropy of C minus that of the code shortened at i, and
    H(X_i | Y_~i) = H(X_i) - Q, where H(X_i) is 0 for an all-zero column.
    """
    if not 0 <= i < pair.n:
        raise OutOfRange(f"bit index {i} outside 0..{pair.n - 1}")
    dual = h_bit_given_yprime_sprime(pair, ch.with_bit(i, p=0.5), i, cap)
    blind = ch.with_bit(i, p=0.0)
    q = vn_entropy(pair.G, blind) - vn_entropy(shortened_generator(pair.G, i), blind)
    h_xi = 1.0 if any((r >> i) & 1 for r in pair.G.data) else 0.0
    return ExitReport(i, dual, h_xi - q, q)
