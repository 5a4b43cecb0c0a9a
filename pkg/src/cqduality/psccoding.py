"""Channel coding on the PSC: spectral table, SRM statistics, and block error.

Closed forms work on the 2^k-entry overlap table. The explicit-SVD oracle
builds the 2^n x 2^k matrix of codeword output states and is only run at
small n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channelmodels import ChannelVector, bsc_probs, overlaps, psc_amplitudes
from .codebook import DEFAULT_ENUM_CAP, as_message, codewords, dual_coset_index
from .errors import NumericalRankLoss, SizeLimit
from .gf2core import CodePair, phase
from .wht import wht

DEFAULT_ORACLE_CAP = 12
DEFAULT_ORACLE_K_CAP = 10
SIGMA_ZERO = 1e-12
PINV_RTOL = 1e-10
RANK_LOSS_FLOOR = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralTable:
    """Overlaps s(g), their transform shat(h), and sigma(h) = 2^(k/4) sqrt(shat(h)).

    ``coset_residual`` is the largest gap between 2^(-k/2) shat(h) and the
    BSC probability mass of the matching coset of C-perp, or None when that
    cross-check was not run.
    """

    k: int
    s: np.ndarray
    shat: np.ndarray
    sigma: np.ndarray
    coset_residual: float | None = None

    @property
    def eigenvalues(self) -> np.ndarray:
        """2^(-k/2) shat(h): a probability distribution over Z_2^k."""
        return np.clip(self.shat * 2.0 ** (-self.k / 2), 0.0, None)


def coset_masses(pair: CodePair, ch: ChannelVector) -> np.ndarray:
    """BSC probability of each coset h G_Ctperp + C-perp, by enumeration."""
    return np.bincount(dual_coset_index(pair), weights=bsc_probs(ch), minlength=1 << pair.k)


def spectral(
    pair: CodePair, ch: ChannelVector, *, verify: bool = True, cap: int = DEFAULT_ENUM_CAP
) -> SpectralTable:
    s = overlaps(pair, ch)
    shat = wht(s)
    sigma = 2.0 ** (pair.k / 4) * np.sqrt(np.clip(shat, 0.0, None))
    residual = None
    if verify:
        if pair.n > cap:
            raise SizeLimit(f"coset cross-check needs 2^{pair.n} vectors (cap 2^{cap})")
        lam = coset_masses(pair, ch)
        residual = float(np.max(np.abs(shat * 2.0 ** (-pair.k / 2) - lam)))
    return SpectralTable(pair.k, s, shat, sigma, residual)


def sigma_hat(spec: SpectralTable) -> np.ndarray:
    sigma = np.where(spec.sigma < SIGMA_ZERO, 0.0, spec.sigma)
    return wht(sigma)


def _decision_probs(spec: SpectralTable) -> np.ndarray:
    return sigma_hat(spec) ** 2 * 2.0 ** (-spec.k)


def srm_matrix(spec: SpectralTable) -> np.ndarray:
    """Pr[decide g | sent t] = sigmahat(g xor t)^2 / 2^k, as a 2^k x 2^k array."""
    prob = _decision_probs(spec)
    idx = np.arange(1 << spec.k)
    return prob[idx[:, None] ^ idx[None, :]]


def srm_pairwise(spec: SpectralTable, g, t) -> float:
    g = as_message(g, spec.k)
    t = as_message(t, spec.k)
    # same vectorized arithmetic as srm_matrix, so entries agree bit for bit
    return float(_decision_probs(spec)[g ^ t])


def bhattacharyya_vs_uniform(dist: np.ndarray) -> float:
    d = np.clip(np.asarray(dist, dtype=float), 0.0, None)
    return float(np.sum(np.sqrt(d / d.size)))


def block_error_psc(pair: CodePair, ch: ChannelVector) -> float:
    """Optimal (SRM) block error 1 - (sum_h sqrt(2^(-k/2) shat(h) 2^(-k)))^2."""
    spec = spectral(pair, ch, verify=False)
    return 1.0 - bhattacharyya_vs_uniform(spec.eigenvalues) ** 2


def codeword_states(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_ORACLE_CAP) -> np.ndarray:
    """Phi: column g is Z(c_g)|theta>^n, a 2^n x 2^k real matrix."""
    ch.require_length(pair.n)
    if pair.n > cap:
        raise SizeLimit(f"dense oracle needs 2^{pair.n} rows (cap 2^{cap})")
    amps = psc_amplitudes(ch)
    v = np.arange(1 << pair.n)
    words = codewords(pair, "C")
    signs = phase(v[:, None], words[None, :])
    return amps[:, None] * signs


@dataclass(frozen=True, eq=False)
class OracleResult:
    pe: float
    pairwise: np.ndarray
    singular_values: np.ndarray
    rank: int


def oracle_srm(
    pair: CodePair,
    ch: ChannelVector,
    cap: int = DEFAULT_ORACLE_CAP,
    k_cap: int = DEFAULT_ORACLE_K_CAP,
) -> OracleResult:
    """SRM via the compact SVD Phi = U S V^T, with Psi = U V^T.

    Singular values below PINV_RTOL times the largest are dropped, which is
    the pseudo-inverse convention. Entry [g, t] of the returned matrix is
    (psi_g . phi_t)^2, the probability of deciding g when t was sent.
    """
    if pair.k > k_cap:
        raise SizeLimit(f"k={pair.k} exceeds oracle cap {k_cap}")
    phi = codeword_states(pair, ch, cap)
    U, S, Vt = np.linalg.svd(phi, full_matrices=False)
    if S[-1] < RANK_LOSS_FLOOR and np.all(ch.thetas > 0):
        raise NumericalRankLoss(f"smallest singular value {S[-1]:.3e} with all angles positive")
    r = int(np.sum(S > PINV_RTOL * S[0]))
    psi = U[:, :r] @ Vt[:r, :]
    M = psi.T @ phi
    pairwise = M**2
    pe = 1.0 - float(np.trace(pairwise)) * 2.0 ** (-pair.k)
    return OracleResult(pe, pairwise, S, r)


def gram_eigenvalues(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_ORACLE_CAP) -> np.ndarray:
    """Ascending eigenvalues of 2^(-k) Phi^T Phi."""
    phi = codeword_states(pair, ch, cap)
    return np.linalg.eigvalsh(phi.T @ phi * 2.0 ** (-pair.k))
