"""Secret communication over the PSC with cosets of C.

The secret h in Z_2^(n-k) picks the coset y_h + C with y_h = h G_Ct. The
eavesdropper's state for h = 0 is rho = 2^-k sum_{c in C} Z(c)|theta><theta|Z(c),
whose eigenvectors are supported on cosets of C-perp. Everything here is
evaluated analytically in that coset picture; the dense helpers at the
bottom exist to cross-check the closed forms at small n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .bsccoding import map_leaders
from .channelmodels import ChannelVector, bsc_probs, psc_amplitudes
from .codebook import DEFAULT_ENUM_CAP, codewords, dual_coset_index
from .errors import SizeLimit
from .gf2core import CodePair, phase
from .wht import wht

DEFAULT_DENSE_CAP = 6
DEFAULT_RHO_CAP = 8
PINV_RTOL = 1e-10
MAX_INDUCED_WORK = 1 << 32


def _check(pair: CodePair, ch: ChannelVector, cap: int) -> None:
    ch.require_length(pair.n)
    if pair.n > cap:
        raise SizeLimit(f"2^{pair.n} basis states exceeds cap 2^{cap}")


@dataclass(frozen=True, eq=False)
class RhoEigensystem:
    """Eigenvalue lambda(m) per coset m of C-perp and the eigenvector amplitudes.

    ``coset_of[v]`` is the coset index of basis vector v and ``amplitudes[v]``
    is sqrt(p_v / lambda(coset_of[v])), zero when that lambda vanishes.
    """

    n: int
    k: int
    lambdas: np.ndarray
    coset_of: np.ndarray
    amplitudes: np.ndarray
    probs: np.ndarray

    def eigenvector(self, m: int) -> np.ndarray:
        return np.where(self.coset_of == m, self.amplitudes, 0.0)


def rho_eigensystem(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_ENUM_CAP) -> RhoEigensystem:
    _check(pair, ch, cap)
    probs = bsc_probs(ch)
    idx = dual_coset_index(pair)
    lam = np.bincount(idx, weights=probs, minlength=1 << pair.k)
    denom = lam[idx]
    amps = np.sqrt(np.divide(probs, denom, out=np.zeros_like(probs), where=denom > 0))
    return RhoEigensystem(pair.n, pair.k, lam, idx, amps, probs)


def rho_dense(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_RHO_CAP) -> np.ndarray:
    """rho built directly as the average of the 2^k projectors onto Z(c)|theta>^n."""
    _check(pair, ch, cap)
    amps = psc_amplitudes(ch)
    v = np.arange(1 << pair.n)
    rho = np.zeros((v.size, v.size))
    for c in codewords(pair, "C"):
        psi = amps * phase(v, c)
        rho += np.outer(psi, psi)
    return rho * 2.0 ** (-pair.k)


def eigen_residual(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_RHO_CAP) -> float:
    """max_m || rho psi(m) - lambda(m) psi(m) || with rho built densely."""
    rho = rho_dense(pair, ch, cap)
    eig = rho_eigensystem(pair, ch)
    worst = 0.0
    for m in range(1 << pair.k):
        psi = eig.eigenvector(m)
        worst = max(worst, float(np.linalg.norm(rho @ psi - eig.lambdas[m] * psi)))
    return worst


@dataclass(frozen=True, eq=False)
class OptimalFidelity:
    fidelity: float
    sigma_diag: np.ndarray
    leaders: np.ndarray
    normalized_trace: float


def optimal_fidelity(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_ENUM_CAP) -> OptimalFidelity:
    """q = sum of leader probabilities, with sigma~ = sum beta(v) |v*><v*|.

    beta(v) = 2^(n-k) p_{v*} / q, so 2^-(n-k) sigma~ is a state.
    """
    _check(pair, ch, cap)
    probs = bsc_probs(ch)
    leaders = map_leaders(pair, ch, cap)
    q = float(probs[leaders].sum())
    sigma = np.zeros(1 << pair.n)
    sigma[leaders] = 2.0 ** (pair.n - pair.k) * probs[leaders] / q
    return OptimalFidelity(q, sigma, leaders, float(sigma.sum() * 2.0 ** (pair.k - pair.n)))


def suboptimal_fidelity_avg(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_ENUM_CAP) -> float:
    """(sum_m sqrt(sum_{u in coset m} p_u^2))^2, from sigma = Tr_A of the joint state."""
    _check(pair, ch, cap)
    probs = bsc_probs(ch)
    sq = np.bincount(dual_coset_index(pair), weights=probs**2, minlength=1 << pair.k)
    return float(np.sum(np.sqrt(sq)) ** 2)


def trivial_fidelity_identity_sigma(
    pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_ENUM_CAP
) -> tuple[float, float]:
    """Fidelity against sigma = I / 2^n, evaluated in both displayed forms.

    Returns (2^(-k/2) sum_m sqrt(lambda(m) / 2^(n-k)))^2 and
    2^-n (sum_m sqrt(lambda(m)))^2; they must agree.
    """
    lam = rho_eigensystem(pair, ch, cap).lambdas
    nk = pair.n - pair.k
    first = (2.0 ** (-pair.k / 2) * np.sum(np.sqrt(lam / 2.0**nk))) ** 2
    second = 2.0 ** (-pair.n) * np.sum(np.sqrt(lam)) ** 2
    return float(first), float(second)


def _complement_shift_overlaps(pair: CodePair, eig: RhoEigensystem) -> np.ndarray:
    """T(x) = Tr[rho Pi_x] for every x in Z_2^(n-k).

    Pi_x = Z(y_x) D^(-1/2) rho D^(-1/2) Z(y_x) with D = diag(alpha), giving
    T(x) = 2^-(n-k) sum_m (sum_{u in coset m} sqrt(p_u) (-1)^(y_x . u))^2.
    Basis states with alpha = 0 are dropped (pseudo-inverse). The inner sum
    is a Walsh-Hadamard coefficient of sqrt(p) restricted to coset m, so
    when 2^k is small one transform per coset replaces the loop over x.
    """
    n, k = pair.n, pair.k
    nk = n - k
    if min(n << k, 1 << nk) << n > MAX_INDUCED_WORK:
        raise SizeLimit(f"SRM-induced distributions for [{n},{k}] exceed the work cap")
    root = np.sqrt(eig.probs)
    shifts = codewords(pair, "Ct")
    if n << k < 1 << nk:
        total = np.zeros(1 << n)
        for m in range(1 << k):
            total += wht(np.where(eig.coset_of == m, root, 0.0)) ** 2
        out = total[shifts] * 2.0**n
    else:
        v = np.arange(1 << n)
        out = np.zeros(1 << nk)
        for x, y in enumerate(shifts):
            signed = root * phase(v, y)
            sums = np.bincount(eig.coset_of, weights=signed, minlength=1 << k)
            out[x] = np.sum(sums**2)
    return out * 2.0 ** (-nk)


@dataclass(frozen=True, eq=False)
class SrmInduced:
    d: np.ndarray
    f: np.ndarray

    @property
    def bhattacharyya_squared(self) -> float:
        return float(np.sum(np.sqrt(self.d * self.f)) ** 2)


def srm_induced_distributions(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_ENUM_CAP) -> SrmInduced:
    """Outcome distributions of the secrecy SRM on the two states in the fidelity.

    d_{h'} = 2^-(n-k) sum_h Tr[rho_h Pi_{h'}] with Tr[rho_h Pi_{h'}] = T(h xor h');
    f_{h'} = 2^-(n-k) Tr[sigma~ Pi_{h'}], where only the diagonal of Pi_{h'},
    p_v / alpha(v), meets the diagonal sigma~.
    """
    eig = rho_eigensystem(pair, ch, cap)
    nk = pair.n - pair.k
    size = 1 << nk
    T = _complement_shift_overlaps(pair, eig)
    # h -> h xor h' permutes Z_2^(n-k), so each d_{h'} is the same full sum of T
    d = np.full(size, float(T.sum()) * 2.0 ** (-nk))
    alpha = eig.probs * 2.0**nk
    pi_diag = np.divide(eig.probs, alpha, out=np.zeros_like(alpha), where=alpha > 0)
    sigma = optimal_fidelity(pair, ch, cap).sigma_diag
    # Pi_{h'} = Z Pi_0 Z has the same diagonal for every h'
    f = np.full(size, float(sigma @ pi_diag) * 2.0 ** (-nk))
    return SrmInduced(d, f)


# Dense oracles ----------------------------------------------------------------


def _psd_sqrt(M: np.ndarray) -> np.ndarray:
    w, V = scipy.linalg.eigh(M)
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.T


def secrecy_gram_dense(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """Phi Phi^T with phi_h = Z(y_h) sqrt(rho), summed over h in Z_2^(n-k)."""
    rho = rho_dense(pair, ch, cap)
    root = _psd_sqrt(rho)
    v = np.arange(1 << pair.n)
    out = np.zeros_like(rho)
    for y in codewords(pair, "Ct"):
        z = phase(v, y)
        phi = z[:, None] * root
        out += phi @ phi.T
    return out


def fidelity_dense(pair: CodePair, ch: ChannelVector, sigma: np.ndarray, cap: int = DEFAULT_DENSE_CAP) -> float:
    """F(Psi_AB, 2^-(n-k) I (x) sigma) via matrix square roots and trace norms.

    Psi_AB = 2^-(n-k) sum_h |h><h| (x) rho_h is block diagonal, so
    F = (sum_h || sqrt(rho_h / 2^(n-k)) sqrt(sigma / 2^(n-k)) ||_1)^2.
    """
    rho = rho_dense(pair, ch, cap)
    nk = pair.n - pair.k
    v = np.arange(1 << pair.n)
    sig_root = _psd_sqrt(np.asarray(sigma, dtype=float) * 2.0 ** (-nk))
    total = 0.0
    for y in codewords(pair, "Ct"):
        z = phase(v, y)
        rho_h = rho * np.outer(z, z)
        block = _psd_sqrt(rho_h * 2.0 ** (-nk)) @ sig_root
        total += float(np.sum(scipy.linalg.svdvals(block)))
    return total**2


def dense_fidelity_triplet(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_DENSE_CAP) -> dict[str, float]:
    """Dense fidelities for the optimal, average, and maximally mixed sigma."""
    _check(pair, ch, cap)
    dim = 1 << pair.n
    opt = optimal_fidelity(pair, ch)
    sigma_opt = np.diag(opt.sigma_diag * 2.0 ** (pair.k - pair.n))
    sigma_avg = secrecy_gram_dense(pair, ch, cap) * 2.0 ** (pair.k - pair.n)
    sigma_id = np.eye(dim) / dim
    return {
        "optimal": fidelity_dense(pair, ch, sigma_opt, cap),
        "average": fidelity_dense(pair, ch, sigma_avg, cap),
        "identity": fidelity_dense(pair, ch, sigma_id, cap),
    }


def srm_induced_dense(pair: CodePair, ch: ChannelVector, cap: int = DEFAULT_RHO_CAP) -> SrmInduced:
    """d and f from the SRM built densely, as an oracle for :func:`srm_induced_distributions`.

    Pi_h = S^(-1/2) rho_h S^(-1/2) with S = sum_h rho_h, using a
    pseudo-inverse square root; S is not assumed diagonal.
    """
    nk = pair.n - pair.k
    rho = rho_dense(pair, ch, cap)
    v = np.arange(1 << pair.n)
    states = []
    for y in codewords(pair, "Ct"):
        z = phase(v, y)
        states.append(rho * np.outer(z, z))
    S = np.sum(states, axis=0)
    w, V = scipy.linalg.eigh(S)
    keep = w > PINV_RTOL * w.max()
    inv_root = (V[:, keep] / np.sqrt(w[keep])) @ V[:, keep].T
    povm = [inv_root @ r @ inv_root for r in states]
    total = np.sum(states, axis=0)
    d = np.array([np.sum(total * P) for P in povm]) * 2.0 ** (-nk)
    sigma = optimal_fidelity(pair, ch).sigma_diag * 2.0 ** (-nk)
    f = np.array([float(sigma @ np.diag(P)) for P in povm])
    return SrmInduced(d, f)
