"""Walsh-Hadamard transform and the binary factor-graph duality identity."""

from __future__ import annotations

import numpy as np

from .codebook import codewords
from .errors import DimensionMismatch
from .gf2core import CodePair, phase


def table_bits(f: np.ndarray) -> int:
    size = f.shape[0]
    if size < 1 or size & (size - 1):
        raise DimensionMismatch(f"table length {size} is not a power of two")
    return size.bit_length() - 1


def wht(f) -> np.ndarray:
    """Symmetric-normalized transform fhat(h) = 2^(-m/2) sum_g (-1)^(h.g) f(g).

    Butterfly in O(m 2^m); the normalization makes it an involution.
    """
    a = np.array(f, dtype=float)
    m = table_bits(a)
    size = a.size
    h = 1
    while h < size:
        a = a.reshape(-1, 2, h)
        x, y = a[:, 0, :], a[:, 1, :]
        a = np.stack((x + y, x - y), axis=1)
        h *= 2
    return a.reshape(size) * 2.0 ** (-m / 2)


def wht_direct(f) -> np.ndarray:
    """O(4^m) double-sum evaluation of :func:`wht`, used as an oracle."""
    a = np.asarray(f, dtype=float)
    m = table_bits(a)
    idx = np.arange(a.size)
    signs = phase(idx[:, None], idx[None, :])
    return signs @ a * 2.0 ** (-m / 2)


def _product_over_words(words: np.ndarray, mu: np.ndarray) -> np.ndarray:
    out = np.ones(words.size)
    for j in range(mu.shape[0]):
        out *= np.where((words >> j) & 1, mu[j, 1], mu[j, 0])
    return out


def dual_indicator_check(pair: CodePair, mu) -> tuple[float, float]:
    """Both sides of the binary factor-graph duality.

    lhs = sum over x in C of prod_j mu_j(x_j);
    rhs = 2^(k - n/2) sum over x in C-perp of prod_j muhat_j(x_j), where
    muhat_j is the two-point transform of mu_j.
    """
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (pair.n, 2):
        raise DimensionMismatch(f"expected {pair.n} two-entry factors, got shape {mu.shape}")
    mu_hat = np.stack((mu[:, 0] + mu[:, 1], mu[:, 0] - mu[:, 1]), axis=1) / np.sqrt(2.0)
    lhs = _product_over_words(codewords(pair, "C"), mu).sum()
    rhs = _product_over_words(codewords(pair, "Cperp"), mu_hat).sum()
    rhs *= 2.0 ** (pair.k - pair.n / 2)
    return float(lhs), float(rhs)
