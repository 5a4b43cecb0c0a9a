from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cqduality import build_pair, load_code
from cqduality.channelmodels import ChannelVector
from cqduality.errors import NumericalRankLoss, SizeLimit
from cqduality.psccoding import (
    block_error_psc,
    gram_eigenvalues,
    oracle_srm,
    sigma_hat,
    spectral,
    srm_matrix,
    srm_pairwise,
)

from .conftest import SUITE_THETAS, generators


def hand_pe_even3(c: float) -> float:
    lam = [(1 + 3 * c * c) / 4] + [(1 - c * c) / 4] * 3
    return 1 - (sum(math.sqrt(x) for x in lam) / 2) ** 2


@pytest.mark.parametrize("c", [0.0, 0.3, 0.6, 1.0])
def test_even3_spectrum_by_hand(even3, c):
    ch = ChannelVector.from_ps((1 - c) / 2, 3)
    spec = spectral(even3, ch)
    expected = [(1 + 3 * c * c) / 4] + [(1 - c * c) / 4] * 3
    assert np.allclose(spec.eigenvalues, expected, atol=1e-15)
    assert spec.coset_residual < 1e-15


def test_even3_pe_at_c06(even3):
    ch = ChannelVector.from_ps(0.2, 3)
    hand = 1 - ((math.sqrt(2.08) + 3 * 0.8) / 4) ** 2
    assert hand == pytest.approx(0.0773, abs=1e-4)
    assert block_error_psc(even3, ch) == pytest.approx(hand, abs=1e-14)
    assert oracle_srm(even3, ch).pe == pytest.approx(hand, abs=1e-8)
    assert sorted(gram_eigenvalues(even3, ch)) == pytest.approx([0.16, 0.16, 0.16, 0.52], abs=1e-12)


def test_even3_pairwise_entry_matches_oracle(even3):
    ch = ChannelVector.from_ps(0.2, 3)
    spec = spectral(even3, ch)
    assert srm_pairwise(spec, 0, 0) == pytest.approx(oracle_srm(even3, ch).pairwise[0, 0], abs=1e-8)


def test_blind_channel(suite_pair):
    ch = ChannelVector.from_thetas(0.0, suite_pair.n)
    spec = spectral(suite_pair, ch)
    k = suite_pair.k
    expected = np.zeros(1 << k)
    expected[0] = 2 ** (k / 2)
    assert np.allclose(spec.shat, expected, atol=1e-12)
    assert block_error_psc(suite_pair, ch) == pytest.approx(1 - 2.0**-k, abs=1e-14)
    assert oracle_srm(suite_pair, ch).pe == pytest.approx(1 - 2.0**-k, abs=1e-8)
    eig = np.sort(gram_eigenvalues(suite_pair, ch))
    assert eig[-1] == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(eig[:-1], 0.0, atol=1e-12)


def test_orthogonal_outputs(suite_pair):
    ch = ChannelVector.from_thetas(math.pi / 2, suite_pair.n)
    k = suite_pair.k
    spec = spectral(suite_pair, ch)
    assert np.allclose(spec.eigenvalues, 2.0**-k, atol=1e-15)
    assert block_error_psc(suite_pair, ch) == pytest.approx(0.0, abs=1e-14)
    assert srm_pairwise(spec, 0, 0) == pytest.approx(1.0, abs=1e-14)
    assert np.allclose(gram_eigenvalues(suite_pair, ch), 2.0**-k, atol=1e-12)


def test_repetition_two_orthogonal():
    pair = build_pair(load_code("rep:2"))
    assert oracle_srm(pair, ChannelVector.from_thetas(math.pi / 2, 2)).pe == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("theta", SUITE_THETAS)
def test_oracle_matches_closed_form(suite_pair, theta):
    ch = ChannelVector.from_thetas(theta, suite_pair.n)
    spec = spectral(suite_pair, ch)
    oracle = oracle_srm(suite_pair, ch)
    assert oracle.pe == pytest.approx(block_error_psc(suite_pair, ch), abs=1e-8)
    assert np.allclose(oracle.pairwise, srm_matrix(spec), atol=1e-8)
    assert np.allclose(np.sort(gram_eigenvalues(suite_pair, ch)), np.sort(spec.eigenvalues), atol=1e-8)


@given(generators(max_n=8), st.floats(0.0, math.pi / 2))
def test_pairwise_depends_on_xor_only(G, theta):
    pair = build_pair(G)
    spec = spectral(pair, ChannelVector.from_thetas(theta, pair.n))
    M = srm_matrix(spec)
    size = M.shape[0]
    for g in range(min(size, 8)):
        for t in range(min(size, 8)):
            assert M[g, t] == srm_pairwise(spec, g ^ t, 0)
    assert np.allclose(M.sum(axis=0), 1.0, atol=1e-10)
    assert np.sum(sigma_hat(spec) ** 2) == pytest.approx(np.sum(spec.sigma**2), abs=1e-10)


@given(generators(max_n=10), st.data())
def test_spectrum_equals_coset_masses(G, data):
    pair = build_pair(G)
    ts = data.draw(st.lists(st.floats(0.0, math.pi / 2), min_size=pair.n, max_size=pair.n))
    spec = spectral(pair, ChannelVector.from_thetas(ts))
    assert spec.coset_residual <= 1e-12
    assert spec.eigenvalues.sum() == pytest.approx(1.0, abs=1e-12)


@given(generators(max_n=7), st.data())
def test_oracle_random_codes_per_bit_angles(G, data):
    pair = build_pair(G)
    ts = data.draw(st.lists(st.floats(0.05, math.pi / 2), min_size=pair.n, max_size=pair.n))
    ch = ChannelVector.from_thetas(ts)
    try:
        oracle = oracle_srm(pair, ch)
    except NumericalRankLoss:
        return
    assert oracle.pe == pytest.approx(block_error_psc(pair, ch), abs=1e-8)


def test_oracle_size_limit():
    pair = build_pair(load_code("rep:13"))
    with pytest.raises(SizeLimit):
        oracle_srm(pair, ChannelVector.from_thetas(0.5, 13))


def test_numerical_rank_loss():
    # at a tiny positive angle all 2^10 codeword states are nearly parallel
    pair = build_pair(load_code("full:10"))
    with pytest.raises(NumericalRankLoss):
        oracle_srm(pair, ChannelVector.from_thetas(1e-4, 10))
