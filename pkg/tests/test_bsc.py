from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cqduality import build_pair, load_code
from cqduality.bsccoding import (
    map_leaders,
    map_measurement_check,
    map_success_bsc,
    nonoptimality_witness,
    srm_povm_success,
    srm_second_moment,
    srm_success_bsc,
    syndrome_decoder_success,
)
from cqduality.bscsecrecy import (
    b_squared,
    b_squared_direct,
    bhattacharyya_uniform,
    permutation_invariance_check,
    posterior,
    posterior_bayes,
    posterior_coset_sum,
)
from cqduality.channelmodels import ChannelVector, bsc_probs
from cqduality.codebook import codewords, weights
from cqduality.errors import SizeLimit
from cqduality.gf2core import bits_to_int
from cqduality.psccoding import block_error_psc

from .conftest import generators

# posterior ------------------------------------------------------------------


def test_posterior_even3_by_hand(even3):
    ch = ChannelVector.from_ps(0.2, 3)
    top = 0.8**3 + 0.2**3
    side = 0.2 * 0.8
    assert top == pytest.approx(0.52) and side == pytest.approx(0.16)
    assert np.allclose(posterior(even3, ch, "000"), [top, side, side, side], atol=1e-15)


def test_posterior_identity_permutation_on_dual_codewords(even3):
    ch = ChannelVector.from_ps(0.2, 3)
    base = posterior(even3, ch, 0)
    for c in codewords(even3, "Cperp"):
        assert np.array_equal(posterior(even3, ch, int(c)), base)


def test_posterior_uniform_at_half(suite_pair):
    ch = ChannelVector.from_ps(0.5, suite_pair.n)
    for x in (0, 1, (1 << suite_pair.n) - 1):
        assert np.allclose(posterior(suite_pair, ch, x), 2.0**-suite_pair.k, atol=1e-15)


def test_posterior_point_mass_at_zero_noise(even3):
    report = permutation_invariance_check(even3, ChannelVector.from_ps(0.0, 3))
    assert report.passed
    for x in range(8):
        post = posterior(even3, ChannelVector.from_ps(0.0, 3), x)
        assert sorted(post) == [0.0, 0.0, 0.0, 1.0]


def test_permutation_invariance_even3(even3):
    assert permutation_invariance_check(even3, ChannelVector.from_ps(0.2, 3)).passed
    assert permutation_invariance_check(even3, ChannelVector.from_ps(0.5, 3)).passed


@given(generators(max_n=8), st.data())
def test_three_posterior_routes_agree(G, data):
    pair = build_pair(G)
    ps = data.draw(st.lists(st.floats(0.0, 0.5), min_size=pair.n, max_size=pair.n))
    ch = ChannelVector.from_ps(ps)
    x = data.draw(st.integers(0, (1 << pair.n) - 1))
    a = posterior(pair, ch, x)
    assert np.allclose(a, posterior_coset_sum(pair, ch, x), atol=1e-12)
    assert np.allclose(a, posterior_bayes(pair, ch, x), atol=1e-12)


def test_bhattacharyya_examples():
    assert bhattacharyya_uniform(np.full(8, 1 / 8)) == pytest.approx(1.0)
    assert bhattacharyya_uniform([1.0, 0, 0, 0]) == pytest.approx(0.5)
    b = bhattacharyya_uniform([0.52, 0.16, 0.16, 0.16])
    assert b == pytest.approx((math.sqrt(0.52) + 1.2) / 2, abs=1e-15)
    assert b == pytest.approx(0.960555, abs=1e-6)
    assert b * b == pytest.approx(0.92267, abs=1e-5)


@given(generators(max_n=10), st.floats(0.0, math.pi / 2))
def test_b_squared_is_psc_success(G, theta):
    pair = build_pair(G)
    ch = ChannelVector.from_thetas(theta, pair.n)
    assert b_squared(pair, ch) == pytest.approx(1 - block_error_psc(pair, ch), abs=1e-10)
    if theta > 0.05:
        # coset sums never pass through the transform; below this angle the
        # square root of rounding noise in tiny coset masses exceeds 1e-10
        assert b_squared_direct(pair, ch) == pytest.approx(1 - block_error_psc(pair, ch), abs=1e-10)


# MAP and SRM on the BSC ------------------------------------------------------


def ml_success(pair, ch):
    """Success of exhaustive ML decoding of C-perp, with no coset bookkeeping."""
    probs = bsc_probs(ch)
    words = codewords(pair, "Cperp")
    y = np.arange(1 << pair.n)
    like = probs[y[:, None] ^ words[None, :]]
    return float(like.max(axis=1).sum()) / words.size


def test_map_even3_example(even3):
    ch = ChannelVector.from_ps(0.1, 3)
    value = 0.9**3 + 3 * 0.1 * 0.9**2
    assert value == pytest.approx(0.972)
    assert map_success_bsc(even3, ch) == pytest.approx(value, abs=1e-15)
    assert syndrome_decoder_success(even3, ch) == pytest.approx(value, abs=1e-15)
    assert ml_success(even3, ch) == pytest.approx(value, abs=1e-15)
    assert map_leaders(even3, ch).tolist() == [0, bits_to_int("100"), bits_to_int("010"), bits_to_int("001")]


def test_map_projectors_even3(even3):
    report = map_measurement_check(even3, ChannelVector.from_ps(0.1, 3))
    assert report.complete and report.orthogonal
    assert report.projector_ranks == (4, 4)
    assert report.residual <= 1e-15


@pytest.mark.parametrize("name", ["zero:3", "full:3"])
def test_map_projectors_extreme(name):
    pair = build_pair(load_code(name))
    report = map_measurement_check(pair, ChannelVector.from_ps(0.2, 3))
    assert report.complete and report.orthogonal
    assert sum(report.projector_ranks) == 8


def test_map_endpoints(suite_pair):
    n, k = suite_pair.n, suite_pair.k
    assert map_success_bsc(suite_pair, ChannelVector.from_ps(0.0, n)) == 1.0
    assert map_success_bsc(suite_pair, ChannelVector.from_ps(0.5, n)) == pytest.approx(2.0 ** (k - n), abs=1e-15)


def test_srm_even3_example(even3):
    ch = ChannelVector.from_ps(0.1, 3)
    zero = (0.729**2 + 0.001**2) / 0.73
    other = (0.081**2 + 0.009**2) / 0.09
    assert zero == pytest.approx(0.728003, abs=1e-5)
    assert other == pytest.approx(0.0738, abs=1e-6)
    assert srm_success_bsc(even3, ch) == pytest.approx(zero + 3 * other, abs=1e-14)
    assert srm_success_bsc(even3, ch) == pytest.approx(0.9494, abs=1e-4)
    assert srm_povm_success(even3, ch) == pytest.approx(zero + 3 * other, abs=1e-14)
    assert map_success_bsc(even3, ch) - srm_success_bsc(even3, ch) > 1e-4


def test_srm_endpoints(suite_pair):
    n, k = suite_pair.n, suite_pair.k
    assert srm_success_bsc(suite_pair, ChannelVector.from_ps(0.0, n)) == 1.0
    half = ChannelVector.from_ps(0.5, n)
    assert srm_success_bsc(suite_pair, half) == pytest.approx(2.0 ** (k - n), abs=1e-14)
    assert srm_success_bsc(suite_pair, half) == pytest.approx(map_success_bsc(suite_pair, half), abs=1e-14)


@given(generators(max_n=9), st.data())
def test_map_srm_properties(G, data):
    pair = build_pair(G)
    ps = data.draw(st.lists(st.floats(0.0, 0.5), min_size=pair.n, max_size=pair.n))
    ch = ChannelVector.from_ps(ps)
    m = map_success_bsc(pair, ch)
    s = srm_success_bsc(pair, ch)
    assert s <= m + 1e-12
    assert m == pytest.approx(ml_success(pair, ch), abs=1e-12)
    assert m == pytest.approx(syndrome_decoder_success(pair, ch), abs=1e-12)
    assert s == pytest.approx(srm_povm_success(pair, ch), abs=1e-12)
    assert s == pytest.approx(srm_second_moment(pair, ch), abs=1e-12)
    report = map_measurement_check(pair, ch)
    assert report.complete and report.orthogonal and report.residual <= 1e-12


@given(generators(max_n=9), st.floats(0.0, 0.5))
def test_leaders_are_minimum_weight_for_uniform_noise(G, p):
    pair = build_pair(G)
    ch = ChannelVector.from_ps(p, pair.n)
    leaders = map_leaders(pair, ch)
    members = codewords(pair, "Ctperp")[:, None] ^ codewords(pair, "Cperp")[None, :]
    probs = bsc_probs(ch)
    assert np.allclose(probs[leaders], probs[members].max(axis=1), rtol=1e-12, atol=0)
    # below ~1e-3 high-weight probabilities can underflow to a tie at 0.0
    if 1e-3 < p < 0.49:
        assert np.array_equal(weights(leaders), weights(members).min(axis=1))


def test_nonoptimality_witness(even3):
    assert nonoptimality_witness(even3, ChannelVector.from_ps(0.1, 3)) > 1.0 + 1e-6
    assert nonoptimality_witness(even3, ChannelVector.from_ps(0.5, 3)) == pytest.approx(1.0)


def test_caps():
    pair = build_pair(load_code("rep:13"))
    with pytest.raises(SizeLimit):
        map_measurement_check(pair, ChannelVector.from_ps(0.1, 13))
    big = build_pair(load_code("rep:21"))
    with pytest.raises(SizeLimit):
        map_success_bsc(big, ChannelVector.from_ps(0.1, 21))
