"""Acceptance run: one test and one printed PASS/FAIL line per criterion."""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

from cqduality import build_pair, load_code
from cqduality import becduality as bec
from cqduality import bsccoding, bscsecrecy, entropyduality, psccoding, pscsecrecy
from cqduality.channelmodels import ChannelVector
from cqduality.suite import random_generator
from cqduality.wht import dual_indicator_check, wht

from .conftest import SUITE_CODES, SUITE_THETAS

SEED = 20240601


def instances(max_n: int | None = None, extra: tuple[str, ...] = ()):
    for name in (*SUITE_CODES, *extra):
        pair = build_pair(load_code(name))
        if max_n is not None and pair.n > max_n:
            continue
        for theta in SUITE_THETAS:
            yield name, pair, ChannelVector.from_thetas(theta, pair.n)


@pytest.fixture
def announce(capsys):
    def _announce(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {detail}")

    return _announce


def test_criterion_01_core_duality(announce):
    start = time.perf_counter()
    worst = 0.0
    count = 0
    for _, pair, ch in instances():
        worst = max(worst, abs((1 - psccoding.block_error_psc(pair, ch)) - bscsecrecy.b_squared_direct(pair, ch)))
        count += 1
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 1.0 and count == 20
    announce(1, ok, f"core duality: max |(1-Pe) - B^2| = {worst:.2e} over {count} instances in {elapsed:.3f}s")
    assert ok


def test_criterion_02_srm_oracle(announce):
    start = time.perf_counter()
    worst_pe = worst_matrix = 0.0
    count = 0
    for _, pair, ch in instances(max_n=8):
        oracle = psccoding.oracle_srm(pair, ch)
        spec = psccoding.spectral(pair, ch)
        worst_pe = max(worst_pe, abs(oracle.pe - psccoding.block_error_psc(pair, ch)))
        worst_matrix = max(worst_matrix, float(np.max(np.abs(oracle.pairwise - psccoding.srm_matrix(spec)))))
        count += 1
    elapsed = time.perf_counter() - start
    ok = worst_pe <= 1e-8 and worst_matrix <= 1e-8 and elapsed < 5.0
    announce(2, ok, f"SRM oracle: Pe {worst_pe:.2e}, pairwise {worst_matrix:.2e} over {count} instances in {elapsed:.3f}s")
    assert ok


def test_criterion_03_gram_eigenvalues(announce):
    worst = 0.0
    for _, pair, ch in instances(max_n=8):
        eig = np.sort(psccoding.gram_eigenvalues(pair, ch))
        closed = np.sort(psccoding.spectral(pair, ch).eigenvalues)
        worst = max(worst, float(np.max(np.abs(eig - closed))))
    ok = worst <= 1e-8
    announce(3, ok, f"Gram eigenvalues: max gap {worst:.2e}")
    assert ok


def test_criterion_04_bsc_map(announce):
    rng = np.random.default_rng(SEED)
    cases = [(pair, ch) for _, pair, ch in instances(max_n=12)]
    for _ in range(20):
        n = int(rng.integers(1, 13))
        pair = build_pair(random_generator(rng, n, int(rng.integers(0, n + 1))))
        cases.append((pair, ChannelVector.from_ps(rng.uniform(0, 0.5, size=n))))
    worst = 0.0
    exact = True
    for pair, ch in cases:
        r = bsccoding.map_measurement_check(pair, ch)
        worst = max(worst, r.residual)
        exact &= r.complete and r.orthogonal and sum(r.projector_ranks) == 1 << pair.n
    ok = worst <= 1e-12 and exact
    announce(4, ok, f"BSC MAP: measurement vs syndrome decoder {worst:.2e}, projectors exact={exact}, {len(cases)} cases")
    assert ok


def test_criterion_05_srm_suboptimal(announce):
    worst = -math.inf
    for _, pair, ch in instances():
        worst = max(worst, bsccoding.srm_success_bsc(pair, ch) - bsccoding.map_success_bsc(pair, ch))
    even3 = build_pair(load_code("even:3"))
    ch = ChannelVector.from_ps(0.1, 3)
    srm = bsccoding.srm_success_bsc(even3, ch)
    map_ = bsccoding.map_success_bsc(even3, ch)
    ok = worst <= 1e-12 and map_ - srm > 1e-4 and abs(srm - 0.9494) < 1e-4 and abs(map_ - 0.972) < 1e-12
    announce(5, ok, f"SRM <= MAP (max excess {worst:.2e}); even:3 p=0.1: SRM {srm:.6f} vs MAP {map_:.6f}")
    assert ok


def test_criterion_06_fidelity_chain(announce):
    chain_ok = True
    eq_gap = 0.0
    for _, pair, ch in instances():
        opt = pscsecrecy.optimal_fidelity(pair, ch).fidelity
        avg = pscsecrecy.suboptimal_fidelity_avg(pair, ch)
        ident = pscsecrecy.trivial_fidelity_identity_sigma(pair, ch)[1]
        chain_ok &= ident <= avg + 1e-10 and avg <= opt + 1e-10
        eq_gap = max(eq_gap, abs(opt - bsccoding.map_success_bsc(pair, ch)))
    dense_gap = 0.0
    dense_count = 0
    for _, pair, ch in instances(max_n=6, extra=("rep:4", "even:4", "rep:6", "even:6", "zero:3", "full:3")):
        dense = pscsecrecy.dense_fidelity_triplet(pair, ch)
        closed = {
            "optimal": pscsecrecy.optimal_fidelity(pair, ch).fidelity,
            "average": pscsecrecy.suboptimal_fidelity_avg(pair, ch),
            "identity": pscsecrecy.trivial_fidelity_identity_sigma(pair, ch)[1],
        }
        dense_gap = max(dense_gap, max(abs(dense[key] - closed[key]) for key in closed))
        dense_count += 1
    ok = chain_ok and eq_gap <= 1e-10 and dense_gap <= 1e-6
    announce(6, ok, f"fidelity chain holds={chain_ok}, optimal-MAP {eq_gap:.2e}, dense oracle {dense_gap:.2e} ({dense_count} cases)")
    assert ok


def test_criterion_07_srm_secrecy_trivial(announce):
    worst = worst_dense = 0.0
    for _, pair, ch in instances(extra=("hamming:15,11",)):
        r = pscsecrecy.srm_induced_distributions(pair, ch)
        u = 2.0 ** (pair.k - pair.n)
        worst = max(worst, float(np.max(np.abs(r.d - u))), float(np.max(np.abs(r.f - u))))
        if pair.n <= 8:
            dense = pscsecrecy.srm_induced_dense(pair, ch)
            worst_dense = max(worst_dense, float(np.max(np.abs(dense.d - u))), float(np.max(np.abs(dense.f - u))))
    ok = worst <= 1e-10 and worst_dense <= 1e-10
    announce(7, ok, f"SRM-induced d, f uniform: closed form {worst:.2e}, dense measurement {worst_dense:.2e}")
    assert ok


def test_criterion_08_entropy_dualities(announce):
    rng = np.random.default_rng(SEED + 8)
    cases = [(pair, ch) for _, pair, ch in instances(max_n=12)]
    for _ in range(10):
        n = int(rng.integers(1, 13))
        pair = build_pair(random_generator(rng, n, int(rng.integers(0, n + 1))))
        cases.append((pair, ChannelVector.from_ps(rng.uniform(0, 0.5, size=n))))
    sec = cod = 0.0
    for pair, ch in cases:
        rep = entropyduality.entropy_report(pair, ch)
        sec = max(sec, rep.secrecy_residual)
        cod = max(cod, rep.coding_residual)
    ok = sec <= 1e-10 and cod <= 1e-9
    announce(8, ok, f"entropy dualities: secrecy {sec:.2e}, coding {cod:.2e} over {len(cases)} cases")
    assert ok


def test_criterion_09_gexit_and_exit(announce):
    worst = 0.0
    monotone = True
    endpoint = 0.0
    for _, pair, ch in instances():
        for i in range(pair.n):
            g = entropyduality.gexit_duality_check(pair, ch, i, 1e-3)
            worst = max(worst, g.residual)
            # halving the step must not move the sum away from 1
            monotone &= abs(g.total_half - 1) <= abs(g.total - 1) + 1e-9
            endpoint = max(endpoint, entropyduality.exit_endpoint_check(pair, ch, i).residual)
    ok = worst <= 1e-4 and monotone and endpoint <= 1e-9
    announce(9, ok, f"GEXIT |g'+g-1| max {worst:.2e} (step 1e-3, halved, Richardson), halving consistent={monotone}, EXIT endpoint {endpoint:.2e}")
    assert ok


def test_criterion_10_bec(announce):
    rng = np.random.default_rng(SEED + 10)
    total = 250
    passed = 0
    for _ in range(total):
        n = int(rng.integers(1, 17))
        pair = build_pair(random_generator(rng, n, int(rng.integers(0, n + 1))))
        E = bec.ErasurePattern.of(n, [j + 1 for j in range(n) if rng.random() < 0.5])
        ok = (
            bec.bec_entropy_duality_check(pair, E).passed
            and bec.secrecy_coding_sum_check(pair, E).passed
            and bec.bec_bhattacharyya_guessing_check(pair, E).passed
        )
        bec.bec_cond_entropy(pair, E)  # raises on rank mismatch
        passed += ok
    ok = passed == total
    announce(10, ok, f"BEC identities exact on {passed}/{total} random instances, n <= 16")
    assert ok


def test_criterion_11_factor_graph_and_parseval(announce):
    rng = np.random.default_rng(SEED + 11)
    total = 150
    worst = 0.0
    for _ in range(total):
        n = int(rng.integers(1, 13))
        pair = build_pair(random_generator(rng, n, int(rng.integers(0, n + 1))))
        mu = rng.uniform(0.01, 1.0, size=(n, 2))
        lhs, rhs = dual_indicator_check(pair, mu)
        worst = max(worst, abs(lhs - rhs) / abs(lhs))
    parseval = 0.0
    for m in range(15):
        f = rng.normal(size=1 << m)
        parseval = max(parseval, abs(np.sum(wht(f) ** 2) - np.sum(f**2)) / np.sum(f**2))
    ok = worst <= 1e-10 and parseval <= 1e-10
    announce(11, ok, f"factor-graph duality rel. residual {worst:.2e} over {total} instances; Parseval {parseval:.2e} for m <= 14")
    assert ok
