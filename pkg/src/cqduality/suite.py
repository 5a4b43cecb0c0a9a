"""Cross-module verification suite with a deterministic JSON report."""

from __future__ import annotations

import json
import math
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import becduality as bec
from . import bsccoding, bscsecrecy, entropyduality, psccoding, pscsecrecy
from .channelmodels import ChannelVector
from .codebook import load_code
from .errors import ConfigError, DualityError, SizeLimit
from .gf2core import BitMatrix, CodePair, build_pair, rank
from .wht import dual_indicator_check, wht

SCHEMA_VERSION = 1
DEFAULT_CODES = ("rep:3", "even:3", "hamming:7,4", "e8")
DEFAULT_THETAS = (0.0, math.pi / 6, math.pi / 3, 1.2, math.pi / 2)


@dataclass(frozen=True)
class SuiteConfig:
    codes: tuple[str, ...] = DEFAULT_CODES
    thetas: tuple[float, ...] = DEFAULT_THETAS
    enum_cap: int = 20
    oracle_cap: int = 12
    oracle_k_cap: int = 10
    dense_cap: int = 6
    rho_cap: int = 8
    brute_cap: int = 12
    gexit_step: float = 1e-3
    seed: int = 0
    bec_instances: int = 200
    bec_max_n: int = 16
    factor_graph_instances: int = 100
    factor_graph_max_n: int = 12
    parseval_max_m: int = 14
    randomized: bool = True
    include_timing: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        for name in ("enum_cap", "oracle_cap", "oracle_k_cap", "dense_cap", "rho_cap", "brute_cap"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if not self.gexit_step > 0:
            raise ConfigError("gexit_step must be positive")


@dataclass
class Check:
    """One identity or inequality with an explicit tolerance.

    relation 'eq' passes when |lhs - rhs| <= tolerance, 'le' when
    lhs <= rhs + tolerance. Non-fatal checks are reported but never fail
    the suite.
    """

    name: str
    instance: str
    lhs: float | None = None
    rhs: float | None = None
    tolerance: float = 0.0
    relation: str = "eq"
    status: str = "pass"
    residual: float | None = None
    detail: str = ""
    fatal: bool = True
    seconds: float = field(default=0.0, compare=False)

    def evaluate(self) -> Check:
        if self.status == "skipped":
            return self
        gap = float(self.lhs) - float(self.rhs)
        self.residual = abs(gap) if self.relation == "eq" else max(gap, 0.0)
        ok = self.residual <= self.tolerance
        if not math.isfinite(self.residual):
            ok = False
        self.status = "pass" if ok else ("fail" if self.fatal else "warn")
        return self


@dataclass
class SuiteReport:
    config: SuiteConfig
    instances: list[dict] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def passed(self) -> bool:
        return not self.failures

    def counts(self) -> dict[str, int]:
        out = {"pass": 0, "fail": 0, "skipped": 0, "warn": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def to_dict(self) -> dict:
        checks = []
        for c in self.checks:
            d = asdict(c)
            if not self.config.include_timing:
                d.pop("seconds")
            checks.append(d)
        config = asdict(self.config)
        # parallelism never changes results, so it stays out of the report
        config.pop("workers")
        return {
            "schema": SCHEMA_VERSION,
            "config": config,
            "instances": self.instances,
            "checks": checks,
            "summary": {**self.counts(), "passed": self.passed},
        }

    def to_json(self) -> str:
        return json.dumps(_jsonable(self.to_dict()), sort_keys=True, indent=2)

    def table(self) -> str:
        rows = [f"{'status':7} {'check':34} {'instance':26} {'residual':>11} {'tol':>8}"]
        for c in self.checks:
            res = "-" if c.residual is None else f"{c.residual:.3e}"
            line = f"{c.status:7} {c.name:34} {c.instance:26} {res:>11} {c.tolerance:8.0e}"
            if self.config.include_timing:
                line += f" {c.seconds * 1e3:9.2f}ms"
            if c.detail and c.status != "pass":
                line += f"  ({c.detail})"
            rows.append(line)
        cnt = self.counts()
        rows.append(
            f"{cnt['pass']} passed, {cnt['fail']} failed, {cnt['skipped']} skipped, {cnt['warn']} warnings"
        )
        return "\n".join(rows)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if math.isfinite(v) else str(v)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


class _Recorder:
    def __init__(self, report: SuiteReport) -> None:
        self.report = report

    def run(self, name: str, instance: str, fn: Callable[[], tuple], *, tol: float, relation: str = "eq",
            fatal: bool = True) -> None:
        """fn returns (lhs, rhs) or (lhs, rhs, detail)."""
        start = time.perf_counter()
        try:
            out = fn()
            lhs, rhs = out[0], out[1]
            detail = out[2] if len(out) > 2 else ""
            check = Check(name, instance, float(lhs), float(rhs), tol, relation, detail=detail, fatal=fatal)
            check.evaluate()
        except SizeLimit as exc:
            check = Check(name, instance, tolerance=tol, relation=relation, status="skipped",
                          detail=f"SizeLimit: {exc}", fatal=fatal)
        except DualityError as exc:
            check = Check(name, instance, tolerance=tol, relation=relation, status="fail" if fatal else "warn",
                          detail=f"{type(exc).__name__}: {exc}", fatal=fatal)
        check.seconds = time.perf_counter() - start
        self.report.checks.append(check)


def _instance_checks(rec: _Recorder, code: str, pair: CodePair, ch: ChannelVector, cfg: SuiteConfig) -> None:
    tag = f"{code}@theta={ch.thetas[0]:.6g}"
    n, k = pair.n, pair.k

    def core():
        return 1.0 - psccoding.block_error_psc(pair, ch), bscsecrecy.b_squared_direct(pair, ch, cfg.enum_cap)

    rec.run("core_duality", tag, core, tol=1e-10)

    def spec_ck():
        s = psccoding.spectral(pair, ch, cap=cfg.enum_cap)
        return s.coset_residual, 0.0

    rec.run("shat_coset_sum", tag, spec_ck, tol=1e-10)
    spec = psccoding.spectral(pair, ch, verify=False)
    rec.run("shat_normalization", tag, lambda: (spec.eigenvalues.sum(), 1.0), tol=1e-10)
    rec.run("srm_row_stochastic", tag,
            lambda: (float(np.max(np.abs(psccoding.srm_matrix(spec).sum(axis=0) - 1.0))), 0.0), tol=1e-10)
    rec.run("srm_parseval", tag,
            lambda: (np.sum(psccoding.sigma_hat(spec) ** 2), np.sum(spec.sigma**2)), tol=1e-10)

    def oracle_pe():
        o = psccoding.oracle_srm(pair, ch, cfg.oracle_cap, cfg.oracle_k_cap)
        return o.pe, psccoding.block_error_psc(pair, ch)

    def oracle_matrix():
        o = psccoding.oracle_srm(pair, ch, cfg.oracle_cap, cfg.oracle_k_cap)
        return float(np.max(np.abs(o.pairwise - psccoding.srm_matrix(spec)))), 0.0

    def gram():
        eig = psccoding.gram_eigenvalues(pair, ch, cfg.oracle_cap)
        return float(np.max(np.abs(eig - np.sort(spec.eigenvalues)))), 0.0

    rec.run("srm_oracle_pe", tag, oracle_pe, tol=1e-8)
    rec.run("srm_oracle_pairwise", tag, oracle_matrix, tol=1e-8)
    rec.run("gram_eigenvalues", tag, gram, tol=1e-8)

    def bayes():
        worst = 0.0
        if n > cfg.brute_cap:
            raise SizeLimit(f"n={n} exceeds brute-force cap {cfg.brute_cap}")
        for x in (0, (1 << n) - 1, 1):
            worst = max(worst, float(np.max(np.abs(
                bscsecrecy.posterior(pair, ch, x) - bscsecrecy.posterior_bayes(pair, ch, x)))))
        return worst, 0.0

    rec.run("posterior_bayes", tag, bayes, tol=1e-12)

    def perm():
        r = bscsecrecy.permutation_invariance_check(pair, ch, cfg.brute_cap)
        return max(r.max_sorted_residual, r.b_max - r.b_min), 0.0

    rec.run("posterior_permutation", tag, perm, tol=1e-12)

    def map_meas():
        r = bsccoding.map_measurement_check(pair, ch, cfg.brute_cap)
        return r.residual, 0.0

    def map_proj():
        r = bsccoding.map_measurement_check(pair, ch, cfg.brute_cap)
        return float(r.complete and r.orthogonal), 1.0

    rec.run("map_vs_syndrome_decoder", tag, map_meas, tol=1e-12)
    rec.run("map_projectors_exact", tag, map_proj, tol=0.0)
    rec.run("srm_le_map", tag,
            lambda: (bsccoding.srm_success_bsc(pair, ch, cfg.enum_cap), bsccoding.map_success_bsc(pair, ch, cfg.enum_cap)),
            tol=1e-12, relation="le")
    rec.run("srm_second_moment", tag,
            lambda: (bsccoding.srm_second_moment(pair, ch, cfg.enum_cap), bsccoding.srm_success_bsc(pair, ch, cfg.enum_cap)),
            tol=1e-12)
    rec.run("srm_povm_trace", tag,
            lambda: (bsccoding.srm_povm_success(pair, ch, cfg.brute_cap), bsccoding.srm_success_bsc(pair, ch, cfg.enum_cap)),
            tol=1e-12)

    def fid():
        opt = pscsecrecy.optimal_fidelity(pair, ch, cfg.enum_cap)
        avg = pscsecrecy.suboptimal_fidelity_avg(pair, ch, cfg.enum_cap)
        ident = pscsecrecy.trivial_fidelity_identity_sigma(pair, ch, cfg.enum_cap)
        return opt, avg, ident

    rec.run("fidelity_identity_le_avg", tag, lambda: (fid()[2][0], fid()[1]), tol=1e-10, relation="le")
    rec.run("fidelity_avg_le_optimal", tag, lambda: (fid()[1], fid()[0].fidelity), tol=1e-10, relation="le")
    rec.run("fidelity_optimal_eq_map", tag,
            lambda: (fid()[0].fidelity, bsccoding.map_success_bsc(pair, ch, cfg.enum_cap)), tol=1e-14)
    rec.run("fidelity_identity_two_forms", tag, lambda: fid()[2], tol=1e-12)
    rec.run("sigma_tilde_trace", tag, lambda: (fid()[0].normalized_trace, 1.0), tol=1e-12)

    def dense(which: str):
        def run():
            vals = pscsecrecy.dense_fidelity_triplet(pair, ch, cfg.dense_cap)
            opt, avg, ident = fid()
            closed = {"optimal": opt.fidelity, "average": avg, "identity": ident[1]}[which]
            return vals[which], closed
        return run

    for which in ("optimal", "average", "identity"):
        rec.run(f"dense_fidelity_{which}", tag, dense(which), tol=1e-6)

    def gram_diag():
        G = pscsecrecy.secrecy_gram_dense(pair, ch, cfg.dense_cap)
        alpha = pscsecrecy.rho_eigensystem(pair, ch).probs * 2.0 ** (n - k)
        return float(np.max(np.abs(G - np.diag(alpha)))), 0.0

    rec.run("secrecy_gram_diagonal", tag, gram_diag, tol=1e-8)
    rec.run("rho_eigenvectors", tag, lambda: (pscsecrecy.eigen_residual(pair, ch, cfg.rho_cap), 0.0), tol=1e-8)

    def induced(which: str):
        def run():
            r = pscsecrecy.srm_induced_distributions(pair, ch, cfg.enum_cap)
            dist = r.d if which == "d" else r.f
            return float(np.max(np.abs(dist - 2.0 ** (k - n)))), 0.0
        return run

    rec.run("srm_induced_d_uniform", tag, induced("d"), tol=1e-10)
    rec.run("srm_induced_f_uniform", tag, induced("f"), tol=1e-10)

    def induced_dense():
        r = pscsecrecy.srm_induced_dense(pair, ch, cfg.rho_cap)
        return float(max(np.max(np.abs(r.d - 2.0 ** (k - n))), np.max(np.abs(r.f - 2.0 ** (k - n))))), 0.0

    rec.run("srm_induced_dense_uniform", tag, induced_dense, tol=1e-10)

    rec.run("vn_secrecy_equality", tag,
            lambda: entropyduality.vn_secrecy_equality_check(pair, ch, cfg.brute_cap), tol=1e-10)
    rec.run("vn_coding_duality", tag,
            lambda: entropyduality.vn_coding_duality_check(pair, ch, cfg.brute_cap), tol=1e-9)

    def exit_end():
        worst = 0.0
        for i in range(n):
            worst = max(worst, entropyduality.exit_endpoint_check(pair, ch, i, cfg.brute_cap).residual)
        return worst, 0.0

    rec.run("exit_endpoint", tag, exit_end, tol=1e-9)

    def gexit():
        r = entropyduality.gexit_duality_check(pair, ch, 0, cfg.gexit_step, cfg.brute_cap)
        return r.residual, 0.0

    rec.run("gexit_duality", tag, gexit, tol=1e-4)


def random_generator(rng: np.random.Generator, n: int, k: int) -> BitMatrix:
    """Uniformly random full-rank k x n generator."""
    while True:
        rows = [int(rng.integers(0, 1 << n)) for _ in range(k)]
        G = BitMatrix(k, n, tuple(rows))
        if rank(G) == k:
            return G


def random_complement(rng: np.random.Generator, G: BitMatrix) -> BitMatrix:
    """A random valid complement, as a check that no step depends on the default choice."""
    n, k = G.cols, G.rows
    rows: list[int] = []
    while len(rows) < n - k:
        cand = int(rng.integers(0, 1 << n))
        if rank(BitMatrix(k + len(rows) + 1, n, G.data + tuple(rows) + (cand,))) == k + len(rows) + 1:
            rows.append(cand)
    return BitMatrix(n - k, n, tuple(rows))


def _global_checks(rec: _Recorder, pairs: dict[str, CodePair], cfg: SuiteConfig) -> None:
    rng = np.random.default_rng(cfg.seed)

    def bec_family():
        totals = {"cond_entropy": 0, "entropy_duality": 0, "secrecy_sum": 0, "guessing": 0}
        for _ in range(cfg.bec_instances):
            n = int(rng.integers(1, cfg.bec_max_n + 1))
            k = int(rng.integers(0, n + 1))
            pair = build_pair(random_generator(rng, n, k))
            E = bec.ErasurePattern.of(n, [j + 1 for j in range(n) if rng.random() < rng.random()])
            try:
                bec.bec_cond_entropy(pair, E)
                totals["cond_entropy"] += 1
            except DualityError:
                pass
            totals["entropy_duality"] += bec.bec_entropy_duality_check(pair, E).passed
            totals["secrecy_sum"] += bec.secrecy_coding_sum_check(pair, E).passed
            totals["guessing"] += bec.bec_bhattacharyya_guessing_check(pair, E).passed
        return totals

    bec_totals = bec_family()
    for key, count in bec_totals.items():
        rec.run(f"bec_{key}", f"random x{cfg.bec_instances}", lambda c=count: (c, cfg.bec_instances), tol=0.0)

    def factor_graph():
        worst = 0.0
        for _ in range(cfg.factor_graph_instances):
            n = int(rng.integers(1, cfg.factor_graph_max_n + 1))
            k = int(rng.integers(0, n + 1))
            pair = build_pair(random_generator(rng, n, k))
            mu = rng.uniform(0.05, 1.0, size=(n, 2))
            lhs, rhs = dual_indicator_check(pair, mu)
            worst = max(worst, abs(lhs - rhs) / abs(lhs))
        return worst, 0.0

    rec.run("factor_graph_duality", f"random x{cfg.factor_graph_instances}", factor_graph, tol=1e-10)

    def parseval():
        worst = 0.0
        for m in range(cfg.parseval_max_m + 1):
            f = rng.normal(size=1 << m)
            worst = max(worst, abs(np.sum(wht(f) ** 2) - np.sum(f**2)) / np.sum(f**2))
        return worst, 0.0

    rec.run("wht_parseval", f"m<={cfg.parseval_max_m}", parseval, tol=1e-10)

    def complement_choice():
        worst = 0.0
        for name, pair in pairs.items():
            if pair.n > cfg.brute_cap:
                continue
            alt = build_pair(pair.G, random_complement(rng, pair.G))
            for theta in (math.pi / 6, 1.2):
                ch = ChannelVector.from_thetas(theta, pair.n)
                worst = max(
                    worst,
                    abs(1.0 - psccoding.block_error_psc(alt, ch) - bscsecrecy.b_squared(alt, ch)),
                    abs(bscsecrecy.b_squared(alt, ch) - bscsecrecy.b_squared(pair, ch)),
                    abs(pscsecrecy.optimal_fidelity(alt, ch).fidelity - bsccoding.map_success_bsc(alt, ch)),
                    abs(np.subtract(*entropyduality.vn_coding_duality_check(alt, ch, cfg.brute_cap))),
                    float(np.max(np.abs(pscsecrecy.srm_induced_distributions(alt, ch).d - 2.0 ** (alt.k - alt.n)))),
                )
        return worst, 0.0

    if cfg.randomized:
        rec.run("random_complement_invariance", "suite codes", complement_choice, tol=1e-10)

    def witness():
        best = 0.0
        for pair in pairs.values():
            if pair.n <= cfg.enum_cap:
                best = max(best, bsccoding.nonoptimality_witness(pair, ChannelVector.from_ps(0.1, pair.n), cfg.enum_cap))
        return best, 1.0 + 1e-6

    if pairs:
        rec.run("srm_nonoptimality_witness", "suite codes @p=0.1",
                lambda: (witness()[1], witness()[0]), tol=0.0, relation="le")


def _monotonicity(rec: _Recorder, code: str, pair: CodePair, thetas: tuple[float, ...]) -> None:
    grid = sorted(thetas)
    pes = [psccoding.block_error_psc(pair, ChannelVector.from_thetas(t, pair.n)) for t in grid]
    worst = max((b - a for a, b in zip(pes, pes[1:])), default=0.0)
    rec.run("pe_monotone_in_theta", code, lambda: (max(worst, 0.0), 0.0), tol=1e-12, fatal=False)


def run_suite(config: SuiteConfig | None = None) -> SuiteReport:
    """Run every per-instance and global check; SizeLimit is a skip, not a failure.

    With ``workers > 1`` instances run on a thread pool; check order in the
    report is the same as in a sequential run.
    """
    cfg = config or SuiteConfig()
    report = SuiteReport(cfg)
    pairs: dict[str, CodePair] = {}
    for code in cfg.codes:
        try:
            pairs[code] = build_pair(load_code(code))
        except DualityError as exc:
            raise ConfigError(f"cannot load code {code!r}: {exc}") from exc
    jobs = []
    for code, pair in pairs.items():
        for theta in cfg.thetas:
            ch = ChannelVector.from_thetas(theta, pair.n)
            report.instances.append({"code": code, "n": pair.n, "k": pair.k, "theta": float(theta),
                                     "p": float(ch.ps[0])})
            jobs.append((code, pair, ch))

    def one(job) -> list[Check]:
        part = SuiteReport(cfg)
        _instance_checks(_Recorder(part), *job, cfg)
        return part.checks

    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            parts = list(pool.map(one, jobs))
    else:
        parts = [one(job) for job in jobs]
    for part in parts:
        report.checks.extend(part)
    rec = _Recorder(report)
    if cfg.thetas:
        for code, pair in pairs.items():
            _monotonicity(rec, code, pair, cfg.thetas)
    if cfg.randomized and pairs:
        _global_checks(rec, pairs, cfg)
    return report
