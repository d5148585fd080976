"""Experiment orchestration: single-pair analysis, verification suites,
density sweeps and variety probes.

Every random draw is seeded from ``derive_seed(master, suite/cell keys,
trial)``, so results do not depend on how trials are spread over workers.
"""
from __future__ import annotations

import csv
import io
import logging
import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from . import geometry as geo
from .field import is_prime
from .pointset import (
    PointSet,
    SampleSpec,
    check_compatible,
    construct_variety,
    derive_seed,
    family_set,
    paraboloid_split,
    project_set,
    random_subset,
    sample,
    translate,
)
from .products import (
    bounds,
    distance_set,
    dot_product_set,
    extract_E0,
    nu_histogram,
    pinned_sizes,
    second_moment_rhs,
)
from .spectral import Spectrum, dft, line_table, naive_dft, plancherel_defect, salem_constant

log = logging.getLogger(__name__)

MAX_POINTS = 2_000_000
FLOAT_TOL = 1e-6


class ConfigError(ValueError):
    """Bad command-line or experiment configuration (CLI exit status 2)."""


class ReportInvariantError(AssertionError):
    """An AnalysisReport violated one of the inequalities it must satisfy."""


def check_cap(q: int, d: int) -> None:
    if q**d > MAX_POINTS:
        raise ConfigError(f"q^d = {q}^{d} exceeds the cap of {MAX_POINTS} points")


def odd_primes_upto(n: int) -> list[int]:
    return [p for p in range(3, n + 1) if is_prime(p)]


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _map(fn: Callable, tasks: Sequence, workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


# --- single-pair analysis --------------------------------------------------

REPORT_FIELDS = (
    "q", "d", "size_E", "size_F", "pi_size", "dist_size", "sum_nu2",
    "cs_num", "cs_den", "cs_bound", "fourier_bound", "valid_fourier",
    "energy_B", "max_count_E", "lines_hit_E", "size_E0", "pi_E0_size",
    "salem_E", "salem_F", "seed", "family_E", "family_F",
)


@dataclass(frozen=True)
class AnalysisReport:
    q: int
    d: int
    size_E: int
    size_F: int
    pi_size: int
    dist_size: int
    sum_nu2: int
    cs_num: int
    cs_den: int
    cs_bound: float
    fourier_bound: float
    valid_fourier: bool
    energy_B: float
    max_count_E: int
    lines_hit_E: int
    size_E0: int | None
    pi_E0_size: int | None
    salem_E: float
    salem_F: float
    seed: int
    family_E: str = ""
    family_F: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    def csv_row(self) -> list:
        return ["" if v is None else v for v in (getattr(self, k) for k in REPORT_FIELDS)]


def analyze(
    E: PointSet,
    F: PointSet,
    seed: int = 0,
    family_E: str = "",
    family_F: str = "",
) -> AnalysisReport:
    """Every scalar of interest for the pair (E, F), self-checked before return."""
    check_compatible(E, F)
    if E.size == 0 or F.size == 0:
        raise ConfigError("analysis needs two nonempty sets")
    nu = nu_histogram(E, F)
    spec_F = dft(F)
    table = line_table(E)
    br = bounds(E, F, nu=nu, spectrum_F=spec_F, table_E=table)
    pi = nu.support
    size_E0 = pi_E0 = None
    if table.lines_hit:
        E0 = extract_E0(E)
        size_E0 = E0.size
        pi_E0 = dot_product_set(E0, F)
        if not pi_E0 <= pi:
            raise ReportInvariantError("Pi(E0, F) is not contained in Pi(E, F)")
        if size_E0 != table.lines_hit or line_table(E0).max_count != 1:
            raise ReportInvariantError("E0 does not pick exactly one point per line")
    report = AnalysisReport(
        q=E.q,
        d=E.d,
        size_E=E.size,
        size_F=F.size,
        pi_size=len(pi),
        dist_size=len(distance_set(E, F)),
        sum_nu2=nu.second_moment,
        cs_num=br.cs_num,
        cs_den=br.cs_den,
        cs_bound=float(br.cs_bound),
        fourier_bound=br.fourier_bound,
        valid_fourier=br.valid_fourier,
        energy_B=br.energy,
        max_count_E=table.max_count,
        lines_hit_E=table.lines_hit,
        size_E0=size_E0,
        pi_E0_size=None if pi_E0 is None else len(pi_E0),
        salem_E=salem_constant(E),
        salem_F=salem_constant(F, spec_F),
        seed=seed,
        family_E=family_E,
        family_F=family_F,
    )
    if nu.total != E.size * F.size:
        raise ReportInvariantError("nu does not sum to |E||F|")
    if not br.cs_holds(report.pi_size):
        raise ReportInvariantError("Cauchy-Schwarz bound exceeds |Pi(E, F)|")
    if br.energy > table.max_count * F.size / F.q**F.d + 1e-9:
        raise ReportInvariantError("B(E, F) exceeds the Plancherel bound")
    if br.valid_fourier:
        if report.sum_nu2 > second_moment_rhs(E, F, br.energy) + FLOAT_TOL:
            raise ReportInvariantError("second moment exceeds its Fourier estimate")
        if br.fourier_bound > report.pi_size + FLOAT_TOL:
            raise ReportInvariantError("Fourier bound exceeds |Pi(E, F)|")
    return report


def reports_to_csv(reports: Iterable[AnalysisReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_FIELDS)
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue()


# --- verification suites ---------------------------------------------------

@dataclass
class TrialOutcome:
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    def expect(self, ok: bool, msg: str) -> None:
        self.checks += 1
        if not ok:
            self.failures.append(msg)

    def merge(self, other: "TrialOutcome") -> None:
        self.checks += other.checks
        self.failures += other.failures
        self.skipped += other.skipped


@dataclass
class SuiteResult:
    suite: str
    seed: int
    checks: int
    failures: list[str]
    skipped: list[str]

    @property
    def passed(self) -> bool:
        return not self.failures


def _random_size(rng: np.random.Generator, n: int, low: int = 1) -> int:
    return int(rng.integers(low, n + 1))


def _random_set(q: int, d: int, rng: np.random.Generator, exclude_origin: bool = False) -> PointSet:
    ambient = PointSet.full(q, d)
    if exclude_origin:
        ambient = ambient.without_origin()
    return random_subset(ambient, _random_size(rng, ambient.size), rng)


def trial_plancherel(q: int, d: int, seed: int) -> TrialOutcome:
    rng = _rng(seed)
    out = TrialOutcome()
    n = q**d
    E = random_subset(PointSet.full(q, d), _random_size(rng, n, low=0), rng)
    S = dft(E)
    tag = f"q={q} d={d} seed={seed}"
    defect = plancherel_defect(S, E.size)
    out.expect(defect <= 1e-9 * max(1.0, E.size / n), f"{tag}: Plancherel defect {defect:.3e}")
    out.expect(abs(S.values[0] - E.size / n) <= 1e-12, f"{tag}: zero coefficient {S.values[0]} != |E|/q^d")
    if q <= 7 and d <= 3:
        err = float(np.abs(S.values - naive_dft(E).values).max())
        out.expect(err <= 1e-9, f"{tag}: separable DFT differs from naive by {err:.3e}")
    return out


def check_second_moment(E: PointSet, F: PointSet, tag: str = "") -> TrialOutcome:
    """sum nu^2 <= |E|^2|F|^2/q + q^(2d-1)|E| B(E, F), for E without the origin.

    Pairs with the origin in E are outside the hypothesis: logged as skipped.
    """
    out = TrialOutcome()
    if E.has_origin:
        out.skipped.append(f"{tag}: origin in E, outside hypothesis")
        return out
    if E.size == 0 or F.size == 0:
        out.skipped.append(f"{tag}: empty set")
        return out
    nu = nu_histogram(E, F)
    lhs = nu.second_moment
    rhs = second_moment_rhs(E, F, bounds(E, F, nu=nu).energy)
    out.expect(lhs <= rhs + FLOAT_TOL, f"{tag}: sum nu^2 = {lhs} > {rhs!r}")
    return out


def trial_second_moment(q: int, d: int, seed: int) -> TrialOutcome:
    rng = _rng(seed)
    E = _random_set(q, d, rng, exclude_origin=True)
    F = _random_set(q, d, rng)
    return check_second_moment(E, F, f"q={q} d={d} seed={seed}")


def check_bound_pair(E: PointSet, F: PointSet, floor: float | None, tag: str,
                     spectrum_F: Spectrum | None = None) -> TrialOutcome:
    """cs_bound <= |Pi| exactly; when E avoids the origin also
    floor - tol <= fourier_bound and |Pi| >= ceil(fourier_bound - tol)."""
    out = TrialOutcome()
    nu = nu_histogram(E, F)
    pi = len(nu.support)
    br = bounds(E, F, nu=nu, spectrum_F=spectrum_F)
    out.expect(br.cs_holds(pi), f"{tag}: cs_bound {br.cs_num}/{br.cs_den} > |Pi| = {pi}")
    if floor is not None and br.valid_fourier:
        out.expect(br.fourier_bound >= floor - FLOAT_TOL,
                   f"{tag}: fourier_bound {br.fourier_bound!r} < closed form {floor!r}")
        out.expect(pi >= math.ceil(br.fourier_bound - FLOAT_TOL),
                   f"{tag}: |Pi| = {pi} < fourier_bound {br.fourier_bound!r}")
    return out


def trial_bounds(q: int, d: int, seed: int) -> TrialOutcome:
    rng = _rng(seed)
    n = q**d
    tag = f"q={q} d={d} seed={seed}"
    out = TrialOutcome()

    E_any = _random_set(q, d, rng)
    F = _random_set(q, d, rng)
    SF = dft(F)
    out.merge(check_bound_pair(E_any, F, None, f"{tag} [any]", SF))

    # E on a sphere of nonzero radius: at most 2 points per line.
    j = int(rng.integers(1, q))
    S = construct_variety(geo.sphere(q, d, j))
    E_sph = random_subset(S, _random_size(rng, S.size), rng)
    K = E_sph.size * F.size / n
    out.merge(check_bound_pair(E_sph, F, q * K / (K + 2), f"{tag} [sphere j={j}]", SF))

    # Origin-free E: at most q - 1 <= q points per line.
    E_gen = _random_set(q, d, rng, exclude_origin=True)
    K1 = E_gen.size * F.size / n / q
    out.merge(check_bound_pair(E_gen, F, q * K1 / (K1 + 1), f"{tag} [general]", SF))

    s = salem_constant(F, SF)
    out.merge(check_bound_pair(E_gen, F, q * F.size / (F.size + s * s * q), f"{tag} [salem s={s:.4f}]", SF))
    return out


def trial_e0(q: int, d: int, seed: int) -> TrialOutcome:
    rng = _rng(seed)
    tag = f"q={q} d={d} seed={seed}"
    out = TrialOutcome()
    E = _random_set(q, d, rng, exclude_origin=bool(rng.integers(0, 2)))
    F = _random_set(q, d, rng)
    if E.without_origin().size == 0:
        out.skipped.append(f"{tag}: E has no nonzero point")
        return out
    table = line_table(E)
    E0 = extract_E0(E)
    out.expect(E0.size == table.lines_hit, f"{tag}: |E0| = {E0.size} != lines hit {table.lines_hit}")
    out.expect(line_table(E0).max_count == 1, f"{tag}: E0 has two points on one line")
    out.expect(E0 <= E, f"{tag}: E0 not contained in E")
    out.expect(dot_product_set(E0, F) <= dot_product_set(E, F), f"{tag}: Pi(E0, F) not inside Pi(E, F)")
    out.expect(extract_E0(E) == E0, f"{tag}: E0 extraction not deterministic")
    return out


def trial_sphere_distance(q: int, d: int, seed: int) -> TrialOutcome:
    rng = _rng(seed)
    tag = f"q={q} d={d} seed={seed}"
    out = TrialOutcome()
    i, j = (int(v) for v in rng.integers(1, q, size=2))
    Si = construct_variety(geo.sphere(q, d, i))
    Sj = construct_variety(geo.sphere(q, d, j))
    E = random_subset(Si, _random_size(rng, Si.size), rng)
    F = random_subset(Sj, _random_size(rng, Sj.size), rng)
    pi = dot_product_set(E, F)
    dist = distance_set(E, F)
    out.expect(len(dist) == len(pi), f"{tag} i={i} j={j}: |D| = {len(dist)} != |Pi| = {len(pi)}")
    out.expect(dist == {(i + j - 2 * t) % q for t in pi}, f"{tag} i={i} j={j}: D != i + j - 2 Pi")
    return out


def trial_projection(q: int, d: int, seed: int) -> TrialOutcome:
    """Pi(B, F) = Pi(pi(B), pi(F)) for the x_d = 0 part B of E in the paraboloid."""
    rng = _rng(seed)
    tag = f"q={q} d={d} seed={seed}"
    out = TrialOutcome()
    P = construct_variety(geo.paraboloid(q, d))
    _, H = paraboloid_split(P)
    E = random_subset(H, _random_size(rng, H.size), rng) | random_subset(P, _random_size(rng, P.size, 0), rng)
    F = _random_set(q, d, rng)
    G, B = paraboloid_split(E)
    out.expect(G.size + B.size == E.size and (G | B) == E, f"{tag}: split is not a partition")
    out.expect(line_table(G).max_count <= 1, f"{tag}: G meets a line twice")
    lhs = dot_product_set(B, F)
    rhs = dot_product_set(project_set(B), project_set(F))
    out.expect(lhs == rhs, f"{tag}: Pi(B, F) = {sorted(lhs)} != Pi(pi B, pi F) = {sorted(rhs)}")
    out.expect(project_set(B).size == B.size, f"{tag}: projection not injective on B")
    return out


def exhaustive_sphere_lines(q: int, d: int, seed: int = 0) -> TrialOutcome:
    out = TrialOutcome()
    for j in range(1, q):
        S = construct_variety(geo.sphere(q, d, j))
        out.expect(not S.has_origin, f"q={q} d={d}: S_{j} contains the origin")
        m = line_table(S).max_count
        out.expect(m <= 2, f"q={q} d={d}: max |S_{j} cap l_x| = {m} > 2")
    return out


def exhaustive_paraboloid_lines(q: int, d: int, seed: int = 0) -> TrialOutcome:
    out = TrialOutcome()
    P = construct_variety(geo.paraboloid(q, d))
    out.expect(P.has_origin, f"q={q} d={d}: paraboloid misses the origin")
    out.expect(P.size == q ** (d - 1), f"q={q} d={d}: |P| = {P.size} != q^(d-1)")
    G, H = paraboloid_split(P)
    m = line_table(G).max_count
    out.expect(m <= 1, f"q={q} d={d}: max |G cap l_x| = {m} > 1")
    # H is a cone, so it is a union of whole punctured lines (possibly none).
    counts = line_table(H).counts
    out.expect(bool(np.all((counts == 0) | (counts == q - 1))),
               f"q={q} d={d}: H meets some line in a proper subset")
    if (q, d) == (5, 3):
        cnt = line_table(P).count((1, 2, 0))
        out.expect(cnt == q - 1, f"q=5 d=3: isotropic line (1,2,0) holds {cnt} points of P, expected {q - 1}")
    return out


def exhaustive_translate_lines(q: int, d: int, seed: int = 0) -> TrialOutcome:
    out = TrialOutcome()
    P = construct_variety(geo.paraboloid(q, d))
    Pbar = construct_variety(geo.conjugate_paraboloid(q, d))
    for r in np.flatnonzero(~Pbar.members):
        a = geo.unrank(int(r), q, d)
        m = line_table(translate(P, a)).max_count
        out.expect(m <= 2, f"q={q} d={d} a={a}: max |(P+a) cap l_x| = {m} > 2")
    return out


@dataclass(frozen=True)
class Suite:
    trial: Callable[[int, int, int], TrialOutcome]
    exhaustive: bool
    qmax: int | None = None
    dmin: int = 2
    dmax: int | None = None


SUITES: dict[str, Suite] = {
    "plancherel": Suite(trial_plancherel, False),
    "second-moment": Suite(trial_second_moment, False),
    "sphere-lines": Suite(exhaustive_sphere_lines, True),
    "paraboloid-lines": Suite(exhaustive_paraboloid_lines, True),
    "translate-lines": Suite(exhaustive_translate_lines, True, qmax=7, dmax=3),
    "bounds": Suite(trial_bounds, False),
    "e0": Suite(trial_e0, False),
    "sphere-distance": Suite(trial_sphere_distance, False, dmin=3),
    "projection": Suite(trial_projection, False, qmax=7, dmin=3, dmax=3),
}


def _run_task(task: tuple[str, int, int, int]) -> TrialOutcome:
    name, q, d, seed = task
    return SUITES[name].trial(q, d, seed)


def suite_tasks(name: str, qmax: int, dmax: int, trials: int, seed: int) -> list[tuple[str, int, int, int]]:
    s = SUITES[name]
    qs = odd_primes_upto(min(qmax, s.qmax or qmax))
    d_hi = min(dmax, s.dmax or dmax)
    ds = list(range(s.dmin, d_hi + 1))
    if not ds:
        ds = [s.dmin]
    suite_key = zlib.crc32(name.encode())
    tasks = []
    for q in qs:
        for d in ds:
            check_cap(q, d)
            for t in range(1 if s.exhaustive else trials):
                tasks.append((name, q, d, derive_seed(seed, suite_key, q, d, t)))
    return tasks


def run_suite(name: str, qmax: int = 13, dmax: int = 3, trials: int = 200, seed: int = 0,
              workers: int = 1) -> SuiteResult:
    if name not in SUITES:
        raise ConfigError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)} or 'all'")
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    total = TrialOutcome()
    for outcome in _map(_run_task, suite_tasks(name, qmax, dmax, trials, seed), workers):
        total.merge(outcome)
    for msg in total.skipped:
        log.info("[%s] skipped %s", name, msg)
    for msg in total.failures:
        log.error("[%s] FAILED %s", name, msg)
    return SuiteResult(name, seed, total.checks, total.failures, total.skipped)


def run_verify(suite: str = "all", **kw) -> list[SuiteResult]:
    names = list(SUITES) if suite == "all" else [suite]
    return [run_suite(n, **kw) for n in names]


# --- sweeps and probes -----------------------------------------------------

SWEEP_FIELDS = (
    "q", "d", "family_E", "family_F", "K_target", "K_actual", "size_E", "size_F",
    "trials", "min_pi_over_q", "mean_pi_over_q", "min_fourier_over_q",
    "min_proj_ratio_F", "max_count_E", "bound_violations", "pinned_fraction", "seed",
)

PROBE_FIELDS = (
    "q", "d", "variety", "K_target", "K_actual", "size_E", "size_F", "trials",
    "min_pi_over_q", "mean_pi_over_q", "min_fourier_over_q", "max_count_V", "seed",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters shared by ``sweep`` and ``probe``.

    ``families`` names the family of E and of F.  E is always drawn with the
    origin removed, matching the standing assumption of the Fourier bound.
    """

    qs: tuple[int, ...]
    ds: tuple[int, ...]
    ks: tuple[float, ...]
    trials: int = 20
    seed: int = 0
    families: tuple[str, str] = ("uniform-random", "uniform-random")
    j: int = 1
    translate: tuple[int, ...] | None = None
    variety_text: str | None = None
    lines: tuple[tuple[int, ...], ...] = ()
    pinned: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.ks or any(k <= 0 for k in self.ks):
            raise ConfigError("densities K must be positive")
        for q in self.qs:
            for d in self.ds:
                check_cap(q, d)

    def spec(self, which: int, q: int, d: int) -> SampleSpec:
        variety = geo.parse_variety(self.variety_text, q) if self.variety_text else None
        return SampleSpec(
            family=self.families[which], q=q, d=d, j=self.j,
            translate=self.translate, lines=self.lines, variety=variety,
            exclude_origin=(which == 0),
        )


def cell_sizes(amb_E: int, amb_F: int, n: int, K: float, F_whole: bool) -> tuple[int, int]:
    """Sizes with |E||F| close to K q^d, clipped to the family sizes."""
    target = K * n
    if F_whole:
        m_F = amb_F
        m_E = min(amb_E, max(1, math.ceil(target / m_F)))
    else:
        m_E = min(amb_E, max(1, math.ceil(math.sqrt(target))))
        m_F = min(amb_F, max(1, math.ceil(target / m_E)))
    return m_E, m_F


def _sweep_trial(task) -> dict:
    spec_E, spec_F, pinned = task
    E, F = sample(spec_E), sample(spec_F)
    br = bounds(E, F)
    pi = len(dot_product_set(E, F))
    out = {
        "pi": pi,
        "fourier": br.fourier_bound if br.valid_fourier else None,
        "violation": br.valid_fourier and pi < math.ceil(br.fourier_bound - FLOAT_TOL),
        "proj_ratio": project_set(F).size / F.size if F.d >= 2 else None,
        "max_count": line_table(E).max_count,
    }
    if pinned:
        out["pinned"] = float(np.mean(pinned_sizes(E) > E.q / 2))
    return out


def _cells(config: ExperimentConfig):
    for q in config.qs:
        for d in config.ds:
            for K in config.ks:
                yield q, d, K


def _aggregate(results: list[dict], q: int) -> dict:
    pis = [r["pi"] / q for r in results]
    fb = [r["fourier"] / q for r in results if r["fourier"] is not None]
    proj = [r["proj_ratio"] for r in results if r["proj_ratio"] is not None]
    pinned = [r["pinned"] for r in results if "pinned" in r]
    return {
        "min_pi_over_q": min(pis),
        "mean_pi_over_q": sum(pis) / len(pis),
        "min_fourier_over_q": min(fb) if fb else "",
        "min_proj_ratio_F": min(proj) if proj else "",
        "max_count_E": max(r["max_count"] for r in results),
        "bound_violations": sum(bool(r["violation"]) for r in results),
        "pinned_fraction": sum(pinned) / len(pinned) if pinned else "",
    }


def run_sweep(config: ExperimentConfig, workers: int = 1) -> list[dict]:
    """One row per (q, d, K) cell, aggregated over ``config.trials`` samples."""
    rows = []
    for cell_no, (q, d, K) in enumerate(_cells(config)):
        base_E, base_F = config.spec(0, q, d), config.spec(1, q, d)
        amb_E, amb_F = family_set(base_E).size, family_set(base_F).size
        if amb_E == 0 or amb_F == 0:
            raise ConfigError(f"q={q} d={d}: empty family set")
        F_whole = config.families[1] == "full-space"
        E_whole = config.families[0] == "full-space"
        m_E, m_F = cell_sizes(amb_E, amb_F, q**d, K, F_whole)
        if E_whole:
            m_E = amb_E
        tasks = []
        for t in range(config.trials):
            s = derive_seed(config.seed, cell_no, q, d, t)
            tasks.append((
                replace(base_E, size=m_E, seed=derive_seed(s, 0)),
                replace(base_F, size=m_F, seed=derive_seed(s, 1)),
                config.pinned,
            ))
        agg = _aggregate(_map(_sweep_trial, tasks, workers), q)
        rows.append({
            "q": q, "d": d, "family_E": config.families[0], "family_F": config.families[1],
            "K_target": K, "K_actual": m_E * m_F / q**d, "size_E": m_E, "size_F": m_F,
            "trials": config.trials, **agg, "seed": config.seed,
        })
    return rows


class ProbeRefused(ConfigError):
    pass


def run_probe(variety: geo.Variety, ks: Sequence[float], trials: int = 20, seed: int = 0,
              workers: int = 1) -> list[dict]:
    """Sample E in V and F in F_q^d at |E||F| ~ K q^d; record min |Pi(E, F)| / q.

    Varieties through the origin are refused.
    """
    q, d = variety.q, variety.d
    check_cap(q, d)
    V = construct_variety(variety)
    if V.has_origin:
        raise ProbeRefused(f"variety {variety.to_text()} contains the origin")
    if V.size == 0:
        raise ConfigError(f"variety {variety.to_text()} has no points over F_{q}")
    max_count = line_table(V).max_count
    rows = []
    for cell_no, K in enumerate(ks):
        if K <= 0:
            raise ConfigError("densities K must be positive")
        m_E, m_F = cell_sizes(V.size, q**d, q**d, K, False)
        tasks = []
        for t in range(trials):
            s = derive_seed(seed, cell_no, q, d, t)
            tasks.append((
                SampleSpec("variety", q, d, size=m_E, seed=derive_seed(s, 0), variety=variety),
                SampleSpec("uniform-random", q, d, size=m_F, seed=derive_seed(s, 1)),
                False,
            ))
        agg = _aggregate(_map(_sweep_trial, tasks, workers), q)
        rows.append({
            "q": q, "d": d, "variety": variety.to_text(), "K_target": K,
            "K_actual": m_E * m_F / q**d, "size_E": m_E, "size_F": m_F, "trials": trials,
            "min_pi_over_q": agg["min_pi_over_q"], "mean_pi_over_q": agg["mean_pi_over_q"],
            "min_fourier_over_q": agg["min_fourier_over_q"], "max_count_V": max_count,
            "seed": seed,
        })
    return rows


def rows_to_csv(rows: Sequence[dict], fields: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()
