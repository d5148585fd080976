"""Exit criteria.  Each test prints one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see only these lines, or
``pytest -v`` for everything.
"""
import math

import numpy as np
import pytest

import oracles
from ffdot import geometry as geo
from ffdot import harness
from ffdot.pointset import (
    PointSet,
    construct_variety,
    derive_seed,
    paraboloid_split,
    project_set,
    random_subset,
    translate,
)
from ffdot.products import (
    bounds,
    distance_set,
    dot_product_set,
    extract_E0,
    nu_histogram,
    second_moment_rhs,
)
from ffdot.spectral import dft, energy_B, line_table, naive_dft, plancherel_defect, salem_constant

SEED = 20240601
QS = (3, 5, 7, 11, 13)
DS = (2, 3)
GRID = [(q, d) for q in QS for d in DS]
TOL = 1e-6


def report(capsys, number, title, ok, detail):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number} ({title}): {detail}")
    assert ok, detail


def rng_for(*keys):
    return np.random.Generator(np.random.PCG64(derive_seed(SEED, *keys)))


def random_set(q, d, rng, exclude_origin=False, low=1):
    ambient = PointSet.full(q, d)
    if exclude_origin:
        ambient = ambient.without_origin()
    return random_subset(ambient, int(rng.integers(low, ambient.size + 1)), rng)


def trial_pairs(tag, trials=200, exclude_origin=False):
    for q, d in GRID:
        for t in range(trials):
            rng = rng_for(tag, q, d, t)
            yield q, d, t, random_set(q, d, rng, exclude_origin), random_set(q, d, rng)


def test_1_plancherel(capsys):
    worst_defect = worst_naive = 0.0
    bad = []
    for q, d in GRID:
        for t in range(100):
            E = random_set(q, d, rng_for(1, q, d, t), low=0)
            S = dft(E)
            defect = plancherel_defect(S, E.size)
            worst_defect = max(worst_defect, defect)
            if defect > 1e-9:
                bad.append((q, d, t, "plancherel", defect))
            if q <= 7:
                err = float(np.abs(S.values - naive_dft(E).values).max())
                worst_naive = max(worst_naive, err)
                if err > 1e-9:
                    bad.append((q, d, t, "naive", err))
    report(capsys, 1, "Plancherel and naive DFT agreement", not bad,
           f"1000 sets, max defect {worst_defect:.2e}, max |dft - naive| {worst_naive:.2e}, violations {bad[:3]}")


def test_2_cauchy_schwarz_exact(capsys):
    bad = []
    n = 0
    for q, d, t, E, F in trial_pairs(2):
        nu = nu_histogram(E, F)
        pi = len(nu.support)
        # |E|^2|F|^2 / sum nu^2 <= |Pi|, cross-multiplied in integers
        if not E.size**2 * F.size**2 <= pi * nu.second_moment:
            bad.append((q, d, t))
        n += 1
    report(capsys, 2, "Cauchy-Schwarz bound, exact integers", not bad, f"{n} pairs, {len(bad)} violations {bad[:3]}")


def test_3_second_moment(capsys):
    bad = []
    n = 0
    tightest = math.inf
    for q, d, t, E, F in trial_pairs(3, exclude_origin=True):
        assert not E.has_origin
        lhs = nu_histogram(E, F).second_moment
        rhs = second_moment_rhs(E, F, energy_B(E, F))
        tightest = min(tightest, (rhs - lhs) / rhs)
        if lhs > rhs + TOL:
            bad.append((q, d, t, lhs, rhs))
        n += 1
    report(capsys, 3, "second moment vs Fourier energy", not bad,
           f"{n} pairs, smallest relative slack {tightest:.3e}, violations {bad[:3]}")


def test_4_line_bounds(capsys):
    problems = []
    checked = 0
    for q in QS:
        for d in DS:
            for j in range(1, q):
                m = line_table(construct_variety(geo.sphere(q, d, j))).max_count
                checked += 1
                if m > 2:
                    problems.append(f"S_{j} q={q} d={d}: {m}")
            G, _ = paraboloid_split(construct_variety(geo.paraboloid(q, d)))
            m = line_table(G).max_count
            checked += 1
            if m > 1:
                problems.append(f"G q={q} d={d}: {m}")
    for q in (3, 5, 7):
        for d in (2, 3):
            P = construct_variety(geo.paraboloid(q, d))
            Pbar = construct_variety(geo.conjugate_paraboloid(q, d))
            for r in np.flatnonzero(~Pbar.members):
                a = geo.unrank(int(r), q, d)
                m = line_table(translate(P, a)).max_count
                checked += 1
                if m > 2:
                    problems.append(f"P+{a} q={q} d={d}: {m}")
    P53 = construct_variety(geo.paraboloid(5, 3))
    table = line_table(P53)
    full = [geo.unrank(int(r), 5, 3) for r, c in zip(table.reps, table.counts) if c == 4]
    if not full:
        problems.append("no isotropic line with q-1 points of P at q=5, d=3")
    report(capsys, 4, "exhaustive line-intersection bounds", not problems,
           f"{checked} sets checked; full lines of P in F_5^3: {full}; problems {problems[:3]}")


def test_5_closed_form_bounds(capsys):
    bad = []
    n = 0
    for q, d in GRID:
        nq = q**d
        for t in range(200):
            rng = rng_for(5, q, d, t)
            F = random_set(q, d, rng)
            SF = dft(F)
            j = int(rng.integers(1, q))
            S = construct_variety(geo.sphere(q, d, j))
            E_sph = random_subset(S, int(rng.integers(1, S.size + 1)), rng)
            E_gen = random_set(q, d, rng, exclude_origin=True)
            s = salem_constant(F, SF)
            K = E_sph.size * F.size / nq
            K1 = E_gen.size * F.size / nq / q
            cases = [
                ("sphere", E_sph, q * K / (K + 2)),
                ("general", E_gen, q * K1 / (K1 + 1)),
                ("salem", E_gen, q * F.size / (F.size + s * s * q)),
            ]
            for label, E, floor in cases:
                nu = nu_histogram(E, F)
                fb = bounds(E, F, nu=nu, spectrum_F=SF).fourier_bound
                pi = len(nu.support)
                n += 1
                if fb < floor - TOL or pi < math.ceil(fb - TOL):
                    bad.append((label, q, d, t, fb, floor, pi))
    report(capsys, 5, "closed-form consequences of the Fourier bound", not bad,
           f"{n} pair checks, {len(bad)} violations {bad[:3]}")


def test_6_projection_identity(capsys):
    bad = []
    n = 0
    for q in (3, 5, 7):
        d = 3
        P = construct_variety(geo.paraboloid(q, d))
        _, H = paraboloid_split(P)
        for t in range(50):
            rng = rng_for(6, q, t)
            E = random_subset(H, int(rng.integers(1, H.size + 1)), rng) | \
                random_subset(P, int(rng.integers(0, P.size + 1)), rng)
            F = random_set(q, d, rng)
            _, B = paraboloid_split(E)
            lhs = len(dot_product_set(B, F))
            rhs = len(dot_product_set(project_set(B), project_set(F)))
            n += 1
            if lhs != rhs:
                bad.append((q, t, lhs, rhs))
    report(capsys, 6, "|Pi(B,F)| = |Pi(pi B, pi F)| on the paraboloid", not bad, f"{n} pairs, violations {bad[:3]}")


def test_7_sphere_distance_identity(capsys):
    bad = []
    n = 0
    d = 3
    for q in QS:
        for t in range(50):
            rng = rng_for(7, q, t)
            i, j = (int(v) for v in rng.integers(1, q, size=2))
            Si = construct_variety(geo.sphere(q, d, i))
            Sj = construct_variety(geo.sphere(q, d, j))
            E = random_subset(Si, int(rng.integers(1, Si.size + 1)), rng)
            F = random_subset(Sj, int(rng.integers(1, Sj.size + 1)), rng)
            n += 1
            if len(distance_set(E, F)) != len(dot_product_set(E, F)):
                bad.append((q, t, i, j))
    report(capsys, 7, "|D(E,F)| = |Pi(E,F)| on spheres", not bad, f"{n} pairs, violations {bad[:3]}")


def test_8_e0_contract(capsys):
    bad = []
    n = 0
    for q, d, t, E, F in trial_pairs(8):
        if E.without_origin().size == 0:
            continue
        E0 = extract_E0(E)
        ok = (
            E0.size == line_table(E).lines_hit
            and line_table(E0).max_count == 1
            and dot_product_set(E0, F) <= dot_product_set(E, F)
            and extract_E0(E) == E0
        )
        n += 1
        if not ok:
            bad.append((q, d, t))
    serial = harness.run_suite("e0", qmax=7, dmax=3, trials=10, seed=SEED, workers=1)
    parallel = harness.run_suite("e0", qmax=7, dmax=3, trials=10, seed=SEED, workers=2)
    same = (serial.checks, serial.failures, serial.skipped) == (parallel.checks, parallel.failures, parallel.skipped)
    report(capsys, 8, "E0 extraction contract", not bad and same and serial.passed,
           f"{n} pairs, {len(bad)} violations; 1 vs 2 workers identical: {same}")


def test_9_worked_fixtures(capsys):
    # independent brute-force values first
    S1 = oracles.variety_points((1, 1), (0, 0), -1, 3)
    o_nu = oracles.nu(S1, S1, 3)
    o_cs = oracles.cs_bound(S1, S1, 3)
    o_B = oracles.energy([(1, 0)], [(0, 1)], 3, 2)
    o_fb = oracles.fourier_bound([(1, 0)], [(0, 1)], 3, 2)
    pinned_oracle = (len(S1), oracles.dot_set(S1, S1, 3), o_nu, sum(c * c for c in o_nu), o_cs)
    assert pinned_oracle == (4, {0, 1, 2}, [8, 4, 4], 96, pytest.approx(256 / 96))
    assert o_B == pytest.approx(2 / 81, abs=1e-15) and o_fb == pytest.approx(1.0, abs=1e-12)

    E = construct_variety(geo.sphere(3, 2, 1))
    nu = nu_histogram(E, E)
    br = bounds(E, E)
    A = PointSet.from_points(3, 2, [(1, 0)])
    B = PointSet.from_points(3, 2, [(0, 1)])
    br1 = bounds(A, B)
    checks = {
        "|S_1| = 4": E.size == 4 and set(E.tuples()) == S1,
        "Pi(S_1,S_1) = F_3": dot_product_set(E, E) == {0, 1, 2},
        "nu = (8,4,4)": nu.counts.tolist() == [8, 4, 4] == o_nu,
        "sum nu^2 = 96": nu.second_moment == 96,
        "cs_bound = 256/96": (br.cs_num, br.cs_den) == (256, 96) and br.cs_bound == o_cs,
        "B = 2/81": abs(br1.energy - 2 / 81) <= 1e-15 and abs(br1.energy - o_B) <= 1e-15,
        "fourier_bound = 1": abs(br1.fourier_bound - 1.0) <= 1e-12,
    }
    failed = [k for k, v in checks.items() if not v]
    report(capsys, 9, "worked fixtures vs brute-force oracle", not failed,
           f"{len(checks) - len(failed)}/{len(checks)} fixtures reproduced; failed {failed}")


def test_verify_all_exits_zero(capsys):
    results = harness.run_verify("all", qmax=13, dmax=3, trials=200, seed=0)
    failed = [r.suite for r in results if not r.passed]
    total = sum(r.checks for r in results)
    report(capsys, "V", "verify all at qmax=13, dmax=3, 200 trials", not failed,
           f"{len(results)} suites, {total} checks, failing suites {failed}")
