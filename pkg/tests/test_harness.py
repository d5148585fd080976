import csv
import io
import math

import pytest

from ffdot import geometry as geo
from ffdot import harness
from ffdot.pointset import PointSet, construct_variety, paraboloid_split, project_set
from ffdot.products import dot_product_set

S1_F3 = construct_variety(geo.sphere(3, 2, 1))


def test_analyze_sphere_fixture():
    r = harness.analyze(S1_F3, S1_F3, seed=5)
    assert (r.q, r.d, r.size_E, r.size_F) == (3, 2, 4, 4)
    assert r.pi_size == 3 and r.sum_nu2 == 96
    assert (r.cs_num, r.cs_den) == (256, 96)
    assert r.cs_bound == pytest.approx(256 / 96)
    assert r.max_count_E == 2 and r.lines_hit_E == 2 and r.size_E0 == 2
    assert r.seed == 5
    assert r.valid_fourier
    assert r.fourier_bound <= r.pi_size + 1e-6


def test_analyze_origin_pair():
    O = PointSet.from_points(3, 2, [(0, 0)])
    r = harness.analyze(O, O)
    assert not r.valid_fourier
    assert r.pi_size == 1
    assert r.size_E0 is None and r.lines_hit_E == 0


def test_analyze_rejects_incompatible():
    with pytest.raises(ValueError):
        harness.analyze(S1_F3, PointSet.full(5, 2))
    with pytest.raises(ValueError):
        harness.analyze(PointSet.empty(3, 2), S1_F3)


def test_report_is_deterministic_and_csv_ordered():
    E = construct_variety(geo.paraboloid(5, 3))
    F = construct_variety(geo.sphere(5, 3, 2))
    a, b = harness.analyze(E, F), harness.analyze(E, F)
    assert a == b
    rows = list(csv.reader(io.StringIO(harness.reports_to_csv([a]))))
    assert tuple(rows[0]) == harness.REPORT_FIELDS
    assert len(rows) == 2


@pytest.mark.parametrize("name", sorted(harness.SUITES))
def test_each_suite_passes_small(name):
    r = harness.run_suite(name, qmax=7, dmax=3, trials=5, seed=11)
    assert r.passed, r.failures
    assert r.checks > 0


def test_unknown_suite():
    with pytest.raises(harness.ConfigError):
        harness.run_suite("nope")


def test_planted_origin_is_skipped_not_failed():
    E = PointSet.from_points(5, 2, [(0, 0), (1, 2)])
    F = PointSet.full(5, 2)
    out = harness.check_second_moment(E, F, "planted")
    assert out.failures == [] and out.checks == 0
    assert out.skipped and "origin" in out.skipped[0]


def test_suite_failure_is_reported(monkeypatch):
    def broken(q, d, seed):
        out = harness.TrialOutcome()
        out.expect(False, f"q={q} d={d} seed={seed}: forced")
        return out
    monkeypatch.setitem(harness.SUITES, "plancherel", harness.Suite(broken, False))
    r = harness.run_suite("plancherel", qmax=3, dmax=2, trials=2, seed=4)
    assert not r.passed
    assert len(r.failures) == 2 and all("seed=" in m for m in r.failures)


def test_suite_tasks_use_derived_seeds():
    t1 = harness.suite_tasks("e0", 5, 2, 3, seed=1)
    t2 = harness.suite_tasks("e0", 5, 2, 3, seed=1)
    assert t1 == t2
    assert len({t[3] for t in t1}) == len(t1)
    assert t1 != harness.suite_tasks("e0", 5, 2, 3, seed=2)


def test_worker_count_does_not_change_results():
    a = harness.run_suite("e0", qmax=5, dmax=2, trials=4, seed=3, workers=1)
    b = harness.run_suite("e0", qmax=5, dmax=2, trials=4, seed=3, workers=2)
    assert (a.checks, a.failures, a.skipped) == (b.checks, b.failures, b.skipped)


def test_projection_identity_direct():
    q, d = 5, 3
    P = construct_variety(geo.paraboloid(q, d))
    _, B = paraboloid_split(P)
    F = PointSet.full(q, d)
    assert dot_product_set(B, F) == dot_product_set(project_set(B), project_set(F))


def test_cap_enforced():
    with pytest.raises(harness.ConfigError):
        harness.check_cap(101, 4)
    with pytest.raises(harness.ConfigError):
        harness.ExperimentConfig(qs=(101,), ds=(4,), ks=(1.0,))


def sweep(**kw):
    cfg = harness.ExperimentConfig(**kw)
    return harness.run_sweep(cfg)


def test_sweep_sphere_pair_respects_closed_form():
    rows = sweep(qs=(13,), ds=(2,), ks=(4.0,), trials=100, seed=9, families=("sphere", "sphere"))
    (row,) = rows
    K = row["K_actual"]
    assert row["bound_violations"] == 0
    assert row["min_pi_over_q"] >= row["min_fourier_over_q"] - 1e-9
    assert row["min_fourier_over_q"] >= K / (K + 2) - 1e-6
    assert row["max_count_E"] <= 2


def test_sweep_full_space_F_forces_every_product():
    rows = sweep(qs=(7,), ds=(3,), ks=(1.0,), trials=5, families=("paraboloid", "full-space"))
    assert rows[0]["min_pi_over_q"] == 1.0
    assert rows[0]["size_F"] == 343


def test_sweep_pinned_fraction():
    rows = sweep(qs=(3,), ds=(2,), ks=(16.0,), trials=3, families=("sphere", "sphere"), pinned=True)
    assert rows[0]["size_E"] == 4
    assert rows[0]["pinned_fraction"] == 1.0


def test_sweep_rows_reproducible():
    kw = dict(qs=(5, 7), ds=(2,), ks=(1.0, 4.0), trials=4, seed=77,
              families=("uniform-random", "uniform-random"))
    a = harness.rows_to_csv(sweep(**kw), harness.SWEEP_FIELDS)
    b = harness.rows_to_csv(sweep(**kw), harness.SWEEP_FIELDS)
    assert a == b
    assert a.splitlines()[0] == ",".join(harness.SWEEP_FIELDS)
    assert len(a.splitlines()) == 5


def test_cell_sizes():
    assert harness.cell_sizes(100, 100, 100, 4.0, False) == (20, 20)
    assert harness.cell_sizes(12, 169, 169, 4.0, False) == (12, 57)
    assert harness.cell_sizes(25, 125, 125, 1.0, True) == (1, 125)


def test_probe_refuses_variety_through_origin():
    with pytest.raises(harness.ProbeRefused):
        harness.run_probe(geo.paraboloid(5, 3), (1.0,))


def test_probe_translated_paraboloid():
    q, d = 5, 3
    a = (0, 0, 1)
    assert a not in construct_variety(geo.conjugate_paraboloid(q, d))
    rows = harness.run_probe(geo.paraboloid(q, d).translate(a), (1.0, 4.0), trials=5, seed=2)
    assert len(rows) == 2
    assert all(r["max_count_V"] <= 2 for r in rows)


def test_probe_sphere():
    rows = harness.run_probe(geo.sphere(7, 3, 1), (2.0,), trials=5)
    r = rows[0]
    K = r["K_actual"]
    assert r["max_count_V"] <= 2
    assert r["min_fourier_over_q"] >= K / (K + 2) - 1e-6
    assert r["min_pi_over_q"] * 7 >= math.ceil(r["min_fourier_over_q"] * 7 - 1e-6)
