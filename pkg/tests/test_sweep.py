import json

import numpy as np
import pytest

from cnmbi.datasets import Dataset, generate_blobs, generate_scenario
from cnmbi.errors import ConfigError, DegenerateDataError
from cnmbi.sweep import SweepConfig, estimate, run_trials, trial_seeds

TWO_PAIRS = np.array([[0.0, 0.0], [0.0, 0.1], [5.0, 0.0], [5.0, 0.1]])


@pytest.fixture(scope="module")
def blobs():
    return generate_blobs(3, 100, 2, 0.5, 6.0, seed=1)


@pytest.fixture(scope="module")
def blob_report(blobs):
    return estimate(blobs, SweepConfig(seed=0))


def test_three_blobs(blob_report):
    r = blob_report
    assert r.k_star == 3
    assert r.loss_of(3) < r.loss_of(2) and r.loss_of(3) < r.loss_of(5)
    assert r.k_range == (2, 17) and len(r.losses) == 16
    assert r.n == 300 and r.n_core == 270


def test_loss_matches_details(blob_report):
    for k, loss in blob_report.losses:
        det = blob_report.per_k_details[k]
        assert loss == pytest.approx(np.mean(det["pair_costs"]), rel=1e-12)
        mc, dcn = det["mean_centers"], det["density_centers"]
        pair = np.sum((mc - dcn[det["assignment"]]) ** 2, axis=1)
        np.testing.assert_allclose(pair, det["pair_costs"], rtol=1e-12)


@pytest.mark.slow
def test_count_ten():
    assert estimate(generate_scenario("count", 10, seed=0)).k_star == 10


def test_two_pairs_merge():
    # k=2: peaks (0,0),(5,0) against means (0,.05),(5,.05): loss 0.0025
    # k=3 here splits the right pair, leaving (5,0.1) paired across the gap
    r = estimate(Dataset(TWO_PAIRS), SweepConfig(k_min=2, k_max=3, lam=0.0, seed=0))
    assert r.loss_of(2) == pytest.approx(0.0025, rel=1e-12)
    assert r.loss_of(3) == pytest.approx((0.0025 + 25.0) / 3, rel=1e-12)
    assert r.k_star == 2


def test_two_pairs_other_split():
    # when K-means splits the left pair instead, the third peak lines up with it
    r = estimate(Dataset(TWO_PAIRS), SweepConfig(k_min=2, k_max=3, lam=0.0, seed=2))
    assert r.loss_of(3) == pytest.approx(0.0025 / 3, rel=1e-12)
    assert r.k_star == 3


def test_deterministic(blobs):
    cfg = SweepConfig(seed=5, k_max=6)
    a, b = estimate(blobs, cfg), estimate(blobs, cfg)
    assert a.to_json(include_timings=False) == b.to_json(include_timings=False)


def test_threads_do_not_change_result(blobs):
    a = estimate(blobs, SweepConfig(seed=5, k_max=6, threads=1))
    b = estimate(blobs, SweepConfig(seed=5, k_max=6, threads=3))
    assert a.losses == b.losses


def test_no_filter_equals_lambda_zero(blobs):
    a = estimate(blobs, SweepConfig(k_max=6, filtering_enabled=False))
    b = estimate(blobs, SweepConfig(k_max=6, lam=0.0))
    assert a.losses == b.losses and a.boundary is None
    assert b.boundary.removed_indices.size == 0


def test_mean_vs_mean(blobs):
    r = estimate(blobs, SweepConfig(k_max=6, mean_vs_mean_mode=True))
    assert len(r.losses) == 5 and all(loss >= 0 for _, loss in r.losses)


def test_report_serialisation(blob_report):
    doc = json.loads(blob_report.to_json())
    assert doc["k_star"] == 3
    assert [row["k"] for row in doc["losses"]] == list(range(2, 18))
    assert len(doc["boundary"]["removed_indices"]) == 30
    assert set(doc["per_k"]["3"]) == {"assignment", "pair_costs", "mean_centers", "density_centers"}
    lines = blob_report.curve_csv().splitlines()
    assert lines[0] == "k,loss" and len(lines) == 17


def test_config_validation(blobs):
    with pytest.raises(ConfigError):
        estimate(blobs, SweepConfig(k_min=5, k_max=3))
    with pytest.raises(ConfigError):
        estimate(blobs, SweepConfig(k_min=1))
    with pytest.raises(ConfigError):
        estimate(blobs, SweepConfig(lam=1.0))
    with pytest.raises(ConfigError):
        estimate(blobs, SweepConfig(k_max=290))


def test_degenerate_inputs():
    with pytest.raises(DegenerateDataError):
        estimate(Dataset(np.array([[0.0], [1.0], [2.0]])))
    with pytest.raises(DegenerateDataError):
        estimate(Dataset(np.ones((6, 2))), SweepConfig(k_max=2))


def test_duplicates_skip_infeasible_k():
    pts = np.array([[0.0, 0.0]] * 5 + [[9.0, 0.0]] * 5 + [[0.0, 9.0]])
    r = estimate(Dataset(pts), SweepConfig(k_max=4, lam=0.0))
    assert [k for k, _ in r.skipped] == [4]
    assert r.loss_of(3) == 0.0 and r.k_star == 3


def test_single_trial(blobs):
    res = run_trials(blobs, SweepConfig(k_max=5), trials=1)
    assert res.acc in (0.0, 1.0) and len(res.k_stars) == 1


def test_trials_without_labels(blobs):
    res = run_trials(Dataset(blobs.points), SweepConfig(k_max=4), trials=2)
    assert res.acc is None and res.true_k is None
    assert res.nc == min(k for k in res.k_stars if res.k_stars.count(k) == max(map(res.k_stars.count, res.k_stars)))


def test_trial_seeds_stable():
    assert trial_seeds(0, 3) == trial_seeds(0, 5)[:3]
    assert len(set(trial_seeds(1, 50))) == 50
