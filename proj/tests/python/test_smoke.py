import json
import math
import os
from pathlib import Path

import pytest

import lagbo

DATA = Path(os.environ.get("LAGBO_TEST_DATA", Path(__file__).resolve().parents[1] / "data"))


def test_metrics():
    assert lagbo.rmse([2, 4], [1, 6]) == pytest.approx(math.sqrt(2.5))
    assert lagbo.mae([2, 4], [1, 6]) == pytest.approx(1.5)
    assert lagbo.smape([100], [50]) == pytest.approx(5000 / 150.1)
    assert lagbo.arank([0, 0], [[1, 3], [2, 2], [3, 1]]) == [2.0, 2.0, 2.0]


def test_errors_carry_their_code():
    with pytest.raises(lagbo.LagboError, match="LengthMismatch"):
        lagbo.rmse([1, 2], [1])


def test_two_step():
    r = lagbo.two_step(["A", "B", "C"], ["d1", "d2", "d3"], [[1, 2, 3], [1, 2, 3], [2, 1, 3]], reference="A")
    assert r["friedman"]["ff"] == pytest.approx(7.0)


def test_stats_only_on_published_table():
    tests = lagbo.stats_only(str(DATA / "published_comparison_metrics.csv"))
    assert tests["rmse"]["friedman"]["ff"] == pytest.approx(13.430, abs=0.02)


def test_expected_improvement():
    assert lagbo.expected_improvement(1.0, 1.0, 1.0) == pytest.approx(0.398942, abs=1e-6)


def test_bo_finds_discrete_optimum():
    r = lagbo.bo_optimize(
        lambda x: -((x[0] - 34) ** 2),
        [{"name": "m", "lower": 2, "upper": 60, "discrete": True}],
        n_initial=5,
        n_iterations=25,
        seed=1,
    )
    assert r["best_point"] == [34.0]
    assert len(r["trace"]) == 30


def test_synthetic_and_baselines():
    y = lagbo.generate_synthetic("seasonal-ar", 120, 3)
    assert len(y) == 120 and min(y) >= 0
    assert lagbo.seasonal_naive(y, 13)[12] == y[108]
    hw = lagbo.holt_winters(y, 12)
    assert len(hw["forecasts"]) == 12
    adf = lagbo.adf_test(y)
    assert 0.01 <= adf["p_value"] <= 0.99


def test_lstm_round_trip():
    z = [0.5 + 0.4 * math.sin(2 * math.pi * t / 12) for t in range(96)]
    out = lagbo.train_lstm(z, m=12, hidden1=8, hidden2=8, learning_rate=1e-2, batch_size=16, epochs=20, seed=4)
    model = json.loads(out["model"])
    assert model["config"]["input_window"] == 12
    assert len(out["epoch_losses"]) <= 20
    forecast = lagbo.predict_recursive(out["model"], z, 6)
    assert len(forecast) == 6 and all(math.isfinite(v) for v in forecast)


def test_pipeline_smoke():
    y = lagbo.generate_synthetic("seasonal-ar", 240, 8)
    r = lagbo.run_pipeline(y, variant="LSL", n_initial=2, n_iterations=1, epochs=3, seed=2)
    assert r["chosen"]["m"] == 12
    assert len(r["forecasts"]) == 60
