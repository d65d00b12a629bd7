"""Tests for Average Lagging and LAAL."""

import random

import pytest

from streamtl.backends import ScriptedBackend
from streamtl.config import PolicyConfig
from streamtl.exceptions import MetricError
from streamtl.metrics import average_lagging, lagging_from_delays
from streamtl.models import EmissionLog
from streamtl.policy import run_stream, wait_k_policy

from .conftest import CHUNK_MS, build_fixture


def lagging_oracle(delays, source_ms, length):
    tau = next(
        (i for i, d in enumerate(delays, start=1) if d >= source_ms), len(delays)
    )
    total = sum(delays[i - 1] - (i - 1) * source_ms / length for i in range(1, tau + 1))
    return total / tau


def ten_word_fixture():
    tokens = [f"w{i}" for i in range(1, 11)]
    return build_fixture("ten", tokens=tokens)


class TestLaggingFromDelays:
    """Tests for lagging_from_delays function."""

    def test_hand_computed(self):
        report = lagging_from_delays([1000, 2000, 3000], 3000)
        assert report.tau == 3
        assert report.al_ms == pytest.approx(1000.0)
        assert report.laal_ms == pytest.approx(1000.0)
        assert report.gamma == pytest.approx(3 / 3000)

    def test_laal_uses_longer_reference(self):
        report = lagging_from_delays([1000, 2000, 3000], 3000, ref_len=6)
        assert report.al_ms == pytest.approx(1000.0)
        assert report.laal_ms == pytest.approx(1500.0)
        assert report.laal_gamma == pytest.approx(6 / 3000)

    def test_laal_ignores_shorter_reference(self):
        report = lagging_from_delays([1000, 2000, 3000], 3000, ref_len=2)
        assert report.laal_ms == report.al_ms

    def test_first_word_after_source_end(self):
        report = lagging_from_delays([5000, 5000], 3000)
        assert report.tau == 1
        assert report.al_ms == pytest.approx(5000.0)

    def test_no_word_reaches_source_end(self):
        report = lagging_from_delays([100, 200], 3000)
        assert report.tau == 2
        assert report.al_ms == pytest.approx((100 + (200 - 1500)) / 2)

    def test_negative_delays_are_kept(self):
        report = lagging_from_delays([-640], 1920)
        assert report.al_ms == pytest.approx(-640.0)

    def test_empty_delays(self):
        with pytest.raises(MetricError, match="empty hypothesis"):
            lagging_from_delays([], 3000)

    def test_non_positive_source(self):
        with pytest.raises(MetricError, match="must be positive"):
            lagging_from_delays([100], 0)

    def test_matches_oracle_on_random_logs(self):
        rng = random.Random(3)
        for _ in range(100):
            length = rng.randint(1, 20)
            delays = sorted(rng.uniform(0, 8000) for _ in range(length))
            source_ms = rng.uniform(500, 6000)
            ref_len = rng.randint(1, 25)

            report = lagging_from_delays(delays, source_ms, ref_len)

            assert report.al_ms == pytest.approx(
                lagging_oracle(delays, source_ms, length)
            )
            assert report.laal_ms == pytest.approx(
                lagging_oracle(delays, source_ms, max(length, ref_len))
            )


class TestAverageLagging:
    """Tests for average_lagging on emission logs."""

    def test_emission_log(self):
        log = EmissionLog.from_pairs([("a", 1000), ("b", 2000), ("c", 3000)], 3000)
        assert average_lagging(log).al_ms == pytest.approx(1000.0)

    def test_empty_log(self):
        with pytest.raises(MetricError):
            average_lagging(EmissionLog(source_duration_ms=3000))

    @pytest.mark.parametrize("k", [1, 3, 5, 7, 9])
    def test_wait_k_lags_k_chunks(self, k: int):
        fixture = ten_word_fixture()
        backend = ScriptedBackend([fixture])
        config = PolicyConfig(k=k, chunk_ms=CHUNK_MS, policy_kind="wait_k")

        result = wait_k_policy(fixture.to_stream(CHUNK_MS), backend, config)

        assert average_lagging(result.emissions).al_ms == pytest.approx(k * CHUNK_MS)

    @pytest.mark.parametrize("k", [1, 3, 5, 7, 9])
    def test_lag_k_generation_lags_k_plus_one_chunks(self, k: int):
        fixture = ten_word_fixture()
        backend = ScriptedBackend([fixture])
        config = PolicyConfig(k=k, chunk_ms=CHUNK_MS, truncation_enabled=False)

        result = run_stream(fixture.to_stream(CHUNK_MS), backend, config)

        assert average_lagging(result.emissions).al_ms == pytest.approx(
            (k + 1) * CHUNK_MS
        )

    def test_lag_grows_with_k(self):
        fixture = ten_word_fixture()
        backend = ScriptedBackend([fixture])
        lags = []
        for k in (1, 3, 5, 7, 9):
            config = PolicyConfig(k=k, chunk_ms=CHUNK_MS, truncation_enabled=False)
            result = run_stream(fixture.to_stream(CHUNK_MS), backend, config)
            lags.append(average_lagging(result.emissions, ref_len=10).laal_ms)
        assert lags == sorted(lags)
