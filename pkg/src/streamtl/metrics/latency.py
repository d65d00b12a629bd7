"""Average Lagging and its length-adaptive variant."""

from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from streamtl.exceptions import MetricError
from streamtl.models import EmissionLog


class LatencyReport(BaseModel):
    """AL and LAAL of one emission log.

    Attributes:
        al_ms: Average Lagging, normalized by the hypothesis length
        laal_ms: Length-adaptive AL, normalized by max(hypothesis, reference)
        tau: Cutoff: first word emitted once the whole source was read
        gamma: Words per ms of the ideal AL schedule
        laal_gamma: Words per ms of the ideal LAAL schedule
    """

    model_config = ConfigDict(frozen=True)

    al_ms: float
    laal_ms: float
    tau: int
    gamma: float
    laal_gamma: float


def _cutoff(delays: np.ndarray, source_ms: float) -> int:
    reached = np.flatnonzero(delays >= source_ms)
    return int(reached[0]) + 1 if reached.size else len(delays)


def _lagging(delays: np.ndarray, source_ms: float, tau: int, length: int) -> float:
    ideal = np.arange(tau, dtype=np.float64) * (source_ms / length)
    return float(np.sum(delays[:tau] - ideal) / tau)


def lagging_from_delays(
    delays: Sequence[int | float], source_ms: int | float, ref_len: int | None = None
) -> LatencyReport:
    """AL and LAAL of raw per-word delays against a source of source_ms.

    Raises:
        MetricError: If there are no delays or the source has no duration
    """
    if not len(delays):
        raise MetricError("Latency is undefined for an empty hypothesis")
    if source_ms <= 0:
        raise MetricError(f"Source duration must be positive, got {source_ms}")
    d = np.asarray(delays, dtype=np.float64)
    hyp_len = len(d)
    laal_len = max(hyp_len, ref_len or 0)
    tau = _cutoff(d, float(source_ms))
    return LatencyReport(
        al_ms=_lagging(d, float(source_ms), tau, hyp_len),
        laal_ms=_lagging(d, float(source_ms), tau, laal_len),
        tau=tau,
        gamma=hyp_len / source_ms,
        laal_gamma=laal_len / source_ms,
    )


def average_lagging(log: EmissionLog, ref_len: int | None = None) -> LatencyReport:
    """Compute AL and LAAL of an emission log.

    AL = (1/tau) * sum_{i<=tau} (d_i - (i-1) * T / L), with L the hypothesis
    length for AL and max(hypothesis, ref_len) for LAAL. tau is the first
    word emitted at or after the source duration T, else the hypothesis
    length.

    Args:
        log: Emission times of the hypothesis words
        ref_len: Reference length in words, for LAAL

    Raises:
        MetricError: If the log is empty or T <= 0
    """
    return lagging_from_delays(log.delays, log.source_duration_ms, ref_len)
