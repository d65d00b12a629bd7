"""The per-chunk control loop: transcribe, truncate or generate, flush."""

import logging
import time
from collections.abc import Callable
from dataclasses import dataclass

from streamtl.backends.protocol import BackendRequest, RequestMode, render_prompt
from streamtl.base import BaseBackend
from streamtl.config.loader import parse_policy_config
from streamtl.config.schema import ClockMode, PolicyConfig, PolicyKind
from streamtl.core.events import EmitWords, Event, ReadChunk, Recompute, Truncate
from streamtl.core.session import SessionState, apply_event, new_session
from streamtl.exceptions import (
    BackendError,
    ConfigurationError,
    StepError,
    StreamError,
)
from streamtl.models import (
    Chunk,
    EmissionLog,
    EmittedWord,
    RunSummary,
    SpeechStream,
    Transcription,
    TruncationRule,
)
from streamtl.policy.generation import allowed_output_count
from streamtl.policy.truncation import (
    NO_TRUNCATION,
    TruncationDecision,
    check_gold_truncation,
    check_truncation,
)

logger = logging.getLogger(__name__)


@dataclass
class RunResult:
    """Everything one run over a stream produced."""

    trace: list[Event]
    hypothesis: str
    emissions: EmissionLog
    state: SessionState
    config: PolicyConfig

    def summary(self) -> RunSummary:
        return RunSummary(
            source_id=self.state.source_id,
            policy=self.config.policy_kind.value,
            k=self.config.k,
            chunk_ms=self.config.chunk_ms,
            source_duration_ms=int(self.emissions.source_duration_ms),
            hypothesis=self.hypothesis,
            emissions=[
                EmittedWord(word=item.word, ms=item.ms)
                for item in self.emissions.items
            ],
            segments=list(self.state.segments),
        )


class StreamingEngine:
    """Drives one backend through the streaming policy, one chunk at a time.

    State changes are made only by recording events, so a trace replayed
    from the initial state reproduces the live state exactly.

    Example:
        >>> engine = StreamingEngine(backend, PolicyConfig(k=3))
        >>> state = engine.start(stream)
        >>> for chunk in stream.chunks:
        ...     state, events = engine.step(state, chunk)
        >>> state, events = engine.finish(state)
    """

    def __init__(
        self,
        backend: BaseBackend,
        config: PolicyConfig,
        prompt: str | None = None,
        clock: Callable[[], float] = time.perf_counter,
    ) -> None:
        self.backend = backend
        self.config = parse_policy_config(config)
        self.prompt = prompt if prompt is not None else render_prompt("Chinese")
        self._clock = clock
        self._tick_started = 0.0
        self._last_ms: int = 0

    def start(self, stream: SpeechStream) -> SessionState:
        self._last_ms = 0
        return new_session(self.config, stream)

    def step(
        self, state: SessionState, chunk: Chunk
    ) -> tuple[SessionState, list[Event]]:
        """Process one chunk.

        Returns a new state and the events recorded for the chunk; the state
        passed in is never modified.

        Raises:
            StreamError: If the chunk does not follow the state's last chunk
            StepError: If a backend call fails
        """
        if chunk.index != state.current_chunk + 1:
            raise StreamError(
                f"Chunk {chunk.index} does not follow chunk {state.current_chunk}"
            )
        self._tick_started = self._clock()
        next_state = state.copy()
        next_state.audio[chunk.index] = chunk.payload
        events: list[Event] = []
        try:
            if self.config.policy_kind == PolicyKind.WAIT_K:
                self._wait_k_tick(next_state, chunk.index, events)
            else:
                self._tick(next_state, chunk.index, events)
        except BackendError as e:
            raise StepError(chunk.index, str(e)) from e
        return next_state, events

    def finish(self, state: SessionState) -> tuple[SessionState, list[Event]]:
        """Flush the open segment at the end of the stream."""
        next_state = state.copy()
        events: list[Event] = []
        n = state.current_chunk
        if n == 0 or state.seg_start >= n:
            return next_state, events
        self._tick_started = self._clock()
        closing = state.queue[-1] if state.queue else Transcription()
        try:
            self._flush(next_state, closing, n, TruncationRule.END_OF_STREAM, events)
        except BackendError as e:
            raise StepError(n, str(e)) from e
        return next_state, events

    def _tick(self, state: SessionState, n: int, events: list[Event]) -> None:
        x_n = self._transcribe(state, state.seg_start, n)
        queue = list(state.queue)
        a_m = state.seg_start
        read = ReadChunk(chunk=n, ms=self._now(n), transcription=x_n)
        self._record(state, events, read)

        decision = NO_TRUNCATION
        if self.config.truncation_enabled:
            decision = self._decide(queue, x_n, n, a_m)
        if not decision.triggered:
            self._generate(state, x_n, n, events)
            return

        assert decision.rule is not None and decision.a_new is not None
        logger.debug(
            "%s: %s truncation at chunk %d closes chunks %d..%d",
            state.source_id,
            decision.rule.value,
            n,
            a_m + 1,
            decision.a_new,
        )
        closing = x_n
        if decision.rule == TruncationRule.SENTENCE:
            closing = queue[decision.a_new - n]
        self._flush(state, closing, decision.a_new, decision.rule, events, tick=n)

        if decision.requires_retranscription:
            for target in range(decision.a_new + 1, n + 1):
                x_n = self._transcribe(state, decision.a_new, target, tick=n)
                self._record(
                    state,
                    events,
                    Recompute(
                        chunk=n, ms=self._now(n), target=target, transcription=x_n
                    ),
                )
            self._generate(state, x_n, n, events)

    def _decide(
        self, queue: list[Transcription], x_n: Transcription, n: int, a_m: int
    ) -> TruncationDecision:
        if self.config.policy_kind == PolicyKind.GOLD_SENTENCE:
            return check_gold_truncation(n, a_m, self.config)
        return check_truncation(queue, x_n, n, a_m, self.config)

    def _wait_k_tick(self, state: SessionState, n: int, events: list[Event]) -> None:
        x_n = self._transcribe(state, state.seg_start, n)
        read = ReadChunk(chunk=n, ms=self._now(n), transcription=x_n)
        self._record(state, events, read)
        if n < self.config.k:
            return
        words = self._translate(
            state, x_n, state.seg_start, n, RequestMode.TRANSLATE_BOUNDED, max_words=1
        )
        if words:
            emit = EmitWords(chunk=n, ms=self._now(n), words=words)
            self._record(state, events, emit)

    def _generate(
        self, state: SessionState, x_n: Transcription, n: int, events: list[Event]
    ) -> None:
        if not self.config.generation_enabled:
            return
        allowed = allowed_output_count(
            x_n.word_count, self.config.k, len(state.emitted)
        )
        if allowed == 0:
            return
        words = self._translate(
            state,
            x_n,
            state.seg_start,
            n,
            RequestMode.TRANSLATE_BOUNDED,
            max_words=allowed,
        )[:allowed]
        if words:
            emit = EmitWords(chunk=n, ms=self._now(n), words=words)
            self._record(state, events, emit)

    def _flush(
        self,
        state: SessionState,
        closing: Transcription,
        a_new: int,
        rule: TruncationRule,
        events: list[Event],
        tick: int | None = None,
    ) -> None:
        n = tick if tick is not None else a_new
        words = self._translate(
            state, closing, state.seg_start, a_new, RequestMode.TRANSLATE_FLUSH, tick=n
        )
        if words:
            emit = EmitWords(chunk=n, ms=self._now(n), words=words)
            self._record(state, events, emit)
        b_new = state.trans_anchor + len(state.emitted)
        self._record(
            state,
            events,
            Truncate(chunk=n, ms=self._now(n), rule=rule, a_new=a_new, b_new=b_new),
        )

    def _transcribe(
        self,
        state: SessionState,
        seg_start: int,
        seg_end: int,
        tick: int | None = None,
    ) -> Transcription:
        request = BackendRequest(
            mode=RequestMode.TRANSCRIBE,
            source_id=state.source_id,
            chunk_ms=self.config.chunk_ms,
            seg_start=seg_start,
            seg_end=seg_end,
            tick=tick if tick is not None else seg_end,
            audio=self._segment_audio(state, seg_start, seg_end),
            prompt=self.prompt,
            seed=self.config.seed,
        )
        return self.backend.transcribe(request)

    def _translate(
        self,
        state: SessionState,
        x_n: Transcription,
        seg_start: int,
        seg_end: int,
        mode: RequestMode,
        max_words: int | None = None,
        tick: int | None = None,
    ) -> list[str]:
        request = BackendRequest(
            mode=mode,
            source_id=state.source_id,
            chunk_ms=self.config.chunk_ms,
            seg_start=seg_start,
            seg_end=seg_end,
            tick=tick if tick is not None else seg_end,
            audio=self._segment_audio(state, seg_start, seg_end),
            transcription=x_n.text,
            committed=" ".join(state.committed_words),
            anchor=state.trans_anchor,
            max_words=max_words,
            prompt=self.prompt,
            seed=self.config.seed,
        )
        return self.backend.translate(request)

    @staticmethod
    def _segment_audio(state: SessionState, seg_start: int, seg_end: int) -> bytes:
        return b"".join(
            state.audio.get(i, b"") for i in range(seg_start + 1, seg_end + 1)
        )

    def _now(self, n: int) -> int:
        ideal = n * self.config.chunk_ms
        if self.config.clock == ClockMode.IDEAL:
            return ideal
        elapsed_ms = round((self._clock() - self._tick_started) * 1000)
        self._last_ms = max(self._last_ms, ideal + elapsed_ms)
        return self._last_ms

    @staticmethod
    def _record(state: SessionState, events: list[Event], event: Event) -> None:
        apply_event(state, event)
        events.append(event)


def _run(
    stream: SpeechStream,
    backend: BaseBackend,
    config: PolicyConfig,
    prompt: str | None,
) -> RunResult:
    if not stream.chunks:
        raise StreamError(f"Stream {stream.source_id} has no chunks")
    engine = StreamingEngine(backend, config, prompt)
    state = engine.start(stream)
    trace: list[Event] = []
    try:
        for chunk in stream.chunks:
            state, events = engine.step(state, chunk)
            trace.extend(events)
        state, events = engine.finish(state)
        trace.extend(events)
    except StepError as e:
        e.trace = list(trace)
        raise

    logger.info(
        "%s: %d chunks, %d target words, %d segments",
        stream.source_id,
        stream.total_chunks,
        len(state.committed),
        state.segments_closed,
    )
    emissions = EmissionLog(
        items=tuple(state.committed), source_duration_ms=stream.duration_ms
    )
    return RunResult(
        trace=trace,
        hypothesis=state.hypothesis,
        emissions=emissions,
        state=state,
        config=engine.config,
    )


def step(
    state: SessionState,
    chunk: Chunk,
    backend: BaseBackend,
    config: PolicyConfig,
    prompt: str | None = None,
) -> tuple[SessionState, list[Event]]:
    """Process one chunk with a fresh engine.

    The returned state carries the open segment's audio, so it is all the next
    call needs; see StreamingEngine.step.
    """
    return StreamingEngine(backend, config, prompt).step(state, chunk)


def run_stream(
    stream: SpeechStream,
    backend: BaseBackend,
    config: PolicyConfig,
    prompt: str | None = None,
) -> RunResult:
    """Run the configured policy over a whole stream and flush at its end.

    Raises:
        StreamError: If the stream is empty
        StepError: If a chunk fails; ``trace`` holds the events recorded so far
    """
    return _run(stream, backend, parse_policy_config(config), prompt)


def wait_k_policy(
    stream: SpeechStream,
    backend: BaseBackend,
    config: PolicyConfig,
    prompt: str | None = None,
) -> RunResult:
    """Run the wait-k baseline: wait k-1 chunks, then one word per chunk."""
    config = parse_policy_config(config)
    if config.policy_kind != PolicyKind.WAIT_K:
        raise ConfigurationError("wait_k_policy requires policy_kind wait_k")
    return _run(stream, backend, config, prompt)


__all__ = [
    "RunResult",
    "StreamingEngine",
    "run_stream",
    "step",
    "wait_k_policy",
]
