"""Main Harness class for running simulation grids and evaluating them."""

import logging
from collections.abc import Collection
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, ValidationError

from streamtl.backends import (
    Fixture,
    default_chunk_ms,
    get_backend,
    load_manifest,
    render_prompt,
)
from streamtl.backends.protocol import default_tokenize
from streamtl.base import BaseBackend
from streamtl.config import (
    TASK_EVAL_MODES,
    EvalMode,
    PolicyKind,
    RunConfig,
    Task,
    load_config,
    parse_config,
)
from streamtl.core.trace import write_trace
from streamtl.cot.builder import derive_seed
from streamtl.exceptions import (
    ConfigurationError,
    MetricError,
    StepError,
    StreamTLError,
)
from streamtl.fileio import write_json
from streamtl.metrics import QualityReport, quality_report, write_report
from streamtl.models import RunSummary
from streamtl.policy import run_stream, wait_k_policy

logger = logging.getLogger(__name__)

RUN_FILE = "run.json"
FAILURES_FILE = "failures.json"


class RunFailure(BaseModel):
    """A (fixture, k) pair whose run did not complete."""

    source_id: str
    k: int
    chunk_ms: int
    error: str
    message: str
    chunk: int | None = None


class RunOutcome(BaseModel):
    """What a run wrote to its output directory."""

    run_dir: Path
    summaries: list[Path] = Field(default_factory=list)
    failures: list[RunFailure] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def grid_dir_name(policy: PolicyKind | str, k: int, chunk_ms: int) -> str:
    return f"{PolicyKind(policy).value}_k{k}_c{chunk_ms}"


class Harness:
    """Main class for running StreamTL experiments.

    A Harness is instantiated from a YAML configuration file or a
    configuration dictionary. It runs the configured policy over every
    fixture of a manifest and every k of the grid, then scores the results.

    Example:
        >>> harness = Harness.from_yaml("config.yaml")
        >>> outcome = harness.run()
        >>> report = harness.evaluate()
    """

    def __init__(self, config: RunConfig, verbose: bool = False) -> None:
        """Initialize a harness.

        Args:
            config: A validated RunConfig object
            verbose: Log per-chunk decisions
        """
        self.config = config
        self._setup_logging(verbose)

    def _setup_logging(self, verbose: bool) -> None:
        """Set up logging for the harness."""
        logging.basicConfig(
            level=logging.DEBUG if verbose else logging.INFO,
            format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        )

    @classmethod
    def from_yaml(cls, path: str | Path, **overrides: Any) -> "Harness":
        """Create a Harness from a YAML configuration file.

        Args:
            path: Path to the YAML configuration file
            **overrides: Values replacing those of the file, e.g. from CLI flags

        Returns:
            A configured Harness instance

        Raises:
            ConfigurationError: If the configuration is invalid
        """
        config = load_config(path)
        if overrides:
            config = parse_config({**config.model_dump(), **overrides})
        return cls(config)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Harness":
        """Create a Harness from a configuration dictionary.

        Raises:
            ConfigurationError: If the configuration is invalid
        """
        config = parse_config(data)
        return cls(config)

    @property
    def chunk_ms(self) -> int:
        return self.config.chunk_ms or default_chunk_ms(self.config.target_lang)

    def run(self, backend: BaseBackend | None = None) -> RunOutcome:
        """Run the policy over every fixture and k of the grid.

        Each (fixture, k) writes ``<source_id>.trace.jsonl`` and
        ``<source_id>.summary.json`` under ``<policy>_k<k>_c<chunk_ms>/``.
        Failures are collected in ``failures.json`` instead of aborting.

        Args:
            backend: Backend to use instead of the configured one

        Raises:
            ConfigurationError: If streamst fixtures lack sentence spans
            ManifestError: If the manifest cannot be loaded
        """
        config = self.config
        logger.info("Starting run: %s", config.name)
        fixtures = load_manifest(config.manifest)
        if config.task == Task.STREAMST:
            missing = [f.source_id for f in fixtures if not f.sentence_spans]
            if missing:
                raise ConfigurationError(
                    f"streamst fixtures need sentence_spans: {', '.join(missing)}"
                )

        backend = backend or get_backend(config.backend, fixtures)
        run_dir = config.output_dir
        write_json(run_dir / RUN_FILE, config.model_dump(mode="json"))

        jobs = [(fixture, k) for k in config.k_grid for fixture in fixtures]
        logger.info(
            "Running %s on %d fixtures x %d k values with %d-ms chunks",
            config.policy.value,
            len(fixtures),
            len(config.k_grid),
            self.chunk_ms,
        )
        outcome = RunOutcome(run_dir=run_dir)
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            futures = [
                pool.submit(self._run_one, backend, fixture, k) for fixture, k in jobs
            ]
            for (fixture, k), future in zip(jobs, futures, strict=True):
                try:
                    outcome.summaries.append(future.result())
                except StreamTLError as e:
                    failure = RunFailure(
                        source_id=fixture.source_id,
                        k=k,
                        chunk_ms=self.chunk_ms,
                        error=type(e.__cause__ or e).__name__,
                        message=str(e),
                        chunk=e.chunk if isinstance(e, StepError) else None,
                    )
                    logger.error(
                        "%s k=%d failed: %s", fixture.source_id, k, failure.message
                    )
                    outcome.failures.append(failure)

        write_json(
            run_dir / FAILURES_FILE,
            [failure.model_dump(mode="json") for failure in outcome.failures],
        )
        logger.info(
            "Run completed: %s (%d summaries, %d failures)",
            config.name,
            len(outcome.summaries),
            len(outcome.failures),
        )
        return outcome

    def _run_one(self, backend: BaseBackend, fixture: Fixture, k: int) -> Path:
        chunk_ms = self.chunk_ms
        policy_config = self.config.policy_config(
            k,
            chunk_ms,
            sentence_boundaries=fixture.sentence_boundaries(chunk_ms),
            seed=derive_seed(self.config.seed, fixture.source_id),
        )
        stream = fixture.to_stream(chunk_ms)
        prompt = render_prompt(fixture.target_lang or self.config.target_lang)
        policy = self.config.policy
        grid_dir = self.config.output_dir / grid_dir_name(policy, k, chunk_ms)
        runner = wait_k_policy if policy == PolicyKind.WAIT_K else run_stream
        try:
            result = runner(stream, backend, policy_config, prompt)
        except StepError as e:
            partial = grid_dir / f"{fixture.source_id}.partial.trace.jsonl"
            write_trace(partial, e.trace)
            raise
        write_trace(grid_dir / f"{fixture.source_id}.trace.jsonl", result.trace)
        return write_json(
            grid_dir / f"{fixture.source_id}.summary.json",
            result.summary().model_dump(mode="json"),
        )

    def evaluate(
        self, mode: EvalMode | str | None = None, tokenize: str | None = None
    ) -> QualityReport:
        """Score this harness's output directory; see evaluate_run."""
        return evaluate_run(self.config.output_dir, mode=mode, tokenize=tokenize)


def load_summaries(
    run_dir: str | Path,
    grid_dirs: Collection[str] | None = None,
    source_ids: Collection[str] | None = None,
) -> list[RunSummary]:
    """Load the summaries of a run directory, in path order.

    Args:
        run_dir: Directory written by Harness.run
        grid_dirs: Only read these grid directories, e.g. ``streamuni_k3_c640``
        source_ids: Only keep summaries of these streams
    """
    paths = sorted(Path(run_dir).glob("*/*.summary.json"))
    summaries = []
    for path in paths:
        if grid_dirs is not None and path.parent.name not in grid_dirs:
            continue
        try:
            summary = RunSummary.model_validate_json(path.read_text("utf-8"))
        except (OSError, ValidationError) as e:
            raise MetricError(f"Cannot read summary {path}: {e}") from e
        if source_ids is None or summary.source_id in source_ids:
            summaries.append(summary)
    return summaries


def evaluate_run(
    run_dir: str | Path,
    mode: EvalMode | str | None = None,
    manifest: str | Path | None = None,
    tokenize: str | None = None,
) -> QualityReport:
    """Score a run directory and write ``report.json`` and ``curve.csv`` to it.

    The task recorded in ``run.json`` fixes the evaluation mode: sentence for
    simulst runs, stream for streamst runs. Only the grid directories and
    streams of that run are scored; leftovers of earlier runs are ignored.

    Args:
        run_dir: Directory written by Harness.run
        mode: Expected evaluation mode; must match the run's task
        manifest: Reference manifest, defaulting to the one of the run
        tokenize: BLEU tokenization, defaulting by target language

    Raises:
        ConfigurationError: If the run configuration is missing or the mode
            does not match the run's task
        MetricError: If the directory holds no summaries
    """
    run_dir = Path(run_dir)
    run_file = run_dir / RUN_FILE
    if not run_file.is_file():
        raise ConfigurationError(f"No {RUN_FILE} in {run_dir}")
    try:
        run_config = RunConfig.model_validate_json(run_file.read_text("utf-8"))
    except ValidationError as e:
        raise ConfigurationError(f"Invalid {run_file}: {e}") from e

    expected = TASK_EVAL_MODES[run_config.task]
    if mode is not None and EvalMode(mode) != expected:
        raise ConfigurationError(
            f"Cannot evaluate a {run_config.task.value} run in "
            f"{EvalMode(mode).value} mode; it needs {expected.value} mode"
        )

    fixtures = load_manifest(manifest or run_config.manifest)
    refs = {fixture.source_id: fixture for fixture in fixtures}
    chunk_ms = run_config.chunk_ms or default_chunk_ms(run_config.target_lang)
    grid_dirs = {
        grid_dir_name(run_config.policy, k, chunk_ms) for k in run_config.k_grid
    }
    summaries = load_summaries(run_dir, grid_dirs, refs.keys())
    if not summaries:
        raise MetricError(f"No run summaries in {run_dir}")

    report = quality_report(
        summaries,
        refs,
        expected,
        tokenize or default_tokenize(run_config.target_lang),
    )
    write_report(report, run_dir)
    return report
