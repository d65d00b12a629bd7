"""Command-line interface: run, eval, build-cot, stub-server and replay."""

import argparse
import json
import logging
import os
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from streamtl.backends import ScriptedBackend, load_manifest
from streamtl.backends.remote import TOKEN_ENV
from streamtl.backends.stub_server import (
    create_app,
    load_stub_script,
    make_stub_server,
)
from streamtl.config import ExportConfig, PolicyKind, load_yaml, parse_policy_config
from streamtl.core import read_trace, replay
from streamtl.cot import build_dataset
from streamtl.exceptions import ConfigurationError, ManifestError, StreamTLError
from streamtl.export import get_writer
from streamtl.harness import Harness, evaluate_run
from streamtl.models import RunSummary

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def _add_run_parser(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("run", help="Run a policy over a (k, chunk) grid")
    parser.add_argument("--config", type=Path, help="YAML run configuration")
    parser.add_argument("--name", help="Run name")
    parser.add_argument("--manifest", type=Path, help="JSONL fixture manifest")
    parser.add_argument("--backend", choices=["scripted", "remote"])
    parser.add_argument("--url", help="Remote backend URL")
    parser.add_argument("--policy", choices=[kind.value for kind in PolicyKind])
    parser.add_argument("--k", type=int, nargs="+", dest="k_grid", help="k grid")
    parser.add_argument("--chunk-ms", type=int, help="Chunk size in ms")
    parser.add_argument("--task", choices=["simulst", "streamst"])
    parser.add_argument("--output-dir", type=Path, help="Run directory")
    parser.add_argument("--seed", type=int, help="Seed for per-stream backend seeds")
    parser.add_argument(
        "--no-generation",
        dest="generation_enabled",
        action="store_const",
        const=False,
        help="Emit only when a segment is truncated",
    )
    parser.add_argument("--jobs", type=int, help="Fixtures run in parallel")
    parser.add_argument("--target-lang", help="Target language (default: Chinese)")


def _add_eval_parser(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("eval", help="Score a run directory")
    parser.add_argument("run_dir", type=Path)
    parser.add_argument("--manifest", type=Path, help="Reference manifest")
    parser.add_argument("--mode", choices=["sentence", "stream"])
    parser.add_argument("--tokenize", choices=["whitespace_punct", "char"])


def _add_build_cot_parser(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("build-cot", help="Build streaming CoT data")
    parser.add_argument("--manifest", type=Path, required=True)
    parser.add_argument(
        "--ratio",
        type=float,
        default=0.5,
        help="Share of streaming audio (default: 0.5)",
    )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="./output/cot.jsonl", help="Output path")
    parser.add_argument(
        "--destination",
        default="jsonl",
        choices=["jsonl", "parquet", "huggingface"],
    )
    parser.add_argument("--repo-id", help="HuggingFace repo ID for huggingface")
    parser.add_argument("--private", action="store_true")
    parser.add_argument("--target-lang", default="Chinese")
    parser.add_argument("--chunk-ms", type=int)


def _add_stub_server_parser(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("stub-server", help="Serve fixtures over HTTP")
    parser.add_argument("--script", type=Path, required=True, help="Stub YAML script")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)


def _add_replay_parser(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("replay", help="Rebuild state from a trace")
    parser.add_argument("trace", type=Path)
    parser.add_argument("--chunk-ms", type=int, default=640)
    parser.add_argument(
        "--expect",
        type=Path,
        help="Summary JSON the replayed state must match",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="streamtl",
        description="Streaming speech translation policies, simulation and metrics",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True)
    _add_run_parser(subparsers)
    _add_eval_parser(subparsers)
    _add_build_cot_parser(subparsers)
    _add_stub_server_parser(subparsers)
    _add_replay_parser(subparsers)
    return parser


def _run_config_data(args: argparse.Namespace) -> dict[str, Any]:
    data: dict[str, Any] = load_yaml(args.config) if args.config else {}
    for key in (
        "name",
        "manifest",
        "policy",
        "k_grid",
        "chunk_ms",
        "task",
        "output_dir",
        "seed",
        "jobs",
        "target_lang",
        "generation_enabled",
    ):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    backend = dict(data.get("backend") or {})
    if args.backend is not None:
        backend["kind"] = args.backend
    if args.url is not None:
        backend["url"] = args.url
    if backend:
        data["backend"] = backend
    if "manifest" not in data:
        raise ConfigurationError("A manifest is required (--manifest or --config)")
    return data


def cmd_run(args: argparse.Namespace) -> int:
    harness = Harness.from_dict(_run_config_data(args))
    outcome = harness.run()
    print(f"Wrote {len(outcome.summaries)} summaries to {outcome.run_dir}")
    for failure in outcome.failures:
        print(
            f"FAILED {failure.source_id} k={failure.k}: "
            f"{failure.error}: {failure.message}",
            file=sys.stderr,
        )
    return EXIT_OK if outcome.ok else EXIT_FAILURE


def cmd_eval(args: argparse.Namespace) -> int:
    report = evaluate_run(
        args.run_dir, mode=args.mode, manifest=args.manifest, tokenize=args.tokenize
    )
    print(report.to_frame().to_csv(index=False), end="")
    return EXIT_OK


def cmd_build_cot(args: argparse.Namespace) -> int:
    try:
        export = ExportConfig(
            destination=args.destination,
            path=args.out,
            repo_id=args.repo_id,
            private=args.private,
        )
    except ValidationError as e:
        raise ConfigurationError(f"Invalid export options: {e}") from e
    examples = build_dataset(
        args.manifest,
        streaming_ratio=args.ratio,
        seed=args.seed,
        target_lang=args.target_lang,
        chunk_ms=args.chunk_ms,
    )
    writer = get_writer(export.destination)(export)
    writer.write(examples)
    print(f"Wrote {len(examples)} examples to {args.repo_id or args.out}")
    return EXIT_OK


def cmd_stub_server(args: argparse.Namespace) -> int:
    script = load_stub_script(args.script)
    backend = ScriptedBackend(load_manifest(script.manifest))
    app = create_app(backend, script.faults, token=os.environ.get(TOKEN_ENV))
    try:
        server = make_stub_server(app, args.host, args.port)
    except OSError as e:
        logger.error("Cannot bind %s:%d: %s", args.host, args.port, e)
        return EXIT_FAILURE
    print(f"Serving {args.script} on http://{args.host}:{server.server_port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        logger.info("Shutting down stub server")
    finally:
        server.server_close()
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    events = read_trace(args.trace)
    chunk_ms = args.chunk_ms
    expected = None
    if args.expect:
        try:
            expected = RunSummary.model_validate_json(args.expect.read_text("utf-8"))
        except (OSError, ValueError) as e:
            raise ConfigurationError(f"Cannot read summary {args.expect}: {e}") from e
        chunk_ms = expected.chunk_ms
    state = replay(events, parse_policy_config({"chunk_ms": chunk_ms}))
    print(json.dumps(state.to_dict(), ensure_ascii=False, indent=2))
    if expected is None:
        return EXIT_OK
    if state.hypothesis != expected.hypothesis or state.segments != expected.segments:
        print("Replayed state does not match the summary", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


_COMMANDS = {
    "run": cmd_run,
    "eval": cmd_eval,
    "build-cot": cmd_build_cot,
    "stub-server": cmd_stub_server,
    "replay": cmd_replay,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    try:
        return _COMMANDS[args.command](args)
    except (ConfigurationError, ManifestError) as e:
        logger.error("%s", e)
        return EXIT_CONFIG
    except StreamTLError as e:
        logger.error("%s", e)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
