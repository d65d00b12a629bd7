#!/usr/bin/env python3
"""Example script demonstrating StreamTL usage."""

from pathlib import Path

from streamtl import Harness


def main() -> None:
    # Get the config path relative to this script
    script_dir = Path(__file__).parent
    repo_dir = script_dir.parent
    config_path = repo_dir / "configs" / "example.yaml"

    print(f"Loading config from: {config_path}")

    # Run the k grid, then score it
    harness = Harness.from_yaml(
        config_path, manifest=repo_dir / "configs" / "manifest.jsonl"
    )
    outcome = harness.run()
    report = harness.evaluate()

    print(report.to_frame().to_string(index=False))
    print(f"Done! Check {outcome.run_dir} for traces, report.json and curve.csv.")


if __name__ == "__main__":
    main()
