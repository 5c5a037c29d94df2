"""
Script to run the principal series over a file of (mu, lambda, cutoff, mode)
records and append every result to one JSON report.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

# Add the parent directory to sys.path to import app modules
parent_dir = str(Path(__file__).parent.parent)
sys.path.append(parent_dir)

from app.cli import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK, cmd_sweep  # noqa: E402
from app.config import LOG_LEVEL  # noqa: E402
from app.errors import ConfigError  # noqa: E402
from app.models.run_config import RunConfig  # noqa: E402

logger = logging.getLogger(__name__)


def append_report(path: Path, report: dict) -> None:
    """Append to the list stored at path, creating it on first use."""
    runs = []
    if path.exists():
        try:
            with open(path, "r", encoding="utf-8") as f:
                runs = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning(f"Starting a new report at {path}: {type(e).__name__}: {str(e)}")
            runs = []
        if not isinstance(runs, list):
            runs = [runs]
    runs.append(report)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(runs, f, indent=2, ensure_ascii=False)


def main() -> int:
    parser = argparse.ArgumentParser(description="Sweep principal-series parameters.")
    parser.add_argument("sweep_file", help="JSON sweep file")
    parser.add_argument("--out", default="data/sweeps/results.json", help="Report file to append to")
    parser.add_argument("--log-level", default=LOG_LEVEL)
    args = parser.parse_args()
    logging.basicConfig(level=getattr(logging, args.log_level.upper(), logging.INFO))

    try:
        config = RunConfig("sweep", sweep_file=args.sweep_file, log_level=args.log_level)
        report = cmd_sweep(config)
    except ConfigError as e:
        print(f"error: {str(e)}", file=sys.stderr)
        return EXIT_CONFIG

    append_report(Path(args.out), report.to_dict(deterministic=False))
    for line in report.summary_lines():
        print(line)
    print(f"Appended {len(report.checks)} checks to {args.out}")
    return EXIT_OK if report.passed else EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
