"""
Command line entry point
"""

# stdlib
import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

# library
import pandas as pd

# module
from forum_innovators import __version__
from forum_innovators.config import PipelineConfig, load_config, parse_override
from forum_innovators.exceptions import ConfigError, ForumInnovatorsError
from forum_innovators.pipeline import STAGES, run_pipeline
from forum_innovators.stats.groups import render_blocks, render_comparison
from forum_innovators.synth import SynthSpec, generate, write_synth
from forum_innovators.util.handler import stage_handler

LOG = logging.getLogger("forum_innovators")

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# Flags that set an input path or a top-level config key
PATH_FLAGS = ("posts", "labels", "lexicon", "stopwords", "lemmas")


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("-c", "--config", help="YAML run configuration")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config key, dotted for nested keys (repeatable)",
    )
    parser.add_argument("-o", "--out", help="output directory")
    parser.add_argument("--seed", type=int, help="random seed")
    parser.add_argument(
        "--strict",
        action="store_true",
        default=None,
        help="fail on any input validation error",
    )
    parser.add_argument(
        "--threads", type=int, help="worker processes for graph metrics"
    )
    for name in PATH_FLAGS:
        parser.add_argument(f"--{name}", help=f"{name} input file")
    parser.add_argument(
        "--exclude-authors", help="file of author ids to drop, one per line"
    )
    parser.add_argument(
        "--thread-opener-edges",
        action="store_true",
        default=None,
        help="link parentless posts to the opener of their thread",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="more logging"
    )
    parser.add_argument("-q", "--quiet", action="count", default=0, help="less logging")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per stage plus run, report and synth"""
    parser = argparse.ArgumentParser(
        prog="forum-innovators",
        description=(
            "Network and language profiling of innovators in online company forums"
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    commands = parser.add_subparsers(dest="command", required=True)
    helps = {
        "ingest": "validate posts and labels, write corpus descriptives",
        "graph": "build the reply network, write edge and node lists",
        "metrics": "network and language metrics per author",
        "etm": "term selection, message clustering and keywords",
        "ca": "correspondence analysis of the term x cluster table",
        "stats": "innovators versus others tests and regression blocks",
        "run": "the full pipeline",
        "report": "re-render plain-text tables from an existing bundle",
        "synth": "write a synthetic corpus with planted innovators",
    }
    for name, text in helps.items():
        _common(commands.add_parser(name, help=text, description=text))
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    overrides = dict(parse_override(item) for item in args.overrides)
    if args.out is not None:
        overrides["output"] = args.out
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.strict:
        overrides["strict"] = True
    if args.threads is not None:
        overrides["threads"] = args.threads
    for name in PATH_FLAGS:
        value = getattr(args, name)
        if value is not None:
            overrides[f"inputs.{name}"] = value
    if args.exclude_authors is not None:
        overrides["inputs.exclude_authors"] = args.exclude_authors
    if args.thread_opener_edges:
        overrides["graph.thread_opener_edges"] = True
    return overrides


def configure_logging(verbose: int = 0, quiet: int = 0):
    """Single stream handler on the package logger"""
    level = logging.INFO + 10 * (quiet - verbose)
    level = max(logging.DEBUG, min(logging.CRITICAL, level))
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    LOG.handlers[:] = [handler]
    LOG.setLevel(level)
    LOG.propagate = False


def synth(config: PipelineConfig) -> Path:
    """Generate and write a synthetic corpus into the output directory"""
    with stage_handler("synth"):
        spec = SynthSpec.from_config(config.synth, config.seed)
        corpus, labels, truth = generate(spec)
        paths = write_synth(Path(config.output), corpus, labels, truth)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return Path(config.output)


def rerender(config: PipelineConfig) -> str:
    """Plain-text tables from the CSV reports of an existing bundle"""
    directory = Path(config.output)
    parts = []
    with stage_handler("report"):
        renderers = (("table4.csv", render_comparison), ("table5.csv", render_blocks))
        for csv_name, renderer in renderers:
            path = directory / csv_name
            if not path.is_file():
                raise ConfigError(f"{path} not found; run the stats stage first")
            text = renderer(pd.read_csv(path, keep_default_na=True))
            path.with_suffix(".txt").write_text(text, encoding="utf-8")
            parts.append(text)
    return "\n".join(parts)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run the command and map failures to exit codes"""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        config = load_config(args.config, _overrides(args))
        if args.command == "synth":
            synth(config)
        elif args.command == "report":
            print(rerender(config), end="")
        else:
            targets = STAGES if args.command == "run" else (args.command,)
            bundle = run_pipeline(config, targets)
            for name in ("table4.txt", "table5.txt"):
                if name in bundle.files():
                    print((bundle.directory / name).read_text(encoding="utf-8"))
    except ForumInnovatorsError as exc:
        LOG.error("%s", exc)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
