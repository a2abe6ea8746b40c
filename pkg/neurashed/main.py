import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError

from neurashed import operations
from neurashed.config import Settings
from neurashed.errors import NeurashedError
from neurashed.version import __version__

logging.basicConfig(
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    level=logging.INFO,
)
logger = logging.getLogger(__name__)


def _input_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("-g", "--graph", type=Path, help="graph spec JSON")
    parent.add_argument("-d", "--dataset", type=Path, help="dataset JSON")
    parent.add_argument("-c", "--config", type=Path, help="train config JSON")
    parent.add_argument("--scenario", help="built-in scenario name or bundle directory")
    return parent


def _run_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--seed", type=int, help="seed for every random draw")
    parent.add_argument("--iters", type=int, help="training iterations")
    parent.add_argument("--batch-size", type=int, help="mini-batch size")
    parent.add_argument("--snapshot-every", type=int, help="snapshot / evaluation interval")
    parent.add_argument("--out", type=Path, required=True, help="output directory")
    parent.add_argument("--force", action="store_true", help="write into a non-empty --out")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neurashed",
        description="Simulate neurashed training dynamics and its information, elasticity and sparsity studies.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    inputs, run = _input_flags(), _run_flags()

    sub.add_parser("validate", parents=[inputs], help="check graph, dataset and config documents")
    sub.add_parser("train", parents=[inputs, run], help="train and write snapshots")
    mi = sub.add_parser("mi", parents=[inputs, run], help="information-bottleneck study")
    mi.add_argument("--sigma", type=float, help="noise standard deviation")
    mi.add_argument("--mc-samples", type=int, help="Monte Carlo samples per estimate")
    mi.add_argument("--eval-every", type=int, help="iterations between MI evaluations")
    sub.add_parser("elasticity", parents=[inputs, run], help="local-elasticity study")
    compare = sub.add_parser("compare-batch", parents=[inputs, run], help="small- vs large-batch sparsity")
    compare.add_argument("--large-batch", type=int, help="large batch size (default: dataset size)")
    compare.add_argument("--runs", type=int, default=3, help="seeds per batch size, starting at --seed")
    sub.add_parser("scenarios", help="list built-in scenarios")
    check = sub.add_parser("check", help="run a scenario's expected outcomes")
    check.add_argument("--scenario", required=True, help="scenario name or bundle directory")
    return parser


def _run(args: argparse.Namespace, argv: list[str], settings: Settings) -> int:
    if args.command == "scenarios":
        print(operations.format_scenario_list(settings=settings))
        return 0
    if args.command == "check":
        report, passed = operations.check_scenario(name=args.scenario, settings=settings)
        print(report)
        return 0 if passed else 1
    if args.command == "validate":
        print(
            operations.validate_files(
                scenario=args.scenario,
                graph_file=args.graph,
                dataset_file=args.dataset,
                config_file=args.config,
                settings=settings,
            )
        )
        return 0

    inputs = operations.load_inputs(
        scenario=args.scenario,
        graph_file=args.graph,
        dataset_file=args.dataset,
        config_file=args.config,
        settings=settings,
    )
    overrides = operations.Overrides(
        seed=args.seed,
        iterations=args.iters,
        batch_size=args.batch_size,
        snapshot_every=args.snapshot_every,
    )
    inputs = operations.Inputs(
        scenario=operations.apply_overrides(inputs.scenario, overrides), files=inputs.files
    )
    common = {"inputs": inputs, "out_dir": args.out, "force": args.force, "command": argv}
    match args.command:
        case "train":
            summary = operations.train(**common)
        case "mi":
            summary = operations.information_bottleneck(
                **common,
                eval_every=args.eval_every or args.snapshot_every or settings.eval_every,
                sigma=settings.sigma if args.sigma is None else args.sigma,
                mc_samples=settings.mc_samples if args.mc_samples is None else args.mc_samples,
            )
        case "elasticity":
            summary = operations.elasticity(**common)
        case "compare-batch":
            config = inputs.scenario.config
            summary = operations.compare_batch(
                **common,
                small_batch=config.batch_size,
                large_batch=args.large_batch or len(inputs.scenario.dataset),
                seeds=[config.seed + i for i in range(args.runs)],
                workers=settings.workers,
            )
    print(summary)
    return 0


def dispatch(argv: Sequence[str] | None = None) -> int:
    """Run one command. Returns 0 on success, 1 on a domain or I/O error, 2 on misuse."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        print("neurashed: error: a command is required", file=sys.stderr)
        return 2

    try:
        settings = Settings()
    except ValidationError as exc:
        print(f"Error: InvalidSettings: {exc}", file=sys.stderr)
        return 1
    logging.getLogger().setLevel(settings.log_level)
    logger.debug(f"neurashed {__version__} with {settings!s}")

    try:
        return _run(args, argv, settings)
    except NeurashedError as exc:
        print(f"Error: {exc.kind}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"Error: IoError: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
