"""
Command-line front end for the Bernoulli-Gaussian rate-distortion toolkit

Examples:
    python scripts/bgrd.py bounds --p 0.1 --d-min 0.005 --d-max 0.1 --points 40
    python scripts/bgrd.py ri --p 0.1 --d-min 1e-6 --d-max 1e-2 --points 30
    python scripts/bgrd.py simulate-codec --p 0.1 --n 10000 --target-D 0.025 --blocks 100
    python scripts/bgrd.py simulate-channel --p 0.1 --n 500 --rate 0.05 --D 0.01 --trials 200
    python scripts/bgrd.py typicality --n-values 100 1000 10000 --epsilon 0.05 --trials 200

Tables go to stdout (or --out), diagnostics to stderr. Simulations run on
the unit-variance source; --sigma2 rescales their distortion arguments.
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional

# Add src to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / "src"))

from automation.sweep_runner import SweepSpec, bounds_row, ri_row, run_sweep  # type: ignore
from config.settings import Settings  # type: ignore
from simulation.channel import ChannelConfig, run_channel_experiment  # type: ignore
from simulation.codec import CodecConfig, run_codec  # type: ignore
from simulation.typicality import concentration_experiment  # type: ignore
from storage.report_writer import write_report  # type: ignore
from theory.bounds import SourceModel, scale_reduce  # type: ignore
from theory.minimax import MinimaxConfig, bound_set  # type: ignore
from utils.logger import FAIL, configure_logging  # type: ignore

EXIT_USAGE = 2


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=float, help="Support probability in (0, 1)")
    common.add_argument("--sigma2", type=float, default=1.0, help="Gaussian variance (default: 1)")
    common.add_argument("--seed", type=int, default=None, help="Base seed (default: BGRD_SEED or 0)")
    common.add_argument("--format", choices=["csv", "json"], default="csv", help="Output format (default: csv)")
    common.add_argument("--out", type=str, default=None, help="Write the table here instead of stdout")
    common.add_argument("--config", type=str, default=None, help="Flat KEY=VALUE settings file")
    common.add_argument("--workers", type=int, default=None, help="Sweep worker processes (default: BGRD_WORKERS)")
    common.add_argument("--log-level", type=str, default=None, help="DEBUG, INFO, WARNING or ERROR")
    return common


def _sweep_flags(sub: argparse.ArgumentParser, spacing: str) -> None:
    sub.add_argument("--d-min", type=float, required=True, help="Smallest distortion")
    sub.add_argument("--d-max", type=float, required=True, help="Largest distortion")
    sub.add_argument("--points", type=int, default=40, help="Number of distortions (default: 40)")
    sub.add_argument("--spacing", choices=["linear", "log"], default=spacing, help=f"Grid spacing (default: {spacing})")


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        description="Bounds, improvement term and simulations for Bernoulli-Gaussian sources",
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    bounds = subparsers.add_parser("bounds", parents=[common], help="Upper and lower bounds over a distortion sweep")
    _sweep_flags(bounds, "linear")

    ri = subparsers.add_parser("ri", parents=[common], help="Improvement term R_i over a distortion sweep")
    _sweep_flags(ri, "log")

    codec = subparsers.add_parser("simulate-codec", parents=[common], help="Run the two-stage block codec")
    codec.add_argument("--n", type=int, required=True, help="Block length")
    codec.add_argument("--target-D", type=float, required=True, help="Target distortion per source symbol")
    codec.add_argument("--blocks", type=int, required=True, help="Number of blocks (>= 1)")
    codec.add_argument("--epsilon1", type=float, default=0.01, help="Support shell half-width (default: 0.01)")
    codec.add_argument("--levels", type=int, default=None, help="Fixed quantizer level count")

    channel = subparsers.add_parser("simulate-channel", parents=[common], help="Monte Carlo lossy coding channel")
    channel.add_argument("--n", type=int, required=True, help="Block length")
    channel.add_argument("--rate", type=float, required=True, help="Codebook rate in bits per symbol")
    channel.add_argument("--D", type=float, required=True, help="Codec distortion target")
    channel.add_argument("--trials", type=int, required=True, help="Number of trials (>= 1)")
    channel.add_argument("--L", type=float, default=None, help="Score threshold (default: optimizer witness L)")
    channel.add_argument("--support-epsilon", type=float, default=0.05, help="Codec support shell half-width")
    channel.add_argument("--failure-modes", type=str, default=None, help="Write the failure-mode histogram CSV here")

    typ = subparsers.add_parser("typicality", parents=[common], help="Gaussian typicality concentration table")
    typ.add_argument("--n-values", type=int, nargs="+", required=True, help="Block lengths")
    typ.add_argument("--epsilon", type=float, required=True, help="Typicality tolerance")
    typ.add_argument("--trials", type=int, default=200, help="Trials per length (default: 200)")
    typ.add_argument("--K", type=int, default=80, help="Endpoint grid half-width in cells")
    typ.add_argument("--omega", type=float, default=0.1, help="Endpoint grid cell width")

    return parser


def _require_p(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    if args.p is None:
        parser.error(f"{args.command} requires --p")


def cmd_bounds(spec: SweepSpec, settings: Settings, args: argparse.Namespace) -> None:
    rows = run_sweep(spec, bounds_row, settings.workers)
    write_report(rows, spec.format, args.out)


def cmd_ri_curve(spec: SweepSpec, settings: Settings, args: argparse.Namespace) -> None:
    rows = run_sweep(spec, ri_row, settings.workers)
    write_report(rows, spec.format, args.out)


def cmd_simulate_codec(cfg: CodecConfig, blocks: int, minimax: MinimaxConfig, args: argparse.Namespace) -> None:
    report = run_codec(cfg, blocks)
    row = report.model_dump()
    bs = bound_set(report.empirical_distortion, cfg.p, minimax)
    row.update({
        "lb_improved": bs.lb_improved,
        "ub1": bs.ub1,
        "ub2": bs.ub2,
    })
    write_report([row], args.format, args.out)


def cmd_simulate_channel(cfg: ChannelConfig, args: argparse.Namespace) -> None:
    report = run_channel_experiment(cfg)
    row = report.model_dump(exclude={"failure_modes"})
    provenance = {"L_source": report.L_source, "L": report.L} if report.L_source == "witness" else None
    write_report([row], args.format, args.out, provenance)
    if args.failure_modes:
        histogram = [{"mode": mode, "count": count} for mode, count in report.failure_modes.items()]
        write_report(histogram, "csv", args.failure_modes)


def cmd_typicality(args: argparse.Namespace, seed: int) -> None:
    rows = concentration_experiment(args.n_values, args.epsilon, args.trials, seed, args.K, args.omega)
    write_report(rows, args.format, args.out)


def _one_line(error: Exception) -> str:
    return " ".join(str(error).split())


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = Settings(
            config_path=args.config,
            overrides={"WORKERS": args.workers, "LOG_LEVEL": args.log_level, "SEED": args.seed}
        )
        configure_logging(settings.log_level)
        seed = settings.seed

        if args.command in ("bounds", "ri"):
            _require_p(parser, args)
            spec = SweepSpec(
                p=args.p,
                sigma2=args.sigma2,
                d_min=args.d_min,
                d_max=args.d_max,
                points=args.points,
                spacing=args.spacing,
                format=args.format,
                seed=seed,
                cfg=MinimaxConfig(**settings.minimax_overrides())
            )
            if args.command == "bounds":
                cmd_bounds(spec, settings, args)
            else:
                cmd_ri_curve(spec, settings, args)

        elif args.command == "simulate-codec":
            _require_p(parser, args)
            if args.blocks < 1:
                parser.error("--blocks must be at least 1")
            _, target_D = scale_reduce(SourceModel(p=args.p, sigma2=args.sigma2), args.target_D)
            cfg = CodecConfig(
                n=args.n, p=args.p, target_D=target_D, epsilon1=args.epsilon1,
                quantizer_levels=args.levels, seed=seed
            )
            cmd_simulate_codec(cfg, args.blocks, MinimaxConfig(**settings.minimax_overrides()), args)

        elif args.command == "simulate-channel":
            _require_p(parser, args)
            if args.trials < 1:
                parser.error("--trials must be at least 1")
            _, D = scale_reduce(SourceModel(p=args.p, sigma2=args.sigma2), args.D)
            cfg = ChannelConfig(
                n=args.n, p=args.p, rate_tilde=args.rate, L=args.L, D=D,
                trials=args.trials, seed=seed, support_epsilon=args.support_epsilon
            )
            cmd_simulate_channel(cfg, args)

        elif args.command == "typicality":
            cmd_typicality(args, seed)

    except (ValueError, RuntimeError) as e:
        print(f"{FAIL} error: {_one_line(e)}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
