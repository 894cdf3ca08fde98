"""
covlab command line.

Every command reads one run file (--config) on top of the packaged defaults. All
randomness comes from the configured seed, which --seed overrides.

Exit codes: 0 success, 1 laboratory error, 2 usage error, 3 violated analytic bound.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence, TextIO

import pandas as pd

from ..config.config_manager import ConfigManager, RunConfig
from ..config.models import CommandName, SchemeKind
from ..dist.analytics import modified_pmf, scale_constant
from ..dist.models import CovertnessBudget
from ..dist.dependent import DependentSizeModel
from ..exceptions import BoundViolationError, CovertLabError, LabConfigError
from ..lab.experiments import ExperimentRunner
from ..lab.models import (
    COVERTNESS_COLUMNS,
    DEPENDENT_COLUMNS,
    FLAG_COLUMNS,
    SQRT_LAW_COLUMNS,
    THROUGHPUT_COLUMNS,
    ExperimentSpec,
)
from ..lab.report import assert_bounds, format_table, write_table
from ..scheme.alice import alice_insert
from ..scheme.bob import bob_extract
from ..scheme.budget import derive_budget
from ..scheme.key import generate_key, key_length_bits, read_key, write_key
from ..traffic.bits import bits_from_bytes, bytes_from_bits
from ..traffic.codec import read_stream, write_stream
from ..traffic.generator import generate_dependent, generate_iid
from ..utils.interfaces import LoggerInterface
from ..utils.logger import LogFormat, LoggerFactory, LoggingLevel
from ..warden.models import DetectorContext
from ..warden.registry import DetectorRegistry

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_BOUND = 3

DETECT_COLUMNS = ['detector', 'n', 'statistic', 'threshold', 'decision']

_SWEEP_HELP = {
    CommandName.SWEEP_COVERTNESS: COVERTNESS_COLUMNS,
    CommandName.SWEEP_SQRTLAW: SQRT_LAW_COLUMNS,
    CommandName.SWEEP_THROUGHPUT: THROUGHPUT_COLUMNS,
    CommandName.SWEEP_DEPENDENT: DEPENDENT_COLUMNS,
    CommandName.FLAG_REPORT: FLAG_COLUMNS,
}


class CommandRunner:
    """
    Binds a loaded configuration to the library operations behind each command.
    """

    def __init__(self, config: ConfigManager, out: Optional[str] = None, progress: bool = False,
                 stdout: TextIO = sys.stdout, logger: Optional[LoggerInterface] = None):
        """
        Initialize the runner.

        Args:
            config: Loaded configuration
            out: Output path override (--out)
            progress: Show progress bars
            stdout: Where summaries are printed
            logger: Logger instance
        """
        self._config_manager = config
        self._out = out
        self._progress = progress
        self._stdout = stdout
        self._logger = logger or LoggerFactory.create("cli")

    @property
    def config(self) -> RunConfig:
        return self._config_manager.config

    def _print(self, text: str) -> None:
        print(text, file=self._stdout)

    def _output(self, default: str) -> Path:
        return Path(self._out or default)

    def _model(self):
        return self._config_manager.build_model()

    def _budget(self, model, n: int) -> CovertnessBudget:
        if self.config.epsilon == 0.0:
            return CovertnessBudget.null(n)
        return derive_budget(model, n, self.config.epsilon, self.config.eta_mode)

    def cmd_generate(self) -> int:
        """Write a CVL1 stream of n packets and print its summary statistics."""
        cfg = self.config
        model = self._model()
        if isinstance(model, DependentSizeModel):
            stream = generate_dependent(model, cfg.n, cfg.seed)
        else:
            stream = generate_iid(model, cfg.n, cfg.seed)
        path = self._output(cfg.io.stream)
        write_stream(stream, path)
        sizes = stream.sizes
        self._print(f"wrote {path}")
        self._print(f"n = {stream.n}")
        self._print(f"sample mean = {sizes.mean():.6g}, sample variance = {sizes.var():.6g}")
        if isinstance(model, DependentSizeModel):
            self._print(f"order = {model.order}, reachable histories = {model.chain.n_states}")
        else:
            self._print(f"mu = {model.mean:.6g}, sigma^2 = {model.variance:.6g}, K = {model.k}, "
                        f"unit spaced = {model.unit_spaced}, xi = {scale_constant(model):.6g}")
        return EXIT_OK

    def cmd_insert(self) -> int:
        """Run Alice on the configured stream and message; write the stream, key and summary."""
        cfg = self.config
        model = self._model()
        stream = read_stream(cfg.io.stream)
        message_path = Path(cfg.io.message)
        try:
            message = bits_from_bytes(message_path.read_bytes())
        except OSError as e:
            raise LabConfigError(f"cannot read message file {message_path}: {e}", original_error=e,
                                 context={'field': 'io.message'}) from e
        scheme = SchemeKind.DEPENDENT if isinstance(model, DependentSizeModel) else cfg.scheme
        budget = self._budget(model, stream.n)
        key = generate_key(stream.n, budget.p, cfg.seed)
        outcome = alice_insert(scheme, stream, key, model, message)

        out = self._output(cfg.io.inserted)
        write_stream(outcome.stream, out)
        write_key(key, cfg.io.key)
        summary = {
            'scheme': scheme.value,
            'n': stream.n,
            'epsilon': cfg.epsilon,
            'p': budget.p,
            'selected': key.count,
            'key_bits': key_length_bits(key),
            'n_c': outcome.inserted_bits,
            'consumed_bits': outcome.message_cursor,
            'padding_bits': outcome.padding_bits,
            'message_bits': int(message.size),
        }
        Path(cfg.io.summary).write_text(json.dumps(summary, indent=2) + "\n", encoding='utf-8')
        self._print(f"wrote {out}, key {cfg.io.key}, summary {cfg.io.summary}")
        self._print(f"n_c = {outcome.inserted_bits}, consumed = {outcome.message_cursor} "
                    f"of {message.size} message bits, selected = {key.count}")
        return EXIT_OK

    def cmd_extract(self) -> int:
        """Run Bob on the inserted stream; write the restored stream and the extracted bits."""
        cfg = self.config
        model = self._model()
        stream = read_stream(cfg.io.inserted)
        key = read_key(cfg.io.key)
        result = bob_extract(stream, key, model)
        out = self._output(cfg.io.restored)
        write_stream(result.restored, out)
        Path(cfg.io.extracted).write_bytes(bytes_from_bits(result.bits))
        self._print(f"wrote {out} and {cfg.io.extracted}")
        self._print(f"extracted {result.bits.size} bits from {result.carrying} flagged packets")
        return EXIT_OK

    def cmd_detect(self) -> int:
        """Run every configured detector on the sizes of the configured stream."""
        cfg = self.config
        model = self._model()
        stream = read_stream(cfg.io.stream)
        n = stream.n
        p = self._budget(model, n).p
        if isinstance(model, DependentSizeModel):
            context = DetectorContext(n=n, model=model, p=p, alpha=cfg.alpha, seed=cfg.seed)
        else:
            context = DetectorContext(n=n, pmf=model, alternative=modified_pmf(model, p), p=p,
                                      alpha=cfg.alpha, seed=cfg.seed)
        registry = DetectorRegistry()
        rows = []
        for kind in cfg.detectors:
            detector = registry.create(kind.value, context)
            verdict = detector.decide(stream.sizes)
            rows.append({'detector': detector.name, 'n': n, 'statistic': verdict.statistic,
                         'threshold': verdict.threshold, 'decision': verdict.decision.value})
        table = pd.DataFrame(rows, columns=DETECT_COLUMNS)
        write_table(table, self._output(cfg.io.output), cfg.csv_float_format)
        self._print(format_table(table, cfg.csv_float_format).rstrip("\n"))
        return EXIT_OK

    def _spec(self) -> ExperimentSpec:
        cfg = self.config
        return ExperimentSpec(
            model=self._model(),
            epsilons=cfg.epsilons,
            sizes=cfg.sizes,
            gammas=cfg.gammas,
            trials=cfg.trials,
            detectors=cfg.detectors,
            alpha=cfg.alpha,
            eta_mode=cfg.eta_mode,
            seed=cfg.seed,
            workers=cfg.workers,
            progress=self._progress,
        )

    def _sweep(self, run: Callable[[ExperimentRunner], pd.DataFrame]) -> int:
        cfg = self.config
        table = run(ExperimentRunner(self._spec(), logger=self._logger))
        write_table(table, self._output(cfg.io.output), cfg.csv_float_format)
        self._print(format_table(table, cfg.csv_float_format).rstrip("\n"))
        assert_bounds(table, logger=self._logger)
        return EXIT_OK

    def cmd_sweep_covertness(self) -> int:
        return self._sweep(ExperimentRunner.covertness_sweep)

    def cmd_sweep_sqrtlaw(self) -> int:
        return self._sweep(ExperimentRunner.sqrt_law_sweep)

    def cmd_sweep_throughput(self) -> int:
        return self._sweep(ExperimentRunner.throughput_experiment)

    def cmd_sweep_dependent(self) -> int:
        return self._sweep(ExperimentRunner.dependent_experiment)

    def cmd_flag_report(self) -> int:
        return self._sweep(ExperimentRunner.flag_covertness_report)

    def run(self, command: CommandName) -> int:
        handlers: Dict[CommandName, Callable[[], int]] = {
            CommandName.GENERATE: self.cmd_generate,
            CommandName.INSERT: self.cmd_insert,
            CommandName.EXTRACT: self.cmd_extract,
            CommandName.DETECT: self.cmd_detect,
            CommandName.SWEEP_COVERTNESS: self.cmd_sweep_covertness,
            CommandName.SWEEP_SQRTLAW: self.cmd_sweep_sqrtlaw,
            CommandName.SWEEP_THROUGHPUT: self.cmd_sweep_throughput,
            CommandName.SWEEP_DEPENDENT: self.cmd_sweep_dependent,
            CommandName.FLAG_REPORT: self.cmd_flag_report,
        }
        return handlers[command]()


_COMMAND_HELP = {
    CommandName.GENERATE: "write a synthetic CVL1 stream (io.stream)",
    CommandName.INSERT: "insert the message into io.stream; writes io.inserted, io.key and io.summary",
    CommandName.EXTRACT: "extract from io.inserted with io.key; writes io.restored and io.extracted",
    CommandName.DETECT: "run the configured detectors on io.stream; writes io.output",
    CommandName.SWEEP_COVERTNESS: "P_e of each detector at the covert budget",
    CommandName.SWEEP_SQRTLAW: "P_e when n^gamma bits are inserted",
    CommandName.SWEEP_THROUGHPUT: "Monte Carlo distribution of inserted bits",
    CommandName.SWEEP_DEPENDENT: "throughput and row divergences for a dependent model",
    CommandName.FLAG_REPORT: "analytic size and flag-bit divergence terms",
}


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one sub-command per CommandName."""
    parser = argparse.ArgumentParser(
        prog="covlab",
        description="Covert bit insertion laboratory.",
        epilog="Exit codes: 0 success, 1 error, 2 usage, 3 violated bound.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="run file (TOML, YAML or JSON)")
    common.add_argument("--seed", type=int, metavar="N", help="override the configured seed")
    common.add_argument("--out", metavar="PATH", help="override the command's primary output path")
    common.add_argument("--verbose", action="store_true", help="log to stderr")
    common.add_argument("--progress", action="store_true", help="show progress bars")

    commands = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for command in CommandName:
        columns = _SWEEP_HELP.get(command)
        epilog = f"CSV columns: {', '.join(columns)}" if columns else None
        if command is CommandName.DETECT:
            epilog = f"CSV columns: {', '.join(DETECT_COLUMNS)}"
        commands.add_parser(command.value, parents=[common], help=_COMMAND_HELP[command], epilog=epilog)
    return parser


def _diagnostic(error: CovertLabError) -> str:
    field = error.context.get('field') if error.context else None
    kind = type(error).__name__
    return f"{kind}: {error.message}" + (f" [field: {field}]" if field else "")


def main(argv: Optional[Sequence[str]] = None, stdout: TextIO = sys.stdout, stderr: TextIO = sys.stderr) -> int:
    """
    Entry point of the covlab console script.

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK

    try:
        config = ConfigManager(args.config, seed=args.seed)
        if args.verbose:
            LoggerFactory.enable_real_loggers(LoggingLevel.from_name(config.log_level),
                                              LogFormat.from_name(config.config.log_format), stream=stderr)
        runner = CommandRunner(config, out=args.out, progress=args.progress, stdout=stdout)
        return runner.run(CommandName(args.command))
    except BoundViolationError as e:
        print(_diagnostic(e), file=stderr)
        return EXIT_BOUND
    except CovertLabError as e:
        print(_diagnostic(e), file=stderr)
        return EXIT_ERROR
    except OSError as e:
        print(f"{type(e).__name__}: {e}", file=stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
