"""
Command line driver: run a stream against a structure, fuzz a structure
against the oracles, or replay a dumped counterexample.

Exit codes: 0 ok, 1 parse error, 2 check failure, 3 bad config.
"""

import argparse
import io
import logging
import random
import sys
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple

from windowmsf import checks
from windowmsf.config import Settings, configure_logging, get_settings, make_params
from windowmsf.dumps import load_log, save_log
from windowmsf.errors import (
    CheckFailure,
    ConfigError,
    InvalidVertexError,
    StreamParseError,
    WeightOutOfRangeError,
    WindowMSFError,
)
from windowmsf.models import STRUCTURES, CommandLog, ExpireCommand, FuzzReport, InsertCommand, StreamCommand, StructureParams
from windowmsf.msf import StreamMSF
from windowmsf.stream import format_bool, format_command, format_fraction, parse_stream
from windowmsf.window import (
    ApproximateMSFWeight,
    BipartitenessMonitor,
    CutSparsifier,
    CycleMonitor,
    EagerConnectivity,
    KCertificate,
    SlidingConnectivity,
)

logger = logging.getLogger(__name__)

# --- Structures and their queries ---

def build_structure(params: StructureParams) -> Any:
    n, seed = params.n, params.seed
    if params.structure == "msf":
        return StreamMSF(n, seed)
    if params.structure == "conn":
        return SlidingConnectivity(n, seed)
    if params.structure == "conn-eager":
        return EagerConnectivity(n, seed)
    if params.structure == "bipartite":
        return BipartitenessMonitor(n, seed)
    if params.structure == "amsf":
        return ApproximateMSFWeight(n, params.epsilon, params.max_weight, seed)
    if params.structure == "kcert":
        return KCertificate(n, params.k, seed)
    if params.structure == "cyclefree":
        return CycleMonitor(n, seed)
    return CutSparsifier(n, params.epsilon, seed, repetitions=params.repetitions, levels=params.levels,
                         k=params.sparsifier_k, cert_constant=params.cert_constant,
                         sample_constant=params.sample_constant)


def _pathmax(s: StreamMSF, u: int, v: int) -> List[str]:
    key = s.heaviest_on_path(u, v)
    return ["none" if key is None else f"{key.weight} {key.edge}"]


def _sparsify(s: CutSparsifier) -> List[str]:
    return [f"{e.u} {e.v} {e.weight.numerator} {e.weight.denominator}" for e in s.sparsify()]


Query = Tuple[int, Callable[..., List[str]]]

QUERIES: Dict[str, Dict[str, Query]] = {
    "msf": {
        "weight": (0, lambda s: [str(s.total_weight())]),
        "components": (0, lambda s: [str(s.components())]),
        "edges": (0, lambda s: [" ".join(str(e) for e in sorted(s.edge_ids()))]),
        "pathmax": (2, _pathmax),
    },
    "conn": {
        "connected": (2, lambda s, u, v: [format_bool(s.is_connected(u, v))]),
    },
    "conn-eager": {
        "connected": (2, lambda s, u, v: [format_bool(s.is_connected(u, v))]),
        "components": (0, lambda s: [str(s.num_components())]),
    },
    "bipartite": {
        "bipartite": (0, lambda s: [format_bool(s.is_bipartite())]),
    },
    "amsf": {
        "weight": (0, lambda s: [format_fraction(s.weight())]),
    },
    "kcert": {
        "cert": (0, lambda s: [" ".join(str(e.id) for e in s.make_cert())]),
        "certsize": (0, lambda s: [str(s.cert_size())]),
    },
    "cyclefree": {
        "hascycle": (0, lambda s: [format_bool(s.has_cycle())]),
    },
    "sparsifier": {
        "sparsify": (0, _sparsify),
    },
}


class Session:
    """One structure fed by one command stream."""

    def __init__(self, params: StructureParams, out: TextIO):
        self.params = params
        self.out = out
        self.structure = build_structure(params)
        self.log: List[StreamCommand] = []
        self.checks = 0

    def execute(self, command: StreamCommand, line: int) -> None:
        kind = command.kind
        if kind == "insert":
            try:
                self.structure.insert(command.edges)
            except (InvalidVertexError, WeightOutOfRangeError) as e:
                raise StreamParseError(line, e.detail) from e
            self.log.append(command)
            if self.params.check == "op":
                self.verify(line)
        elif kind == "expire":
            if self.params.structure == "msf":
                raise StreamParseError(line, "msf is insert-only; expire is not supported")
            self.structure.expire(command.delta)
            self.log.append(command)
            if self.params.check == "op":
                self.verify(line)
        elif kind == "query":
            for answer in self.answer(command.name, command.args, line):
                self.out.write(answer + "\n")
        elif self.params.check == "never":
            self.out.write("skipped\n")
        else:
            self.verify(line)
            self.out.write("ok\n")

    def answer(self, name: str, args: Sequence[int], line: int) -> List[str]:
        table = QUERIES[self.params.structure]
        if name not in table:
            raise StreamParseError(line, f"unknown query {name!r} for {self.params.structure}; "
                                         f"expected one of {', '.join(sorted(table))}")
        arity, handler = table[name]
        if len(args) != arity:
            raise StreamParseError(line, f"query {name} takes {arity} arguments")
        for x in args:
            if not 0 <= x < self.params.n:
                raise StreamParseError(line, f"vertex {x} is outside [0, {self.params.n})")
        return handler(self.structure, *args)

    def verify(self, line: Optional[int] = None) -> None:
        """
        Raises:
            CheckFailure: if the structure disagrees with the oracles.
        """
        self.checks += 1
        diff = checks.check(self.params, self.structure, self.log)
        if diff is not None:
            raise CheckFailure(diff, line)


# --- run / fuzz / replay ---

def run(params: StructureParams, lines: Iterable[str], out: TextIO, dump_dir: Optional[str] = None) -> int:
    """Feed a stream to a structure, writing one line per query and per check."""
    logger.info("run: structure=%s n=%d seed=%d check=%s", params.structure, params.n, params.seed, params.check)
    try:
        session = Session(params, out)
    except ConfigError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
    try:
        for line, command in parse_stream(lines):
            session.execute(command, line)
    except CheckFailure as e:
        out.write(f"mismatch {e.diff}\n")
        _report_failure(CommandLog(params=params, commands=session.log, failure=e.diff, line=e.line),
                        f"{params.structure}-n{params.n}-seed{params.seed}-line{e.line}", dump_dir)
        return e.exit_code
    except WindowMSFError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
    logger.info("run: %d commands, %d checks", len(session.log), session.checks)
    return 0


def generate(params: StructureParams, ops: int, rng: random.Random) -> List[StreamCommand]:
    """Random interleaving of insert batches (1-8 edges) and expirations."""
    n = params.n
    top = 1000 if params.structure == "msf" else params.max_weight
    commands: List[StreamCommand] = []
    for _ in range(ops):
        if params.structure != "msf" and rng.random() < 0.45:
            commands.append(ExpireCommand(delta=rng.randint(1, 10)))
        else:
            size = rng.randint(1, 8)
            edges = [(rng.randrange(n), rng.randrange(n), rng.randint(1, top)) for _ in range(size)]
            commands.append(InsertCommand(edges=edges))
    return commands


def replay_commands(params: StructureParams, commands: Sequence[StreamCommand]) -> Tuple[Optional[str], int]:
    """
    Run commands with a check after every operation.

    Returns:
        (first failure or None, index of the failing command or len(commands)).
    """
    session = Session(params.model_copy(update={"check": "op"}), io.StringIO())
    for index, command in enumerate(commands):
        try:
            session.execute(command, index + 1)
        except CheckFailure as e:
            return e.diff, index
        except Exception as e:  # a crash inside a structure counts as a failure
            return f"{type(e).__name__}: {e}", index
    return None, len(commands)


def minimize(params: StructureParams, commands: List[StreamCommand], budget: int = 400) -> List[StreamCommand]:
    """Greedy removal of command chunks, halving the chunk size, while the failure persists."""
    chunk = max(1, len(commands) // 2)
    while chunk >= 1 and budget > 0:
        i = 0
        while i < len(commands) and budget > 0:
            candidate = commands[:i] + commands[i + chunk:]
            budget -= 1
            if candidate and replay_commands(params, candidate)[0] is not None:
                commands = candidate
            else:
                i += chunk
        chunk //= 2
    return commands


def fuzz(params: StructureParams, ops: int, out: TextIO, dump_dir: Optional[str] = None) -> int:
    """Random stream with a check after every operation; dumps a minimized log on failure."""
    logger.info("fuzz: structure=%s n=%d ops=%d seed=%d", params.structure, params.n, ops, params.seed)
    rng = random.Random(params.seed)
    commands = generate(params, ops, rng)
    failure, index = replay_commands(params, commands)
    report = FuzzReport(structure=params.structure, n=params.n, seed=params.seed, operations=ops,
                        checks=index if failure else ops)
    if failure is None:
        out.write(f"ok {report.operations} operations, {report.checks} checks\n")
        logger.info("fuzz: ok")
        return 0
    shrunk = minimize(params, commands[:index + 1])
    failure, _index = replay_commands(params, shrunk)
    report.failure = failure
    report.dump = _report_failure(CommandLog(params=params, commands=shrunk, failure=failure),
                                  f"fuzz-{params.structure}-n{params.n}-seed{params.seed}", dump_dir)
    out.write(f"mismatch after {len(shrunk)} commands: {failure}\n")
    return CheckFailure.exit_code


def replay(name: str, out: TextIO, dump_dir: Optional[str] = None) -> int:
    log = load_log(name, dump_dir)
    if log is None:
        raise ConfigError(f"no counterexample named {name!r}")
    params = log.params.model_copy(update={"check": "op"})
    lines = [format_command(c) for c in log.commands] + ["check"]
    return run(params, lines, out, dump_dir)


def _report_failure(log: CommandLog, name: str, dump_dir: Optional[str]) -> str:
    path = save_log(name, log, dump_dir)
    print(f"counterexample ({len(log.commands)} commands) written to {path}:", file=sys.stderr)
    for command in log.commands:
        print(f"  {format_command(command)}", file=sys.stderr)
    logger.error("check failed: %s", log.failure)
    return path


# --- Argument parsing ---

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise ConfigError(message)


def _constants(text: Optional[str]) -> Dict[str, Any]:
    """Parse "K,L,c_k"; blank fields keep their defaults."""
    if not text:
        return {}
    parts = text.split(",")
    if len(parts) != 3:
        raise ConfigError("--sparsifier-constants takes K,L,c_k")
    try:
        k_reps, levels, cert = (p.strip() for p in parts)
        return {
            "repetitions": int(k_reps) if k_reps else None,
            "levels": int(levels) if levels else None,
            "cert_constant": float(cert) if cert else None,
        }
    except ValueError as e:
        raise ConfigError(f"--sparsifier-constants: {e}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="windowmsf", description="Batch-incremental MSF and sliding-window graph structures")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_structure_options(p: argparse.ArgumentParser) -> None:
        p.add_argument("--structure", required=True, choices=STRUCTURES)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--seed", type=int)
        p.add_argument("--epsilon", type=float)
        p.add_argument("--k", type=int)
        p.add_argument("--max-weight", type=int)
        p.add_argument("--sparsifier-constants", metavar="K,L,c_k")
        p.add_argument("--sparsifier-k", type=int)
        p.add_argument("--sample-constant", type=float)
        p.add_argument("--output", default="-")
        p.add_argument("--dump-dir")

    run_p = sub.add_parser("run", help="run a command stream")
    add_structure_options(run_p)
    run_p.add_argument("--check", choices=("never", "batch", "op"))
    run_p.add_argument("--input", default="-")

    fuzz_p = sub.add_parser("fuzz", help="random stream checked after every operation")
    add_structure_options(fuzz_p)
    fuzz_p.add_argument("--ops", type=int, default=1000)

    replay_p = sub.add_parser("replay", help="replay a dumped counterexample")
    replay_p.add_argument("name")
    replay_p.add_argument("--output", default="-")
    replay_p.add_argument("--dump-dir")
    return parser


def _params(args: argparse.Namespace, settings: Settings) -> StructureParams:
    overrides = {
        "structure": args.structure,
        "n": args.n,
        "seed": args.seed,
        "epsilon": args.epsilon,
        "k": args.k,
        "max_weight": args.max_weight,
        "sparsifier_k": args.sparsifier_k,
        "sample_constant": args.sample_constant,
        "check": getattr(args, "check", None),
    }
    overrides.update(_constants(args.sparsifier_constants))
    return make_params(settings, overrides)


def _open_output(path: str) -> TextIO:
    return sys.stdout if path == "-" else open(path, "w", encoding="utf-8")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        settings = get_settings()
        configure_logging(settings)
        args = build_parser().parse_args(argv)
        dump_dir = getattr(args, "dump_dir", None) or settings.dump_dir
        if args.command == "replay":
            out = _open_output(args.output)
            try:
                return replay(args.name, out, dump_dir)
            finally:
                if out is not sys.stdout:
                    out.close()
        params = _params(args, settings)
        if args.command == "fuzz" and args.ops < 0:
            raise ConfigError("--ops must be non-negative")
        out = _open_output(args.output)
        try:
            if args.command == "fuzz":
                return fuzz(params, args.ops, out, dump_dir)
            if args.input == "-":
                return run(params, sys.stdin, out, dump_dir)
            try:
                with open(args.input, "r", encoding="utf-8") as f:
                    return run(params, f, out, dump_dir)
            except OSError as e:
                raise ConfigError(f"cannot read {args.input}: {e.strerror}") from e
        finally:
            if out is not sys.stdout:
                out.close()
    except WindowMSFError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
