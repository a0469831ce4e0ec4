"""Command-line front end.

Exit codes: 0 success, 2 validation failure, 3 size guard or unsupported
class, 4 fairness check failed (``verify`` only).  Size guards are read from
the ``MIXEDMMS_*`` environment variables documented in ``config``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import io
from .alloc import APPROXIMATE, EXACT, boost, mixed_mms
from .config import SizeGuards
from .core import Instance, count_queries, parse_rational
from .counterexample import (
    build_useless_cake_instance,
    check_base_matrix,
    diagonal_base_matrix,
    uniform_base_matrix,
)
from .errors import ContractViolation, DomainError, TooLargeError, UnsupportedError, ValidationError
from .gamma import gamma
from .generate import generate_random
from .mms import approx_mms, discretize_instance, exact_mms
from .reduction import reduce_to_indivisible
from .verify import verify_all

EXIT_OK, EXIT_VALIDATION, EXIT_GUARD, EXIT_UNFAIR = 0, 2, 3, 4

COMMANDS = ("mms", "alloc", "boost", "verify", "gamma", "reduce", "gen-counterexample", "discretize", "generate")


@dataclass
class RunConfig:
    command: str
    input: Path | None = None
    output: Path | None = None
    epsilon: Fraction | None = None
    mode: str = EXACT
    seed: int = 0
    count_queries: bool = False
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if self.mode not in (EXACT, APPROXIMATE):
            raise DomainError(f"unknown mode {self.mode!r}")
        if self.mode == APPROXIMATE and self.epsilon is None:
            raise DomainError("approximate mode needs --epsilon")
        if self.epsilon is not None and not 0 < self.epsilon < 1:
            raise DomainError("epsilon must lie in (0, 1)")


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mixedmms", description="Maximin-share allocation of mixed goods.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("input", type=Path, help="instance JSON")
        p.add_argument("-o", "--output", type=Path, help="output JSON (default stdout)")
        p.add_argument("--count-queries", action="store_true", help="emit Eval/Cut totals")

    p = sub.add_parser("mms", help="per-agent MMS values and certificates")
    common(p)
    p.add_argument("--mode", choices=(EXACT, APPROXIMATE), default=EXACT)
    p.add_argument("--epsilon", type=_rational_arg)
    p.add_argument("--agent", type=int, action="append", help="restrict to these agents")

    p = sub.add_parser("alloc", help="alpha-MMS allocation report")
    common(p)
    p.add_argument("--mode", choices=(EXACT, APPROXIMATE), default=EXACT)
    p.add_argument("--epsilon", type=_rational_arg)

    p = sub.add_parser("boost", help="max{alpha', 1/2} boosted allocation report")
    common(p)
    p.add_argument("--epsilon", type=_rational_arg, required=True)

    p = sub.add_parser("verify", help="fairness report for an allocation")
    common(p)
    p.add_argument("allocation", type=Path, help="allocation or report JSON")
    p.add_argument("--alpha", type=_rational_arg, help="check alpha-MMS against the report's or exact MMS values")
    p.add_argument("--require", action="append",
                   help="notions that decide the exit code (default: alpha-mms with --alpha, else all)")

    p = sub.add_parser("gamma", help="best achievable MMS ratio (small instances)")
    common(p)

    p = sub.add_parser("reduce", help="freeze the cake into indivisible goods")
    common(p)

    p = sub.add_parser("gen-counterexample", help="instance where cake lowers the best MMS ratio")
    common(p, needs_input=False)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--epsilon", type=_rational_arg, default=Fraction(1, 100))
    p.add_argument("--base", default="diagonal", help="'diagonal', 'uniform' or a JSON matrix file")
    p.add_argument("--no-cake", action="store_true")
    p.add_argument("--sidecar", type=Path, help="write the assertion sidecar here (default: embedded)")
    p.add_argument("--exhaustive", action="store_true", help="also run the rigidity check")

    p = sub.add_parser("discretize", help="indivisible instance from equal-value cake intervals")
    common(p)
    p.add_argument("--epsilon", type=_rational_arg, required=True)
    p.add_argument("--agent", type=int, action="append", help="agents whose cuts are used (default: all)")

    p = sub.add_parser("generate", help="seeded random instance")
    common(p, needs_input=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--segments", type=int, default=3)
    p.add_argument("--value-cap", type=int, default=6)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    known = {"command", "input", "output", "epsilon", "mode", "seed", "count_queries"}
    return RunConfig(
        command=args.command,
        input=getattr(args, "input", None),
        output=args.output,
        epsilon=getattr(args, "epsilon", None),
        mode=getattr(args, "mode", EXACT),
        seed=getattr(args, "seed", 0),
        count_queries=args.count_queries,
        options={k: v for k, v in vars(args).items() if k not in known},
    )


def _load_instance(cfg: RunConfig) -> Instance:
    try:
        raw = io.read_json(cfg.input)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError([(str(cfg.input), str(exc))]) from exc
    return io.instance_from_dict(raw)


def _base_matrix(source: str, n: int):
    if source == "diagonal":
        return diagonal_base_matrix(n)
    if source == "uniform":
        return uniform_base_matrix(n)
    try:
        return io.read_json(source)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError([(source, str(exc))]) from exc


def _cmd_mms(cfg, guards, counter):
    inst = _load_instance(cfg)
    agents = cfg.options.get("agent") or range(inst.n)
    out = {"mode": cfg.mode, "agents": []}
    for i in agents:
        if not 0 <= i < inst.n:
            raise DomainError(f"agent {i} out of range")
        if cfg.mode == EXACT:
            cert = exact_mms(inst, i, inst.n, guards)
            out["agents"].append(io.certificate_to_dict(inst, cert))
        else:
            value = approx_mms(inst, i, inst.n, cfg.epsilon, guards)
            out["agents"].append({"agent": inst.agents[i], "k": inst.n, "mms": io.rat(value)})
    if cfg.mode == APPROXIMATE:
        out["epsilon"] = io.rat(cfg.epsilon)
    return out, EXIT_OK


def _cmd_alloc(cfg, guards, counter):
    inst = _load_instance(cfg)
    report = mixed_mms(inst, cfg.epsilon, cfg.mode, guards=guards)
    return io.report_to_dict(inst, report), EXIT_OK


def _cmd_boost(cfg, guards, counter):
    inst = _load_instance(cfg)
    report = boost(inst, cfg.epsilon, guards=guards)
    return io.report_to_dict(inst, report), EXIT_OK


def _cmd_verify(cfg, guards, counter):
    inst = _load_instance(cfg)
    path = cfg.options["allocation"]
    try:
        raw = io.read_json(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError([(str(path), str(exc))]) from exc
    allocation = io.allocation_from_dict(raw)
    alpha = cfg.options.get("alpha")
    mms = None
    if alpha is not None:
        _, mms = io.report_fields_from_dict(raw)
        if mms is None:
            mms = [exact_mms(inst, i, inst.n, guards).floor for i in range(inst.n)]
    report = verify_all(inst, allocation, alpha, mms)
    required = cfg.options.get("require") or (["alpha-mms"] if alpha is not None else list(report.checks))
    unknown = [r for r in required if r not in report.checks]
    if unknown:
        raise DomainError(f"unknown notion(s): {', '.join(unknown)}")
    out = io.fairness_to_dict(report)
    out["required"] = required
    if mms is not None:
        out["alpha"] = io.rat(alpha)
        out["mms"] = [io.rat(v) for v in mms]
    ok = all(report.ok(r) for r in required)
    return out, EXIT_OK if ok else EXIT_UNFAIR


def _cmd_gamma(cfg, guards, counter):
    inst = _load_instance(cfg)
    return {"gamma": io.rat(gamma(inst, guards))}, EXIT_OK


def _cmd_reduce(cfg, guards, counter):
    inst = _load_instance(cfg)
    frozen, record = reduce_to_indivisible(inst, guards)
    out = io.instance_to_dict(frozen)
    out["frozen"] = {
        "original_goods": record.original_goods,
        "pieces": [io.piece_to_list(p) for p in record.pieces],
        "cuts": [[io.rat(x) for x in cs] for cs in record.cuts],
    }
    return out, EXIT_OK


def _cmd_counterexample(cfg, guards, counter):
    opts = cfg.options
    n = opts["n"]
    matrix = _base_matrix(opts["base"], n)
    check = check_base_matrix(matrix, exhaustive=opts["exhaustive"])
    built = build_useless_cake_instance(matrix, cfg.epsilon, with_cake=not opts["no_cake"])
    sidecar = dict(built.sidecar)
    sidecar["base_checks"] = io.base_check_to_dict(check)
    sidecar["plus"] = built.plus
    sidecar["minus"] = built.minus
    out = io.instance_to_dict(built.instance)
    if opts.get("sidecar") is not None:
        io.write_json(opts["sidecar"], sidecar)
    else:
        out["sidecar"] = sidecar
    return out, EXIT_OK


def _cmd_discretize(cfg, guards, counter):
    inst = _load_instance(cfg)
    disc, pieces = discretize_instance(inst, cfg.epsilon, cfg.options.get("agent"))
    out = io.instance_to_dict(disc)
    out["cake_goods"] = {str(inst.m + t): io.piece_to_list(p) for t, p in enumerate(pieces)}
    return out, EXIT_OK


def _cmd_generate(cfg, guards, counter):
    o = cfg.options
    inst = generate_random(cfg.seed, o["n"], o["m"], o["segments"], o["value_cap"])
    return io.instance_to_dict(inst), EXIT_OK


HANDLERS = {
    "mms": _cmd_mms,
    "alloc": _cmd_alloc,
    "boost": _cmd_boost,
    "verify": _cmd_verify,
    "gamma": _cmd_gamma,
    "reduce": _cmd_reduce,
    "gen-counterexample": _cmd_counterexample,
    "discretize": _cmd_discretize,
    "generate": _cmd_generate,
}


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Execute one command; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    guards = SizeGuards.from_env()
    try:
        with count_queries() as counter:
            out, status = HANDLERS[cfg.command](cfg, guards, counter)
        if cfg.count_queries:
            out["query_totals"] = {
                "eval": counter.total(kind="eval"),
                "cut": counter.total(kind="cut"),
                "by_section": counter.by_section(),
            }
    except ValidationError as exc:
        print(f"validation error: {exc}", file=stderr)
        return EXIT_VALIDATION
    except (TooLargeError, UnsupportedError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=stderr)
        return EXIT_GUARD
    except (DomainError, ContractViolation) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_VALIDATION
    text = io.dumps(out)
    if cfg.output is None or str(cfg.output) == "-":
        stdout.write(text)
    else:
        cfg.output.write_text(text)
    return status


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
