"""Command-line front end.

Exit codes: 0 every check passed, 1 some check failed, 2 some check was
inadmissible (a vanishing denominator), 3 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Sequence

from .bailey import (
    BaileyPair,
    LemmaParamsA,
    LemmaParamsC,
    SequenceOracle,
    chain,
    inverse_transform_sequence,
    lemma_admissibility_failures,
    pair_from_a,
    parse_lemma_params,
    unit_pair,
)
from .errors import ExhaustedAttempts, Inadmissible
from .lattice import Box
from .qfield import parse_rational
from .transforms import Group, ParamsA, ParamsC, admissibility_failures
from .verify import (
    FAIL,
    INADMISSIBLE,
    ParamSampler,
    Report,
    SamplerConfig,
    check_bailey_pair,
    check_classical_reduction,
    check_inversion,
    check_lemma,
    check_roundtrip,
    format_human,
    format_machine,
    run_parallel,
)

EXIT_PASS, EXIT_FAIL, EXIT_INADMISSIBLE, EXIT_USAGE = 0, 1, 2, 3

COMMANDS = ("invert-check", "pair-check", "lemma-check", "chain", "reduce-classical")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)

    def exit(self, status=0, message=None):
        if message:
            sys.stderr.write(message)
        raise SystemExit(status)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bailey-lab", description="Exact checks of the A_l / C_l Bailey transform and lemma.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="flat key = value file; flags override it")
    parser.add_argument("--group", choices=("A", "C"))
    parser.add_argument("--rank", type=int)
    parser.add_argument("--box", help="box bound, e.g. 2,2 (reduce-classical: single integer)")
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--bound", type=int, help="sampler numerator/denominator bound")
    parser.add_argument("--max-attempts", type=int)
    parser.add_argument("--q")
    parser.add_argument("--a")
    parser.add_argument("--x", help="comma-separated x_1..x_l")
    parser.add_argument("--rho")
    parser.add_argument("--sigma")
    parser.add_argument("--alpha")
    parser.add_argument("--beta")
    parser.add_argument("--step", action="append", help="chain step, e.g. rho=2,sigma=3 (repeatable)")
    parser.add_argument("--length", type=int, help="number of sampled chain steps when no --step is given")
    parser.add_argument("--from", dest="seed_pair", choices=("unit", "random"),
                        help="seed pair for lemma-check and chain")
    parser.add_argument("--format", choices=("machine", "human"))
    parser.add_argument("--witnesses", choices=("mismatched", "all"))
    parser.add_argument("--output")
    parser.add_argument("--jobs", type=int)
    return parser


DEFAULTS = {
    "group": "A", "rank": 1, "trials": 1, "seed": 0, "bound": 9, "max_attempts": 1000,
    "length": 3, "seed_pair": "unit", "format": "machine", "witnesses": "mismatched",
}


def read_config(path: str) -> list[str]:
    """Turn a flat ``key = value`` file into equivalent flag tokens."""
    tokens = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key = key.strip().replace("_", "-")
        tokens += [f"--{key}", value.strip()]
    return tokens


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            file_tokens = read_config(args.config)
        except OSError as exc:
            raise UsageError(f"--config: {exc}") from None
        from_file = parser.parse_args([args.command, *file_tokens])
        for key, value in vars(from_file).items():
            if getattr(args, key) is None:
                setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if getattr(args, key) is None:
            setattr(args, key, value)
    if args.jobs is None:
        env = os.environ.get("BAILEY_LAB_JOBS")
        try:
            args.jobs = int(env) if env else (os.cpu_count() or 1)
        except ValueError:
            raise UsageError(f"BAILEY_LAB_JOBS must be an integer, got {env!r}") from None
    return args


def _rat(args, name):
    text = getattr(args, name)
    if text is None:
        return None
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise UsageError(f"--{name}: {exc}") from None


def validate(args) -> None:
    if args.rank < 1:
        raise UsageError(f"--rank must be >= 1, got {args.rank}")
    if args.trials < 1:
        raise UsageError(f"--trials must be >= 1, got {args.trials}")
    if args.bound < 2:
        raise UsageError(f"--bound must be >= 2, got {args.bound}")
    if args.jobs < 1:
        raise UsageError(f"--jobs must be >= 1, got {args.jobs}")
    if args.command == "reduce-classical":
        text = args.box or "6"
        if not text.isdigit():
            raise UsageError(f"--box for reduce-classical is a single bound, got {text!r}")
        args.box = Box((int(text),))
        return
    try:
        args.box = Box.parse(args.box) if args.box else Box((2,) * args.rank)
    except ValueError as exc:
        raise UsageError(f"--box: {exc}") from None
    if args.box.rank != args.rank:
        raise UsageError(f"--box has rank {args.box.rank} but --rank is {args.rank}")
    args.q_val, args.a_val = _rat(args, "q"), _rat(args, "a")
    args.x_val = None
    if args.x is not None:
        try:
            args.x_val = tuple(parse_rational(v) for v in args.x.split(","))
        except ValueError as exc:
            raise UsageError(f"--x: {exc}") from None
        if len(args.x_val) != args.rank:
            raise UsageError(f"--x has {len(args.x_val)} entries but --rank is {args.rank}")
    if args.group == "C" and args.a is not None:
        raise UsageError("--a applies to group A only")
    if args.group == "A" and (args.alpha or args.beta):
        raise UsageError("--alpha/--beta apply to group C; use --rho/--sigma")
    if args.group == "C" and (args.rho or args.sigma):
        raise UsageError("--rho/--sigma apply to group A; use --alpha/--beta")
    first, second = ("rho", "sigma") if args.group == "A" else ("alpha", "beta")
    args.lemma_fixed = (_rat(args, first), _rat(args, second))
    args.steps = []
    for text in args.step or ():
        try:
            args.steps.append(parse_lemma_params(args.group, text))
        except (ValueError, KeyError) as exc:
            raise UsageError(f"--step {text!r}: {exc}") from None
    if any(v == 0 for v in args.lemma_fixed if v is not None):
        raise UsageError(f"--{first}/--{second} must be nonzero")


def _inadmissible_report(name, args, params_text, witnesses) -> Report:
    report = Report(name, Group(args.group), args.rank, args.box, [params_text] if params_text else [])
    report.verdict = INADMISSIBLE
    report.notes.extend(witnesses)
    return report


def _group_params(args, sampler):
    """Pinned parameters if fully given, else a sample honoring pinned parts."""
    group = Group(args.group)
    pinned = args.q_val is not None and args.x_val is not None and (
        group is Group.C or args.a_val is not None)
    if pinned:
        try:
            p = (ParamsA(args.q_val, args.a_val, args.x_val) if group is Group.A
                 else ParamsC(args.q_val, args.x_val))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        failures = admissibility_failures(args.box, p)
        if failures:
            raise Inadmissible(failures)
        return p
    try:
        return sampler.params(group, args.rank, args.box, q=args.q_val, a=args.a_val, x=args.x_val)
    except ExhaustedAttempts as exc:
        raise Inadmissible([str(exc)]) from None


def _lemma_params(args, sampler, p):
    first, second = args.lemma_fixed
    if first is not None and second is not None:
        lp = LemmaParamsA(first, second) if args.group == "A" else LemmaParamsC(first, second)
        failures = lemma_admissibility_failures(p, lp, args.box)
        if failures:
            raise Inadmissible(failures)
        return lp
    try:
        return sampler.lemma_params(p, args.box, first=first, second=second)
    except ExhaustedAttempts as exc:
        raise Inadmissible([str(exc)]) from None


def _seed_pair(args, sampler, p) -> BaileyPair:
    if args.seed_pair == "unit":
        return unit_pair(p, args.box)
    return pair_from_a(sampler.sequence(args.box), p)


def _pair_check_from_b(B: SequenceOracle, p) -> Report:
    A = inverse_transform_sequence(B, p)
    return check_bailey_pair(BaileyPair(p, A, B, ("A from random B",)))


def _chain_reports(pairs: list[BaileyPair]) -> list[Report]:
    reports = []
    for k, pair in enumerate(pairs):
        report = check_bailey_pair(pair)
        report.name = f"chain.{k}"
        reports.append(report)
    return reports


def plan(args) -> list:
    """Sample everything up front (serially, for determinism) and list tasks.

    Each task is ``(fn, args)`` or an already-built inadmissible Report.
    """
    cfg = SamplerConfig(seed=args.seed, bound=args.bound, max_attempts=args.max_attempts)
    sampler = ParamSampler(cfg)
    if args.command == "reduce-classical":
        return [(check_classical_reduction, (args.box.upper[0], args.trials, cfg))]
    name = {"invert-check": "inversion", "pair-check": "pair", "lemma-check": "lemma",
            "chain": "chain.0"}[args.command]
    tasks = []
    for _ in range(args.trials):
        try:
            p = _group_params(args, sampler)
        except Inadmissible as exc:
            tasks.append(_inadmissible_report(name, args, None, exc.witnesses))
            continue
        if args.command == "invert-check":
            tasks.append((check_inversion, (p, args.box)))
        elif args.command == "pair-check":
            tasks.append((check_roundtrip, (sampler.sequence(args.box), p)))
            tasks.append((_pair_check_from_b, (sampler.sequence(args.box), p)))
        elif args.command == "lemma-check":
            try:
                lp = _lemma_params(args, sampler, p)
            except Inadmissible as exc:
                tasks.append(_inadmissible_report("lemma", args, p.format(), exc.witnesses))
                continue
            tasks.append((check_lemma, (_seed_pair(args, sampler, p), lp, args.box)))
        else:
            seed = _seed_pair(args, sampler, p)
            try:
                steps = list(args.steps) or [
                    sampler.lemma_params(p, args.box) for _ in range(args.length)]
                pairs = chain(seed, steps, args.box)
            except (Inadmissible, ExhaustedAttempts) as exc:
                witnesses = getattr(exc, "witnesses", [str(exc)])
                tasks.append(_inadmissible_report("chain", args, p.format(), witnesses))
                continue
            tasks.append((_chain_reports, (pairs,)))
    return tasks


def execute(tasks, jobs: int) -> list[Report]:
    runnable = [t for t in tasks if not isinstance(t, Report)]
    results = iter(run_parallel(runnable, jobs))
    reports = []
    for t in tasks:
        out = t if isinstance(t, Report) else next(results)
        reports.extend(out if isinstance(out, list) else [out])
    return reports


def exit_code(reports: Sequence[Report]) -> int:
    verdicts = {r.verdict for r in reports}
    if FAIL in verdicts:
        return EXIT_FAIL
    if INADMISSIBLE in verdicts:
        return EXIT_INADMISSIBLE
    return EXIT_PASS


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        validate(args)
    except UsageError as exc:
        print(f"bailey-lab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_PASS if not exc.code else EXIT_USAGE
    try:
        tasks = plan(args)
    except UsageError as exc:
        print(f"bailey-lab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    reports = execute(tasks, args.jobs)
    emit = format_machine if args.format == "machine" else format_human
    text = "".join(emit(r, all_witnesses=args.witnesses == "all") for r in reports)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return exit_code(reports)


def main() -> None:
    sys.exit(run())
