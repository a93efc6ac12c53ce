"""Exact verification of the transform, pair and lemma identities.

Each check evaluates an identity at one rational specialization of the
parameters and compares every cell of the working box exactly.  A pass
at several independent random points is strong evidence for the
underlying rational-function identity (Schwartz-Zippel); nothing here is
a proof.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .bailey import (
    DEFAULT_LEMMA_C_READING,
    BaileyPair,
    LemmaParams,
    LemmaParamsA,
    LemmaParamsC,
    SequenceOracle,
    b_from_a,
    inverse_transform_sequence,
    lemma_admissibility_failures,
    lemma_step,
    transform_sequence,
)
from .errors import ExhaustedAttempts, Inadmissible, PoleEncountered
from .lattice import Box, MultiIndex, interval
from .qfield import format_rational, qpoch, qpow
from .transforms import (
    Group,
    GroupParams,
    ParamsA,
    ParamsC,
    admissibility_failures,
    is_admissible,
    m_entry,
    m_entry_a,
    mstar_entry,
    mstar_entry_a,
    mstar_entry_c,
)

PASS, FAIL, INADMISSIBLE = "pass", "fail", "inadmissible"


@dataclass(frozen=True)
class Witness:
    cell: str
    expected: Fraction
    actual: Fraction

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


@dataclass
class Report:
    name: str
    group: Group
    rank: int
    box: Box
    params: list[str]
    verdict: str = PASS
    witnesses: list[Witness] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def mismatches(self) -> list[Witness]:
        return [w for w in self.witnesses if not w.ok]

    def settle(self) -> "Report":
        if self.verdict != INADMISSIBLE:
            self.verdict = PASS if self.witnesses and not self.mismatches else FAIL
        return self


def format_machine(report: Report, *, all_witnesses: bool = False) -> str:
    """Stable line format; contains no timing so reruns are byte-identical."""
    lines = [f"CHECK {report.name} {report.group} {report.rank} {report.box} {report.verdict}"]
    lines += [f"PARAMS {p}" for p in report.params]
    lines.append(f"CELLS {len(report.witnesses)} {len(report.mismatches)}")
    shown = report.witnesses if all_witnesses else report.mismatches
    for w in shown:
        lines.append(
            f"WITNESS {w.cell} {format_rational(w.expected)} {format_rational(w.actual)}"
        )
    lines += [f"NOTE {n}" for n in report.notes]
    lines.append("END")
    return "\n".join(lines) + "\n"


def format_human(report: Report, *, all_witnesses: bool = False) -> str:
    head = f"{report.name:<20} {report.group}_{report.rank}  box {str(report.box):<8} {report.verdict.upper()}"
    lines = [head]
    for p in report.params:
        lines.append(f"  params   {p}")
    lines.append(
        f"  cells    {len(report.witnesses)} checked, {len(report.mismatches)} mismatched"
        f"  ({report.elapsed:.3f}s)"
    )
    shown = report.witnesses if all_witnesses else report.mismatches
    if shown:
        width = max(len(w.cell) for w in shown)
        lines.append(f"  {'cell':<{width}}  {'expected':>14}  {'actual':>14}")
        for w in shown:
            lines.append(
                f"  {w.cell:<{width}}  {format_rational(w.expected):>14}  {format_rational(w.actual):>14}"
            )
    for n in report.notes:
        lines.append(f"  note     {n}")
    return "\n".join(lines) + "\n"


# --- sampling -----------------------------------------------------------

@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    bound: int = 9
    max_attempts: int = 1000


class ParamSampler:
    """Deterministic rejection sampler of small admissible rationals."""

    def __init__(self, cfg: SamplerConfig = SamplerConfig()):
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)

    def rational(self, *, allow_zero: bool = False) -> Fraction:
        b = self.cfg.bound
        nums = [n for n in range(-b, b + 1) if allow_zero or n != 0]
        return Fraction(self.rng.choice(nums), self.rng.randint(1, b))

    def base(self) -> Fraction:
        while True:
            q = self.rational()
            if q not in (1, -1):
                return q

    def params(self, group: Group | str, rank: int, box, *, q=None, a=None,
               x=None) -> GroupParams:
        group = Group(group)
        box = box if isinstance(box, Box) else Box(box)
        for _ in range(self.cfg.max_attempts):
            qq = q if q is not None else self.base()
            xx = tuple(x) if x is not None else tuple(self.rational() for _ in range(rank))
            try:
                if group is Group.A:
                    p = ParamsA(qq, a if a is not None else self.rational(), xx)
                    if p.a == 0:
                        continue
                else:
                    p = ParamsC(qq, xx)
            except ValueError:
                continue
            if p.rank == rank and is_admissible(box, p):
                return p
        raise ExhaustedAttempts(
            f"no admissible {group}_{rank} parameters on box {box} "
            f"after {self.cfg.max_attempts} attempts"
        )

    def lemma_params(self, p: GroupParams, box, *, first=None, second=None,
                     reading: str = DEFAULT_LEMMA_C_READING) -> LemmaParams:
        box = box if isinstance(box, Box) else Box(box)
        cls = LemmaParamsA if p.group is Group.A else LemmaParamsC
        for _ in range(self.cfg.max_attempts):
            lp = cls(first if first is not None else self.rational(),
                     second if second is not None else self.rational())
            if not lemma_admissibility_failures(p, lp, box, reading, first_only=True):
                return lp
        raise ExhaustedAttempts(
            f"no admissible lemma parameters on box {box} after {self.cfg.max_attempts} attempts"
        )

    def sequence(self, box) -> SequenceOracle:
        return SequenceOracle.from_function(box, lambda y: self.rational(allow_zero=True))


def sample_params(group: Group | str, rank: int, box, cfg: SamplerConfig = SamplerConfig()) -> GroupParams:
    return ParamSampler(cfg).params(group, rank, box)


# --- checks -------------------------------------------------------------

def _blank(name: str, p: GroupParams, box: Box, extra: Sequence[str] = ()) -> Report:
    return Report(name, p.group, p.rank, box, [p.format(), *extra])


def _inadmissible(report: Report, witnesses: Sequence[str]) -> Report:
    report.verdict = INADMISSIBLE
    report.notes.extend(witnesses)
    return report


def check_inversion(p: GroupParams, box, *, mstar_reading: str | None = None) -> Report:
    """Both products M M* and M* M equal the identity on every cell j <= i."""
    box = box if isinstance(box, Box) else Box(box)
    start = time.perf_counter()
    report = _blank("inversion", p, box)
    if mstar_reading is not None:
        report.notes.append(f"reading {mstar_reading}")
    failures = admissibility_failures(box, p)
    if failures:
        return _inadmissible(report, failures)
    if mstar_reading is None or p.group is Group.A:
        star = mstar_entry
    else:
        star = lambda i, j, p: mstar_entry_c(i, j, p, reading=mstar_reading)
    index = list(box)
    zero = MultiIndex.zero(box.rank)
    try:
        M = {(i, j): m_entry(i, j, p) for i in index for j in interval(zero, i)}
        S = {(i, j): star(i, j, p) for i in index for j in interval(zero, i)}
    except PoleEncountered as exc:
        return _inadmissible(report, [exc.witness])
    for order, left, right in (("MM*", M, S), ("M*M", S, M)):
        for i in index:
            for j in interval(zero, i):
                total = sum((left[i, y] * right[y, j] for y in interval(j, i)), Fraction(0))
                report.witnesses.append(Witness(f"{order}({i};{j})", Fraction(int(i == j)), total))
    report.elapsed = time.perf_counter() - start
    return report.settle()


def check_bailey_pair(pair: BaileyPair) -> Report:
    """Recompute B(N) from A at every N of the domain and compare exactly."""
    start = time.perf_counter()
    report = _blank("pair", pair.params, pair.box, [f"history {'; '.join(pair.history)}"] if pair.history else [])
    try:
        for N in pair.box:
            report.witnesses.append(Witness(f"B({N})", b_from_a(pair.A, N, pair.params), pair.B[N]))
    except PoleEncountered as exc:
        return _inadmissible(report, [exc.witness])
    report.elapsed = time.perf_counter() - start
    return report.settle()


def check_roundtrip(A: SequenceOracle, p: GroupParams) -> Report:
    """a_from_b after b_from_a, and b_from_a after a_from_b, both return A."""
    start = time.perf_counter()
    report = _blank("roundtrip", p, A.box)
    failures = admissibility_failures(A.box, p)
    if failures:
        return _inadmissible(report, failures)
    back = inverse_transform_sequence(transform_sequence(A, p), p)
    fore = transform_sequence(inverse_transform_sequence(A, p), p)
    for N in A.box:
        report.witnesses.append(Witness(f"M*M({N})", A[N], back[N]))
    for N in A.box:
        report.witnesses.append(Witness(f"MM*({N})", A[N], fore[N]))
    report.elapsed = time.perf_counter() - start
    return report.settle()


def check_lemma(seed: BaileyPair, lp: LemmaParams, domain=None, *,
                reading: str = DEFAULT_LEMMA_C_READING) -> Report:
    """Apply one lemma step to ``seed`` and pair-check the result."""
    start = time.perf_counter()
    box = seed.box if domain is None else (domain if isinstance(domain, Box) else Box(domain))
    extra = [lp.format()]
    report = _blank("lemma", seed.params, box, extra)
    if seed.group is Group.C and reading != DEFAULT_LEMMA_C_READING:
        report.notes.append(f"reading {reading}")
    try:
        stepped = lemma_step(seed, lp, box, reading=reading)
    except Inadmissible as exc:
        return _inadmissible(report, exc.witnesses)
    inner = check_bailey_pair(stepped)
    report.witnesses = inner.witnesses
    if inner.verdict == INADMISSIBLE:
        return _inadmissible(report, inner.notes)
    report.elapsed = time.perf_counter() - start
    return report.settle()


def classical_m(i: int, j: int, q: Fraction, a: Fraction) -> Fraction:
    """Rank-one kernel 1 / ((q; q)_{i-j} (aq; q)_{i+j})."""
    return 1 / (qpoch(q, q, i - j) * qpoch(a * q, q, i + j))


def classical_mstar(i: int, j: int, q: Fraction, a: Fraction) -> Fraction:
    m = i - j
    sign = -1 if m % 2 else 1
    return ((1 - a * qpow(q, 2 * i)) * qpoch(a * q, q, i + j - 1) / qpoch(q, q, m)
            * sign * qpow(q, m * (m - 1) // 2))


def check_classical_reduction(box_bound: int, trials: int, cfg: SamplerConfig = SamplerConfig()) -> Report:
    """Rank-one A entries agree with the classical Bailey transform kernels."""
    start = time.perf_counter()
    sampler = ParamSampler(cfg)
    box = Box((box_bound,))
    report = Report("classical-reduction", Group.A, 1, box, [])
    for t in range(trials):
        p = sampler.params(Group.A, 1, box)
        report.params.append(p.format())
        for i in range(box_bound + 1):
            for j in range(i + 1):
                report.witnesses.append(
                    Witness(f"M({i};{j})#{t}", classical_m(i, j, p.q, p.a), m_entry_a((i,), (j,), p)))
                report.witnesses.append(
                    Witness(f"M*({i};{j})#{t}", classical_mstar(i, j, p.q, p.a), mstar_entry_a((i,), (j,), p)))
    report.elapsed = time.perf_counter() - start
    return report.settle()


def compare_mstar_c_readings(p: ParamsC, box) -> dict[str, str]:
    """Inversion verdict for each candidate C_l M* exponent."""
    from .transforms import MSTAR_C_READINGS
    return {r: check_inversion(p, box, mstar_reading=r).verdict for r in MSTAR_C_READINGS}


def compare_lemma_c_readings(pair: BaileyPair, lp: LemmaParamsC, domain=None) -> dict[str, str]:
    """Pair-check verdict of one C_l lemma step under each candidate exponent."""
    from .bailey import LEMMA_C_READINGS
    return {r: check_lemma(pair, lp, domain, reading=r).verdict for r in LEMMA_C_READINGS}


def run_parallel(tasks: Sequence[tuple[Callable, tuple]], jobs: int = 1) -> list:
    """Run ``(fn, args)`` tasks, optionally in worker processes.

    Results come back in task order whatever the completion order.
    """
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(*args) for fn, args in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        futures = [pool.submit(fn, *args) for fn, args in tasks]
        return [f.result() for f in futures]
