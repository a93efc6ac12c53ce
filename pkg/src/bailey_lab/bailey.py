"""G-Bailey pairs, their inversion, the Bailey lemma step and chains.

Sequences are materialized on finite boxes.  A pair (A, B) is related
by B(N) = sum_{0 <= y <= N} M(N; y) A(y); equivalently
A(N) = sum_{0 <= y <= N} M*(N; y) B(y).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence, Union

from .errors import DomainError, Inadmissible, PoleEncountered
from .lattice import Box, MultiIndex, leq_componentwise
from .qfield import format_rational, parse_rational, qpoch, qpoch_inv, qpow
from .transforms import (
    Group,
    GroupParams,
    ParamsA,
    ParamsC,
    _ratio_product,
    m_entry,
    mstar_entry,
    parse_params,
)


def _as_box(domain) -> Box:
    return domain if isinstance(domain, Box) else Box(domain)


@dataclass(frozen=True)
class SequenceOracle:
    """Total map from a box of multi-indices to exact rationals."""

    box: Box
    values: Mapping[MultiIndex, Fraction]

    def __post_init__(self):
        values = {MultiIndex(k): Fraction(v) for k, v in self.values.items()}
        missing = [str(y) for y in self.box if y not in values]
        if missing:
            raise DomainError(f"sequence undefined at {', '.join(missing[:5])}")
        extra = [str(k) for k in values if k not in self.box]
        if extra:
            raise DomainError(f"sequence defined outside its box at {extra[0]}")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, domain, fn: Callable[[MultiIndex], Fraction]) -> "SequenceOracle":
        box = _as_box(domain)
        return cls(box, {y: fn(y) for y in box})

    @classmethod
    def delta(cls, domain) -> "SequenceOracle":
        return cls.from_function(domain, lambda y: Fraction(1 if y.weight == 0 else 0))

    @classmethod
    def zeros(cls, domain) -> "SequenceOracle":
        return cls.from_function(domain, lambda y: Fraction(0))

    def __getitem__(self, index) -> Fraction:
        index = MultiIndex(index)
        try:
            return self.values[index]
        except KeyError:
            raise DomainError(f"{index} outside domain {self.box}") from None

    def __iter__(self):
        return iter(self.box)

    def restrict(self, domain) -> "SequenceOracle":
        box = _as_box(domain)
        return SequenceOracle(box, {y: self[y] for y in box})

    def as_list(self) -> list[Fraction]:
        return [self.values[y] for y in self.box]


@dataclass(frozen=True)
class BaileyPair:
    params: GroupParams
    A: SequenceOracle
    B: SequenceOracle
    history: tuple[str, ...] = ()

    def __post_init__(self):
        if self.A.box != self.B.box:
            raise DomainError("A and B must share a domain")
        if self.A.box.rank != self.params.rank:
            raise DomainError("domain rank differs from parameter rank")

    @property
    def group(self) -> Group:
        return self.params.group

    @property
    def box(self) -> Box:
        return self.A.box


def b_from_a(A: SequenceOracle, N, p: GroupParams) -> Fraction:
    """B(N) = sum over 0 <= y <= N of M(N; y) A(y)."""
    N = MultiIndex(N)
    if N not in A.box:
        raise DomainError(f"{N} outside domain {A.box}")
    return sum((m_entry(N, y, p) * A[y] for y in Box(N)), Fraction(0))


def a_from_b(B: SequenceOracle, N, p: GroupParams) -> Fraction:
    """A(N) = sum over 0 <= y <= N of M*(N; y) B(y)."""
    N = MultiIndex(N)
    if N not in B.box:
        raise DomainError(f"{N} outside domain {B.box}")
    return sum((mstar_entry(N, y, p) * B[y] for y in Box(N)), Fraction(0))


def transform_sequence(A: SequenceOracle, p: GroupParams) -> SequenceOracle:
    return SequenceOracle(A.box, {N: b_from_a(A, N, p) for N in A.box})


def inverse_transform_sequence(B: SequenceOracle, p: GroupParams) -> SequenceOracle:
    return SequenceOracle(B.box, {N: a_from_b(B, N, p) for N in B.box})


def pair_from_a(A: SequenceOracle, p: GroupParams) -> BaileyPair:
    return BaileyPair(p, A, transform_sequence(A, p))


def unit_pair(p: GroupParams, domain) -> BaileyPair:
    """Seed pair A = delta at the origin, B(N) = M(N; 0)."""
    box = _as_box(domain)
    zero = MultiIndex.zero(box.rank)
    A = SequenceOracle.delta(box)
    B = SequenceOracle.from_function(box, lambda N: m_entry(N, zero, p))
    return BaileyPair(p, A, B, ("unit",))


@dataclass(frozen=True)
class LemmaParamsA:
    rho: Fraction
    sigma: Fraction
    group: Group = field(default=Group.A, init=False, repr=False)

    def __post_init__(self):
        if self.rho == 0 or self.sigma == 0:
            raise ValueError("rho and sigma must be nonzero")

    def format(self) -> str:
        return f"rho={format_rational(self.rho)} sigma={format_rational(self.sigma)}"


@dataclass(frozen=True)
class LemmaParamsC:
    alpha: Fraction
    beta: Fraction
    group: Group = field(default=Group.C, init=False, repr=False)

    def __post_init__(self):
        if self.alpha == 0 or self.beta == 0:
            raise ValueError("alpha and beta must be nonzero")

    def format(self) -> str:
        return f"alpha={format_rational(self.alpha)} beta={format_rational(self.beta)}"


LemmaParams = Union[LemmaParamsA, LemmaParamsC]


def parse_lemma_params(group: Group | str, text: str) -> LemmaParams:
    """Parse ``rho=2,sigma=3`` / ``alpha=2 beta=3`` style text."""
    fields = dict(tok.split("=", 1) for tok in text.replace(",", " ").split())
    if Group(group) is Group.A:
        unknown = set(fields) - {"rho", "sigma"}
        if unknown or len(fields) != 2:
            raise ValueError(f"A step needs rho= and sigma=, got {text!r}")
        return LemmaParamsA(parse_rational(fields["rho"]), parse_rational(fields["sigma"]))
    unknown = set(fields) - {"alpha", "beta"}
    if unknown or len(fields) != 2:
        raise ValueError(f"C step needs alpha= and beta=, got {text!r}")
    return LemmaParamsC(parse_rational(fields["alpha"]), parse_rational(fields["beta"]))


# --- A_l lemma coefficients ---------------------------------------------

def lemma_factor_a(N, p: ParamsA, lp: LemmaParamsA) -> Fraction:
    """Multiplier taking A(N) to A'(N)."""
    q, a, x = p.q, p.a, p.x
    rho, sigma = lp.rho, lp.sigma
    n = sum(N)
    where = f"A'({MultiIndex(N)})"
    value = Fraction(1)
    for k, Nk in enumerate(N):
        ratio = x[k] / x[-1]
        value *= qpoch(sigma * ratio, q, Nk)
        value *= qpoch_inv(a * q / rho * ratio, q, Nk, f"{where}: ((aq/rho) x{k+1}/x{len(x)}; q)_{Nk}")
    value *= qpoch(rho, q, n) * qpoch_inv(a * q / sigma, q, n, f"{where}: (aq/sigma; q)_{n}")
    return value * qpow(a * q / (rho * sigma), n)


def lemma_kernel_a(N, y, p: ParamsA, lp: LemmaParamsA) -> Fraction:
    """Coefficient of B(y) in B'(N); zero unless y <= N."""
    if not leq_componentwise(y, N):
        return Fraction(0)
    q, a, x = p.q, p.a, p.x
    rho, sigma = lp.rho, lp.sigma
    n, m = sum(N), sum(y)
    where = f"B'({MultiIndex(N)};{MultiIndex(y)})"
    value = Fraction(1)
    for k in range(len(N)):
        ratio = x[k] / x[-1]
        value *= qpoch(sigma * ratio, q, y[k])
        value *= qpoch_inv(a * q / rho * ratio, q, N[k], f"{where}: ((aq/rho) x{k+1}/x{len(x)}; q)_{N[k]}")
    value *= _ratio_product(N, y, p, where)
    c = a * q / (rho * sigma)
    value *= qpoch(c, q, n - m) * qpoch(rho, q, m) * qpow(c, m)
    return value * qpoch_inv(a * q / sigma, q, n, f"{where}: (aq/sigma; q)_{n}")


# --- C_l lemma coefficients ---------------------------------------------

# Exponent of q in the second r<s factor of the B' kernel.  "yr+Ns" is the
# reading that preserves the pair relation for rank >= 2; "Ns-ys" and
# "Ns+ys" are kept for comparison.
LEMMA_C_READINGS = {
    "yr+Ns": lambda N, y, r, s: y[r] + N[s],
    "Ns-ys": lambda N, y, r, s: N[s] - y[s],
    "Ns+ys": lambda N, y, r, s: N[s] + y[s],
}
DEFAULT_LEMMA_C_READING = "yr+Ns"


def _k_product_c(top, bottom, p: ParamsC, lp: LemmaParamsC, where: str) -> Fraction:
    q, x = p.q, p.x
    alpha, beta = lp.alpha, lp.beta
    value = Fraction(1)
    for k in range(len(top)):
        value *= qpoch(alpha * x[k], q, top[k]) * qpoch(q * x[k] / beta, q, top[k])
        value *= qpoch_inv(beta * x[k], q, bottom[k], f"{where}: (beta x{k+1}; q)_{bottom[k]}")
        value *= qpoch_inv(q * x[k] / alpha, q, bottom[k], f"{where}: (q x{k+1}/alpha; q)_{bottom[k]}")
    return value


def lemma_factor_c(N, p: ParamsC, lp: LemmaParamsC) -> Fraction:
    where = f"A'({MultiIndex(N)})"
    value = _k_product_c(N, N, p, lp, where)
    return value * qpow(lp.beta / lp.alpha, sum(N))


def lemma_kernel_c(N, y, p: ParamsC, lp: LemmaParamsC,
                   reading: str = DEFAULT_LEMMA_C_READING) -> Fraction:
    if not leq_componentwise(y, N):
        return Fraction(0)
    exponent = LEMMA_C_READINGS[reading]
    q, x = p.q, p.x
    where = f"B'({MultiIndex(N)};{MultiIndex(y)})"
    value = _k_product_c(y, N, p, lp, where)
    value *= _ratio_product(N, y, p, where)
    for r in range(len(N)):
        for s in range(r + 1, len(N)):
            c = q * x[r] * x[s]
            value *= qpoch_inv(c * qpow(q, y[r] + y[s]), q, N[s] - y[s],
                               f"{where}: (q x{r+1} x{s+1} q^{y[r]+y[s]}; q)_{N[s]-y[s]}")
            e = exponent(N, y, r, s)
            value *= qpoch_inv(c * qpow(q, e), q, N[r] - y[r],
                               f"{where}: (q x{r+1} x{s+1} q^{e}; q)_{N[r]-y[r]}")
    ratio = lp.beta / lp.alpha
    n, m = sum(N), sum(y)
    return value * qpoch(ratio, q, n - m) * qpow(ratio, m)


def _factor(N, p, lp):
    return lemma_factor_a(N, p, lp) if p.group is Group.A else lemma_factor_c(N, p, lp)


def _kernel(N, y, p, lp, reading):
    if p.group is Group.A:
        return lemma_kernel_a(N, y, p, lp)
    return lemma_kernel_c(N, y, p, lp, reading)


def lemma_admissibility_failures(p: GroupParams, lp: LemmaParams, domain,
                                 reading: str = DEFAULT_LEMMA_C_READING, *,
                                 first_only: bool = False) -> list[str]:
    """Every vanishing denominator of the lemma step on ``domain``."""
    box = _as_box(domain)
    if lp.group is not p.group:
        raise ValueError(f"lemma parameters for {lp.group} used with group {p.group}")
    failures = []
    for N in box:
        try:
            _factor(N, p, lp)
        except PoleEncountered as exc:
            failures.append(exc.witness)
        for y in Box(N):
            try:
                _kernel(N, y, p, lp, reading)
            except PoleEncountered as exc:
                failures.append(exc.witness)
        if failures and first_only:
            break
    return failures


def lemma_step(pair: BaileyPair, lp: LemmaParams, domain=None, *,
               reading: str = DEFAULT_LEMMA_C_READING) -> BaileyPair:
    """Apply one Bailey lemma step, producing (A', B') on ``domain``."""
    box = pair.box if domain is None else _as_box(domain)
    if box.rank != pair.box.rank or box.upper not in pair.box:
        raise DomainError(f"domain {box} exceeds pair domain {pair.box}")
    p = pair.params
    failures = lemma_admissibility_failures(p, lp, box, reading)
    if failures:
        raise Inadmissible(failures)
    A2 = {N: _factor(N, p, lp) * pair.A[N] for N in box}
    B2 = {
        N: sum((_kernel(N, y, p, lp, reading) * pair.B[y] for y in Box(N)), Fraction(0))
        for N in box
    }
    tag = lp.format()
    if p.group is Group.C and reading != DEFAULT_LEMMA_C_READING:
        tag += f" reading={reading}"
    return BaileyPair(p, SequenceOracle(box, A2), SequenceOracle(box, B2),
                      pair.history + (tag,))


def lemma_step_a(pair: BaileyPair, lp: LemmaParamsA, domain=None) -> BaileyPair:
    if pair.group is not Group.A:
        raise ValueError("lemma_step_a needs an A_l pair")
    return lemma_step(pair, lp, domain)


def lemma_step_c(pair: BaileyPair, lp: LemmaParamsC, domain=None, *,
                 reading: str = DEFAULT_LEMMA_C_READING) -> BaileyPair:
    if pair.group is not Group.C:
        raise ValueError("lemma_step_c needs a C_l pair")
    return lemma_step(pair, lp, domain, reading=reading)


def chain(seed: BaileyPair, steps: Sequence[LemmaParams], domain=None) -> list[BaileyPair]:
    """Iterate the lemma; returns [seed, step 1 result, step 2 result, ...]."""
    pairs = [seed if domain is None else _restrict_pair(seed, domain)]
    for k, lp in enumerate(steps, 1):
        if lp.group is not seed.group:
            raise ValueError(f"step {k}: {lp.group} parameters on a {seed.group} chain")
        try:
            pairs.append(lemma_step(pairs[-1], lp))
        except Inadmissible as exc:
            raise Inadmissible([f"step {k}: {w}" for w in exc.witnesses]) from None
    return pairs


def _restrict_pair(pair: BaileyPair, domain) -> BaileyPair:
    box = _as_box(domain)
    return BaileyPair(pair.params, pair.A.restrict(box), pair.B.restrict(box), pair.history)


def format_pair(pair: BaileyPair) -> str:
    lines = [
        f"# group {pair.group}",
        f"# rank {pair.box.rank}",
        f"# box {pair.box}",
        f"# params {pair.params.format()}",
    ]
    lines += [f"# step {h}" for h in pair.history]
    for N in pair.box:
        a, b = format_rational(pair.A[N]), format_rational(pair.B[N])
        lines.append(f"{N} -> {a}, {b}")
    return "\n".join(lines) + "\n"


def parse_pair(text: str) -> BaileyPair:
    header, history, A, B = {}, [], {}, {}
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(" ")
            if key == "step":
                history.append(value)
            else:
                header[key] = value
            continue
        index, _, rest = line.partition("->")
        a, b = rest.split(",")
        N = MultiIndex.parse(index)
        A[N], B[N] = parse_rational(a), parse_rational(b)
    box = Box.parse(header["box"])
    params = parse_params(header["group"], header["params"])
    return BaileyPair(params, SequenceOracle(box, A), SequenceOracle(box, B), tuple(history))
