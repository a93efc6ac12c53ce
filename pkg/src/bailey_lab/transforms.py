"""Entries of the A_l and C_l Bailey transform matrices M and M*.

Every entry function first tests componentwise support and returns an
exact 0 when ``j <= i`` fails; only then are the q-shifted factorials
evaluated.  Reciprocals of vanishing factorials raise
:class:`~bailey_lab.errors.PoleEncountered` with the offending factor.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .errors import Inadmissible, PoleEncountered, RankMismatch
from .lattice import Box, MultiIndex, interval, leq_componentwise
from .qfield import format_rational, parse_rational, qpoch, qpoch_inv, qpow


class Group(str, enum.Enum):
    A = "A"
    C = "C"

    def __str__(self) -> str:
        return self.value


def _check_base(q: Fraction, x: Sequence[Fraction]) -> None:
    if q in (0, 1, -1):
        raise ValueError(f"q must avoid 0, 1 and -1, got {format_rational(q)}")
    if not x:
        raise ValueError("need at least one x variable (rank >= 1)")
    if any(xk == 0 for xk in x):
        raise ValueError("every x_k must be nonzero")


@dataclass(frozen=True)
class ParamsA:
    """Specialization (q, a, x_1..x_l) for the unitary case."""

    q: Fraction
    a: Fraction
    x: tuple[Fraction, ...]
    group: Group = field(default=Group.A, init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(Fraction(v) for v in self.x))
        _check_base(self.q, self.x)

    @property
    def rank(self) -> int:
        return len(self.x)

    def format(self) -> str:
        xs = ",".join(format_rational(v) for v in self.x)
        return f"q={format_rational(self.q)} a={format_rational(self.a)} x={xs}"


@dataclass(frozen=True)
class ParamsC:
    """Specialization (q, x_1..x_l) for the symplectic case."""

    q: Fraction
    x: tuple[Fraction, ...]
    group: Group = field(default=Group.C, init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(Fraction(v) for v in self.x))
        _check_base(self.q, self.x)

    @property
    def rank(self) -> int:
        return len(self.x)

    def format(self) -> str:
        xs = ",".join(format_rational(v) for v in self.x)
        return f"q={format_rational(self.q)} x={xs}"


GroupParams = Union[ParamsA, ParamsC]


def parse_params(group: Group | str, text: str) -> GroupParams:
    """Inverse of ``ParamsA.format`` / ``ParamsC.format``."""
    fields = dict(tok.split("=", 1) for tok in text.split())
    q = parse_rational(fields["q"])
    x = tuple(parse_rational(v) for v in fields["x"].split(","))
    if Group(group) is Group.A:
        return ParamsA(q, parse_rational(fields["a"]), x)
    return ParamsC(q, x)


def _prepare(i, j, p: GroupParams):
    i, j = MultiIndex(i), MultiIndex(j)
    if len(i) != len(j) or len(i) != p.rank:
        raise RankMismatch(f"ranks differ: {len(i)}, {len(j)}, params {p.rank}")
    return i, j


def _cell(i, j) -> str:
    return f"({i};{j})"


def _sign_power(q: Fraction, m: int) -> Fraction:
    # (-1)^m q^binom(m, 2), m >= 0 on the support
    value = qpow(q, m * (m - 1) // 2)
    return -value if m % 2 else value


def _ratio_product(i, j, p: GroupParams, where: str) -> Fraction:
    """prod_{r,s} 1 / (q (x_r/x_s) q^{j_r - j_s}; q)_{i_r - j_r}."""
    q, x = p.q, p.x
    result = Fraction(1)
    for r in range(len(i)):
        n = i[r] - j[r]
        for s in range(len(i)):
            base = q * x[r] / x[s] * qpow(q, j[r] - j[s])
            result *= qpoch_inv(base, q, n, f"{where}: (q x{r+1}/x{s+1} q^{j[r]-j[s]}; q)_{n}")
    return result


def m_entry_a(i, j, p: ParamsA) -> Fraction:
    i, j = _prepare(i, j, p)
    if not leq_componentwise(j, i):
        return Fraction(0)
    where = "M" + _cell(i, j)
    q, a, x = p.q, p.a, p.x
    result = _ratio_product(i, j, p, where)
    wj = sum(j)
    for k in range(len(i)):
        n = i[k] + wj
        result *= qpoch_inv(a * q * x[k] / x[-1], q, n, f"{where}: (a q x{k+1}/x{len(x)}; q)_{n}")
    return result


def mstar_entry_a(i, j, p: ParamsA) -> Fraction:
    i, j = _prepare(i, j, p)
    if not leq_componentwise(j, i):
        return Fraction(0)
    where = "M*" + _cell(i, j)
    q, a, x = p.q, p.a, p.x
    wi = sum(i)
    result = Fraction(1)
    for k in range(len(i)):
        ratio = x[k] / x[-1]
        result *= 1 - a * ratio * qpow(q, i[k] + wi)
        try:
            result *= qpoch(a * q * ratio, q, j[k] + wi - 1)
        except PoleEncountered as exc:
            raise PoleEncountered(f"{where}: {exc.witness}") from None
    result *= _ratio_product(i, j, p, where)
    return result * _sign_power(q, wi - sum(j))


def m_entry_c(i, j, p: ParamsC) -> Fraction:
    i, j = _prepare(i, j, p)
    if not leq_componentwise(j, i):
        return Fraction(0)
    where = "M" + _cell(i, j)
    q, x = p.q, p.x
    result = _ratio_product(i, j, p, where)
    for r in range(len(i)):
        n = i[r] - j[r]
        for s in range(len(i)):
            base = q * x[r] * x[s] * qpow(q, j[r] + j[s])
            result *= qpoch_inv(base, q, n, f"{where}: (q x{r+1} x{s+1} q^{j[r]+j[s]}; q)_{n}")
    return result


# Exponent of q in the second factor of the C_l M* double product.  Only
# "jr+is" satisfies the inversion for rank >= 2; the alternatives are kept
# so that the comparison can be rerun.
MSTAR_C_READINGS = {
    "jr+is": lambda i, j, r, s: j[r] + i[s],
    "jr+js": lambda i, j, r, s: j[r] + j[s],
    "ir+js": lambda i, j, r, s: i[r] + j[s],
}


def mstar_entry_c(i, j, p: ParamsC, *, reading: str = "jr+is") -> Fraction:
    i, j = _prepare(i, j, p)
    if not leq_componentwise(j, i):
        return Fraction(0)
    exponent = MSTAR_C_READINGS[reading]
    where = "M*" + _cell(i, j)
    q, x = p.q, p.x
    result = _ratio_product(i, j, p, where)
    for r in range(len(i)):
        n = i[r] - j[r]
        for s in range(len(i)):
            e = exponent(i, j, r, s)
            base = x[r] * x[s] * qpow(q, e)
            result *= qpoch_inv(base, q, n, f"{where}: (x{r+1} x{s+1} q^{e}; q)_{n}")
    for r in range(len(i)):
        for s in range(r + 1, len(i)):
            den = 1 - x[r] * x[s] * qpow(q, i[r] + i[s])
            if den == 0:
                raise PoleEncountered(f"{where}: 1 - x{r+1} x{s+1} q^{i[r]+i[s]} vanishes")
            result *= (1 - x[r] * x[s] * qpow(q, j[r] + j[s])) / den
    return result * _sign_power(q, sum(i) - sum(j))


def m_entry(i, j, p: GroupParams) -> Fraction:
    return m_entry_a(i, j, p) if p.group is Group.A else m_entry_c(i, j, p)


def mstar_entry(i, j, p: GroupParams) -> Fraction:
    return mstar_entry_a(i, j, p) if p.group is Group.A else mstar_entry_c(i, j, p)


def admissibility_failures(upper, p: GroupParams, *, first_only: bool = False) -> list[str]:
    """List every vanishing denominator of M or M* over the box ``upper``.

    An empty list means the parameters are admissible on that box.  With
    ``first_only`` the scan stops at the first failure.
    """
    box = upper if isinstance(upper, Box) else Box(upper)
    if box.rank != p.rank:
        raise RankMismatch(f"box rank {box.rank} != params rank {p.rank}")
    failures = []
    for i in box:
        for j in interval(MultiIndex.zero(box.rank), i):
            for entry in (m_entry, mstar_entry):
                try:
                    entry(i, j, p)
                except PoleEncountered as exc:
                    failures.append(exc.witness)
                    if first_only:
                        return failures
    return failures


def is_admissible(upper, p: GroupParams) -> bool:
    return not admissibility_failures(upper, p, first_only=True)


@dataclass(frozen=True)
class MatrixBlock:
    """Dense finite block of M or M* over a box, lexicographically indexed."""

    kind: str  # "M" or "M*"
    params: GroupParams
    box: Box
    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def group(self) -> Group:
        return self.params.group

    def __getitem__(self, key) -> Fraction:
        i, j = key
        return self.rows[self.box.position(i)][self.box.position(j)]

    def __len__(self) -> int:
        return len(self.rows)


def matrix_block(upper, p: GroupParams) -> tuple[MatrixBlock, MatrixBlock]:
    """Assemble the blocks of M and M* over the box ``upper``.

    Raises :class:`Inadmissible` listing every vanishing denominator if the
    parameters are not admissible on the box.
    """
    box = upper if isinstance(upper, Box) else Box(upper)
    failures = admissibility_failures(box, p)
    if failures:
        raise Inadmissible(failures)
    index = list(box)
    m_rows = tuple(tuple(m_entry(i, j, p) for j in index) for i in index)
    s_rows = tuple(tuple(mstar_entry(i, j, p) for j in index) for i in index)
    return MatrixBlock("M", p, box, m_rows), MatrixBlock("M*", p, box, s_rows)


def format_block(block: MatrixBlock) -> str:
    lines = [
        f"# matrix {block.kind}",
        f"# group {block.group}",
        f"# rank {block.box.rank}",
        f"# box {block.box}",
        f"# params {block.params.format()}",
    ]
    for row in block.rows:
        lines.append(" ".join(format_rational(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_block(text: str) -> MatrixBlock:
    header, rows = {}, []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(" ")
            header[key] = value
        else:
            rows.append(tuple(parse_rational(tok) for tok in line.split()))
    box = Box.parse(header["box"])
    params = parse_params(header["group"], header["params"])
    if int(header["rank"]) != box.rank or len(rows) != len(box):
        raise ValueError("block header does not match its body")
    if any(len(row) != len(box) for row in rows):
        raise ValueError("block is not square")
    return MatrixBlock(header["matrix"], params, box, tuple(rows))
