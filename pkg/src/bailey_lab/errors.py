"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class BaileyLabError(Exception):
    """Base class for all errors raised by bailey_lab."""


class PoleEncountered(BaileyLabError, ZeroDivisionError):
    """A reciprocal of a vanishing factor was requested.

    ``witness`` names the offending factor (and, when known, the cell
    in which it arose) so that reports can print it verbatim.
    """

    def __init__(self, witness: str):
        super().__init__(f"pole encountered: {witness}")
        self.witness = witness


class InvalidBase(BaileyLabError, ValueError):
    """The base q is zero where a negative power of it is needed."""


class RankMismatch(BaileyLabError, ValueError):
    pass


class DomainError(BaileyLabError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "index outside domain"


class ExhaustedAttempts(BaileyLabError, RuntimeError):
    """The rejection sampler hit its attempt bound without an admissible draw."""


class Inadmissible(BaileyLabError, ValueError):
    """Parameters make some denominator vanish on the working box."""

    def __init__(self, witnesses: list[str]):
        head = witnesses[0] if witnesses else "unknown factor"
        more = f" (+{len(witnesses) - 1} more)" if len(witnesses) > 1 else ""
        super().__init__(f"inadmissible parameters: {head}{more}")
        self.witnesses = list(witnesses)
