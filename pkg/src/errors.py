# src/errors.py
"""Exception hierarchy shared by the kernel and the CLI.

Every error carries the process exit code the CLI reports for it.
"""
from __future__ import annotations

from typing import Optional, Tuple

__all__ = [
    "CasimirError",
    "UnknownName",
    "BadParams",
    "BadSignature",
    "JacobiViolation",
    "NotClosed",
    "NonInvariantCoefficient",
    "DivergentContraction",
    "CountMismatch",
    "DependentInvariants",
    "NegativeCount",
    "RankMismatch",
]


class CasimirError(Exception):
    exit_code = 1


class UnknownName(CasimirError, KeyError):
    exit_code = 1

    def __str__(self) -> str:
        # KeyError 默认会给消息加引号
        return str(self.args[0]) if self.args else "unknown name"


class BadParams(CasimirError, ValueError):
    exit_code = 1


class BadSignature(BadParams):
    exit_code = 1


class NegativeCount(CasimirError):
    exit_code = 1


class JacobiViolation(CasimirError):
    exit_code = 1

    def __init__(self, witness: Tuple[int, int, int, int], message: str):
        super().__init__(message)
        self.witness = witness


class NotClosed(CasimirError):
    exit_code = 5

    def __init__(self, bracket: Tuple[int, int, int], message: str):
        super().__init__(message)
        self.bracket = bracket


class NonInvariantCoefficient(CasimirError):
    exit_code = 2

    def __init__(self, power: int, polynomial: str, generator: Optional[str] = None):
        where = f" (fails under {generator})" if generator else ""
        super().__init__(f"coefficient of T^{power} is not invariant{where}: {polynomial}")
        self.power = power
        self.polynomial = polynomial
        self.generator = generator


class DivergentContraction(CasimirError):
    exit_code = 3

    def __init__(self, triple: Tuple[int, int, int], message: str):
        super().__init__(message)
        self.triple = triple


class CountMismatch(CasimirError):
    exit_code = 4


class DependentInvariants(CasimirError):
    exit_code = 6


class RankMismatch(CasimirError):
    exit_code = 7
