# src/config.py
from __future__ import annotations

import logging
import sys
from dataclasses import dataclass, replace
from typing import Tuple

__all__ = [
    "RankOptions",
    "DEFAULT_RANK_OPTIONS",
    "JACOBIAN_RANK_OPTIONS",
    "DEFAULT_WORKERS",
    "DEFAULT_MAX_DEGREE",
    "T_SYMBOL",
    "EPS_SYMBOL",
    "configure_logging",
    "structure_rank_options",
]

# 保留符号：特征多项式变量与收缩参数
T_SYMBOL = "T"
EPS_SYMBOL = "eps"

DEFAULT_WORKERS = 4
DEFAULT_MAX_DEGREE = 4


@dataclass(frozen=True)
class RankOptions:
    """Knobs for generic-rank computations.

    seeds / bound control the deterministic evaluation points; the symbolic
    elimination path only runs when min(rows, cols) <= symbolic_max_dim and
    the entries hold at most symbolic_max_terms terms altogether.
    """
    seeds: Tuple[int, ...] = (1, 2, 3)
    bound: int = 10_000
    symbolic: bool = True
    symbolic_max_dim: int = 12
    symbolic_max_terms: int = 2_000

    def __post_init__(self):
        assert len(self.seeds) >= 1, "need at least one evaluation seed"
        assert self.bound >= 2, "bound must allow non-trivial rationals"
        assert self.symbolic_max_terms >= 1, "symbolic_max_terms must be positive"

    def without_symbolic(self) -> "RankOptions":
        return replace(self, symbolic=False)


DEFAULT_RANK_OPTIONS = RankOptions()

# Jacobian 秩：多项式次数高，符号消元只在很小的矩阵上做
JACOBIAN_RANK_OPTIONS = RankOptions(symbolic_max_dim=4)


def structure_rank_options(jacobian: RankOptions) -> RankOptions:
    """Options for N(g) that follow the symbolic switch of ``jacobian``."""
    return DEFAULT_RANK_OPTIONS if jacobian.symbolic else DEFAULT_RANK_OPTIONS.without_symbolic()


def configure_logging(verbose: int = 0) -> None:
    """Attach one stderr handler to the package logger. Idempotent."""
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose >= 2:
        level = logging.DEBUG
    root = logging.getLogger("src")
    root.setLevel(level)
    if not any(getattr(h, "_casimir", False) for h in root.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("[%(name)s] %(message)s"))
        handler._casimir = True  # type: ignore[attr-defined]
        root.addHandler(handler)
