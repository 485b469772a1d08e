"""Closed-form iteration counts for the worklist and stack algorithms.

``n`` is the number of function calls in the analysed program. The
logarithm in the average case is the natural one.
"""

from __future__ import annotations

import math
from typing import NamedTuple

DEFAULT_SIZES = (200, 400, 600, 800, 1000)
CASES = ("worst", "average", "best")


class CostRow(NamedTuple):
    n: int
    f_n: int
    k_w: int
    k_a: float
    k_b: int


def _check(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    return int(n)


def classical_cost(n: int) -> int:
    """Hierarchy build (n^2) plus target lookup (n) plus reprocessing (n)."""
    if type(n) is not int or n < 0:
        n = _check(n)
    return n * n + 2 * n


def krab_cost(n: int, case: str = "worst"):
    if type(n) is not int or n < 0:
        n = _check(n)
    if case == "worst":
        return n * n
    if case == "best":
        return n
    if case == "average":
        return n * math.log(n) if n > 0 else 0.0
    raise ValueError(f"unknown case {case!r}; expected one of {CASES}")


def table1(sizes=DEFAULT_SIZES) -> list[CostRow]:
    return [
        CostRow(
            n,
            classical_cost(n),
            krab_cost(n, "worst"),
            krab_cost(n, "average"),
            krab_cost(n, "best"),
        )
        for n in sizes
    ]


def format_csv(rows) -> str:
    out = ["n,f,kw,ka,kb"]
    out += [f"{r.n},{r.f_n},{r.k_w},{r.k_a:.3f},{r.k_b}" for r in rows]
    return "\n".join(out) + "\n"
