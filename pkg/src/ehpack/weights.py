"""Per-case weighting functions for the 151-type parameter sets.

Case 1 covers packings without leftover blue-waiting bins for types 2..17.
Cases 2..16 are indexed by ``q``, the largest type with such a leftover bin.
Case 17 is the fallback where every red item is counted only through
its share of the blue bins.

All weights are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Mapping, Sequence

from .params import ParameterSet

if TYPE_CHECKING:
    from .eh_core import PackingStats

__all__ = [
    "CASES",
    "WeightVector",
    "DominationReport",
    "case_vector",
    "weight_of",
    "check_domination",
    "case_from_q",
    "e_for_q",
    "small_factor",
    "type_weights",
    "item_weight",
    "weight_of_counts",
    "max_case_weight",
]

CASES = range(1, 18)

# layout of the 151-type sets: types 2..17 are the large singletons with
# reserved space, type 18 is the last type without red items
LAST_RESERVED = 17
FIRST_RED = 18


def e_for_q(q: int) -> int:
    return 37 - q if q <= 9 else 35 - q


def case_from_q(q: int) -> int:
    """Case index for a packing whose largest surviving blue-waiting type is ``q``."""
    return 1 if q <= 1 else q


def small_factor(p: ParameterSet) -> Fraction:
    """Weight per unit volume for small items."""
    return Fraction((p.M + 1) ** p.d, p.M**p.d - 1)


def _red_share(p: ParameterSet, i: int) -> Fraction:
    a = p.alpha(i)
    return Fraction(0) if a == 0 else a / p.theta(i)


def _blue_share(p: ParameterSet, i: int) -> Fraction:
    return (1 - p.alpha(i)) / p.blue_capacity(i)


def type_weights(p: ParameterSet, case: int) -> list[Fraction]:
    """Weights of the large types under ``case``; entry 0 is type 1."""
    if case not in CASES:
        raise ValueError(f"case must be in 1..17, got {case}")
    if p.N < e_for_q(2):
        raise ValueError("case weights need the 151-type layout")
    out = []
    if case == 1:
        for i in range(1, p.N + 1):
            if 2 <= i <= LAST_RESERVED:
                out.append(Fraction(0))
            elif p.phi(i) != 0:
                out.append(_red_share(p, i))
            else:
                out.append(_red_share(p, i) + _blue_share(p, i))
        return out
    if case == 17:
        return [_blue_share(p, i) for i in range(1, p.N + 1)]

    q, e = case, e_for_q(case)
    w = p.w(case)
    for i in range(1, p.N + 1):
        if i <= q:
            out.append(Fraction(1))
        elif i <= LAST_RESERVED:
            out.append(w)
        elif i <= e:
            out.append(_red_share(p, i) + _blue_share(p, i))
        else:
            out.append((1 - w) * _red_share(p, i) + _blue_share(p, i))
    return out


def item_weight(p: ParameterSet, case: int, size: Fraction) -> Fraction:
    from .eh_core import classify

    i = classify(p, size)
    if i is None:
        return small_factor(p) * size**p.d
    return type_weights(p, case)[i - 1]


def weight_of_counts(
    p: ParameterSet,
    case: int,
    counts: Sequence[int] | Mapping[int, int],
    small_volume: Fraction = Fraction(0),
) -> Fraction:
    """Total weight of ``counts[i-1]`` items of each type plus small volume."""
    ws = type_weights(p, case)
    if isinstance(counts, Mapping):
        total = sum((ws[i - 1] * n for i, n in counts.items()), Fraction(0))
    else:
        total = sum((wi * n for wi, n in zip(ws, counts)), Fraction(0))
    return total + small_factor(p) * small_volume


def max_case_weight(p: ParameterSet, counts, small_volume=Fraction(0)) -> tuple[int, Fraction]:
    best = None
    for c in CASES:
        v = weight_of_counts(p, c, counts, small_volume)
        if best is None or v > best[1]:
            best = (c, v)
    return best


@dataclass(frozen=True)
class WeightVector:
    case: int
    per_type: tuple[Fraction, ...]  # entry 0 is type 1
    small_factor: Fraction
    w: Fraction | None  # blue share of split bins, cases 2..16 only
    q: int | None
    e: int | None
    params: ParameterSet = field(repr=False, compare=False)


def case_vector(case: int, p: ParameterSet) -> WeightVector:
    ws = tuple(type_weights(p, case))
    if case in (1, 17):
        return WeightVector(case, ws, small_factor(p), None, None, None, p)
    return WeightVector(case, ws, small_factor(p), p.w(case), case, e_for_q(case), p)


def weight_of(size, vector: WeightVector) -> Fraction:
    from .eh_core import classify

    p = vector.params
    i = classify(p, size)
    if i is None:
        return vector.small_factor * Fraction(size) ** p.d
    return vector.per_type[i - 1]


@dataclass(frozen=True)
class DominationReport:
    bins: int
    totals: dict[int, Fraction]
    realized_case: int
    slack: int  # additive constant allowed

    @property
    def best_case(self) -> int:
        return max(self.totals, key=lambda c: self.totals[c])

    @property
    def margin(self) -> Fraction:
        """How far the bin count stays below the allowed bound (negative on failure)."""
        return self.totals[self.best_case] + self.slack - self.bins

    @property
    def ok(self) -> bool:
        return self.margin >= 0


def check_domination(stats: "PackingStats", p: ParameterSet) -> DominationReport:
    """Compare the bin count with the largest case weight of the packed input."""
    totals = {c: weight_of_counts(p, c, stats.lam, stats.small_volume) for c in CASES}
    return DominationReport(
        bins=stats.total_bins,
        totals=totals,
        realized_case=case_from_q(stats.q),
        slack=3 * p.N + p.M,
    )
