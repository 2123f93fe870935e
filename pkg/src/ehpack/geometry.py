"""Slot coordinates for blue and red items and exact overlap checking.

Blue items of type ``i`` sit on a ``beta_i``-per-axis grid anchored at the
origin.  Red items of type ``j`` use the cells of a ``beta_j`` grid anchored
at the far corner ``(1, ..., 1)`` that are not inside the inner
``(beta_j - gamma_j)`` block, so every red cell lies within ``gamma_j * t_j``
of some bin face.
"""

from __future__ import annotations

import bisect
import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .params import ParameterSet

__all__ = [
    "PlacedItem",
    "BinLayout",
    "Overlap",
    "Escape",
    "blue_cell",
    "blue_slot",
    "red_cell",
    "red_slot",
    "red_cells",
    "verify",
]

BLUE, RED, SMALL = "blue", "red", "small"


@dataclass(frozen=True)
class PlacedItem:
    side: Fraction
    anchor: tuple[Fraction, ...]
    color: str
    type_index: int


@dataclass
class BinLayout:
    d: int
    items: list[PlacedItem] = field(default_factory=list)


@dataclass(frozen=True)
class Overlap:
    first: int
    second: int

    def __str__(self) -> str:
        return f"items {self.first} and {self.second} overlap"


@dataclass(frozen=True)
class Escape:
    item: int
    axis: int

    def __str__(self) -> str:
        return f"item {self.item} leaves the bin along axis {self.axis}"


def blue_cell(slot: int, beta: int, d: int) -> tuple[int, ...]:
    """Digits of ``slot`` in base ``beta``, most significant first."""
    if not 0 <= slot < beta**d:
        raise IndexError(f"blue slot {slot} outside [0, {beta**d})")
    digits = []
    for _ in range(d):
        slot, r = divmod(slot, beta)
        digits.append(r)
    return tuple(reversed(digits))


def blue_slot(i: int, slot: int, p: ParameterSet) -> tuple[Fraction, ...]:
    t = p.t(i)
    return tuple(c * t for c in blue_cell(slot, p.beta(i), p.d))


def red_cell(slot: int, beta: int, gamma: int, d: int) -> tuple[int, ...]:
    """The ``slot``-th cell, in lexicographic order, of ``[0, beta)^d``
    that has some coordinate at least ``beta - gamma``."""
    inner = beta - gamma
    total = beta**d - inner**d
    if not 0 <= slot < total:
        raise IndexError(f"red slot {slot} outside [0, {total})")
    cell = []
    outside = False  # some earlier coordinate is already >= inner
    for axis in range(d):
        rest = d - axis - 1
        if outside:
            block = beta**rest
            c, slot = divmod(slot, block)
        else:
            # cells below `inner` on this axis still need an outer coordinate later
            low_block = beta**rest - inner**rest
            if slot < inner * low_block:
                c, slot = divmod(slot, low_block)
            else:
                slot -= inner * low_block
                c, slot = divmod(slot, beta**rest)
                c += inner
                outside = True
        cell.append(c)
    return tuple(cell)


def red_cells(beta: int, gamma: int, d: int) -> Iterator[tuple[int, ...]]:
    for s in range(beta**d - (beta - gamma) ** d):
        yield red_cell(s, beta, gamma, d)


def red_slot(j: int, slot: int, p: ParameterSet) -> tuple[Fraction, ...]:
    t, beta = p.t(j), p.beta(j)
    return tuple(1 - (beta - c) * t for c in red_cell(slot, beta, p.gamma(j), p.d))


def _scale(items: Sequence[PlacedItem]) -> tuple[int, list[tuple[int, tuple[int, ...]]]]:
    den = 1
    for it in items:
        for v in (it.side, *it.anchor):
            den = den * v.denominator // math.gcd(den, v.denominator)

    def up(v: Fraction) -> int:
        return v.numerator * (den // v.denominator)

    return den, [(up(it.side), tuple(up(a) for a in it.anchor)) for it in items]


def verify(layout: BinLayout | Sequence[PlacedItem], d: int | None = None) -> Overlap | Escape | None:
    """Return the first containment or overlap violation, or ``None``.

    Items may touch.  Coordinates are scaled to a common denominator so the
    sweep compares integers only.
    """
    items = layout.items if isinstance(layout, BinLayout) else list(layout)
    if not items:
        return None
    den, scaled = _scale(items)
    for k, (side, anchor) in enumerate(scaled):
        for axis, a in enumerate(anchor):
            if a < 0 or a + side > den:
                return Escape(k, axis)
    order = sorted(range(len(items)), key=lambda k: scaled[k][1][0])
    if len(scaled[0][1]) == 2:
        return _sweep_2d(scaled, order)
    # sweep along axis 0; only items whose x-extent is still open can overlap
    active: list[int] = []
    for k in order:
        side, anchor = scaled[k]
        x0 = anchor[0]
        active = [m for m in active if scaled[m][1][0] + scaled[m][0] > x0]
        for m in active:
            side_m, anchor_m = scaled[m]
            if all(a < b + side_m and b < a + side for a, b in zip(anchor[1:], anchor_m[1:])):
                return Overlap(min(k, m), max(k, m))
        active.append(k)
    return None


def _sweep_2d(scaled, order) -> Overlap | None:
    # Items crossing the sweep line have pairwise disjoint y-extents as long as
    # no overlap has been found, so a new item can only hit its neighbour below
    # (largest y start under its top edge).
    starts: list[int] = []  # y starts of crossing items, sorted
    owner: list[int] = []
    ending: list[tuple[int, int]] = []  # heap of (x end, item)
    for k in order:
        side, (x0, y0) = scaled[k]
        while ending and ending[0][0] <= x0:
            _, m = heapq.heappop(ending)
            pos = bisect.bisect_left(starts, scaled[m][1][1])
            while owner[pos] != m:
                pos += 1
            del starts[pos], owner[pos]
        pos = bisect.bisect_left(starts, y0 + side)
        if pos:
            m = owner[pos - 1]
            if starts[pos - 1] + scaled[m][0] > y0:
                return Overlap(min(k, m), max(k, m))
        pos = bisect.bisect_left(starts, y0)
        starts.insert(pos, y0)
        owner.insert(pos, k)
        heapq.heappush(ending, (x0 + side, k))
    return None
