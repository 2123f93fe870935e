"""Packing of small items into recursively halved sub-bins.

An item of side ``s <= 1/M`` gets a small type ``(i, k)``: ``k`` is the
largest exponent with ``2**k * s <= 1/M`` and ``i = floor(1 / (2**k * s))``.
Each ``i`` has at most one active bin, cut into an ``i``-per-axis grid of
level-0 cells.  A level-``j`` cell has side ``1 / (2**j * i)``.  An item of
type ``(i, k)`` takes an empty level-``k`` cell.  If there is none, the
deepest empty cell above level ``k`` is halved along every axis repeatedly
down to level ``k``.  If there is no such cell either, the bin is closed and
replaced.

Two bookkeeping modes share the same rules.  Layout mode keeps every empty
cell as integer grid coordinates and places items one by one.  Counting
mode keeps only the number of empty cells per level, which lets a run of
identical items be packed in time independent of its length.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from .geometry import SMALL, PlacedItem

__all__ = [
    "SmallType",
    "SmallBin",
    "SmallPacker",
    "classify_small",
    "volume_bound",
]


@dataclass(frozen=True, order=True)
class SmallType:
    i: int
    k: int

    def cell_side(self) -> Fraction:
        return Fraction(1, self.i * 2**self.k)


def classify_small(s: Fraction, M: int) -> SmallType:
    s = Fraction(s)
    if not 0 < s <= Fraction(1, M):
        raise ValueError(f"small item side must lie in (0, 1/{M}], got {s}")
    # 2**k * s <= 1/M  <=>  2**k <= 1 / (M s); start from the bit length guess
    ratio = 1 / (M * s)
    k = max(ratio.numerator // ratio.denominator, 1).bit_length() - 1
    while 2 ** (k + 1) <= ratio:
        k += 1
    while 2**k > ratio:
        k -= 1
    x = s * 2**k
    i = (1 / x).__floor__()
    return SmallType(i, k)


def volume_bound(i: int, d: int) -> Fraction:
    """Least occupied volume of a closed bin of small type ``i``."""
    return Fraction(i**d - 1, (i + 1) ** d)


@dataclass
class SmallBin:
    id: int
    i: int
    d: int
    count: int = 1  # identical closed bins this record stands for
    n_items: int = 0  # per bin
    volume: Fraction = Fraction(0)  # per bin
    closed: bool = False
    empty: list[int] = field(default_factory=list)  # empty cells per level
    # layout mode: heaps of empty cells per level; level 0 is handed out in
    # lexicographic order and never refilled, so it is kept as a cursor
    cells: list[list[tuple[int, ...]]] | None = None
    next_top: int = 0
    items: list[PlacedItem] | None = None

    def capacity(self, k: int) -> int:
        """Items of level ``k`` the bin can still take."""
        D = 2**self.d
        return sum(e * D ** (k - j) for j, e in enumerate(self.empty[: k + 1]))

    def free_volume(self) -> Fraction:
        """Volume of all empty cells; with the occupied cells it tiles the bin."""
        return sum(
            (Fraction(e, (self.i * 2**j) ** self.d) for j, e in enumerate(self.empty)),
            Fraction(0),
        )

    def _grow(self, k: int) -> None:
        while len(self.empty) <= k:
            self.empty.append(0)
            if self.cells is not None:
                self.cells.append([])


class SmallPacker:
    """Owns all small-item bins of one packing.

    ``new_id(count)`` hands out a block of ``count`` consecutive bin ids.
    """

    def __init__(self, M: int, d: int, new_id: Callable[[int], int], layout: bool = True):
        self.M = M
        self.d = d
        self.layout = layout
        self._new_id = new_id
        self.active: dict[int, SmallBin] = {}
        self.bins: list[SmallBin] = []

    # ------------------------------------------------------------------

    def _open(self, i: int) -> SmallBin:
        b = SmallBin(id=self._new_id(1), i=i, d=self.d, empty=[i**self.d])
        if self.layout:
            b.cells = [[]]
            b.items = []
        self.active[i] = b
        self.bins.append(b)
        return b

    def _close(self, b: SmallBin) -> None:
        b.closed = True
        del self.active[b.i]

    def place(self, s: Fraction) -> tuple[SmallBin, PlacedItem | None]:
        """Pack one item; return its bin and, in layout mode, its placement."""
        s = Fraction(s)
        st = classify_small(s, self.M)
        if not self.layout:
            b = self.place_run(s, 1)
            return b, None
        b = self.active.get(st.i) or self._open(st.i)
        if b.capacity(st.k) == 0:
            self._close(b)
            b = self._open(st.i)
        cell = self._take_cell(b, st.k)
        unit = Fraction(1, st.i * 2**st.k)
        item = PlacedItem(s, tuple(c * unit for c in cell), SMALL, st.i)
        b.items.append(item)
        b.n_items += 1
        b.volume += s**self.d
        return b, item

    def _pop_cell(self, b: SmallBin, level: int) -> tuple[int, ...]:
        if level:
            return heapq.heappop(b.cells[level])
        n, b.next_top = b.next_top, b.next_top + 1
        digits = []
        for _ in range(self.d):
            n, r = divmod(n, b.i)
            digits.append(r)
        return tuple(reversed(digits))

    def _take_cell(self, b: SmallBin, k: int) -> tuple[int, ...]:
        b._grow(k)
        if b.empty[k]:
            b.empty[k] -= 1
            return self._pop_cell(b, k)
        j = max(j for j in range(k) if b.empty[j])
        b.empty[j] -= 1
        cell = self._pop_cell(b, j)
        offsets = list(itertools.product((0, 1), repeat=self.d))
        for level in range(j + 1, k + 1):
            children = [tuple(2 * c + o for c, o in zip(cell, off)) for off in offsets]
            cell = children[0]
            for ch in children[1:]:
                heapq.heappush(b.cells[level], ch)
            b.empty[level] += len(children) - 1
        return cell

    # ------------------------------------------------------------------

    def place_run(self, s: Fraction, count: int) -> SmallBin | None:
        """Pack ``count`` identical items; return the bin holding the last one.

        In counting mode whole bins filled by the run become one record.
        """
        s = Fraction(s)
        if count <= 0:
            return None
        if self.layout:
            b = None
            for _ in range(count):
                b, _ = self.place(s)
            return b
        st = classify_small(s, self.M)
        i, k, d = st.i, st.k, self.d
        vol = s**d
        b = self.active.get(i) or self._open(i)
        b._grow(k)
        remaining = count - self._consume(b, k, count)
        b.n_items += count - remaining
        b.volume += (count - remaining) * vol
        if remaining == 0:
            return b
        self._close(b)
        per_bin = i**d * 2 ** (d * k)
        full, rest = divmod(remaining, per_bin)
        if not rest:
            # the last bin stays active until an item fails to fit
            full, rest = full - 1, per_bin
        if full:
            g = SmallBin(
                id=self._new_id(full), i=i, d=d, count=full, n_items=per_bin,
                volume=per_bin * vol, closed=True, empty=[0] * (k + 1),
            )
            self.bins.append(g)
            b = g
        if rest:
            b = self._open(i)
            b._grow(k)
            self._consume(b, k, rest)
            b.n_items = rest
            b.volume = rest * vol
        return b

    def _consume(self, b: SmallBin, k: int, count: int) -> int:
        """Take up to ``count`` level-``k`` cells in placement order; return how many."""
        D = 2**self.d
        E = b.empty
        remaining = count
        for j in range(k, -1, -1):
            if remaining == 0:
                break
            per = D ** (k - j)
            full = min(E[j], remaining // per)
            E[j] -= full
            remaining -= full * per
            if remaining and E[j]:
                # one cell is split and only partly used: the used children
                # come first at every level below it
                E[j] -= 1
                r = remaining
                for level in range(j + 1, k + 1):
                    per_l = D ** (k - level)
                    used, r = divmod(r, per_l)
                    E[level] += D - used - (1 if r else 0)
                    if not r:
                        break
                remaining = 0
        return count - remaining

    # ------------------------------------------------------------------

    @property
    def bin_count(self) -> int:
        return sum(b.count for b in self.bins)

    def closed_bins(self) -> Iterator[SmallBin]:
        return (b for b in self.bins if b.closed)

    def volume_deficits(self) -> list[tuple[int, Fraction]]:
        """Closed bins (by id) whose occupied volume is below the bound, with the shortfall."""
        out = []
        for b in self.closed_bins():
            need = volume_bound(b.i, self.d)
            if b.volume < need:
                out.append((b.id, need - b.volume))
        return out
