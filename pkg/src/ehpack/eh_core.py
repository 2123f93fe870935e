"""The online Extended Harmonic packer.

Large items are classified by interval, colored red or blue so that about an
``alpha_i`` fraction of each type is red, and placed by the fixed priority
lists below.  Small items go to :class:`~ehpack.assign_small.SmallPacker`.

Red item of type ``i``:
    1. a bin already holding fewer than ``theta_i`` red items of type ``i``;
    2. a blue-only bin ``(j,?)`` whose reserved width ``delta_j`` is at least
       ``gamma_i * t_i`` (narrowest such width first, then lowest id);
    3. a new bin ``(?,i)``.

Blue item of type ``i``:
    * ``phi(i) = 0``: a plain bin ``(i)`` with room, else a new one;
    * otherwise: a bin with fewer than ``beta_i**d`` blue items of type ``i``,
      then a red-only bin ``(?,j)`` with ``gamma_j * t_j <= delta_i`` (lowest
      id), then a new bin ``(i,?)``.

Within a priority class the lowest bin id wins.

The packer runs in one of two modes.  Layout mode places every item at
exact coordinates so bins can be verified geometrically.  Counting mode
drops coordinates and lets one record stand for many identical bins, so a
run of millions of equal items costs a handful of operations.
"""

from __future__ import annotations

import bisect
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple

from .assign_small import SmallBin, SmallPacker
from .geometry import BLUE, RED, BinLayout, PlacedItem, blue_slot, red_slot, verify
from .params import ParameterSet, as_rational

__all__ = [
    "BinRecord",
    "Placement",
    "PackingStats",
    "Packer",
    "classify",
    "color_next",
    "compute_q_e",
    "pack_stream",
    "audit",
]

# types 22..28 stand in for types 2..8 when locating the largest waiting blue bin
PAIRED_OFFSET = 20


def classify(p: ParameterSet, size) -> int | None:
    """Type index of ``size``, or ``None`` for a small item (``size <= 1/M``)."""
    size = as_rational(size)
    if not 0 < size <= 1:
        raise ValueError(f"item size must lie in (0, 1], got {size}")
    t = p.intervals.t
    if size <= t[-1]:
        return None
    # t is decreasing; count the boundaries at or above size
    return bisect.bisect_right(t, -size, key=lambda x: -x)


def color_next(p: ParameterSet, i: int, n_i: int, e_i: int) -> str:
    """Color of the ``n_i``-th item of type ``i`` when ``e_i`` reds came before."""
    return RED if e_i < math.floor(p.alpha(i) * n_i) else BLUE


@dataclass(eq=False)
class BinRecord:
    id: int
    blue: int | None = None
    red: int | None = None
    n_blue: int = 0
    n_red: int = 0
    plain: bool = False
    count: int = 1  # identical bins stood for, ids id .. id + count - 1
    layout: BinLayout | None = None

    @property
    def kind(self) -> str:
        if self.plain:
            return "plain"
        if self.red is None:
            return "blue-open"
        if self.blue is None:
            return "red-open"
        return "mixed"

    @property
    def label(self) -> str:
        if self.plain:
            return f"({self.blue})"
        b = "?" if self.blue is None else self.blue
        r = "?" if self.red is None else self.red
        return f"({b},{r})"


class Placement(NamedTuple):
    bin_id: int
    type_index: int | None  # None for small items
    color: str
    item: PlacedItem | None


@dataclass(frozen=True)
class PackingStats:
    """Counters of a finished packing; per-type tuples hold type 1 at index 0."""

    B: tuple[int, ...]
    R: tuple[int, ...]
    Y: int
    q: int
    e: int
    large_bins: int
    small_bins: int
    lam: tuple[int, ...]
    reds: tuple[int, ...]
    small_volume: Fraction = Fraction(0)

    @property
    def total_bins(self) -> int:
        return self.large_bins + self.small_bins


class Packer:
    def __init__(self, p: ParameterSet, layout: bool = True):
        self.p = p
        self.layout = layout
        N = p.N
        self.n = [0] * (N + 1)
        self.e = [0] * (N + 1)
        self.bins: list[BinRecord] = []
        self._next_id = 0
        self.open_blue: list[list[BinRecord]] = [[] for _ in range(N + 1)]
        self.open_red: list[list[BinRecord]] = [[] for _ in range(N + 1)]
        # (j,?) bins by reserved level phi(j), and (?,j) bins by red type j
        self.waiting_for_red: list[deque[BinRecord]] = [deque() for _ in range(p.rb.k + 1)]
        self.waiting_for_blue: list[deque[BinRecord]] = [deque() for _ in range(N + 1)]
        self.small = SmallPacker(p.M, p.d, self._take_ids, layout)
        self.small_volume = Fraction(0)

        reach = [p.gamma(i) * p.t(i) for i in range(1, N + 1)]
        self.red_levels = [[]] + [
            [l for l in range(1, p.rb.k + 1) if p.Delta(l) >= reach[i - 1]] if p.alpha(i) else []
            for i in range(1, N + 1)
        ]
        self.blue_hosts = [[]] + [
            [j for j in range(1, N + 1) if p.alpha(j) and reach[j - 1] <= p.delta(i)] if p.phi(i) else []
            for i in range(1, N + 1)
        ]
        # a type whose red and blue items can share a bin needs item-by-item order
        self.self_hosting = [False] + [i in self.blue_hosts[i] for i in range(1, N + 1)]

    # ------------------------------------------------------------------ ids

    def _take_ids(self, count: int) -> int:
        first = self._next_id
        self._next_id += count
        return first

    def _new(self, count: int, **fields) -> BinRecord:
        b = BinRecord(id=self._take_ids(count), count=count, **fields)
        if self.layout:
            b.layout = BinLayout(self.p.d)
        self.bins.append(b)
        return b

    def _split_front(self, queue: deque[BinRecord], k: int) -> BinRecord:
        """Detach the ``k`` lowest-id bins of the queue's first record."""
        g = queue[0]
        if g.count == k:
            return queue.popleft()
        part = BinRecord(
            id=g.id, blue=g.blue, red=g.red, n_blue=g.n_blue, n_red=g.n_red,
            plain=g.plain, count=k,
        )
        g.id += k
        g.count -= k
        self.bins.append(part)
        return part

    @staticmethod
    def _lowest(bins: list[BinRecord]) -> BinRecord | None:
        return min(bins, key=lambda b: b.id) if bins else None

    # ------------------------------------------------------------- filling

    def _add_blue(self, b: BinRecord, i: int, k: int, size: Fraction) -> None:
        if self.layout:
            for slot in range(b.n_blue, b.n_blue + k):
                b.layout.items.append(PlacedItem(size, blue_slot(i, slot, self.p), BLUE, i))
        b.n_blue += k

    def _add_red(self, b: BinRecord, j: int, k: int, size: Fraction) -> None:
        if self.layout:
            for slot in range(b.n_red, b.n_red + k):
                b.layout.items.append(PlacedItem(size, red_slot(j, slot, self.p), RED, j))
        b.n_red += k

    def _pack_red(self, i: int, count: int, size: Fraction) -> BinRecord:
        p = self.p
        cap = p.theta(i)
        last = None
        while count:
            b = self._lowest(self.open_red[i])
            if b is not None:
                k = min(count, cap - b.n_red)
                self._add_red(b, i, k, size)
                count -= k
                if b.n_red == cap:
                    self.open_red[i].remove(b)
                last = b
                continue
            source = next((self.waiting_for_red[l] for l in self.red_levels[i] if self.waiting_for_red[l]), None)
            if source is not None:
                full = min(source[0].count, count // cap)
                b = self._split_front(source, full or 1)
                b.red = i
                k = cap if full else count
                self._add_red(b, i, k, size)
                count -= k * b.count
                if b.n_red < cap:
                    self.open_red[i].append(b)
                last = b
                continue
            full, rest = divmod(count, cap)
            if full:
                last = self._new(full, red=i)
                self._add_red(last, i, cap, size)
                self.waiting_for_blue[i].append(last)
            if rest:
                last = self._new(1, red=i)
                self._add_red(last, i, rest, size)
                self.waiting_for_blue[i].append(last)
                self.open_red[i].append(last)
            count = 0
        return last

    def _pack_blue(self, i: int, count: int, size: Fraction) -> BinRecord:
        p = self.p
        cap = p.blue_capacity(i)
        plain = p.phi(i) == 0
        last = None
        while count:
            b = self._lowest(self.open_blue[i])
            if b is not None:
                k = min(count, cap - b.n_blue)
                self._add_blue(b, i, k, size)
                count -= k
                if b.n_blue == cap:
                    self.open_blue[i].remove(b)
                last = b
                continue
            if not plain:
                heads = [self.waiting_for_blue[j] for j in self.blue_hosts[i] if self.waiting_for_blue[j]]
                if heads:
                    source = min(heads, key=lambda q: q[0].id)
                    full = min(source[0].count, count // cap)
                    b = self._split_front(source, full or 1)
                    b.blue = i
                    k = cap if full else count
                    self._add_blue(b, i, k, size)
                    count -= k * b.count
                    if b.n_blue < cap:
                        self.open_blue[i].append(b)
                    last = b
                    continue
            full, rest = divmod(count, cap)
            for n_bins, k in ((full, cap), (1 if rest else 0, rest)):
                if not n_bins:
                    continue
                last = self._new(n_bins, blue=i, plain=plain)
                self._add_blue(last, i, k, size)
                if not plain:
                    self.waiting_for_red[p.phi(i)].append(last)
                if k < cap:
                    self.open_blue[i].append(last)
            count = 0
        return last

    # ------------------------------------------------------------ arrivals

    def pack_item(self, size) -> Placement:
        size = as_rational(size)
        i = classify(self.p, size)
        if i is None:
            b, item = self.small.place(size)
            self.small_volume += size**self.p.d
            return Placement(b.id, None, "small", item)
        self.n[i] += 1
        color = color_next(self.p, i, self.n[i], self.e[i])
        if color == RED:
            self.e[i] += 1
            b = self._pack_red(i, 1, size)
        else:
            b = self._pack_blue(i, 1, size)
        item = b.layout.items[-1] if self.layout else None
        return Placement(b.id + b.count - 1, i, color, item)

    def pack_run(self, size, count: int) -> None:
        """Pack ``count`` items of one size, in arrival order."""
        size = as_rational(size)
        if count < 0:
            raise ValueError("count must be non-negative")
        if count == 0:
            return
        i = classify(self.p, size)
        if i is None:
            self.small.place_run(size, count)
            self.small_volume += count * size**self.p.d
            return
        if self.layout or self.self_hosting[i]:
            for _ in range(count):
                self.pack_item(size)
            return
        # the coloring rule keeps e_i = floor(alpha_i n_i) after every arrival,
        # and reds and blues of a non-self-hosting type touch disjoint bins
        self.n[i] += count
        target = math.floor(self.p.alpha(i) * self.n[i])
        reds = target - self.e[i]
        self.e[i] = target
        if reds:
            self._pack_red(i, reds, size)
        if count - reds:
            self._pack_blue(i, count - reds, size)

    # -------------------------------------------------------------- output

    def iter_bins(self) -> Iterator[BinRecord | SmallBin]:
        """All bin records, large and small, in id order."""
        return iter(sorted([*self.bins, *self.small.bins], key=lambda b: b.id))

    @property
    def large_bins(self) -> int:
        return sum(b.count for b in self.bins)

    @property
    def total_bins(self) -> int:
        return self.large_bins + self.small.bin_count

    def partial_bins(self) -> int:
        """Bins that can still take an item without being full in that color."""
        p = self.p
        out = len(self.small.active)
        for b in self.bins:
            if b.blue is not None and b.n_blue < p.blue_capacity(b.blue):
                out += b.count
            elif b.red is not None and b.n_red < p.theta(b.red):
                out += b.count
        return out

    def stats(self) -> PackingStats:
        N = self.p.N
        B = [0] * N
        R = [0] * N
        Y = 0
        for b in self.bins:
            if b.blue is not None:
                B[b.blue - 1] += b.count
            if b.red is not None:
                R[b.red - 1] += b.count
            if b.blue is not None and b.red is not None:
                Y += b.count
        q, e = compute_q_e(self)
        return PackingStats(
            B=tuple(B), R=tuple(R), Y=Y, q=q, e=e,
            large_bins=self.large_bins, small_bins=self.small.bin_count,
            lam=tuple(self.n[1:]), reds=tuple(self.e[1:]),
            small_volume=self.small_volume,
        )


def compute_q_e(packer: Packer | Iterable[BinRecord]) -> tuple[int, int]:
    """``q``: largest ``i <= 17`` with a ``(i,?)`` bin, where ``(20+i,?)``
    counts for ``2 <= i <= 8`` (1 if none).  ``e``: largest ``j`` with a
    ``(?,j)`` bin (0 if none)."""
    bins = packer.bins if isinstance(packer, Packer) else packer
    q, e = 1, 0
    for b in bins:
        kind = b.kind
        if kind == "blue-open":
            i = b.blue
            if i <= 17:
                q = max(q, i)
            elif 2 + PAIRED_OFFSET <= i <= 8 + PAIRED_OFFSET:
                q = max(q, i - PAIRED_OFFSET)
        elif kind == "red-open":
            e = max(e, b.red)
    return q, e


def pack_stream(p: ParameterSet, items: Iterable, layout: bool = True) -> Packer:
    """Pack ``items`` (sizes, or ``(size, count)`` pairs) into a fresh packer."""
    packer = Packer(p, layout=layout)
    for k, it in enumerate(items):
        try:
            if isinstance(it, tuple):
                packer.pack_run(it[0], it[1])
            else:
                packer.pack_item(it)
        except ValueError as exc:
            raise ValueError(f"item {k}: {exc}") from exc
    return packer


def q_e_bound_holds(q: int, e: int) -> bool:
    if 2 <= q <= 9:
        return e <= 37 - q
    if 10 <= q <= 16:
        return e <= 35 - q
    return True


def audit(packer: Packer, geometry: bool = True) -> list[str]:
    """Check the packer's invariants; return one message per violation."""
    p = packer.p
    out = []
    for i in range(1, p.N + 1):
        want = math.floor(p.alpha(i) * packer.n[i])
        if packer.e[i] != want:
            out.append(f"coloring: type {i} has e={packer.e[i]}, floor(alpha*n)={want}")
    limit = 3 * p.N + p.M
    partial = packer.partial_bins()
    if partial > limit:
        out.append(f"partial bins: {partial} > 3N+M = {limit}")
    st = packer.stats()
    for i in range(1, p.N + 1):
        lam = st.lam[i - 1]
        a = p.alpha(i)
        blue_model = (1 - a) * lam / p.blue_capacity(i)
        if abs(st.B[i - 1] - blue_model) > 2:
            out.append(f"blue bins: type {i} has B={st.B[i - 1]}, model {float(blue_model):.3f}")
        if p.theta(i):
            red_model = a * lam / p.theta(i)
            if abs(st.R[i - 1] - red_model) > 2:
                out.append(f"red bins: type {i} has R={st.R[i - 1]}, model {float(red_model):.3f}")
    if st.large_bins != sum(st.B) + sum(st.R) - st.Y:
        out.append("bin identity: large bins != sum B + sum R - Y")
    if p.N == 151 and not q_e_bound_holds(st.q, st.e):
        out.append(f"q/e bound: q={st.q}, e={st.e}")
    for b in packer.bins:
        if b.red is not None and b.blue is not None:
            if p.delta(b.blue) < p.gamma(b.red) * p.t(b.red):
                out.append(f"bin {b.id}: red type {b.red} does not fit beside blue type {b.blue}")
    if geometry and packer.layout:
        for b in packer.iter_bins():
            items = b.layout.items if isinstance(b, BinRecord) else b.items
            bad = verify(items)
            if bad is not None:
                out.append(f"bin {b.id}: {bad}")
    for bin_id, short in packer.small.volume_deficits():
        out.append(f"small bin {bin_id}: occupied volume short by {short}")
    return out
