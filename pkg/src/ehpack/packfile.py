"""Reading and writing item streams and packing files.

An item stream has one size per line (``p/q`` or a decimal); blank lines and
``#`` comments are ignored.  A line ``size count`` stands for ``count``
items of that size in a row.

A packing file starts with a header ``d N label``, then one line per item::

    bin_id type color side anchor_1 ... anchor_d

``color`` is ``blue``, ``red`` or ``small``; for small items ``type`` is the
small grid size ``i``.  The item list ends with a line ``end``.  An optional
stats section follows: a line ``stats``, one line ``i n_i e_i B_i R_i`` per
large type, and a final line ``Y q e total``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Iterable, Iterator

from .eh_core import BinRecord, Packer, PackingStats
from .geometry import BLUE, RED, SMALL, PlacedItem, verify
from .params import ParameterSet, as_rational

__all__ = [
    "ParseError",
    "PackingFile",
    "FileStats",
    "read_items",
    "write_packing",
    "format_stats",
    "read_packing",
    "derive_stats",
    "compare_stats",
    "verify_packing",
]


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def read_items(lines: Iterable[str]) -> Iterator[Fraction | tuple[Fraction, int]]:
    """Sizes, or ``(size, count)`` for run lines of the form ``size count``."""
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) > 2:
            raise ParseError(lineno, f"expected 'size' or 'size count', got {line!r}")
        try:
            size = as_rational(parts[0])
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(lineno, f"bad item size {parts[0]!r}: {exc}") from None
        if len(parts) == 1:
            yield size
            continue
        try:
            count = int(parts[1])
        except ValueError:
            raise ParseError(lineno, f"bad run length {parts[1]!r}") from None
        if count < 0:
            raise ParseError(lineno, "run length must be non-negative")
        yield size, count


def _q(x: Fraction | int) -> str:
    return str(Fraction(x))


def _item_line(bin_id: int, type_index: int, item: PlacedItem) -> str:
    return " ".join([str(bin_id), str(type_index), item.color, _q(item.side), *map(_q, item.anchor)])


def format_stats(st: PackingStats) -> list[str]:
    lines = [
        f"{i} {n} {e} {b} {r}"
        for i, (n, e, b, r) in enumerate(zip(st.lam, st.reds, st.B, st.R), 1)
    ]
    lines.append(f"{st.Y} {st.q} {st.e} {st.total_bins}")
    return lines


def write_packing(packer: Packer, out: IO[str], stats: bool = True) -> None:
    """Write a layout-mode packing, ordered by bin id."""
    if not packer.layout:
        raise ValueError("only layout-mode packings carry coordinates")
    p = packer.p
    out.write(f"{p.d} {p.N} {p.label}\n")
    for b in packer.iter_bins():
        if isinstance(b, BinRecord):
            for it in b.layout.items:
                out.write(_item_line(b.id, it.type_index, it) + "\n")
        else:
            for it in b.items:
                out.write(_item_line(b.id, b.i, it) + "\n")
    out.write("end\n")
    if stats:
        out.write("stats\n")
        for line in format_stats(packer.stats()):
            out.write(line + "\n")


@dataclass(frozen=True)
class FileStats:
    per_type: tuple[tuple[int, int, int, int], ...]  # (n, e, B, R) for types 1..N
    Y: int
    q: int
    e: int
    total: int


@dataclass
class PackingFile:
    d: int
    N: int
    label: str
    bins: dict[int, list[tuple[int, PlacedItem]]] = field(default_factory=dict)
    stats: FileStats | None = None


def _ints(parts: list[str], lineno: int, what: str) -> list[int]:
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise ParseError(lineno, f"{what} must be integers") from None


def read_packing(lines: Iterable[str]) -> PackingFile:
    it = iter(enumerate(lines, 1))
    lineno, header = next(it, (1, ""))
    parts = header.split()
    if len(parts) < 3:
        raise ParseError(lineno, "header must be 'd N label'")
    d, N = _ints(parts[:2], lineno, "d and N")
    pf = PackingFile(d, N, " ".join(parts[2:]))
    ended = False
    for lineno, raw in it:
        line = raw.strip()
        if not line:
            continue
        if line == "end":
            ended = True
            break
        parts = line.split()
        if len(parts) != 4 + d:
            raise ParseError(lineno, f"expected {4 + d} fields, got {len(parts)}")
        bin_id, type_index = _ints(parts[:2], lineno, "bin id and type")
        color = parts[2]
        if color not in (BLUE, RED, SMALL):
            raise ParseError(lineno, f"unknown color {color!r}")
        try:
            side, *anchor = (Fraction(x) for x in parts[3:])
        except (ValueError, ZeroDivisionError):
            raise ParseError(lineno, "side and anchors must be rationals") from None
        if color != SMALL and not 1 <= type_index <= N:
            raise ParseError(lineno, f"type {type_index} outside 1..{N}")
        item = PlacedItem(side, tuple(anchor), color, type_index)
        pf.bins.setdefault(bin_id, []).append((lineno, item))
    if not ended:
        raise ParseError(lineno + 1, "missing 'end' line (truncated file?)")
    rest = [(n, r.strip()) for n, r in it if r.strip()]
    if not rest:
        return pf
    lineno, first = rest[0]
    if first != "stats":
        raise ParseError(lineno, "expected 'stats' after 'end'")
    if len(rest) != N + 2:
        raise ParseError(rest[-1][0], f"stats section needs {N} type lines and a summary line")
    per_type = []
    for k, (lineno, line) in enumerate(rest[1 : N + 1], 1):
        vals = _ints(line.split(), lineno, "stats fields")
        if len(vals) != 5 or vals[0] != k:
            raise ParseError(lineno, f"expected 'i n e B R' for type {k}")
        per_type.append(tuple(vals[1:]))
    lineno, line = rest[-1]
    vals = _ints(line.split(), lineno, "summary fields")
    if len(vals) != 4:
        raise ParseError(lineno, "summary must be 'Y q e total'")
    pf.stats = FileStats(tuple(per_type), *vals)
    return pf


def derive_stats(pf: PackingFile, p: ParameterSet | None = None) -> FileStats:
    """Recompute the stats section from the item lines.

    ``q`` and ``e`` need to know which types reserve space (``phi``); without
    ``p`` they are reported as ``-1``.
    """
    N = pf.N
    n = [0] * (N + 1)
    e = [0] * (N + 1)
    blue_bins: dict[int, set[int]] = defaultdict(set)
    red_bins: dict[int, set[int]] = defaultdict(set)
    for bin_id, items in pf.bins.items():
        for _, it in items:
            if it.color == SMALL:
                continue
            n[it.type_index] += 1
            if it.color == RED:
                e[it.type_index] += 1
                red_bins[it.type_index].add(bin_id)
            else:
                blue_bins[it.type_index].add(bin_id)
    blue_of = {b: i for i, s in blue_bins.items() for b in s}
    red_of = {b: j for j, s in red_bins.items() for b in s}
    Y = len(blue_of.keys() & red_of.keys())
    q, e_max = -1, -1
    if p is not None:
        q, e_max = 1, 0
        for b, i in blue_of.items():
            if b not in red_of and p.phi(i):
                if i <= 17:
                    q = max(q, i)
                elif 22 <= i <= 28:
                    q = max(q, i - 20)
        for b, j in red_of.items():
            if b not in blue_of:
                e_max = max(e_max, j)
    per_type = tuple(
        (n[i], e[i], len(blue_bins.get(i, ())), len(red_bins.get(i, ()))) for i in range(1, N + 1)
    )
    return FileStats(per_type, Y, q, e_max, len(pf.bins))


def compare_stats(claimed: FileStats, derived: FileStats) -> list[str]:
    out = []
    names = ("n", "e", "B", "R")
    for i, (a, b) in enumerate(zip(claimed.per_type, derived.per_type), 1):
        for name, x, y in zip(names, a, b):
            if x != y:
                out.append(f"stats mismatch: {name}_{i} is {x} in the file, {y} from the items")
    for name in ("Y", "q", "e", "total"):
        x, y = getattr(claimed, name), getattr(derived, name)
        if y >= 0 and x != y:
            out.append(f"stats mismatch: {name} is {x} in the file, {y} from the items")
    return out


def verify_packing(pf: PackingFile, p: ParameterSet | None = None) -> list[str]:
    """Geometric check of every bin plus the stats cross-check; one message per problem."""
    out = []
    for bin_id in sorted(pf.bins):
        items = [it for _, it in pf.bins[bin_id]]
        if any(len(it.anchor) != pf.d for it in items):
            out.append(f"bin {bin_id}: wrong number of coordinates")
            continue
        bad = verify(items)
        if bad is not None:
            lines = [pf.bins[bin_id][k][0] for k in _indices(bad)]
            where = ", ".join(f"line {ln}" for ln in lines)
            out.append(f"bin {bin_id}: {bad} ({where})")
    if pf.stats is not None:
        out.extend(compare_stats(pf.stats, derive_stats(pf, p)))
    return out


def _indices(bad) -> list[int]:
    return [bad.first, bad.second] if hasattr(bad, "first") else [bad.item]
