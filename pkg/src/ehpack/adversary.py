"""Adversarial inputs against the 16-type square-packing parameter set, and
the two-input lower bound that holds for every Extended Harmonic algorithm.

Counts are linear forms ``a*M + b*N`` in two bin-class sizes.  ``N`` is tied
to ``M`` by a fixed rational ratio, and ``M`` must be a multiple of a unit
that makes every item count and every per-batch bin count integral.

Item sizes carry ``+eps`` offsets.  The default ``eps = 2**-20`` is a power of
two, so the dust items (side ``eps``) are classified into small type 16 whose
cells have side exactly ``eps``.  Dust therefore fills its bins completely and
can be packed for real in counting mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

from .eh_core import Packer, classify, compute_q_e
from .geometry import PlacedItem
from .params import ParameterSet, as_rational, builtin

__all__ = [
    "EPSILON",
    "LinearForm",
    "BatchSpec",
    "AdversaryInput",
    "CostBreakdown",
    "SimulationResult",
    "INPUTS",
    "build",
    "build_p1",
    "build_p2",
    "admissible_unit",
    "analytic_cost",
    "simulate",
    "prior_weight_eval",
    "PRIOR_TEST_BINS",
    "optimal_bin_contents",
    "optimal_bin_layout",
    "generic_lower_bound",
    "generic_inequalities",
    "averaged_bound",
    "GenericAdversary",
    "generic_adversary",
    "simulate_generic",
]

EPSILON = Fraction(1, 2**20)


@dataclass(frozen=True)
class LinearForm:
    """``m*M + n*N`` with rational coefficients."""

    m: Fraction = Fraction(0)
    n: Fraction = Fraction(0)

    def at(self, M, N) -> Fraction:
        return self.m * M + self.n * N

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(self.m + other.m, self.n + other.n)

    def __mul__(self, c) -> "LinearForm":
        c = Fraction(c)
        return LinearForm(self.m * c, self.n * c)

    __rmul__ = __mul__

    def __str__(self) -> str:
        parts = [f"{c}{v}" if c != 1 else v for c, v in ((self.m, "M"), (self.n, "N")) if c]
        return " + ".join(parts) or "0"


def _lf(m=0, n=0) -> LinearForm:
    return LinearForm(Fraction(m), Fraction(n))


@dataclass(frozen=True)
class BatchSpec:
    """One batch: ``count`` items of side ``base + eps_sign * eps``.

    ``role`` is ``large`` (a typed item), ``small-grid`` (below ``1/M`` but
    sized to fill a grid of cells) or ``dust``.
    """

    count: LinearForm
    base: Fraction
    role: str = "large"
    eps_sign: int = 1

    def size(self, eps: Fraction) -> Fraction:
        return self.base + self.eps_sign * eps

    def items(self, M: int, N: int) -> int:
        """Item count, rounded down separately for the M-class and the N-class."""
        return math.floor(self.count.m * M) + math.floor(self.count.n * N)


@dataclass(frozen=True)
class _Template:
    name: str
    ratio_nm: Fraction
    batches: tuple[BatchSpec, ...]
    dust_volume: tuple[Fraction, Fraction]  # per A bin (M of them), per B bin (N)
    red_open: frozenset[int]  # red types left waiting for blue items at the end
    settled_after: int  # batch after which no large bin accepts anything
    bin_contents: tuple[Mapping[Fraction, int], Mapping[Fraction, int]]


def _p1() -> _Template:
    p = builtin("prior2")
    a6, a9, a10, a12 = (p.alpha(i) for i in (6, 9, 10, 12))
    ratio = (1 - 2 * a9 / 5 - 2 * a10 / 7 - 5 * a12 / 11) / (4 * a12 / 11 + 2 * a9 / 5)
    F = Fraction
    batches = (
        BatchSpec(_lf(5, 4), F(1, 7)),
        BatchSpec(_lf(2, 0), F(1, 5)),
        BatchSpec(_lf(2, 2), F(1, 4)),
        BatchSpec(_lf(1, 0), F(1, 2)),
        BatchSpec(_lf(0, 1), F(3, 5)),
        BatchSpec(_lf(3, 3), F(141, 400)),
        BatchSpec(_lf(24, 25), F(1, 23), "small-grid"),
    )
    a_bin = {F(1, 2): 1, F(141, 400): 3, F(1, 4): 2, F(1, 5): 2, F(1, 7): 5, F(1, 23): 24}
    b_bin = {F(3, 5): 1, F(141, 400): 3, F(1, 4): 2, F(1, 7): 4, F(1, 23): 25}
    return _Template(
        "P1", ratio, batches, (_fill_gap(a_bin), _fill_gap(b_bin)),
        frozenset({6}), 4, (a_bin, b_bin),
    )


def _p2() -> _Template:
    p = builtin("prior2")
    a9, a10, a12 = (p.alpha(i) for i in (9, 10, 12))
    ratio = (1 - 5 * a12 / 11 - 2 * a10 / 7 - 2 * a9 / 5) / (2 * a9 / 5)
    F = Fraction
    batches = (
        BatchSpec(_lf(1, 0), F(1, 2)),
        BatchSpec(_lf(5, 0), F(1, 7)),
        BatchSpec(_lf(2, 0), F(1, 5)),
        BatchSpec(_lf(2, 2), F(1, 4)),
        BatchSpec(_lf(3, 3), F(1, 3)),
        BatchSpec(_lf(0, 1), F(259, 400)),
        BatchSpec(_lf(8, 8), F(1, 13), "small-grid"),
        BatchSpec(_lf(0, 6), F(1, 12), "small-grid"),
        BatchSpec(_lf(10, 0), F(1, 22), "small-grid"),
    )
    a_bin = {F(1, 2): 1, F(1, 3): 3, F(1, 4): 2, F(1, 5): 2, F(1, 7): 5, F(1, 13): 8, F(1, 22): 10}
    b_bin = {F(259, 400): 1, F(1, 3): 3, F(1, 4): 2, F(1, 13): 8, F(1, 12): 6}
    return _Template(
        "P2", ratio, batches, (_fill_gap(a_bin), _fill_gap(b_bin)),
        frozenset({7}), 4, (a_bin, b_bin),
    )


def _fill_gap(contents: Mapping[Fraction, int], d: int = 2) -> Fraction:
    """Area left in a unit bin by items of the listed sides, offsets ignored."""
    return 1 - sum((n * s**d for s, n in contents.items()), Fraction(0))


INPUTS = {"P1": _p1(), "P2": _p2()}


def _template(which: str) -> _Template:
    try:
        return INPUTS[which.upper()]
    except KeyError:
        raise ValueError(f"unknown adversary input {which!r}; expected P1 or P2") from None


@dataclass(frozen=True)
class AdversaryInput:
    name: str
    M: int
    N: int
    eps: Fraction
    ratio_nm: Fraction
    batches: tuple[BatchSpec, ...]  # the last one is the dust batch
    dust_volume: tuple[Fraction, Fraction]

    def runs(self) -> Iterator[tuple[Fraction, int]]:
        """The item stream as ``(size, count)`` runs in arrival order."""
        for b in self.batches:
            yield b.size(self.eps), b.items(self.M, self.N)

    @property
    def opt_bins(self) -> int:
        return self.M + self.N


# ---------------------------------------------------------------- costs


@dataclass(frozen=True)
class CostBreakdown:
    """Bins used by the prior-work algorithm, term by term, as forms in M and N."""

    name: str
    terms: tuple[tuple[str, LinearForm], ...]
    ratio_nm: Fraction

    @property
    def total(self) -> LinearForm:
        out = LinearForm()
        for _, f in self.terms:
            out = out + f
        return out

    @property
    def opt(self) -> LinearForm:
        return _lf(1, 1)

    def per_M(self, form: LinearForm) -> Fraction:
        return form.at(1, self.ratio_nm)

    @property
    def ratio(self) -> Fraction:
        return self.per_M(self.total) / self.per_M(self.opt)


def analytic_cost(which: str, p: ParameterSet | None = None) -> CostBreakdown:
    """The bin count of the prior-work algorithm on P1 or P2, in exact terms."""
    tpl = _template(which)
    p = p or builtin("prior2")
    a = p.alpha
    A, B = tpl.dust_volume
    if tpl.name == "P1":
        terms = (
            ("blue 1/7+eps (type 12)", (1 - a(12)) * _lf(5, 4) * Fraction(1, 36)),
            ("blue 1/5+eps (type 10)", (1 - a(10)) * _lf(2, 0) * Fraction(1, 16)),
            ("blue 1/4+eps (type 9)", (1 - a(9)) * _lf(2, 2) * Fraction(1, 9)),
            ("red 0.3525+eps (type 6)", a(6) * _lf(3, 3) * Fraction(1, 3)),
            ("blue 0.3525+eps (type 6)", (1 - a(6)) * _lf(3, 3) * Fraction(1, 4)),
            ("small 1/23+eps", _lf(24, 25) * Fraction(1, 22**2)),
            ("dust", LinearForm(A, B)),
            ("items above 1/2", _lf(1, 1)),
        )
    else:
        terms = (
            ("items above 1/2", _lf(1, 1)),
            ("blue 1/7+eps (type 12)", (1 - a(12)) * _lf(5, 0) * Fraction(1, 36)),
            ("blue 1/5+eps (type 10)", (1 - a(10)) * _lf(2, 0) * Fraction(1, 16)),
            ("blue 1/4+eps (type 9)", (1 - a(9)) * _lf(2, 2) * Fraction(1, 9)),
            ("red 1/3+eps (type 7)", a(7) * _lf(3, 3) * Fraction(1, 3)),
            ("blue 1/3+eps (type 7)", (1 - a(7)) * _lf(3, 3) * Fraction(1, 4)),
            ("small 1/13+eps", _lf(8, 8) * Fraction(1, 12**2)),
            ("small 1/12+eps", _lf(0, 6) * Fraction(1, 11**2)),
            ("small 1/22+eps", _lf(10, 0) * Fraction(1, 21**2)),
            ("dust", LinearForm(A, B)),
        )
    return CostBreakdown(tpl.name, terms, tpl.ratio_nm)


def _integral_forms(tpl: _Template, p: ParameterSet) -> list[LinearForm]:
    """Quantities that must be whole numbers: item counts, red counts and
    the per-batch bin counts other than dust."""
    out = []
    for b in tpl.batches:
        out.append(b.count)
        i = classify(p, b.base + EPSILON)
        if i is None:
            continue
        a = p.alpha(i)
        out.append(a * b.count)
        out.append((1 - a) * b.count * Fraction(1, p.blue_capacity(i)))
        if a:
            out.append(a * b.count * Fraction(1, p.theta(i)))
    for label, f in analytic_cost(tpl.name, p).terms:
        if label != "dust":
            out.append(f)
    return out


def admissible_unit(which: str) -> int:
    """Smallest ``M`` making ``N`` and every counted quantity integral."""
    tpl = _template(which)
    p = builtin("prior2")
    unit = 1
    for f in [_lf(0, 1), *_integral_forms(tpl, p)]:
        unit = math.lcm(unit, f.at(1, tpl.ratio_nm).denominator)
    return unit


def build(which: str, M: int | None = None, eps: Fraction = EPSILON) -> AdversaryInput:
    """Instantiate P1 or P2 at ``M`` (default: the smallest admissible value)."""
    tpl = _template(which)
    unit = admissible_unit(which)
    if M is None:
        M = unit
    if M <= 0 or M % unit:
        raise ValueError(f"M={M} is not a positive multiple of the admissible unit {unit}")
    eps = Fraction(eps)
    if not 0 < eps < Fraction(1, 10**5):
        raise ValueError("eps must lie in (0, 1e-5)")
    p = builtin("prior2")
    for b in tpl.batches:
        want = classify(p, b.base + Fraction(1, 10**9))
        if classify(p, b.size(eps)) != want:
            raise ValueError(f"eps={eps} moves size {b.base}+eps out of its interval")
    N = int(tpl.ratio_nm * M)
    A, B = tpl.dust_volume
    # dust fills each bin class up to its total free area
    dust = BatchSpec(LinearForm(A / eps**2, B / eps**2), Fraction(0), "dust")
    return AdversaryInput(tpl.name, M, N, eps, tpl.ratio_nm, (*tpl.batches, dust), tpl.dust_volume)


def build_p1(M: int | None = None, eps: Fraction = EPSILON) -> AdversaryInput:
    return build("P1", M, eps)


def build_p2(M: int | None = None, eps: Fraction = EPSILON) -> AdversaryInput:
    return build("P2", M, eps)


# ------------------------------------------------------------ simulation


@dataclass
class SimulationResult:
    name: str
    M: int
    N: int
    bins: int
    opt: int
    analytic_ratio: Fraction
    new_bins: list[int] = field(default_factory=list)  # per batch
    accepting: list[int] = field(default_factory=list)  # after each batch
    red_open_types: frozenset[int] = frozenset()
    q: int = 1
    e: int = 0

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.bins, self.opt)

    @property
    def gap(self) -> Fraction:
        return abs(self.ratio - self.analytic_ratio)


def accepting_bins(packer: Packer) -> int:
    """Large bins that could still receive some item."""
    p = packer.p
    out = 0
    for b in packer.bins:
        if b.kind in ("blue-open", "red-open"):
            out += b.count
        elif b.blue is not None and b.n_blue < p.blue_capacity(b.blue):
            out += b.count
        elif b.red is not None and b.n_red < p.theta(b.red):
            out += b.count
    return out


def simulate(which: str, scale: int = 1, eps: Fraction = EPSILON) -> SimulationResult:
    """Pack P1 or P2 at ``M = scale * admissible_unit`` with the prior-work set."""
    inp = build(which, scale * admissible_unit(which), eps)
    tpl = _template(which)
    packer = Packer(builtin("prior2"), layout=False)
    res = SimulationResult(
        inp.name, inp.M, inp.N, 0, inp.opt_bins, analytic_cost(which).ratio,
    )
    for size, count in inp.runs():
        before = packer.total_bins
        packer.pack_run(size, count)
        res.new_bins.append(packer.total_bins - before)
        res.accepting.append(accepting_bins(packer))
    res.bins = packer.total_bins
    res.red_open_types = frozenset(b.red for b in packer.bins if b.kind == "red-open")
    res.q, res.e = compute_q_e(packer)
    return res


def simulation_problems(res: SimulationResult, gap_constant: int = 10) -> list[str]:
    """Mismatches between a simulation and the analysis it should reproduce.

    ``gap_constant`` bounds ``|measured - analytic| * M``.
    """
    tpl = _template(res.name)
    out = []
    if res.red_open_types != tpl.red_open:
        out.append(
            f"red-open types {sorted(res.red_open_types)}, expected {sorted(tpl.red_open)}"
        )
    if res.accepting[tpl.settled_after - 1]:
        out.append(
            f"{res.accepting[tpl.settled_after - 1]} bins still accept items "
            f"after batch {tpl.settled_after}"
        )
    if res.gap * res.M > gap_constant:
        out.append(f"ratio gap {float(res.gap):.3e} exceeds {gap_constant}/M")
    return out


# ------------------------------------------------------ prior-work weights


def _prior_weights(which: str, p: ParameterSet) -> dict[int, Fraction]:
    a = p.alpha
    if which == "W21":
        return {
            3: Fraction(1),
            4: Fraction(0),
            6: (1 - a(6)) / 4 + a(6) / 3,
            9: (1 - a(9)) / 9 + a(9) / 5,
            10: (1 - a(10)) / 16 + a(10) / 7,
            12: (1 - a(12)) / 36 + a(12) / 11,
        }
    if which == "W22":
        return {
            3: Fraction(1),
            4: Fraction(1),
            6: (1 - a(6)) / 4 + a(6) / 3,
            9: (1 - a(9)) / 9,
            10: (1 - a(10)) / 16,
            12: (1 - a(12)) / 36,
        }
    raise ValueError(f"unknown weight function {which!r}; expected W21 or W22")


SMALL_WEIGHT_FACTOR = Fraction(6, 5)

# bins on which each of the two functions is large: (type counts, small area)
PRIOR_TEST_BINS = {
    "W21": ({3: 1, 6: 3, 9: 2, 12: 4}, Fraction(475093, 7840000)),
    "W22": ({4: 1, 6: 3, 9: 2, 10: 2}, Fraction("0.17223125")),
}


def prior_weight_eval(
    contents: Mapping[int, int], which: str, small_area=0, p: ParameterSet | None = None
) -> Fraction:
    """Weight of one bin under a prior-work case-2 weight function."""
    w = _prior_weights(which.upper(), p or builtin("prior2"))
    total = SMALL_WEIGHT_FACTOR * as_rational(small_area)
    for i, n in contents.items():
        if i not in w:
            raise ValueError(f"type {i} has no weight under {which}; defined types: {sorted(w)}")
        total += n * w[i]
    return total


# ------------------------------------------------------- optimal layouts


def optimal_bin_contents(which: str) -> tuple[dict[Fraction, int], dict[Fraction, int]]:
    """Item sides (without ``eps``) of the A and B bins of the optimal packing."""
    tpl = _template(which)
    return dict(tpl.bin_contents[0]), dict(tpl.bin_contents[1])


def optimal_bin_layout(
    contents: Mapping[Fraction, int], eps: Fraction = EPSILON, d: int = 2
) -> list[PlacedItem] | None:
    """Place every item of ``contents`` (sides grown by ``eps``) in one bin.

    Depth-first search over corner points, largest items first.  Candidate
    anchors on each axis are 0, the far faces of placed items, and the
    position flush with the far wall.  Equal items are placed in
    increasing anchor order to skip symmetric branches.  Returns ``None``
    when no layout exists among these candidates.
    """
    sides = [Fraction(s) + eps for s in sorted(contents, reverse=True) for _ in range(contents[s])]
    if not sides:
        return []
    scale = math.lcm(*(s.denominator for s in sides))
    ints = [int(s * scale) for s in sides]
    placed: list[tuple[tuple[int, ...], int]] = []

    def free(anchor, s):
        for other, t in placed:
            if all(a < b + t and b < a + s for a, b in zip(anchor, other)):
                return False
        return True

    def candidates(s):
        grid = [()]
        for k in range(d):
            stops = {0, scale - s, *(a[k] + t for a, t in placed)}
            grid = [g + (c,) for g in grid for c in stops if c + s <= scale]
        return sorted(grid, key=lambda g: g[::-1])

    def place(k, last):
        if k == len(ints):
            return True
        s = ints[k]
        for anchor in candidates(s):
            if k and ints[k - 1] == s and anchor[::-1] <= last:
                continue
            if free(anchor, s):
                placed.append((anchor, s))
                if place(k + 1, anchor[::-1]):
                    return True
                placed.pop()
        return False

    if not place(0, None):
        return None
    return [
        PlacedItem(Fraction(s, scale), tuple(Fraction(a, scale) for a in anchor), "blue", 0)
        for anchor, s in placed
    ]


# ------------------------------------------- generic two-input lower bound


def generic_lower_bound(d: int) -> Fraction:
    """Lower bound on the ratio of every Extended Harmonic algorithm in dimension ``d``."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    two, three = Fraction(2) ** d, Fraction(3) ** d
    return 3 - 1 / two - 1 / two**2 - 2 * two / three + 2 / three


def generic_inequalities(d: int) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    """The two inputs' ratio bounds as ``(constant, slope)`` in the red share
    ``beta`` of the type holding ``1/3 + eps``: ``R >= constant + slope*beta``."""
    two, three = Fraction(2) ** d, Fraction(3) ** d
    first = (3 + 1 / three - 2 / two - two / three, -(1 - 1 / two))
    second = (3 - 2 * two / three + 1 / three - 1 / two, 1 / two)
    return first, second


def averaged_bound(d: int) -> tuple[Fraction, Fraction]:
    """Combine the first inequality with ``2**d - 1`` copies of the second;
    returns ``(constant, slope)`` of the averaged bound."""
    (c1, k1), (c2, k2) = generic_inequalities(d)
    w = 2**d - 1
    return (c1 + w * c2) / (w + 1), (k1 + w * k2) / (w + 1)


def _type_above(p: ParameterSet, x: Fraction) -> int:
    """Type whose interval contains values slightly above ``x``."""
    i = classify(p, x)
    return i - 1 if p.t(i) == x else i


@dataclass(frozen=True)
class GenericAdversary:
    d: int
    N: int
    eps: Fraction
    third_type: int  # type of 1/3 + eps
    half_type: int
    two_thirds_type: int
    small_side: Fraction
    first: tuple[tuple[Fraction, int], ...]  # (size, count) runs
    second: tuple[tuple[Fraction, int], ...]

    @property
    def opt_bins(self) -> int:
        # N bins of one large item each, plus one for leftover small items
        return self.N + 1


def generic_adversary(p: ParameterSet, N: int = 10**6) -> GenericAdversary:
    """The two inputs of the generic lower bound, instantiated for ``p``."""
    d = p.d
    third = Fraction(1, 3)
    i3 = _type_above(p, third)
    ih = _type_above(p, Fraction(1, 2))
    i23 = classify(p, 2 * third)
    if i3 is None or i23 is None or i3 < 1:
        raise ValueError("no large types around 1/3 and 2/3")
    eps = None
    for k in range(3, 16):
        e = Fraction(1, 10**k)
        if third + e < p.t(i3) and Fraction(1, 2) + e < p.t(ih) and 2 * third - e > p.t(i23 + 1):
            eps = e
            break
    if eps is None:
        raise ValueError("intervals around 1/3, 1/2 and 2/3 leave no room for eps")
    small = Fraction(1, p.M * 2**4)
    cubes = [(third + eps, (2**d - 1) * N)]
    vol1 = N * (1 - Fraction(2**d - 1, 3**d) - Fraction(1, 2**d))
    vol2 = N * (1 - Fraction(2 ** (d + 1) - 1, 3**d))
    first = (*cubes, (Fraction(1, 2) + eps, N), (small, int(vol1 / small**d)))
    second = (*cubes, (2 * third - eps, N), (small, int(vol2 / small**d)))
    return GenericAdversary(d, N, eps, i3, ih, i23, small, first, second)


@dataclass(frozen=True)
class GenericSimulation:
    adversary: GenericAdversary
    bins: tuple[int, int]
    red_share: Fraction  # realized beta of the 1/3 + eps type

    @property
    def ratios(self) -> tuple[Fraction, Fraction]:
        opt = self.adversary.opt_bins
        return Fraction(self.bins[0], opt), Fraction(self.bins[1], opt)

    @property
    def averaged(self) -> Fraction:
        w = 2**self.adversary.d - 1
        r1, r2 = self.ratios
        return (r1 + w * r2) / (w + 1)


def simulate_generic(p: ParameterSet, N: int = 10**6) -> GenericSimulation:
    adv = generic_adversary(p, N)
    bins = []
    share = Fraction(0)
    for stream in (adv.first, adv.second):
        packer = Packer(p, layout=False)
        for size, count in stream:
            packer.pack_run(size, count)
        bins.append(packer.total_bins)
        n = packer.n[adv.third_type]
        share = Fraction(packer.e[adv.third_type], n) if n else Fraction(0)
    return GenericSimulation(adv, (bins[0], bins[1]), share)
