"""Parameter sets for Extended Harmonic packing.

A parameter set fixes the interval boundaries, the red fractions, the
reserved-space levels and the per-type grid sizes.  Every value is an exact
:class:`~fractions.Fraction` so that classification at interval endpoints
is deterministic.

Types are indexed from 1 everywhere in the public API, matching the
conventional numbering of the interval table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

from . import _tables

Rational = Union[Fraction, int, str]

__all__ = [
    "IntervalTable",
    "RedBlueConfig",
    "DerivedParams",
    "ParameterSet",
    "Violation",
    "ParamsFormatError",
    "as_rational",
    "builtin_eh_params",
    "builtin_prior_params",
    "builtin_example_params",
    "derive",
    "make_params",
    "validate",
    "load_params",
    "save_params",
    "dumps_params",
    "loads_params",
    "BUILTIN_NAMES",
    "builtin",
    "resolve",
]


def as_rational(x) -> Fraction:
    """Convert ``x`` to an exact rational.

    Strings may be ``p/q`` or decimal literals.  Floats are converted through
    their shortest decimal repr, so ``0.3`` becomes ``3/10``.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational literal")
        return Fraction(s)
    raise TypeError(f"cannot interpret {x!r} as a rational")


@dataclass(frozen=True)
class IntervalTable:
    """Boundaries ``t_1 = 1 > t_2 > ... > t_{N+1} = 1/M``.

    ``t`` holds all ``N + 1`` boundaries, so type ``i`` is the interval
    ``(t[i], t[i-1]]`` in 0-based storage.
    """

    d: int
    t: tuple[Fraction, ...]
    M: int

    @property
    def N(self) -> int:
        return len(self.t) - 1

    def upper(self, i: int) -> Fraction:
        """Right endpoint ``t_i`` of type ``i``."""
        return self.t[i - 1]

    def lower(self, i: int) -> Fraction:
        """Left (open) endpoint ``t_{i+1}`` of type ``i``."""
        return self.t[i]


@dataclass(frozen=True)
class RedBlueConfig:
    alpha: tuple[Fraction, ...]
    Delta: tuple[Fraction, ...]
    phi: tuple[int, ...]
    beta: tuple[int, ...]
    gamma: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.Delta)


@dataclass(frozen=True)
class DerivedParams:
    delta: tuple[Fraction, ...]
    theta: tuple[int, ...]
    caseW: Mapping[int, Fraction] = field(default_factory=dict)


@dataclass(frozen=True)
class ParameterSet:
    intervals: IntervalTable
    rb: RedBlueConfig
    derived: DerivedParams
    label: str = ""

    # 1-based accessors; these are what the rest of the package uses.

    @property
    def d(self) -> int:
        return self.intervals.d

    @property
    def N(self) -> int:
        return self.intervals.N

    @property
    def M(self) -> int:
        return self.intervals.M

    def t(self, i: int) -> Fraction:
        return self.intervals.t[i - 1]

    def alpha(self, i: int) -> Fraction:
        return self.rb.alpha[i - 1]

    def beta(self, i: int) -> int:
        return self.rb.beta[i - 1]

    def gamma(self, i: int) -> int:
        return self.rb.gamma[i - 1]

    def phi(self, i: int) -> int:
        return self.rb.phi[i - 1]

    def delta(self, i: int) -> Fraction:
        return self.derived.delta[i - 1]

    def theta(self, i: int) -> int:
        return self.derived.theta[i - 1]

    def Delta(self, j: int) -> Fraction:
        """Reserved-space level ``Delta_j``; ``Delta_0 = 0``."""
        return Fraction(0) if j == 0 else self.rb.Delta[j - 1]

    def blue_capacity(self, i: int) -> int:
        return self.beta(i) ** self.d

    def w(self, case: int) -> Fraction:
        return self.derived.caseW[case]

    def with_label(self, label: str) -> "ParameterSet":
        return ParameterSet(self.intervals, self.rb, self.derived, label)


@dataclass(frozen=True)
class Violation:
    rule: str
    index: int | None
    message: str

    def __str__(self) -> str:
        where = "" if self.index is None else f" (type {self.index})"
        return f"{self.rule}{where}: {self.message}"


class ParamsFormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def derive(
    intervals: IntervalTable,
    rb: RedBlueConfig,
    case_w: Mapping[int, Rational] | None = None,
) -> DerivedParams:
    d = intervals.d
    delta = tuple(Fraction(0) if f == 0 else rb.Delta[f - 1] for f in rb.phi)
    theta = tuple(b**d - (b - g) ** d for b, g in zip(rb.beta, rb.gamma))
    cw = {int(c): as_rational(v) for c, v in (case_w or {}).items()}
    return DerivedParams(delta=delta, theta=theta, caseW=cw)


def gamma_rule(t_i: Fraction, Delta: Sequence[Fraction]) -> int:
    """Red items per axis in the smallest reserved space."""
    if not Delta or t_i > Delta[-1]:
        return 0
    return max(1, math.floor(Delta[0] / t_i))


def make_params(
    d: int,
    t: Sequence[Rational],
    M: int,
    alpha: Sequence[Rational],
    Delta: Sequence[Rational],
    phi: Sequence[int],
    beta: Sequence[int] | None = None,
    gamma: Sequence[int] | None = None,
    case_w: Mapping[int, Rational] | None = None,
    label: str = "",
) -> ParameterSet:
    """Assemble a parameter set; missing ``beta``/``gamma`` use their rules."""
    tt = tuple(as_rational(x) for x in t)
    DD = tuple(as_rational(x) for x in Delta)
    n = len(tt) - 1
    if beta is None:
        beta = [math.floor(1 / tt[i]) for i in range(n)]
    if gamma is None:
        gamma = [gamma_rule(tt[i], DD) for i in range(n)]
    intervals = IntervalTable(d=d, t=tt, M=M)
    rb = RedBlueConfig(
        alpha=tuple(as_rational(a) for a in alpha),
        Delta=DD,
        phi=tuple(int(f) for f in phi),
        beta=tuple(int(b) for b in beta),
        gamma=tuple(int(g) for g in gamma),
    )
    return ParameterSet(intervals, rb, derive(intervals, rb, case_w), label)


def validate(p: ParameterSet) -> list[Violation]:
    out: list[Violation] = []
    iv, rb = p.intervals, p.rb
    n = iv.N
    for name, arr in (("alpha", rb.alpha), ("phi", rb.phi), ("beta", rb.beta), ("gamma", rb.gamma)):
        if len(arr) != n:
            out.append(Violation("shape", None, f"{name} has {len(arr)} entries, expected {n}"))
    if out:
        return out

    t = iv.t
    if n < 1:
        out.append(Violation("shape", None, "no large types"))
        return out
    if t[0] != 1:
        out.append(Violation("monotonicity", 1, f"t_1 = {t[0]}, expected 1"))
    if iv.M < 1 or t[-1] != Fraction(1, iv.M):
        out.append(Violation("monotonicity", n + 1, f"t_{n + 1} = {t[-1]}, expected 1/{iv.M}"))
    for i in range(1, n + 1):
        if not t[i] < t[i - 1]:
            out.append(Violation("monotonicity", i, f"t_{i + 1} = {t[i]} is not below t_{i} = {t[i - 1]}"))

    D = rb.Delta
    if D:
        if D[0] <= 0:
            out.append(Violation("delta-order", None, "Delta_1 must be positive"))
        if D[-1] >= Fraction(1, 2):
            out.append(Violation("delta-order", None, "Delta_k must be below 1/2"))
        for j in range(1, len(D)):
            if not D[j - 1] < D[j]:
                out.append(Violation("delta-order", None, f"Delta_{j} >= Delta_{j + 1}"))
    top = D[-1] if D else Fraction(0)

    for i in range(1, n + 1):
        ti, a, f = p.t(i), p.alpha(i), p.phi(i)
        b, g = p.beta(i), p.gamma(i)
        if not 0 <= a <= 1:
            out.append(Violation("alpha-range", i, f"alpha = {a} outside [0, 1]"))
        if not 0 <= f <= len(D):
            out.append(Violation("phi-range", i, f"phi = {f} outside 0..{len(D)}"))
            continue
        if f and p.Delta(f) > 1 - b * ti:
            out.append(Violation("admissibility", i, f"Delta_{f} = {p.Delta(f)} exceeds 1 - beta*t = {1 - b * ti}"))
        if ti > top and a != 0:
            out.append(Violation("alpha-zero", i, f"t = {ti} exceeds Delta_k but alpha = {a}"))
        if b != math.floor(1 / ti):
            out.append(Violation("beta", i, f"beta = {b}, floor(1/t) = {math.floor(1 / ti)}"))
        expect = gamma_rule(ti, D)
        # gamma only matters for types that produce red items
        if g != expect and not (g == 0 and a == 0):
            out.append(Violation("gamma", i, f"gamma = {g}, expected {expect}"))
        if a > 0 and p.theta(i) < 1:
            out.append(Violation("theta", i, "positive alpha needs theta >= 1"))
    for c, wv in p.derived.caseW.items():
        if not 0 <= wv <= 1:
            out.append(Violation("case-w", c, f"w = {wv} outside [0, 1]"))
    return out


# ---------------------------------------------------------------------------
# built-in sets

_EH_T_HEAD = [
    "1", "0.7", "0.6875", "0.675", "0.67", "0.668", "0.667", "0.6667", "2/3",
    "0.666", "0.665", "0.6625", "0.65625", "0.65", "7/11", "0.625", "0.6",
    "0.5", "0.4", "0.375", "4/11", "0.35", "0.34375", "0.3375", "0.335",
    "0.334", "0.3335", "0.33335", "1/3", "0.3333", "0.333", "0.332", "0.33",
    "0.325", "0.3125", "0.3", "3/11", "1/4", "1/5", "2/11", "1/6", "0.15",
    "1/7", "1/8", "1/9", "1/10", "1/11", "1/12", "1/13", "0.075", "1/14",
    "1/15", "1/16", "0.06",
]

_EH_BETA_GAMMA_HEAD = (
    [(1, 0)] * 17 + [(2, 0)] + [(2, 1)] * 10 + [(3, 1)] * 9
    + [(4, 1), (5, 1), (5, 1), (6, 1), (6, 2), (7, 2), (8, 2), (9, 2),
       (10, 3), (11, 3), (12, 3), (13, 3), (13, 4), (14, 4), (15, 4),
       (16, 4), (16, 5)]
)

_EH_BETA_GAMMA_EXTRA = {62: (23, 7), 63: (24, 7), 64: (25, 7), 65: (26, 7), 66: (26, 8), 74: (33, 10)}


def _eh_boundaries() -> list[Fraction]:
    t = [Fraction(x) for x in _EH_T_HEAD]  # types 1..54
    t += [Fraction(1, i - 38) for i in range(55, 62)]
    t += [Fraction(3, 70), Fraction(1, 24), Fraction(1, 25), Fraction(1, 26), Fraction(3, 80)]
    t += [Fraction(1, i - 40) for i in range(67, 74)]
    t += [Fraction(3, 100)]
    t += [Fraction(1, i - 41) for i in range(75, 152)]
    t.append(Fraction(1, 111))
    return t


def builtin_eh_params(d: int, variant: str = "tabulated") -> ParameterSet:
    """The 151-type set for squares (``d=2``) or cubes (``d=3``).

    ``variant="corrected"`` replaces the two tabulated grid sizes that differ
    from ``floor(1/t_i)`` (types 134 and 140).
    """
    if d not in (2, 3):
        raise ValueError(f"no built-in parameter set for d={d}")
    if variant not in ("tabulated", "corrected"):
        raise ValueError(f"unknown variant {variant!r}")
    t = _eh_boundaries()
    bg = dict(enumerate(_EH_BETA_GAMMA_HEAD, start=1))
    bg.update(_EH_BETA_GAMMA_EXTRA)
    bg.update(_tables.BETA_GAMMA_TABLE)
    if variant == "corrected":
        for i in (134, 140):
            bg[i] = (math.floor(1 / t[i - 1]), bg[i][1])
    alpha_col = _tables.ALPHA_SQUARE if d == 2 else _tables.ALPHA_CUBE
    alpha = [Fraction(0)] * 18 + [Fraction(alpha_col[i]) for i in range(19, 152)]
    Delta = [t[i] for i in range(1, 17)]  # delta_i = 1 - t_i for types 2..17
    Delta = [1 - x for x in Delta]
    phi = [0] + list(range(1, 17)) + [0] * 4 + list(range(1, 8)) + [0] * (151 - 28)
    w_col = _tables.CASE_W_SQUARE if d == 2 else _tables.CASE_W_CUBE
    suffix = "" if variant == "tabulated" else "-corrected"
    return make_params(
        d=d,
        t=t,
        M=111,
        alpha=alpha,
        Delta=Delta,
        phi=phi,
        beta=[bg[i][0] for i in range(1, 152)],
        gamma=[bg[i][1] for i in range(1, 152)],
        case_w={c: Fraction(v) for c, v in w_col.items()},
        label=f"eh{d}{suffix}",
    )


def builtin_prior_params() -> ParameterSet:
    """The 16-type square-packing set with small threshold ``1/11``."""
    t = ["1", "0.705", "0.6475", "0.6", "0.5", "0.4", "0.3525", "1/3", "0.295",
         "1/4", "1/5", "1/6", "1/7", "1/8", "1/9", "0.1", "1/11"]
    alpha = ["0", "0", "0", "0", "0", "0.1348", "0.2", "0", "0.3096", "0.2248",
             "0.16", "0.13", "0.1", "0.1", "0.1", "0.05"]
    phi = [0, 2, 3, 4, 0, 1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0]
    beta = [1, 1, 1, 1, 2, 2, 2, 3, 3, 4, 5, 6, 7, 8, 9, 10]
    gamma = [0, 0, 0, 0, 0, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1, 2]
    return make_params(
        d=2, t=t, M=11, alpha=alpha, Delta=["0.2", "0.295", "0.3525", "0.4"],
        phi=phi, beta=beta, gamma=gamma, label="prior2",
    )


def builtin_example_params() -> ParameterSet:
    """Six large types plus small items below 1/10, used for the worked trace."""
    return make_params(
        d=2,
        t=["1", "0.7", "2/3", "1/2", "1/3", "0.3", "0.1"],
        M=10,
        alpha=["0", "0", "0", "0", "0.4", "0.4"],
        Delta=["0.3", "1/3"],
        phi=[0, 1, 2, 0, 0, 0],
        label="example6",
    )


BUILTIN_NAMES = ("eh2", "eh3", "prior2", "example6")


def builtin(name: str, variant: str = "tabulated") -> ParameterSet:
    if name == "eh2":
        return builtin_eh_params(2, variant)
    if name == "eh3":
        return builtin_eh_params(3, variant)
    if name == "prior2":
        return builtin_prior_params()
    if name == "example6":
        return builtin_example_params()
    raise KeyError(f"unknown built-in parameter set {name!r}")


# ---------------------------------------------------------------------------
# text format


def _fmt(x: Fraction | int) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dumps_params(p: ParameterSet) -> str:
    lines = [
        "[meta]",
        f"label {p.label or '-'}",
        f"d {p.d}",
        f"M {p.M}",
        "",
        "[intervals]",
        "# i t_i beta_i gamma_i   (last row: N+1 t_{N+1})",
    ]
    for i in range(1, p.N + 1):
        lines.append(f"{i} {_fmt(p.t(i))} {p.beta(i)} {p.gamma(i)}")
    lines.append(f"{p.N + 1} {_fmt(p.intervals.t[-1])}")
    lines += ["", "[alpha]"]
    lines += [f"{i} {_fmt(p.alpha(i))}" for i in range(1, p.N + 1)]
    lines += ["", "[delta]"]
    lines += [f"{j} {_fmt(v)}" for j, v in enumerate(p.rb.Delta, start=1)]
    lines += ["", "[phi]"]
    lines += [f"{i} {p.phi(i)}" for i in range(1, p.N + 1)]
    lines += ["", "[w]"]
    lines += [f"{c} {_fmt(v)}" for c, v in sorted(p.derived.caseW.items())]
    return "\n".join(lines) + "\n"


def loads_params(text: str) -> ParameterSet:
    section = None
    meta: dict[str, str] = {}
    rows: dict[str, list[tuple[int, list[str]]]] = {k: [] for k in ("intervals", "alpha", "delta", "phi", "w")}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ParamsFormatError(lineno, f"bad section header {line!r}")
            section = line[1:-1].strip()
            if section != "meta" and section not in rows:
                raise ParamsFormatError(lineno, f"unknown section [{section}]")
            continue
        fields = line.split()
        if section is None:
            raise ParamsFormatError(lineno, "record outside any section")
        if section == "meta":
            if len(fields) != 2:
                raise ParamsFormatError(lineno, "meta records are 'key value'")
            meta[fields[0]] = fields[1]
            continue
        for x in fields[1:]:
            try:
                as_rational(x)
            except (ValueError, ZeroDivisionError):
                raise ParamsFormatError(lineno, f"malformed rational {x!r}") from None
        try:
            idx = int(fields[0])
        except ValueError:
            raise ParamsFormatError(lineno, f"bad index {fields[0]!r}") from None
        rows[section].append((lineno, [fields[0]] + fields[1:]))
        del idx

    try:
        d = int(meta["d"])
        M = int(meta["M"])
    except KeyError as exc:
        raise ParamsFormatError(0, f"missing meta key {exc.args[0]!r}") from None
    label = meta.get("label", "")
    label = "" if label == "-" else label

    t: list[Fraction] = []
    beta: list[int] = []
    gamma: list[int] = []
    ivals = rows["intervals"]
    for pos, (lineno, f) in enumerate(ivals, start=1):
        if int(f[0]) != pos:
            raise ParamsFormatError(lineno, f"interval rows must be numbered consecutively, got {f[0]}")
        last = pos == len(ivals)
        if last:
            if len(f) != 2:
                raise ParamsFormatError(lineno, "final interval row is 'N+1 t_{N+1}'")
        elif len(f) != 4:
            raise ParamsFormatError(lineno, "interval rows are 'i t_i beta_i gamma_i'")
        t.append(as_rational(f[1]))
        if not last:
            beta.append(int(f[2]))
            gamma.append(int(f[3]))

    def column(name: str, conv, n: int | None = None):
        out = []
        for pos, (lineno, f) in enumerate(rows[name], start=1):
            if len(f) != 2:
                raise ParamsFormatError(lineno, f"[{name}] rows are 'index value'")
            if int(f[0]) != pos:
                raise ParamsFormatError(lineno, f"[{name}] rows must be numbered consecutively")
            try:
                out.append(conv(f[1]))
            except ValueError:
                raise ParamsFormatError(lineno, f"bad value {f[1]!r}") from None
        return out

    alpha = column("alpha", as_rational)
    Delta = column("delta", as_rational)
    phi = column("phi", int)
    case_w = {int(f[0]): as_rational(f[1]) for _, f in rows["w"]}
    return make_params(d, t, M, alpha, Delta, phi, beta, gamma, case_w, label)


def save_params(p: ParameterSet, path: str | Path) -> None:
    Path(path).write_text(dumps_params(p))


def load_params(path: str | Path) -> ParameterSet:
    return loads_params(Path(path).read_text())


def resolve(source: str, d: int | None = None, variant: str = "tabulated") -> ParameterSet:
    """A built-in name or a parameter file path."""
    if source in BUILTIN_NAMES:
        p = builtin(source, variant)
    else:
        p = load_params(source)
    if d is not None and p.d != d:
        raise ValueError(f"parameter set {p.label or source!r} is for d={p.d}, not d={d}")
    return p


def iter_types(p: ParameterSet) -> Iterable[int]:
    return range(1, p.N + 1)
