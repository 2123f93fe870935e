"""Certified per-case bounds on the weight of a single bin.

For each analysis case we maximize the total weight that one bin can hold:

    maximize   sum_i w_i x_i + F * (1 - sum_i x_i * low_i^d)
    subject to sum_i x_i * low_i^d <= 1
               sum_i floor(low_i * (u + 1))^d * x_i <= u^d      u = 1..220
               (d = 2) two aggregated cuts on the large types
               x integer, x >= 0

where ``low_i`` is the open lower end of type ``i`` and ``F`` is the
small-item weight factor.  The remaining volume is credited to small items.

The solver is a best-first branch and bound that plunges into one child
after each branching.  Variables are chosen by pseudo-costs, initialised by
solving both child relaxations for a few candidates.  Each node's LP
relaxation is solved in floating point, but the node bound is recomputed from the LP dual
vector through weak duality, which holds for *any* nonnegative multipliers.
That keeps every pruning decision sound even if the LP solve is inexact.
Incumbents are checked and evaluated in exact rational arithmetic.
"""

from __future__ import annotations

import heapq
import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import highspy

from .params import ParameterSet, builtin_eh_params
from .weights import CASES, small_factor, type_weights

__all__ = [
    "IpInstance",
    "BoundResult",
    "GRID_ROWS",
    "build_instance",
    "restrict",
    "solve",
    "brute_force",
    "overall_bound",
    "validate_extra_cuts",
    "aggregate_groups",
]

GRID_ROWS = 220
# safety margin added to every float-derived node bound
BOUND_MARGIN = 1e-9
# pseudo-cost observations per direction before a variable's history is trusted
RELIABILITY = 2
STRONG_CANDIDATES = 8


@dataclass(frozen=True)
class IpInstance:
    d: int
    case: int
    objective: tuple[Fraction, ...]  # w_i - F * low_i^d
    constant: Fraction  # F
    rows: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    row_names: tuple[str, ...]
    types: tuple[int, ...]  # type index of each variable

    @property
    def n(self) -> int:
        return len(self.objective)

    def value(self, x: Sequence[int]) -> Fraction:
        return self.constant + sum((c * xi for c, xi in zip(self.objective, x) if xi), Fraction(0))

    def row_activity(self, r: int, x: Sequence[int]) -> Fraction:
        coeffs = self.rows[r][0]
        return sum((a * xi for a, xi in zip(coeffs, x) if xi), Fraction(0))

    def violated_rows(self, x: Sequence[int]) -> list[str]:
        if any(xi < 0 for xi in x):
            return ["nonnegativity"]
        return [
            self.row_names[r]
            for r, (_, rhs) in enumerate(self.rows)
            if self.row_activity(r, x) > rhs
        ]

    def is_feasible(self, x: Sequence[int]) -> bool:
        return not self.violated_rows(x)

    def upper_bounds(self) -> list[int]:
        """Largest value of each variable alone, over all rows."""
        out = []
        for j in range(self.n):
            best = None
            for coeffs, rhs in self.rows:
                a = coeffs[j]
                if a > 0:
                    v = math.floor(rhs / a)
                    best = v if best is None else min(best, v)
            if best is None:
                raise ValueError(f"variable for type {self.types[j]} is unbounded")
            out.append(best)
        return out


@dataclass
class BoundResult:
    case: int
    upper_bound: float
    incumbent: tuple[int, ...]  # per variable of the instance
    incumbent_value: Fraction
    nodes: int
    seconds: float
    budget_exhausted: bool = False
    types: tuple[int, ...] = field(default=(), repr=False)

    @property
    def gap(self) -> float:
        return self.upper_bound - float(self.incumbent_value)

    def incumbent_by_type(self) -> dict[int, int]:
        return {t: v for t, v in zip(self.types, self.incumbent) if v}


def extra_cut_rows(N: int) -> list[tuple[str, list[int], int]]:
    """The two aggregated square-packing cuts, as dense integer rows."""
    first = [0] * N
    for i in range(1, 17):
        first[i - 1] = 21
    for i in range(17, 29):
        first[i - 1] = 11
    for i in range(29, 39):
        first[i - 1] = 1
    second = [0] * N
    for i in range(1, 17):
        second[i - 1] = 80
    for i in range(17, 29):
        second[i - 1] = 30
    for i in range(29, 38):
        second[i - 1] = 10
    second[37] = 1
    return [("cut57", first, 57), ("cut190", second, 190)]


def build_instance(
    case: int,
    d: int | None = None,
    p: ParameterSet | None = None,
    extra_cuts: bool | None = None,
) -> IpInstance:
    if p is None:
        if d is None:
            raise ValueError("need a dimension or a parameter set")
        p = builtin_eh_params(d)
    d = p.d
    if case not in CASES:
        raise ValueError(f"case must be in 1..17, got {case}")
    if extra_cuts is None:
        extra_cuts = d == 2
    N = p.N
    F = small_factor(p)
    low = [p.intervals.t[i] for i in range(1, N + 1)]
    vol = tuple(x**d for x in low)
    w = type_weights(p, case)
    objective = tuple(w[i] - F * vol[i] for i in range(N))
    rows = [(vol, Fraction(1))]
    names = ["volume"]
    for u in range(1, GRID_ROWS + 1):
        rows.append((tuple(Fraction(math.floor(x * (u + 1)) ** d) for x in low), Fraction(u**d)))
        names.append(f"grid{u}")
    if extra_cuts:
        if d != 2 or N < 38:
            raise ValueError("the aggregated cuts are defined for the 151-type square set")
        for name, coeffs, rhs in extra_cut_rows(N):
            rows.append((tuple(Fraction(a) for a in coeffs), Fraction(rhs)))
            names.append(name)
    return IpInstance(
        d=d,
        case=case,
        objective=objective,
        constant=F,
        rows=tuple(rows),
        row_names=tuple(names),
        types=tuple(range(1, N + 1)),
    )


def restrict(inst: IpInstance, types: Iterable[int]) -> IpInstance:
    """The same program with every variable outside ``types`` fixed to 0."""
    keep = sorted(set(types))
    pos = [inst.types.index(t) for t in keep]
    rows = tuple((tuple(c[j] for j in pos), rhs) for c, rhs in inst.rows)
    return IpInstance(
        d=inst.d,
        case=inst.case,
        objective=tuple(inst.objective[j] for j in pos),
        constant=inst.constant,
        rows=rows,
        row_names=inst.row_names,
        types=tuple(keep),
    )


# ---------------------------------------------------------------------------
# presolve


def _prune_columns(inst: IpInstance) -> list[int]:
    """Variables that can be nonzero in some optimal solution.

    Every constraint coefficient is nonnegative, so a variable with a
    nonpositive objective coefficient can be lowered to zero without loss,
    and a variable that costs at least as much in every row as another one
    while earning no more can be traded for that one.
    """
    cand = [j for j in range(inst.n) if inst.objective[j] > 0]
    cols = {j: tuple(c[j] for c, _ in inst.rows) for j in cand}
    keep = []
    for b in cand:
        cb, colb = inst.objective[b], cols[b]
        dominated = False
        for a in cand:
            if a == b or inst.objective[a] < cb:
                continue
            cola = cols[a]
            if any(x > y for x, y in zip(cola, colb)):
                continue
            if inst.objective[a] > cb or cola != colb or a < b:
                dominated = True
                break
        if not dominated:
            keep.append(b)
    return keep


# ---------------------------------------------------------------------------
# branch and bound


def _scaled_row(coeffs: Sequence[Fraction], rhs: Fraction) -> tuple[list[int], int]:
    """Integer multiples of a rational row with the same solution set."""
    den = 1
    for v in list(coeffs) + [rhs]:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [int(v * den) for v in coeffs], int(rhs * den)


class _Relaxation:
    """Warm-started LP relaxation over a fixed matrix with changing bounds."""

    def __init__(self, c: np.ndarray, A: np.ndarray, b: np.ndarray):
        n = len(c)
        self.n = n
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.setOptionValue("presolve", "off")
        lp = highspy.HighsLp()
        lp.num_col_ = n
        lp.num_row_ = A.shape[0]
        lp.col_cost_ = -c  # minimize the negated objective
        lp.col_lower_ = np.zeros(n)
        lp.col_upper_ = np.zeros(n)
        lp.row_lower_ = np.full(A.shape[0], -highspy.kHighsInf)
        lp.row_upper_ = b
        csc = [(np.nonzero(A[:, j])[0], A[np.nonzero(A[:, j])[0], j]) for j in range(n)]
        starts, index, value = [0], [], []
        for rows, vals in csc:
            index.extend(rows.tolist())
            value.extend(vals.tolist())
            starts.append(len(index))
        lp.a_matrix_.format_ = highspy.MatrixFormat.kColwise
        lp.a_matrix_.start_ = np.array(starts, dtype=np.int32)
        lp.a_matrix_.index_ = np.array(index, dtype=np.int32)
        lp.a_matrix_.value_ = np.array(value, dtype=float)
        h.passModel(lp)
        self.h = h
        self.idx = np.arange(n, dtype=np.int32)

    def solve(self, lb: Sequence[int], ub: Sequence[int]):
        h = self.h
        h.changeColsBounds(self.n, self.idx, np.asarray(lb, float), np.asarray(ub, float))
        h.run()
        if h.getModelStatus() != highspy.HighsModelStatus.kOptimal:
            return None
        sol = h.getSolution()
        return np.asarray(sol.col_value), np.maximum(-np.asarray(sol.row_dual), 0.0)


class _Search:
    def __init__(self, inst: IpInstance, cols: list[int], tol: float):
        self.inst = inst
        self.tol = tol
        n = len(cols)
        self.n = n
        self.c_exact = [inst.objective[j] for j in cols]
        self.c = np.array([float(v) for v in self.c_exact])
        # drop rows that no remaining variable touches
        rows = [(tuple(coeffs[j] for j in cols), rhs) for coeffs, rhs in inst.rows]
        rows = [(cf, rhs) for cf, rhs in rows if any(cf)]
        self.A = np.array([[float(a) for a in cf] for cf, _ in rows]).reshape(len(rows), n)
        self.b = np.array([float(rhs) for _, rhs in rows])
        # exact feasibility: rows that are integral in floating point are checked
        # with int64 arithmetic, the rest with scaled Python integers
        int_rows = [r for r, (cf, rhs) in enumerate(rows) if all(v.denominator == 1 for v in cf) and rhs.denominator == 1]
        self.int_A = np.array([[int(v) for v in rows[r][0]] for r in int_rows], dtype=np.int64).reshape(len(int_rows), n)
        self.int_b = np.array([int(rows[r][1]) for r in int_rows], dtype=np.int64)
        self.big_rows = [_scaled_row(rows[r][0], rows[r][1]) for r in range(len(rows)) if r not in set(int_rows)]
        den = 1
        for v in self.c_exact:
            den = den * v.denominator // math.gcd(den, v.denominator)
        self.obj_den = den
        self.obj_num = [int(v * den) for v in self.c_exact]
        full_ub = inst.upper_bounds()
        self.ub0 = [full_ub[j] for j in cols]
        self.best_x = [0] * n
        self.best_val = inst.constant
        self.best_float = float(self.best_val)
        self.max_pruned = -math.inf
        self.nodes = 0
        self.lp = _Relaxation(self.c, self.A, self.b) if n else None

    # exact checks ----------------------------------------------------------

    def feasible(self, x: Sequence[int]) -> bool:
        xv = np.asarray(x, dtype=np.int64)
        if len(self.int_b) and np.any(self.int_A @ xv > self.int_b):
            return False
        xs = [int(v) for v in x]
        for coeffs, rhs in self.big_rows:
            if sum(a * xi for a, xi in zip(coeffs, xs) if xi) > rhs:
                return False
        return True

    def value(self, x: Sequence[int]) -> Fraction:
        num = sum(a * int(xi) for a, xi in zip(self.obj_num, x) if xi)
        return self.inst.constant + Fraction(num, self.obj_den)

    def offer(self, x: Sequence[int]) -> None:
        approx = float(self.c @ np.asarray(x, float)) + float(self.inst.constant)
        if approx < self.best_float - 1e-9 or not self.feasible(x):
            return
        v = self.value(x)
        if v > self.best_val:
            self.best_val = v
            self.best_float = float(v)
            self.best_x = [int(v) for v in x]

    def greedy_fill(self, x: Sequence[int], ub: Sequence[int], prices: np.ndarray | None = None) -> list[int]:
        """Raise variables as far as the float slack allows.

        Variables are taken in order of objective per unit of priced resource
        use, or by plain objective when no prices are given.
        """
        x = [int(v) for v in x]
        slack = self.b - self.A @ np.asarray(x, float)
        if prices is None:
            order = np.argsort(-self.c, kind="stable")
        else:
            cost = prices @ self.A + 1e-12
            order = np.argsort(-self.c / cost, kind="stable")
        for j in order:
            if self.c[j] <= 0:
                continue
            room = int(ub[j]) - x[j]
            if room <= 0:
                continue
            col = self.A[:, j]
            pos = col > 0
            step = min(room, int(math.floor(float(np.min(slack[pos] / col[pos])) + 1e-9)))
            if step > 0:
                x[j] += step
                slack -= col * step
        # the float slack may be off by rounding; back off until exact
        while not self.feasible(x):
            j = max((k for k in range(self.n) if x[k] > 0), key=lambda k: self.A[0, k])
            x[j] -= 1
        return x

    # LP --------------------------------------------------------------------

    def relax(self, lb: Sequence[int], ub: Sequence[int]):
        """Return (sound bound, lp point, reduced costs), or None if infeasible."""
        # with nonnegative coefficients the box is feasible iff its lower corner is
        if not self.feasible(lb):
            return None
        lbv = np.asarray(lb, float)
        ubv = np.asarray(ub, float)
        out = self.lp.solve(lb, ub)
        if out is None:
            # any nonnegative multipliers give a valid bound; use none
            y = np.zeros(len(self.b))
            xlp = lbv
        else:
            xlp, y = out
        reduced = self.c - y @ self.A
        bound = float(y @ self.b) + float(np.maximum(reduced * lbv, reduced * ubv).sum())
        bound += float(self.inst.constant)
        bound += BOUND_MARGIN * (1.0 + abs(bound))
        return bound, xlp, reduced, y

    def tighten(self, lb: np.ndarray, ub: np.ndarray, bound: float, reduced: np.ndarray) -> None:
        """Shrink the box in place using the reduced costs behind ``bound``.

        The node bound is linear in each variable's range: moving x_j one unit
        away from its bound-maximizing end lowers it by ``|reduced_j|``.  Values
        that would push it below the incumbent cannot improve on it.
        """
        slack = bound - (self.best_float + self.tol)
        mag = np.abs(reduced)
        live = mag > 1e-12
        steps = np.zeros(self.n, dtype=np.int64)
        steps[live] = np.floor(np.minimum(slack / mag[live] + 1e-9, 1e12)).astype(np.int64)
        neg = live & (reduced < 0)
        pos = live & (reduced > 0)
        ub[neg] = np.minimum(ub[neg], lb[neg] + steps[neg])
        lb[pos] = np.maximum(lb[pos], ub[pos] - steps[pos])

    # branching -------------------------------------------------------------

    def record(self, info, parent_bound: float, bound: float) -> None:
        if info is None or not math.isfinite(parent_bound):
            return
        j, up, dist = info
        self.pc_sum[up, j] += max(parent_bound - bound, 0.0) / dist
        self.pc_cnt[up, j] += 1

    def choose(self, lb: np.ndarray, ub: np.ndarray, xlp: np.ndarray, bound: float):
        """Pick a branching variable by pseudo-costs.

        Variables without enough history are scored by solving both child
        relaxations (strong branching), which also seeds their history.
        """
        f = xlp - np.floor(xlp)
        cand = np.nonzero((f > 1e-6) & (f < 1 - 1e-6))[0]
        if len(cand) == 0:
            return None
        avg = np.divide(self.pc_sum, self.pc_cnt, out=np.full_like(self.pc_sum, np.nan), where=self.pc_cnt > 0)
        known = np.nanmean(avg) if np.any(self.pc_cnt > 0) else 1.0
        avg = np.where(np.isnan(avg), known, avg)
        unreliable = [j for j in cand if min(self.pc_cnt[0, j], self.pc_cnt[1, j]) < RELIABILITY]
        unreliable.sort(key=lambda j: -min(f[j], 1 - f[j]))
        best_j, best_score = None, -1.0
        for j in unreliable[:STRONG_CANDIDATES]:
            gains = []
            for up in (0, 1):
                clb, cub = lb.copy(), ub.copy()
                if up:
                    clb[j] = math.floor(xlp[j]) + 1
                else:
                    cub[j] = math.floor(xlp[j])
                out = self.relax(clb, cub) if np.all(clb <= cub) else None
                child = -math.inf if out is None else min(out[0], bound)
                dist = (1 - f[j]) if up else f[j]
                self.record((j, up, dist), bound, child if math.isfinite(child) else bound - 1.0)
                gains.append(bound - child if math.isfinite(child) else math.inf)
            score = max(min(gains[0], 1e6), 1e-12) * max(min(gains[1], 1e6), 1e-12)
            if score > best_score:
                best_j, best_score = j, score
        for j in cand:
            if j in unreliable[:STRONG_CANDIDATES]:
                continue
            score = max(avg[0, j] * f[j], 1e-12) * max(avg[1, j] * (1 - f[j]), 1e-12)
            if score > best_score:
                best_j, best_score = int(j), score
        return int(best_j)

    def run(self, node_budget: int | None, time_budget: float | None, start: float) -> bool:
        """Best-bound search with plunging; return True if a budget stopped it."""
        self.offer(self.greedy_fill([0] * self.n, self.ub0))
        self.pc_sum = np.zeros((2, self.n))
        self.pc_cnt = np.zeros((2, self.n))
        root = (np.zeros(self.n, dtype=np.int64), np.array(self.ub0, dtype=np.int64))
        heap: list = []
        tick = itertools.count()
        current = (root[0], root[1], math.inf, None)
        while True:
            if current is None:
                if not heap:
                    return False
                neg, _, lb, ub, info = heapq.heappop(heap)
                current = (lb, ub, -neg, info)
            lb, ub, parent_bound, info = current
            current = None
            if parent_bound <= self.best_float + self.tol:
                # everything left in the heap is no better
                self.max_pruned = max(self.max_pruned, parent_bound)
                if heap and -heap[0][0] <= self.best_float + self.tol:
                    self.max_pruned = max(self.max_pruned, -heap[0][0])
                    heap.clear()
                continue
            if (node_budget is not None and self.nodes >= node_budget) or (
                time_budget is not None and time.perf_counter() - start > time_budget
            ):
                self.max_pruned = max(self.max_pruned, parent_bound)
                if heap:
                    self.max_pruned = max(self.max_pruned, -heap[0][0])
                return True
            self.nodes += 1
            out = self.relax(lb, ub)
            if out is None:
                continue
            bound, xlp, reduced, prices = out
            bound = min(bound, parent_bound)
            self.record(info, parent_bound, bound)
            if bound <= self.best_float + self.tol:
                self.max_pruned = max(self.max_pruned, bound)
                continue
            down = np.clip(np.floor(xlp + 1e-9), lb, ub).astype(np.int64)
            self.offer(self.greedy_fill(down, ub, prices))
            if bound <= self.best_float + self.tol:
                self.max_pruned = max(self.max_pruned, bound)
                continue
            lb, ub = lb.copy(), ub.copy()
            self.tighten(lb, ub, bound, reduced)
            xlp = np.clip(xlp, lb, ub)
            j = self.choose(lb, ub, xlp, bound)
            if j is None:
                rounded = np.clip(np.round(xlp), lb, ub).astype(np.int64)
                self.offer(rounded)
                if bound <= self.best_float + self.tol:
                    self.max_pruned = max(self.max_pruned, bound)
                    continue
                # numerically integral but not certified; split the widest range
                widths = ub - lb
                j = int(np.argmax(widths))
                if widths[j] == 0:
                    self.max_pruned = max(self.max_pruned, bound)
                    continue
                v = (lb[j] + ub[j]) / 2
            else:
                v = float(xlp[j])
            cut = int(math.floor(v))
            lo_ub = ub.copy()
            lo_ub[j] = min(ub[j], cut)
            hi_lb = lb.copy()
            hi_lb[j] = max(lb[j], cut + 1)
            frac = v - cut
            children = [(lb, lo_ub, (j, 0, max(frac, 1e-6))), (hi_lb, ub, (j, 1, max(1 - frac, 1e-6)))]
            # plunge into the child nearer to the relaxation value
            if frac >= 0.5:
                children.reverse()
            for k, (clb, cub, cinfo) in enumerate(children):
                if not np.all(clb <= cub):
                    continue
                if k == 0:
                    current = (clb, cub, bound, cinfo)
                else:
                    heapq.heappush(heap, (-bound, next(tick), clb, cub, cinfo))


def solve(
    inst: IpInstance,
    tol: float = 1e-7,
    node_budget: int | None = None,
    time_budget: float | None = None,
) -> BoundResult:
    """Maximize ``inst`` to within ``tol`` and return a certified upper bound."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    start = time.perf_counter()
    cols = _prune_columns(inst)
    search = _Search(inst, cols, tol)
    exhausted = False
    if cols:
        exhausted = search.run(node_budget, time_budget, start)
    x = [0] * inst.n
    for j, v in zip(cols, search.best_x):
        x[j] = v
    upper = max(search.best_float, search.max_pruned)
    if math.isinf(upper):
        upper = search.best_float
    return BoundResult(
        case=inst.case,
        upper_bound=upper,
        incumbent=tuple(x),
        incumbent_value=search.best_val,
        nodes=search.nodes,
        seconds=time.perf_counter() - start,
        budget_exhausted=exhausted,
        types=inst.types,
    )


def brute_force(inst: IpInstance) -> tuple[Fraction, tuple[int, ...]]:
    """Exact optimum by enumerating every feasible integer vector."""
    ub = inst.upper_bounds()
    rows = inst.rows
    n = inst.n
    best = [inst.constant, (0,) * n]
    x = [0] * n
    used = [Fraction(0)] * len(rows)

    def rec(j: int, val: Fraction) -> None:
        if j == n:
            if val > best[0]:
                best[0] = val
                best[1] = tuple(x)
            return
        k = 0
        while True:
            rec(j + 1, val + k * inst.objective[j])
            if k == ub[j]:
                break
            ok = True
            for r, (cf, rhs) in enumerate(rows):
                if used[r] + cf[j] > rhs:
                    ok = False
                    break
            if not ok:
                break
            for r, (cf, _) in enumerate(rows):
                used[r] += cf[j]
            k += 1
            x[j] = k
        for r, (cf, _) in enumerate(rows):
            used[r] -= cf[j] * k
        x[j] = 0

    rec(0, inst.constant)
    return best[0], best[1]


def overall_bound(
    d: int,
    tol: float = 1e-7,
    cases: Iterable[int] = CASES,
    p: ParameterSet | None = None,
    node_budget: int | None = None,
) -> tuple[float, dict[int, BoundResult]]:
    results = {}
    for c in cases:
        results[c] = solve(build_instance(c, d=d, p=p), tol=tol, node_budget=node_budget)
    return max(r.upper_bound for r in results.values()), results


# ---------------------------------------------------------------------------
# validity of the aggregated square cuts


def aggregate_groups(p: ParameterSet, rows_used: int = 4) -> list[tuple[int, int]]:
    """Split types 1..38 into maximal runs with identical coefficients
    on the first ``rows_used`` grid rows and on both aggregated cuts."""
    inst = build_instance(1, p=p, extra_cuts=True)
    grid = [inst.rows[u][0] for u in range(1, rows_used + 1)] + [inst.rows[-2][0], inst.rows[-1][0]]
    groups = []
    start = 1
    for i in range(2, 40):
        if i == 39 or any(r[i - 1] != r[start - 1] for r in grid):
            groups.append((start, i - 1))
            start = i
    return groups


def _profile_excluded(G16: int, G28: int, H37: int, H38: int) -> bool:
    """Profiles that the cut-validity argument rules out geometrically."""
    if G16 != 1 or G28 != 3:
        return False
    G38 = H37 + H38
    return G38 >= 4 or H37 >= 3 or (H37 == 2 and H38 >= 1)


@dataclass
class CutReport:
    profiles_checked: int
    violations_excluded: int
    counterexamples: list[tuple[int, ...]]
    groups: list[tuple[int, int]]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def validate_extra_cuts(p: ParameterSet | None = None) -> CutReport:
    """Enumerate every group profile allowed by the first four grid rows.

    Within each group the four grid rows and both cuts have identical
    coefficients, so feasibility and cut values depend only on group totals.
    Any profile satisfying the grid rows but violating a cut must be one the
    geometric argument excludes.
    """
    if p is None:
        p = builtin_eh_params(2)
    if p.d != 2:
        raise ValueError("the aggregated cuts are square-packing cuts")
    inst = build_instance(1, p=p, extra_cuts=True)
    groups = aggregate_groups(p)
    reps = [g[0] - 1 for g in groups]
    grid = [(inst.rows[u][0], inst.rows[u][1]) for u in range(1, 5)]
    cut57, cut190 = inst.rows[-2], inst.rows[-1]
    limits = []
    for r in reps:
        lim = min(math.floor(rhs / cf[r]) for cf, rhs in grid if cf[r] > 0)
        limits.append(lim)
    checked = excluded = 0
    bad = []
    for counts in itertools.product(*(range(m + 1) for m in limits)):
        if any(sum(cf[r] * k for r, k in zip(reps, counts)) > rhs for cf, rhs in grid):
            continue
        checked += 1
        v57 = sum(cut57[0][r] * k for r, k in zip(reps, counts))
        v190 = sum(cut190[0][r] * k for r, k in zip(reps, counts))
        if v57 <= 57 and v190 <= 190:
            continue
        G16 = sum(k for (lo, hi), k in zip(groups, counts) if hi <= 16)
        G28 = sum(k for (lo, hi), k in zip(groups, counts) if 17 <= lo and hi <= 28)
        H37 = sum(k for (lo, hi), k in zip(groups, counts) if 29 <= lo and hi <= 37)
        H38 = sum(k for (lo, hi), k in zip(groups, counts) if lo == 38)
        if _profile_excluded(G16, G28, H37, H38):
            excluded += 1
        else:
            bad.append(counts)
    return CutReport(checked, excluded, bad, groups)
