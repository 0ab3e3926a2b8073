"""Exact rational linear programming: two-phase simplex with anti-cycling pricing.

Arithmetic runs on gmpy2.mpq when available (same exact semantics as
Fraction, several times faster); inputs and outputs are Fractions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

log = logging.getLogger("spikit.lp")

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_SENSES = ("<=", "=", ">=")
_BLAND_AFTER = 8


def _to_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    return Fraction(int(q.numerator), int(q.denominator))


class LPError(ValueError):
    """Malformed linear program."""


@dataclass
class LinearProgram:
    """Maximization LP over named variables.

    Variables default to ``lower=0``; pass ``lower=None`` for a free variable.
    ``objectives`` holds one objective, or two for lexicographic solving.
    """

    lower: dict[Hashable, Fraction | None] = field(default_factory=dict)
    constraints: list[tuple[dict, str, Fraction]] = field(default_factory=list)
    objectives: list[dict] = field(default_factory=list)

    def var(self, name: Hashable, lower=0) -> Hashable:
        if name in self.lower:
            raise LPError(f"duplicate variable {name!r}")
        self.lower[name] = None if lower is None else Fraction(lower)
        return name

    def add(self, coeffs: Mapping[Hashable, object], sense: str, rhs) -> None:
        if sense not in _SENSES:
            raise LPError(f"unknown constraint sense {sense!r}")
        for k in coeffs:
            if k not in self.lower:
                raise LPError(f"unknown variable {k!r}")
        self.constraints.append(({k: Fraction(v) for k, v in coeffs.items() if v}, sense, Fraction(rhs)))

    def maximize(self, *objectives: Mapping[Hashable, object]) -> None:
        for obj in objectives:
            for k in obj:
                if k not in self.lower:
                    raise LPError(f"unknown variable {k!r} in objective")
        self.objectives = [{k: Fraction(v) for k, v in obj.items() if v} for obj in objectives]

    def check(self, x: Mapping[Hashable, Fraction]) -> bool:
        """Exact feasibility re-check of an assignment."""
        for name, lo in self.lower.items():
            if lo is not None and x[name] < lo:
                return False
        for coeffs, sense, rhs in self.constraints:
            lhs = sum((c * x[k] for k, c in coeffs.items()), Fraction(0))
            if (sense == "<=" and lhs > rhs) or (sense == ">=" and lhs < rhs) or (sense == "=" and lhs != rhs):
                return False
        return True


@dataclass
class LPResult:
    status: str
    value: Fraction | None = None
    x: dict = field(default_factory=dict)
    values: tuple[Fraction, ...] = ()

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def evaluate(obj: Mapping[Hashable, Fraction], x: Mapping[Hashable, Fraction]) -> Fraction:
    return sum((c * x[k] for k, c in obj.items()), Fraction(0))


class _Tableau:
    def __init__(self, rows, rhs, basis, ncols):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols

    def pivot(self, p: int, q: int, red: list, val: list) -> None:
        prow = self.rows[p]
        inv = 1 / prow[q]
        for j in range(self.ncols):
            if prow[j]:
                prow[j] *= inv
        self.rhs[p] *= inv
        nz = [j for j in range(self.ncols) if prow[j]]
        rp = self.rhs[p]
        for i, row in enumerate(self.rows):
            if i == p:
                continue
            f = row[q]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
                self.rhs[i] -= f * rp
        f = red[q]
        if f:
            for j in nz:
                red[j] -= f * prow[j]
            val[0] += f * rp
        self.basis[p] = q

    def dump(self, red, tag: str) -> None:
        if not log.isEnabledFor(logging.DEBUG):
            return
        log.debug("tableau %s basis=%s", tag, self.basis)
        for row, r in zip(self.rows, self.rhs):
            log.debug("  %s | %s", " ".join(str(x) for x in row), r)
        log.debug("  red %s", " ".join(str(x) for x in red))

    def run(self, red: list, val: list, allowed) -> str:
        """Maximize; ``red`` holds reduced costs, ``val`` the objective value.

        Entering columns follow the largest reduced cost, except after a few
        consecutive degenerate pivots, where Bland's rule takes over until the
        objective moves again. Each strict improvement rules out revisiting a
        basis, and Bland's rule alone cannot cycle, so the loop terminates.
        """
        steps = 0
        stalled = 0
        while True:
            if stalled >= _BLAND_AFTER:
                q = next((j for j in range(self.ncols) if allowed[j] and red[j] > 0), None)
            else:
                q, top = None, 0
                for j in range(self.ncols):
                    if allowed[j] and red[j] > top:
                        q, top = j, red[j]
            if q is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[q]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if best is None or ratio < best[0] or (ratio == best[0] and self.basis[i] < best[2]):
                        best = (ratio, i, self.basis[i])
            if best is None:
                return UNBOUNDED
            stalled = stalled + 1 if best[0] == 0 else 0
            self.pivot(best[1], q, red, val)
            steps += 1
            self.dump(red, f"step {steps}")


def _standardize(p: LinearProgram):
    """Columns for x >= 0 form. Returns (column map, constant shifts)."""
    cols: dict[Hashable, tuple[int, int | None]] = {}
    n = 0
    for name, lo in p.lower.items():
        if lo is None:
            cols[name] = (n, n + 1)
            n += 2
        else:
            cols[name] = (n, None)
            n += 1
    return cols, n


def _expand(coeffs, cols, lower):
    """Row in column space plus constant offset from lower bounds."""
    out: dict[int, object] = {}
    const = Fraction(0)
    for k, c in coeffs.items():
        pos, neg = cols[k]
        out[pos] = out.get(pos, 0) + c
        if neg is not None:
            out[neg] = out.get(neg, 0) - c
        elif lower[k]:
            const += c * lower[k]
    return out, const


def _solve(p: LinearProgram, obj: Mapping[Hashable, Fraction]) -> LPResult:
    cols, nvar = _standardize(p)
    rows_spec = []
    for coeffs, sense, rhs in p.constraints:
        row, const = _expand(coeffs, cols, p.lower)
        b = rhs - const
        if b < 0:
            row = {j: -c for j, c in row.items()}
            b = -b
            sense = {"<=": ">=", ">=": "<=", "=": "="}[sense]
        rows_spec.append((row, sense, b))

    nslack = sum(1 for _, s, _ in rows_spec if s != "=")
    nart = sum(1 for _, s, _ in rows_spec if s != "<=")
    ncols = nvar + nslack + nart
    zero = _Q(0)
    rows, rhs, basis = [], [], []
    artificial = [False] * ncols
    s_at = nvar
    a_at = nvar + nslack
    for row, sense, b in rows_spec:
        r = [zero] * ncols
        for j, c in row.items():
            r[j] = _Q(c)
        if sense == "<=":
            r[s_at] = _Q(1)
            basis.append(s_at)
            s_at += 1
        else:
            if sense == ">=":
                r[s_at] = _Q(-1)
                s_at += 1
            r[a_at] = _Q(1)
            artificial[a_at] = True
            basis.append(a_at)
            a_at += 1
        rows.append(r)
        rhs.append(_Q(b))
    t = _Tableau(rows, rhs, basis, ncols)

    if nart:
        red = [zero] * ncols
        val = [zero]
        for i, bcol in enumerate(basis):
            if artificial[bcol]:
                for j in range(ncols):
                    if rows[i][j]:
                        red[j] += rows[i][j]
                val[0] -= rhs[i]
        for j in range(ncols):
            if artificial[j]:
                red[j] = zero
        t.dump(red, "phase 1 start")
        t.run(red, val, [True] * ncols)
        if val[0] < 0:
            return LPResult(INFEASIBLE)
        # drive remaining zero-level artificials out of the basis
        i = 0
        while i < len(t.rows):
            if artificial[t.basis[i]]:
                q = next((j for j in range(ncols) if not artificial[j] and t.rows[i][j]), None)
                if q is None:
                    del t.rows[i], t.rhs[i], t.basis[i]
                    continue
                t.pivot(i, q, [zero] * ncols, [zero])
            i += 1

    allowed = [not a for a in artificial]
    cost = [zero] * ncols
    exp, const = _expand(obj, cols, p.lower)
    for j, c in exp.items():
        cost[j] = _Q(c)
    red = list(cost)
    val = [zero]
    for i, bcol in enumerate(t.basis):
        cb = cost[bcol]
        if cb:
            for j in range(ncols):
                if t.rows[i][j]:
                    red[j] -= cb * t.rows[i][j]
            val[0] += cb * t.rhs[i]
    t.dump(red, "phase 2 start")
    status = t.run(red, val, allowed)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)

    colval = [Fraction(0)] * ncols
    for i, bcol in enumerate(t.basis):
        colval[bcol] = _to_fraction(t.rhs[i])
    x = {}
    for name, (pos, neg) in cols.items():
        if neg is not None:
            x[name] = colval[pos] - colval[neg]
        else:
            x[name] = colval[pos] + (p.lower[name] or 0)
    if not p.check(x):  # pragma: no cover - would indicate an engine bug
        raise ArithmeticError("simplex returned an infeasible point")
    return LPResult(OPTIMAL, evaluate(obj, x), x)


def solve(p: LinearProgram) -> LPResult:
    """Solve with the first objective (zero objective if none given)."""
    obj = p.objectives[0] if p.objectives else {}
    res = _solve(p, obj)
    if res.optimal:
        res.values = (res.value,)
    return res


def solve_lex(p: LinearProgram) -> LPResult:
    """Lexicographic maximization: pin the primary optimum, then maximize the secondary."""
    if len(p.objectives) != 2:
        raise LPError("solve_lex needs exactly two objectives")
    primary, secondary = p.objectives
    first = _solve(p, primary)
    if not first.optimal:
        return first
    pinned = LinearProgram(dict(p.lower), list(p.constraints), [])
    if primary:
        pinned.add(primary, ">=", first.value)
    second = _solve(pinned, secondary)
    if not second.optimal:
        return second
    second.values = (evaluate(primary, second.x), second.value)
    second.value = second.values[0]
    return second
