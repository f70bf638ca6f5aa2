"""Feasibility LP solver and the fair-assignment LP builder.

The solver is a dense bounded-variable primal simplex, phase 1 only (the
problems here carry a dummy zero objective).  Pricing takes the steepest
reduced cost, falling back to Bland's rule after a run of degenerate pivots,
which keeps the pivot sequence deterministic and cycle-free.  Artificial
variables are added only for rows the starting point violates, so callers
that pass a good starting corner (e.g. nearest-center assignments) pay for
few pivots.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import FairKCError, GFBounds, Instance

FEAS_TOL = 1e-7
PIV_TOL = 1e-9


class NumericFailure(FairKCError):
    """The simplex exceeded its iteration cap; reduce the instance."""


class EmptyRow(FairKCError):
    """Some point has no admissible center within the given radius."""


@dataclass(frozen=True)
class Constraint:
    terms: tuple  # ((var, coef), ...), sparse
    rel: str      # one of '<=', '=', '>='
    rhs: float

    def __post_init__(self):
        if self.rel not in ("<=", "=", ">="):
            raise ValueError(f"bad relation {self.rel!r}")
        if not self.terms:
            raise ValueError("constraint references no variable")
        for _, c in self.terms:
            if not np.isfinite(c):
                raise ValueError("non-finite coefficient")
        if not np.isfinite(self.rhs):
            raise ValueError("non-finite right-hand side")


@dataclass(frozen=True)
class LinearProgram:
    num_vars: int
    constraints: tuple
    var_bounds: tuple  # ((lo, hi), ...) with [lo, hi] inside [0, 1]

    def __post_init__(self):
        if len(self.var_bounds) != self.num_vars:
            raise ValueError("need one bound pair per variable")
        for lo, hi in self.var_bounds:
            if not (-1e-12 <= lo <= hi <= 1.0 + 1e-12):
                raise ValueError("variable bounds must lie inside [0, 1]")
        for con in self.constraints:
            for v, _ in con.terms:
                if not 0 <= v < self.num_vars:
                    raise ValueError("constraint references unknown variable")


_LO, _HI, _BASIC = 0, 1, 2


def solve_feasibility(
    lp: LinearProgram, start_at_upper: Optional[Iterable[int]] = None
) -> Optional[np.ndarray]:
    """Find a point satisfying every constraint within 1e-7, or None.

    start_at_upper optionally lists variables whose initial nonbasic value is
    the upper bound instead of the lower one; it changes only the pivot path,
    never the feasible/infeasible verdict.  Deterministic for fixed input.
    """
    n = lp.num_vars
    m = len(lp.constraints)
    if m == 0:
        return np.asarray([lo for lo, _ in lp.var_bounds])

    # Normalize rows to '<=' or '='.
    A = np.zeros((m, n))
    b = np.zeros(m)
    is_eq = np.zeros(m, dtype=bool)
    for i, con in enumerate(lp.constraints):
        sign = -1.0 if con.rel == ">=" else 1.0
        for v, c in con.terms:
            A[i, v] += sign * c
        b[i] = sign * con.rhs
        is_eq[i] = con.rel == "="

    lo = np.asarray([x[0] for x in lp.var_bounds])
    hi = np.asarray([x[1] for x in lp.var_bounds])

    # Columns: structural | one slack per row | artificials for violated rows.
    slack_lo = np.zeros(m)
    slack_hi = np.where(is_eq, 0.0, np.inf)
    x0 = lo.copy()
    if start_at_upper is not None:
        idx = np.asarray(sorted(set(int(i) for i in start_at_upper)), dtype=int)
        x0[idx] = hi[idx]
    resid = b - A @ x0  # slack value if the slack were basic
    violated = np.where(is_eq, np.abs(resid) > PIV_TOL, resid < -PIV_TOL)
    art_rows = np.flatnonzero(violated)
    n_art = art_rows.size
    ncols = n + m + n_art

    T = np.zeros((m, ncols))
    T[:, :n] = A
    T[:, n : n + m] = np.eye(m)
    art_sign = np.sign(resid[art_rows])
    for t, r in enumerate(art_rows):
        T[r, n + m + t] = art_sign[t]
        T[r, :] *= art_sign[t]  # basis column becomes +1; B^{-1} stays diagonal

    col_lo = np.concatenate([lo, slack_lo, np.zeros(n_art)])
    col_hi = np.concatenate([hi, slack_hi, np.full(n_art, np.inf)])

    pos = np.full(ncols, _LO, dtype=np.int8)
    if start_at_upper is not None:
        pos[idx] = _HI
    basis = np.empty(m, dtype=int)
    xb = np.empty(m)
    for i in range(m):
        basis[i] = n + i
        xb[i] = resid[i]
    for t, r in enumerate(art_rows):
        pos[n + r] = _LO  # violated slack parks at zero
        basis[r] = n + m + t
        xb[r] = abs(resid[r])
    for i in range(m):
        pos[basis[i]] = _BASIC
    row_lo = col_lo[basis].copy()
    row_hi = col_hi[basis].copy()

    is_art = np.zeros(ncols, dtype=bool)
    is_art[n + m :] = True
    banned = np.zeros(ncols, dtype=bool)
    fixed = col_hi - col_lo <= PIV_TOL  # fixed vars never enter

    # Phase-1 reduced costs: cost 1 on artificials, 0 elsewhere.
    dvec = is_art.astype(float)
    for r in art_rows:
        dvec -= T[r, :]

    def extract():
        x = np.where(pos == _HI, col_hi, col_lo)
        x[basis] = xb
        xs = np.clip(x[:n], lo, hi)
        res = A @ xs - b
        bad = np.where(is_eq, np.abs(res) > FEAS_TOL, res > FEAS_TOL)
        if np.any(bad):
            raise NumericFailure("solution failed residual verification")
        return xs

    cap = 50 * (lp.num_vars + m)
    stalled = 0  # consecutive degenerate pivots; large runs trip Bland's rule
    for _ in range(cap):
        art_basic = is_art[basis]
        obj = float(np.sum(xb[art_basic])) if np.any(art_basic) else 0.0
        if obj <= PIV_TOL:
            return extract()

        enter_lo = (pos == _LO) & ~banned & ~fixed & (dvec < -PIV_TOL)
        enter_hi = (pos == _HI) & ~banned & ~fixed & (dvec > PIV_TOL)
        cand = enter_lo | enter_hi
        if not np.any(cand):
            return None if obj > FEAS_TOL else extract()
        if stalled > 40:
            j = int(np.argmax(cand))  # Bland: lowest improving index
        else:
            gain = np.where(cand, np.abs(dvec), 0.0)
            j = int(np.argmax(gain))  # steepest reduced cost, first on ties
        direction = 1.0 if pos[j] == _LO else -1.0

        eff = -direction * T[:, j]  # basic change per unit step
        with np.errstate(divide="ignore", invalid="ignore"):
            lim_up = np.where(eff > PIV_TOL, (row_hi - xb) / eff, np.inf)
            lim_dn = np.where(eff < -PIV_TOL, (row_lo - xb) / eff, np.inf)
        limits = np.maximum(np.minimum(lim_up, lim_dn), 0.0)
        t_flip = col_hi[j] - col_lo[j]
        t_star = min(float(limits.min()) if m else np.inf, t_flip)
        if not np.isfinite(t_star):
            raise NumericFailure("unbounded ray in phase 1")

        stalled = 0 if t_star > 1e-12 else stalled + 1

        blocking = np.flatnonzero(limits <= t_star + 1e-12)
        leave_var = j if t_flip <= t_star + 1e-12 else ncols
        leave_row = -1
        for r in blocking:
            if basis[r] < leave_var:
                leave_var = int(basis[r])
                leave_row = int(r)

        xb += eff * t_star
        if leave_var == j or leave_row < 0:
            pos[j] = _HI if pos[j] == _LO else _LO
            continue

        r = leave_row
        piv = T[r, j]
        if abs(piv) <= PIV_TOL:
            raise NumericFailure("numerically singular pivot")
        enter_val = (col_lo[j] + t_star) if direction > 0 else (col_hi[j] - t_star)
        out = leave_var
        pos[out] = _HI if eff[r] > 0 else _LO
        if is_art[out]:
            banned[out] = True
        rowvals = T[r, :] / piv
        colvals = T[:, j].copy()
        T -= np.outer(colvals, rowvals)
        T[r, :] = rowvals
        dvec -= dvec[j] * rowvals
        basis[r] = j
        pos[j] = _BASIC
        xb[r] = enter_val
        row_lo[r] = col_lo[j]
        row_hi[r] = col_hi[j]

    raise NumericFailure(f"iteration cap {cap} exceeded")


def build_assignment_lp(
    inst: Instance, S: Sequence[int], R: float, gfb: GFBounds
):
    """Fair-assignment LP over pairs within radius R.

    Variables exist only for (center, point) pairs with d <= R, which
    enforces the radius restriction structurally.  Returns the program plus
    the (center, point) pair backing each variable.

    Raises EmptyRow when some point has no center within R.
    """
    S = [int(i) for i in S]
    if not S:
        raise ValueError("need at least one center")
    if R < 0:
        raise ValueError("radius must be nonnegative")

    pairs = []
    var_of = {}
    cols_of_point = [[] for _ in range(inst.n)]
    cols_of_center = {i: [] for i in S}
    for i in S:
        row = inst.dist[i]
        for j in range(inst.n):
            if row[j] <= R + 1e-12:
                var_of[(i, j)] = len(pairs)
                cols_of_center[i].append((len(pairs), j))
                cols_of_point[j].append(len(pairs))
                pairs.append((i, j))
    for j in range(inst.n):
        if not cols_of_point[j]:
            raise EmptyRow(f"point {j} has no center within radius {R}")

    cons = []
    for i in S:
        cols = cols_of_center[i]
        if not cols:
            continue  # center admits nothing; its proportion rows are vacuous
        for h in range(gfb.m):
            beta, alpha = float(gfb.beta[h]), float(gfb.alpha[h])
            lower = tuple(
                (v, beta - (1.0 if inst.colors[j] == h else 0.0)) for v, j in cols
            )
            upper = tuple(
                (v, (1.0 if inst.colors[j] == h else 0.0) - alpha) for v, j in cols
            )
            cons.append(Constraint(terms=lower, rel="<=", rhs=0.0))
            cons.append(Constraint(terms=upper, rel="<=", rhs=0.0))
    for j in range(inst.n):
        cons.append(
            Constraint(
                terms=tuple((v, 1.0) for v in cols_of_point[j]), rel="=", rhs=1.0
            )
        )

    lp = LinearProgram(
        num_vars=len(pairs),
        constraints=tuple(cons),
        var_bounds=tuple((0.0, 1.0) for _ in pairs),
    )
    return lp, pairs


def nearest_admissible_start(inst: Instance, pairs: Sequence[tuple]) -> list:
    """Crash start: each point's nearest admissible center set to 1.

    Satisfies every unit-assignment row exactly, leaving the simplex to
    repair only proportion rows.
    """
    best = {}
    for v, (i, j) in enumerate(pairs):
        key = (inst.dist[i, j], i)
        if j not in best or key < best[j][0]:
            best[j] = (key, v)
    return [v for (_, v) in best.values()]
