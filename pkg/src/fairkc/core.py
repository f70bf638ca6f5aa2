"""Domain types and metrics for fair k-center clustering.

An instance is a finite pseudometric (coinciding points are allowed) with a
one-color-per-point membership map.  A solution is a center set plus an
explicit point-to-center assignment; its cost is the largest assignment
distance.  Two constraint families live here: per-cluster proportional
bounds on each color (GF) and per-color counts on the selected centers (DS).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

TOL = 1e-9


class FairKCError(Exception):
    """Base class for errors raised by this package."""


class InfeasibleError(FairKCError):
    """A constrained problem has no solution under the given bounds."""


def _as_float_matrix(dist) -> np.ndarray:
    d = np.asarray(dist, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError("distance matrix must be square")
    return d


@dataclass(frozen=True)
class Instance:
    """Point set with pairwise distances and per-point colors.

    dist is an n-by-n symmetric matrix with zero diagonal; colors maps each
    point index to a color index in [0, m).  feature_vectors is present only
    for instances ingested from CSV, where dist is Euclidean.
    """

    dist: np.ndarray
    colors: np.ndarray
    m: int
    feature_vectors: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "dist", _as_float_matrix(self.dist))
        object.__setattr__(self, "colors", np.asarray(self.colors, dtype=int))
        self.dist.setflags(write=False)
        self.colors.setflags(write=False)
        n = self.dist.shape[0]
        if self.colors.shape != (n,):
            raise ValueError("colors must have one entry per point")
        if np.any(self.dist < -TOL):
            raise ValueError("distances must be nonnegative")
        if np.any(np.abs(np.diagonal(self.dist)) > TOL):
            raise ValueError("distance matrix must have zero diagonal")
        if not np.allclose(self.dist, self.dist.T, atol=TOL, rtol=0.0):
            raise ValueError("distance matrix must be symmetric")
        if self.m < 1:
            raise ValueError("need at least one color")
        if np.any(self.colors < 0) or np.any(self.colors >= self.m):
            raise ValueError("color indices must lie in [0, m)")
        if np.unique(self.colors).size != self.m:
            raise ValueError("every color index below m needs at least one point")

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def color_counts(self) -> np.ndarray:
        return np.bincount(self.colors, minlength=self.m)

    def points_of_color(self, h: int) -> np.ndarray:
        return np.flatnonzero(self.colors == h)

    def check_triangle(self, tol: float = TOL) -> None:
        """Raise if some triple violates the triangle inequality.

        O(n^3); meant for generated instances, not large CSV imports.
        """
        d = self.dist
        for k in range(self.n):
            if np.any(d > d[:, k, None] + d[None, k, :] + tol):
                raise ValueError(f"triangle inequality violated through point {k}")


@dataclass(frozen=True)
class GFBounds:
    """Per-color proportional bounds: beta[h] <= |C_i^h| / |C_i| <= alpha[h]."""

    beta: np.ndarray
    alpha: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "beta", np.asarray(self.beta, dtype=float))
        object.__setattr__(self, "alpha", np.asarray(self.alpha, dtype=float))
        if self.beta.shape != self.alpha.shape or self.beta.ndim != 1:
            raise ValueError("beta and alpha must be 1-d arrays of equal length")
        if np.any(self.beta <= 0.0):
            raise ValueError("every lower proportion bound must be positive")
        if np.any(self.beta > self.alpha + TOL) or np.any(self.alpha > 1.0 + TOL):
            raise ValueError("bounds must satisfy 0 < beta <= alpha <= 1")

    @property
    def m(self) -> int:
        return self.beta.shape[0]


@dataclass(frozen=True)
class DSBounds:
    """Per-color center-count bounds k_lo[h] <= k_h <= k_hi[h] with budget k."""

    k_lo: np.ndarray
    k_hi: np.ndarray
    k: int

    def __post_init__(self):
        object.__setattr__(self, "k_lo", np.asarray(self.k_lo, dtype=int))
        object.__setattr__(self, "k_hi", np.asarray(self.k_hi, dtype=int))
        if self.k_lo.shape != self.k_hi.shape or self.k_lo.ndim != 1:
            raise ValueError("k_lo and k_hi must be 1-d arrays of equal length")
        if np.any(self.k_lo < 0) or np.any(self.k_lo > self.k_hi):
            raise ValueError("need 0 <= k_lo <= k_hi per color")
        if int(self.k_lo.sum()) > self.k:
            raise ValueError("sum of lower center bounds exceeds the budget k")

    @property
    def m(self) -> int:
        return self.k_lo.shape[0]

    def check_selectable(self, inst: Instance) -> None:
        counts = inst.color_counts()
        for h in range(self.m):
            if counts[h] < self.k_lo[h]:
                raise InfeasibleError(
                    f"color {h} has {counts[h]} points but k_lo[{h}]={self.k_lo[h]}"
                )


@dataclass(frozen=True)
class Solution:
    """Ordered center set plus an explicit point-to-center assignment.

    assign[j] is the point index of j's center and must be a member of
    centers.  Centers with empty clusters are permitted (they are reported as
    inactive and ignored by the violation metrics).
    """

    centers: tuple
    assign: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "centers", tuple(int(c) for c in self.centers))
        object.__setattr__(self, "assign", np.asarray(self.assign, dtype=int))
        self.assign.setflags(write=False)
        if len(set(self.centers)) != len(self.centers):
            raise ValueError("duplicate centers")
        cset = set(self.centers)
        if not cset:
            raise ValueError("a solution needs at least one center")
        if any(int(c) not in cset for c in self.assign):
            raise ValueError("every point must be assigned to a selected center")

    @property
    def n(self) -> int:
        return self.assign.shape[0]

    def cluster_of(self, center: int) -> np.ndarray:
        return np.flatnonzero(self.assign == center)

    def active_centers(self) -> tuple:
        present = set(int(c) for c in self.assign)
        return tuple(c for c in self.centers if c in present)

    def inactive_centers(self) -> tuple:
        present = set(int(c) for c in self.assign)
        return tuple(c for c in self.centers if c not in present)


@dataclass(frozen=True)
class FractionalAssignment:
    """Sparse LP assignment matrix x[(center, point)] in [0, 1].

    Absent entries are zero.  Row sums over centers must be 1 for every
    point; values within 1e-7 of 0 or 1 are snapped on construction and
    anything outside [-1e-12, 1+1e-12] after snapping is rejected.
    """

    n: int
    entries: dict = field(default_factory=dict)

    SNAP = 1e-7

    def __post_init__(self):
        snapped = {}
        for (q, j), v in self.entries.items():
            v = float(v)
            if abs(v) <= self.SNAP:
                v = 0.0
            elif abs(v - 1.0) <= self.SNAP:
                v = 1.0
            if v < -1e-12 or v > 1.0 + 1e-12:
                raise ValueError(f"entry x[{q},{j}]={v} outside [0, 1]")
            v = min(max(v, 0.0), 1.0)
            if v > 0.0:
                snapped[(int(q), int(j))] = v
        object.__setattr__(self, "entries", snapped)
        sums = np.zeros(self.n)
        for (q, j), v in snapped.items():
            sums[j] += v
        if np.any(np.abs(sums - 1.0) > 1e-6):
            bad = int(np.argmax(np.abs(sums - 1.0)))
            raise ValueError(f"assignment row for point {bad} sums to {sums[bad]}")

    def centers(self) -> tuple:
        return tuple(sorted({q for (q, _) in self.entries}))

    def support_of(self, j: int) -> list:
        return sorted(q for (q, jj) in self.entries if jj == j)

    def marginals(self, inst: Instance, Q: Sequence[int]):
        """Per-center totals and per-(center, color) totals of x."""
        Q = list(Q)
        pos = {q: t for t, q in enumerate(Q)}
        tot = np.zeros(len(Q))
        by_color = np.zeros((len(Q), inst.m))
        for (q, j), v in self.entries.items():
            t = pos[q]
            tot[t] += v
            by_color[t, inst.colors[j]] += v
        return tot, by_color


@dataclass(frozen=True)
class ViolationReport:
    """Measured constraint violations for one solution."""

    gf_rho: float
    ds_violation: int
    inactive_centers: tuple
    cost: float

    def to_dict(self) -> dict:
        return {
            "gf_rho": self.gf_rho,
            "ds_violation": self.ds_violation,
            "inactive_centers": list(self.inactive_centers),
            "cost": self.cost,
        }


@dataclass(frozen=True)
class ExperimentConfig:
    """Knobs for the five-algorithm comparison harness.

    Proportional bounds derive from delta as beta = (1-delta) r_h and
    alpha = (1+delta) r_h (capped at 1); center bounds derive from theta as
    k_lo = ceil(theta r_h k) with k_hi = k.
    """

    k_values: tuple
    delta: float = 0.2
    theta: float = 0.8
    p: int = 1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "k_values", tuple(int(k) for k in self.k_values))
        if not self.k_values or any(k < 1 for k in self.k_values):
            raise ValueError("k_values must be positive integers")
        if not 0.0 <= self.delta <= 1.0 or not 0.0 <= self.theta <= 1.0:
            raise ValueError("delta and theta must lie in [0, 1]")

    def gf_bounds(self, inst: Instance) -> GFBounds:
        r = inst.color_counts() / inst.n
        beta = (1.0 - self.delta) * r
        alpha = np.minimum(1.0, (1.0 + self.delta) * r)
        if np.any(beta <= 0.0):
            raise ValueError("delta leaves a color with a zero lower bound")
        return GFBounds(beta=beta, alpha=alpha)

    def ds_bounds(self, inst: Instance, k: int) -> DSBounds:
        r = inst.color_counts() / inst.n
        k_lo = np.ceil(self.theta * r * k - TOL).astype(int)
        k_hi = np.full(inst.m, k, dtype=int)
        return DSBounds(k_lo=k_lo, k_hi=k_hi, k=k)


def cost(inst: Instance, sol: Solution) -> float:
    """Largest distance between a point and its assigned center."""
    return float(np.max(inst.dist[np.arange(inst.n), sol.assign]))


def _cluster_color_counts(inst: Instance, sol: Solution):
    """Yield (center, cluster size, per-color counts) over active centers."""
    for c in sol.active_centers():
        members = sol.cluster_of(c)
        counts = np.bincount(inst.colors[members], minlength=inst.m)
        yield c, members.size, counts


def gf_violation(inst: Instance, gfb: GFBounds, sol: Solution) -> float:
    """Smallest rho such that beta_h|C_i|-rho <= |C_i^h| <= alpha_h|C_i|+rho.

    Empty clusters contribute nothing.  Values within 1e-9 of zero collapse
    to exactly zero so that exact satisfaction reports rho = 0.
    """
    rho = 0.0
    for _, size, counts in _cluster_color_counts(inst, sol):
        under = np.max(gfb.beta * size - counts)
        over = np.max(counts - gfb.alpha * size)
        rho = max(rho, under, over)
    return 0.0 if rho <= TOL else float(rho)


def ds_violation(sol: Solution, dsb: DSBounds, inst: Instance) -> int:
    """Largest per-color shortfall/excess of active-center counts."""
    active = sol.active_centers()
    counts = np.bincount(inst.colors[list(active)], minlength=dsb.m)
    worst = 0
    for h in range(dsb.m):
        worst = max(worst, int(dsb.k_lo[h] - counts[h]), int(counts[h] - dsb.k_hi[h]))
    return max(worst, 0)


def pof(cost_constrained: float, cost_blind: float) -> float:
    """Price of fairness: constrained cost over unconstrained cost.

    Returns inf when the unconstrained cost is 0 but the constrained cost is
    positive, and 1 when both are 0 (documented convention).
    """
    if cost_constrained < 0 or cost_blind < 0:
        raise ValueError("costs must be nonnegative")
    if cost_blind == 0.0:
        return 1.0 if cost_constrained == 0.0 else float("inf")
    return cost_constrained / cost_blind


def make_report(
    inst: Instance,
    sol: Solution,
    gfb: Optional[GFBounds] = None,
    dsb: Optional[DSBounds] = None,
) -> ViolationReport:
    return ViolationReport(
        gf_rho=gf_violation(inst, gfb, sol) if gfb is not None else 0.0,
        ds_violation=ds_violation(sol, dsb, inst) if dsb is not None else 0,
        inactive_centers=sol.inactive_centers(),
        cost=cost(inst, sol),
    )


def nearest_center_assignment(inst: Instance, centers: Sequence[int]) -> np.ndarray:
    """Assign every point to its nearest center.

    A point that is itself a center is assigned to itself; other ties go to
    the lowest center index.  Self-assignment keeps every center active even
    between coinciding points.
    """
    ordered = sorted(int(c) for c in centers)
    sub = inst.dist[:, ordered]
    best = np.argmin(sub, axis=1)  # first minimum wins: lowest center index
    assign = np.asarray([ordered[b] for b in best], dtype=int)
    for c in ordered:
        assign[c] = c
    return assign
