"""Split one cluster among a chosen subset of its points.

Each color is dealt out in floor/ceiling shares of its fair quota while a
rotating start pointer spreads the ceiling surplus across the sub-centers,
so per-center totals also stay within one of each other and every
sub-center receives at least one point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import FairKCError, Instance


class InvalidSubset(FairKCError):
    """Q must be a nonempty subset of the cluster, no larger than it."""


@dataclass(frozen=True)
class DivisionPlan:
    """Per-color quotas for splitting a cluster among |Q| sub-centers.

    quota[h] is |C^h| / |Q|; surplus[h] counts how many sub-centers take the
    ceiling share; first_index is where the rotating deal starts.
    """

    quota: np.ndarray
    surplus: np.ndarray
    first_index: int = 0

    def __post_init__(self):
        if np.any(self.surplus < 0):
            raise ValueError("surplus counts cannot be negative")


def plan_division(color_counts: Sequence[int], q: int) -> DivisionPlan:
    counts = np.asarray(color_counts, dtype=int)
    quota = counts / q
    surplus = counts - q * (counts // q)  # remainder of each count mod |Q|
    return DivisionPlan(quota=quota, surplus=surplus)


def divide(
    inst: Instance, cluster: Sequence[int], center: int, Q: Sequence[int]
) -> dict:
    """Assign every cluster point to one of the sub-centers Q.

    Q keeps its given order; position 0 is where the rotating deal begins.
    With a single sub-center the whole cluster goes to it unchanged.  The
    anchor center may sit outside the cluster (it can happen after LP
    rounding reassigns the center point elsewhere); every other member of Q
    must belong to the cluster.
    """
    members = [int(p) for p in cluster]
    subs = [int(p) for p in Q]
    if not members:
        raise InvalidSubset("cluster is empty")
    if not subs or len(set(subs)) != len(subs):
        raise InvalidSubset("Q must be nonempty without duplicates")
    allowed = set(members) | {int(center)}
    stray = set(subs) - allowed
    if stray:
        raise InvalidSubset(f"sub-centers {sorted(stray)} outside the cluster")
    if len(subs) > len(members):
        raise InvalidSubset("more sub-centers than cluster points")

    if len(subs) == 1:
        return {p: subs[0] for p in members}

    nq = len(subs)
    by_color = {}
    for p in sorted(members):
        by_color.setdefault(int(inst.colors[p]), []).append(p)

    plan = plan_division(
        [len(by_color.get(h, ())) for h in range(inst.m)], nq
    )
    assign = {}
    first_index = plan.first_index
    for h in range(inst.m):
        pts = by_color.get(h, [])
        if not pts:
            continue
        share = len(pts) // nq
        surplus = int(plan.surplus[h])
        cursor = 0
        q = first_index
        for _ in range(nq):
            take = share
            if surplus > 0:
                take += 1
                surplus -= 1
                first_index = (first_index + 1) % nq
            for p in pts[cursor : cursor + take]:
                assign[p] = subs[q]
            cursor += take
            q = (q + 1) % nq
    return assign
