import numpy as np
import pytest

from conftest import wide_bounds
from fairkc.core import (
    DSBounds,
    GFBounds,
    cost,
    ds_violation,
    gf_violation,
    pof,
)
from fairkc.instances import gen_l_community, gen_random
from fairkc.oracle import TooLarge, brute_force_opt
from fairkc.solvers import alg_ds, alg_gf, gonzalez


class TestCaps:
    def test_too_many_points(self):
        inst = gen_random(13, 2, 2, [0.5, 0.5], seed=0)
        with pytest.raises(TooLarge):
            brute_force_opt(inst, 2)

    def test_too_many_centers(self):
        inst = gen_random(8, 2, 2, [0.5, 0.5], seed=0)
        with pytest.raises(TooLarge):
            brute_force_opt(inst, 4)


class TestUnconstrained:
    def test_community_instance_zero(self):
        inst = gen_l_community(2, 4, 1.0, "alternating")
        c, sol = brute_force_opt(inst, 2)
        assert c == 0.0
        assert cost(inst, sol) == 0.0

    def test_matches_exhaustive_nearest(self, rng):
        import itertools

        for _ in range(10):
            inst = gen_random(
                int(rng.integers(4, 9)), 2, 2, [0.5, 0.5], seed=int(rng.integers(2**31))
            )
            k = int(rng.integers(1, 4))
            c, _ = brute_force_opt(inst, k)
            want = min(
                inst.dist[list(S), :].min(axis=0).max()
                for size in range(1, k + 1)
                for S in itertools.combinations(range(inst.n), size)
            )
            assert c == pytest.approx(float(want))


class TestConstrained:
    def test_gf_forces_mixing_cost(self):
        inst = gen_l_community(2, 4, 1.0, "alternating")
        gfb = GFBounds(beta=[0.5, 0.5], alpha=[0.5, 0.5])
        got = brute_force_opt(inst, 2, gfb=gfb, rho_allow=1.0)
        assert got is not None
        c, sol = got
        assert c == 1.0
        assert gf_violation(inst, gfb, sol) <= 1.0
        assert pof(c, 0.0) == float("inf")

    def test_ds_quotas_force_gap_cost(self):
        inst = gen_l_community(3, 4, 1.0, "ds-variant")
        dsb = DSBounds(k_lo=[1, 1, 1], k_hi=[3, 3, 3], k=3)
        got = brute_force_opt(inst, 3, dsb=dsb)
        assert got is not None
        c, sol = got
        assert c == 1.0
        assert ds_violation(sol, dsb, inst) == 0

    def test_gf_on_top_of_ds_costs_unboundedly_more(self):
        # DS quotas alone admit the zero-cost community solution, but adding
        # GF (even with slack 1) forces the gap distance
        inst = gen_l_community(2, 4, 1.0, "alternating")
        dsb = DSBounds(k_lo=[1, 1], k_hi=[2, 2], k=2)
        gfb = GFBounds(beta=[0.5, 0.5], alpha=[0.5, 0.5])
        ds_only = brute_force_opt(inst, 2, dsb=dsb)
        both = brute_force_opt(inst, 2, gfb=gfb, dsb=dsb, rho_allow=1.0)
        assert ds_only[0] == 0.0 and both[0] == 1.0
        assert pof(both[0], ds_only[0]) == float("inf")

    def test_infeasible_when_no_assignment_qualifies(self):
        inst = gen_l_community(2, 4, 1.0, "alternating")
        gfb = GFBounds(beta=[0.5, 0.5], alpha=[0.5, 0.5])
        # rho_allow 0 demands exact halves, impossible with one lone center
        dsb = DSBounds(k_lo=[2, 2], k_hi=[2, 2], k=4)
        got = brute_force_opt(inst, 3, gfb=gfb, dsb=dsb, rho_allow=0.0)
        assert got is None  # needs 4 centers but the budget is 3

    def test_oracle_is_a_floor_for_solvers(self, rng):
        for _ in range(8):
            inst = gen_random(
                int(rng.integers(6, 11)), 2, 2, [0.5, 0.5], seed=int(rng.integers(2**31))
            )
            k = int(rng.integers(2, 4))
            gfb = wide_bounds(inst, delta=0.6)
            sol = alg_gf(inst, k, gfb)
            rho = gf_violation(inst, gfb, sol)
            got = brute_force_opt(inst, k, gfb=gfb, rho_allow=max(rho, 2.0))
            assert got is not None
            assert got[0] <= cost(inst, sol) + 1e-9

            dsb = DSBounds(k_lo=[1, 1], k_hi=[k, k], k=k)
            ds_sol = alg_ds(inst, dsb)
            got_ds = brute_force_opt(inst, k, dsb=dsb)
            assert got_ds is not None
            assert got_ds[0] <= cost(inst, ds_sol) + 1e-9

    def test_widening_rho_never_raises_cost(self, rng):
        for _ in range(6):
            inst = gen_random(
                int(rng.integers(6, 10)), 2, 2, [0.5, 0.5], seed=int(rng.integers(2**31))
            )
            gfb = wide_bounds(inst, delta=0.3)
            costs = []
            for rho in (0.0, 1.0, 2.0):
                got = brute_force_opt(inst, 2, gfb=gfb, rho_allow=rho)
                costs.append(np.inf if got is None else got[0])
            assert costs[0] >= costs[1] >= costs[2]

    def test_gonzalez_within_twice_oracle(self, rng):
        for _ in range(6):
            inst = gen_random(
                int(rng.integers(5, 11)), 2, 2, [0.5, 0.5], seed=int(rng.integers(2**31))
            )
            k = int(rng.integers(1, 4))
            c, _ = brute_force_opt(inst, k)
            assert cost(inst, gonzalez(inst, k)) <= 2.0 * c + 1e-9
