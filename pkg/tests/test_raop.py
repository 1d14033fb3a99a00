import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import lcmnl_instances, random_lcmnl
from refined_assortment.choice_core import Binary, FiniteSet, FullInterval, Instance, RefinementDomain
from refined_assortment.exceptions import InvalidInstance, SizeLimit
from refined_assortment.instance_gen import example1_instance, example2_instance
from refined_assortment.lcmnl import LCMNLModel
from refined_assortment.raop import (
    LineProblem,
    SACPSchedule,
    grid_oracle_raop,
    line_maximize,
    ro1,
    ro2,
    ro3,
    solve_sacp,
)
from refined_assortment.taop import enumerate_taop, revenue_ordered

TOL = 1e-9


class TestLineMaximize:
    def test_constant(self):
        t, v = line_maximize(LineProblem(lambda t: np.full(np.shape(t), 3.0)))
        assert t in (0.0, 1.0) and v == 3.0

    def test_interior_peak(self):
        t, v = line_maximize(LineProblem(lambda t: -(np.asarray(t) - 0.3141) ** 2))
        assert t == pytest.approx(0.3141, abs=1e-8)

    def test_finds_narrow_global_peak(self):
        # a wide local bump at 0.2 and a taller narrow one at 0.8
        def f(t):
            t = np.asarray(t)
            return np.exp(-((t - 0.2) / 0.2) ** 2) + 1.5 * np.exp(-((t - 0.8) / 0.01) ** 2)

        t, _ = line_maximize(LineProblem(f))
        assert t == pytest.approx(0.8, abs=1e-6)

    def test_finite_candidates(self):
        t, v = line_maximize(LineProblem(lambda t: -np.abs(np.asarray(t) - 0.7), candidates=(0.0, 0.5, 0.8, 1.0)))
        assert t == 0.8

    def test_example2_coordinate(self):
        prob = LineProblem.from_instance(example2_instance(), [1.0, 0.0, 0.0], 1)
        t, v = line_maximize(prob)
        assert t == pytest.approx(0.06, abs=0.005)
        assert v == pytest.approx(71.05, abs=0.01)
        # cross-check against a fine scan of the closed form
        ts = np.linspace(0, 1, 200_001)
        assert v >= prob.objective(ts).max() - 1e-9

    def test_single_segment_endpoint(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            inst = random_lcmnl(rng, 4, 1)
            base = (rng.random(4) < 0.5).astype(float)
            t, v = line_maximize(LineProblem.from_instance(inst, base, int(rng.integers(4))))
            assert min(abs(t), abs(1 - t)) <= 1e-6

    def test_argument_checks(self):
        with pytest.raises(ValueError):
            line_maximize(LineProblem(lambda t: t), grid_points=2)
        with pytest.raises(ValueError):
            line_maximize(LineProblem(lambda t: t), tol=0)
        with pytest.raises(InvalidInstance):
            LineProblem.from_instance(example2_instance(), [1, 1, 1], 3)


class TestHeuristics:
    @pytest.mark.parametrize("heuristic", [ro1, ro2, ro3])
    def test_example2(self, heuristic):
        res = heuristic(example2_instance())
        assert res.revenue >= 71.0
        assert res.revenue > enumerate_taop(example2_instance()).revenue

    def test_example2_values(self):
        inst = example2_instance()
        assert ro1(inst).revenue == pytest.approx(71.0565, abs=1e-3)
        assert ro2(inst).revenue >= ro1(inst).revenue - TOL

    @pytest.mark.parametrize("heuristic", [ro1, ro2, ro3])
    def test_single_product(self, heuristic):
        inst = Instance([2.0], LCMNLModel([1.0], [[1.0]], [1.0]))
        res = heuristic(inst)
        t, v = line_maximize(LineProblem.from_instance(inst, [0.0], 0))
        assert res.revenue == pytest.approx(v)

    def test_single_segment_matches_ro(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            inst = random_lcmnl(rng, int(rng.integers(1, 6)), 1)
            assert ro1(inst).revenue == pytest.approx(revenue_ordered(inst).revenue, abs=1e-6)

    @given(lcmnl_instances(max_n=4, max_m=3))
    def test_dominance_chain(self, inst):
        ro, a, b, c = revenue_ordered(inst).revenue, ro1(inst).revenue, ro2(inst).revenue, ro3(inst).revenue
        assert ro <= a + TOL
        assert a <= b + TOL
        assert a <= c + TOL

    @given(lcmnl_instances(max_n=4, max_m=3))
    def test_outputs_feasible(self, inst):
        for h in (ro1, ro2, ro3):
            res = h(inst)
            assert np.all((res.x >= 0) & (res.x <= 1))
            assert res.revenue == pytest.approx(inst.revenue(res.x))

    def test_respects_finite_domains(self):
        inst = example2_instance().with_domain(
            RefinementDomain((Binary(), FiniteSet([0, 0.1, 0.5, 1]), Binary()))
        )
        for h in (ro1, ro2, ro3):
            res = h(inst)
            assert inst.domain.contains(res.x)

    def test_binary_partial_optima(self):
        rng = np.random.default_rng(2)
        inst = random_lcmnl(rng, 4, 1)
        res = ro2(inst)
        assert set(np.unique(res.x)) <= {0.0, 1.0} or np.allclose(res.x, np.round(res.x), atol=1e-6)
        assert res.revenue <= enumerate_taop(inst).revenue + 1e-6

    def test_empty_instance(self):
        inst = Instance(np.zeros(0), LCMNLModel([1.0], np.zeros((1, 0)), [1.0]))
        for h in (ro1, ro2, ro3):
            assert h(inst).revenue == 0.0


class TestGridOracle:
    def test_example2(self):
        assert grid_oracle_raop(example2_instance().with_domain(None), per_axis=101).revenue >= 71.0

    def test_zero_revenue(self):
        inst = Instance([0.0, 0.0], LCMNLModel([1.0], [[1.0, 1.0]], [1.0]))
        assert grid_oracle_raop(inst, per_axis=11).revenue == 0.0

    def test_single_segment(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            inst = random_lcmnl(rng, 3, 1)
            assert grid_oracle_raop(inst, 41).revenue == pytest.approx(enumerate_taop(inst).revenue, abs=1e-4)

    def test_size_limits(self):
        with pytest.raises(SizeLimit):
            grid_oracle_raop(random_lcmnl(np.random.default_rng(0), 4, 1))
        with pytest.raises(SizeLimit):
            grid_oracle_raop(example2_instance(), per_axis=202)

    @given(lcmnl_instances(max_n=3, max_m=3))
    def test_dominates_heuristics(self, inst):
        oracle = grid_oracle_raop(inst, per_axis=41).revenue
        best = max(h(inst).revenue for h in (ro1, ro2, ro3))
        assert oracle >= best - 1e-4


class TestSACP:
    def test_binary_menus_reduce_to_taop(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            inst = random_lcmnl(rng, 5, 2).with_domain(RefinementDomain.binary(5))
            assert solve_sacp(inst).revenue == pytest.approx(enumerate_taop(inst).revenue)

    def test_example1(self):
        res = solve_sacp(example1_instance())
        np.testing.assert_array_equal(res.x, [1.0, 0.8])
        assert res.revenue == 1.75
        assert res.extra["periods"] == [1, 2]

    def test_two_products_brute_force(self):
        inst = Instance([3.0, 2.0], LCMNLModel([1.0], [[1.0, 4.0]], [1.0]), RefinementDomain.binary(2))
        values = [inst.revenue(x) for x in ([0, 0], [1, 0], [0, 1], [1, 1])]
        assert solve_sacp(inst).revenue == pytest.approx(max(values))

    def test_schedule_from_utilities(self):
        sched = SACPSchedule.from_utilities([[1.0, 1.0 + np.log(0.5)], [0.0, 0.0]])
        assert sched.menus[0] == (0.0, 0.5, 1.0)
        assert sched.menus[1] == (0.0, 1.0)
        assert sched.period_of([0.5, 0.0]) == [2, None]
        with pytest.raises(InvalidInstance):
            SACPSchedule.from_utilities([[0.0, 1.0]])

    def test_interval_domain_rejected(self):
        with pytest.raises(InvalidInstance):
            solve_sacp(example2_instance().with_domain(None))

    def test_limit(self):
        inst = example2_instance().with_domain(RefinementDomain((FiniteSet([0, 0.5, 1]),) * 3))
        with pytest.raises(SizeLimit):
            solve_sacp(inst, limit=26)
        assert solve_sacp(inst, limit=27).revenue >= enumerate_taop(inst).revenue

    def test_schedule_length(self):
        with pytest.raises(InvalidInstance):
            solve_sacp(example2_instance(), SACPSchedule(((0.0, 1.0),), ({1.0: 1},)))

    @given(st.lists(st.sampled_from([0.25, 0.5, 0.8]), min_size=3, max_size=3))
    def test_sacp_beats_taop(self, levels):
        inst = example2_instance().with_domain(RefinementDomain(tuple(FiniteSet([0, l, 1]) for l in levels)))
        assert solve_sacp(inst).revenue >= enumerate_taop(inst).revenue - 1e-12


def test_full_interval_object():
    assert not FullInterval().is_finite
