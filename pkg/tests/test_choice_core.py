import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import lcmnl_instances
from refined_assortment.choice_core import (
    EXCLUDED,
    Binary,
    DomainSpec,
    FiniteSet,
    FullInterval,
    Instance,
    RefinementDomain,
    SolveResult,
    expected_revenue,
    project_to_domain,
    refine_utilities,
)
from refined_assortment.exceptions import InvalidInstance, InvalidRefinement
from refined_assortment.instance_gen import example2_instance
from refined_assortment.lcmnl import LCMNLModel


class TestRefineUtilities:
    def test_identity_at_one(self):
        np.testing.assert_array_equal(refine_utilities([2.0, 1.0], [1, 1]), [2.0, 1.0])

    def test_zero_is_excluded(self):
        out = refine_utilities([2.0, 1.0], [1, 0])
        assert out[0] == 2.0 and out[1] == EXCLUDED

    def test_half(self):
        assert refine_utilities([0.0], [0.5])[0] == pytest.approx(-0.693147, abs=1e-6)

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInstance):
            refine_utilities([1.0, 2.0], [1.0])

    @given(st.lists(st.tuples(st.floats(-5, 5), st.floats(1e-3, 1), st.floats(1e-3, 1)), min_size=1, max_size=6))
    def test_refinement_is_multiplicative(self, triples):
        u, a, b = (np.array(t) for t in zip(*triples))
        twice = refine_utilities(refine_utilities(u, a), b)
        once = refine_utilities(u, a * b)
        np.testing.assert_allclose(twice, once, atol=1e-12, rtol=0)


class TestExpectedRevenue:
    def test_example2_points(self):
        inst = example2_instance()
        assert expected_revenue(inst, [1, 1, 0]) == pytest.approx(66.24, abs=0.05)
        assert expected_revenue(inst, [1, 0.06, 1]) == pytest.approx(71.06, abs=0.05)

    def test_empty_offer(self):
        assert expected_revenue(example2_instance(), [0, 0, 0]) == 0.0

    def test_out_of_box(self):
        with pytest.raises(InvalidRefinement):
            expected_revenue(example2_instance(), [1.2, 0, 0])
        with pytest.raises(InvalidRefinement):
            expected_revenue(example2_instance(), [1, 0])

    @given(lcmnl_instances(), st.data())
    def test_probabilities_and_revenue_consistent(self, inst, data):
        x = np.array(data.draw(st.lists(st.floats(0, 1), min_size=inst.n, max_size=inst.n)))
        res = SolveResult.evaluate(inst, x, "probe")
        assert res.probabilities.min() >= 0
        assert res.probabilities.sum() == pytest.approx(1.0, abs=1e-9)
        assert res.revenue == pytest.approx(float(inst.r @ res.probabilities[1:]), abs=1e-9)
        assert res.revenue >= 0


class TestDomains:
    def test_project_binary(self):
        assert project_to_domain([0.7], [Binary()])[0] == 1.0

    def test_project_tie_goes_up(self):
        assert project_to_domain([0.5], [Binary()])[0] == 1.0

    def test_project_finite(self):
        assert project_to_domain([0.73], [FiniteSet([0, 0.8, 1])])[0] == 0.8

    def test_project_interval_clips(self):
        np.testing.assert_array_equal(project_to_domain([0.3, 1.0], RefinementDomain.interval(2)), [0.3, 1.0])

    def test_finite_set_needs_endpoints(self):
        with pytest.raises(InvalidInstance):
            FiniteSet([0.0, 0.5])
        with pytest.raises(InvalidInstance):
            FiniteSet([0.0, 1.0, 1.5])

    def test_finite_01_collapses_to_binary(self):
        assert FiniteSet([1, 0]).kind == "binary"

    def test_unknown_kind(self):
        with pytest.raises(InvalidInstance):
            DomainSpec("triangle")

    def test_json_roundtrip(self):
        dom = RefinementDomain((Binary(), FullInterval(), FiniteSet([0, 0.25, 1])))
        again = RefinementDomain.from_json(dom.to_json())
        assert again == dom
        assert dom.to_json() == ["binary", "interval", [0.0, 0.25, 1.0]]

    def test_cardinality_and_membership(self):
        dom = RefinementDomain((Binary(), FiniteSet([0, 0.8, 1])))
        assert dom.is_finite and not dom.is_binary
        assert dom.cardinality() == 6
        assert dom.contains([1, 0.8]) and not dom.contains([1, 0.7])
        assert RefinementDomain.interval(2).cardinality() == math.inf

    @given(st.floats(0, 1), st.lists(st.floats(0, 1), max_size=4))
    def test_projection_is_nearest(self, t, extra):
        spec = FiniteSet([0.0, 1.0, *extra])
        y = spec.nearest(t)
        assert y in spec.values
        assert abs(y - t) <= min(abs(v - t) for v in spec.values) + 1e-15


class TestInstance:
    def test_revenue_order_ties_by_index(self):
        inst = Instance([1.0, 3.0, 3.0, 2.0], LCMNLModel([1.0], [[1, 1, 1, 1]], [1.0]))
        np.testing.assert_array_equal(inst.revenue_order(), [1, 2, 3, 0])

    def test_domain_length_checked(self):
        with pytest.raises(InvalidInstance):
            Instance([1.0, 2.0], LCMNLModel([1.0], [[1, 1]], [1.0]), RefinementDomain.binary(3))

    def test_negative_revenue_rejected(self):
        with pytest.raises(InvalidInstance):
            Instance([-1.0], LCMNLModel([1.0], [[1.0]], [1.0]))

    def test_revenues_are_read_only(self):
        inst = example2_instance()
        with pytest.raises(ValueError):
            inst.r[0] = 5.0

    def test_solve_result_dict(self):
        res = SolveResult.evaluate(example2_instance(), [1, 1, 0], "probe", elapsed=0.1, note=np.int64(3))
        d = res.to_dict()
        assert d["solver"] == "probe" and d["extra"] == {"note": 3}
        assert d["no_purchase"] + sum(d["probabilities"]) == pytest.approx(1.0)
        np.testing.assert_array_equal(res.offered, [0, 1])
