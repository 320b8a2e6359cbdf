import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from selfcomp.analysis import (
    Aspect,
    FeatureCost,
    FitResult,
    GrowthRow,
    apply_before_advice,
    avg_sloc_per_feature,
    equivalent_traces,
    fit_exponential,
    growth_total,
    hierarchy_stats,
    project,
    read_growth_csv,
    to_dot,
    to_text_tree,
)
from selfcomp.behavior import flatten_names
from selfcomp.bdl import load
from selfcomp.corpus import ASPECTS, aspect_feature, corpus_dir, load_corpus
from selfcomp.errors import EmptyAdvice, InsufficientData, NonPositiveY, UnknownPrimitive
from selfcomp.registry import corpus_registry


def polyfit_oracle(points):
    xs, ys = zip(*points)
    b, ln_a = np.polyfit(xs, np.log(ys), 1)
    return math.exp(ln_a), b


class TestGrowth:
    @pytest.mark.parametrize("row, total", [
        (GrowthRow(1, 1, 2, 5), 10),
        (GrowthRow(3, 5, 10, 20), 1000),
        (GrowthRow(1, 1, 1, 1), 1),
    ])
    def test_total(self, row, total):
        assert growth_total(row) == total

    def test_rows_must_be_positive(self):
        with pytest.raises(ValueError):
            GrowthRow(1, 0, 2, 5)

    def test_self_fit(self):
        fit = fit_exponential([(1, 10), (2, 50), (3, 250)])
        assert fit.a == pytest.approx(2.0, abs=1e-12)
        assert fit.b == pytest.approx(math.log(5), abs=1e-12)
        assert fit.r2 == 1.0

    def test_aop_fit_matches_oracle(self):
        points = [(1, 20), (2, 150), (3, 1000)]
        fit = fit_exponential(points)
        a, b = polyfit_oracle(points)
        assert fit.a == pytest.approx(a, rel=1e-12)
        assert fit.b == pytest.approx(b, rel=1e-12)
        assert 0.99 < fit.r2 < 1.0

    def test_errors(self):
        with pytest.raises(InsufficientData):
            fit_exponential([(1, 10)])
        with pytest.raises(InsufficientData):
            fit_exponential([(1, 10), (1, 20)])
        with pytest.raises(NonPositiveY):
            fit_exponential([(1, 10), (2, 0)])

    def test_flat_data(self):
        fit = fit_exponential([(1, 7), (2, 7), (5, 7)])
        assert fit.a == pytest.approx(7) and fit.b == pytest.approx(0, abs=1e-15) and fit.r2 == 1.0

    def test_project(self):
        assert project(FitResult(3.0, 0.0, 1.0), 9) == 3.0
        assert project(FitResult(2.0, math.log(5), 1.0), 4) == pytest.approx(1250)

    @given(
        a=st.floats(0.01, 100),
        b=st.floats(-3, 3),
        xs=st.lists(st.integers(-5, 10), min_size=2, max_size=8, unique=True),
    )
    def test_recovers_exact_exponentials(self, a, b, xs):
        fit = fit_exponential([(x, a * math.exp(b * x)) for x in xs])
        assert fit.a == pytest.approx(a, rel=1e-9)
        assert fit.b == pytest.approx(b, abs=1e-9)
        assert fit.r2 == pytest.approx(1.0, abs=1e-9) or math.isclose(b, 0, abs_tol=1e-12)

    @given(st.lists(st.tuples(st.integers(0, 20), st.floats(0.1, 1e6)), min_size=3, max_size=10,
                    unique_by=lambda p: p[0]))
    def test_agrees_with_polyfit(self, points):
        fit = fit_exponential(points)
        a, b = polyfit_oracle(points)
        assert fit.b == pytest.approx(b, rel=1e-6, abs=1e-9)
        assert fit.a == pytest.approx(a, rel=1e-6)
        assert 0.0 <= fit.r2 <= 1.0

    def test_csv(self, tmp_path):
        rows = read_growth_csv(corpus_dir() / "growth_aop.csv")
        assert [growth_total(r) for r in rows] == [20, 150, 1000]
        bad = tmp_path / "bad.csv"
        bad.write_text("level,parents\n1,2\n")
        with pytest.raises(ValueError):
            read_growth_csv(bad)

    def test_average(self):
        assert avg_sloc_per_feature(FeatureCost(26, 18, 8)) == 2.25
        assert avg_sloc_per_feature(FeatureCost(14, 6, 8)) == 0.75
        assert avg_sloc_per_feature(FeatureCost(3, 0, 8)) == 0.0


class TestHierarchy:
    def test_corpus(self):
        store = load_corpus()
        stats = hierarchy_stats(store)
        # Post features sit one level below User features
        assert stats.depth == 4
        assert store["User.getName"].depth == 3
        assert stats.reuse["logging"] == 8
        assert stats.reuse["auth"] == 5
        assert stats.fanout["DBQueryReadUser"] == 4
        assert stats.fanout["DBQueryRead"] == 2
        assert len(stats.leaves) == 8

    def test_reuse_brute_force(self):
        store = load_corpus()
        stats = hierarchy_stats(store)
        leaves = [n for n in store if not any(b.parent == n for b in store.values())]
        for step, count in stats.reuse.items():
            assert count == sum(step in flatten_names(store[n], store) for n in leaves)

    def test_single_root(self):
        stats = hierarchy_stats(load("behavior A { add a }"))
        assert stats.depth == 0 and stats.fanout == {"A": 0}

    def test_dot(self):
        store = load("behavior A behavior B extends A behavior C extends A behavior D extends B")
        assert to_dot(store) == (
            'digraph behaviors {\n  "A";\n  "B";\n  "C";\n  "D";\n'
            '  "A" -> "B";\n  "A" -> "C";\n  "B" -> "D";\n}\n'
        )
        assert to_text_tree(store) == "A\n  B\n    D\n  C\n"


class TestAspects:
    def test_before_advice(self):
        b = apply_before_advice(ASPECTS["ReadUser"], "readUserNameQuery")
        assert flatten_names(b) == ["logging", "auth", "cacheLookup", "userIdValidation", "readUserNameQuery"]

    def test_without_auth(self):
        b = apply_before_advice(ASPECTS["ReadUserWithoutAuth"], "readUserOnline")
        assert "auth" not in flatten_names(b)

    def test_empty_advice(self):
        with pytest.raises(EmptyAdvice):
            Aspect("nothing", ())

    def test_unknown_primitive(self):
        with pytest.raises(UnknownPrimitive):
            apply_before_advice(ASPECTS["ReadUser"], "nope", corpus_registry())

    @given(st.lists(st.sampled_from(["a", "b", "c", "d"]), min_size=1, max_size=4, unique=True))
    def test_trace_is_advice_then_target(self, advice):
        b = apply_before_advice(Aspect("x", advice), "target")
        assert flatten_names(b) == list(advice) + ["target"]

    def test_equivalence_with_self(self):
        store = load_corpus()
        assert equivalent_traces(store["User.getName"], aspect_feature("User.getName"), store)
        assert equivalent_traces(store["User.getName"], store["User.getName"], store)
        assert not equivalent_traces(store["User.getName"], store["User.getOnline"], store)
        assert equivalent_traces(store["Post.getPopularSummary"], aspect_feature("Post.getPopularSummary"), store)
