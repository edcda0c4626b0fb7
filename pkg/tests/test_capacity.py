"""Upper/lower probability envelopes and their axiom suite."""

from __future__ import annotations

import numpy as np
import pytest

from nlprob import (
    Event,
    all_events,
    capacity_axiom_report,
    credal_set_from_rows,
    lower_prob,
    lower_prob_witness,
    upper_prob,
    upper_prob_witness,
)
from nlprob.errors import DimensionMismatchError


class TestEnvelopes:
    def test_upper_two_measures(self, two_point_credal):
        assert upper_prob(two_point_credal, Event(2, frozenset([1]))) == 0.5

    def test_lower_two_measures(self, two_point_credal):
        assert lower_prob(two_point_credal, Event(2, frozenset([1]))) == pytest.approx(0.2, abs=1e-15)

    def test_full_and_empty(self, make_credal):
        c = make_credal()
        n = c.size
        assert upper_prob(c, Event(n, frozenset(range(n)))) == pytest.approx(1.0, abs=1e-12)
        assert lower_prob(c, Event(n, frozenset(range(n)))) == pytest.approx(1.0, abs=1e-12)
        assert upper_prob(c, Event(n, frozenset())) == 0.0
        assert lower_prob(c, Event(n, frozenset())) == 0.0

    def test_singleton_collapses(self, rng):
        c = credal_set_from_rows([rng.dirichlet(np.ones(4))])
        a = Event(4, frozenset([0, 2]))
        assert upper_prob(c, a) == lower_prob(c, a)

    def test_witness_indices(self, two_point_credal):
        a = Event(2, frozenset([1]))
        value, idx = upper_prob_witness(two_point_credal, a)
        assert (value, idx) == (0.5, 0)
        value, idx = lower_prob_witness(two_point_credal, a)
        assert idx == 1 and value == pytest.approx(0.2, abs=1e-15)

    def test_dimension_mismatch(self, two_point_credal):
        with pytest.raises(DimensionMismatchError):
            upper_prob(two_point_credal, Event(3, frozenset([0])))


class TestAxiomReport:
    def test_conjugacy_worked_example(self, two_point_credal):
        a = Event(2, frozenset([1]))
        total = upper_prob(two_point_credal, a) + lower_prob(two_point_credal, a.complement())
        assert total == pytest.approx(1.0, abs=1e-15)

    def test_exhaustive_random_credal(self, make_credal):
        for _ in range(25):
            c = make_credal()
            report = capacity_axiom_report(c, all_events(c.size), tol=1e-12)
            assert report.passed, report.worst_gap()

    def test_monotonicity_exact(self, make_credal):
        c = make_credal(size=6)
        events = all_events(6)
        for a in events:
            for b in events:
                if a.issubset(b):
                    assert upper_prob(c, a) <= upper_prob(c, b)
                    assert lower_prob(c, a) <= lower_prob(c, b)

    def test_singleton_all_gaps_zero(self, rng):
        c = credal_set_from_rows([rng.dirichlet(np.ones(5))])
        report = capacity_axiom_report(c, all_events(5), tol=1e-12)
        assert report.passed
        assert report.worst_gap() <= 1e-15

    def test_subset_of_full_space(self, make_credal):
        c = make_credal(size=4)
        assert upper_prob(c, Event(4, frozenset([1, 2]))) <= 1.0

    def test_report_record_inventory(self, two_point_credal):
        report = capacity_axiom_report(two_point_credal, all_events(2), tol=1e-12)
        names = {r.check for r in report.results}
        assert {"conjugacy", "dominance", "upper-monotonicity",
                "lower-monotonicity", "upper-normalization-full"} <= names
        spot = [r for r in report.results if r.check == "upper-subadditivity-spot"]
        assert spot and spot[0].witness is not None

    def test_monotone_sequence_stabilizes(self, make_credal):
        # finite-space surrogate for continuity: a nondecreasing event chain
        # reaches its union and the envelope value stabilizes with it
        c = make_credal(size=5)
        chain = [Event(5, frozenset(range(k))) for k in range(6)]
        values = [upper_prob(c, a) for a in chain]
        assert values == sorted(values)
        assert values[-1] == upper_prob(c, chain[-1])
        full_twice = [upper_prob(c, chain[-1]) for _ in range(3)]
        assert len(set(full_twice)) == 1


def test_all_events_cardinality():
    assert len(all_events(3)) == 8
    assert len({tuple(e.sorted_members()) for e in all_events(4)}) == 16
