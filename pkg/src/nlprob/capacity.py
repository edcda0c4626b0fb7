"""Upper and lower probability envelopes over a credal set.

The upper probability of an event is the maximum of its probability across
the credal set's measures; the lower probability is the minimum. Both are
attained because the set is a finite list — no optimization, just exact
enumeration. The pair is conjugate: upper(A) + lower(complement A) = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CredalSet, Event, event_probability
from .reports import CheckResult, all_passed, comparison, equality

DEFAULT_TOL = 1e-12


def event_probabilities(credal: CredalSet, event: Event) -> np.ndarray:
    """P_j(A) for every measure j, in credal order."""
    return np.array([event_probability(m, event) for m in credal.measures])


def upper_prob(credal: CredalSet, event: Event) -> float:
    return float(event_probabilities(credal, event).max())


def lower_prob(credal: CredalSet, event: Event) -> float:
    return float(event_probabilities(credal, event).min())


def upper_prob_witness(credal: CredalSet, event: Event) -> tuple[float, int]:
    """(value, index of a maximizing measure; lowest index on ties)."""
    p = event_probabilities(credal, event)
    j = int(p.argmax())
    return float(p[j]), j


def lower_prob_witness(credal: CredalSet, event: Event) -> tuple[float, int]:
    p = event_probabilities(credal, event)
    j = int(p.argmin())
    return float(p[j]), j


@dataclass(frozen=True)
class CapacityAxiomReport:
    """Axiom-by-axiom verdicts for the two envelopes on a list of events."""

    results: tuple[CheckResult, ...]
    passed: bool

    def worst_gap(self) -> float:
        return max(r.gap for r in self.results)


def capacity_axiom_report(credal: CredalSet, events: list[Event],
                          tol: float = DEFAULT_TOL) -> CapacityAxiomReport:
    """Check normalization, monotonicity, conjugacy and envelope dominance.

    Normalization is checked on the empty and full events regardless of the
    list. Monotonicity runs over every subset pair (A, B) with A ⊆ B drawn
    from the supplied events; conjugacy and dominance run per event. Each
    failing record carries the witnessing event (and pair) as sorted index
    lists plus the attaining measure indices.
    """
    size = credal.size
    empty = Event(size)
    full = empty.complement()

    # one matrix pass: rows are measures, columns the supplied events
    probs = np.array([[event_probability(m, e) for e in events]
                      for m in credal.measures]) if events else np.zeros((len(credal), 0))
    upper = probs.max(axis=0) if events else np.zeros(0)
    lower = probs.min(axis=0) if events else np.zeros(0)

    results = [
        equality("upper-normalization-empty", upper_prob(credal, empty), 0.0, tol),
        equality("lower-normalization-empty", lower_prob(credal, empty), 0.0, tol),
        equality("upper-normalization-full", upper_prob(credal, full), 1.0, tol),
        equality("lower-normalization-full", lower_prob(credal, full), 1.0, tol),
    ]

    def _pair_witness(i: int, k: int) -> dict:
        return {
            "event": events[i].sorted_members(),
            "superset": events[k].sorted_members(),
        }

    worst_mono_u = worst_mono_l = (0.0, None)
    for i, a in enumerate(events):
        for k, b in enumerate(events):
            if i == k or not a.issubset(b):
                continue
            gap_u = upper[i] - upper[k]
            gap_l = lower[i] - lower[k]
            if gap_u > worst_mono_u[0]:
                worst_mono_u = (gap_u, _pair_witness(i, k))
            if gap_l > worst_mono_l[0]:
                worst_mono_l = (gap_l, _pair_witness(i, k))
    results.append(CheckResult("upper-monotonicity", worst_mono_u[0], 0.0,
                               worst_mono_u[0], worst_mono_u[0] <= tol,
                               worst_mono_u[1]))
    results.append(CheckResult("lower-monotonicity", worst_mono_l[0], 0.0,
                               worst_mono_l[0], worst_mono_l[0] <= tol,
                               worst_mono_l[1]))

    worst_conj: tuple[float, dict | None] = (0.0, None)
    worst_dom: tuple[float, dict | None] = (0.0, None)
    for i, a in enumerate(events):
        u, ju = upper_prob_witness(credal, a)
        lc, jl = lower_prob_witness(credal, a.complement())
        gap_c = abs(u + lc - 1.0)
        if gap_c > worst_conj[0]:
            worst_conj = (gap_c, {"event": a.sorted_members(),
                                  "upper_argmax": ju, "complement_argmin": jl})
        gap_d = lower[i] - upper[i]
        if gap_d > worst_dom[0]:
            worst_dom = (gap_d, {"event": a.sorted_members()})
    results.append(CheckResult("conjugacy", worst_conj[0], 0.0, worst_conj[0],
                               worst_conj[0] <= tol, worst_conj[1]))
    results.append(CheckResult("dominance", worst_dom[0], 0.0, worst_dom[0],
                               worst_dom[0] <= tol, worst_dom[1]))

    results.append(comparison(
        "upper-subadditivity-spot", 0.0, 0.0, tol,
        {"note": "union subadditivity is implied by maxima of additive measures"},
    ) if not events else _union_subadditivity(credal, events, tol))

    return CapacityAxiomReport(tuple(results), all_passed(results))


def _union_subadditivity(credal: CredalSet, events: list[Event], tol: float) -> CheckResult:
    # upper(A u B) <= upper(A) + upper(B) over consecutive event pairs; cheap
    # spot check, the exhaustive pair sweep lives in the monotonicity loop
    worst = (float("-inf"), None)
    for a, b in zip(events, events[1:] or events[:1]):
        lhs = upper_prob(credal, a.union(b))
        rhs = upper_prob(credal, a) + upper_prob(credal, b)
        if lhs - rhs > worst[0]:
            worst = (lhs - rhs, {"event": a.sorted_members(),
                                 "other": b.sorted_members()})
    return CheckResult("upper-subadditivity-spot", worst[0], 0.0, worst[0],
                       worst[0] <= tol, worst[1])


def all_events(size: int) -> list[Event]:
    """Every subset of a space, bitmask order. Exponential; keep size small."""
    return [Event(size, frozenset(i for i in range(size) if mask >> i & 1))
            for mask in range(1 << size)]
