"""Tests for corpus generation, the benchmark harness, eligibility
filtering, the train/test split, and speedup reporting."""

import math

import pytest

from ordsel.bench.corpus import (
    FAMILY_FAST,
    CorpusInstance,
    CorpusSpec,
    generate_corpus,
    sweep_steps,
)
from ordsel.bench.harness import (
    DEFAULT_LABEL,
    MismatchedIds,
    filter_eligible,
    run_benchmark,
    run_pipeline,
    speedup_report,
    split_train_test,
)
from ordsel.dag import encode_dag, nondeterministic_vertices
from ordsel.heuristics import CONFIG_NUMBERS
from ordsel.krss import parse_ontology
from ordsel.learn.pipeline import GridPoint
from ordsel.learn.svm import TooFewExamples
from ordsel.runtimes import FINISHED, INCONSISTENT, TIMEOUT, RuntimeRow

from conftest import BASIC_TEXT

# A small, fast corpus: 5 ordering-sensitive instances (one hopeless
# all-timeout trap, the rest warm) and 5 plain ones.
SMALL_SPEC = CorpusSpec(count=10, seed=3, all_timeout_count=1, hot_fraction=0.0)


@pytest.fixture(scope="module")
def small_corpus():
    return generate_corpus(SMALL_SPEC)


# ----------------------------------------------------------------- corpus


def test_spec_validation():
    with pytest.raises(ValueError):
        CorpusSpec(classes=(2, 5))  # too few classes
    with pytest.raises(ValueError):
        CorpusSpec(axioms=(9, 4))  # empty range
    with pytest.raises(ValueError):
        CorpusSpec(sensitive_fraction=1.5)
    with pytest.raises(ValueError):
        CorpusSpec(warm_widths=())


def test_generate_corpus_deterministic(small_corpus):
    again = generate_corpus(SMALL_SPEC)
    assert again == small_corpus
    assert [i.text for i in again] == [i.text for i in small_corpus]


def test_generate_corpus_empty():
    assert generate_corpus(CorpusSpec(count=0)) == []


def test_corpus_instances_valid(small_corpus):
    assert len(small_corpus) == 10
    assert [i.ontology_id for i in small_corpus] == [f"ont{i:04d}" for i in range(10)]
    n_sensitive = sum(1 for i in small_corpus if i.sensitive)
    assert n_sensitive == 5
    # exactly one hopeless instance, leading the sensitive block
    assert small_corpus[0].family == 5
    assert all(i.family is None for i in small_corpus if not i.sensitive)
    for inst in small_corpus:
        onto = parse_ontology(inst.text)  # must parse
        assert nondeterministic_vertices(encode_dag(onto)), inst.ontology_id


def test_each_config_fast_and_slow_somewhere():
    # Over the families that actually occur in generated corpora, every
    # configuration must be fast on some family and slow on another, so no
    # single ordering can dominate the benchmark.
    occurring = [f for f in FAMILY_FAST if FAMILY_FAST[f]]
    for c in range(1, 13):
        assert any(c in FAMILY_FAST[f] for f in occurring), c
        assert any(c not in FAMILY_FAST[f] for f in occurring), c


def test_trap_family_orderings_gap(small_corpus):
    # instance 1 is a warm trap whose safe branch wins on descending orders
    trap = small_corpus[1]
    assert trap.family == 1
    fast = sweep_steps(trap.text, "2", 12000)
    slow = sweep_steps(trap.text, "1", 12000)
    assert slow >= 10 * fast
    assert fast < 200


# ---------------------------------------------------------------- harness


def test_run_benchmark_rows_and_defaults():
    corpus = [("a", BASIC_TEXT), ("bad", "((("), ("b", BASIC_TEXT)]
    res = run_benchmark(corpus, configs=("1", "2", DEFAULT_LABEL), budget=1000)
    assert [oid for oid, _ in res.parse_failures] == ["bad"]
    assert set(res.features) == {"a", "b"}
    assert res.defaults == {"a": "1", "b": "1"}
    by_key = {(r.ontology_id, r.config): r for r in res.rows}
    assert set(by_key) == {(o, c) for o in ("a", "b") for c in ("1", "2", DEFAULT_LABEL)}
    # the default pseudo-configuration replays the default label's sweep
    for oid in ("a", "b"):
        assert by_key[(oid, DEFAULT_LABEL)].cost == by_key[(oid, "1")].cost
        assert by_key[(oid, DEFAULT_LABEL)].outcome == by_key[(oid, "1")].outcome
        assert by_key[(oid, "1")].outcome == FINISHED


def test_run_benchmark_empty_corpus():
    with pytest.raises(ValueError):
        run_benchmark([])


# -------------------------------------------------------------- filtering


def _full_table(oid, cost_fn, outcome_fn):
    return [
        RuntimeRow(oid, c, float(cost_fn(int(c))), outcome_fn(int(c))) for c in CONFIG_NUMBERS
    ]


def test_filter_eligible_reasons():
    rows = []
    rows += _full_table("inc", lambda c: 10 + c, lambda c: INCONSISTENT if c == 3 else FINISHED)
    rows += _full_table("slow", lambda c: 999, lambda c: TIMEOUT)
    rows += _full_table("ok", lambda c: 10 + c, lambda c: FINISHED)
    rows.append(RuntimeRow("slow", DEFAULT_LABEL, 999.0, TIMEOUT))
    kept, log = filter_eligible([rows])
    assert log == [("inc", "inconsistent"), ("slow", "all-timeout")]
    assert {r.ontology_id for r in kept} == {"ok"}


def test_filter_eligible_requires_tables():
    with pytest.raises(ValueError):
        filter_eligible([])


def test_filter_eligible_unstable_close_runtimes():
    # "tied": spread 2 on a floor of 99 (within 5%), fastest config flips
    # between repeats -> dropped.  "stable": same spread, same extremes -> kept.
    def costs(oid, lo_cfg, hi_cfg):
        out = []
        for c in CONFIG_NUMBERS:
            cost = 100.0
            if c == lo_cfg:
                cost = 99.0
            elif c == hi_cfg:
                cost = 101.0
            out.append(RuntimeRow(oid, c, cost, FINISHED))
        return out

    t1 = costs("tied", "1", "2") + costs("stable", "3", "4")
    t2 = costs("tied", "2", "1") + costs("stable", "3", "4")
    kept, log = filter_eligible([t1, t2])
    assert log == [("tied", "unstable-close-runtimes")]
    assert {r.ontology_id for r in kept} == {"stable"}
    # a single table never triggers the stability check
    kept1, log1 = filter_eligible([t1])
    assert log1 == []
    assert {r.ontology_id for r in kept1} == {"tied", "stable"}


def test_filter_wide_spread_not_checked_for_stability():
    def costs(oid, lo):
        return [
            RuntimeRow(oid, c, 10.0 if c == lo else 500.0, FINISHED) for c in CONFIG_NUMBERS
        ]

    t1 = costs("wide", "1")
    t2 = costs("wide", "2")  # extremes flip, but the spread is huge
    kept, log = filter_eligible([t1, t2])
    assert log == []
    assert {r.ontology_id for r in kept} == {"wide"}


# ------------------------------------------------------------------ split


def test_split_sizes_and_determinism():
    ids = [f"o{i:03d}" for i in range(143)]
    train, test = split_train_test(ids, fraction=0.25, seed=1)
    assert len(test) == 36 and len(train) == 107
    assert sorted(train + test) == ids
    assert not set(train) & set(test)
    assert train == sorted(train) and test == sorted(test)
    train2, test2 = split_train_test(list(reversed(ids)), fraction=0.25, seed=1)
    assert (train2, test2) == (train, test)


def test_split_minimum_and_fraction_validation():
    train, test = split_train_test(["a", "b", "c", "d"], fraction=0.25, seed=0)
    assert len(test) == 1 and len(train) == 3
    with pytest.raises(TooFewExamples):
        split_train_test(["a", "b", "c"], fraction=0.25)
    with pytest.raises(ValueError):
        split_train_test(["a", "b", "c", "d"], fraction=0.0)
    with pytest.raises(ValueError):
        split_train_test(["a", "b", "c", "d"], fraction=1.0)


# ---------------------------------------------------------------- speedup


def test_speedup_simple_ratio():
    rep = speedup_report({"a": (100.0, FINISHED)}, {"a": (1000.0, FINISHED)}, budget=5000.0)
    assert rep.ratios == (10.0,)
    assert rep.max_ratio == rep.mean_ratio == 10.0
    assert math.isclose(rep.geomean_ratio, 10.0, rel_tol=1e-12)
    assert rep.learned_sum == 100.0 and rep.standard_sum == 1000.0
    assert rep.learned_timeouts == 0 and rep.standard_timeouts == 0


def test_speedup_equal_costs():
    rep = speedup_report({"a": (7.0, FINISHED)}, {"a": (7.0, FINISHED)}, budget=10.0)
    assert rep.geomean_ratio == 1.0


def test_speedup_timeouts_valued_at_budget():
    rep = speedup_report({"a": (50.0, FINISHED)}, {"a": (123.0, TIMEOUT)}, budget=500.0)
    assert rep.ratios == (10.0,)
    assert rep.standard_timeouts == 1
    assert rep.standard_costs == (500.0,)


def test_speedup_floors_costs_at_one_step():
    rep = speedup_report({"a": (0.0, FINISHED)}, {"a": (3.0, FINISHED)}, budget=10.0)
    assert rep.ratios == (3.0,)


def test_speedup_against_reference_timeout():
    # one solved case against an exhausted reference-scale budget
    rep = speedup_report(
        {"x": (9103.0, FINISHED)}, {"x": (500000.0, TIMEOUT)}, budget=500000.0
    )
    assert math.isclose(rep.max_ratio, 54.928, abs_tol=0.01)


def test_speedup_aggregate_consistency():
    learned = {"a": (10.0, FINISHED), "b": (400.0, TIMEOUT), "c": (90.0, FINISHED)}
    standard = {"a": (100.0, FINISHED), "b": (400.0, TIMEOUT), "c": (9.0, FINISHED)}
    rep = speedup_report(learned, standard, budget=400.0)
    n = len(rep.ids)
    assert rep.ids == ("a", "b", "c")
    assert math.isclose(rep.learned_mean, rep.learned_sum / n)
    assert math.isclose(rep.standard_mean, rep.standard_sum / n)
    assert rep.geomean_ratio <= rep.mean_ratio <= rep.max_ratio
    assert rep.learned_timeouts == rep.standard_timeouts == 1


def test_speedup_mismatched_ids():
    with pytest.raises(MismatchedIds):
        speedup_report({"a": (1.0, FINISHED)}, {"b": (1.0, FINISHED)}, budget=10.0)


def test_speedup_empty():
    with pytest.raises(ValueError):
        speedup_report({}, {}, budget=10.0)


# ------------------------------------------------------------- end to end


def test_run_pipeline_smoke(small_corpus):
    corpus = [(i.ontology_id, i.text) for i in small_corpus]
    # pad with a second generation so the split has enough material
    extra = generate_corpus(CorpusSpec(count=6, seed=4, all_timeout_count=0, hot_fraction=0.0))
    corpus += [(f"x{i.ontology_id}", i.text) for i in extra]
    res = run_pipeline(
        corpus,
        budget=12000,
        seed=9,
        grid=[GridPoint(5, 2, "linear", 1.0)],
        n_folds=3,
        test_fraction=0.25,
    )
    eligible_ids = {r.ontology_id for r in res.eligible_rows}
    assert ("ont0000", "all-timeout") in res.exclusions
    assert "ont0000" not in eligible_ids
    assert sorted(res.train_ids + res.test_ids) == sorted(eligible_ids)
    assert not set(res.train_ids) & set(res.test_ids)
    assert set(res.selections) == set(res.test_ids)
    assert res.report.ids == tuple(sorted(res.test_ids))
    assert set(res.selections.values()) <= set(CONFIG_NUMBERS)
    assert set(res.f_scores) == set(CONFIG_NUMBERS)
    assert res.bundle.threshold > 0.0
    for heading in (
        "Per-ontology sweep costs",
        "Classifier F-scores",
        "Speedup of learned selection",
        "Cost totals",
    ):
        assert heading in res.report_text
