"""Benchmark harness: sweep a corpus under the twelve expansion orderings,
filter eligible ontologies, split train/test, and report speedups of the
learned selector against the rule-based default ordering.

Costs are deterministic rule-step counts, so a single run of each
(ontology, configuration) pair fully determines the table; timeout rows are
valued at the per-test budget everywhere aggregates are formed, and ratio
denominators are floored at one step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..dag import encode_dag
from ..features import FeatureVector, extract_features
from ..heuristics import CONFIG_NUMBERS, apply_ordering, default_config, parse_config
from ..krss import ParseError, parse_ontology
from ..learn.pipeline import (
    GOOD,
    GridPoint,
    ModelBundle,
    f_score,
    label_examples,
    select_heuristic,
    train_model_bundle,
)
from ..learn.svm import TooFewExamples
from ..runtimes import FINISHED, INCONSISTENT, TIMEOUT, RuntimeRow, rows_by_ontology

DEFAULT_LABEL = "default"


class MismatchedIds(ValueError):
    """Raised when learned and standard cost maps disagree on ontology ids."""


@dataclass(frozen=True)
class BenchResult:
    rows: list[RuntimeRow]
    features: dict[str, FeatureVector]
    defaults: dict[str, str]  # ontology id -> config label chosen by the default rule
    parse_failures: list[tuple[str, str]]


def run_benchmark(
    corpus: list[tuple[str, str]],
    configs: tuple[str, ...] = CONFIG_NUMBERS + (DEFAULT_LABEL,),
    budget: int = 12000,
) -> BenchResult:
    """One satisfiability sweep per (ontology, configuration).

    `corpus` is a list of (ontology id, source text) pairs.  The pseudo
    configuration "default" reruns the label picked by the rule-based
    default for that ontology's features (reusing the sweep when that label
    was already benchmarked).  Sources that fail to parse are recorded and
    skipped, not fatal.
    """
    from ..tableau import satisfiability_sweep

    if not corpus:
        raise ValueError("empty corpus")
    rows: list[RuntimeRow] = []
    features: dict[str, FeatureVector] = {}
    defaults: dict[str, str] = {}
    failures: list[tuple[str, str]] = []
    real = tuple(c for c in configs if c != DEFAULT_LABEL)
    want_default = DEFAULT_LABEL in configs
    for oid, text in corpus:
        try:
            onto = parse_ontology(text)
        except ParseError as exc:
            failures.append((oid, str(exc)))
            continue
        d = encode_dag(onto)
        fv = extract_features(onto, d)
        features[oid] = fv
        default_label = str(default_config(fv).number)
        defaults[oid] = default_label
        per_label: dict[str, RuntimeRow] = {}
        labels_to_run = list(real)
        if want_default and default_label not in labels_to_run:
            labels_to_run.append(default_label)
        for label in labels_to_run:
            odag = apply_ordering(d, parse_config(label))
            sweep = satisfiability_sweep(odag, budget)
            if sweep.timed_out:
                row = RuntimeRow(oid, label, float(budget), TIMEOUT)
            elif not sweep.consistent:
                row = RuntimeRow(oid, label, float(sweep.total_steps), INCONSISTENT)
            else:
                row = RuntimeRow(oid, label, float(sweep.total_steps), FINISHED)
            per_label[label] = row
            if label in real:
                rows.append(row)
        if want_default:
            base = per_label[default_label]
            rows.append(RuntimeRow(oid, DEFAULT_LABEL, base.cost, base.outcome))
    return BenchResult(rows=rows, features=features, defaults=defaults, parse_failures=failures)


# -------------------------------------------------------------- filtering


def filter_eligible(
    tables: list[list[RuntimeRow]], closeness: float = 0.05
) -> tuple[list[RuntimeRow], list[tuple[str, str]]]:
    """Eligibility filter over one or more repeat tables of the same corpus.

    Drops ontologies that are inconsistent, ontologies where every real
    configuration timed out, and — when several repeat tables are given —
    ontologies whose fastest/slowest configuration identity is unstable
    across repeats while the cost spread is within `closeness` of the
    minimum.  Returns the first table restricted to the retained ontologies
    plus an exclusion log of (ontology id, reason).
    """
    if not tables:
        raise ValueError("no runtime tables")
    primary = tables[0]
    real = set(CONFIG_NUMBERS)
    by_ont = rows_by_ontology([r for r in primary if r.config in real])
    excluded: dict[str, str] = {}
    for oid, rows in sorted(by_ont.items()):
        if any(r.outcome == INCONSISTENT for r in rows):
            excluded[oid] = "inconsistent"
        elif all(r.outcome == TIMEOUT for r in rows):
            excluded[oid] = "all-timeout"
    if len(tables) > 1:
        for oid, rows in sorted(by_ont.items()):
            if oid in excluded:
                continue
            costs = {r.config: r.cost for r in rows}
            spread = max(costs.values()) - min(costs.values())
            if spread >= closeness * min(costs.values()):
                continue
            extremes = set()
            for table in tables:
                trows = [r for r in table if r.ontology_id == oid and r.config in real]
                tcosts = {r.config: r.cost for r in trows}
                lo = min(tcosts, key=lambda c: (tcosts[c], c))
                hi = max(tcosts, key=lambda c: (tcosts[c], c))
                extremes.add((lo, hi))
            if len(extremes) > 1:
                excluded[oid] = "unstable-close-runtimes"
    kept = [r for r in primary if r.ontology_id not in excluded]
    log = sorted(excluded.items())
    return kept, log


def split_train_test(
    ids: list[str], fraction: float = 0.25, seed: int = 0
) -> tuple[list[str], list[str]]:
    """Seeded shuffle split; the test side takes ceil(n * fraction) ids.
    Both sides come back sorted."""
    n = len(ids)
    if n < 4:
        raise TooFewExamples(f"need at least 4 examples to split, got {n}")
    if not 0.0 < fraction < 1.0:
        raise ValueError("fraction must be strictly between 0 and 1")
    rng = np.random.default_rng(seed)
    order = list(rng.permutation(sorted(ids)))
    n_test = math.ceil(n * fraction)
    return sorted(order[n_test:]), sorted(order[:n_test])


# ---------------------------------------------------------------- speedup


@dataclass(frozen=True)
class SpeedupReport:
    ids: tuple[str, ...]
    learned_costs: tuple[float, ...]
    standard_costs: tuple[float, ...]
    ratios: tuple[float, ...]
    max_ratio: float
    mean_ratio: float
    geomean_ratio: float
    learned_sum: float
    standard_sum: float
    learned_mean: float
    standard_mean: float
    learned_timeouts: int
    standard_timeouts: int


def speedup_report(
    learned: dict[str, tuple[float, str]],
    standard: dict[str, tuple[float, str]],
    budget: float,
) -> SpeedupReport:
    """Per-ontology speedup of the learned selector over the standard
    configuration.  Timeouts are valued at the budget; costs are floored at
    one step so every ratio is positive and finite."""
    if set(learned) != set(standard):
        raise MismatchedIds(
            f"learned/standard id mismatch: {sorted(set(learned) ^ set(standard))}"
        )
    ids = tuple(sorted(learned))
    lcosts, scosts, ratios = [], [], []
    lto = sto = 0
    for oid in ids:
        lc, lout = learned[oid]
        sc, sout = standard[oid]
        lc = budget if lout == TIMEOUT else lc
        sc = budget if sout == TIMEOUT else sc
        lc, sc = max(lc, 1.0), max(sc, 1.0)
        lto += lout == TIMEOUT
        sto += sout == TIMEOUT
        lcosts.append(lc)
        scosts.append(sc)
        ratios.append(sc / lc)
    n = len(ids)
    if n == 0:
        raise ValueError("empty cost maps")
    return SpeedupReport(
        ids=ids,
        learned_costs=tuple(lcosts),
        standard_costs=tuple(scosts),
        ratios=tuple(ratios),
        max_ratio=max(ratios),
        mean_ratio=sum(ratios) / n,
        geomean_ratio=math.exp(sum(math.log(r) for r in ratios) / n),
        learned_sum=sum(lcosts),
        standard_sum=sum(scosts),
        learned_mean=sum(lcosts) / n,
        standard_mean=sum(scosts) / n,
        learned_timeouts=lto,
        standard_timeouts=sto,
    )


# ------------------------------------------------------------- end to end


@dataclass(frozen=True)
class PipelineResult:
    bench: BenchResult
    eligible_rows: list[RuntimeRow]
    exclusions: list[tuple[str, str]]
    train_ids: list[str]
    test_ids: list[str]
    bundle: ModelBundle
    selections: dict[str, str]  # test ontology id -> chosen config label
    report: SpeedupReport
    f_scores: dict[str, float]
    report_text: str


def _cost_map(
    rows: list[RuntimeRow], ids: list[str], pick: dict[str, str]
) -> dict[str, tuple[float, str]]:
    indexed = {(r.ontology_id, r.config): r for r in rows}
    out = {}
    for oid in ids:
        row = indexed.get((oid, pick[oid]))
        if row is None:
            raise MismatchedIds(f"no runtime row for {oid} under config {pick[oid]}")
        out[oid] = (row.cost, row.outcome)
    return out


def run_pipeline(
    corpus: list[tuple[str, str]],
    budget: int = 12000,
    seed: int = 0,
    grid: list[GridPoint] | None = None,
    n_folds: int = 10,
    test_fraction: float = 0.25,
) -> PipelineResult:
    """Full experiment: benchmark -> filter -> split -> train -> select ->
    speedup report.  The threshold and all models are fit on training
    ontologies only; the held-out quarter is scored with the learned
    selector against the per-ontology default configuration."""
    bench = run_benchmark(corpus, budget=budget)
    eligible, exclusions = filter_eligible([bench.rows])
    ids = sorted({r.ontology_id for r in eligible})
    train_ids, test_ids = split_train_test(ids, fraction=test_fraction, seed=seed)
    train_set = set(train_ids)
    train_rows = [r for r in eligible if r.ontology_id in train_set and r.config in CONFIG_NUMBERS]
    feature_rows = [(oid, bench.features[oid]) for oid in train_ids]
    bundle = train_model_bundle(feature_rows, train_rows, grid=grid, n_folds=n_folds, seed=seed)

    selections = {oid: select_heuristic(bundle, bench.features[oid]) for oid in test_ids}
    learned = _cost_map(eligible, test_ids, selections)
    standard = _cost_map(eligible, test_ids, {oid: DEFAULT_LABEL for oid in test_ids})
    report = speedup_report(learned, standard, float(budget))

    test_rows = [r for r in eligible if r.ontology_id in set(test_ids) and r.config in CONFIG_NUMBERS]
    truth = label_examples(test_rows, bundle.threshold)
    f_scores: dict[str, float] = {}
    for label in CONFIG_NUMBERS:
        lab = truth[label]
        oids = [oid for oid in test_ids if oid in lab]
        if not oids:
            f_scores[label] = 0.0
            continue
        y_true = np.asarray([lab[oid] for oid in oids])
        y_pred = np.asarray(
            [bundle.models[label].pipeline.predict(
                np.asarray(bench.features[oid].values)[None, :]
            )[0] for oid in oids]
        )
        f_scores[label] = f_score(y_true, y_pred)

    text = render_report(bench, eligible, test_ids, selections, report, f_scores, budget)
    return PipelineResult(
        bench=bench,
        eligible_rows=eligible,
        exclusions=exclusions,
        train_ids=train_ids,
        test_ids=test_ids,
        bundle=bundle,
        selections=selections,
        report=report,
        f_scores=f_scores,
        report_text=text,
    )


# ---------------------------------------------------------------- report


def render_report(
    bench: BenchResult,
    rows: list[RuntimeRow],
    test_ids: list[str],
    selections: dict[str, str],
    report: SpeedupReport,
    f_scores: dict[str, float],
    budget: int,
) -> str:
    """Plain-text report: per-test-ontology cost grid over all orderings
    (chosen one starred, timeouts as TO), per-ordering F-scores, and the
    aggregate speedup and cost-sum statistics."""
    indexed = {(r.ontology_id, r.config): r for r in rows}

    def cell(oid: str, label: str) -> str:
        row = indexed.get((oid, label))
        if row is None:
            return "-"
        body = "TO" if row.outcome == TIMEOUT else f"{row.cost:.0f}"
        return f"*{body}" if selections.get(oid) == label else body

    lines = []
    lines.append("Per-ontology sweep costs on the test split (steps; TO = budget "
                 f"{budget} exhausted; * = selected ordering)")
    header = ["id"] + [f"c{label}" for label in CONFIG_NUMBERS] + [DEFAULT_LABEL, "chosen"]
    lines.append("  ".join(f"{h:>8}" for h in header))
    for oid in test_ids:
        cells = [cell(oid, label) for label in CONFIG_NUMBERS]
        cells.append(cell(oid, DEFAULT_LABEL))
        cells.append(selections.get(oid, "-"))
        lines.append("  ".join(f"{c:>8}" for c in [oid] + cells))
    lines.append("")
    lines.append("Classifier F-scores on the test split (good class positive)")
    lines.append("  ".join(f"{('c' + label):>8}" for label in CONFIG_NUMBERS))
    lines.append("  ".join(f"{f_scores.get(label, 0.0):>8.3f}" for label in CONFIG_NUMBERS))
    lines.append("")
    lines.append("Speedup of learned selection over the default ordering")
    lines.append(f"  maximum ratio:        {report.max_ratio:.2f}")
    lines.append(f"  arithmetic mean:      {report.mean_ratio:.2f}")
    lines.append(f"  geometric mean:       {report.geomean_ratio:.2f}")
    lines.append("")
    lines.append("Cost totals on the test split (timeouts at budget)")
    lines.append(f"  learned:  sum {report.learned_sum:.0f}  mean {report.learned_mean:.2f}"
                 f"  timeouts {report.learned_timeouts}")
    lines.append(f"  standard: sum {report.standard_sum:.0f}  mean {report.standard_mean:.2f}"
                 f"  timeouts {report.standard_timeouts}")
    return "\n".join(lines) + "\n"
