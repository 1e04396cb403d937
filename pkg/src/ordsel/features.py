"""Fixed 39-feature summary of an ontology and its DAG encoding.

Features 1-14 are global ontology metrics, 15-24 describe the
nondeterministic DAG vertices (child statistics use the same signed-child
convention as the ordering heuristics), 25-39 are cheap syntactic and
structural counts.  The order and names below are frozen: they define the
CSV schema and the meaning of model coefficients, so new features must be
appended, never inserted.

Ratios are defined as 0 whenever their denominator is empty, so an empty
ontology maps to the all-zero vector.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .concepts import (
    ConceptAssertion,
    Disjointness,
    Equivalence,
    Ontology,
    Subsumption,
    concept_depth,
    concept_size,
    nnf,
    operator_counts,
)
from .dag import Dag, nondeterministic_vertices, signed_child_stats

FEATURE_NAMES: tuple[str, ...] = (
    "numNominals",
    "numInstances",
    "numClasses",
    "avgPopulation",
    "numGCIs",
    "numGeneratingRules",
    "tboxRatio",
    "rboxRatio",
    "aboxRatio",
    "numObjectProperties",
    "numInverseObjectProperties",
    "numSubclassAxioms",
    "numEquivalentClassAxioms",
    "numDisjointClassAxioms",
    "numNondetVertices",
    "avgOfAvgChildSize",
    "avgOfAvgChildDepth",
    "avgOfAvgChildFrequency",
    "maxChildrenPerVertex",
    "avgChildrenPerVertex",
    "numPositiveChildOccurrences",
    "numNegativeChildOccurrences",
    "positiveChildRatio",
    "negativeChildRatio",
    "totalAxioms",
    "numConjunctions",
    "numDisjunctions",
    "numExistentials",
    "numUniversals",
    "numNegations",
    "maxConceptSize",
    "avgConceptSize",
    "maxConceptDepth",
    "avgConceptDepth",
    "totalDagVertices",
    "nondetVertexRatio",
    "maxChildFrequency",
    "avgDisjunctsPerNondetVertex",
    "sourceSizeBytes",
)

N_FEATURES = len(FEATURE_NAMES)
assert N_FEATURES == 39


@dataclass(frozen=True)
class FeatureVector:
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != N_FEATURES:
            raise ValueError(f"expected {N_FEATURES} features, got {len(self.values)}")

    def __getitem__(self, name: str) -> float:
        return self.values[FEATURE_NAMES.index(name)]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(FEATURE_NAMES, self.values))


def extract_features(onto: Ontology, d: Dag) -> FeatureVector:
    f: dict[str, float] = {}

    num_instances = sum(1 for ax in onto.abox if isinstance(ax, ConceptAssertion))
    num_classes = len(onto.classes)
    n_tbox, n_rbox, n_abox = len(onto.tbox), len(onto.rbox), len(onto.abox)
    total_axioms = n_tbox + n_rbox + n_abox

    f["numNominals"] = 0.0  # nominals are outside the supported logic
    f["numInstances"] = float(num_instances)
    f["numClasses"] = float(num_classes)
    f["avgPopulation"] = num_instances / max(num_classes, 1)
    f["numGCIs"] = float(len(d.gci_refs))

    ops = {"and": 0, "or": 0, "some": 0, "all": 0, "not": 0}
    nnf_some = 0
    sizes: list[int] = []
    depths: list[int] = []
    for expr in onto.concept_expressions():
        operator_counts(expr, ops)
        sizes.append(concept_size(expr))
        depths.append(concept_depth(expr))
        nnf_ops = {"and": 0, "or": 0, "some": 0, "all": 0, "not": 0}
        operator_counts(nnf(expr), nnf_ops)
        nnf_some += nnf_ops["some"]

    f["numGeneratingRules"] = float(nnf_some)
    f["tboxRatio"] = n_tbox / total_axioms if total_axioms else 0.0
    f["rboxRatio"] = n_rbox / total_axioms if total_axioms else 0.0
    f["aboxRatio"] = n_abox / total_axioms if total_axioms else 0.0
    f["numObjectProperties"] = float(len(onto.roles))
    f["numInverseObjectProperties"] = 0.0  # no inverse roles in this logic
    f["numSubclassAxioms"] = float(sum(1 for ax in onto.tbox if isinstance(ax, Subsumption)))
    f["numEquivalentClassAxioms"] = float(sum(1 for ax in onto.tbox if isinstance(ax, Equivalence)))
    f["numDisjointClassAxioms"] = float(sum(1 for ax in onto.tbox if isinstance(ax, Disjointness)))

    nondet = nondeterministic_vertices(d)
    child_sizes_avg: list[float] = []
    child_depths_avg: list[float] = []
    child_freqs_avg: list[float] = []
    child_counts: list[int] = []
    pos_occ = 0
    neg_occ = 0
    max_child_freq = 0.0
    for vid in nondet:
        v = d.vertices[vid]
        stats = [signed_child_stats(d, e) for e in v.children]
        child_sizes_avg.append(sum(s.size for s in stats) / len(stats))
        child_depths_avg.append(sum(s.depth for s in stats) / len(stats))
        child_freqs_avg.append(sum(s.frequency for s in stats) / len(stats))
        child_counts.append(len(v.children))
        pos_occ += sum(1 for e in v.children if not e.negated)
        neg_occ += sum(1 for e in v.children if e.negated)
        max_child_freq = max(max_child_freq, max(s.frequency for s in stats))

    n_nondet = len(nondet)
    f["numNondetVertices"] = float(n_nondet)
    f["avgOfAvgChildSize"] = sum(child_sizes_avg) / n_nondet if n_nondet else 0.0
    f["avgOfAvgChildDepth"] = sum(child_depths_avg) / n_nondet if n_nondet else 0.0
    f["avgOfAvgChildFrequency"] = sum(child_freqs_avg) / n_nondet if n_nondet else 0.0
    f["maxChildrenPerVertex"] = float(max(child_counts)) if child_counts else 0.0
    f["avgChildrenPerVertex"] = sum(child_counts) / n_nondet if n_nondet else 0.0
    f["numPositiveChildOccurrences"] = float(pos_occ)
    f["numNegativeChildOccurrences"] = float(neg_occ)
    occ = pos_occ + neg_occ
    f["positiveChildRatio"] = pos_occ / occ if occ else 0.0
    f["negativeChildRatio"] = neg_occ / occ if occ else 0.0

    f["totalAxioms"] = float(total_axioms)
    f["numConjunctions"] = float(ops["and"])
    f["numDisjunctions"] = float(ops["or"])
    f["numExistentials"] = float(ops["some"])
    f["numUniversals"] = float(ops["all"])
    f["numNegations"] = float(ops["not"])
    f["maxConceptSize"] = float(max(sizes)) if sizes else 0.0
    f["avgConceptSize"] = sum(sizes) / len(sizes) if sizes else 0.0
    f["maxConceptDepth"] = float(max(depths)) if depths else 0.0
    f["avgConceptDepth"] = sum(depths) / len(depths) if depths else 0.0
    f["totalDagVertices"] = float(len(d.vertices))
    f["nondetVertexRatio"] = n_nondet / len(d.vertices) if d.vertices else 0.0
    f["maxChildFrequency"] = float(max_child_freq)
    f["avgDisjunctsPerNondetVertex"] = sum(child_counts) / n_nondet if n_nondet else 0.0
    f["sourceSizeBytes"] = float(onto.source_size)

    return FeatureVector(tuple(f[name] for name in FEATURE_NAMES))


def write_feature_csv(rows: list[tuple[str, FeatureVector]], path: str) -> None:
    """Feature table as CSV; float repr keeps the round trip bit-exact."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("id",) + FEATURE_NAMES)
        for oid, fv in rows:
            w.writerow([oid] + [repr(v) for v in fv.values])


def read_feature_csv(path: str) -> list[tuple[str, FeatureVector]]:
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r, None)
        if header != ["id", *FEATURE_NAMES]:
            raise ValueError(f"unexpected feature CSV header in {path}")
        return [(row[0], FeatureVector(tuple(float(x) for x in row[1:]))) for row in r]
