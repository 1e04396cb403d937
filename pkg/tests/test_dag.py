"""Hash-consed DAG encoding with negation on edges."""

import pytest

from conftest import BASIC_TEXT
from ordsel.concepts import And, Atomic, Not, Or, Some
from ordsel.dag import (
    AND,
    ALL,
    ATOM,
    decode,
    dump,
    encode_dag,
    flip,
    nondeterministic_vertices,
    signed_child_stats,
    vertex_stats,
)
from ordsel.krss import parse_ontology
from ordsel.modelsearch import concepts_equivalent

BASIC_DUMP = """\
0 atom:C [] 1 0 3 0
1 atom:D [] 1 0 2 0
2 atom:F [] 1 0 1 0
3 atom:A [] 1 0 1 0
4 all:R [~1] 3 1 1 0
5 and [~0 ~1] 5 0 1 1
"""


def test_worked_example_dump_is_stable():
    d = encode_dag(parse_ontology(BASIC_TEXT))
    assert dump(d) == BASIC_DUMP


def test_disjunction_is_negated_conjunction():
    # or(C, D) lives as a negated reference to and(~C, ~D)
    d = encode_dag(parse_ontology("(implies A (or C D))"))
    (ref,) = d.told["A"]
    vid, negated = ref
    assert negated is True
    v = d.vertices[vid]
    assert v.op == AND
    assert all(e.negated for e in v.children)


def test_existential_is_negated_value_restriction():
    d = encode_dag(parse_ontology("(implies A (some R C))"))
    (ref,) = d.told["A"]
    vid, negated = ref
    assert negated is True
    v = d.vertices[vid]
    assert v.op == ALL
    assert v.role == "R"
    (child,) = v.children
    assert child.negated is True


def test_hash_consing_shares_repeated_subexpressions():
    two_uses = encode_dag(parse_ontology("(implies A (or C D))\n(implies B (or C D))"))
    one_use = encode_dag(parse_ontology("(implies A (or C D))"))
    extra_atom = 1  # B
    assert len(two_uses.vertices) == len(one_use.vertices) + extra_atom
    (ra,) = two_uses.told["A"]
    (rb,) = two_uses.told["B"]
    assert ra == rb


def test_complement_shares_one_vertex():
    # some R Q and all R (not Q) reference the same vertex with opposite signs
    d = encode_dag(parse_ontology("(implies A (some R Q))\n(implies B (all R (not Q)))"))
    (ra,) = d.told["A"]
    (rb,) = d.told["B"]
    assert ra == flip(rb)


def test_duplicate_children_collapse_and_singletons_elide():
    d = encode_dag(parse_ontology("(implies A (and C C))"))
    (ref,) = d.told["A"]
    assert d.vertices[ref[0]].op == ATOM


def test_axiom_routing():
    d = encode_dag(parse_ontology(BASIC_TEXT))
    assert set(d.told) == {"C"}
    assert len(d.told["C"]) == 2
    assert set(d.definitions) == {"A"}
    assert d.gci_refs == ()

    internal = encode_dag(parse_ontology("(implies (or A B) C)"))
    assert len(internal.gci_refs) == 1
    assert internal.gci_constraint is not None


def test_definition_with_extra_constraint_is_not_pure():
    d = encode_dag(parse_ontology("(equivalent A (or B C))\n(implies A F)"))
    assert "A" not in d.definitions
    assert "A" in d.told
    assert len(d.gci_refs) == 1  # the contrapositive half (or B C) -> A


def test_duplicate_definitions_are_not_pure():
    d = encode_dag(parse_ontology("(equivalent A B)\n(equivalent A C)"))
    assert "A" not in d.definitions


def test_definitional_cycle_is_decomposed():
    d = encode_dag(parse_ontology("(equivalent A (some R B))\n(equivalent B (all R A))"))
    assert d.definitions == {}
    assert set(d.told) == {"A", "B"}
    assert len(d.gci_refs) == 2


def test_equivalence_blocked_by_partner_decomposition():
    # The second equivalence cannot define C2 (a subsumption constrains it),
    # so it decomposes into told pairs that in turn disqualify C1's
    # definition; treating C1 as pure anyway would hide the inconsistency.
    text = "(equivalent C1 (not C2))\n(implies C2 (and C2 C2))\n(equivalent C2 C1)\n"
    d = encode_dag(parse_ontology(text))
    assert d.definitions == {}
    assert "C1" in d.told and "C2" in d.told


def test_decode_round_trips_up_to_equivalence():
    cases = [
        Or((Atomic("A"), Atomic("B"))),
        Some("R", And((Atomic("A"), Not(Atomic("B"))))),
        And((Atomic("A"), Or((Atomic("B"), Atomic("C"))))),
        Not(Some("R", Not(Atomic("A")))),
    ]
    for concept in cases:
        onto = parse_ontology(f"(instance x {_krss(concept)})")
        d = encode_dag(onto)
        (ref,) = d.assertion_refs
        assert concepts_equivalent(decode(d, ref), concept)


def _krss(c) -> str:
    from ordsel.krss import unparse_concept

    return unparse_concept(c)


def test_nondeterministic_vertices_are_disjunctions_only():
    d = encode_dag(parse_ontology(BASIC_TEXT))
    assert nondeterministic_vertices(d) == [5]
    # a purely conjunctive ontology has none
    d2 = encode_dag(parse_ontology("(implies A (and B C))"))
    assert nondeterministic_vertices(d2) == []


def test_signed_child_stats_flip_with_edge_sign():
    d = encode_dag(parse_ontology("(implies A (or (some R B) C))"))
    (vid,) = nondeterministic_vertices(d)
    v = d.vertices[vid]
    for edge in v.children:
        stats = signed_child_stats(d, edge)
        raw = vertex_stats(d, edge.target)
        assert stats.size == raw.size + (1 if edge.negated else 0)
        # a negated edge into a value restriction reads as an existential
        if d.vertices[edge.target].op == ALL:
            assert stats.generating == edge.negated
