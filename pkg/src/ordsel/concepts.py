"""Concept expressions, axioms and ontologies for the ALC description logic.

Concept grammar:

    C, D ::= *top* | *bottom* | A            (A an atomic class name)
           | (not C)
           | (and C1 ... Cn)                  n >= 2, stored flattened
           | (or  C1 ... Cn)                  n >= 2, stored flattened
           | (some r C) | (all r C)           r a role name

All concept nodes are immutable and hashable so they can be shared and
used as dictionary keys.  ``conj``/``disj`` are the preferred constructors
for programmatic building: they flatten nested operators of the same kind
and collapse trivial arities instead of violating the n >= 2 invariant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

NAME_RE = re.compile(r"[A-Za-z0-9_-]+\Z")


# ---------------------------------------------------------------------------
# concept nodes


class Concept:
    """Base class for concept expression nodes."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Top(Concept):
    pass


@dataclass(frozen=True, slots=True)
class Bottom(Concept):
    pass


@dataclass(frozen=True, slots=True)
class Atomic(Concept):
    name: str


@dataclass(frozen=True, slots=True)
class Not(Concept):
    child: Concept


@dataclass(frozen=True, slots=True)
class And(Concept):
    children: tuple[Concept, ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("conjunction needs at least two children")


@dataclass(frozen=True, slots=True)
class Or(Concept):
    children: tuple[Concept, ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("disjunction needs at least two children")


@dataclass(frozen=True, slots=True)
class Some(Concept):
    role: str
    child: Concept


@dataclass(frozen=True, slots=True)
class All(Concept):
    role: str
    child: Concept


TOP = Top()
BOTTOM = Bottom()


def conj(children: Iterable[Concept]) -> Concept:
    """Conjunction constructor: flattens nested ands, preserves order.

    Zero children yield *top*, a single child is returned as-is.
    """
    flat: list[Concept] = []
    for c in children:
        if isinstance(c, And):
            flat.extend(c.children)
        else:
            flat.append(c)
    if not flat:
        return TOP
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(children: Iterable[Concept]) -> Concept:
    """Disjunction constructor: flattens nested ors, preserves order."""
    flat: list[Concept] = []
    for c in children:
        if isinstance(c, Or):
            flat.extend(c.children)
        else:
            flat.append(c)
    if not flat:
        return BOTTOM
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def neg(c: Concept) -> Concept:
    """Negation constructor that cancels a directly nested negation."""
    if isinstance(c, Not):
        return c.child
    return Not(c)


# ---------------------------------------------------------------------------
# axioms


@dataclass(frozen=True, slots=True)
class Subsumption:
    lhs: Concept
    rhs: Concept


@dataclass(frozen=True, slots=True)
class Equivalence:
    lhs: Concept
    rhs: Concept


@dataclass(frozen=True, slots=True)
class Disjointness:
    lhs: Concept
    rhs: Concept


TboxAxiom = Union[Subsumption, Equivalence, Disjointness]


@dataclass(frozen=True, slots=True)
class RoleInclusion:
    sub: str
    sup: str


@dataclass(frozen=True, slots=True)
class Transitivity:
    role: str


RboxAxiom = Union[RoleInclusion, Transitivity]


@dataclass(frozen=True, slots=True)
class ConceptAssertion:
    individual: str
    concept: Concept


@dataclass(frozen=True, slots=True)
class RoleAssertion:
    subject: str
    object: str
    role: str


AboxAxiom = Union[ConceptAssertion, RoleAssertion]


@dataclass(frozen=True)
class Ontology:
    """A parsed ontology: axiom lists in source order plus declarations.

    Declarations are kept in first-mention order so that downstream
    iteration (satisfiability sweeps, feature extraction) is reproducible
    from the source text alone.  ``source_size`` is the byte length of the
    text the ontology was parsed from; ontologies built programmatically
    carry 0 unless the builder sets it.
    """

    tbox: tuple[TboxAxiom, ...] = ()
    rbox: tuple[RboxAxiom, ...] = ()
    abox: tuple[AboxAxiom, ...] = ()
    classes: tuple[str, ...] = ()
    roles: tuple[str, ...] = ()
    individuals: tuple[str, ...] = ()
    source_size: int = 0

    def concept_expressions(self) -> Iterator[Concept]:
        """Every concept expression: both TBox sides, ABox assertions."""
        for ax in self.tbox:
            yield ax.lhs
            yield ax.rhs
        for ax in self.abox:
            if isinstance(ax, ConceptAssertion):
                yield ax.concept


# ---------------------------------------------------------------------------
# structural operations


def nnf(c: Concept) -> Concept:
    """Negation normal form: negation only in front of atomic concepts."""
    if isinstance(c, (Top, Bottom, Atomic)):
        return c
    if isinstance(c, And):
        return conj(nnf(x) for x in c.children)
    if isinstance(c, Or):
        return disj(nnf(x) for x in c.children)
    if isinstance(c, Some):
        return Some(c.role, nnf(c.child))
    if isinstance(c, All):
        return All(c.role, nnf(c.child))
    if isinstance(c, Not):
        inner = c.child
        if isinstance(inner, Top):
            return BOTTOM
        if isinstance(inner, Bottom):
            return TOP
        if isinstance(inner, Atomic):
            return c
        if isinstance(inner, Not):
            return nnf(inner.child)
        if isinstance(inner, And):
            return disj(nnf(Not(x)) for x in inner.children)
        if isinstance(inner, Or):
            return conj(nnf(Not(x)) for x in inner.children)
        if isinstance(inner, Some):
            return All(inner.role, nnf(Not(inner.child)))
        if isinstance(inner, All):
            return Some(inner.role, nnf(Not(inner.child)))
    raise TypeError(f"not a concept: {c!r}")


def concept_size(c: Concept) -> int:
    """Number of expression nodes; role names do not count."""
    if isinstance(c, (Top, Bottom, Atomic)):
        return 1
    if isinstance(c, Not):
        return 1 + concept_size(c.child)
    if isinstance(c, (And, Or)):
        return 1 + sum(concept_size(x) for x in c.children)
    if isinstance(c, (Some, All)):
        return 1 + concept_size(c.child)
    raise TypeError(f"not a concept: {c!r}")


def concept_depth(c: Concept) -> int:
    """Maximum quantifier nesting (count of some/all on a root-leaf path)."""
    if isinstance(c, (Top, Bottom, Atomic)):
        return 0
    if isinstance(c, Not):
        return concept_depth(c.child)
    if isinstance(c, (And, Or)):
        return max(concept_depth(x) for x in c.children)
    if isinstance(c, (Some, All)):
        return 1 + concept_depth(c.child)
    raise TypeError(f"not a concept: {c!r}")


def _count_atom(c: Concept, name: str) -> int:
    if isinstance(c, Atomic):
        return 1 if c.name == name else 0
    if isinstance(c, (Top, Bottom)):
        return 0
    if isinstance(c, Not):
        return _count_atom(c.child, name)
    if isinstance(c, (And, Or)):
        return sum(_count_atom(x, name) for x in c.children)
    if isinstance(c, (Some, All)):
        return _count_atom(c.child, name)
    raise TypeError(f"not a concept: {c!r}")


def concept_frequency(name: str, onto: Ontology) -> int:
    """Occurrences of a class name across all axiom expressions.

    Counted on the source axioms, before any normalisation, over both
    sides of every TBox axiom and the concepts of ABox assertions.
    A name that never occurs has frequency 0.
    """
    return sum(_count_atom(expr, name) for expr in onto.concept_expressions())


def is_generating(c: Concept) -> bool:
    """True iff the top-level operator is an existential restriction."""
    return isinstance(c, Some)


def operator_counts(c: Concept, acc: dict[str, int]) -> None:
    """Accumulate raw operator counts into ``acc`` (keys: and/or/some/all/not)."""
    if isinstance(c, (Top, Bottom, Atomic)):
        return
    if isinstance(c, Not):
        acc["not"] += 1
        operator_counts(c.child, acc)
    elif isinstance(c, And):
        acc["and"] += 1
        for x in c.children:
            operator_counts(x, acc)
    elif isinstance(c, Or):
        acc["or"] += 1
        for x in c.children:
            operator_counts(x, acc)
    elif isinstance(c, Some):
        acc["some"] += 1
        operator_counts(c.child, acc)
    elif isinstance(c, All):
        acc["all"] += 1
        operator_counts(c.child, acc)
    else:
        raise TypeError(f"not a concept: {c!r}")


@dataclass(frozen=True, slots=True)
class ConceptStats:
    """Size, quantifier depth, frequency and generating flag of a concept.

    For DAG vertices the generating flag marks vertices that act as an
    existential restriction when referenced through a negated edge.
    """

    size: int
    depth: int
    frequency: int
    generating: bool
