"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from ordsel.krss import parse_ontology

# A small TBox with one subsumption chain, one equivalence, and a
# disjunction; used wherever a concrete, hand-checkable ontology is needed.
BASIC_TEXT = """\
(implies C (some R D))
(implies C F)
(equivalent A (or C D))
"""

# A TBox whose single class is unsatisfiable.
UNSAT_TEXT = """\
(implies A (and B (not B)))
"""

# Disjunction-heavy TBox with a clash on one branch; ordering-sensitive.
BRANCHY_TEXT = """\
(implies A (and (or P Q) (or P2 Q2) (some R (and B (not B)))))
(implies D (or (and E (not E)) G))
"""


@pytest.fixture
def basic_onto():
    return parse_ontology(BASIC_TEXT)


@pytest.fixture
def branchy_onto():
    return parse_ontology(BRANCHY_TEXT)


# ------------------------------------------------------------------ random
# Random ontology generation for oracle-agreement tests.  The shapes are
# kept inside the exhaustive model-search capacity: few classes and roles,
# quantifier depth <= 2, small conjunctions, and domain size 3.  Shallow
# concepts keep minimal models within three elements so the bounded search
# is an exact oracle for these instances.

_COMBOS = ((2, 1), (3, 1), (4, 1), (2, 2))


def _rand_concept(rng: np.random.Generator, classes, roles, depth: int) -> str:
    roll = rng.random()
    if depth <= 0 or roll < 0.30:
        return str(rng.choice(classes))
    if roll < 0.45:
        return f"(not {_rand_concept(rng, classes, roles, depth - 1)})"
    if roll < 0.60:
        a = _rand_concept(rng, classes, roles, depth - 1)
        b = _rand_concept(rng, classes, roles, depth - 1)
        return f"(and {a} {b})"
    if roll < 0.75:
        a = _rand_concept(rng, classes, roles, depth - 1)
        b = _rand_concept(rng, classes, roles, depth - 1)
        return f"(or {a} {b})"
    role = str(rng.choice(roles))
    inner = _rand_concept(rng, classes, roles, depth - 1)
    if roll < 0.88:
        return f"(some {role} {inner})"
    return f"(all {role} {inner})"


def random_ontology_text(rng: np.random.Generator) -> str:
    """A random ALC TBox small enough for the exhaustive oracle."""
    n_classes, n_roles = _COMBOS[int(rng.integers(len(_COMBOS)))]
    classes = [f"C{i}" for i in range(n_classes)]
    roles = [f"R{i}" for i in range(n_roles)]
    lines = []
    for _ in range(int(rng.integers(2, 7))):
        kind = rng.random()
        if kind < 0.6:
            lhs = str(rng.choice(classes)) if rng.random() < 0.5 else _rand_concept(
                rng, classes, roles, 2
            )
            rhs = _rand_concept(rng, classes, roles, 2)
            lines.append(f"(implies {lhs} {rhs})")
        elif kind < 0.8:
            # Equivalences act in both directions; a nested existential on
            # the right can force minimal models beyond the oracle's domain
            # bound, so their right-hand sides stay quantifier-depth <= 1.
            lhs = str(rng.choice(classes))
            rhs = _rand_concept(rng, classes, roles, 1)
            lines.append(f"(equivalent {lhs} {rhs})")
        else:
            a, b = rng.choice(classes, size=2, replace=False)
            lines.append(f"(disjoint {a} {b})")
    return "\n".join(lines) + "\n"
