"""ALC tableau reasoning with learned disjunct expansion-ordering selection.

The package takes an ontology from text to a decision in five stages:
parse (``krss``), encode into a shared DAG (``dag``), order the DAG's
conjunction children under one of twelve heuristics (``heuristics``),
test satisfiability with a budgeted tableau (``tableau``), and summarise
structure as a 39-feature vector (``features``).  ``learn`` trains one
binary classifier per heuristic from benchmark runtimes and picks the
heuristic to run; ``bench`` generates corpora, measures runtimes and
reports speedups.  ``ordsel.cli`` exposes all of it as subcommands.
"""

__version__ = "0.1.0"
