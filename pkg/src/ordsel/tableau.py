"""Tableau satisfiability testing over the encoded DAG.

Sound and complete for ALC with general TBoxes: axioms with an atomic
left-hand side are lazily unfolded (equivalences in both polarities),
every residual inclusion is internalised into a global constraint that
joins each node label, and subset blocking against ancestors guarantees
termination.  Branching is syntactic: the disjuncts of a negated ``and``
vertex are tried strictly in the permuted child order, and failure
backtracks chronologically to the most recent open choice.

Each rule application costs one step against a deterministic budget:
conjunction expansion, every disjunction branch entry, successor
creation, value-restriction propagation, lazy unfolding of one atom, and
adding the global constraint to a node.  The run aborts with the
``budget-exceeded`` outcome the first time the counter reaches the
budget, so results are exactly reproducible across machines.

Node labels are fully saturated before successors are generated (no
inverse roles means labels never grow afterwards), which keeps blocking
checks static per node.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from .dag import ALL, AND, ATOM, Dag, Ref, TOP_OP, flip
from .heuristics import OrderedDag

SATISFIABLE = "satisfiable"
UNSATISFIABLE = "unsatisfiable"
BUDGET_EXCEEDED = "budget-exceeded"


@dataclass(frozen=True, slots=True)
class SatResult:
    outcome: str
    steps: int
    branch_points: int
    max_depth: int
    model_size: int | None = None

    @property
    def satisfiable(self) -> bool:
        return self.outcome == SATISFIABLE


@dataclass(frozen=True)
class SweepResult:
    per_class: dict[str, SatResult]
    total_steps: int
    timed_out: bool
    consistency: SatResult

    @property
    def consistent(self) -> bool:
        return self.consistency.outcome != UNSATISFIABLE


class _Budget(Exception):
    pass


class _Search:
    def __init__(self, odag: OrderedDag, budget: int):
        self.odag = odag
        self.verts = odag.dag.vertices
        self.definitions = odag.dag.definitions
        self.told = odag.dag.told
        self.gci = odag.dag.gci_constraint
        self.budget = budget
        self.steps = 0
        self.branch_points = 0
        self.max_depth = 0

    def _step(self):
        self.steps += 1
        if self.steps >= self.budget:
            raise _Budget()

    def _add(self, items: list[Ref], index: set[Ref], ref: Ref) -> bool:
        """Add a reference to a label; False signals a clash."""
        if ref in index:
            return True
        vid, negated = ref
        if (vid, not negated) in index:
            return False
        if negated and self.verts[vid].op == TOP_OP:
            return False
        index.add(ref)
        items.append(ref)
        return True

    def _unfolding(self, name: str, negated: bool) -> tuple[Ref, ...]:
        defs = self.definitions.get(name, ())
        if not negated:
            return tuple(self.told.get(name, ())) + tuple(defs)
        return tuple(flip(r) for r in defs)

    def _node(
        self,
        items: list[Ref],
        index: set[Ref],
        pos: int,
        done: frozenset[Ref],
        ancestors: tuple[frozenset[Ref], ...],
        depth: int,
    ) -> int | None:
        """Saturate one node; returns its model size or None on clash."""
        verts = self.verts
        while pos < len(items):
            vid, negated = items[pos]
            pos += 1
            v = verts[vid]
            if v.op == AND and not negated:
                self._step()
                for e in self.odag.children_in_order(vid):
                    if not self._add(items, index, (e.target, e.negated)):
                        return None
            elif v.op == ATOM:
                adds = self._unfolding(v.name, negated)
                if adds:
                    self._step()
                    for r in adds:
                        if not self._add(items, index, r):
                            return None

        for ref in items:
            vid, negated = ref
            if negated and verts[vid].op == AND and ref not in done:
                self.branch_points += 1
                done2 = done | {ref}
                for e in self.odag.children_in_order(vid):
                    self._step()
                    child = (e.target, not e.negated)
                    if child in index:
                        r = self._node(items, index, len(items), done2, ancestors, depth)
                    elif (child[0], not child[1]) in index or (
                        child[1] and verts[child[0]].op == TOP_OP
                    ):
                        continue
                    else:
                        items2 = items + [child]
                        index2 = set(index)
                        index2.add(child)
                        r = self._node(items2, index2, len(items2) - 1, done2, ancestors, depth)
                    if r is not None:
                        return r
                return None

        label = frozenset(index)
        for anc in ancestors:
            if label <= anc:
                return 0

        total = 1
        deeper = ancestors + (label,)
        for ref in items:
            vid, negated = ref
            v = verts[vid]
            if negated and v.op == ALL:
                self._step()
                if depth + 1 > self.max_depth:
                    self.max_depth = depth + 1
                succ_items: list[Ref] = []
                succ_index: set[Ref] = set()
                e = v.children[0]
                ok = self._add(succ_items, succ_index, (e.target, not e.negated))
                if ok:
                    for vid2, negated2 in items:
                        v2 = verts[vid2]
                        if not negated2 and v2.op == ALL and v2.role == v.role:
                            self._step()
                            e2 = v2.children[0]
                            if not self._add(succ_items, succ_index, (e2.target, e2.negated)):
                                ok = False
                                break
                if ok and self.gci is not None:
                    self._step()
                    ok = self._add(succ_items, succ_index, self.gci)
                if not ok:
                    return None
                r = self._node(succ_items, succ_index, 0, frozenset(), deeper, depth + 1)
                if r is None:
                    return None
                total += r
        return total

    def run(self, target: Ref | None) -> SatResult:
        items: list[Ref] = []
        index: set[Ref] = set()
        try:
            ok = True
            if self.gci is not None:
                self._step()
                ok = self._add(items, index, self.gci)
            if ok and target is not None:
                ok = self._add(items, index, target)
            size = self._node(items, index, 0, frozenset(), (), 0) if ok else None
        except _Budget:
            return SatResult(BUDGET_EXCEEDED, self.steps, self.branch_points, self.max_depth)
        if size is None:
            return SatResult(UNSATISFIABLE, self.steps, self.branch_points, self.max_depth)
        return SatResult(
            SATISFIABLE, self.steps, self.branch_points, self.max_depth, model_size=max(size, 1)
        )


def is_satisfiable(odag: OrderedDag, target: Ref | None, budget: int) -> SatResult:
    """Satisfiability of a signed reference w.r.t. the encoded TBox.

    ``target=None`` tests the TBox alone (same as a *top* target).
    ``budget`` must be >= 1.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    limit = sys.getrecursionlimit()
    if limit < 100_000:
        sys.setrecursionlimit(100_000)
    return _Search(odag, budget).run(target)


def class_ref(d: Dag, name: str) -> Ref:
    vid = d.atom_ids.get(name)
    if vid is None:
        raise KeyError(f"unknown class {name!r}")
    return (vid, False)


def check_tbox_consistency(odag: OrderedDag, budget: int) -> SatResult:
    top = odag.dag.top_id
    return is_satisfiable(odag, None if top is None else (top, False), budget)


def satisfiability_sweep(odag: OrderedDag, budget_per_test: int) -> SweepResult:
    """Consistency check plus one satisfiability test per declared class.

    Classes are visited in declaration (first-mention) order.  The sweep
    aborts at the first budget-exceeded component, mirroring a wall-clock
    timeout of the whole run.
    """
    consistency = check_tbox_consistency(odag, budget_per_test)
    total = consistency.steps
    per_class: dict[str, SatResult] = {}
    timed_out = consistency.outcome == BUDGET_EXCEEDED
    if not timed_out:
        for name in odag.dag.atom_ids:
            res = is_satisfiable(odag, class_ref(odag.dag, name), budget_per_test)
            per_class[name] = res
            total += res.steps
            if res.outcome == BUDGET_EXCEEDED:
                timed_out = True
                break
    return SweepResult(
        per_class=per_class, total_steps=total, timed_out=timed_out, consistency=consistency
    )
