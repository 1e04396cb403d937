"""Hash-consed DAG encoding of an ontology.

Vertices come in four kinds: ``and`` (n-ary conjunction), ``all`` (value
restriction over one role, exactly one child), ``atom`` and ``top``.
Negation lives on edges, so one vertex serves both polarities:

    or(C1..Cn)  -> negated reference to and(~C1 .. ~Cn)
    some(r, C)  -> negated reference to all(r, ~C)
    *bottom*    -> negated reference to top

A signed reference is a ``(vertex_id, negated)`` pair.  Hash-consing
guarantees at most one vertex per (kind, role/name, signed children) so
repeated subexpressions are shared.  Duplicate children of a single
``and`` collapse; if only one child remains the vertex is elided and the
reference points at the child directly.

A vertex is *nondeterministic* when it is an ``and`` reachable through an
odd number of negated edges in at least one use: under that polarity the
tableau treats it as a disjunction.  Definition roots propagate under both
polarities because an atomic definition unfolds positively and negatively.

Absorption while encoding the TBox:

    (implies A rhs), A atomic      -> told subsumer of A
    (equivalent A rhs), A atomic   -> definition of A, both polarities
    anything else                  -> residual constraint ~lhs | rhs, one
                                      reference per residual, conjoined
                                      into ``gci_constraint``

Disjointness (disjoint L R) is encoded as (implies L (not R)).

Both-polarity unfolding of a definition is only sound when the defined
name is pure: exactly one equivalence, no other axiom with the name as
atomic left-hand side, and no definitional cycle through it.  (With, say,
A = B|C plus A -> B, a node carrying only C would never trigger either
rule on A, yet C forces A and hence B.)  Impure equivalences are split:
the A -> rhs half becomes a told subsumer and the rhs -> A half is
absorbed when rhs is atomic, otherwise internalised as a residual.
"""

from __future__ import annotations

from dataclasses import dataclass

from .concepts import (
    All,
    And,
    Atomic,
    Bottom,
    Concept,
    ConceptAssertion,
    ConceptStats,
    Disjointness,
    Equivalence,
    Not,
    Ontology,
    Or,
    Some,
    Subsumption,
    Top,
    concept_frequency,
)

AND = "and"
ALL = "all"
ATOM = "atom"
TOP_OP = "top"

Ref = tuple[int, bool]


def flip(ref: Ref) -> Ref:
    return (ref[0], not ref[1])


@dataclass(frozen=True, slots=True)
class DagEdge:
    target: int
    negated: bool


@dataclass(frozen=True, slots=True)
class DagVertex:
    op: str
    role: str | None
    name: str | None
    children: tuple[DagEdge, ...]
    stats: ConceptStats
    nondeterministic: bool


@dataclass(frozen=True)
class Dag:
    """Encoded ontology: vertex table plus the unfolding/constraint view.

    ``vertices`` is topologically ordered (children precede parents).
    ``roots`` maps every declared class to its definition reference when
    one exists, otherwise to its atomic vertex; residual constraints
    appear under ``gci:<i>`` keys.
    """

    vertices: tuple[DagVertex, ...]
    roots: dict[str, Ref]
    atom_ids: dict[str, int]
    definitions: dict[str, tuple[Ref, ...]]
    told: dict[str, tuple[Ref, ...]]
    gci_refs: tuple[Ref, ...]
    gci_constraint: Ref | None
    assertion_refs: tuple[Ref, ...]

    @property
    def top_id(self) -> int | None:
        for i, v in enumerate(self.vertices):
            if v.op == TOP_OP:
                return i
        return None


class _Builder:
    def __init__(self):
        self.ops: list[tuple] = []  # (op, role, name, children)
        self.index: dict[tuple, int] = {}
        self.memo: dict[Concept, Ref] = {}
        self.top: int | None = None

    def _vertex(self, op: str, role: str | None, name: str | None, children: tuple[DagEdge, ...]) -> int:
        key = (op, role, name, children)
        vid = self.index.get(key)
        if vid is None:
            for e in children:
                assert e.target < len(self.ops), "child created after parent"
            vid = len(self.ops)
            self.ops.append((op, role, name, children))
            self.index[key] = vid
        return vid

    def top_ref(self) -> Ref:
        if self.top is None:
            self.top = self._vertex(TOP_OP, None, None, ())
        return (self.top, False)

    def atom(self, name: str) -> int:
        return self._vertex(ATOM, None, name, ())

    def conj_ref(self, refs: list[Ref]) -> Ref:
        """And-vertex over already-encoded references, dedup + collapse."""
        edges: list[DagEdge] = []
        seen: set[Ref] = set()
        for r in refs:
            if r not in seen:
                seen.add(r)
                edges.append(DagEdge(r[0], r[1]))
        if len(edges) == 1:
            return (edges[0].target, edges[0].negated)
        return (self._vertex(AND, None, None, tuple(edges)), False)

    def encode(self, c: Concept) -> Ref:
        hit = self.memo.get(c)
        if hit is not None:
            return hit
        if isinstance(c, Top):
            ref = self.top_ref()
        elif isinstance(c, Bottom):
            ref = flip(self.top_ref())
        elif isinstance(c, Atomic):
            ref = (self.atom(c.name), False)
        elif isinstance(c, Not):
            ref = flip(self.encode(c.child))
        elif isinstance(c, And):
            ref = self.conj_ref([self.encode(x) for x in c.children])
        elif isinstance(c, Or):
            ref = flip(self.conj_ref([flip(self.encode(x)) for x in c.children]))
        elif isinstance(c, Some):
            child = flip(self.encode(c.child))
            ref = (self._vertex(ALL, c.role, None, (DagEdge(child[0], child[1]),)), True)
        elif isinstance(c, All):
            child = self.encode(c.child)
            ref = (self._vertex(ALL, c.role, None, (DagEdge(child[0], child[1]),)), False)
        else:
            raise TypeError(f"not a concept: {c!r}")
        self.memo[c] = ref
        return ref


def _atoms_in(c: Concept, acc: set[str]) -> None:
    if isinstance(c, Atomic):
        acc.add(c.name)
    elif isinstance(c, Not):
        _atoms_in(c.child, acc)
    elif isinstance(c, (And, Or)):
        for x in c.children:
            _atoms_in(x, acc)
    elif isinstance(c, (Some, All)):
        _atoms_in(c.child, acc)


def _pure_definition_heads(onto: Ontology) -> dict[str, Concept]:
    """Names eligible for both-polarity unfolding (see module docstring)."""
    heads: dict[str, list[Concept]] = {}
    base: set[str] = set()
    equivs: list[tuple[Concept, Concept]] = []
    for ax in onto.tbox:
        if isinstance(ax, Equivalence):
            lhs, rhs = ax.lhs, ax.rhs
            if not isinstance(lhs, Atomic) and isinstance(rhs, Atomic):
                lhs, rhs = rhs, lhs
            equivs.append((lhs, rhs))
            if isinstance(lhs, Atomic):
                heads.setdefault(lhs.name, []).append(rhs)
        elif isinstance(ax.lhs, Atomic):
            base.add(ax.lhs.name)

    candidates = {n for n, bodies in heads.items() if len(bodies) == 1}

    def cyclic_names(cands: set[str]) -> set[str]:
        # definitional cycles among the current candidates; uses of a name
        # elsewhere are fine
        deps: dict[str, set[str]] = {}
        for n in cands:
            acc: set[str] = set()
            _atoms_in(heads[n][0], acc)
            deps[n] = acc & cands
        state: dict[str, int] = {}
        cyclic: set[str] = set()

        def visit(n: str, path: list[str]) -> None:
            mark = state.get(n)
            if mark == 2 or n in cyclic:
                return
            if mark == 1:
                cyclic.update(path[path.index(n) :])
                return
            state[n] = 1
            path.append(n)
            for m in sorted(deps[n]):
                visit(m, path)
            path.pop()
            state[n] = 2

        for n in sorted(cands):
            visit(n, [])
        return cyclic

    # An equivalence that does not serve as a definition decomposes into
    # told subsumptions constraining every atomic side, which can in turn
    # disqualify further definitions; iterate the (monotone, decreasing)
    # candidate set to its fixed point.
    while True:
        constrained = set(base)
        for lhs, rhs in equivs:
            if isinstance(lhs, Atomic) and lhs.name in candidates:
                continue
            for side in (lhs, rhs):
                if isinstance(side, Atomic):
                    constrained.add(side.name)
        kept = {n for n in candidates if n not in constrained}
        kept -= cyclic_names(kept)
        if kept == candidates:
            break
        candidates = kept

    return {n: heads[n][0] for n in candidates}


def encode_dag(onto: Ontology) -> Dag:
    b = _Builder()
    for name in onto.classes:
        b.atom(name)

    pure = _pure_definition_heads(onto)
    definitions: dict[str, list[Ref]] = {}
    told: dict[str, list[Ref]] = {}
    residual: list[tuple[Concept, Concept]] = []

    def absorb(lhs: Concept, rhs: Concept) -> None:
        if isinstance(lhs, Atomic):
            told.setdefault(lhs.name, []).append(b.encode(rhs))
        else:
            residual.append((lhs, rhs))

    for ax in onto.tbox:
        if isinstance(ax, Subsumption):
            absorb(ax.lhs, ax.rhs)
        elif isinstance(ax, Disjointness):
            absorb(ax.lhs, Not(ax.rhs))
        else:
            lhs, rhs = ax.lhs, ax.rhs
            if not isinstance(lhs, Atomic) and isinstance(rhs, Atomic):
                lhs, rhs = rhs, lhs
            if isinstance(lhs, Atomic) and lhs.name in pure:
                definitions[lhs.name] = [b.encode(rhs)]
            else:
                absorb(lhs, rhs)
                absorb(rhs, lhs)

    gci_refs = [b.encode(Or((Not(lhs), rhs))) for lhs, rhs in residual]
    gci_constraint: Ref | None = None
    if len(gci_refs) == 1:
        gci_constraint = gci_refs[0]
    elif gci_refs:
        gci_constraint = b.conj_ref(list(gci_refs))

    assertion_refs = tuple(
        b.encode(ax.concept) for ax in onto.abox if isinstance(ax, ConceptAssertion)
    )

    n = len(b.ops)

    # polarity propagation for the nondeterministic flag
    parity_seen = [[False, False] for _ in range(n)]
    stack: list[tuple[int, int]] = []

    def seed(ref: Ref, both: bool = False):
        parities = (0, 1) if both else (1 if ref[1] else 0,)
        for p in parities:
            if not parity_seen[ref[0]][p]:
                parity_seen[ref[0]][p] = True
                stack.append((ref[0], p))

    for refs in definitions.values():
        for r in refs:
            seed(r, both=True)
    for refs in told.values():
        for r in refs:
            seed(r)
    if gci_constraint is not None:
        seed(gci_constraint)
    for r in assertion_refs:
        seed(r)
    while stack:
        vid, p = stack.pop()
        for e in b.ops[vid][3]:
            cp = p ^ (1 if e.negated else 0)
            if not parity_seen[e.target][cp]:
                parity_seen[e.target][cp] = True
                stack.append((e.target, cp))

    # parent reference counts for non-atomic vertices
    parents = [0] * n
    for op, _role, _name, children in b.ops:
        for e in children:
            parents[e.target] += 1
    root_refs: list[Ref] = []
    for refs in definitions.values():
        root_refs.extend(refs)
    for refs in told.values():
        root_refs.extend(refs)
    if gci_constraint is not None:
        root_refs.append(gci_constraint)
    else:
        root_refs.extend(gci_refs)
    root_refs.extend(assertion_refs)
    for r in root_refs:
        parents[r[0]] += 1

    sizes = [0] * n
    depths = [0] * n
    for vid, (op, _role, name, children) in enumerate(b.ops):
        if op in (ATOM, TOP_OP):
            sizes[vid] = 1
            depths[vid] = 0
        elif op == ALL:
            e = children[0]
            sizes[vid] = 1 + sizes[e.target] + (1 if e.negated else 0)
            depths[vid] = 1 + depths[e.target]
        else:
            sizes[vid] = 1 + sum(sizes[e.target] + (1 if e.negated else 0) for e in children)
            depths[vid] = max(depths[e.target] for e in children)

    freq_cache: dict[str, int] = {}

    def atom_freq(name: str) -> int:
        if name not in freq_cache:
            freq_cache[name] = concept_frequency(name, onto)
        return freq_cache[name]

    vertices = []
    for vid, (op, role, name, children) in enumerate(b.ops):
        freq = atom_freq(name) if op == ATOM else parents[vid]
        stats = ConceptStats(
            size=sizes[vid],
            depth=depths[vid],
            frequency=freq,
            generating=op == ALL,
        )
        vertices.append(
            DagVertex(
                op=op,
                role=role,
                name=name,
                children=children,
                stats=stats,
                nondeterministic=op == AND and parity_seen[vid][1],
            )
        )

    atom_ids = {v.name: i for i, v in enumerate(vertices) if v.op == ATOM}
    roots: dict[str, Ref] = {}
    for name in onto.classes:
        defs = definitions.get(name)
        roots[name] = defs[0] if defs else (atom_ids[name], False)
    for i, r in enumerate(gci_refs):
        roots[f"gci:{i}"] = r

    return Dag(
        vertices=tuple(vertices),
        roots=roots,
        atom_ids=atom_ids,
        definitions={k: tuple(v) for k, v in definitions.items()},
        told={k: tuple(v) for k, v in told.items()},
        gci_refs=tuple(gci_refs),
        gci_constraint=gci_constraint,
        assertion_refs=assertion_refs,
    )


def nondeterministic_vertices(d: Dag) -> list[int]:
    """Ids of nondeterministic vertices in topological (ascending) order."""
    return [i for i, v in enumerate(d.vertices) if v.nondeterministic]


def vertex_stats(d: Dag, vid: int) -> ConceptStats:
    if not 0 <= vid < len(d.vertices):
        raise ValueError(f"invalid vertex id {vid}")
    return d.vertices[vid].stats


def signed_child_stats(d: Dag, edge: DagEdge) -> ConceptStats:
    """Stats of the child a signed edge denotes.

    A negated edge adds one node for the negation to the size, keeps the
    depth and frequency of the target, and makes the child generating
    exactly when the target is a value restriction (a negated ``all`` is
    an existential).
    """
    s = d.vertices[edge.target].stats
    if not edge.negated:
        return ConceptStats(s.size, s.depth, s.frequency, False)
    return ConceptStats(s.size + 1, s.depth, s.frequency, s.generating)


def decode(d: Dag, ref: Ref) -> Concept:
    """Concept represented by a signed reference, negations materialised."""
    vid, negated = ref
    v = d.vertices[vid]
    if v.op == TOP_OP:
        out: Concept = Top()
    elif v.op == ATOM:
        out = Atomic(v.name)
    elif v.op == ALL:
        e = v.children[0]
        out = All(v.role, decode(d, (e.target, e.negated)))
    else:
        out = And(tuple(decode(d, (e.target, e.negated)) for e in v.children))
    return Not(out) if negated else out


def dump(d: Dag) -> str:
    """Stable one-line-per-vertex table for debugging and golden tests.

    Format: ``id op [signed-child-ids] size depth freq nondet`` with ``~``
    marking negated edges.
    """
    lines = []
    for i, v in enumerate(d.vertices):
        op = v.op if v.op != ALL else f"all:{v.role}"
        if v.op == ATOM:
            op = f"atom:{v.name}"
        kids = " ".join(("~" if e.negated else "") + str(e.target) for e in v.children)
        s = v.stats
        lines.append(
            f"{i} {op} [{kids}] {s.size} {s.depth} {s.frequency} {1 if v.nondeterministic else 0}"
        )
    return "\n".join(lines) + ("\n" if lines else "")
