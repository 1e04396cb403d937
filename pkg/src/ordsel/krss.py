"""Parser and printer for the s-expression ontology text format.

Axiom forms, one s-expression per axiom, ``;`` starts a comment:

    (implies C D)        (equivalent C D)      (disjoint C D)
    (implies-role r s)   (transitive r)
    (instance a C)       (related a b r)

Concepts use ``*top*``, ``*bottom*``, bare names, ``(not C)``,
``(and C1 C2 ...)``, ``(or C1 C2 ...)``, ``(some r C)``, ``(all r C)``.
Binary and/or chains are flattened into n-ary nodes while parsing, so
``unparse`` output re-parses to a structurally identical ontology.

Constructs outside ALC (``one-of``, ``at-least``, ...) raise
``UnsupportedConstruct``; malformed input raises ``ParseError`` with the
1-based line and column of the offending token.
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
    Disjointness,
    Equivalence,
    NAME_RE,
    Not,
    Ontology,
    Or,
    RoleAssertion,
    RoleInclusion,
    Some,
    Subsumption,
    Top,
    TOP,
    BOTTOM,
    Transitivity,
    conj,
    disj,
)


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class UnsupportedConstruct(ParseError):
    """A syntactically recognisable construct outside the supported logic."""


# operator heads that belong to richer logics than the one handled here
_NON_ALC = frozenset(
    {
        "one-of",
        "at-least",
        "at-most",
        "exactly",
        "inverse",
        "inv",
        "self",
        "domain",
        "range",
        "functional",
    }
)


@dataclass(frozen=True, slots=True)
class _Tok:
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line = 1
    col = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            toks.append(_Tok(ch, line, col))
            col += 1
            i += 1
        else:
            start = i
            start_col = col
            while i < n and text[i] not in " \t\r\n();":
                i += 1
                col += 1
            toks.append(_Tok(text[start:i], line, start_col))
    return toks


class _Reader:
    def __init__(self, toks: list[_Tok], end_line: int):
        self.toks = toks
        self.pos = 0
        self.end_line = end_line

    def peek(self) -> _Tok | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise ParseError(self.end_line, 1, "unexpected end of input")
        self.pos += 1
        return tok

    def read_form(self):
        """One s-expression: either a _Tok atom or a (head, items, tok) list."""
        tok = self.next()
        if tok.text == ")":
            raise ParseError(tok.line, tok.column, "unexpected ')'")
        if tok.text != "(":
            return tok
        items = []
        while True:
            nxt = self.peek()
            if nxt is None:
                raise ParseError(tok.line, tok.column, "unclosed '('")
            if nxt.text == ")":
                self.next()
                return (items, tok)
            items.append(self.read_form())


class _Builder:
    def __init__(self):
        self.classes: dict[str, None] = {}
        self.roles: dict[str, None] = {}
        self.individuals: dict[str, None] = {}

    def name(self, form, kind: str) -> str:
        if not isinstance(form, _Tok):
            line, col = form[1].line, form[1].column
            raise ParseError(line, col, f"expected a {kind} name")
        if not NAME_RE.match(form.text):
            raise ParseError(form.line, form.column, f"invalid {kind} name {form.text!r}")
        return form.text

    def role(self, form) -> str:
        r = self.name(form, "role")
        self.roles.setdefault(r)
        return r

    def individual(self, form) -> str:
        a = self.name(form, "individual")
        self.individuals.setdefault(a)
        return a

    def concept(self, form) -> Concept:
        if isinstance(form, _Tok):
            if form.text == "*top*":
                return TOP
            if form.text == "*bottom*":
                return BOTTOM
            if form.text in _NON_ALC:
                raise UnsupportedConstruct(form.line, form.column, f"unsupported construct {form.text!r}")
            if not NAME_RE.match(form.text):
                raise ParseError(form.line, form.column, f"invalid class name {form.text!r}")
            self.classes.setdefault(form.text)
            return Atomic(form.text)
        items, open_tok = form
        if not items or not isinstance(items[0], _Tok):
            raise ParseError(open_tok.line, open_tok.column, "expected an operator")
        head = items[0]
        args = items[1:]
        if head.text == "not":
            if len(args) != 1:
                raise ParseError(head.line, head.column, "'not' takes one concept")
            return Not(self.concept(args[0]))
        if head.text in ("and", "or"):
            if len(args) < 2:
                raise ParseError(head.line, head.column, f"'{head.text}' takes at least two concepts")
            parts = [self.concept(a) for a in args]
            return conj(parts) if head.text == "and" else disj(parts)
        if head.text in ("some", "all"):
            if len(args) != 2:
                raise ParseError(head.line, head.column, f"'{head.text}' takes a role and a concept")
            role = self.role(args[0])
            child = self.concept(args[1])
            return Some(role, child) if head.text == "some" else All(role, child)
        if head.text in _NON_ALC:
            raise UnsupportedConstruct(head.line, head.column, f"unsupported construct {head.text!r}")
        raise UnsupportedConstruct(head.line, head.column, f"unknown operator {head.text!r}")


def parse_ontology(text: str) -> Ontology:
    toks = _tokenize(text)
    end_line = text.count("\n") + 1
    reader = _Reader(toks, end_line)
    b = _Builder()
    tbox = []
    rbox = []
    abox = []
    while reader.peek() is not None:
        form = reader.read_form()
        if isinstance(form, _Tok):
            raise ParseError(form.line, form.column, f"expected an axiom, got {form.text!r}")
        items, open_tok = form
        if not items or not isinstance(items[0], _Tok):
            raise ParseError(open_tok.line, open_tok.column, "expected an axiom form")
        head = items[0]
        args = items[1:]
        if head.text == "implies":
            if len(args) != 2:
                raise ParseError(head.line, head.column, "'implies' takes two concepts")
            tbox.append(Subsumption(b.concept(args[0]), b.concept(args[1])))
        elif head.text == "equivalent":
            if len(args) != 2:
                raise ParseError(head.line, head.column, "'equivalent' takes two concepts")
            tbox.append(Equivalence(b.concept(args[0]), b.concept(args[1])))
        elif head.text == "disjoint":
            if len(args) != 2:
                raise ParseError(head.line, head.column, "'disjoint' takes two concepts")
            tbox.append(Disjointness(b.concept(args[0]), b.concept(args[1])))
        elif head.text == "implies-role":
            if len(args) != 2:
                raise ParseError(head.line, head.column, "'implies-role' takes two roles")
            rbox.append(RoleInclusion(b.role(args[0]), b.role(args[1])))
        elif head.text == "transitive":
            if len(args) != 1:
                raise ParseError(head.line, head.column, "'transitive' takes one role")
            rbox.append(Transitivity(b.role(args[0])))
        elif head.text == "instance":
            if len(args) != 2:
                raise ParseError(head.line, head.column, "'instance' takes an individual and a concept")
            abox.append(ConceptAssertion(b.individual(args[0]), b.concept(args[1])))
        elif head.text == "related":
            if len(args) != 3:
                raise ParseError(head.line, head.column, "'related' takes two individuals and a role")
            abox.append(
                RoleAssertion(b.individual(args[0]), b.individual(args[1]), b.role(args[2]))
            )
        elif head.text in _NON_ALC:
            raise UnsupportedConstruct(head.line, head.column, f"unsupported construct {head.text!r}")
        else:
            raise UnsupportedConstruct(head.line, head.column, f"unknown axiom form {head.text!r}")
    return Ontology(
        tbox=tuple(tbox),
        rbox=tuple(rbox),
        abox=tuple(abox),
        classes=tuple(b.classes),
        roles=tuple(b.roles),
        individuals=tuple(b.individuals),
        source_size=len(text.encode("utf-8")),
    )


def unparse_concept(c: Concept) -> str:
    if isinstance(c, Top):
        return "*top*"
    if isinstance(c, Bottom):
        return "*bottom*"
    if isinstance(c, Atomic):
        return c.name
    if isinstance(c, Not):
        return f"(not {unparse_concept(c.child)})"
    if isinstance(c, And):
        return "(and " + " ".join(unparse_concept(x) for x in c.children) + ")"
    if isinstance(c, Or):
        return "(or " + " ".join(unparse_concept(x) for x in c.children) + ")"
    if isinstance(c, Some):
        return f"(some {c.role} {unparse_concept(c.child)})"
    if isinstance(c, All):
        return f"(all {c.role} {unparse_concept(c.child)})"
    raise TypeError(f"not a concept: {c!r}")


def unparse(onto: Ontology) -> str:
    """Render an ontology back to text, one axiom per line."""
    lines = []
    for ax in onto.tbox:
        if isinstance(ax, Subsumption):
            lines.append(f"(implies {unparse_concept(ax.lhs)} {unparse_concept(ax.rhs)})")
        elif isinstance(ax, Equivalence):
            lines.append(f"(equivalent {unparse_concept(ax.lhs)} {unparse_concept(ax.rhs)})")
        else:
            lines.append(f"(disjoint {unparse_concept(ax.lhs)} {unparse_concept(ax.rhs)})")
    for ax in onto.rbox:
        if isinstance(ax, RoleInclusion):
            lines.append(f"(implies-role {ax.sub} {ax.sup})")
        else:
            lines.append(f"(transitive {ax.role})")
    for ax in onto.abox:
        if isinstance(ax, ConceptAssertion):
            lines.append(f"(instance {ax.individual} {unparse_concept(ax.concept)})")
        else:
            lines.append(f"(related {ax.subject} {ax.object} {ax.role})")
    return "\n".join(lines) + ("\n" if lines else "")
