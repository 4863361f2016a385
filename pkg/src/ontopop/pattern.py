"""Pattern language for axiom generation: variable declarations plus ADD actions.

Grammar (keywords case-insensitive, '?' introduces variables):

    pattern   := decl (',' decl)* 'BEGIN' action (';'? action)* 'END' ';'?
    decl      := '?'name ':' type ('=' genexpr)?
    type      := 'CLASS' | 'OBJECTPROPERTY' | 'INDIVIDUAL'
    genexpr   := classexpr | 'createIntersection' '(' '?'name '.VALUES' ')'
    action    := 'ADD' classexpr ('SubClassOf' | 'equivalentTo') classexpr
    classexpr := restriction ('and' restriction)*
    restriction := atom ('some' restriction)?
    atom      := name (':' name)? | '?'name | '(' classexpr ')'

'some' binds tighter than 'and' and associates to the right; the property
position of a restriction must be a name or a variable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union


class PatternError(Exception):
    """Syntax or static error in a pattern, with 1-based position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class NamedRef:
    """A fixed name: plain (hasNucleation), prefixed (ro:part_of), or a full IRI."""

    text: str


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class SomeRestriction:
    prop: Union[NamedRef, VarRef]
    filler: "ClassExpr"


@dataclass(frozen=True)
class Intersection:
    children: tuple["ClassExpr", ...]


ClassExpr = Union[NamedRef, VarRef, SomeRestriction, Intersection]


class VarType(Enum):
    CLASS = "CLASS"
    OBJECT_PROPERTY = "OBJECTPROPERTY"
    INDIVIDUAL = "INDIVIDUAL"


@dataclass(frozen=True)
class CreateIntersection:
    """createIntersection(?v.VALUES): conjoin every instantiation of v."""

    over: str


GenExpr = Union[ClassExpr, CreateIntersection]


@dataclass(frozen=True)
class VarDecl:
    name: str
    var_type: VarType
    generator: Optional[GenExpr] = None


class AxiomKind(Enum):
    SUBCLASS_OF = "SubClassOf"
    EQUIVALENT_TO = "EquivalentTo"


@dataclass(frozen=True)
class AddAction:
    subject: ClassExpr
    kind: AxiomKind
    object: ClassExpr


@dataclass(frozen=True)
class PatternAst:
    decls: tuple[VarDecl, ...]
    actions: tuple[AddAction, ...]

    def decl(self, name: str) -> Optional[VarDecl]:
        for d in self.decls:
            if d.name == name:
                return d
        return None

    def base_variables(self) -> list[str]:
        return [d.name for d in self.decls if d.generator is None]

    def generated_variables(self) -> list[str]:
        return [d.name for d in self.decls if d.generator is not None]


# -- lexer -------------------------------------------------------------------

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_PUNCT = {
    "?": "QMARK",
    ":": "COLON",
    ",": "COMMA",
    ";": "SEMI",
    "(": "LPAREN",
    ")": "RPAREN",
    "=": "EQUALS",
    ".": "DOT",
}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


def _lex(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    while i < len(source):
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        m = _NAME.match(source, i)
        if m:
            tokens.append(_Token("NAME", m.group(0), line, col))
            col += len(m.group(0))
            i = m.end()
            continue
        kind = _PUNCT.get(ch)
        if kind is None:
            raise PatternError(f"unexpected character {ch!r}", line, col)
        tokens.append(_Token(kind, ch, line, col))
        col += 1
        i += 1
    tokens.append(_Token("EOF", "", line, col))
    return tokens


_KEYWORDS = {
    "BEGIN",
    "END",
    "ADD",
    "AND",
    "SOME",
    "SUBCLASSOF",
    "EQUIVALENTTO",
    "CREATEINTERSECTION",
}

_TYPES = {t.value: t for t in VarType}


# -- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0
        self.symbols: dict[str, VarDecl] = {}

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok: Optional[_Token] = None) -> PatternError:
        tok = tok or self.peek()
        return PatternError(message, tok.line, tok.col)

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.fail(f"expected {what}, found {tok.text or 'end of input'!r}")
        return self.next()

    def at_keyword(self, *keywords: str) -> bool:
        tok = self.peek()
        return tok.kind == "NAME" and tok.text.upper() in keywords

    def is_keyword(self, tok: _Token) -> bool:
        return tok.kind == "NAME" and tok.text.upper() in _KEYWORDS

    # declarations ----------------------------------------------------------

    def parse_pattern(self) -> PatternAst:
        decls = [self.parse_decl()]
        while self.peek().kind == "COMMA":
            self.next()
            decls.append(self.parse_decl())
        if not self.at_keyword("BEGIN"):
            raise self.fail("expected ',' or BEGIN after declaration")
        self.next()
        actions = [self.parse_action()]
        while True:
            if self.peek().kind == "SEMI":
                # either an action separator or the one before END
                if self.tokens[self.pos + 1].kind == "NAME" and self.tokens[
                    self.pos + 1
                ].text.upper() == "ADD":
                    self.next()
                    actions.append(self.parse_action())
                    continue
                break
            if self.at_keyword("ADD"):
                actions.append(self.parse_action())
                continue
            break
        if self.peek().kind == "SEMI":
            self.next()
        if not self.at_keyword("END"):
            raise self.fail("expected END")
        self.next()
        if self.peek().kind == "SEMI":
            self.next()
        self.expect("EOF", "end of input")
        return PatternAst(tuple(decls), tuple(actions))

    def parse_decl(self) -> VarDecl:
        self.expect("QMARK", "'?'")
        name_tok = self.expect("NAME", "variable name")
        if self.is_keyword(name_tok) or name_tok.text.upper() in _TYPES:
            raise self.fail(f"{name_tok.text!r} is reserved", name_tok)
        name = name_tok.text
        if name in self.symbols:
            raise self.fail(f"duplicate variable ?{name}", name_tok)
        self.expect("COLON", "':'")
        type_tok = self.expect("NAME", "variable type")
        var_type = _TYPES.get(type_tok.text.upper())
        if var_type is None:
            raise self.fail(
                f"unknown variable type {type_tok.text!r} "
                "(expected CLASS, OBJECTPROPERTY or INDIVIDUAL)",
                type_tok,
            )
        generator: Optional[GenExpr] = None
        if self.peek().kind == "EQUALS":
            self.next()
            generator = self.parse_genexpr()
        decl = VarDecl(name, var_type, generator)
        self.symbols[name] = decl
        return decl

    def parse_genexpr(self) -> GenExpr:
        if self.at_keyword("CREATEINTERSECTION"):
            self.next()
            self.expect("LPAREN", "'('")
            self.expect("QMARK", "'?'")
            name_tok = self.expect("NAME", "variable name")
            over = self.symbols.get(name_tok.text)
            if over is None:
                raise self.fail(
                    f"?{name_tok.text} is not declared before this point", name_tok
                )
            if over.generator is None:
                raise self.fail(
                    f"createIntersection needs a generated variable, ?{name_tok.text} is not",
                    name_tok,
                )
            if over.var_type is not VarType.CLASS:
                raise self.fail(f"?{name_tok.text} must be a CLASS variable", name_tok)
            self.expect("DOT", "'.'")
            values_tok = self.expect("NAME", "VALUES")
            if values_tok.text.upper() != "VALUES":
                raise self.fail("expected VALUES after '.'", values_tok)
            self.expect("RPAREN", "')'")
            return CreateIntersection(name_tok.text)
        return self.parse_classexpr()

    # class expressions -----------------------------------------------------

    def parse_classexpr(self) -> ClassExpr:
        children = [self.parse_restriction()]
        while self.at_keyword("AND"):
            self.next()
            children.append(self.parse_restriction())
        if len(children) == 1:
            return children[0]
        flat: list[ClassExpr] = []
        for child in children:
            if isinstance(child, Intersection):
                flat.extend(child.children)
            else:
                flat.append(child)
        return Intersection(tuple(flat))

    def parse_restriction(self) -> ClassExpr:
        atom_tok = self.peek()
        atom = self.parse_atom()
        if self.at_keyword("SOME"):
            if not isinstance(atom, (NamedRef, VarRef)):
                raise self.fail("property position must be a name or variable", atom_tok)
            if isinstance(atom, VarRef):
                decl = self.symbols[atom.name]
                if decl.var_type is not VarType.OBJECT_PROPERTY:
                    raise self.fail(
                        f"?{atom.name} is a {decl.var_type.value} variable, "
                        "property position needs OBJECTPROPERTY",
                        atom_tok,
                    )
            self.next()
            filler = self.parse_restriction()
            return SomeRestriction(atom, filler)
        if isinstance(atom, VarRef):
            decl = self.symbols[atom.name]
            if decl.var_type is not VarType.CLASS:
                raise self.fail(
                    f"?{atom.name} is a {decl.var_type.value} variable, "
                    "class position needs CLASS",
                    atom_tok,
                )
        return atom

    def parse_atom(self) -> ClassExpr:
        tok = self.peek()
        if tok.kind == "QMARK":
            self.next()
            name_tok = self.expect("NAME", "variable name")
            if name_tok.text not in self.symbols:
                raise self.fail(f"undeclared variable ?{name_tok.text}", name_tok)
            return VarRef(name_tok.text)
        if tok.kind == "LPAREN":
            self.next()
            inner = self.parse_classexpr()
            self.expect("RPAREN", "')'")
            return inner
        if tok.kind == "NAME":
            if self.is_keyword(tok):
                raise self.fail(f"unexpected keyword {tok.text!r}")
            self.next()
            text = tok.text
            if self.peek().kind == "COLON":
                self.next()
                local_tok = self.expect("NAME", "local name after prefix")
                text = f"{text}:{local_tok.text}"
            return NamedRef(text)
        raise self.fail(f"expected a class expression, found {tok.text or 'end of input'!r}")

    # actions ---------------------------------------------------------------

    def parse_action(self) -> AddAction:
        if not self.at_keyword("ADD"):
            raise self.fail("expected ADD")
        self.next()
        subject = self.parse_classexpr()
        kw = self.peek()
        if kw.kind != "NAME" or kw.text.upper() not in ("SUBCLASSOF", "EQUIVALENTTO"):
            raise self.fail("expected SubClassOf or equivalentTo")
        self.next()
        kind = AxiomKind.SUBCLASS_OF if kw.text.upper() == "SUBCLASSOF" else AxiomKind.EQUIVALENT_TO
        obj = self.parse_classexpr()
        return AddAction(subject, kind, obj)


def parse_pattern(source: str) -> PatternAst:
    """Parse pattern text; raises PatternError with line/column on any defect."""
    return _Parser(_lex(source)).parse_pattern()


# -- printer -----------------------------------------------------------------


def _print_atomish(expr: ClassExpr) -> str:
    """Render with parentheses only where the grammar needs them."""
    if isinstance(expr, NamedRef):
        return expr.text
    if isinstance(expr, VarRef):
        return f"?{expr.name}"
    if isinstance(expr, SomeRestriction):
        return f"{_print_atomish(expr.prop)} some {_print_filler(expr.filler)}"
    return "(" + print_expr(expr) + ")"


def _print_filler(expr: ClassExpr) -> str:
    # restriction fillers chain to the right, only intersections need parens
    if isinstance(expr, Intersection):
        return "(" + print_expr(expr) + ")"
    return _print_atomish(expr)


def print_expr(expr: ClassExpr) -> str:
    if isinstance(expr, Intersection):
        return " and ".join(_print_atomish(c) for c in expr.children)
    return _print_atomish(expr)


def print_pattern(ast: PatternAst) -> str:
    """Canonical text form; parse_pattern(print_pattern(ast)) == ast."""
    lines = []
    for i, decl in enumerate(ast.decls):
        text = f"?{decl.name}:{decl.var_type.value}"
        if isinstance(decl.generator, CreateIntersection):
            text += f" = createIntersection(?{decl.generator.over}.VALUES)"
        elif decl.generator is not None:
            text += f" = {print_expr(decl.generator)}"
        lines.append(text + ("," if i < len(ast.decls) - 1 else ""))
    lines.append("BEGIN")
    for action in ast.actions:
        kw = "SubClassOf" if action.kind is AxiomKind.SUBCLASS_OF else "equivalentTo"
        lines.append(f"ADD {print_expr(action.subject)} {kw} {print_expr(action.object)}")
    lines.append("END;")
    return "\n".join(lines) + "\n"


# -- column binding check ----------------------------------------------------


def _referenced_vars(expr: GenExpr) -> set[str]:
    if isinstance(expr, VarRef):
        return {expr.name}
    if isinstance(expr, SomeRestriction):
        return _referenced_vars(expr.prop) | _referenced_vars(expr.filler)
    if isinstance(expr, Intersection):
        out: set[str] = set()
        for child in expr.children:
            out |= _referenced_vars(child)
        return out
    if isinstance(expr, CreateIntersection):
        return {expr.over}
    return set()


def check_pattern(
    ast: PatternAst, column_names: list[str], binding: dict[str, str]
) -> list[str]:
    """Violations of the variable-to-column mapping; empty means clean.

    Base variables must each map to a distinct existing column; generated
    variables must stay unbound. OBJECTPROPERTY variables may never be bound to
    columns: property positions take fixed names. Binding entries for variables
    the pattern does not declare are ignored, so one binding file can serve a
    list of patterns.
    """
    violations: list[str] = []
    columns = set(column_names)
    bound_columns: dict[str, str] = {}
    for decl in ast.decls:
        column = binding.get(decl.name)
        if decl.generator is not None:
            if column is not None:
                violations.append(
                    f"?{decl.name} is generated and must not be bound (got column {column!r})"
                )
            continue
        if column is None:
            violations.append(f"?{decl.name} is not bound to any column")
            continue
        if decl.var_type is VarType.OBJECT_PROPERTY:
            violations.append(
                f"?{decl.name} is an OBJECTPROPERTY variable and cannot be bound to a column; "
                "use a fixed property name in the pattern"
            )
            continue
        if column not in columns:
            violations.append(f"?{decl.name} is bound to unknown column {column!r}")
            continue
        if column in bound_columns:
            violations.append(
                f"?{decl.name} and ?{bound_columns[column]} are both bound to column {column!r}"
            )
            continue
        bound_columns[column] = decl.name
    return violations
