"""MiniJ lexer, recursive-descent parser, pretty-printer and body edits.

MiniJ grammar::

    program     := class_decl*
    class_decl  := "class" IDENT ("extends" IDENT)? "{" method_decl* "}"
    method_decl := "def" IDENT "(" ")" "{" stmt* "}"
    stmt        := var_decl | inst_stmt | call_stmt
    var_decl    := "var" IDENT ":" IDENT ";"
    inst_stmt   := "new" IDENT ";"
    call_stmt   := (IDENT ".")? IDENT "(" ")" ";"

``//`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional, Union

from .errors import (
    DuplicateDeclarationError,
    InheritanceCycleError,
    MiniJSyntaxError,
    UndeclaredClassError,
    UndeclaredLocalError,
    UndeclaredTypeError,
    UnknownMethodError,
)

KEYWORDS = frozenset({"class", "extends", "def", "var", "new"})


class MethodId(NamedTuple):
    class_name: str
    method_name: str

    def __str__(self) -> str:
        return f"{self.class_name}.{self.method_name}"

    @classmethod
    def parse(cls, text: str) -> "MethodId":
        cname, sep, mname = text.strip().partition(".")
        if not sep or not cname or not mname:
            raise ValueError(f"expected Class.method, got {text!r}")
        return cls(cname, mname)


@dataclass(frozen=True)
class CallSite:
    index: int
    target_name: str
    # None means the implicit receiver (a bare ``m();``)
    receiver: Optional[str] = None

    @property
    def is_self(self) -> bool:
        return self.receiver is None


# Statement forms, kept only long enough to build a MethodDecl.
@dataclass(frozen=True)
class VarDecl:
    name: str
    type_name: str
    line: int | None = field(default=None, compare=False)
    column: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class NewStmt:
    class_name: str
    line: int | None = field(default=None, compare=False)
    column: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class CallStmt:
    target_name: str
    receiver: Optional[str] = None
    line: int | None = field(default=None, compare=False)
    column: int | None = field(default=None, compare=False)


Statement = Union[VarDecl, NewStmt, CallStmt]


@dataclass(frozen=True)
class MethodDecl:
    owner: str
    name: str
    locals: dict = field(default_factory=dict)
    instantiations: frozenset = frozenset()
    call_sites: tuple = ()

    @property
    def id(self) -> MethodId:
        return MethodId(self.owner, self.name)


@dataclass(frozen=True)
class ClassDecl:
    name: str
    superclass: Optional[str] = None
    methods: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ProgramModel:
    """Parsed MiniJ unit. Treat as immutable; edits go through apply_edit."""

    classes: dict = field(default_factory=dict)

    def method(self, mid: MethodId) -> MethodDecl:
        try:
            return self.classes[mid.class_name].methods[mid.method_name]
        except KeyError:
            raise UnknownMethodError(f"no method {mid}") from None

    def has_method(self, mid: MethodId) -> bool:
        cls = self.classes.get(mid.class_name)
        return cls is not None and mid.method_name in cls.methods

    def methods(self) -> Iterator[MethodDecl]:
        """All method declarations in source order."""
        for cls in self.classes.values():
            yield from cls.methods.values()

    def method_ids(self) -> list[MethodId]:
        return [m.id for m in self.methods()]


@dataclass(frozen=True)
class Delta:
    method: MethodId
    new_body: tuple


# ---------------------------------------------------------------------------
# lexing

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\f\v]+)|(?P<nl>\n)|(?P<comment>//[^\n]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[{}();:.])"
)


class Token(NamedTuple):
    kind: str  # "ident", "kw", "punct" or "eof"
    text: str
    line: int
    column: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise MiniJSyntaxError(
                f"unexpected character {source[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident":
            text = m.group()
            tokens.append(
                Token("kw" if text in KEYWORDS else "ident", text, line, pos - line_start + 1)
            )
        elif kind == "punct":
            tokens.append(Token("punct", m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------------------
# parsing


class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def _fail(self, expected: str):
        tok = self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise MiniJSyntaxError(f"expected {expected}, found {found}", tok.line, tok.column)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "ident":
            self._fail(repr(text))
        tok = self.tok
        self.pos += 1
        return tok

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            self._fail("identifier")
        tok = self.tok
        self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind != "ident"

    def program(self) -> list:
        classes = []
        while self.tok.kind != "eof":
            classes.append(self.class_decl())
        return classes

    def class_decl(self):
        self.expect("class")
        name = self.ident()
        sup = None
        if self.at("extends"):
            self.pos += 1
            sup = self.ident()
        self.expect("{")
        methods = []
        while not self.at("}"):
            methods.append(self.method_decl())
        self.expect("}")
        return name, sup, methods

    def method_decl(self):
        self.expect("def")
        name = self.ident()
        self.expect("(")
        self.expect(")")
        return name, self.body()

    def body(self) -> list:
        self.expect("{")
        stmts = []
        while not self.at("}"):
            stmts.append(self.stmt())
        self.expect("}")
        return stmts

    def stmt(self) -> Statement:
        tok = self.tok
        if self.at("var"):
            self.pos += 1
            name = self.ident()
            self.expect(":")
            type_name = self.ident()
            self.expect(";")
            return VarDecl(name.text, type_name.text, type_name.line, type_name.column)
        if self.at("new"):
            self.pos += 1
            cname = self.ident()
            self.expect(";")
            return NewStmt(cname.text, cname.line, cname.column)
        if tok.kind != "ident":
            self._fail("statement")
        first = self.ident()
        receiver = None
        if self.at("."):
            self.pos += 1
            receiver = first.text
            first = self.ident()
        self.expect("(")
        self.expect(")")
        self.expect(";")
        return CallStmt(first.text, receiver, tok.line, tok.column)


def build_method(owner: str, name: str, stmts, class_names) -> MethodDecl:
    """Validate a statement list against the declared classes and fold it
    into a MethodDecl. Locals may be declared anywhere in the body."""
    local_types: dict[str, str] = {}
    for st in stmts:
        if isinstance(st, VarDecl):
            if st.name in local_types:
                raise DuplicateDeclarationError(
                    f"local {st.name!r} declared twice in {owner}.{name}", st.line, st.column
                )
            if st.type_name not in class_names:
                raise UndeclaredTypeError(
                    f"local {st.name!r} has undeclared type {st.type_name!r}", st.line, st.column
                )
            local_types[st.name] = st.type_name
    insts = set()
    sites = []
    for st in stmts:
        if isinstance(st, NewStmt):
            if st.class_name not in class_names:
                raise UndeclaredTypeError(
                    f"new of undeclared class {st.class_name!r}", st.line, st.column
                )
            insts.add(st.class_name)
        elif isinstance(st, CallStmt):
            if st.receiver is not None and st.receiver not in local_types:
                raise UndeclaredLocalError(
                    f"receiver {st.receiver!r} is not a local of {owner}.{name}",
                    st.line,
                    st.column,
                )
            sites.append(CallSite(len(sites), st.target_name, st.receiver))
    return MethodDecl(owner, name, local_types, frozenset(insts), tuple(sites))


def parse_program(source: str) -> ProgramModel:
    raw = _Parser(source).program()

    class_names: dict[str, Token] = {}
    for name, _sup, _methods in raw:
        if name.text in class_names:
            raise DuplicateDeclarationError(
                f"class {name.text!r} declared twice", name.line, name.column
            )
        class_names[name.text] = name

    parents = {}
    for name, sup, _methods in raw:
        if sup is not None:
            if sup.text == name.text:
                raise InheritanceCycleError(
                    f"class {name.text!r} extends itself", sup.line, sup.column
                )
            if sup.text not in class_names:
                raise UndeclaredClassError(
                    f"class {name.text!r} extends undeclared {sup.text!r}", sup.line, sup.column
                )
            parents[name.text] = sup.text
    _check_acyclic(parents, class_names)

    classes = {}
    for name, sup, methods in raw:
        decls = {}
        for mname, stmts in methods:
            if mname.text in decls:
                raise DuplicateDeclarationError(
                    f"method {name.text}.{mname.text} declared twice", mname.line, mname.column
                )
            decls[mname.text] = build_method(name.text, mname.text, stmts, class_names)
        classes[name.text] = ClassDecl(name.text, sup.text if sup else None, decls)
    return ProgramModel(classes)


def _check_acyclic(parents: dict, class_names: dict) -> None:
    done: set = set()
    for start in parents:
        path = []
        on_path = set()
        c = start
        while c is not None and c not in done:
            if c in on_path:
                cycle = path[path.index(c):] + [c]
                tok = class_names[c]
                raise InheritanceCycleError(
                    "inheritance cycle: " + " -> ".join(cycle), tok.line, tok.column
                )
            path.append(c)
            on_path.add(c)
            c = parents.get(c)
        done.update(path)


# ---------------------------------------------------------------------------
# printing and editing


def body_statements(decl: MethodDecl) -> list:
    stmts: list = [VarDecl(v, t) for v, t in decl.locals.items()]
    stmts += [NewStmt(c) for c in sorted(decl.instantiations)]
    stmts += [CallStmt(s.target_name, s.receiver) for s in decl.call_sites]
    return stmts


def format_statement(st: Statement) -> str:
    if isinstance(st, VarDecl):
        return f"var {st.name}: {st.type_name};"
    if isinstance(st, NewStmt):
        return f"new {st.class_name};"
    if st.receiver is None:
        return f"{st.target_name}();"
    return f"{st.receiver}.{st.target_name}();"


def format_method(decl: MethodDecl, indent: str = "    ") -> str:
    stmts = body_statements(decl)
    if not stmts:
        return f"{indent}def {decl.name}() {{ }}\n"
    lines = [f"{indent}def {decl.name}() {{"]
    lines += [f"{indent}    {format_statement(st)}" for st in stmts]
    lines.append(f"{indent}}}")
    return "\n".join(lines) + "\n"


def format_program(model: ProgramModel) -> str:
    """Canonical source text; ``parse_program`` of the result equals ``model``."""
    out = []
    for cls in model.classes.values():
        head = f"class {cls.name}"
        if cls.superclass:
            head += f" extends {cls.superclass}"
        if not cls.methods:
            out.append(head + " { }\n")
            continue
        out.append(head + " {\n")
        out.extend(format_method(m) for m in cls.methods.values())
        out.append("}\n")
    return "".join(out)


def parse_body(source: str) -> tuple:
    """Parse a brace-delimited statement list, e.g. ``"{ var x: A; x.m(); }"``."""
    p = _Parser(source)
    stmts = p.body()
    if p.tok.kind != "eof":
        p._fail("end of input")
    return tuple(stmts)


def apply_edit(model: ProgramModel, delta: Delta) -> ProgramModel:
    if not model.has_method(delta.method):
        raise UnknownMethodError(f"cannot edit {delta.method}: no such method")
    cname, mname = delta.method
    new_decl = build_method(cname, mname, delta.new_body, model.classes)
    old_cls = model.classes[cname]
    methods = dict(old_cls.methods)
    methods[mname] = new_decl
    classes = dict(model.classes)
    classes[cname] = ClassDecl(old_cls.name, old_cls.superclass, methods)
    return ProgramModel(classes)


def parse_patch(text: str) -> Delta:
    """Read a patch: an ``@@ Class.method`` header line, then the replacement
    ``def method() { ... }`` declaration."""
    lines = text.splitlines()
    idx = 0
    while idx < len(lines) and (not lines[idx].strip() or lines[idx].lstrip().startswith("//")):
        idx += 1
    if idx == len(lines) or not lines[idx].lstrip().startswith("@@"):
        raise MiniJSyntaxError("patch must start with an '@@ Class.method' header", idx + 1, 1)
    header = lines[idx].strip()[2:].strip()
    try:
        mid = MethodId.parse(header)
    except ValueError as exc:
        raise MiniJSyntaxError(str(exc), idx + 1, 1) from None
    # blank out the header so parser positions keep their real line numbers
    rest = "\n" * (idx + 1) + "\n".join(lines[idx + 1:])
    p = _Parser(rest)
    name, stmts = p.method_decl()
    if p.tok.kind != "eof":
        p._fail("end of patch")
    if name.text != mid.method_name:
        raise MiniJSyntaxError(
            f"patch header names {mid} but declares {name.text!r}", name.line, name.column
        )
    return Delta(mid, tuple(stmts))
