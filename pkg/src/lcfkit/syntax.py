"""Concrete syntax: tokenizer, precedence parser with binders, pretty
printer, tactic expressions, and the theory-file grammar.

Precedence, binding tightest first:

    application  >  ~  >  =  >  &  >  |  >  -->  >  <->

with ``-->``, ``&``, ``|`` and ``<->`` right-associative, ``=``
non-associative, and the binders (ALL, EX, %) extending maximally to the
right.  ASCII aliases: ALL/EX/% for the binders, ``&``, ``|``, ``-->``,
``<->``, ``~``, ``False``, ``True``; types are written ``a => b``,
``'a``, ``pair(a, b)``.

Type inference is plain bottom-up constraint solving: unannotated free
variables receive fresh type unknowns, resolved by unification;
``x::t`` annotations are allowed anywhere an atom is.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import errors, kernel
from .kernel import Theory
from .terms import (
    BOOL,
    Abs,
    App,
    Bound,
    Const,
    SVar,
    TCon,
    TVar,
    Term,
    Type,
    Var,
    free_vars,
    fresh_name,
    schematic_vars,
    subst_type,
    type_vars,
)

# --------------------------------------------------------------- notations


@dataclass(frozen=True)
class Notation:
    const: str
    unicode: str
    ascii: str
    prec: int
    assoc: str  # "left" | "right" | "none"


@dataclass(frozen=True)
class BinderNotation:
    const: str
    unicode: str
    ascii: str


@dataclass(frozen=True)
class SyntaxTable:
    infixes: tuple[Notation, ...]
    binders: tuple[BinderNotation, ...]

    def infix_for(self, const: str) -> Notation | None:
        for n in self.infixes:
            if n.const == const:
                return n
        return None

    def with_infix(self, const: str, unicode: str, ascii: str, prec: int, assoc: str) -> "SyntaxTable":
        for n in self.infixes:
            if unicode in (n.unicode, n.ascii) or ascii in (n.unicode, n.ascii):
                raise errors.SignatureError(f"notation {ascii!r} already in use")
        return SyntaxTable(self.infixes + (Notation(const, unicode, ascii, prec, assoc),), self.binders)

    def with_binder(self, const: str, unicode: str, ascii: str) -> "SyntaxTable":
        for b in self.binders:
            if unicode in (b.unicode, b.ascii) or ascii in (b.unicode, b.ascii):
                raise errors.SignatureError(f"binder notation {ascii!r} already in use")
        return SyntaxTable(self.infixes, self.binders + (BinderNotation(const, unicode, ascii),))


APP_PREC = 100
NOT_PREC = 90
EQ_PREC = 70

BASE_SYNTAX = SyntaxTable(
    infixes=(
        Notation("Eq", "=", "=", EQ_PREC, "none"),
        Notation("And", "∧", "&", 60, "right"),
        Notation("Or", "∨", "|", 50, "right"),
        Notation("Imp", "→", "-->", 40, "right"),
        Notation("Iff", "↔", "<->", 30, "right"),
    ),
    binders=(
        BinderNotation("All", "∀", "ALL"),
        BinderNotation("Ex", "∃", "EX"),
        BinderNotation("", "λ", "%"),  # lambda, not a constant
    ),
)


def syntax_of(thy: Theory) -> SyntaxTable:
    for t in thy.ancestors():
        if t.syntax is not None:
            return t.syntax
    return BASE_SYNTAX


def add_infix(thy: Theory, const: str, unicode: str, ascii: str | None = None, prec: int = 65, assoc: str = "right") -> Theory:
    table = syntax_of(thy).with_infix(const, unicode, ascii or unicode, prec, assoc)
    return thy.with_syntax(table)


def add_binder(thy: Theory, const: str, unicode: str, ascii: str | None = None) -> Theory:
    table = syntax_of(thy).with_binder(const, unicode, ascii or unicode)
    return thy.with_syntax(table)


# --------------------------------------------------------------- tokenizer


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_UNICODE_MAP = {
    "∧": "&",
    "∨": "|",
    "→": "-->",
    "⟶": "-->",
    "↔": "<->",
    "¬": "~",
    "∀": "ALL",
    "∃": "EX",
    "λ": "%",
    "⊥": "False",
    "⊤": "True",
    "⇒": "=>",
}

_IDENT_RE = re.compile(r"[^\W\d][\w]*", re.UNICODE)
_SCHEM_RE = re.compile(r"\?([^\W\d][\w]*)(?:\.(\d+))?", re.UNICODE)
_TYVAR_RE = re.compile(r"'([^\W\d][\w]*)", re.UNICODE)
_NUM_RE = re.compile(r"\d+")


def tokenize(text: str, extra_symbols: tuple[str, ...] = ()) -> list[Token]:
    """Longest-match tokenization with line:column positions."""
    fixed = ["-->", "<->", "=>", "::", "(", ")", "[", "]", ".", ",", ":", "=", "&", "|", "~", "%"]
    symbols = sorted(set(fixed) | set(extra_symbols), key=len, reverse=True)
    toks: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c in _UNICODE_MAP:
            mapped = _UNICODE_MAP[c]
            kind = "IDENT" if mapped[0].isalpha() else "SYM"
            toks.append(Token(kind, mapped, line, col))
            i += 1
            col += 1
            continue
        m = _SCHEM_RE.match(text, i)
        if m:
            toks.append(Token("SCHEM", m.group(0), line, col))
            col += m.end() - i
            i = m.end()
            continue
        m = _TYVAR_RE.match(text, i)
        if m:
            toks.append(Token("TYVAR", m.group(1), line, col))
            col += m.end() - i
            i = m.end()
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            toks.append(Token("IDENT", m.group(0), line, col))
            col += m.end() - i
            i = m.end()
            continue
        m = _NUM_RE.match(text, i)
        if m:
            toks.append(Token("NUM", m.group(0), line, col))
            col += m.end() - i
            i = m.end()
            continue
        for s in symbols:
            if text.startswith(s, i):
                toks.append(Token("SYM", s, line, col))
                col += len(s)
                i += len(s)
                break
        else:
            raise errors.ParseError(f"unexpected character {c!r}", line, col)
    toks.append(Token("EOF", "", line, col))
    return toks


# ------------------------------------------------------------- term parser


class _P:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, text: str | None = None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            raise errors.ParseError(f"expected {want!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return self.next()

    def at_sym(self, text: str) -> bool:
        return self.tok.kind == "SYM" and self.tok.text == text

    def err(self, msg: str):
        raise errors.ParseError(msg, self.tok.line, self.tok.col)


# pre-terms


@dataclass
class PName:
    name: str
    line: int
    col: int


@dataclass
class PSchem:
    name: str
    index: int
    line: int
    col: int


@dataclass
class PApp:
    fn: object
    arg: object


@dataclass
class PBinder:
    kind: str  # constant name, or "" for lambda
    binders: list[tuple[str, Type | None]]
    body: object


@dataclass
class POp:
    const: str
    line: int
    col: int


@dataclass
class PAnnot:
    inner: object
    ty: Type


def _parse_type(p: _P) -> Type:
    left = _parse_type_atom(p)
    if p.at_sym("=>"):
        p.next()
        return TCon("fun", (left, _parse_type(p)))
    return left


def _parse_type_atom(p: _P) -> Type:
    t = p.tok
    if t.kind == "TYVAR":
        p.next()
        return TVar(t.text)
    if t.kind == "IDENT":
        p.next()
        if p.at_sym("("):
            p.next()
            args = [_parse_type(p)]
            while p.at_sym(","):
                p.next()
                args.append(_parse_type(p))
            p.expect("SYM", ")")
            return TCon(t.text, tuple(args))
        return TCon(t.text)
    if p.at_sym("("):
        p.next()
        ty = _parse_type(p)
        p.expect("SYM", ")")
        return ty
    p.err("expected a type")


class _TermParser:
    def __init__(self, p: _P, table: SyntaxTable):
        self.p = p
        self.table = table
        self.infix_by_symbol: dict[str, Notation] = {}
        for n in table.infixes:
            self.infix_by_symbol[n.ascii] = n
            self.infix_by_symbol[n.unicode] = n
        self.binder_by_kw: dict[str, BinderNotation] = {}
        for b in table.binders:
            self.binder_by_kw[b.ascii] = b
            self.binder_by_kw[b.unicode] = b

    def binder_at(self) -> BinderNotation | None:
        t = self.p.tok
        if t.kind in ("IDENT", "SYM") and t.text in self.binder_by_kw:
            return self.binder_by_kw[t.text]
        return None

    def parse(self, level: int = 0):
        b = self.binder_at()
        if b is not None:
            return self.parse_binder(b)
        left = self.parse_prefix(level)
        last_nonassoc: int | None = None
        while True:
            t = self.p.tok
            n = self.infix_by_symbol.get(t.text) if t.kind == "SYM" else None
            if n is None or n.prec < level:
                return left
            if n.assoc == "none" and n.prec == last_nonassoc:
                self.p.err(f"{t.text!r} is not associative; add parentheses")
            self.p.next()
            if n.assoc == "right":
                right = self.parse(n.prec)
            else:
                right = self.parse(n.prec + 1)
            last_nonassoc = n.prec if n.assoc == "none" else None
            left = PApp(PApp(POp(n.const, t.line, t.col), left), right)

    def parse_prefix(self, level: int):
        t = self.p.tok
        if t.kind == "SYM" and t.text == "~":
            self.p.next()
            b = self.binder_at()
            inner = self.parse_binder(b) if b is not None else self.parse_prefix(NOT_PREC)
            return PApp(POp("Not", t.line, t.col), inner)
        return self.parse_app()

    def parse_binder(self, b: BinderNotation):
        kw = self.p.next()
        binders: list[tuple[str, Type | None]] = []
        while self.p.tok.kind == "IDENT" and self.p.tok.text not in self.binder_by_kw:
            name = self.p.next().text
            ty: Type | None = None
            if self.p.at_sym("::"):
                self.p.next()
                ty = _parse_type(self.p)
            binders.append((name, ty))
        if not binders:
            self.p.err(f"binder {kw.text!r} needs at least one variable")
        self.p.expect("SYM", ".")
        body = self.parse(0)
        return PBinder(b.const, binders, body)

    def parse_app(self):
        out = self.parse_primary()
        while True:
            t = self.p.tok
            if t.kind in ("IDENT", "SCHEM") and t.text not in self.binder_by_kw:
                out = PApp(out, self.parse_primary())
            elif t.kind == "SYM" and t.text == "(":
                out = PApp(out, self.parse_primary())
            else:
                return out

    def parse_primary(self):
        t = self.p.tok
        if t.kind == "IDENT" and t.text not in self.binder_by_kw:
            self.p.next()
            node: object = PName(t.text, t.line, t.col)
            return self.maybe_annot(node)
        if t.kind == "SCHEM":
            self.p.next()
            m = _SCHEM_RE.fullmatch(t.text)
            return self.maybe_annot(PSchem(m.group(1), int(m.group(2) or 0), t.line, t.col))
        if t.kind == "SYM" and t.text == "(":
            self.p.next()
            inner = self.p.tok
            if inner.kind == "SYM" and inner.text in self.infix_by_symbol and self.p.toks[self.p.i + 1].text == ")":
                n = self.infix_by_symbol[inner.text]
                self.p.next()
                self.p.expect("SYM", ")")
                return self.maybe_annot(POp(n.const, inner.line, inner.col))
            if inner.kind == "SYM" and inner.text == "~" and self.p.toks[self.p.i + 1].text == ")":
                self.p.next()
                self.p.expect("SYM", ")")
                return self.maybe_annot(POp("Not", inner.line, inner.col))
            out = self.parse(0)
            self.p.expect("SYM", ")")
            return self.maybe_annot(out)
        self.p.err(f"unexpected {t.text or 'end of input'!r}")

    def maybe_annot(self, node):
        if self.p.at_sym("::"):
            self.p.next()
            return PAnnot(node, _parse_type(self.p))
        return node


# ------------------------------------------------------------ type inference


class _Infer:
    def __init__(self):
        self.subst: dict[str, Type] = {}
        self.n = 0

    def fresh(self) -> TVar:
        self.n += 1
        return TVar(f"_{self.n}")

    def resolve(self, ty: Type) -> Type:
        while isinstance(ty, TVar) and ty.name in self.subst:
            ty = self.subst[ty.name]
        if isinstance(ty, TCon) and ty.args:
            return TCon(ty.name, tuple(self.resolve(a) for a in ty.args))
        return ty

    def unify(self, a: Type, b: Type, line: int, col: int):
        a = self.resolve(a)
        b = self.resolve(b)
        if a == b:
            return
        if isinstance(a, TVar):
            if a.name in type_vars(b):
                raise errors.ParseError(f"type inference failure: {a} occurs in {b}", line, col)
            self.subst[a.name] = b
            return
        if isinstance(b, TVar):
            self.subst[b.name] = a
            return
        if a.name != b.name or len(a.args) != len(b.args):
            raise errors.ParseError(f"type mismatch: {a} vs {b}", line, col)
        for x, y in zip(a.args, b.args):
            self.unify(x, y, line, col)


def _elaborate(thy: Theory, node, inf: _Infer, bound: list[tuple[str, Type]], frees: dict[str, Type], schems: dict[tuple[str, int], Type]) -> tuple[Term, Type]:
    match node:
        case PName(name, line, col):
            for k, (bn, bty) in enumerate(reversed(bound)):
                if bn == name:
                    return Bound(k), bty
            decl = thy.lookup_const(name)
            if decl is not None:
                inst = {tv: inf.fresh() for tv in sorted(type_vars(decl))}
                ty = subst_type(decl, inst)
                return Const(name, ty), ty
            if name in frees:
                return Var(name, frees[name]), frees[name]
            ty = inf.fresh()
            frees[name] = ty
            return Var(name, ty), ty
        case PSchem(name, index, line, col):
            key = (name, index)
            if key not in schems:
                schems[key] = inf.fresh()
            ty = schems[key]
            return SVar(name, index, ty), ty
        case POp(const, line, col):
            decl = thy.lookup_const(const)
            if decl is None:
                raise errors.ParseError(f"unknown constant {const}", line, col)
            inst = {tv: inf.fresh() for tv in sorted(type_vars(decl))}
            ty = subst_type(decl, inst)
            return Const(const, ty), ty
        case PApp(fn, arg):
            f, fty = _elaborate(thy, fn, inf, bound, frees, schems)
            a, aty = _elaborate(thy, arg, inf, bound, frees, schems)
            res = inf.fresh()
            line, col = _pos(arg)
            inf.unify(fty, TCon("fun", (aty, res)), line, col)
            return App(f, a), res
        case PBinder(kind, binders, body):
            tys = []
            for name, ty in binders:
                tys.append(ty if ty is not None else inf.fresh())
            for (name, _), ty in zip(binders, tys):
                bound.append((name, ty))
            b, bty = _elaborate(thy, body, inf, bound, frees, schems)
            for _ in binders:
                bound.pop()
            for (name, _), ty in reversed(list(zip(binders, tys))):
                if kind == "":
                    b = Abs(name, ty, b)
                    bty = TCon("fun", (ty, bty))
                else:
                    line, col = _pos(body)
                    inf.unify(bty, BOOL, line, col)
                    b = App(Const(kind, TCon("fun", (TCon("fun", (ty, BOOL)), BOOL))), Abs(name, ty, b))
                    bty = BOOL
            return b, bty
        case PAnnot(inner, ty):
            t, ity = _elaborate(thy, inner, inf, bound, frees, schems)
            line, col = _pos(inner)
            inf.unify(ity, ty, line, col)
            return t, ity
    raise errors.ParseError(f"cannot elaborate {node!r}")


def _pos(node) -> tuple[int, int]:
    match node:
        case PName(_, line, col) | PSchem(_, _, line, col) | POp(_, line, col):
            return line, col
        case PApp(fn, _):
            return _pos(fn)
        case PBinder(_, _, body):
            return _pos(body)
        case PAnnot(inner, _):
            return _pos(inner)
    return 0, 0


def _finalize_types(t: Term, inf: _Infer) -> Term:
    """Resolve inference unknowns; canonicalize leftovers to 'a, 'b, ..."""
    mapping: dict[str, Type] = {}
    used: set[str] = set()

    def canon_name() -> str:
        letters = "abcdefghijklmnopqrstuvwxyz"
        i = 0
        while True:
            name = letters[i % 26] + ("" if i < 26 else str(i // 26))
            if name not in used:
                used.add(name)
                return name
            i += 1

    def fix_ty(ty: Type) -> Type:
        ty = inf.resolve(ty)
        if isinstance(ty, TVar):
            if ty.name.startswith("_"):
                if ty.name not in mapping:
                    mapping[ty.name] = TVar(canon_name())
                return mapping[ty.name]
            used.add(ty.name)
            return ty
        if ty.args:
            return TCon(ty.name, tuple(fix_ty(a) for a in ty.args))
        return ty

    # collect user type-variable names first so canonical names avoid them
    def scan(ty: Type):
        ty = inf.resolve(ty)
        if isinstance(ty, TVar):
            if not ty.name.startswith("_"):
                used.add(ty.name)
        else:
            for a in ty.args:
                scan(a)

    def walk_scan(t: Term):
        match t:
            case Var(_, ty) | SVar(_, _, ty) | Const(_, ty):
                scan(ty)
            case App(f, a):
                walk_scan(f)
                walk_scan(a)
            case Abs(_, ty, b):
                scan(ty)
                walk_scan(b)
            case _:
                pass

    def walk(t: Term) -> Term:
        match t:
            case Var(n, ty):
                return Var(n, fix_ty(ty))
            case SVar(n, i, ty):
                return SVar(n, i, fix_ty(ty))
            case Const(n, ty):
                return Const(n, fix_ty(ty))
            case App(f, a):
                return App(walk(f), walk(a))
            case Abs(v, ty, b):
                return Abs(v, fix_ty(ty), walk(b))
            case _:
                return t

    walk_scan(t)
    return walk(t)


def _table_symbols(table: SyntaxTable) -> tuple[str, ...]:
    out = []
    for n in table.infixes:
        for s in (n.ascii, n.unicode):
            if s and not s[0].isalpha():
                out.append(s)
    return tuple(out)


def parse_term(thy: Theory, text: str, expect: Type | None = None) -> Term:
    """Parse and type-check a term; errors carry line:column."""
    table = syntax_of(thy)
    p = _P(tokenize(text, _table_symbols(table)))
    tp = _TermParser(p, table)
    node = tp.parse(0)
    if p.tok.kind != "EOF":
        p.err(f"unexpected {p.tok.text!r} after the term")
    inf = _Infer()
    t, ty = _elaborate(thy, node, inf, [], {}, {})
    if expect is not None:
        inf.unify(ty, expect, *_pos(node))
    t = _finalize_types(t, inf)
    kernel.check_term(thy, t)
    return t


def parse_formula(thy: Theory, text: str) -> Term:
    t = parse_term(thy, text, expect=BOOL)
    kernel.check_formula(thy, t)
    return t


# ------------------------------------------------------------ pretty printer


def _sym(n: Notation, mode: str) -> str:
    return n.unicode if mode == "unicode" else n.ascii


def print_type(ty: Type) -> str:
    return str(ty)


class _Printer:
    def __init__(self, thy: Theory, mode: str, annotate: bool):
        self.table = syntax_of(thy)
        self.mode = mode
        self.annotate = annotate
        self.seen: set[str] = set()

    def binder_symbol(self, const: str) -> str:
        for b in self.table.binders:
            if b.const == const:
                return b.unicode if self.mode == "unicode" else (b.ascii + " " if b.ascii.isalpha() else b.ascii)
        return const

    def show(self, t: Term, level: int, right_edge: bool, bound: list[str], avoid: set[str]) -> str:
        b = self.dest_binder(t)
        if b is not None:
            const, abs_t = b
            if not right_edge:
                inner = self.show(t, 0, True, bound, avoid)
                return f"({inner})"
            nm = fresh_name(abs_t.var or "x", avoid | set(bound))
            body = abs_t.body
            sym = self.binder_symbol(const) if const else ("λ" if self.mode == "unicode" else "%")
            ann = f"::{print_type(abs_t.ty)}" if self.annotate else ""
            bound.append(nm)
            s = self.show(body, 0, True, bound, avoid)
            bound.pop()
            return f"{sym}{nm}{ann}. {s}"
        match t:
            case App(App(Const(cn, _), a), b2) if self.table.infix_for(cn) is not None:
                n = self.table.infix_for(cn)
                if n.assoc == "right":
                    lp, rp = n.prec + 1, n.prec
                elif n.assoc == "left":
                    lp, rp = n.prec, n.prec + 1
                else:
                    lp, rp = n.prec + 1, n.prec + 1
                ls = self.show(a, lp, False, bound, avoid)
                rs = self.show(b2, rp, right_edge and n.prec >= level, bound, avoid)
                s = f"{ls} {_sym(n, self.mode)} {rs}"
                return s if n.prec >= level else f"({s})"
            case App(Const("Not", _), a):
                inner = self.show(a, NOT_PREC, right_edge and NOT_PREC >= level, bound, avoid)
                neg = "¬" if self.mode == "unicode" else "~"
                s = f"{neg}{inner}"
                return s if NOT_PREC >= level else f"({s})"
            case App(f, a):
                fs = self.show(f, APP_PREC, False, bound, avoid)
                as_ = self.show(a, APP_PREC + 1, False, bound, avoid)
                s = f"{fs} {as_}"
                return s if APP_PREC >= level else f"({s})"
            case Const(name, _):
                n = self.table.infix_for(name)
                if n is not None:
                    return f"({_sym(n, self.mode)})"
                if name == "Not":
                    return "(¬)" if self.mode == "unicode" else "(~)"
                if name in ("True", "False") and self.mode == "unicode":
                    return "⊤" if name == "True" else "⊥"
                return name
            case Var(name, ty):
                if self.annotate and name not in self.seen:
                    self.seen.add(name)
                    return f"({name}::{print_type(ty)})"
                return name
            case SVar(name, index, ty):
                s = f"?{name}" if index == 0 else f"?{name}.{index}"
                if self.annotate and s not in self.seen:
                    self.seen.add(s)
                    s2 = f"{s}::{print_type(ty)}"
                    return f"({s2})"
                return s
            case Bound(k):
                if k < len(bound):
                    return bound[-1 - k]
                return f".{k}"
            case Abs(_, _, _):
                raise AssertionError("handled by dest_binder")
        raise errors.ParseError(f"cannot print {t!r}")

    def dest_binder(self, t: Term):
        match t:
            case Abs(_, _, _):
                return "", t
            case App(Const(cn, _), Abs(_, _, _) as a):
                for b in self.table.binders:
                    if b.const == cn and cn:
                        return cn, a
        return None


def _print_with(thy: Theory, t: Term, mode: str, annotate: bool) -> str:
    pr = _Printer(thy, mode, annotate)
    avoid = {v.name for v in free_vars(t)} | {f"?{s.name}" for s in schematic_vars(t)}
    out = pr.show(t, 0, True, [], avoid)
    return out


def print_term(thy: Theory, t: Term, mode: str = "unicode", expect: Type | None = None) -> str:
    """Minimal parenthesization; falls back to type-annotated output when
    the plain rendering would not parse back to the same term.  Callers
    that display formulas pass ``expect=BOOL`` so that a bare atom need
    not carry its type."""
    s = _print_with(thy, t, mode, annotate=False)
    try:
        back = parse_term(thy, s, expect=expect)
        if back == t:
            return s
    except errors.LcfError:
        pass
    return _print_with(thy, t, mode, annotate=True)


def print_formula(thy: Theory, t: Term, mode: str = "unicode") -> str:
    return print_term(thy, t, mode, expect=BOOL)


# ---------------------------------------------------------- tactic grammar


@dataclass(frozen=True)
class TRule:
    name: str


@dataclass(frozen=True)
class TErule:
    name: str


@dataclass(frozen=True)
class TAssumption:
    pass


@dataclass(frozen=True)
class TSimp:
    add: tuple[str, ...] = ()


@dataclass(frozen=True)
class TTaut:
    pass


@dataclass(frozen=True)
class TBlast:
    depth: int | None = None


@dataclass(frozen=True)
class TRepeat:
    body: object


@dataclass(frozen=True)
class TTry:
    body: object


@dataclass(frozen=True)
class TThen:
    left: object
    right: object


@dataclass(frozen=True)
class TOrelse:
    left: object
    right: object


def parse_tactic(text: str):
    """Tactic expressions: `rule R`, `erule R`, `assumption`,
    `simp [add: R ...]`, `taut`, `blast D`, combinators `,` (then),
    `|` (orelse), `repeat(...)`, `try(...)`."""
    p = _P(tokenize(text))
    expr = _parse_tac_seq(p)
    if p.tok.kind != "EOF":
        p.err(f"unexpected {p.tok.text!r} in tactic expression")
    return expr


def _parse_tac_seq(p: _P):
    left = _parse_tac_alt(p)
    while p.at_sym(","):
        p.next()
        left = TThen(left, _parse_tac_alt(p))
    return left


def _parse_tac_alt(p: _P):
    left = _parse_tac_prim(p)
    while p.at_sym("|"):
        p.next()
        left = TOrelse(left, _parse_tac_prim(p))
    return left


def _parse_tac_prim(p: _P):
    t = p.tok
    if p.at_sym("("):
        p.next()
        inner = _parse_tac_seq(p)
        p.expect("SYM", ")")
        return inner
    if t.kind != "IDENT":
        p.err(f"expected a tactic, found {t.text!r}")
    name = p.next().text
    if name == "rule":
        return TRule(p.expect("IDENT").text)
    if name == "erule":
        return TErule(p.expect("IDENT").text)
    if name == "assumption":
        return TAssumption()
    if name == "taut":
        return TTaut()
    if name == "blast":
        if p.tok.kind == "NUM":
            return TBlast(int(p.next().text))
        return TBlast(None)
    if name == "simp":
        adds: list[str] = []
        if p.at_sym("["):
            p.next()
            p.expect("IDENT", "add")
            p.expect("SYM", ":")
            while p.tok.kind == "IDENT":
                adds.append(p.next().text)
            p.expect("SYM", "]")
        return TSimp(tuple(adds))
    if name == "repeat":
        p.expect("SYM", "(")
        inner = _parse_tac_seq(p)
        p.expect("SYM", ")")
        return TRepeat(inner)
    if name == "try":
        p.expect("SYM", "(")
        inner = _parse_tac_seq(p)
        p.expect("SYM", ")")
        return TTry(inner)
    p.err(f"unknown tactic {name!r}")


# ------------------------------------------------------------ theory files


@dataclass(frozen=True)
class DType:
    name: str
    arity: int
    line: int


@dataclass(frozen=True)
class DConst:
    name: str
    ty: Type
    line: int


@dataclass(frozen=True)
class DDefinition:
    name: str
    body: str
    line: int


@dataclass(frozen=True)
class DAxiom:
    name: str
    body: str
    line: int


@dataclass(frozen=True)
class DTheorem:
    name: str
    body: str
    tactics: tuple[object, ...]
    line: int


Declaration = DType | DConst | DDefinition | DAxiom | DTheorem


@dataclass(frozen=True)
class TheoryFile:
    name: str
    imports: tuple[str, ...]
    decls: tuple[Declaration, ...]


def parse_theory(text: str) -> TheoryFile:
    """Parse a .lthy theory file into its header and declarations."""
    lines = text.split("\n")
    idx = 0

    def peek() -> tuple[int, str] | None:
        nonlocal idx
        while idx < len(lines):
            stripped = lines[idx].split("#", 1)[0].rstrip()
            if stripped.strip():
                return idx + 1, stripped
            idx += 1
        return None

    def advance():
        nonlocal idx
        idx += 1

    got = peek()
    if got is None:
        raise errors.ParseError("missing theory header", 1, 1)
    lineno, header = got
    m = re.fullmatch(r"\s*theory\s+(\w+)(?:\s+imports\s+((?:\w+\s*)+))?\s*", header)
    if not m:
        raise errors.ParseError("missing theory header", lineno, 1)
    advance()
    name = m.group(1)
    imports = tuple(m.group(2).split()) if m.group(2) else ()

    decls: list[Declaration] = []
    names_seen: set[str] = set()

    def check_name(n: str, lineno: int):
        if n in names_seen:
            raise errors.ParseError(f"duplicate declaration name {n}", lineno, 1)
        names_seen.add(n)

    while (got := peek()) is not None:
        lineno, line = got
        stripped = line.strip()
        if m := re.fullmatch(r"type\s+(\w+)\s+(\d+)", stripped):
            decls.append(DType(m.group(1), int(m.group(2)), lineno))
            advance()
        elif m := re.fullmatch(r"const\s+(\S+)\s*::\s*(.+)", stripped):
            p = _P(tokenize(m.group(2)))
            ty = _parse_type(p)
            if p.tok.kind != "EOF":
                raise errors.ParseError(f"trailing input after type", lineno, p.tok.col)
            decls.append(DConst(m.group(1), ty, lineno))
            advance()
        elif m := re.fullmatch(r"(definition|axiom)\s+(\w+)\s*:\s*\"(.*)\"", stripped):
            check_name(m.group(2), lineno)
            kind = DDefinition if m.group(1) == "definition" else DAxiom
            decls.append(kind(m.group(2), m.group(3), lineno))
            advance()
        elif m := re.fullmatch(r"theorem\s+(\w+)\s*:\s*\"(.*)\"", stripped):
            check_name(m.group(1), lineno)
            advance()
            tactics: list[object] = []
            closed = False
            while (got2 := peek()) is not None:
                l2, line2 = got2
                s2 = line2.strip()
                if am := re.fullmatch(r"apply\s*\((.*)\)", s2):
                    try:
                        tactics.append(parse_tactic(am.group(1)))
                    except errors.ParseError as e:
                        raise errors.ParseError(f"in tactic: {e}", l2, 1)
                    advance()
                elif s2 == "qed":
                    advance()
                    closed = True
                    break
                else:
                    raise errors.ParseError(f"expected apply (...) or qed, found {s2!r}", l2, 1)
            if not closed:
                raise errors.ParseError(f"theorem {m.group(1)} is missing its qed", lineno, 1)
            decls.append(DTheorem(m.group(1), m.group(2), tuple(tactics), lineno))
        else:
            raise errors.ParseError(f"unrecognized declaration: {stripped!r}", lineno, 1)
    return TheoryFile(name, imports, tuple(decls))
