"""The trusted proof kernel.

Sequents (hypothesis set |- conclusion) live behind the abstract
:class:`Theorem` type, which can only be produced by the primitive rule
functions in this module.  Everything else in the package — tactics,
automation, the simplifier — merely arranges calls to these functions, so
a bug outside the kernel can waste your time but can never certify a bad
theorem.

Theories are immutable: extending one (new constant, axiom, stored
theorem) yields a child theory, and a theorem is usable exactly in the
theory that made it and that theory's descendants.
"""

from __future__ import annotations

import itertools
from typing import Any, Iterator, Mapping

from . import errors
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
    apps,
    beta_normalize,
    free_vars,
    fun_ty,
    instantiate,
    match_type,
    mk_abs,
    schematic_vars,
    subst_type,
    term_type_vars,
    type_of,
    type_vars,
)

Formula = Term

# sentinel restricting Theorem construction to this module
_PRIVATE = object()

_theory_ids = itertools.count(1)


# ----------------------------------------------------------- base signature

# Primitive constants.  Negation, truth and bi-implication are definitions
# made during bootstrap, not primitives.
ALPHA = TVar("a")
FALSE = Const("False", BOOL)
_BINOP = fun_ty(BOOL, fun_ty(BOOL, BOOL))
AND = Const("And", _BINOP)
OR = Const("Or", _BINOP)
IMP = Const("Imp", _BINOP)

PRIMITIVE_SIGNATURE: dict[str, Type] = {
    "False": BOOL,
    "And": _BINOP,
    "Or": _BINOP,
    "Imp": _BINOP,
    "Eq": fun_ty(ALPHA, fun_ty(ALPHA, BOOL)),
    "All": fun_ty(fun_ty(ALPHA, BOOL), BOOL),
    "Ex": fun_ty(fun_ty(ALPHA, BOOL), BOOL),
}

BUILTIN_TYPES: dict[str, int] = {"bool": 0, "ind": 0, "fun": 2}


def mk_conj(a: Term, b: Term) -> Term:
    return apps(AND, a, b)


def mk_disj(a: Term, b: Term) -> Term:
    return apps(OR, a, b)


def mk_imp(a: Term, b: Term) -> Term:
    return apps(IMP, a, b)


def mk_imps(premises, concl: Term) -> Term:
    for p in reversed(list(premises)):
        concl = mk_imp(p, concl)
    return concl


def mk_eq(a: Term, b: Term) -> Term:
    ty = type_of(a)
    return apps(Const("Eq", fun_ty(ty, fun_ty(ty, BOOL))), a, b)


def mk_not(a: Term) -> Term:
    return App(Const("Not", fun_ty(BOOL, BOOL)), a)


def mk_iff(a: Term, b: Term) -> Term:
    return apps(Const("Iff", _BINOP), a, b)


TRUE = Const("True", BOOL)


def _binder(name: str, x: Var, body: Term) -> Term:
    return App(
        Const(name, fun_ty(fun_ty(x.ty, BOOL), BOOL)),
        mk_abs(x, body),
    )


def mk_all(x: Var, body: Term) -> Term:
    return _binder("All", x, body)


def mk_ex(x: Var, body: Term) -> Term:
    return _binder("Ex", x, body)


def mk_all_abs(body: Abs) -> Term:
    return App(Const("All", fun_ty(fun_ty(body.ty, BOOL), BOOL)), body)


def mk_ex_abs(body: Abs) -> Term:
    return App(Const("Ex", fun_ty(fun_ty(body.ty, BOOL), BOOL)), body)


def dest_binop(t: Term, name: str) -> tuple[Term, Term] | None:
    match t:
        case App(App(Const(n, _), a), b) if n == name:
            return a, b
    return None


def dest_conj(t):
    return dest_binop(t, "And")


def dest_disj(t):
    return dest_binop(t, "Or")


def dest_imp(t):
    return dest_binop(t, "Imp")


def dest_eq(t):
    return dest_binop(t, "Eq")


def dest_iff(t):
    return dest_binop(t, "Iff")


def dest_not(t: Term) -> Term | None:
    match t:
        case App(Const("Not", _), a):
            return a
    return None


def dest_quant(t: Term, name: str) -> Abs | None:
    match t:
        case App(Const(n, _), Abs(_, _, _) as body) if n == name:
            return body
    return None


def dest_all(t):
    return dest_quant(t, "All")


def dest_ex(t):
    return dest_quant(t, "Ex")


def strip_imps(t: Term, limit: int | None = None) -> tuple[list[Term], Term]:
    """Peel premises off a right-nested implication, up to ``limit``."""
    prems: list[Term] = []
    while limit is None or len(prems) < limit:
        d = dest_imp(t)
        if d is None:
            break
        prems.append(d[0])
        t = d[1]
    return prems, t


# ----------------------------------------------------------------- Theory


class Theory:
    """Named, hierarchical collection of types, constants, axioms and theorems.

    Immutable: all extension operations return a fresh child theory.  The
    ``lineage`` set contains the ids of every theory this one was built
    from, so ``thm.thy_id in thy.lineage`` decides whether a theorem may be
    used here.
    """

    __slots__ = (
        "name",
        "id",
        "lineage",
        "parents",
        "types",
        "consts",
        "axioms",
        "definitions",
        "theorems",
        "classical",
        "syntax",
        "intro_rules",
        "elim_rules",
        "simp_rules",
        "rule_premises",
        "_memo",
    )

    _DATA_SLOTS = (
        "name",
        "id",
        "lineage",
        "parents",
        "types",
        "consts",
        "axioms",
        "definitions",
        "theorems",
        "classical",
        "syntax",
        "intro_rules",
        "elim_rules",
        "simp_rules",
        "rule_premises",
    )

    def __init__(self, *, _token=None, **kw):
        if _token is not _PRIVATE:
            raise errors.KernelError("use new_theory() or the extension operations")
        for slot in self._DATA_SLOTS:
            object.__setattr__(self, slot, kw[slot])
        object.__setattr__(self, "_memo", {})  # well-formedness cache only

    def __setattr__(self, k, v):
        raise errors.KernelError("theories are immutable")

    def __repr__(self):
        return f"<Theory {self.name}#{self.id}>"

    # ---------------------------------------------------------- lookups

    def _search(self, field: str, key: str):
        seen = set()
        stack = [self]
        first = None
        count = 0
        while stack:
            thy = stack.pop(0)
            if thy.id in seen:
                continue
            seen.add(thy.id)
            table = getattr(thy, field)
            if key in table:
                if first is None:
                    first = table[key]
                count += 1
            stack = list(thy.parents) + stack
        return first, count

    def lookup_type(self, name: str) -> int | None:
        arity, _ = self._search("types", name)
        return arity

    def lookup_const(self, name: str) -> Type | None:
        ty, _ = self._search("consts", name)
        return ty

    def lookup_theorem_entry(self, name: str):
        """(theorem, match_count) searching self then parents depth-first;
        the nearest theory wins across all three tables."""
        first = None
        count = 0
        seen: set[int] = set()
        stack = [self]
        while stack:
            thy = stack.pop(0)
            if thy.id in seen:
                continue
            seen.add(thy.id)
            for field in ("theorems", "definitions", "axioms"):
                table = getattr(thy, field)
                if name in table:
                    if first is None:
                        first = table[name]
                    count += 1
                    break
            stack = list(thy.parents) + stack
        return first, count

    def all_named_theorems(self) -> dict[str, "Theorem"]:
        """Visible named theorems, nearest theory winning."""
        out: dict[str, Theorem] = {}
        seen: set[int] = set()

        def walk(thy: Theory):
            if thy.id in seen:
                return
            seen.add(thy.id)
            for field in ("axioms", "definitions", "theorems"):
                for k, v in getattr(thy, field).items():
                    out.setdefault(k, v)
            for p in thy.parents:
                walk(p)

        walk(self)
        return out

    def all_consts(self) -> dict[str, Type]:
        out: dict[str, Type] = {}
        seen: set[int] = set()

        def walk(thy: Theory):
            if thy.id in seen:
                return
            seen.add(thy.id)
            for k, v in thy.consts.items():
                out.setdefault(k, v)
            for p in thy.parents:
                walk(p)

        walk(self)
        return out

    def ancestors(self) -> Iterator["Theory"]:
        seen = set()
        stack = [self]
        while stack:
            thy = stack.pop(0)
            if thy.id in seen:
                continue
            seen.add(thy.id)
            yield thy
            stack.extend(thy.parents)

    # -------------------------------------------------------- extensions

    def _derive(self, **overrides) -> "Theory":
        new_id = next(_theory_ids)
        kw = {slot: getattr(self, slot) for slot in self._DATA_SLOTS}
        kw.update(overrides)
        kw["id"] = new_id
        kw["lineage"] = self.lineage | {new_id}
        return Theory(_token=_PRIVATE, **kw)

    def declare_type(self, name: str, arity: int) -> "Theory":
        if self.lookup_type(name) is not None:
            raise errors.SignatureError(f"type constructor {name} already declared")
        return self._derive(types={**self.types, name: arity})

    def declare_const(self, name: str, ty: Type) -> "Theory":
        if self.lookup_const(name) is not None:
            raise errors.SignatureError(f"constant {name} already declared")
        check_type(self, ty)
        return self._derive(consts={**self.consts, name: ty})

    def with_syntax(self, syntax: Any) -> "Theory":
        return self._derive(syntax=syntax)

    def with_rule_registration(self, *, intro=(), elim=(), simp=(), premise_counts=None) -> "Theory":
        return self._derive(
            intro_rules=self.intro_rules + tuple(intro),
            elim_rules=self.elim_rules + tuple(elim),
            simp_rules=self.simp_rules + tuple(simp),
            rule_premises={**self.rule_premises, **(premise_counts or {})},
        )

    def without_simp_rules(self, names) -> "Theory":
        drop = set(names)
        return self._derive(simp_rules=tuple(n for n in self.simp_rules if n not in drop))


def new_theory(name: str, parents: list[Theory] | tuple[Theory, ...] = (), classical: bool | None = None) -> Theory:
    parents = tuple(parents)
    new_id = next(_theory_ids)
    lineage = frozenset({new_id})
    for p in parents:
        lineage |= p.lineage
    if classical is None:
        classical = any(p.classical for p in parents)
    return Theory(
        _token=_PRIVATE,
        name=name,
        id=new_id,
        lineage=lineage,
        parents=parents,
        types=dict(BUILTIN_TYPES) if not parents else {},
        consts=dict(PRIMITIVE_SIGNATURE) if not parents else {},
        axioms={},
        definitions={},
        theorems={},
        classical=classical,
        syntax=None,
        intro_rules=(),
        elim_rules=(),
        simp_rules=(),
        rule_premises={},
    )


# ------------------------------------------------------- well-formedness


def check_type(thy: Theory, ty: Type):
    if isinstance(ty, TVar):
        return
    memo = thy._memo
    key = ("ty", ty)
    if key in memo:
        return
    arity = thy.lookup_type(ty.name)
    if arity is None:
        raise errors.TypeError(f"unknown type constructor {ty.name}")
    if arity != len(ty.args):
        raise errors.TypeError(f"type constructor {ty.name} expects {arity} arguments, got {len(ty.args)}")
    for a in ty.args:
        check_type(thy, a)
    memo[key] = True


def check_term(thy: Theory, t: Term, bound: tuple[Type, ...] = ()) -> Type:
    """Well-formedness against a theory signature; returns the type."""
    match t:
        case Var(_, ty) | SVar(_, _, ty):
            check_type(thy, ty)
            return ty
        case Const(name, ty):
            memo = thy._memo
            key = ("c", name, ty)
            if key in memo:
                return ty
            decl = thy.lookup_const(name)
            if decl is None:
                raise errors.TypeError(f"unknown constant {name}")
            check_type(thy, ty)
            if not match_type(decl, ty, {}):
                raise errors.TypeError(f"constant {name} : {ty} is not an instance of declared type {decl}")
            memo[key] = True
            return ty
        case Bound(k):
            if k >= len(bound):
                raise errors.TypeError("loose bound variable")
            return bound[k]
        case Abs(_, ty, body):
            check_type(thy, ty)
            return fun_ty(ty, check_term(thy, body, (ty,) + bound))
        case App(f, a):
            fty = check_term(thy, f, bound)
            aty = check_term(thy, a, bound)
            if not (isinstance(fty, TCon) and fty.name == "fun"):
                raise errors.TypeError(f"cannot apply term of type {fty} to argument of type {aty}")
            want, res = fty.args
            if want != aty:
                raise errors.TypeError(f"function expects {want} but argument has type {aty}")
            return res
    raise errors.TypeError(f"not a term: {t!r}")


def check_formula(thy: Theory, t: Term):
    ty = check_term(thy, t)
    if ty != BOOL:
        raise errors.TypeError(f"formula expected, got a term of type {ty}")


# ----------------------------------------------------------------- Theorem


class Theorem:
    """A sequent hyps |- concl certified by the kernel.

    Instances can only be constructed by the rule functions in this
    module; attempting ``Theorem(...)`` elsewhere raises KernelError.
    """

    __slots__ = ("hyps", "concl", "thy", "__weakref__")

    def __init__(self, hyps: frozenset[Formula], concl: Formula, thy: Theory, *, _token=None):
        if _token is not _PRIVATE:
            raise errors.KernelError("theorems can only be constructed by kernel rules")
        object.__setattr__(self, "hyps", hyps)
        object.__setattr__(self, "concl", concl)
        object.__setattr__(self, "thy", thy)

    def __setattr__(self, k, v):
        raise errors.KernelError("theorems are immutable")

    @property
    def thy_id(self) -> int:
        return self.thy.id

    def __repr__(self):
        from . import syntax  # cyclic at import time, fine at call time

        try:
            concl = syntax.print_term(self.thy, self.concl)
            hyps = ", ".join(sorted(syntax.print_term(self.thy, h) for h in self.hyps))
        except Exception:
            concl = repr(self.concl)
            hyps = ", ".join(repr(h) for h in self.hyps)
        return f"{hyps} ⊢ {concl}" if hyps else f"⊢ {concl}"


def _mk(hyps, concl, thy) -> Theorem:
    return Theorem(frozenset(hyps), concl, thy, _token=_PRIVATE)


def _join_theories(*thms: Theorem) -> Theory:
    """The most specific theory among compatible theorems' theories."""
    best = thms[0].thy
    for t in thms[1:]:
        if best.id in t.thy.lineage:
            best = t.thy
        elif t.thy.id not in best.lineage:
            raise errors.TheoryError(
                f"theorems from unrelated theories {best.name}#{best.id} and {t.thy.name}#{t.thy.id}"
            )
    return best


def usable_in(thm: Theorem, thy: Theory) -> bool:
    return thm.thy_id in thy.lineage


def _require_usable(thm: Theorem, thy: Theory):
    if not usable_in(thm, thy):
        raise errors.TheoryError(f"theorem from {thm.thy.name}#{thm.thy_id} is not usable in {thy.name}#{thy.id}")


# ----------------------------------------------------------- primitive rules


def assume(thy: Theory, phi: Formula) -> Theorem:
    """{phi} |- phi."""
    check_formula(thy, phi)
    return _mk({phi}, phi, thy)


def conj_intro(a: Theorem, b: Theorem) -> Theorem:
    """From G |- phi and D |- psi conclude G u D |- phi & psi."""
    thy = _join_theories(a, b)
    return _mk(a.hyps | b.hyps, mk_conj(a.concl, b.concl), thy)


def conj_elim1(a: Theorem) -> Theorem:
    d = dest_conj(a.concl)
    if d is None:
        raise errors.RuleError(f"conj_elim1: conclusion is not a conjunction: {a.concl!r}")
    return _mk(a.hyps, d[0], a.thy)


def conj_elim2(a: Theorem) -> Theorem:
    d = dest_conj(a.concl)
    if d is None:
        raise errors.RuleError(f"conj_elim2: conclusion is not a conjunction: {a.concl!r}")
    return _mk(a.hyps, d[1], a.thy)


def disj_intro1(a: Theorem, psi: Formula) -> Theorem:
    check_formula(a.thy, psi)
    return _mk(a.hyps, mk_disj(a.concl, psi), a.thy)


def disj_intro2(a: Theorem, phi: Formula) -> Theorem:
    check_formula(a.thy, phi)
    return _mk(a.hyps, mk_disj(phi, a.concl), a.thy)


def disj_elim(a: Theorem, b: Theorem, c: Theorem) -> Theorem:
    """Case analysis: from G |- phi|psi, D1 |- theta, D2 |- theta conclude
    G u (D1 - {phi}) u (D2 - {psi}) |- theta."""
    d = dest_disj(a.concl)
    if d is None:
        raise errors.RuleError(f"disj_elim: major premise is not a disjunction: {a.concl!r}")
    if b.concl != c.concl:
        raise errors.RuleError("disj_elim: the two case conclusions differ")
    phi, psi = d
    thy = _join_theories(a, b, c)
    return _mk(a.hyps | (b.hyps - {phi}) | (c.hyps - {psi}), b.concl, thy)


def imp_intro(a: Theorem, phi: Formula) -> Theorem:
    """Discharge phi (which need not occur among the hypotheses)."""
    check_formula(a.thy, phi)
    return _mk(a.hyps - {phi}, mk_imp(phi, a.concl), a.thy)


def imp_elim(a: Theorem, b: Theorem) -> Theorem:
    d = dest_imp(a.concl)
    if d is None:
        raise errors.RuleError(f"imp_elim: major premise is not an implication: {a.concl!r}")
    want, res = d
    if want != b.concl:
        raise errors.RuleError(f"imp_elim: expected a proof of {want!r}, got {b.concl!r}")
    thy = _join_theories(a, b)
    return _mk(a.hyps | b.hyps, res, thy)


def false_elim(a: Theorem, phi: Formula) -> Theorem:
    if a.concl != FALSE:
        raise errors.RuleError(f"false_elim: conclusion is not falsity: {a.concl!r}")
    check_formula(a.thy, phi)
    return _mk(a.hyps, phi, a.thy)


def all_intro(a: Theorem, x: Var) -> Theorem:
    """Universal generalization under the eigenvariable condition."""
    for h in a.hyps:
        if x in free_vars(h):
            raise errors.EigenvariableError(f"{x.name} occurs free in hypothesis {h!r}")
    return _mk(a.hyps, mk_all(x, a.concl), a.thy)


def all_elim(a: Theorem, t: Term) -> Theorem:
    body = dest_all(a.concl)
    if body is None:
        raise errors.RuleError(f"all_elim: conclusion is not universally quantified: {a.concl!r}")
    ty = check_term(a.thy, t)
    if ty != body.ty:
        raise errors.TypeError(f"all_elim: bound variable has type {body.ty}, witness has type {ty}")
    return _mk(a.hyps, beta_normalize(App(body, t)), a.thy)


def exists_intro(body: Abs, witness: Term, a: Theorem) -> Theorem:
    """From G |- body(witness) conclude G |- EX x. body(x)."""
    check_term(a.thy, body)
    ty = check_term(a.thy, witness)
    if ty != body.ty:
        raise errors.TypeError(f"exists_intro: bound variable has type {body.ty}, witness has type {ty}")
    want = beta_normalize(App(body, witness))
    if want != a.concl:
        raise errors.RuleError(f"exists_intro: premise should conclude {want!r}, concludes {a.concl!r}")
    return _mk(a.hyps, mk_ex_abs(body), a.thy)


def exists_elim(a: Theorem, b: Theorem, y: Var) -> Theorem:
    """From G |- EX x. phi(x) and D |- theta conclude G u (D - {phi(y)}) |- theta,
    provided the eigenvariable y is not free in theta, D - {phi(y)}, or the
    existential formula."""
    body = dest_ex(a.concl)
    if body is None:
        raise errors.RuleError(f"exists_elim: major premise is not existential: {a.concl!r}")
    if y.ty != body.ty:
        raise errors.TypeError(f"exists_elim: eigenvariable type {y.ty} does not match bound type {body.ty}")
    inst = beta_normalize(App(body, y))
    rest = b.hyps - {inst}
    if y in free_vars(b.concl):
        raise errors.EigenvariableError(f"{y.name} occurs free in the conclusion")
    if y in free_vars(a.concl):
        raise errors.EigenvariableError(f"{y.name} occurs free in the existential premise")
    for h in rest:
        if y in free_vars(h):
            raise errors.EigenvariableError(f"{y.name} occurs free in hypothesis {h!r}")
    thy = _join_theories(a, b)
    return _mk(a.hyps | rest, b.concl, thy)


def refl(thy: Theory, t: Term) -> Theorem:
    check_term(thy, t)
    return _mk(set(), mk_eq(t, t), thy)


def beta_conv(thy: Theory, t: Term) -> Theorem:
    """|- (\\x. b) a = b[a/x] for a top-level redex."""
    match t:
        case App(Abs(_, _, _) as f, a):
            check_term(thy, t)
            from .terms import inst_bound

            return _mk(set(), mk_eq(t, inst_bound(f.body, a)), thy)
    raise errors.RuleError(f"beta_conv: not a beta redex: {t!r}")


def subst_eq(e: Theorem, template: Abs, a: Theorem) -> Theorem:
    """Rewrite with an equation: from E |- s = t and A |- template(s)
    conclude |- template(t) (both sides beta-normalized)."""
    d = dest_eq(e.concl)
    if d is None:
        raise errors.RuleError(f"subst_eq: not an equation: {e.concl!r}")
    s, t = d
    thy = _join_theories(e, a)
    check_term(thy, template)
    sty = type_of(s)
    if template.ty != sty:
        raise errors.TypeError(f"subst_eq: template expects {template.ty}, equation is at type {sty}")
    want = beta_normalize(App(template, s))
    if want != a.concl:
        raise errors.RuleError(f"subst_eq: premise should conclude {want!r}, concludes {a.concl!r}")
    if type_of(want) != BOOL:
        raise errors.TypeError("subst_eq: template must produce a formula")
    return _mk(e.hyps | a.hyps, beta_normalize(App(template, t)), thy)


def bool_ext(a: Theorem, b: Theorem) -> Theorem:
    """Propositional extensionality: from G |- phi -> psi and D |- psi -> phi
    conclude G u D |- phi = psi."""
    d1 = dest_imp(a.concl)
    d2 = dest_imp(b.concl)
    if d1 is None or d2 is None:
        raise errors.RuleError("bool_ext: both premises must be implications")
    if d1[0] != d2[1] or d1[1] != d2[0]:
        raise errors.RuleError("bool_ext: implications are not mutually converse")
    thy = _join_theories(a, b)
    return _mk(a.hyps | b.hyps, mk_eq(d1[0], d1[1]), thy)


def excluded_middle(thy: Theory, phi: Formula) -> Theorem:
    """|- phi | ~phi, available only when the theory is classical."""
    if not thy.classical:
        raise errors.ClassicalRuleError(f"excluded middle is not available in non-classical theory {thy.name}")
    check_formula(thy, phi)
    return _mk(set(), mk_disj(phi, mk_not(phi)), thy)


def inst(
    a: Theorem,
    types: Mapping[str, Type] | None = None,
    tms: Mapping[tuple[str, int], Term] | None = None,
    thy: Theory | None = None,
) -> Theorem:
    """Instantiate schematic type and term variables throughout a theorem.

    Applies uniformly to hypotheses and conclusion; the result is
    beta-normalized.  When ``thy`` (a descendant of the theorem's theory)
    is given, the instantiation may use that theory's signature and the
    result is owned by it.
    """
    if thy is None:
        thy = a.thy
    else:
        _require_usable(a, thy)
    types = dict(types or {})
    tms = dict(tms or {})
    for ty in types.values():
        check_type(thy, ty)
    # every occurrence of a substituted schematic must end up type-correct
    def check_occurrences(t: Term):
        match t:
            case SVar(n, i, ty):
                if (n, i) in tms:
                    want = subst_type(ty, types)
                    got = check_term(thy, tms[(n, i)])
                    if want != got:
                        raise errors.TypeError(
                            f"instantiation of ?{n} should have type {want}, has type {got}"
                        )
            case App(f, x):
                check_occurrences(f)
                check_occurrences(x)
            case Abs(_, _, b):
                check_occurrences(b)
            case _:
                pass

    if tms:
        check_occurrences(a.concl)
        for h in a.hyps:
            check_occurrences(h)
    conv = lambda t: beta_normalize(instantiate(t, types, tms))
    return _mk({conv(h) for h in a.hyps}, conv(a.concl), thy)


def rename_schematics(
    a: Theorem,
    tyren: Mapping[str, str],
    tmren: Mapping[tuple[str, int], tuple[str, int]],
) -> Theorem:
    """Rename schematic type/term variables (an alpha-variant at the
    schematic level).  Cheaper than inst: no new terms enter the theorem,
    so nothing needs rechecking or renormalizing."""

    if tyren:

        def ren_ty(ty: Type) -> Type:
            if isinstance(ty, TVar):
                new = tyren.get(ty.name)
                return TVar(new) if new is not None else ty
            if not ty.args:
                return ty
            args = tuple(ren_ty(x) for x in ty.args)
            return ty if args == ty.args else TCon(ty.name, args)

    else:

        def ren_ty(ty: Type) -> Type:
            return ty

    def ren(t: Term) -> Term:
        match t:
            case SVar(n, i, ty):
                n2, i2 = tmren.get((n, i), (n, i))
                ty2 = ren_ty(ty)
                return t if (n2, i2) == (n, i) and ty2 is ty else SVar(n2, i2, ty2)
            case Var(n, ty):
                ty2 = ren_ty(ty)
                return t if ty2 is ty else Var(n, ty2)
            case Const(n, ty):
                ty2 = ren_ty(ty)
                return t if ty2 is ty else Const(n, ty2)
            case App(f, x):
                f2 = ren(f)
                x2 = ren(x)
                return t if f2 is f and x2 is x else App(f2, x2)
            case Abs(v, ty, b):
                ty2 = ren_ty(ty)
                b2 = ren(b)
                return t if ty2 is ty and b2 is b else Abs(v, ty2, b2)
            case _:
                return t

    if len(set(tmren.values())) != len(tmren) or len(set(tyren.values())) != len(tyren):
        raise errors.KernelError("schematic renaming must be injective")
    return _mk({ren(h) for h in a.hyps}, ren(a.concl), a.thy)


def generalize(a: Theorem, x: Var) -> Theorem:
    """Replace a free variable by a fresh schematic variable in the conclusion."""
    for h in a.hyps:
        if x in free_vars(h):
            raise errors.EigenvariableError(f"{x.name} occurs free in hypothesis {h!r}")
    taken = {sv.index for sv in schematic_vars(a.concl) if sv.name == x.name}
    idx = 0
    while idx in taken:
        idx += 1
    sv = SVar(x.name, idx, x.ty)

    def go(t: Term) -> Term:
        match t:
            case Var(_, _) if t == x:
                return sv
            case App(f, b):
                return App(go(f), go(b))
            case Abs(v, ty, b):
                return Abs(v, ty, go(b))
            case _:
                return t

    return _mk(a.hyps, go(a.concl), a.thy)


# ------------------------------------------------------- theory extension


def define_const(thy: Theory, name: str, rhs: Term) -> tuple[Theory, Theorem]:
    """Extend with a defined constant and its definitional axiom |- name = rhs."""
    if thy.lookup_const(name) is not None:
        raise errors.SignatureError(f"constant {name} already declared")
    if free_vars(rhs):
        names = ", ".join(sorted(v.name for v in free_vars(rhs)))
        raise errors.DefinitionError(f"definition body contains free variables: {names}")
    if schematic_vars(rhs):
        raise errors.DefinitionError("definition body contains schematic variables")
    ty = check_term(thy, rhs)
    leaked = term_type_vars(rhs) - type_vars(ty)
    if leaked:
        raise errors.DefinitionError(f"type variables {sorted(leaked)} do not occur in the definition's type")
    thy2 = thy._derive(consts={**thy.consts, name: ty})
    ax = _mk(set(), mk_eq(Const(name, ty), rhs), thy2)
    thy3 = thy2._derive(definitions={**thy2.definitions, name + "_def": ax})
    return thy3, ax


def own_theorem_names(thy: Theory) -> set[str]:
    """Names bound in this theory itself (across its extension chain),
    excluding anything merely inherited from parents."""
    out: set[str] = set()
    for t in thy.ancestors():
        if t.name != thy.name:
            continue
        out.update(t.axioms)
        out.update(t.definitions)
        out.update(t.theorems)
    return out


def new_axiom(thy: Theory, name: str, phi: Formula) -> tuple[Theory, Theorem]:
    """Record phi as an axiom (tracked separately from definitions).

    Shadowing a parent theory's name is allowed (lookups warn); reusing a
    name within the same theory is not.
    """
    if name in own_theorem_names(thy):
        raise errors.SignatureError(f"theorem name {name} already in use in {thy.name}")
    check_formula(thy, phi)
    thy2 = thy._derive()
    ax = _mk(set(), phi, thy2)
    return thy2._derive(axioms={**thy2.axioms, name: ax}), ax


def store_theorem(thy: Theory, name: str, thm: Theorem) -> Theory:
    _require_usable(thm, thy)
    if name in own_theorem_names(thy):
        raise errors.SignatureError(f"theorem name {name} already in use in {thy.name}")
    return thy._derive(theorems={**thy.theorems, name: thm})
