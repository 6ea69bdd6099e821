"""Bootstrap of the Core and Base theories.

Core declares the primitive signature, defines the derived connectives
(negation, truth, bi-implication) and proves the standard natural
deduction rules as schematic theorems, going only through the public
kernel interface.  Base is the classical child of Core that everything
user-facing imports by default.

A rule theorem has the shape ``|- P1 --> ... --> Pn --> C`` and is turned
into an applicable backward rule by :func:`lcfkit.proof.derive_rule`; the
registered premise count disambiguates rules such as impI whose statement
happens to be a longer implication chain.
"""

from __future__ import annotations

from . import kernel
from .kernel import Theorem, Theory
from .terms import (
    BOOL,
    Abs,
    App,
    Bound,
    TVar,
    Term,
    Var,
    beta_normalize,
    fun_ty,
    mk_abs,
    type_of,
)

ALPHA = TVar("a")


# ------------------------------------------------------- derived helpers
#
# These are forward-proof conveniences used across the package; each is a
# small composition of kernel primitives.


def eq_sym(e: Theorem, thy: Theory | None = None) -> Theorem:
    """From |- s = t derive |- t = s.  ``thy`` (a descendant of the
    equation's theory) is needed when the terms use its signature."""
    s, t = kernel.dest_eq(e.concl)
    z = Var(".z", type_of(s))
    template = mk_abs(z, kernel.mk_eq(z, s))
    return kernel.subst_eq(e, template, kernel.refl(thy or e.thy, s))


def eq_forward(e: Theorem, a: Theorem) -> Theorem:
    """From |- s = t and |- s (as formulas) derive |- t."""
    template = Abs(".z", BOOL, Bound(0))
    return kernel.subst_eq(e, template, a)


def cong_app(e: Theorem, arg: Term, thy: Theory | None = None) -> Theorem:
    """From |- f = g derive |- f arg = g arg (beta-normalized)."""
    f, _ = kernel.dest_eq(e.concl)
    fa = beta_normalize(App(f, arg))
    z = Var(".z", type_of(f))
    template = mk_abs(z, kernel.mk_eq(fa, App(z, arg)))
    return kernel.subst_eq(e, template, kernel.refl(thy or e.thy, fa))


def _discharge(thm: Theorem, *assumptions: Term) -> Theorem:
    """imp_intro each assumption, last one innermost."""
    for phi in reversed(assumptions):
        thm = kernel.imp_intro(thm, phi)
    return thm


def _gen(thm: Theorem, *vs: Var) -> Theorem:
    for v in vs:
        thm = kernel.generalize(thm, v)
    return thm


def unfold_not(thy: Theory, phi: Term, not_def: Theorem) -> Theorem:
    """|- Not phi = (phi --> False)."""
    return cong_app(not_def, phi, thy)


def unfold_iff(thy: Theory, a: Term, b: Term, iff_def: Theorem) -> Theorem:
    """|- Iff a b = ((a --> b) & (b --> a))."""
    return cong_app(cong_app(iff_def, a, thy), b, thy)


# --------------------------------------------------------------- bootstrap


def _build_core() -> Theory:
    thy = kernel.new_theory("Core", (), classical=False)

    P = Var("P", BOOL)
    Q = Var("Q", BOOL)
    R = Var("R", BOOL)

    # defined connectives
    p = Abs("P", BOOL, kernel.mk_imp(Bound(0), kernel.FALSE))
    thy, not_def = kernel.define_const(thy, "Not", p)
    thy, true_def = kernel.define_const(thy, "True", kernel.mk_imp(kernel.FALSE, kernel.FALSE))
    iff_rhs = Abs(
        "P",
        BOOL,
        Abs(
            "Q",
            BOOL,
            kernel.mk_conj(
                kernel.mk_imp(Bound(1), Bound(0)),
                kernel.mk_imp(Bound(0), Bound(1)),
            ),
        ),
    )
    thy, iff_def = kernel.define_const(thy, "Iff", iff_rhs)

    def fold_not(a: Theorem, phi: Term) -> Theorem:
        # a : G |- phi --> False   becomes   G |- Not phi
        return eq_forward(eq_sym(unfold_not(thy, phi, not_def)), a)

    def use_not(a: Theorem) -> Theorem:
        # a : G |- Not phi   becomes   G |- phi --> False
        phi = kernel.dest_not(a.concl)
        return eq_forward(unfold_not(thy, phi, not_def), a)

    rules: dict[str, Theorem] = {}
    nprems: dict[str, int] = {}

    def rule(name: str, thm: Theorem, n: int):
        rules[name] = thm
        nprems[name] = n

    # --- conjunction
    a = kernel.conj_intro(kernel.assume(thy, P), kernel.assume(thy, Q))
    rule("conjI", _gen(_discharge(a, P, Q), P, Q), 2)

    pq = kernel.assume(thy, kernel.mk_conj(P, Q))
    h = kernel.assume(thy, kernel.mk_imp(P, kernel.mk_imp(Q, R)))
    a = kernel.imp_elim(kernel.imp_elim(h, kernel.conj_elim1(pq)), kernel.conj_elim2(pq))
    rule("conjE", _gen(_discharge(a, pq.concl, h.concl), P, Q, R), 2)

    rule("conjunct1", _gen(_discharge(kernel.conj_elim1(pq), pq.concl), P, Q), 1)
    rule("conjunct2", _gen(_discharge(kernel.conj_elim2(pq), pq.concl), P, Q), 1)

    # --- disjunction
    rule("disjI1", _gen(_discharge(kernel.disj_intro1(kernel.assume(thy, P), Q), P), P, Q), 1)
    rule("disjI2", _gen(_discharge(kernel.disj_intro2(kernel.assume(thy, Q), P), Q), P, Q), 1)

    d = kernel.assume(thy, kernel.mk_disj(P, Q))
    f = kernel.assume(thy, kernel.mk_imp(P, R))
    g = kernel.assume(thy, kernel.mk_imp(Q, R))
    b = kernel.imp_elim(f, kernel.assume(thy, P))
    c = kernel.imp_elim(g, kernel.assume(thy, Q))
    a = kernel.disj_elim(d, b, c)
    rule("disjE", _gen(_discharge(a, d.concl, f.concl, g.concl), P, Q, R), 3)

    # --- implication
    a = kernel.assume(thy, kernel.mk_imp(P, Q))
    rule("impI", _gen(kernel.imp_intro(a, a.concl), P, Q), 1)

    a = kernel.imp_elim(kernel.assume(thy, kernel.mk_imp(P, Q)), kernel.assume(thy, P))
    rule("mp", _gen(_discharge(a, kernel.mk_imp(P, Q), P), P, Q), 2)

    a = kernel.imp_elim(
        kernel.assume(thy, kernel.mk_imp(Q, R)),
        kernel.imp_elim(kernel.assume(thy, kernel.mk_imp(P, Q)), kernel.assume(thy, P)),
    )
    rule("impE", _gen(_discharge(a, kernel.mk_imp(P, Q), P, kernel.mk_imp(Q, R)), P, Q, R), 3)

    # --- falsity and truth
    rule("FalseE", _gen(_discharge(kernel.false_elim(kernel.assume(thy, kernel.FALSE), P), kernel.FALSE), P), 1)

    truth = eq_forward(eq_sym(true_def), _discharge(kernel.assume(thy, kernel.FALSE), kernel.FALSE))
    rule("TrueI", truth, 0)

    # --- negation
    a = kernel.assume(thy, kernel.mk_imp(P, kernel.FALSE))
    rule("notI", _gen(_discharge(fold_not(a, P), a.concl), P), 1)

    na = kernel.assume(thy, kernel.mk_not(P))
    bottom = kernel.imp_elim(use_not(na), kernel.assume(thy, P))
    rule("notE", _gen(_discharge(kernel.false_elim(bottom, R), na.concl, P), P, R), 2)

    # --- bi-implication
    ab = kernel.assume(thy, kernel.mk_imp(P, Q))
    ba = kernel.assume(thy, kernel.mk_imp(Q, P))
    both = kernel.conj_intro(ab, ba)
    folded = eq_forward(eq_sym(unfold_iff(thy, P, Q, iff_def)), both)
    rule("iffI", _gen(_discharge(folded, ab.concl, ba.concl), P, Q), 2)

    ipq = kernel.assume(thy, kernel.mk_iff(P, Q))
    pair = eq_forward(unfold_iff(thy, P, Q, iff_def), ipq)
    h = kernel.assume(thy, kernel.mk_imp(kernel.mk_imp(P, Q), kernel.mk_imp(kernel.mk_imp(Q, P), R)))
    a = kernel.imp_elim(kernel.imp_elim(h, kernel.conj_elim1(pair)), kernel.conj_elim2(pair))
    rule("iffE", _gen(_discharge(a, ipq.concl, h.concl), P, Q, R), 2)

    rule("iffD1", _gen(_discharge(kernel.conj_elim1(pair), ipq.concl), P, Q), 1)
    rule("iffD2", _gen(_discharge(kernel.conj_elim2(pair), ipq.concl), P, Q), 1)

    # --- quantifiers (polymorphic over 'a)
    pred = Var("P", fun_ty(ALPHA, BOOL))
    x = Var("x", ALPHA)
    w = Var("w", ALPHA)

    all_phi = kernel.mk_all(x, App(pred, x))
    a = kernel.assume(thy, all_phi)
    rule("allI", _gen(kernel.imp_intro(a, all_phi), pred), 1)

    a = kernel.imp_elim(
        kernel.assume(thy, kernel.mk_imp(App(pred, w), R)),
        kernel.all_elim(kernel.assume(thy, all_phi), w),
    )
    rule("allE", _gen(_discharge(a, all_phi, kernel.mk_imp(App(pred, w), R)), pred, w, R), 2)

    body = mk_abs(x, App(pred, x))
    a = kernel.exists_intro(body, w, kernel.assume(thy, App(pred, w)))
    ex_phi = a.concl
    rule("exI", _gen(_discharge(a, App(pred, w)), pred, w), 1)

    ex = kernel.assume(thy, ex_phi)
    y = Var("y", ALPHA)
    side = kernel.assume(thy, kernel.mk_all(y, kernel.mk_imp(App(pred, y), R)))
    use = kernel.imp_elim(kernel.all_elim(side, y), kernel.assume(thy, App(pred, y)))
    a = kernel.exists_elim(ex, use, y)
    rule("exE", _gen(_discharge(a, ex.concl, side.concl), pred, R), 2)

    # --- equality
    t = Var("t", ALPHA)
    s = Var("s", ALPHA)
    u = Var("u", ALPHA)
    rule("refl", _gen(kernel.refl(thy, t), t), 0)

    e = kernel.assume(thy, kernel.mk_eq(s, t))
    rule("sym", _gen(_discharge(eq_sym(e), e.concl), s, t), 1)

    e2 = kernel.assume(thy, kernel.mk_eq(t, u))
    z = Var(".z", ALPHA)
    a = kernel.subst_eq(e2, mk_abs(z, kernel.mk_eq(s, z)), kernel.assume(thy, kernel.mk_eq(s, t)))
    rule("trans", _gen(_discharge(a, kernel.mk_eq(s, t), e2.concl), s, t, u), 2)

    pr = Var("P", fun_ty(ALPHA, BOOL))
    e = kernel.assume(thy, kernel.mk_eq(s, t))
    a = kernel.subst_eq(e, mk_abs(z, App(pr, z)), kernel.assume(thy, App(pr, s)))
    rule("ssubst", _gen(_discharge(a, e.concl, App(pr, s)), pr, s, t), 2)

    # (t = t) = True, the simplifier's reflexive-equation eraser
    to_true = kernel.imp_intro(truth, kernel.mk_eq(t, t))
    back = kernel.imp_intro(kernel.refl(thy, t), kernel.TRUE)
    rule("eq_self", _gen(kernel.bool_ext(to_true, back), t), 0)

    for name, thm in rules.items():
        thy = kernel.store_theorem(thy, name, thm)

    thy = thy.with_rule_registration(
        intro=("conjI", "disjI1", "disjI2", "impI", "iffI", "allI", "exI", "TrueI", "refl", "notI"),
        elim=("conjE", "disjE", "impE", "notE", "iffE", "FalseE", "exE", "allE"),
        simp=("eq_self",),
        premise_counts=nprems,
    )
    return thy


_CORE: Theory | None = None
_BASE: Theory | None = None


def core_theory() -> Theory:
    global _CORE
    if _CORE is None:
        _CORE = _build_core()
    return _CORE


def base_theory() -> Theory:
    """The classical child of Core: adds the excluded-middle consequences
    as stored rules.  Intuitionistic work descends from Core instead."""
    global _BASE
    if _BASE is None:
        thy = kernel.new_theory("Base", (core_theory(),), classical=True)
        for name, thm in classical_rules(thy).items():
            thy = kernel.store_theorem(thy, name, thm)
        _BASE = thy.with_rule_registration(
            intro=("classical", "ccontr"),
            premise_counts=CLASSICAL_PREMISES,
        )
    return _BASE


# ------------------------------------------------ classical derived rules


def classical_rules(thy: Theory) -> dict[str, Theorem]:
    """Rules derived from excluded middle; raises ClassicalRuleError when the
    theory is not classical.  Results are cached per theory id."""
    cached = _classical_cache.get(thy.id)
    if cached is not None:
        return cached

    P = Var("P", BOOL)
    R = Var("R", BOOL)
    em = kernel.excluded_middle(thy, P)

    core = core_theory()
    not_def = core.definitions["Not_def"]

    def use_not(a: Theorem) -> Theorem:
        phi = kernel.dest_not(a.concl)
        return eq_forward(cong_app(not_def, phi, thy), a)

    # classical: |- ?P | ~?P
    classical = _gen(em, P)

    # ccontr: (~P --> False) --> P
    h = kernel.assume(thy, kernel.mk_imp(kernel.mk_not(P), kernel.FALSE))
    from_p = kernel.assume(thy, P)
    np = kernel.assume(thy, kernel.mk_not(P))
    from_np = kernel.false_elim(kernel.imp_elim(h, np), P)
    by_cases = kernel.disj_elim(em, from_p, from_np)
    ccontr = _gen(_discharge(by_cases, h.concl), P)

    # case_split: (P --> R) --> (~P --> R) --> R
    f = kernel.assume(thy, kernel.mk_imp(P, R))
    g = kernel.assume(thy, kernel.mk_imp(kernel.mk_not(P), R))
    split = kernel.disj_elim(em, kernel.imp_elim(f, kernel.assume(thy, P)), kernel.imp_elim(g, np))
    case_split = _gen(_discharge(split, f.concl, g.concl), P, R)

    # notnotD: ~~P --> P
    nnp = kernel.assume(thy, kernel.mk_not(kernel.mk_not(P)))
    bottom = kernel.imp_elim(use_not(nnp), np)
    nn = kernel.disj_elim(em, kernel.assume(thy, P), kernel.false_elim(bottom, P))
    notnotD = _gen(_discharge(nn, nnp.concl), P)

    out = {"classical": classical, "ccontr": ccontr, "case_split": case_split, "notnotD": notnotD}
    _classical_cache[thy.id] = out
    return out


_classical_cache: dict[int, dict[str, Theorem]] = {}

CLASSICAL_PREMISES = {"classical": 0, "ccontr": 1, "case_split": 2, "notnotD": 1}
