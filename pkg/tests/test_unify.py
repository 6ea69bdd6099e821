import random

import pytest

from lcfkit import errors
from lcfkit.kernel import mk_conj, mk_disj, mk_eq
from lcfkit.terms import (
    BOOL,
    IND,
    Abs,
    App,
    Bound,
    Const,
    SVar,
    TCon,
    TVar,
    Var,
    apps,
    beta_normalize,
    fun_ty,
    mk_abs,
    type_of,
)
from lcfkit.unify import EMPTY_ENV, SubstEnv, match_terms, unify_terms, unify_types

from oracles import robinson_apply, robinson_unify

p = Var("p", BOOL)
q = Var("q", BOOL)
r = Var("r", BOOL)
a = Var("a", IND)


def unify1(t1, t2, env=EMPTY_ENV):
    return next(unify_terms(t1, t2, env), None)


# ------------------------------------------------------------------- types


def test_unify_types_instantiates():
    env = unify_types(fun_ty(TVar("a"), BOOL), fun_ty(IND, BOOL))
    assert env.types["a"] == IND


def test_unify_types_occurs():
    with pytest.raises(errors.UnifyError):
        unify_types(TVar("a"), fun_ty(TVar("a"), BOOL))


def test_unify_types_identity():
    env = unify_types(BOOL, BOOL)
    assert not env


def test_unify_types_clash_mentions_position():
    with pytest.raises(errors.UnifyError) as e:
        unify_types(fun_ty(BOOL, BOOL), fun_ty(IND, BOOL))
    assert "argument" in str(e.value)


# ------------------------------------------------------------------- terms


def test_unify_first_order_binds_both():
    sp = SVar("phi", 0, BOOL)
    sq = SVar("psi", 0, BOOL)
    env = unify1(mk_conj(sp, sq), mk_conj(p, mk_disj(q, r)))
    assert env is not None
    assert env.apply(sp) == p
    assert env.apply(sq) == mk_disj(q, r)
    assert env.apply(mk_conj(sp, sq)) == mk_conj(p, mk_disj(q, r))


def test_unify_pattern_case():
    # ?P x  vs  p x & q x   with x a parameter
    x = Var("x", IND)
    sp = SVar("P", 0, fun_ty(IND, BOOL))
    pf = Var("pf", fun_ty(IND, BOOL))
    qf = Var("qf", fun_ty(IND, BOOL))
    target = mk_conj(App(pf, x), App(qf, x))
    env = unify1(App(sp, x), target)
    assert env is not None
    binding = env.terms[("P", 0)]
    assert beta_normalize(App(binding, x)) == target
    assert env.apply(App(sp, x)) == target


def test_unify_occurs_check():
    sx = SVar("x", 0, IND)
    f = Var("f", fun_ty(IND, IND))
    assert unify1(sx, App(f, sx)) is None


def test_unify_same_term_no_bindings():
    env = unify1(mk_conj(p, q), mk_conj(p, q))
    assert env is not None and not env


def test_unify_clash_fails():
    assert unify1(mk_conj(p, q), mk_disj(p, q)) is None


def test_non_pattern_raises():
    sp = SVar("F", 0, fun_ty(IND, IND))
    f = Var("f", fun_ty(IND, IND))
    # ?F (f a) : schematic applied to a non-variable argument
    with pytest.raises(errors.NonPatternError):
        list(unify_terms(App(sp, App(f, a)), App(f, App(f, a))))


def test_flex_flex_same_head():
    x = Var("x", IND)
    y = Var("y", IND)
    z = Var("z", IND)
    sp = SVar("F", 0, fun_ty(IND, fun_ty(IND, IND)))
    # agree on the first position only: solution may keep x, must drop the rest
    env = unify1(apps(sp, x, y), apps(sp, x, z))
    assert env is not None
    assert env.apply(apps(sp, x, y)) == env.apply(apps(sp, x, z))


def test_flex_flex_repeated_args_is_non_pattern():
    x = Var("x", IND)
    sp = SVar("F", 0, fun_ty(IND, fun_ty(IND, IND)))
    with pytest.raises(errors.NonPatternError):
        list(unify_terms(apps(sp, x, Var("y", IND)), apps(sp, x, x)))


def test_flex_flex_different_heads():
    x = Var("x", IND)
    y = Var("y", IND)
    sf = SVar("F", 0, fun_ty(IND, IND))
    sg = SVar("G", 0, fun_ty(IND, IND))
    env = unify1(App(sf, x), App(sg, y))
    assert env is not None
    assert env.apply(App(sf, x)) == env.apply(App(sg, y))


def test_unify_under_binders():
    # ALL x. ?P x   vs   ALL x. p x
    pf = Var("pf", fun_ty(IND, BOOL))
    sp = SVar("P", 0, fun_ty(IND, BOOL))
    allc = Const("All", fun_ty(fun_ty(IND, BOOL), BOOL))
    x = Var("x", IND)
    lhs = App(allc, Abs("x", IND, App(sp, Bound(0))))
    rhs = App(allc, Abs("x", IND, App(pf, Bound(0))))
    env = unify1(lhs, rhs)
    assert env is not None
    assert env.apply(lhs) == rhs


def test_unify_type_instantiation_through_terms():
    # ?t = ?t  at type 'a  against  a = a  at ind
    sv = SVar("t", 0, TVar("b"))
    env = unify1(mk_eq(sv, sv), mk_eq(a, a))
    assert env is not None
    assert env.types.get("b") == IND
    assert env.apply(mk_eq(sv, sv)) == mk_eq(a, a)


def test_env_idempotent_after_chained_bindings():
    sx = SVar("x", 0, IND)
    sy = SVar("y", 0, IND)
    f = Var("f", fun_ty(IND, IND))
    env = unify1(sx, App(f, sy))
    env2 = next(unify_terms(sy, a, env))
    t = apps(Var("g", fun_ty(IND, fun_ty(IND, IND))), sx, sy)
    once = env2.apply(t)
    assert env2.apply(once) == once
    assert env2.apply(sx) == App(f, a)


# ---------------------------------------------------------------- matching


def test_match_first_order():
    add = Var("add", fun_ty(IND, fun_ty(IND, IND)))
    s = Var("S", fun_ty(IND, IND))
    zero = Var("Zero", IND)
    sm = SVar("m", 0, IND)
    sn = SVar("n", 0, IND)
    pat = apps(add, sm, sn)
    tgt = apps(add, App(s, zero), App(s, zero))
    env = match_terms(pat, tgt)
    assert env.apply(pat) == tgt
    assert env.terms[("m", 0)] == App(s, zero)


def test_match_is_one_sided():
    sm = SVar("m", 0, BOOL)
    with pytest.raises(errors.UnifyError):
        match_terms(p, sm)  # target schematic stays opaque


def test_match_constant_clash():
    c1 = Const("False", BOOL)
    with pytest.raises(errors.UnifyError):
        match_terms(c1, Const("True", BOOL))


def test_match_no_schematics_needs_alpha_equal():
    t = mk_abs(Var("x", IND), App(Var("pf", fun_ty(IND, BOOL)), Var("x", IND)))
    u = mk_abs(Var("y", IND), App(Var("pf", fun_ty(IND, BOOL)), Var("y", IND)))
    env = match_terms(t, u)
    assert not env.terms
    with pytest.raises(errors.UnifyError):
        match_terms(t, mk_abs(Var("x", IND), App(Var("qf", fun_ty(IND, BOOL)), Var("x", IND))))


# -------------------------------------------- agreement with Robinson oracle


def random_fo_pair(rng: random.Random):
    """A random pair of first-order terms in both representations."""
    fns = [("f", 1), ("g", 2), ("h", 0), ("k", 0)]
    vars_ = ["?x", "?y", "?z"]

    def gen(depth):
        if depth <= 0 or rng.random() < 0.35:
            if rng.random() < 0.5:
                return rng.choice(vars_)
            return rng.choice(["h", "k"])
        name, arity = rng.choice([("f", 1), ("g", 2)])
        return (name,) + tuple(gen(depth - 1) for _ in range(arity))

    return gen(rng.randint(1, 4)), gen(rng.randint(1, 4))


FN_TYPES = {
    "f": fun_ty(IND, IND),
    "g": fun_ty(IND, fun_ty(IND, IND)),
    "h": IND,
    "k": IND,
}


def to_term(t):
    if isinstance(t, str):
        if t.startswith("?"):
            return SVar(t[1:], 0, IND)
        return Var(t, FN_TYPES[t])
    head = Var(t[0], FN_TYPES[t[0]])
    return apps(head, *[to_term(x) for x in t[1:]])


def canonical(t, mapping):
    """Rename schematics in order of appearance, for mgu comparison."""
    if isinstance(t, SVar):
        key = (t.name, t.index)
        if key not in mapping:
            mapping[key] = SVar(f"c{len(mapping)}", 0, IND)
        return mapping[key]
    if isinstance(t, App):
        return App(canonical(t.fn, mapping), canonical(t.arg, mapping))
    if isinstance(t, Abs):
        return Abs(t.var, t.ty, canonical(t.body, mapping))
    return t


@pytest.mark.parametrize("seed", range(12))
def test_unify_agrees_with_robinson(seed):
    rng = random.Random(seed)
    for _ in range(400):
        ra, rb = random_fo_pair(rng)
        ta, tb = to_term(ra), to_term(rb)
        oracle = robinson_unify(ra, rb)
        try:
            mine = unify1(ta, tb)
        except errors.NonPatternError:
            pytest.fail("first-order problem reported as non-pattern")
        if oracle is None:
            assert mine is None, (ra, rb)
        else:
            assert mine is not None, (ra, rb)
            want = to_term(robinson_apply(oracle, ra))
            got = mine.apply(ta)
            assert got == mine.apply(tb)
            # most general unifier: agree up to renaming of schematics
            assert canonical(got, {}) == canonical(want, {}), (ra, rb)
