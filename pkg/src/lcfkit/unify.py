"""Unification of terms containing schematic variables.

Complete for the first-order fragment and for higher-order patterns (a
schematic head applied to distinct parameters), which is all that rule
resolution and the quantifier rules need.  Anything flexible outside the
pattern fragment raises NonPatternError rather than being approximated.

Substitution environments are kept idempotent: every binding added is
first normalized by the environment, and existing bindings are rewritten
with the new one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from . import errors
from .terms import (
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
    beta_normalize,
    fun_tys,
    gensym,
    instantiate,
    mk_abs,
    free_vars,
    schematic_vars,
    strip_app,
    subst_type,
    type_of,
)


@dataclass(frozen=True)
class SubstEnv:
    """Idempotent, acyclic substitution for schematic type and term variables."""

    types: dict[str, Type] = field(default_factory=dict)
    terms: dict[tuple[str, int], Term] = field(default_factory=dict)

    def apply_type(self, ty: Type) -> Type:
        return subst_type(ty, self.types)

    def apply(self, t: Term) -> Term:
        """Instantiate and beta-normalize (bindings may be abstractions).
        Terms nothing applies to are returned as-is, so callers may rely on
        already-normal inputs staying identical."""
        out = instantiate(t, self.types, self.terms)
        if out is t:
            return t
        return beta_normalize(out)

    def bind_type(self, name: str, ty: Type) -> "SubstEnv":
        ty = self.apply_type(ty)
        one = {name: ty}
        new_types = {k: subst_type(v, one) for k, v in self.types.items()}
        new_types[name] = ty
        new_terms = {k: instantiate(v, one, {}) for k, v in self.terms.items()}
        return SubstEnv(new_types, new_terms)

    def bind_term(self, key: tuple[str, int], value: Term) -> "SubstEnv":
        value = self.apply(value)
        one = {key: value}
        new_terms = {k: beta_normalize(instantiate(v, {}, one)) for k, v in self.terms.items()}
        new_terms[key] = value
        return SubstEnv(dict(self.types), new_terms)

    def merge(self, other: "SubstEnv") -> "SubstEnv":
        env = self
        for n, ty in other.types.items():
            env = env.bind_type(n, ty)
        for k, v in other.terms.items():
            env = env.bind_term(k, v)
        return env

    def __bool__(self) -> bool:
        return bool(self.types) or bool(self.terms)


EMPTY_ENV = SubstEnv()


# ------------------------------------------------------------------ types


def unify_types(t1: Type, t2: Type, env: SubstEnv = EMPTY_ENV, _where: str = "") -> SubstEnv:
    """Most general unifier of two types, extending env; raises UnifyError."""
    t1 = env.apply_type(t1)
    t2 = env.apply_type(t2)
    if t1 == t2:
        return env
    if isinstance(t1, TVar):
        if t1.name in _tvars(t2):
            raise errors.UnifyError(f"occurs check: '{t1.name} in {t2}{_where}")
        return env.bind_type(t1.name, t2)
    if isinstance(t2, TVar):
        return unify_types(t2, t1, env, _where)
    if t1.name != t2.name or len(t1.args) != len(t2.args):
        raise errors.UnifyError(f"type constructor clash: {t1} vs {t2}{_where}")
    for i, (a, b) in enumerate(zip(t1.args, t2.args)):
        env = unify_types(a, b, env, _where=f" (at {t1.name} argument {i + 1})")
    return env


def _tvars(ty: Type) -> set[str]:
    if isinstance(ty, TVar):
        return {ty.name}
    out: set[str] = set()
    for a in ty.args:
        out |= _tvars(a)
    return out


# ------------------------------------------------------------------ terms


def _occurs(sv: SVar, t: Term) -> bool:
    return any(s.name == sv.name and s.index == sv.index for s in schematic_vars(t))


def _pattern_args(args: list[Term]) -> list[Var] | None:
    """The argument list of a pattern: distinct parameters (free variables)."""
    seen = set()
    out = []
    for a in args:
        if not isinstance(a, Var) or a in seen:
            return None
        seen.add(a)
        out.append(a)
    return out


def _bind_svar(sv: SVar, args: list[Var], rhs: Term, env: SubstEnv, params: frozenset[str]) -> SubstEnv:
    """Solve  sv args == rhs  by abstraction over the pattern arguments.

    The solution may not capture a goal parameter the schematic was not
    lifted over: that is the search-level half of the eigenvariable
    condition (kernel replay enforces the other half)."""
    if _occurs(sv, rhs):
        raise errors.UnifyError(f"occurs check: ?{sv.name} in {rhs!r}")
    arg_set = set(args)
    escaped = {v for v in free_vars(rhs) if v.name.startswith(".")} - arg_set
    if escaped:
        raise errors.UnifyError("bound variable would escape its scope")
    captured = {v.name for v in free_vars(rhs) if v.name in params} - {a.name for a in args}
    if captured:
        raise errors.UnifyError(
            f"solution for ?{sv.name} would capture parameter(s) {', '.join(sorted(captured))}"
        )
    value = rhs
    for v in reversed(args):
        value = mk_abs(v, value)
    env = unify_types(sv.ty, fun_tys([a.ty for a in args], type_of(rhs)), env)
    return env.bind_term((sv.name, sv.index), value)


def unify_terms(
    t1: Term, t2: Term, env: SubstEnv = EMPTY_ENV, params: frozenset[str] = frozenset()
) -> Iterator[SubstEnv]:
    """Lazily enumerated unifiers; at most one (the mgu) in the supported
    fragment.  NonPatternError propagates to the caller.  ``params`` names
    the goal's fixed local variables, which a schematic may only depend on
    by being applied to them."""
    try:
        out = _unify(t1, t2, unify_types(type_of(t1), type_of(t2), env), params)
    except errors.NonPatternError:
        raise
    except errors.UnifyError:
        return
    yield out


def _unify(t1: Term, t2: Term, env: SubstEnv, params: frozenset[str] = frozenset()) -> SubstEnv:
    a = env.apply(t1)
    b = env.apply(t2)
    if a == b:
        return env

    ha, argsa = strip_app(a)
    hb, argsb = strip_app(b)

    flex_a = isinstance(ha, SVar)
    flex_b = isinstance(hb, SVar)

    if flex_a and flex_b:
        return _flex_flex(ha, argsa, hb, argsb, env, params)
    if flex_a:
        return _flex_rigid(ha, argsa, b, env, params)
    if flex_b:
        return _flex_rigid(hb, argsb, a, env, params)

    # rigid: align abstractions, eta-expanding a lone non-abstraction side
    if isinstance(a, Abs) or isinstance(b, Abs):
        env = unify_types(type_of(a), type_of(b), env)
        a = env.apply(a)
        b = env.apply(b)
        if not isinstance(a, Abs):
            a = _eta_expand(a)
        if not isinstance(b, Abs):
            b = _eta_expand(b)
        local = Var(gensym("u"), a.ty)
        from .terms import inst_bound

        return _unify(inst_bound(a.body, local), inst_bound(b.body, local), env, params)

    # rigid-rigid
    if type(ha) is not type(hb) or len(argsa) != len(argsb):
        raise errors.UnifyError(f"clash: {a!r} vs {b!r}")
    match ha, hb:
        case (Const(n1, ty1), Const(n2, ty2)) | (Var(n1, ty1), Var(n2, ty2)):
            if n1 != n2:
                raise errors.UnifyError(f"head clash: {n1} vs {n2}")
            env = unify_types(ty1, ty2, env)
        case (Bound(k1), Bound(k2)):
            if k1 != k2:
                raise errors.UnifyError("bound variable clash")
        case _:
            raise errors.UnifyError(f"clash: {a!r} vs {b!r}")
    for x, y in zip(argsa, argsb):
        env = _unify(x, y, env, params)
    return env


def _eta_expand(t: Term) -> Term:
    ty = type_of(t)
    arg_ty, _ = ty.args  # caller guarantees a function type
    from .terms import lift

    return Abs("x", arg_ty, App(lift(t, 1), Bound(0)))


def _flex_rigid(sv: SVar, args: list[Term], rhs: Term, env: SubstEnv, params: frozenset[str]) -> SubstEnv:
    pat = _pattern_args(args)
    if pat is None:
        raise errors.NonPatternError(
            f"?{sv.name} applied to non-parameter or repeated arguments is outside the pattern fragment"
        )
    return _bind_svar(sv, pat, rhs, env, params)


def _flex_flex(
    sa: SVar, argsa: list[Term], sb: SVar, argsb: list[Term], env: SubstEnv, params: frozenset[str]
) -> SubstEnv:
    pa = _pattern_args(argsa)
    pb = _pattern_args(argsb)
    if pa is None or pb is None:
        raise errors.NonPatternError("flex-flex pair outside the pattern fragment")
    if (sa.name, sa.index) == (sb.name, sb.index):
        if pa == pb:
            return env
        # keep exactly the argument positions on which both sides agree
        common = [x for x, y in zip(pa, pb) if x == y]
        res_ty = _result_type(env.apply_type(sa.ty), len(pa))
        h = SVar(gensym("H"), 0, fun_tys([v.ty for v in common], res_ty))
        body: Term = h
        for v in common:
            body = App(body, v)
        value = body
        for v in reversed(pa):
            value = mk_abs(v, value)
        return env.bind_term((sa.name, sa.index), value)
    # different heads: both map to a fresh schematic over the shared parameters
    shared = [v for v in pa if v in pb]
    res_ty = _result_type(env.apply_type(sa.ty), len(pa))
    h = SVar(gensym("H"), 0, fun_tys([v.ty for v in shared], res_ty))
    body: Term = h
    for v in shared:
        body = App(body, v)
    va = body
    for v in reversed(pa):
        va = mk_abs(v, va)
    vb = body
    for v in reversed(pb):
        vb = mk_abs(v, vb)
    env = unify_types(_result_type(env.apply_type(sb.ty), len(pb)), res_ty, env)
    env = env.bind_term((sa.name, sa.index), va)
    return env.bind_term((sb.name, sb.index), vb)


def _result_type(ty: Type, nargs: int) -> Type:
    for _ in range(nargs):
        ty = ty.args[1]
    return ty


# ------------------------------------------------------------------ matching


def match_terms(pattern: Term, target: Term, env: SubstEnv = EMPTY_ENV) -> SubstEnv:
    """One-sided unification: only schematics of the pattern are instantiated;
    schematics of the target are treated as opaque constants.  Used by the
    simplifier.  Raises UnifyError on failure."""
    tyb: dict[str, Type] = dict(env.types)
    tmb: dict[tuple[str, int], Term] = dict(env.terms)
    _match(pattern, target, tyb, tmb)
    return SubstEnv(tyb, tmb)


def _match_type(pattern: Type, target: Type, tyb: dict[str, Type]):
    if isinstance(pattern, TVar):
        seen = tyb.get(pattern.name)
        if seen is None:
            tyb[pattern.name] = target
        elif seen != target:
            raise errors.UnifyError(f"type mismatch for '{pattern.name}: {seen} vs {target}")
        return
    if not isinstance(target, TCon) or pattern.name != target.name or len(pattern.args) != len(target.args):
        raise errors.UnifyError(f"type clash: {pattern} vs {target}")
    for p, t in zip(pattern.args, target.args):
        _match_type(p, t, tyb)


def _match(p: Term, t: Term, tyb: dict[str, Type], tmb: dict[tuple[str, int], Term]):
    hp, argsp = strip_app(p)
    if isinstance(hp, SVar):
        pat = _pattern_args(argsp)
        if pat is None:
            raise errors.NonPatternError("pattern head applied to non-parameter arguments")
        locals_of_t = {v for v in free_vars(t) if v.name.startswith(".")}
        if locals_of_t - set(pat):
            raise errors.UnifyError("bound variable would escape its scope")
        key = (hp.name, hp.index)
        value = t
        for v in reversed(pat):
            value = mk_abs(v, value)
        seen = tmb.get(key)
        if seen is not None:
            if seen != value:
                raise errors.UnifyError(f"inconsistent bindings for ?{hp.name}")
            return
        _match_type(hp.ty, fun_tys([v.ty for v in pat], type_of(t)), tyb)
        tmb[key] = value
        return

    match p, t:
        case (Const(n1, ty1), Const(n2, ty2)) | (Var(n1, ty1), Var(n2, ty2)):
            if n1 != n2:
                raise errors.UnifyError(f"head clash: {n1} vs {n2}")
            _match_type(ty1, ty2, tyb)
        case (Bound(k1), Bound(k2)):
            if k1 != k2:
                raise errors.UnifyError("bound variable clash")
        case (App(f1, a1), App(f2, a2)):
            _match(f1, f2, tyb, tmb)
            _match(a1, a2, tyb, tmb)
        case (Abs(_, ty1, b1), Abs(_, ty2, b2)):
            _match_type(ty1, ty2, tyb)
            local = Var(gensym("u"), ty2)
            from .terms import inst_bound

            _match(inst_bound(b1, local), inst_bound(b2, local), tyb, tmb)
        case _:
            raise errors.UnifyError(f"shape mismatch: {p!r} vs {t!r}")
