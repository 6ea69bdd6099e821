"""Simply typed lambda terms with positional bound variables.

Bound occurrences are de Bruijn indices, so structural equality *is*
alpha-equivalence and substitution can never capture.  The name stored on
an abstraction is kept for printing only and is ignored by ``==``/``hash``.
Formulas are simply terms of type ``bool``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Union

from . import errors

# ------------------------------------------------------------------ types


@dataclass(frozen=True)
class TVar:
    """Type variable.  All type variables are schematic (instantiable)."""

    name: str

    def __str__(self) -> str:
        return "'" + self.name


@dataclass(frozen=True)
class TCon:
    """Applied type constructor: ``bool``, ``ind``, ``fun(a, b)``, or user-declared."""

    name: str
    args: tuple["Type", ...] = ()

    def __str__(self) -> str:
        if self.name == "fun" and len(self.args) == 2:
            a, b = self.args
            left = f"({a})" if isinstance(a, TCon) and a.name == "fun" else str(a)
            return f"{left} => {b}"
        if not self.args:
            return self.name
        return f"{self.name}({', '.join(str(a) for a in self.args)})"


Type = Union[TVar, TCon]

BOOL = TCon("bool")
IND = TCon("ind")


def fun_ty(arg: Type, res: Type) -> TCon:
    return TCon("fun", (arg, res))


def fun_tys(args: tuple[Type, ...] | list[Type], res: Type) -> Type:
    for a in reversed(args):
        res = fun_ty(a, res)
    return res


def dest_fun(ty: Type) -> tuple[Type, Type]:
    if isinstance(ty, TCon) and ty.name == "fun" and len(ty.args) == 2:
        return ty.args[0], ty.args[1]
    raise errors.TypeError(f"not a function type: {ty}")


def strip_fun(ty: Type) -> tuple[list[Type], Type]:
    args = []
    while isinstance(ty, TCon) and ty.name == "fun" and len(ty.args) == 2:
        args.append(ty.args[0])
        ty = ty.args[1]
    return args, ty


def type_vars(ty: Type) -> set[str]:
    if isinstance(ty, TVar):
        return {ty.name}
    out: set[str] = set()
    for a in ty.args:
        out |= type_vars(a)
    return out


def subst_type(ty: Type, m: Mapping[str, Type]) -> Type:
    if isinstance(ty, TVar):
        return m.get(ty.name, ty)
    if not ty.args:
        return ty
    return TCon(ty.name, tuple(subst_type(a, m) for a in ty.args))


def match_type(pattern: Type, target: Type, binding: dict[str, Type]) -> bool:
    """One-sided type matching: instantiate variables of *pattern* only."""
    if isinstance(pattern, TVar):
        seen = binding.get(pattern.name)
        if seen is None:
            binding[pattern.name] = target
            return True
        return seen == target
    if isinstance(target, TVar):
        return False
    if pattern.name != target.name or len(pattern.args) != len(target.args):
        return False
    return all(match_type(p, t, binding) for p, t in zip(pattern.args, target.args))


# ------------------------------------------------------------------ terms


@dataclass(frozen=True)
class Var:
    """Free variable."""

    name: str
    ty: Type


@dataclass(frozen=True)
class SVar:
    """Schematic (placeholder) variable; the index supports fresh renaming."""

    name: str
    index: int
    ty: Type


@dataclass(frozen=True)
class Const:
    """Constant at a particular type instance."""

    name: str
    ty: Type


@dataclass(frozen=True)
class Bound:
    """Bound-variable occurrence, as distance to its binder."""

    k: int


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Abs:
    # the display name takes no part in equality or hashing
    var: str = field(compare=False)
    ty: Type
    body: "Term"


Term = Union[Var, SVar, Const, Bound, App, Abs]


# Structural hashing is hot (hypothesis sets, substitution tables, alpha
# comparisons); cache it per node since terms are immutable.
def _app_hash(self) -> int:
    h = self.__dict__.get("_h")
    if h is None:
        h = hash((3, self.fn, self.arg))
        object.__setattr__(self, "_h", h)
    return h


def _abs_hash(self) -> int:
    h = self.__dict__.get("_h")
    if h is None:
        h = hash((4, self.ty, self.body))
        object.__setattr__(self, "_h", h)
    return h


App.__hash__ = _app_hash  # type: ignore[method-assign]
Abs.__hash__ = _abs_hash  # type: ignore[method-assign]


def apps(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn


def strip_app(t: Term) -> tuple[Term, list[Term]]:
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


# ------------------------------------------------------------- de Bruijn ops


def lift(t: Term, by: int, cutoff: int = 0) -> Term:
    """Shift loose bound indices >= cutoff by ``by``."""
    match t:
        case Bound(k):
            return Bound(k + by) if k >= cutoff else t
        case App(f, a):
            return App(lift(f, by, cutoff), lift(a, by, cutoff))
        case Abs(v, ty, b):
            return Abs(v, ty, lift(b, by, cutoff + 1))
        case _:
            return t


def inst_bound(body: Term, value: Term, depth: int = 0) -> Term:
    """Substitute ``value`` for Bound(depth) in body, adjusting indices."""
    match body:
        case Bound(k):
            if k == depth:
                return lift(value, depth)
            return Bound(k - 1) if k > depth else body
        case App(f, a):
            return App(inst_bound(f, value, depth), inst_bound(a, value, depth))
        case Abs(v, ty, b):
            return Abs(v, ty, inst_bound(b, value, depth + 1))
        case _:
            return body


def abstract_over(t: Term, x: Var, depth: int = 0) -> Term:
    """Turn free occurrences of x into Bound(depth)."""
    match t:
        case Var(_, _) if t == x:
            return Bound(depth)
        case App(f, a):
            return App(abstract_over(f, x, depth), abstract_over(a, x, depth))
        case Abs(v, ty, b):
            return Abs(v, ty, abstract_over(b, x, depth + 1))
        case _:
            return t


def mk_abs(x: Var, body: Term) -> Abs:
    return Abs(x.name, x.ty, abstract_over(body, x))


def open_abs(a: Abs, x: Var) -> Term:
    """Instantiate the abstraction body with the given variable."""
    return inst_bound(a.body, x)


def is_closed(t: Term, depth: int = 0) -> bool:
    """No loose bound indices (free/schematic variables are fine)."""
    match t:
        case Bound(k):
            return k < depth
        case App(f, a):
            return is_closed(f, depth) and is_closed(a, depth)
        case Abs(_, _, b):
            return is_closed(b, depth + 1)
        case _:
            return True


# ------------------------------------------------------------------ typing


def type_of(t: Term, bound: tuple[Type, ...] = ()) -> Type:
    """The unique type of a well-formed term.

    Raises errors.TypeError for ill-typed applications, naming both
    offending types.
    """
    match t:
        case Var(_, ty) | SVar(_, _, ty) | Const(_, ty):
            return ty
        case Bound(k):
            if k >= len(bound):
                raise errors.TypeError(f"loose bound variable {k}")
            return bound[k]
        case Abs(_, ty, body):
            return fun_ty(ty, type_of(body, (ty,) + bound))
        case App(f, a):
            fty = type_of(f, bound)
            aty = type_of(a, bound)
            if not (isinstance(fty, TCon) and fty.name == "fun"):
                raise errors.TypeError(f"cannot apply term of type {fty} to argument of type {aty}")
            want, res = fty.args
            if want != aty:
                raise errors.TypeError(f"function expects {want} but argument has type {aty}")
            return res
    raise errors.TypeError(f"not a term: {t!r}")


# --------------------------------------------------------------- variables


def free_vars(t: Term) -> set[Var]:
    match t:
        case Var(_, _):
            return {t}
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case Abs(_, _, b):
            return free_vars(b)
        case _:
            return set()


def schematic_vars(t: Term) -> set[SVar]:
    match t:
        case SVar(_, _, _):
            return {t}
        case App(f, a):
            return schematic_vars(f) | schematic_vars(a)
        case Abs(_, _, b):
            return schematic_vars(b)
        case _:
            return set()


def term_type_vars(t: Term) -> set[str]:
    match t:
        case Var(_, ty) | SVar(_, _, ty) | Const(_, ty):
            return type_vars(ty)
        case App(f, a):
            return term_type_vars(f) | term_type_vars(a)
        case Abs(_, ty, b):
            return type_vars(ty) | term_type_vars(b)
        case _:
            return set()


_fresh_counter = itertools.count(1)


def fresh_name(base: str, avoid: set[str]) -> str:
    """A variant of base not in avoid (Isabelle-style letter suffixes)."""
    name = base
    while name in avoid:
        name += "a"
    return name


def gensym(base: str = "v") -> str:
    """Globally fresh internal name; '.' keeps it out of the parseable space."""
    return f".{base}{next(_fresh_counter)}"


# ------------------------------------------------------------ substitution


def subst_free(t: Term, mapping: Mapping[Var, Term]) -> Term:
    """Capture-avoiding simultaneous substitution of free variables.

    Positional bound encoding makes capture impossible; we only check the
    replacement types.
    """
    for v, rep in mapping.items():
        rty = type_of(rep)
        if rty != v.ty:
            raise errors.TypeError(f"cannot replace {v.name} : {v.ty} by a term of type {rty}")
    if not mapping:
        return t

    def go(t: Term) -> Term:
        match t:
            case Var(_, _):
                return mapping.get(t, t)
            case App(f, a):
                return App(go(f), go(a))
            case Abs(v, ty, b):
                return Abs(v, ty, go(b))
            case _:
                return t

    return go(t)


def subst_svars(t: Term, mapping: Mapping[tuple[str, int], Term]) -> Term:
    """Replace schematic variables keyed by (name, index); no typechecking
    here.  Untouched subterms are shared with the input."""
    if not mapping:
        return t
    match t:
        case SVar(n, i, _):
            return mapping.get((n, i), t)
        case App(f, a):
            f2 = subst_svars(f, mapping)
            a2 = subst_svars(a, mapping)
            return t if f2 is f and a2 is a else App(f2, a2)
        case Abs(v, ty, b):
            b2 = subst_svars(b, mapping)
            return t if b2 is b else Abs(v, ty, b2)
        case _:
            return t


def subst_type_in_term(t: Term, m: Mapping[str, Type]) -> Term:
    if not m:
        return t

    def sub(ty: Type) -> Type:
        out = subst_type(ty, m)
        return ty if out == ty else out

    match t:
        case Var(n, ty):
            ty2 = sub(ty)
            return t if ty2 is ty else Var(n, ty2)
        case SVar(n, i, ty):
            ty2 = sub(ty)
            return t if ty2 is ty else SVar(n, i, ty2)
        case Const(n, ty):
            ty2 = sub(ty)
            return t if ty2 is ty else Const(n, ty2)
        case App(f, a):
            f2 = subst_type_in_term(f, m)
            a2 = subst_type_in_term(a, m)
            return t if f2 is f and a2 is a else App(f2, a2)
        case Abs(v, ty, b):
            ty2 = sub(ty)
            b2 = subst_type_in_term(b, m)
            return t if ty2 is ty and b2 is b else Abs(v, ty2, b2)
        case _:
            return t


def instantiate(t: Term, tymap: Mapping[str, Type], svarmap: Mapping[tuple[str, int], Term]) -> Term:
    """Apply a type substitution then a schematic-variable substitution."""
    return subst_svars(subst_type_in_term(t, tymap), svarmap)


# --------------------------------------------------------- beta reduction


def beta_normalize(t: Term) -> Term:
    """Full beta-normal form; terminates because terms are simply typed.
    Already-normal subterms are returned unchanged (shared)."""
    match t:
        case App(f, a):
            f2 = beta_normalize(f)
            a2 = beta_normalize(a)
            if isinstance(f2, Abs):
                return beta_normalize(inst_bound(f2.body, a2))
            return t if f2 is f and a2 is a else App(f2, a2)
        case Abs(v, ty, b):
            b2 = beta_normalize(b)
            return t if b2 is b else Abs(v, ty, b2)
        case _:
            return t


def beta_step(t: Term) -> Term | None:
    """One leftmost-outermost beta step, or None when already normal."""
    match t:
        case App(Abs(_, _, b), a):
            return inst_bound(b, a)
        case App(f, a):
            f2 = beta_step(f)
            if f2 is not None:
                return App(f2, a)
            a2 = beta_step(a)
            if a2 is not None:
                return App(f, a2)
            return None
        case Abs(v, ty, b):
            b2 = beta_step(b)
            return None if b2 is None else Abs(v, ty, b2)
        case _:
            return None
