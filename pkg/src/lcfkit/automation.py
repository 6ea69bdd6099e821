"""Built-in automation: rewriting simplifier, classical tautology prover,
iterative-deepening proof search, and a finite-model counterexample finder.

Everything that claims to close a goal does so through the derivation log,
so a result is only ever delivered after full kernel replay: these
procedures can fail, but they cannot forge theorems.
"""

from __future__ import annotations

import itertools
import threading
from collections import deque
from dataclasses import dataclass
from typing import Iterator

from . import base, errors, kernel, proof
from .kernel import Theorem, Theory
from .proof import Goal, ProofState, Rule, Tactic
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
    free_vars,
    fresh_name,
    strip_app,
    strip_fun,
    type_of,
)
from .unify import match_terms

LOGICAL_CONSTS = {"And", "Or", "Imp", "Iff", "Not", "True", "False", "Eq", "All", "Ex"}


def _check_cancel(cancel, counter: list[int], every: int = 512):
    counter[0] += 1
    if cancel is not None and counter[0] % every == 0 and cancel.is_set():
        raise errors.CancelledError("search cancelled")


# ===================================================================== simp


@dataclass(frozen=True)
class Simpset:
    """Ordered rewrite rules (equations, left to right) plus a step cap."""

    rules: tuple[tuple[str, Theorem], ...] = ()
    cap: int = 10000

    def add(self, thy: Theory, name: str, thm: Theorem) -> "Simpset":
        return Simpset(self.rules + ((name, mk_simp_rule(thy, thm)),), self.cap)


def mk_simp_rule(thy: Theory, thm: Theorem) -> Theorem:
    """Normalize a theorem into an oriented equation |- l = r.

    Leading universal quantifiers become schematic variables and
    bi-implications become boolean equations.  The left side may not be a
    lone schematic variable and may not lack schematics that the right
    side uses.
    """
    if thm.hyps:
        raise errors.RuleError("rewrite rules must have no hypotheses")
    cur = thm
    opened: list[Var] = []
    avoid = {v.name for v in free_vars(cur.concl)}
    while (b := kernel.dest_all(cur.concl)) is not None:
        nm = fresh_name(b.var or "x", avoid)
        avoid.add(nm)
        v = Var(nm, b.ty)
        cur = kernel.all_elim(cur, v)
        opened.append(v)
    for v in opened:
        cur = kernel.generalize(cur, v)

    if kernel.dest_iff(cur.concl) is not None:
        a, b2 = kernel.dest_iff(cur.concl)
        core = base.core_theory()
        e = base.unfold_iff(thy, a, b2, core.definitions["Iff_def"])
        pair = base.eq_forward(e, cur)
        cur = kernel.bool_ext(kernel.conj_elim1(pair), kernel.conj_elim2(pair))

    d = kernel.dest_eq(cur.concl)
    if d is None:
        raise errors.RuleError("rewrite rules must be equations or bi-implications")
    lhs, rhs = d
    if isinstance(lhs, SVar):
        raise errors.RuleError("rewrite left side must not be a lone schematic variable")
    from .terms import schematic_vars

    extra = {(s.name, s.index) for s in schematic_vars(rhs)} - {(s.name, s.index) for s in schematic_vars(lhs)}
    if extra:
        raise errors.RuleError("rewrite right side uses schematics missing from the left side")
    return cur


def simpset_of(thy: Theory, extra: tuple[str, ...] = (), cap: int = 10000) -> Simpset:
    """The theory's registered rewrite rules, oldest theory first, plus extras."""
    ordered = list(thy.ancestors())
    ordered.reverse()
    names: list[str] = []
    seen = set()
    for t in ordered:
        for n in t.simp_rules:
            if n not in seen:
                seen.add(n)
                names.append(n)
    for n in extra:
        if n not in seen:
            seen.add(n)
            names.append(n)
    rules = []
    for n in names:
        thm, _ = thy.lookup_theorem_entry(n)
        if thm is None:
            raise errors.NotFoundError(f"no theorem named {n}")
        rules.append((n, mk_simp_rule(thy, thm)))
    return Simpset(tuple(rules), cap)


def _rewrite_positions(t: Term, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], Term]]:
    """Binder-free positions, innermost first, left to right."""
    if isinstance(t, App):
        yield from _rewrite_positions(t.fn, path + (0,))
        yield from _rewrite_positions(t.arg, path + (1,))
    if not isinstance(t, (Abs, Bound)):
        yield path, t


def _replace_at(t: Term, path: tuple[int, ...], hole: Term) -> Term:
    if not path:
        return hole
    assert isinstance(t, App)
    if path[0] == 0:
        return App(_replace_at(t.fn, path[1:], hole), t.arg)
    return App(t.fn, _replace_at(t.arg, path[1:], hole))


def simp_tac(ss: Simpset | None = None, add: tuple[str, ...] = ()) -> Tactic:
    """Rewrite the target exhaustively (innermost-first, first matching rule,
    left to right); close it when it becomes True, an assumption, or a
    reflexive equation, otherwise leave the rewritten goal.  Fails when no
    rule fires; raises SimpLoopError past the step cap."""

    def run(state: ProofState, i: int) -> Iterator[ProofState]:
        sset = ss if ss is not None else simpset_of(state.thy)
        if add:
            known = {n for n, _ in sset.rules}
            extra = []
            for n in add:
                if n in known:
                    continue
                thm, _ = state.thy.lookup_theorem_entry(n)
                if thm is None:
                    raise errors.NotFoundError(f"no theorem named {n}")
                extra.append((n, mk_simp_rule(state.thy, thm)))
            sset = Simpset(sset.rules + tuple(extra), sset.cap)
        goal = state.goals[i]
        counter = state.counter
        freshened: list[tuple[str, Theorem]] = []
        for name, stmt in sset.rules:
            f, counter = proof._freshen_statement(stmt, counter)
            freshened.append((name, f))

        target = goal.target
        entries: list[proof.RewriteStep] = []
        fired: deque[str] = deque(maxlen=5)
        while True:
            if len(entries) > sset.cap:
                raise errors.SimpLoopError(f"simplifier exceeded {sset.cap} steps; last rules: {', '.join(fired)}")
            hit = None
            for pos, sub in _rewrite_positions(target):
                for name, stmt in freshened:
                    lhs, rhs = kernel.dest_eq(stmt.concl)
                    try:
                        env = match_terms(lhs, sub)
                    except errors.UnifyError:
                        continue
                    hit = (pos, sub, name, stmt, env, rhs)
                    break
                if hit:
                    break
            if hit is None:
                break
            pos, sub, name, stmt, env, rhs = hit
            replacement = env.apply(rhs)
            template = Abs(".z", type_of(sub), _hole_template(target, pos))
            new_target = beta_normalize(_replace_at(target, pos, replacement))
            entries.append(
                proof.RewriteStep(
                    goal_index=i,
                    rule_name=name,
                    statement=stmt,
                    bindings=tuple(env.terms.items()),
                    type_bindings=tuple(env.types.items()),
                    template=template,
                    old=target,
                    new=new_target,
                )
            )
            fired.append(name)
            target = new_target

        if not entries:
            return

        mid = ProofState(
            thy=state.thy,
            original=state.original,
            goals=state.goals[:i] + (Goal(goal.params, goal.context, target),) + state.goals[i + 1 :],
            env=state.env,
            log=state.log + tuple(entries),
            parent=state,
            counter=counter,
            tracked=state.tracked,
        )
        yield _close_or_keep(mid, i)

    return Tactic(run, "simp")


def _hole_template(target: Term, path: tuple[int, ...]) -> Term:
    return _replace_at(target, path, Bound(0))


def _close_or_keep(state: ProofState, i: int) -> ProofState:
    goal = state.goals[i]
    if goal.target == kernel.TRUE:
        closed = next(proof.rule_tac(proof.get_rule(state.thy, "TrueI"))(state, i), None)
        if closed is not None:
            return closed
    closed = next(proof.assume_tac()(state, i), None)
    if closed is not None:
        return closed
    if kernel.dest_eq(goal.target) is not None:
        closed = next(proof.rule_tac(proof.get_rule(state.thy, "refl"))(state, i), None)
        if closed is not None:
            return closed
    return state


# ===================================================================== taut


def propositional_atoms(phi: Term) -> list[Term]:
    """Maximal boolean subterms that are not built from the propositional
    connectives, in first-occurrence order."""
    atoms: list[Term] = []
    seen: set[Term] = set()

    def walk(t: Term):
        h, args = strip_app(t)
        if isinstance(h, Const) and h.name in ("And", "Or", "Imp", "Iff") and len(args) == 2:
            walk(args[0])
            walk(args[1])
            return
        if isinstance(h, Const) and h.name == "Not" and len(args) == 1:
            walk(args[0])
            return
        if isinstance(h, Const) and h.name in ("True", "False") and not args:
            return
        if t not in seen:
            seen.add(t)
            atoms.append(t)

    walk(phi)
    return atoms


def _eval_prop(t: Term, asg: dict[Term, bool]) -> bool:
    if t in asg:
        return asg[t]
    h, args = strip_app(t)
    if isinstance(h, Const):
        if h.name == "And":
            return _eval_prop(args[0], asg) and _eval_prop(args[1], asg)
        if h.name == "Or":
            return _eval_prop(args[0], asg) or _eval_prop(args[1], asg)
        if h.name == "Imp":
            return (not _eval_prop(args[0], asg)) or _eval_prop(args[1], asg)
        if h.name == "Iff":
            return _eval_prop(args[0], asg) == _eval_prop(args[1], asg)
        if h.name == "Not":
            return not _eval_prop(args[0], asg)
        if h.name == "True":
            return True
        if h.name == "False":
            return False
    raise errors.RuleError(f"not a propositional skeleton node: {t!r}")


_COLUMN_CACHE: dict[int, list[int]] = {}


def _atom_columns(n: int) -> list[int]:
    cols = _COLUMN_CACHE.get(n)
    if cols is None:
        cols = []
        for idx in range(n):
            col = 0
            for v in range(1 << n):
                if (v >> idx) & 1:
                    col |= 1 << v
            cols.append(col)
        _COLUMN_CACHE[n] = cols
    return cols


def taut_countermodel(phi: Term, max_atoms: int = 20) -> dict[Term, bool] | None:
    """A falsifying valuation of the propositional skeleton, or None when
    the formula is a tautology.  Decided on bit-vectors: bit v of the value
    of a subformula is its truth under valuation v."""
    atoms = propositional_atoms(phi)
    n = len(atoms)
    if n > max_atoms:
        raise errors.TautBudgetError(f"{n} distinct atoms exceed the budget of {max_atoms}")
    full = (1 << (1 << n)) - 1
    cols: dict[Term, int] = dict(zip(atoms, _atom_columns(n)))

    def ev(t: Term) -> int:
        got = cols.get(t)
        if got is not None:
            return got
        h, args = strip_app(t)
        name = h.name if isinstance(h, Const) else None
        if name == "And":
            return ev(args[0]) & ev(args[1])
        if name == "Or":
            return ev(args[0]) | ev(args[1])
        if name == "Imp":
            return (full ^ ev(args[0])) | ev(args[1])
        if name == "Iff":
            return full ^ (ev(args[0]) ^ ev(args[1]))
        if name == "Not":
            return full ^ ev(args[0])
        if name == "True":
            return full
        if name == "False":
            return 0
        raise errors.RuleError(f"not a propositional skeleton node: {t!r}")

    value = ev(phi)
    if value == full:
        return None
    bad = (full ^ value).bit_length() - 1  # highest falsifying valuation; any works
    return {a: bool((bad >> idx) & 1) for idx, a in enumerate(atoms)}


def prove_taut(thy: Theory, phi: Term) -> Theorem:
    """Forward kernel proof of a propositional tautology: split every atom
    with excluded middle, then prove/refute by evaluation under each leaf
    valuation."""
    atoms = propositional_atoms(phi)
    core = base.core_theory()
    not_def = core.definitions["Not_def"]
    iff_def = core.definitions["Iff_def"]
    true_thm_src = core.theorems["TrueI"]
    # re-check: replay must never certify a non-tautology
    if taut_countermodel(phi) is not None:
        raise errors.InternalSoundnessError("taut step recorded for a non-tautology")

    def use_not(a: Theorem) -> Theorem:
        return base.eq_forward(base.cong_app(not_def, kernel.dest_not(a.concl), thy), a)

    def fold_not(a: Theorem, inner: Term) -> Theorem:
        return base.eq_forward(base.eq_sym(base.cong_app(not_def, inner, thy), thy), a)

    def prove(t: Term, asg: dict[Term, bool]) -> Theorem:
        if t in asg:
            return kernel.assume(thy, t)
        h, args = strip_app(t)
        name = h.name if isinstance(h, Const) else None
        if name == "True":
            return base.eq_forward(
                base.eq_sym(core.definitions["True_def"]),
                kernel.imp_intro(kernel.assume(thy, kernel.FALSE), kernel.FALSE),
            )
        if name == "And":
            return kernel.conj_intro(prove(args[0], asg), prove(args[1], asg))
        if name == "Or":
            if _eval_prop(args[0], asg):
                return kernel.disj_intro1(prove(args[0], asg), args[1])
            return kernel.disj_intro2(prove(args[1], asg), args[0])
        if name == "Imp":
            a, b = args
            if _eval_prop(b, asg):
                return kernel.imp_intro(prove(b, asg), a)
            bot = refute(a, asg)
            return kernel.imp_intro(kernel.false_elim(bot, b), a)
        if name == "Not":
            bot = refute(args[0], asg)
            return fold_not(kernel.imp_intro(bot, args[0]), args[0])
        if name == "Iff":
            a, b = args
            fwd = prove(kernel.mk_imp(a, b), asg)
            bwd = prove(kernel.mk_imp(b, a), asg)
            both = kernel.conj_intro(fwd, bwd)
            return base.eq_forward(base.eq_sym(base.unfold_iff(thy, a, b, iff_def), thy), both)
        raise errors.InternalSoundnessError(f"cannot prove leaf {t!r}")

    def refute(t: Term, asg: dict[Term, bool]) -> Theorem:
        """A proof of False from hypotheses {t} u literals."""
        if t in asg:
            na = kernel.assume(thy, kernel.mk_not(t))
            return kernel.imp_elim(use_not(na), kernel.assume(thy, t))
        h, args = strip_app(t)
        name = h.name if isinstance(h, Const) else None
        if name == "False":
            return kernel.assume(thy, kernel.FALSE)
        if name == "And":
            a, b = args
            bad, pick = (a, kernel.conj_elim1) if not _eval_prop(a, asg) else (b, kernel.conj_elim2)
            imp = kernel.imp_intro(refute(bad, asg), bad)
            return kernel.imp_elim(imp, pick(kernel.assume(thy, t)))
        if name == "Or":
            return kernel.disj_elim(kernel.assume(thy, t), refute(args[0], asg), refute(args[1], asg))
        if name == "Imp":
            a, b = args
            got_b = kernel.imp_elim(kernel.assume(thy, t), prove(a, asg))
            imp = kernel.imp_intro(refute(b, asg), b)
            return kernel.imp_elim(imp, got_b)
        if name == "Not":
            return kernel.imp_elim(use_not(kernel.assume(thy, t)), prove(args[0], asg))
        if name == "Iff":
            a, b = args
            pair = base.eq_forward(base.unfold_iff(thy, a, b, iff_def), kernel.assume(thy, t))
            if _eval_prop(a, asg):
                got = kernel.imp_elim(kernel.conj_elim1(pair), prove(a, asg))
                imp = kernel.imp_intro(refute(b, asg), b)
            else:
                got = kernel.imp_elim(kernel.conj_elim2(pair), prove(b, asg))
                imp = kernel.imp_intro(refute(a, asg), a)
            return kernel.imp_elim(imp, got)
        raise errors.InternalSoundnessError(f"cannot refute leaf {t!r}")

    def split(rest: list[Term], asg: dict[Term, bool]) -> Theorem:
        if not rest:
            return prove(phi, asg)
        a = rest[0]
        t1 = split(rest[1:], {**asg, a: True})
        t2 = split(rest[1:], {**asg, a: False})
        em = kernel.excluded_middle(thy, a)
        # discharges the positive branch's hypothesis a and the negative
        # branch's hypothesis Not a
        return kernel.disj_elim(em, t1, t2)

    return split(atoms, {})


proof.register_macro_replayer("taut", prove_taut)


def taut_tac(max_atoms: int = 20) -> Tactic:
    """Decide propositional validity of the target; closes the goal with a
    kernel-replayable record, fails on invalid formulas (use
    taut_countermodel for the falsifying valuation)."""

    def run(state: ProofState, i: int) -> Iterator[ProofState]:
        if not state.thy.classical:
            raise errors.ClassicalRuleError(f"taut requires a classical theory, {state.thy.name} is not")
        goal = state.goals[i]
        if taut_countermodel(goal.target, max_atoms) is not None:
            return
        entry = proof.MacroStep(i, "taut", goal.target)
        yield proof._successor(state, i, [], state.env, entry, state.counter)

    return Tactic(run, "taut")


# ==================================================================== blast


def registered_rules(thy: Theory) -> tuple[list[Rule], list[Rule]]:
    """(intro, elim) rules registered across the ancestry, oldest first."""
    ordered = list(thy.ancestors())
    ordered.reverse()
    intro: list[Rule] = []
    elim: list[Rule] = []
    seen_i: set[str] = set()
    seen_e: set[str] = set()
    for t in ordered:
        for n in t.intro_rules:
            if n not in seen_i:
                seen_i.add(n)
                intro.append(proof.get_rule(thy, n))
        for n in t.elim_rules:
            if n not in seen_e:
                seen_e.add(n)
                elim.append(proof.get_rule(thy, n))
    return intro, elim


def _head_key(t: Term):
    """A cheap rigidity key: constant/variable heads are rigid, schematic
    heads match anything (None)."""
    h, _ = strip_app(t)
    if isinstance(h, Const):
        return ("c", h.name)
    if isinstance(h, Var):
        return ("v", h.name)
    return None


def blast_tac(max_depth: int = 10, node_cap: int | None = 100000, cancel: threading.Event | None = None) -> Tactic:
    """Iterative-deepening backward search over the registered rules plus
    assumption, backtracking through the lazy successor sequences.  The
    first proof found is kept; running out of depth (or of the total node
    budget) is failure, not an error."""

    def run(state: ProofState, i: int) -> Iterator[ProofState]:
        intro, elim = registered_rules(state.thy)
        intro_info = []
        for r in intro:
            intro_info.append((proof.rule_tac(r), _head_key(r.conclusion)))
        elim_info = []
        for r in elim:
            major, _ = kernel.strip_imps(r.statement.concl, r.nprems)
            elim_info.append((proof.erule_tac(r), _head_key(r.conclusion), _head_key(major[0])))
        assume = proof.assume_tac()
        nodes = [0]

        def candidates(st: ProofState, j: int):
            goal = st.goals[j]
            th = _head_key(goal.target)
            ctx_heads = {_head_key(c) for c in goal.context}
            yield assume
            for tac, concl_h, major_h in elim_info:
                if concl_h is not None and th is not None and concl_h != th:
                    continue
                if major_h is not None and not any(h is None or h == major_h for h in ctx_heads):
                    continue
                yield tac
            for tac, concl_h in intro_info:
                if concl_h is not None and th is not None and concl_h != th:
                    continue
                yield tac

        def solve(st: ProofState, j: int, d: int) -> Iterator[ProofState]:
            if cancel is not None and cancel.is_set():
                raise errors.CancelledError("search cancelled")
            nodes[0] += 1
            if node_cap is not None and nodes[0] > node_cap:
                return
            if d <= 0:
                return
            for tac in candidates(st, j):
                for s2 in tac(st, j):
                    m = len(s2.goals) - len(st.goals) + 1
                    yield from solve_range(s2, j, m, d - 1)

        def solve_range(st: ProofState, j: int, m: int, d: int) -> Iterator[ProofState]:
            if m <= 0:
                yield st
                return
            for s2 in solve(st, j + m - 1, d):
                yield from solve_range(s2, j, m - 1, d)

        for d in range(1, max_depth + 1):
            if node_cap is not None and nodes[0] > node_cap:
                return
            for found in solve(state, i, d):
                yield found
                return

    return Tactic(run, f"blast {max_depth}")


# ============================================================ counterexamples


@dataclass(frozen=True)
class FiniteModel:
    """A finite interpretation falsifying a formula."""

    sizes: dict[str, int]
    tables: dict[str, dict[tuple, object]]
    valuation: dict[str, object]

    def describe(self) -> dict:
        return {
            "domains": dict(self.sizes),
            "constants": {
                name: {(", ".join(map(str, k)) if k else "()"): v for k, v in table.items()}
                for name, table in self.tables.items()
            },
            "variables": dict(self.valuation),
        }


def _base_type_name(ty: Type) -> str:
    if isinstance(ty, TVar):
        return "'" + ty.name
    return ty.name


def _is_base(ty: Type) -> bool:
    return isinstance(ty, TVar) or (isinstance(ty, TCon) and not ty.args)


def _collect_symbols(phi: Term):
    """(base type names, symbols) of the first-order fragment; raises
    FragmentError outside it.  A symbol entry is (argument types, result
    type, is_variable)."""
    types: set[str] = set()
    symbols: dict[str, tuple[tuple[Type, ...], Type, bool]] = {}

    def note_type(ty: Type, what: str):
        if not _is_base(ty):
            raise errors.FragmentError(f"{what} over non-base type {ty}")
        if not (isinstance(ty, TCon) and ty.name == "bool"):
            types.add(_base_type_name(ty))

    def note_symbol(name: str, ty: Type, is_var: bool):
        args, res = strip_fun(ty)
        for a in args:
            note_type(a, f"argument of {name}")
        note_type(res, f"result of {name}")
        entry = (tuple(args), res, is_var)
        seen = symbols.get(name)
        if seen is not None and seen != entry:
            raise errors.FragmentError(f"symbol {name} used at two types")
        symbols[name] = entry

    def walk(t: Term):
        h, args = strip_app(t)
        if isinstance(h, Const) and h.name in ("All", "Ex") and len(args) == 1 and isinstance(args[0], Abs):
            note_type(args[0].ty, "quantification")
            walk(args[0].body)
            return
        if isinstance(h, Const) and h.name in ("And", "Or", "Imp", "Iff", "Not", "True", "False"):
            for a in args:
                walk(a)
            return
        if isinstance(h, Const) and h.name == "Eq" and len(args) == 2:
            note_type(h.ty.args[0], "equality")
            walk(args[0])
            walk(args[1])
            return
        if isinstance(h, Const):
            note_symbol(h.name, h.ty, False)
            for a in args:
                walk(a)
            return
        if isinstance(h, Var):
            note_symbol(h.name, h.ty, True)
            for a in args:
                walk(a)
            return
        if isinstance(h, SVar):
            note_symbol("?" + h.name, h.ty, True)
            for a in args:
                walk(a)
            return
        if isinstance(h, Bound):
            if args:
                raise errors.FragmentError("quantification over function types")
            return
        raise errors.FragmentError(f"term outside the first-order fragment: {t!r}")

    walk(beta_normalize(phi))
    return sorted(types), symbols


def find_counterexample(
    thy: Theory,
    phi: Term,
    max_size: int,
    cancel: threading.Event | None = None,
) -> FiniteModel | None:
    """Enumerate interpretations over domains of size 1..max_size (domain
    size ascending, then lexicographic tables); return the first model
    making the formula false, or None."""
    kernel.check_formula(thy, phi)
    body = beta_normalize(phi)
    type_names, symbols = _collect_symbols(body)
    counter = [0]

    sym_names = sorted(symbols)
    for n in range(1, max_size + 1):
        sizes = {tn: n for tn in type_names}

        def domain(ty: Type):
            if isinstance(ty, TCon) and ty.name == "bool":
                return [False, True]
            return list(range(n))

        table_spaces = []
        for name in sym_names:
            args, res, _is_var = symbols[name]
            keys = list(itertools.product(*[domain(a) for a in args]))
            table_spaces.append((name, keys, domain(res)))

        combos = itertools.product(
            *[itertools.product(values, repeat=len(keys)) for _, keys, values in table_spaces]
        )
        for combo in combos:
            _check_cancel(cancel, counter)
            tables = {
                name: dict(zip(keys, values))
                for (name, keys, _), values in zip(table_spaces, combo)
            }
            if not _eval_model(body, tables, n):
                named = {name: tables[name] for name in sym_names if not symbols[name][2]}
                valuation = {
                    name: (tables[name][()] if not symbols[name][0] else tables[name])
                    for name in sym_names
                    if symbols[name][2]
                }
                return FiniteModel(sizes=sizes, tables=named, valuation=valuation)
    return None


def _eval_model(phi: Term, tables: dict[str, dict[tuple, object]], n: int) -> bool:
    def domain_of(ty: Type):
        if isinstance(ty, TCon) and ty.name == "bool":
            return [False, True]
        return list(range(n))

    def ev(t: Term, benv: tuple):
        h, args = strip_app(t)
        if isinstance(h, Const):
            name = h.name
            if name == "And":
                return ev(args[0], benv) and ev(args[1], benv)
            if name == "Or":
                return ev(args[0], benv) or ev(args[1], benv)
            if name == "Imp":
                return (not ev(args[0], benv)) or ev(args[1], benv)
            if name == "Iff":
                return ev(args[0], benv) == ev(args[1], benv)
            if name == "Not":
                return not ev(args[0], benv)
            if name == "True":
                return True
            if name == "False":
                return False
            if name == "Eq":
                return ev(args[0], benv) == ev(args[1], benv)
            if name in ("All", "Ex"):
                body = args[0]
                dom = domain_of(body.ty)
                results = (ev(body.body, (d,) + benv) for d in dom)
                return all(results) if name == "All" else any(results)
            return _app_table(tables[name], args, benv)
        if isinstance(h, Var):
            return _app_table(tables[h.name], args, benv)
        if isinstance(h, SVar):
            return _app_table(tables["?" + h.name], args, benv)
        if isinstance(h, Bound):
            val = benv[h.k]
            if args:
                raise errors.FragmentError("higher-order bound variable")
            return val
        raise errors.FragmentError(f"cannot evaluate {t!r}")

    def _app_table(table, args, benv):
        return table[tuple(ev(a, benv) for a in args)]

    return ev(phi, ())


# ======================================================== tactic compilation


def compile_tactic(thy: Theory, expr, cancel: threading.Event | None = None) -> Tactic:
    """Turn a parsed tactic expression into a runnable tactic; rule names
    resolve against the given theory now, at execution time.  A cancel
    event interrupts the long-running searches."""
    from . import syntax as _syn

    e = expr
    if isinstance(e, _syn.TRule):
        return proof.rule_tac(proof.get_rule(thy, e.name))
    if isinstance(e, _syn.TErule):
        return proof.erule_tac(proof.get_rule(thy, e.name))
    if isinstance(e, _syn.TAssumption):
        return proof.assume_tac()
    if isinstance(e, _syn.TSimp):
        return simp_tac(add=tuple(e.add))
    if isinstance(e, _syn.TTaut):
        return taut_tac()
    if isinstance(e, _syn.TBlast):
        return blast_tac(e.depth if e.depth is not None else 10, cancel=cancel)
    if isinstance(e, _syn.TRepeat):
        return proof.repeat_tac(compile_tactic(thy, e.body, cancel))
    if isinstance(e, _syn.TTry):
        return proof.try_tac(compile_tactic(thy, e.body, cancel))
    if isinstance(e, _syn.TThen):
        return proof.then_tac(compile_tactic(thy, e.left, cancel), compile_tactic(thy, e.right, cancel))
    if isinstance(e, _syn.TOrelse):
        return proof.orelse_tac(compile_tactic(thy, e.left, cancel), compile_tactic(thy, e.right, cancel))
    raise errors.ParseError(f"unknown tactic expression {e!r}")


def applicable_rules(state: ProofState, i: int) -> list[str]:
    """Names of registered rules whose application to goal i succeeds."""
    intro, elim = registered_rules(state.thy)
    out = []
    for r in intro:
        if next(proof.rule_tac(r)(state, i), None) is not None:
            out.append(r.name)
    for r in elim:
        if r.name not in out and next(proof.erule_tac(r)(state, i), None) is not None:
            out.append(r.name)
    return out
