"""Backward proof: goals, proof states with shared placeholders, rule
resolution, tacticals, and validation by kernel replay.

A proof state never holds theorems; it records every step in an
append-only log.  ``qed`` rebuilds the proof tree from the log and pushes
it back through the kernel, so nothing here needs to be trusted: a buggy
tactic can only make replay fail (InternalSoundnessError), never certify
a wrong theorem.

Rules are schematic theorems ``|- P1 --> ... --> Pn --> C``.  Applying one
backward unifies C (schematics freshly renamed and lifted over the goal's
parameters) with the target and replaces the goal by the premises; at
replay the same statement is instantiated with the final environment and
discharged with an imp_elim chain.
"""

from __future__ import annotations

import itertools
import weakref
from dataclasses import dataclass
from typing import Callable, Iterator

from . import base, errors, kernel
from .kernel import Theorem, Theory
from .terms import (
    SVar,
    Term,
    Var,
    apps,
    beta_normalize,
    free_vars,
    fresh_name,
    fun_tys,
    inst_bound,
    schematic_vars,
    subst_svars,
    term_type_vars,
)
from .unify import EMPTY_ENV, SubstEnv, unify_terms

# ------------------------------------------------------------------- goals


@dataclass(frozen=True)
class Goal:
    """One open subgoal: fixed local parameters, assumptions, and a target."""

    params: tuple[Var, ...]
    context: tuple[Term, ...]
    target: Term

    def apply_env(self, env: SubstEnv) -> "Goal":
        return Goal(
            tuple(Var(p.name, env.apply_type(p.ty)) for p in self.params),
            tuple(env.apply(c) for c in self.context),
            env.apply(self.target),
        )


@dataclass(frozen=True)
class Premise:
    params: tuple[Var, ...]
    assumptions: tuple[Term, ...]
    conclusion: Term


@dataclass(frozen=True)
class Rule:
    name: str
    statement: Theorem
    nprems: int
    premises: tuple[Premise, ...]
    conclusion: Term


def derive_rule(stmt: Theorem, name: str | None = None, nprems: int | None = None) -> Rule:
    """View a schematic implication chain as a backward rule.

    Premises are flattened maximally unless ``nprems`` fixes the split
    (impI would otherwise be read as modus ponens).  Leading universal
    quantifiers of a premise become premise-local parameters and nested
    implications become premise-local assumptions; order is preserved.
    """
    if stmt.hyps:
        raise errors.RuleError("a rule statement must not have hypotheses")
    prems_raw, concl = kernel.strip_imps(stmt.concl, nprems)
    if nprems is not None and len(prems_raw) != nprems:
        raise errors.RuleError(f"statement has only {len(prems_raw)} premises, {nprems} requested")
    return Rule(name or "rule", stmt, len(prems_raw), tuple(_parse_premise(p) for p in prems_raw), concl)


def _parse_premise(phi: Term) -> Premise:
    binders: list[Var] = []
    used: set[str] = set()
    while (b := kernel.dest_all(phi)) is not None:
        nm = fresh_name(b.var or "x", used)
        used.add(nm)
        v = Var(nm, b.ty)
        phi = inst_bound(b.body, v)
        binders.append(v)
    assms, concl = kernel.strip_imps(phi)
    return Premise(tuple(binders), tuple(assms), concl)


_rule_cache: dict[tuple[int, str], Rule] = {}


def get_rule(thy: Theory, name: str) -> Rule:
    """Look a registered or stored theorem up as a backward rule."""
    key = (thy.id, name)
    hit = _rule_cache.get(key)
    if hit is not None:
        return hit
    thm, _ = thy.lookup_theorem_entry(name)
    if thm is None:
        raise errors.NotFoundError(f"no theorem named {name}")
    nprems, _ = thy._search("rule_premises", name)
    rule = derive_rule(thm, name, nprems)
    _rule_cache[key] = rule
    return rule


# --------------------------------------------------------------- log entries


@dataclass(frozen=True)
class RuleStep:
    goal_index: int
    rule_name: str
    statement: Theorem
    nprems: int
    lift_map: tuple[tuple[tuple[str, int], Term], ...]
    prem_meta: tuple[tuple[tuple[Var, ...], int], ...]  # (fresh params, assumption count)
    consumed: Term | None  # erule: context assumption eliminated
    target: Term

    @property
    def subgoals(self) -> int:
        return len(self.prem_meta)


@dataclass(frozen=True)
class AssumeStep:
    goal_index: int
    assumption: Term
    target: Term

    subgoals = 0


@dataclass(frozen=True)
class RewriteStep:
    goal_index: int
    rule_name: str
    statement: Theorem  # |- l = r, schematics freshly renamed
    bindings: tuple[tuple[tuple[str, int], Term], ...]
    type_bindings: tuple[tuple[str, "object"], ...]
    template: Term  # Abs with the rewritten occurrence as the hole
    old: Term
    new: Term

    subgoals = 1


@dataclass(frozen=True)
class MacroStep:
    """A step whose kernel derivation is produced wholesale at replay time
    by a registered builder (used by the tautology prover)."""

    goal_index: int
    kind: str
    target: Term

    subgoals = 0


_macro_replayers: dict[str, Callable[[Theory, Term], Theorem]] = {}


def register_macro_replayer(kind: str, fn: Callable[[Theory, Term], Theorem]):
    _macro_replayers[kind] = fn


LogEntry = RuleStep | AssumeStep | RewriteStep | MacroStep


# --------------------------------------------------------------- proof state


@dataclass(frozen=True, eq=False)
class ProofState:
    thy: Theory
    original: Term
    goals: tuple[Goal, ...]
    env: SubstEnv
    log: tuple[LogEntry, ...]
    parent: "ProofState | None"
    counter: int
    tracked: frozenset[SVar]

    def __repr__(self):
        return f"<ProofState: {len(self.goals)} goals, {len(self.log)} steps>"


def init_proof(thy: Theory, phi: Term) -> ProofState:
    """A single goal with empty context targeting phi (beta-normalized:
    goal formulas are kept normal throughout)."""
    kernel.check_formula(thy, phi)
    target = beta_normalize(phi)
    return ProofState(
        thy=thy,
        original=phi,
        goals=(Goal((), (), target),),
        env=EMPTY_ENV,
        log=(),
        parent=None,
        counter=1,
        tracked=frozenset(schematic_vars(phi)),
    )


def undo(state: ProofState) -> ProofState:
    if state.parent is None:
        raise errors.NoHistoryError("already at the initial proof state")
    return state.parent


# ------------------------------------------------------------------- tactics


class Tactic:
    """A function from (state, goal index) to a lazy sequence of successor
    states.  Failure is an empty sequence, never an exception."""

    def __init__(self, run: Callable[[ProofState, int], Iterator[ProofState]], name: str = "tactic"):
        self._run = run
        self.name = name

    def __call__(self, state: ProofState, i: int = 0) -> Iterator[ProofState]:
        if not (0 <= i < len(state.goals)):
            return iter(())
        return self._run(state, i)

    def __repr__(self):
        return f"<Tactic {self.name}>"


def _goal_svars(goals) -> frozenset[SVar]:
    out: set[SVar] = set()
    for g in goals:
        out |= schematic_vars(g.target)
        for c in g.context:
            out |= schematic_vars(c)
    return frozenset(out)


def _successor(
    state: ProofState,
    i: int,
    new_goals: list[Goal],
    env2: SubstEnv,
    entry: LogEntry,
    counter: int,
) -> ProofState:
    out: list[Goal] = []
    dirty = env2 is not state.env
    for j, g in enumerate(state.goals):
        if j == i:
            out.extend(new_goals)
        else:
            out.append(g.apply_env(env2) if dirty else g)
    return ProofState(
        thy=state.thy,
        original=state.original,
        goals=tuple(out),
        env=env2,
        log=state.log + (entry,),
        parent=state,
        counter=counter,
        tracked=state.tracked | _goal_svars(new_goals),
    )


def _avoid_names(state: ProofState) -> set[str]:
    names: set[str] = set()
    for g in state.goals:
        for p in g.params:
            names.add(p.name)
        for c in g.context:
            names.update(v.name for v in free_vars(c))
        names.update(v.name for v in free_vars(g.target))
    for v in state.env.terms.values():
        names.update(x.name for x in free_vars(v))
    names.update(v.name for v in free_vars(state.original))
    return names


_statement_shape_cache: "weakref.WeakKeyDictionary[Theorem, tuple]" = weakref.WeakKeyDictionary()


def _freshen_statement(stmt: Theorem, counter: int) -> tuple[Theorem, int]:
    """Rename every schematic term and type variable of a rule statement."""
    shape = _statement_shape_cache.get(stmt)
    if shape is None:
        svs = tuple(sorted({(s.name, s.index) for s in schematic_vars(stmt.concl)}))
        tvs = tuple(sorted(term_type_vars(stmt.concl)))
        shape = (svs, tvs)
        _statement_shape_cache[stmt] = shape
    svs, tvs = shape
    tyren = {}
    for tv in tvs:
        tyren[tv] = f"{tv.split('.', 1)[0]}.{counter}"
        counter += 1
    tmren = {}
    for key in svs:
        tmren[key] = (key[0], counter)
        counter += 1
    if not tyren and not tmren:
        return stmt, counter
    return kernel.rename_schematics(stmt, tyren, tmren), counter


def _lift_over_params(stmt: Theorem, params: tuple[Var, ...], counter: int):
    """Replace each schematic ?F by ?F' applied to the goal parameters, so
    placeholder solutions may depend on them (and on nothing newer)."""
    lift: dict[tuple[str, int], Term] = {}
    ptys = [p.ty for p in params]
    for s in sorted(schematic_vars(stmt.concl), key=lambda v: (v.name, v.index)):
        if params:
            s2 = SVar(s.name, counter, fun_tys(ptys, s.ty))
            counter += 1
            lift[(s.name, s.index)] = apps(s2, *params)
        else:
            lift[(s.name, s.index)] = s
    return lift, counter


def _open_premise(pf: Term, env2: SubstEnv, get_avoid):
    """Instantiate a premise formula's leading binders with fresh parameters."""
    params: list[Var] = []
    while (b := kernel.dest_all(pf)) is not None:
        avoid = get_avoid()
        nm = fresh_name(b.var or "x", avoid)
        avoid.add(nm)
        v = Var(nm, env2.apply_type(b.ty))
        pf = inst_bound(b.body, Var(nm, b.ty))
        params.append(v)
    assms, concl = kernel.strip_imps(pf)
    return params, [env2.apply(a) for a in assms], env2.apply(concl), len(assms)


def rule_tac(rule: Rule) -> Tactic:
    """Resolve a rule's conclusion against the target; one successor state
    per unifier, premises becoming subgoals that inherit the context."""

    def run(state: ProofState, i: int) -> Iterator[ProofState]:
        goal = state.goals[i]
        fresh, c1 = _freshen_statement(rule.statement, state.counter)
        lift, c2 = _lift_over_params(fresh, goal.params, c1)
        lifted = subst_svars(fresh.concl, lift)
        prems_f, concl_f = kernel.strip_imps(lifted, rule.nprems)
        pset = frozenset(p.name for p in goal.params)
        try:
            unifiers = list(unify_terms(concl_f, goal.target, state.env, pset))
        except errors.NonPatternError:
            return
        for env2 in unifiers:
            holder: list[set[str] | None] = [None]

            def get_avoid():
                if holder[0] is None:
                    holder[0] = _avoid_names(state)
                return holder[0]

            c3 = c2
            new_goals = []
            meta = []
            for pf in prems_f:
                params, assms, concl_p, nassms = _open_premise(pf, env2, get_avoid)
                meta.append((tuple(params), nassms))
                ctx = tuple(env2.apply(c) for c in goal.context) + tuple(assms)
                new_goals.append(Goal(goal.params + tuple(params), ctx, concl_p))
            entry = RuleStep(
                goal_index=i,
                rule_name=rule.name,
                statement=fresh,
                nprems=rule.nprems,
                lift_map=tuple(lift.items()),
                prem_meta=tuple(meta),
                consumed=None,
                target=env2.apply(goal.target),
            )
            yield _successor(state, i, new_goals, env2, entry, c3)

    return Tactic(run, f"rule {rule.name}")


def erule_tac(rule: Rule) -> Tactic:
    """Elimination resolution: additionally unify the rule's first premise
    (taken as written, not structurally opened) with a context assumption,
    which is consumed."""
    if rule.nprems == 0:
        raise errors.RuleError(f"erule {rule.name}: rule has no premises")

    def run(state: ProofState, i: int) -> Iterator[ProofState]:
        goal = state.goals[i]
        fresh, c1 = _freshen_statement(rule.statement, state.counter)
        lift, c2 = _lift_over_params(fresh, goal.params, c1)
        lifted = subst_svars(fresh.concl, lift)
        prems_f, concl_f = kernel.strip_imps(lifted, rule.nprems)
        pset = frozenset(p.name for p in goal.params)
        try:
            outer = list(unify_terms(concl_f, goal.target, state.env, pset))
        except errors.NonPatternError:
            return
        for env1 in outer:
            for k, chi in enumerate(goal.context):
                try:
                    inner = list(unify_terms(prems_f[0], chi, env1, pset))
                except errors.NonPatternError:
                    continue
                for env2 in inner:
                    holder: list[set[str] | None] = [None]

                    def get_avoid():
                        if holder[0] is None:
                            holder[0] = _avoid_names(state)
                        return holder[0]

                    c3 = c2
                    rest_ctx = goal.context[:k] + goal.context[k + 1 :]
                    new_goals = []
                    meta = []
                    for pf in prems_f[1:]:
                        params, assms, concl_p, nassms = _open_premise(pf, env2, get_avoid)
                        meta.append((tuple(params), nassms))
                        ctx = tuple(env2.apply(c) for c in rest_ctx) + tuple(assms)
                        new_goals.append(Goal(goal.params + tuple(params), ctx, concl_p))
                    entry = RuleStep(
                        goal_index=i,
                        rule_name=rule.name,
                        statement=fresh,
                        nprems=rule.nprems,
                        lift_map=tuple(lift.items()),
                        prem_meta=tuple(meta),
                        consumed=env2.apply(chi),
                        target=env2.apply(goal.target),
                    )
                    yield _successor(state, i, new_goals, env2, entry, c3)

    return Tactic(run, f"erule {rule.name}")


def assume_tac() -> Tactic:
    """Close the goal with a context assumption, instantiating placeholders
    shared with the remaining goals."""

    def run(state: ProofState, i: int) -> Iterator[ProofState]:
        goal = state.goals[i]
        pset = frozenset(p.name for p in goal.params)
        for chi in goal.context:
            try:
                envs = list(unify_terms(chi, goal.target, state.env, pset))
            except errors.NonPatternError:
                continue
            for env2 in envs:
                entry = AssumeStep(i, env2.apply(chi), env2.apply(goal.target))
                yield _successor(state, i, [], env2, entry, state.counter)

    return Tactic(run, "assumption")


# ----------------------------------------------------------------- tacticals


def id_tac() -> Tactic:
    return Tactic(lambda state, i: iter((state,)), "id")


def fail_tac() -> Tactic:
    return Tactic(lambda state, i: iter(()), "fail")


def _apply_range(state: ProofState, t: Tactic, i: int, m: int) -> Iterator[ProofState]:
    """Apply t to goals i .. i+m-1, processing from the right so earlier
    positions stay stable.  A tactic may close goals beyond its own slot
    (all_goals does); the range is clamped rather than failed."""
    m = min(m, len(state.goals) - i)
    if m <= 0:
        yield state
        return
    for s in t(state, i + m - 1):
        yield from _apply_range(s, t, i, m - 1)


def then_tac(t1: Tactic, t2: Tactic) -> Tactic:
    """Apply t1, then t2 to every subgoal t1 produced."""

    def run(state: ProofState, i: int) -> Iterator[ProofState]:
        for s1 in t1(state, i):
            m = len(s1.goals) - len(state.goals) + 1
            yield from _apply_range(s1, t2, i, m)

    return Tactic(run, f"({t1.name}, {t2.name})")


def orelse_tac(t1: Tactic, t2: Tactic) -> Tactic:
    """All successors of t1, or those of t2 when t1 has none."""

    def run(state: ProofState, i: int) -> Iterator[ProofState]:
        it = t1(state, i)
        first = next(it, None)
        if first is None:
            yield from t2(state, i)
            return
        yield first
        yield from it

    return Tactic(run, f"({t1.name} | {t2.name})")


def try_tac(t: Tactic) -> Tactic:
    out = orelse_tac(t, id_tac())
    out.name = f"try({t.name})"
    return out


def first_tac(ts) -> Tactic:
    ts = list(ts)
    if not ts:
        return fail_tac()
    out = ts[0]
    for t in ts[1:]:
        out = orelse_tac(out, t)
    out.name = f"first({', '.join(t.name for t in ts)})"
    return out


def repeat_tac(t: Tactic, max_iterations: int = 1000) -> Tactic:
    """Apply t until it fails, recursing into the subgoals it creates.
    Exceeding the iteration cap raises TacticLoopError."""

    def rep(state: ProofState, i: int, budget: list[int]) -> Iterator[ProofState]:
        if budget[0] <= 0:
            raise errors.TacticLoopError(f"repeat({t.name}) exceeded {max_iterations} iterations")
        budget[0] -= 1
        it = t(state, i)
        first = next(it, None)
        if first is None:
            yield state
            return
        for s1 in itertools.chain((first,), it):
            m = len(s1.goals) - len(state.goals) + 1
            yield from rep_range(s1, i, m, budget)

    def rep_range(state: ProofState, i: int, m: int, budget: list[int]) -> Iterator[ProofState]:
        m = min(m, len(state.goals) - i)
        if m <= 0:
            yield state
            return
        for s in rep(state, i + m - 1, budget):
            yield from rep_range(s, i, m - 1, budget)

    return Tactic(lambda state, i: rep(state, i, [max_iterations]), f"repeat({t.name})")


def all_goals_tac(t: Tactic) -> Tactic:
    """Apply t to every goal; fails unless t succeeds on each."""

    def run(state: ProofState, i: int) -> Iterator[ProofState]:
        yield from _apply_range(state, t, 0, len(state.goals))

    return Tactic(run, f"all_goals({t.name})")


# -------------------------------------------------------------------- replay


class _Node:
    __slots__ = ("entry", "children")

    def __init__(self):
        self.entry: LogEntry | None = None
        self.children: list[_Node] = []


def _build_tree(state: ProofState) -> _Node:
    root = _Node()
    open_nodes: list[_Node] = [root]
    for e in state.log:
        node = open_nodes[e.goal_index]
        node.entry = e
        node.children = [_Node() for _ in range(e.subgoals)]
        open_nodes[e.goal_index : e.goal_index + 1] = node.children
    if open_nodes:
        raise errors.InternalSoundnessError("derivation log leaves goals open")
    return root


def _replay_rule(entry: RuleStep, children: list[Theorem], env: SubstEnv, thy: Theory) -> Theorem:
    types = {tv: env.types[tv] for tv in term_type_vars(entry.statement.concl) if tv in env.types}
    tms = {key: env.apply(val) for key, val in entry.lift_map}
    istmt = kernel.inst(entry.statement, types=types, tms=tms, thy=thy)
    prems, _ = kernel.strip_imps(istmt.concl, entry.nprems)
    cur = istmt
    idx = 0
    if entry.consumed is not None:
        major = kernel.assume(thy, env.apply(entry.consumed))
        cur = kernel.imp_elim(cur, major)
        idx = 1
    for (params, nassms), child in zip(entry.prem_meta, children):
        pf = prems[idx]
        idx += 1
        pvs = [Var(p.name, env.apply_type(p.ty)) for p in params]
        for p in pvs:
            b = kernel.dest_all(pf)
            if b is None:
                raise errors.InternalSoundnessError("premise lost its binder structure")
            pf = inst_bound(b.body, p)
        assms, _ = kernel.strip_imps(pf, nassms)
        d = child
        for a in reversed(assms):
            d = kernel.imp_intro(d, a)
        for p in reversed(pvs):
            d = kernel.all_intro(d, p)
        cur = kernel.imp_elim(cur, d)
    return cur


def _replay_rewrite(entry: RewriteStep, child: Theorem, env: SubstEnv, thy: Theory) -> Theorem:
    types = {tv: env.apply_type(v) for tv, v in entry.type_bindings}
    tms = {key: env.apply(val) for key, val in entry.bindings}
    eq = kernel.inst(entry.statement, types=types, tms=tms, thy=thy)
    template = env.apply(entry.template)
    return kernel.subst_eq(base.eq_sym(eq), template, child)


def _replay_node(node: _Node, env: SubstEnv, thy: Theory) -> Theorem:
    e = node.entry
    try:
        if isinstance(e, AssumeStep):
            thm = kernel.assume(thy, env.apply(e.assumption))
            if thm.concl != env.apply(e.target):
                raise errors.InternalSoundnessError("closed goal does not match its assumption")
            return thm
        if isinstance(e, RuleStep):
            children = [_replay_node(c, env, thy) for c in node.children]
            return _replay_rule(e, children, env, thy)
        if isinstance(e, RewriteStep):
            child = _replay_node(node.children[0], env, thy)
            return _replay_rewrite(e, child, env, thy)
        if isinstance(e, MacroStep):
            fn = _macro_replayers.get(e.kind)
            if fn is None:
                raise errors.InternalSoundnessError(f"no replayer registered for {e.kind!r}")
            return fn(thy, env.apply(e.target))
    except errors.InternalSoundnessError:
        raise
    except errors.LcfError as exc:
        raise errors.InternalSoundnessError(f"kernel replay failed: {exc}") from exc
    raise errors.InternalSoundnessError("empty derivation log node")


def replay(state: ProofState) -> Theorem:
    return _replay_node(_build_tree(state), state.env, state.thy)


def qed(state: ProofState) -> Theorem:
    """Replay the derivation log through the kernel and hand out the theorem."""
    if state.goals:
        raise errors.ProofIncompleteError(f"proof incomplete: {len(state.goals)} goals remain")
    thm = replay(state)
    want = state.env.apply(state.original)
    if thm.concl != want:
        raise errors.InternalSoundnessError("replayed theorem does not match the original goal")
    if thm.hyps:
        raise errors.InternalSoundnessError("replayed theorem has undischarged hypotheses")
    return thm
