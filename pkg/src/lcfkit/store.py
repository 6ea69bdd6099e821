"""Theory graph management: loading .lthy files, resolving imports,
executing proof scripts, naming theorems, reporting.

Proofs re-run on every load; there is no binary theorem cache, so the
kernel remains the only trust root.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass

from . import automation, base, errors, kernel, proof, syntax
from .kernel import Theorem, Theory

DEFAULT_SUFFIX = ".lthy"
SEARCH_PATH_VAR = "LCFKIT_PATH"


def builtin_theory_dir() -> str:
    return os.path.join(os.path.dirname(__file__), "theories")


class TheoryStore:
    """Loads theories by name or path, memoizing results and refusing
    import cycles."""

    def __init__(self, search_paths: list[str] | None = None):
        env = os.environ.get(SEARCH_PATH_VAR, "")
        self.search_paths = list(search_paths or [])
        self.search_paths += [p for p in env.split(":") if p]
        self.search_paths += [os.getcwd(), builtin_theory_dir()]
        self.registry: dict[str, Theory] = {
            "Core": base.core_theory(),
            "Base": base.base_theory(),
        }
        self._loading: list[str] = []

    # ------------------------------------------------------------ loading

    def find_file(self, name: str) -> str:
        if name.endswith(DEFAULT_SUFFIX) and os.path.exists(name):
            return name
        for d in self.search_paths:
            cand = os.path.join(d, name + DEFAULT_SUFFIX)
            if os.path.exists(cand):
                return cand
        raise errors.NotFoundError(f"no theory file for {name!r} on the search path")

    def load(self, name_or_path: str) -> Theory:
        name = os.path.basename(name_or_path)
        if name.endswith(DEFAULT_SUFFIX):
            name = name[: -len(DEFAULT_SUFFIX)]
        if name in self.registry:
            return self.registry[name]
        if name in self._loading:
            cycle = " -> ".join(self._loading + [name])
            raise errors.CycleError(f"theory import cycle: {cycle}")
        path = name_or_path if os.path.exists(name_or_path) and name_or_path.endswith(DEFAULT_SUFFIX) else self.find_file(name)
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        tf = syntax.parse_theory(text)
        if tf.name != name:
            raise errors.ParseError(f"file {path} declares theory {tf.name!r}, expected {name!r}")
        self._loading.append(name)
        try:
            parents = [self.load(imp) for imp in tf.imports]
            thy = execute_theory(tf, parents)
        finally:
            self._loading.pop()
        self.registry[name] = thy
        return thy


def execute_theory(tf: syntax.TheoryFile, parents: list[Theory]) -> Theory:
    """Run a parsed theory file's declarations in order; every theorem's
    script must end fully proved."""
    thy = kernel.new_theory(tf.name, tuple(parents) or (base.base_theory(),))
    for decl in tf.decls:
        thy = _run_decl(thy, decl)
    return thy


def _run_decl(thy: Theory, decl) -> Theory:
    if isinstance(decl, syntax.DType):
        return thy.declare_type(decl.name, decl.arity)
    if isinstance(decl, syntax.DConst):
        return thy.declare_const(decl.name, decl.ty)
    if isinstance(decl, syntax.DDefinition):
        rhs = syntax.parse_term(thy, decl.body)
        thy, _ax = kernel.define_const(thy, decl.name, rhs)
        # definitional equations drive the default simpset
        return thy.with_rule_registration(simp=(decl.name + "_def",))
    if isinstance(decl, syntax.DAxiom):
        phi = syntax.parse_formula(thy, decl.body)
        thy, ax = kernel.new_axiom(thy, decl.name, phi)
        if _is_equational(ax):
            thy = thy.with_rule_registration(simp=(decl.name,))
        return thy
    if isinstance(decl, syntax.DTheorem):
        phi = syntax.parse_formula(thy, decl.body)
        state = proof.init_proof(thy, phi)
        for texpr in decl.tactics:
            tac = automation.compile_tactic(thy, texpr)
            nxt = next(tac(state, 0), None)
            if nxt is None:
                raise errors.ProofError(
                    f"theorem {decl.name} (line {decl.line}): tactic failed\n"
                    + _render_goals(thy, state)
                )
            state = nxt
        if state.goals:
            raise errors.ProofError(
                f"theorem {decl.name} (line {decl.line}): proof incomplete\n" + _render_goals(thy, state)
            )
        thm = proof.qed(state)
        return kernel.store_theorem(thy, decl.name, thm)
    raise errors.ParseError(f"unknown declaration {decl!r}")


def _is_equational(thm: Theorem) -> bool:
    from .terms import Const, strip_app

    concl = thm.concl
    while (b := kernel.dest_all(concl)) is not None:
        concl = b.body
    h, args = strip_app(concl)
    return isinstance(h, Const) and h.name in ("Eq", "Iff") and len(args) == 2


def _render_goals(thy: Theory, state: proof.ProofState) -> str:
    lines = []
    for i, g in enumerate(state.goals, start=1):
        lines.append(f"  {i}. " + render_goal(thy, g))
    return "\n".join(lines) if lines else "  (no goals)"


def render_goal(thy: Theory, g: proof.Goal, mode: str = "unicode") -> str:
    parts = []
    if g.params:
        parts.append("!!" + " ".join(p.name for p in g.params) + ".")
    if g.context:
        shown = "; ".join(syntax.print_formula(thy, c, mode) for c in g.context)
        parts.append(f"[| {shown} |] ==>" if mode == "ascii" else f"⟦{shown}⟧ ⟹")
    parts.append(syntax.print_formula(thy, g.target, mode))
    return " ".join(parts)


# ----------------------------------------------------------------- lookups


def lookup_theorem(thy: Theory, name: str) -> Theorem:
    """Search the theory then its parents depth-first; nearest wins, with a
    warning when an ancestor's theorem is shadowed."""
    thm, count = thy.lookup_theorem_entry(name)
    if thm is None:
        raise errors.NotFoundError(f"no theorem named {name}")
    if count > 1:
        warnings.warn(f"theorem name {name} is shadowed; nearest definition wins", stacklevel=2)
    return thm


def list_theorems(thy: Theory) -> list[str]:
    return sorted(thy.all_named_theorems())


@dataclass(frozen=True)
class TheoryReport:
    name: str
    axioms: tuple[str, ...]
    definitions: tuple[str, ...]
    theorems: tuple[str, ...]

    def render(self) -> str:
        lines = [
            f"theory {self.name}",
            f"  axioms:      {len(self.axioms)}" + (f"  ({', '.join(self.axioms)})" if self.axioms else ""),
            f"  definitions: {len(self.definitions)}",
            f"  theorems:    {len(self.theorems)}",
        ]
        return "\n".join(lines)


def report(thy: Theory, include_parents: bool = False) -> TheoryReport:
    """Counts of axioms vs definitions vs proved theorems; axioms are
    listed by name since they are the trust surface."""
    if include_parents:
        ax: list[str] = []
        df: list[str] = []
        th: list[str] = []
        seen = set()
        for t in thy.ancestors():
            for n in t.axioms:
                if n not in seen:
                    seen.add(n)
                    ax.append(n)
            for n in t.definitions:
                if n not in seen:
                    seen.add(n)
                    df.append(n)
            for n in t.theorems:
                if n not in seen:
                    seen.add(n)
                    th.append(n)
        return TheoryReport(thy.name, tuple(ax), tuple(df), tuple(th))
    ax = []
    df = []
    th = []
    for t in thy.ancestors():
        if t.name != thy.name:
            continue
        ax.extend(t.axioms)
        df.extend(t.definitions)
        th.extend(t.theorems)
    return TheoryReport(thy.name, tuple(ax), tuple(df), tuple(th))
