"""Acceptance suite: one test per top-level requirement, each printed as a
pass/fail line with its runtime (run with -s to watch them live).

All expected values come either from independent oracles implemented in
oracles.py (truth tables, Robinson unification, G4ip, a direct model
evaluator) or from golden files stored under tests/golden/.
"""

import itertools
import json
import io
import os
import random
import subprocess
import sys
import time

import pytest

from lcfkit import automation, base, errors, kernel, proof, session, store, syntax
from lcfkit.automation import blast_tac, find_counterexample, taut_tac
from lcfkit.kernel import mk_conj, mk_disj, mk_eq, mk_imp, mk_not, new_theory
from lcfkit.proof import assume_tac, erule_tac, get_rule, init_proof, qed, rule_tac
from lcfkit.terms import BOOL, IND, App, Const, Var, apps, fun_ty

from conftest import random_prop
from oracles import (
    eval_in_model,
    g4ip_provable,
    robinson_apply,
    robinson_unify,
    term_to_g4ip,
    truth_table_valid,
    truth_vector,
)
from test_syntax import random_typed_term
from test_unify import FN_TYPES, canonical, random_fo_pair, to_term

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")


def report(name: str, started: float, detail: str = ""):
    dt = time.monotonic() - started
    line = f"[PASS] {name} ({dt:.1f}s)" + (f" — {detail}" if detail else "")
    print("\n" + line, flush=True)


# ---------------------------------------------------------------------------
# Soundness fuzz: 1e5 random tactic scripts never produce a qed theorem
# whose statement differs from the initial goal; all qeds replay.  < 2 min.
# ---------------------------------------------------------------------------


def test_soundness_fuzz_100k():
    t0 = time.monotonic()
    thy = base.base_theory()
    rules = [get_rule(thy, n) for n in ("conjI", "disjI1", "disjI2", "impI", "iffI", "notI")]
    elims = [get_rule(thy, n) for n in ("conjE", "disjE", "iffE", "notE")]
    rng = random.Random(20250810)
    proved = 0
    for i in range(100_000):
        if rng.random() < 0.4:
            a = random_prop(rng, rng.randint(1, 3))
            b = random_prop(rng, rng.randint(1, 3))
            shape = rng.randrange(4)
            if shape == 0:
                phi = mk_imp(a, a)
            elif shape == 1:
                phi = mk_imp(a, mk_imp(b, a))
            elif shape == 2:
                phi = mk_imp(mk_conj(a, b), mk_conj(b, a))
            else:
                phi = mk_imp(mk_disj(a, a), a)
        else:
            phi = random_prop(rng, rng.randint(1, 7))
        st = init_proof(thy, phi)
        for _ in range(6):
            if not st.goals:
                break
            j = rng.randrange(len(st.goals))
            nxt = next(assume_tac()(st, j), None)
            if nxt is None:
                if rng.random() < 0.6:
                    nxt = next(rule_tac(rng.choice(rules))(st, j), None)
                else:
                    nxt = next(erule_tac(rng.choice(elims))(st, j), None)
            if nxt is not None:
                st = nxt
        if not st.goals:
            thm = qed(st)  # kernel replay; raises on any soundness bug
            assert thm.concl == phi, "qed produced a different statement"
            assert not thm.hyps
            proved += 1
    elapsed = time.monotonic() - t0
    assert proved > 1000, "fuzz should complete a meaningful number of proofs"
    assert elapsed < 120, f"soundness fuzz took {elapsed:.1f}s (budget 120s)"
    report("soundness fuzz (1e5 scripts)", t0, f"{proved} proofs replayed")


# ---------------------------------------------------------------------------
# Propositional completeness/correctness: over ALL formulas with <= 3 atoms
# and size <= 9, taut_tac succeeds iff the truth-table oracle says valid.
# < 1 min.
# ---------------------------------------------------------------------------


def enumerate_formulas(max_size: int):
    """All formulas over atoms p,q,r and {&,|,-->,~} up to the node count,
    sharing subterms.  Paired with oracle truth vectors (8 valuations)."""
    atoms = [Var(n, BOOL) for n in "pqr"]
    cols = {}
    for idx, a in enumerate(atoms):
        col = 0
        for v in range(8):
            if (v >> idx) & 1:
                col |= 1 << v
        cols[a] = col
    full = 0xFF
    by_size = {1: [(a, cols[a]) for a in atoms]}
    for n in range(2, max_size + 1):
        out = []
        for sub, vec in by_size[n - 1]:
            out.append((mk_not(sub), full ^ vec))
        for i in range(1, n - 1):
            for a, va in by_size[i]:
                for b, vb in by_size[n - 1 - i]:
                    out.append((mk_conj(a, b), va & vb))
                    out.append((mk_disj(a, b), va | vb))
                    out.append((mk_imp(a, b), (full ^ va) | vb))
        by_size[n] = out
    for n in range(1, max_size + 1):
        yield from by_size[n]


def test_propositional_completeness_exhaustive():
    t0 = time.monotonic()
    thy = base.base_theory()
    # the vectorized oracle must agree with the plain-recursion oracle
    rng = random.Random(5)
    atoms = [Var(n, BOOL) for n in "pqr"]
    cols = {a: c for a, c in zip(atoms, [0xAA, 0xCC, 0xF0])}
    for _ in range(2000):
        f = random_prop(rng, rng.randint(1, 9))
        assert (truth_vector(f, cols, 0xFF) == 0xFF) == truth_table_valid(f)

    taut = taut_tac()
    proto = init_proof(thy, Var("p", BOOL))
    count = 0
    valid_count = 0
    import dataclasses

    for formula, vec in enumerate_formulas(9):
        count += 1
        oracle_valid = vec == 0xFF
        st = dataclasses.replace(proto, original=formula, goals=(proof.Goal((), (), formula),))
        got = next(taut(st, 0), None)
        assert (got is not None) == oracle_valid, f"disagreement on {formula!r}"
        if oracle_valid:
            valid_count += 1
    elapsed = time.monotonic() - t0
    assert count == 732_753
    assert elapsed < 60, f"taut agreement took {elapsed:.1f}s (budget 60s)"
    report("propositional completeness (732753 formulas)", t0, f"{valid_count} tautologies")


def test_propositional_sample_replays():
    # full kernel replay spot-check over the same space
    t0 = time.monotonic()
    thy = base.base_theory()
    rng = random.Random(11)
    pool = [f for f, vec in enumerate_formulas(7) if vec == 0xFF]
    for f in rng.sample(pool, 300):
        st = init_proof(thy, f)
        got = next(taut_tac()(st, 0))
        thm = proof.qed(got)
        assert thm.concl == f and not thm.hyps
    report("tautology proofs replay through the kernel", t0, "300 sampled")


# ---------------------------------------------------------------------------
# Intuitionistic/classical split.
# ---------------------------------------------------------------------------


def test_intuitionistic_classical_split():
    t0 = time.monotonic()
    classical = base.base_theory()
    intuit = new_theory("Intuit", [base.core_theory()], classical=False)
    p = Var("p", BOOL)
    q = Var("q", BOOL)
    em = mk_disj(p, mk_not(p))
    peirce = mk_imp(mk_imp(mk_imp(p, q), p), p)

    # classical: both provable by taut and by blast
    for phi in (em, peirce):
        st = init_proof(classical, phi)
        assert proof.qed(next(taut_tac()(st, 0))).concl == phi
        st = init_proof(classical, phi)
        assert proof.qed(next(blast_tac(8)(st, 0))).concl == phi

    # intuitionistic: the kernel rule itself refuses
    with pytest.raises(errors.ClassicalRuleError):
        kernel.excluded_middle(intuit, p)

    # blast at depth 10 fails on both
    for phi in (em, peirce):
        st = init_proof(intuit, phi)
        assert next(blast_tac(10)(st, 0), None) is None
        # the independent intuitionistic decision procedure confirms
        assert not g4ip_provable(term_to_g4ip(phi))
    report("intuitionistic/classical split", t0)


# ---------------------------------------------------------------------------
# 1+1=2: the shipped Nat theory loads, proving add one one = two by simp;
# the batch checker exits 0 in under a second.
# ---------------------------------------------------------------------------


def test_nat_one_plus_one():
    t0 = time.monotonic()
    st = store.TheoryStore()
    nat = st.load("Nat")
    thm = store.lookup_theorem(nat, "one_plus_one")
    assert syntax.print_term(nat, thm.concl) == "add one one = two"
    assert thm.hyps == frozenset()

    nat_file = os.path.join(store.builtin_theory_dir(), "Nat.lthy")
    t1 = time.monotonic()
    result = subprocess.run(
        [sys.executable, "-m", "lcfkit.cli", "check", nat_file],
        capture_output=True,
        text=True,
    )
    wall = time.monotonic() - t1
    assert result.returncode == 0, result.stderr
    assert "axioms:      2" in result.stdout
    assert wall < 1.0, f"lcfkit check took {wall:.2f}s (budget 1s)"
    report("Nat.lthy proves add one one = two", t0, f"check ran in {wall:.2f}s")


# ---------------------------------------------------------------------------
# Placeholder scenario (golden file): proving EX x. phi x & psi x where
# phi (f one) and psi (f one) are assumable; after exI + conjI and closing
# the phi goal, the remaining subgoal renders exactly as psi (f one).
# ---------------------------------------------------------------------------

SCENARIO_THEORY = """theory Scenario imports Base
const phi :: ind => bool
const psi :: ind => bool
const f :: ind => ind
const one :: ind
"""

SCENARIO_SCRIPT = [
    "rule impI",
    "rule impI",
    "rule exI",
    "rule conjI",
    "assumption",
    "assumption",
]


def run_placeholder_scenario(tmp_path):
    with open(tmp_path / "Scenario.lthy", "w") as fh:
        fh.write(SCENARIO_THEORY)
    s = session.new_session([str(tmp_path)])
    session.cmd_load(s, "Scenario")
    transcript = []
    out = session.cmd_goal(s, "phi (f one) --> psi (f one) --> (EX x. phi x & psi x)")
    transcript.append({"step": "goal", "state": out})
    for tac in SCENARIO_SCRIPT:
        out = session.cmd_apply(s, tac)
        transcript.append({"step": f"apply {tac}", "state": out})
    done = session.cmd_qed(s, "witness_example")
    transcript.append({"step": "qed", "result": done})
    return transcript


def test_placeholder_scenario_golden(tmp_path):
    t0 = time.monotonic()
    transcript = run_placeholder_scenario(tmp_path)
    # the two subgoals after exI + conjI share one placeholder...
    after_split = transcript[4]["state"]
    assert [g["target"] for g in after_split["goals"]] == ["phi ?w.7", "psi ?w.7"]
    # ...and closing the phi side instantiates it in the remaining subgoal,
    # which renders exactly as the psi instance
    after_close = transcript[5]["state"]
    assert [g["target"] for g in after_close["goals"]] == ["psi (f one)"]
    assert after_close["placeholders"] == {"?w.7": "f one"}
    got = json.dumps(transcript, indent=1, ensure_ascii=False, sort_keys=True)
    golden_path = os.path.join(GOLDEN_DIR, "placeholder_scenario.json")
    with open(golden_path, encoding="utf-8") as fh:
        want = fh.read()
    assert got == want, "scenario transcript deviates from the golden file"
    report("placeholder scenario golden file", t0)


# ---------------------------------------------------------------------------
# Counterexample/prover complementarity over 500 random first-order
# formulas: blast (depth 8) and find_counterexample never both succeed;
# countermodels re-evaluate to false under the independent evaluator.
# ---------------------------------------------------------------------------


def random_fo_formula(rng: random.Random, thy):
    P = Const("P", fun_ty(IND, BOOL))
    Q = Const("Q", fun_ty(IND, BOOL))
    f = Const("f", fun_ty(IND, IND))
    c = Const("c", IND)

    def term(depth, scope):
        if depth <= 0 or (scope and rng.random() < 0.5):
            if scope and rng.random() < 0.8:
                return rng.choice(scope)
            return c
        return App(f, term(depth - 1, scope))

    def formula(depth, scope):
        r = rng.random()
        if depth <= 0 or r < 0.35:
            kind = rng.randrange(3)
            if kind == 0:
                return App(P, term(1, scope))
            if kind == 1:
                return App(Q, term(1, scope))
            return mk_eq(term(1, scope), term(1, scope))
        if r < 0.55:
            x = Var(f"x{depth}", IND)
            body = formula(depth - 1, scope + [x])
            return kernel.mk_all(x, body) if rng.random() < 0.5 else kernel.mk_ex(x, body)
        a = formula(depth - 1, scope)
        b = formula(depth - 1, scope)
        kind = rng.randrange(4)
        if kind == 0:
            return mk_conj(a, b)
        if kind == 1:
            return mk_disj(a, b)
        if kind == 2:
            return mk_imp(a, b)
        return mk_not(a)

    return formula(rng.randint(1, 3), [])


def test_counterexample_prover_complementarity():
    t0 = time.monotonic()
    thy = new_theory("FO", [base.base_theory()])
    thy = thy.declare_const("P", fun_ty(IND, BOOL))
    thy = thy.declare_const("Q", fun_ty(IND, BOOL))
    thy = thy.declare_const("f", fun_ty(IND, IND))
    thy = thy.declare_const("c", IND)
    rng = random.Random(424242)
    both = 0
    proved = 0
    refuted = 0
    for i in range(500):
        phi = random_fo_formula(rng, thy)
        model = find_counterexample(thy, phi, 3)
        st = init_proof(thy, phi)
        won = next(blast_tac(8, node_cap=4000)(st, 0), None)
        if won is not None:
            thm = proof.qed(won)
            assert thm.concl == won.env.apply(phi)
            proved += 1
        if model is not None:
            refuted += 1
            tables = dict(model.tables)
            for k, v in model.valuation.items():
                tables[k] = v if isinstance(v, dict) else {(): v}
            n = model.sizes.get("ind", 1)
            assert eval_in_model(phi, tables, n) is False, "countermodel does not refute"
        if won is not None and model is not None:
            both += 1
    assert both == 0, f"{both} formulas were both proved and refuted"
    assert proved > 20 and refuted > 100, f"degenerate sample: {proved} proved, {refuted} refuted"
    report("counterexample/prover complementarity (500 formulas)", t0, f"{proved} proved, {refuted} refuted")


# ---------------------------------------------------------------------------
# Parser round trip: 1e4 random well-typed terms, unicode and ascii modes,
# parse(print(t)) alpha-equal to t.  < 30 s.
# ---------------------------------------------------------------------------


def test_parser_roundtrip_10k():
    t0 = time.monotonic()
    thy = base.base_theory()
    rng = random.Random(987)
    for i in range(10_000):
        t = random_typed_term(rng, thy, depth=rng.randint(1, 7))
        for mode in ("unicode", "ascii"):
            s = syntax.print_term(thy, t, mode)
            back = syntax.parse_term(thy, s)
            assert back == t, f"{s!r} parsed back differently"
    elapsed = time.monotonic() - t0
    assert elapsed < 30, f"round trip took {elapsed:.1f}s (budget 30s)"
    report("parser round trip (1e4 terms, both modes)", t0)


# ---------------------------------------------------------------------------
# Unification agrees with an independent Robinson implementation on 1e4
# random first-order pairs: same success/failure, mgu equal up to renaming.
# ---------------------------------------------------------------------------


def test_unification_oracle_10k():
    t0 = time.monotonic()
    rng = random.Random(31337)
    solved = 0
    for i in range(10_000):
        ra, rb = random_fo_pair(rng)
        ta, tb = to_term(ra), to_term(rb)
        oracle = robinson_unify(ra, rb)
        mine = next(unify_iter(ta, tb), None)
        if oracle is None:
            assert mine is None, (ra, rb)
        else:
            assert mine is not None, (ra, rb)
            want = to_term(robinson_apply(oracle, ra))
            got = mine.apply(ta)
            assert got == mine.apply(tb)
            assert canonical(got, {}) == canonical(want, {}), (ra, rb)
            solved += 1
    report("unification vs Robinson oracle (1e4 pairs)", t0, f"{solved} unifiable")


def unify_iter(a, b):
    from lcfkit.unify import unify_terms

    return unify_terms(a, b)


# ---------------------------------------------------------------------------
# Protocol golden files: a scripted JSON session byte-matches the stored
# responses modulo the id field.
# ---------------------------------------------------------------------------

PROTOCOL_SCRIPT = [
    {"id": 101, "cmd": "goal", "args": {"formula": "p --> q --> p & q"}},
    {"id": 102, "cmd": "apply", "args": {"tactic": "rule impI", "goal": 1}},
    {"id": 103, "cmd": "apply", "args": {"tactic": "rule impI", "goal": 1}},
    {"id": 104, "cmd": "apply", "args": {"tactic": "rule conjI, assumption", "goal": 1}},
    {"id": 105, "cmd": "qed", "args": {"name": "pair_intro"}},
]


def run_protocol_script():
    fin = io.StringIO("\n".join(json.dumps(r) for r in PROTOCOL_SCRIPT) + "\n")
    fout = io.StringIO()
    session.serve_streams(fin, fout)
    return fout.getvalue()


def strip_ids(payload: str) -> str:
    out = []
    for line in payload.splitlines():
        obj = json.loads(line)
        obj.pop("id", None)
        out.append(json.dumps(obj, ensure_ascii=False, sort_keys=True))
    return "\n".join(out) + "\n"


def test_protocol_golden():
    t0 = time.monotonic()
    got = run_protocol_script()
    with open(os.path.join(GOLDEN_DIR, "protocol_session.jsonl"), encoding="utf-8") as fh:
        want = fh.read()
    assert strip_ids(got) == strip_ids(want), "protocol responses deviate from golden file"
    # and every request got exactly one response, ids preserved in order
    ids = [json.loads(l)["id"] for l in got.splitlines()]
    assert ids == [r["id"] for r in PROTOCOL_SCRIPT]
    report("protocol golden files", t0)
