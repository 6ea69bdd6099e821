"""Interactive surface: a REPL for humans and a line-delimited JSON server
for programmatic clients.

Both fronts drive the same :class:`Session`, so scripted command sequences
produce identical theorems either way.  The server answers every request
line with exactly one response line carrying the same id; it never dies on
bad input.  Long-running commands execute on a worker thread so that a
``cancel`` request (referencing the request id) can interrupt them.
"""

from __future__ import annotations

import json
import queue
import socket
import sys
import threading
from dataclasses import dataclass, field

from . import automation, errors, kernel, proof, store, syntax
from .kernel import Theory
from .proof import ProofState

HELP = """commands:
  load <name>        load a theory and make it current
  goal "<formula>"   start a backward proof
  apply <tactic>     apply a tactic expression to the first goal
  goals              show the open subgoals
  undo               drop the last proof step
  qed [name]         finish the proof, optionally storing the theorem
  thm <name>         show a stored theorem
  cex <max_size>     search for a finite countermodel of the current goal
  help               this text
  quit               leave
"""


@dataclass
class SessionState:
    """One interactive proof session."""

    store: store.TheoryStore
    thy: Theory
    proof: ProofState | None = None
    states: dict[int, ProofState] = field(default_factory=dict)
    history: list[dict] = field(default_factory=list)
    current_id: int | None = None
    next_id: int = 1
    ascii_mode: bool = False


def new_session(search_paths: list[str] | None = None, ascii_mode: bool = False) -> SessionState:
    st = store.TheoryStore(search_paths)
    return SessionState(store=st, thy=st.registry["Base"], ascii_mode=ascii_mode)


def _mode(s: SessionState) -> str:
    return "ascii" if s.ascii_mode else "unicode"


def _record_state(s: SessionState, ps: ProofState, label: str) -> int:
    sid = s.next_id
    s.next_id += 1
    s.states[sid] = ps
    s.history.append({"id": sid, "parent": s.current_id, "label": label})
    s.current_id = sid
    s.proof = ps
    return sid


def render_state(s: SessionState) -> dict:
    """The protocol's `state` payload: goals plus placeholder assignments."""
    ps = s.proof
    if ps is None:
        return {"goals": [], "placeholders": {}}
    mode = _mode(s)
    goals = []
    for i, g in enumerate(ps.goals, start=1):
        goals.append(
            {
                "index": i,
                "params": [p.name for p in g.params],
                "assumptions": [syntax.print_formula(ps.thy, c, mode) for c in g.context],
                "target": syntax.print_formula(ps.thy, g.target, mode),
            }
        )
    placeholders = {}
    for sv in sorted(ps.tracked, key=lambda v: (v.name, v.index)):
        bound = ps.env.terms.get((sv.name, sv.index))
        if bound is not None:
            key = f"?{sv.name}" if sv.index == 0 else f"?{sv.name}.{sv.index}"
            placeholders[key] = syntax.print_term(ps.thy, bound, mode)
    return {"goals": goals, "placeholders": placeholders}


# ------------------------------------------------------------------ commands


def cmd_load(s: SessionState, name: str) -> dict:
    thy = s.store.load(name)
    s.thy = thy
    rep = store.report(thy)
    return {"theory": thy.name, "axioms": list(rep.axioms), "theorems": list(rep.theorems)}


def cmd_goal(s: SessionState, formula: str) -> dict:
    phi = syntax.parse_formula(s.thy, formula)
    ps = proof.init_proof(s.thy, phi)
    s.states.clear()
    s.history.clear()
    s.current_id = None
    _record_state(s, ps, "goal")
    return render_state(s)


def _require_proof(s: SessionState) -> ProofState:
    if s.proof is None:
        raise errors.ProofError("no proof in progress; use goal first")
    return s.proof


def cmd_apply(s: SessionState, tactic: str, goal: int = 1, alt: int = 0, cancel=None) -> dict:
    ps = _require_proof(s)
    if not (1 <= goal <= len(ps.goals)):
        raise errors.ProofError(f"no goal {goal}; {len(ps.goals)} open")
    expr = syntax.parse_tactic(tactic)
    tac = automation.compile_tactic(ps.thy, expr, cancel)
    it = tac(ps, goal - 1)
    nxt = None
    for _ in range(alt + 1):
        nxt = next(it, None)
        if nxt is None:
            break
    if nxt is None:
        hint = _failure_hint(ps, goal - 1, expr)
        raise errors.ProofError(f"tactic failed: {tactic}" + (f" ({hint})" if hint else ""))
    _record_state(s, nxt, tactic)
    return render_state(s)


def _failure_hint(ps: ProofState, i: int, expr) -> str:
    if isinstance(expr, syntax.TTaut):
        cm = automation.taut_countermodel(ps.goals[i].target)
        if cm is not None:
            shown = ", ".join(
                f"{syntax.print_formula(ps.thy, atom)} := {str(v).lower()}" for atom, v in cm.items()
            )
            return f"not a tautology; falsified by {shown}"
    return ""


def cmd_undo(s: SessionState) -> dict:
    ps = _require_proof(s)
    prev = proof.undo(ps)
    _record_state(s, prev, "undo")
    return render_state(s)


def cmd_qed(s: SessionState, name: str | None = None) -> dict:
    ps = _require_proof(s)
    if ps.goals:
        raise errors.ProofIncompleteError(f"proof incomplete: {len(ps.goals)} goals remain")
    thm = proof.qed(ps)
    shown = syntax.print_formula(ps.thy, thm.concl, _mode(s))
    if name:
        s.thy = kernel.store_theorem(s.thy, name, thm)
    s.proof = None
    s.current_id = None
    return {"name": name, "theorem": shown}


def cmd_thm(s: SessionState, name: str) -> dict:
    thm = store.lookup_theorem(s.thy, name)
    return {"name": name, "theorem": syntax.print_formula(s.thy, thm.concl, _mode(s))}


def cmd_cex(s: SessionState, max_size: int, cancel=None) -> dict:
    ps = _require_proof(s)
    goal = ps.goals[0]
    phi = goal.target
    for c in reversed(goal.context):
        phi = kernel.mk_imp(c, phi)
    model = automation.find_counterexample(ps.thy, phi, max_size, cancel=cancel)
    if model is None:
        return {"countermodel": None}
    return {"countermodel": model.describe()}


def cmd_state(s: SessionState) -> dict:
    return render_state(s)


def cmd_history(s: SessionState) -> dict:
    return {"states": list(s.history), "current": s.current_id}


def cmd_revert(s: SessionState, state_id: int) -> dict:
    if state_id not in s.states:
        raise errors.NotFoundError(f"no state {state_id}")
    s.proof = s.states[state_id]
    s.current_id = state_id
    return render_state(s)


def cmd_rules(s: SessionState, goal: int = 1) -> dict:
    ps = _require_proof(s)
    if not (1 <= goal <= len(ps.goals)):
        raise errors.ProofError(f"no goal {goal}")
    return {"rules": automation.applicable_rules(ps, goal - 1)}


def cmd_theorems(s: SessionState, prefix: str = "") -> dict:
    names = [n for n in store.list_theorems(s.thy) if n.startswith(prefix)]
    return {"theorems": names}


# --------------------------------------------------------------------- REPL


def render_goals_text(s: SessionState) -> str:
    ps = s.proof
    if ps is None:
        return "no proof in progress"
    if not ps.goals:
        return "No subgoals — ready to qed"
    mode = _mode(s)
    lines = []
    for i, g in enumerate(ps.goals, start=1):
        lines.append(f" {i}. {store.render_goal(ps.thy, g, mode)}")
    payload = render_state(s)
    if payload["placeholders"]:
        shown = ", ".join(f"{k} := {v}" for k, v in payload["placeholders"].items())
        lines.append(f"    placeholders: {shown}")
    return "\n".join(lines)


def repl(search_paths: list[str] | None = None, ascii_mode: bool = False, stdin=None, stdout=None) -> int:
    """Read-eval-print loop; every failure prints one line and leaves the
    session unchanged."""
    s = new_session(search_paths, ascii_mode)
    fin = stdin or sys.stdin
    fout = stdout or sys.stdout

    def say(text: str):
        print(text, file=fout)

    say("lcfkit — type help for commands")
    while True:
        try:
            print("> ", end="", flush=True, file=fout)
            line = fin.readline()
        except KeyboardInterrupt:
            say("")
            return 0
        if not line:
            return 0
        line = line.strip()
        if not line:
            continue
        cmd, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if cmd == "quit":
                return 0
            elif cmd == "help":
                say(HELP)
            elif cmd == "load":
                out = cmd_load(s, rest)
                say(f"loaded theory {out['theory']}")
            elif cmd == "goal":
                cmd_goal(s, rest.strip('"'))
                say(render_goals_text(s))
            elif cmd == "apply":
                text = rest
                if text.startswith("(") and text.endswith(")"):
                    text = text[1:-1]
                cmd_apply(s, text)
                say(render_goals_text(s))
            elif cmd == "goals":
                say(render_goals_text(s))
            elif cmd == "undo":
                cmd_undo(s)
                say(render_goals_text(s))
            elif cmd == "qed":
                out = cmd_qed(s, rest or None)
                stored = f" (stored as {out['name']})" if out["name"] else ""
                say(f"theorem: {out['theorem']}{stored}")
            elif cmd == "thm":
                out = cmd_thm(s, rest)
                say(f"{out['name']}: {out['theorem']}")
            elif cmd == "cex":
                out = cmd_cex(s, int(rest or "3"))
                if out["countermodel"] is None:
                    say("no countermodel found")
                else:
                    say(json.dumps(out["countermodel"], indent=2, default=str))
            else:
                say(f"unknown command {cmd!r}; try help")
        except errors.LcfError as e:
            say(f"error ({e.kind}): {e}")
        except Exception as e:  # never crash the loop
            say(f"internal error: {e!r}")


# ------------------------------------------------------------------- server

COMMANDS = {
    "load": lambda s, a, cancel: cmd_load(s, a["name"]),
    "goal": lambda s, a, cancel: cmd_goal(s, a["formula"]),
    "apply": lambda s, a, cancel: cmd_apply(s, a["tactic"], a.get("goal", 1), a.get("alt", 0), cancel),
    "undo": lambda s, a, cancel: cmd_undo(s),
    "qed": lambda s, a, cancel: cmd_qed(s, a.get("name")),
    "thm": lambda s, a, cancel: cmd_thm(s, a["name"]),
    "cex": lambda s, a, cancel: cmd_cex(s, a.get("max_size", 3), cancel),
    "state": lambda s, a, cancel: cmd_state(s),
    "goals": lambda s, a, cancel: cmd_state(s),
    "history": lambda s, a, cancel: cmd_history(s),
    "revert": lambda s, a, cancel: cmd_revert(s, a["state"]),
    "rules": lambda s, a, cancel: cmd_rules(s, a.get("goal", 1)),
    "theorems": lambda s, a, cancel: cmd_theorems(s, a.get("prefix", "")),
}


def handle_request(s: SessionState, line: str, cancel=None) -> dict:
    """One JSON request line to one JSON response object."""
    try:
        req = json.loads(line)
    except json.JSONDecodeError as e:
        return {"id": None, "ok": False, "error": {"kind": "ParseError", "msg": f"bad JSON: {e}"}}
    rid = req.get("id") if isinstance(req, dict) else None
    if not isinstance(req, dict) or "cmd" not in req:
        return {"id": rid, "ok": False, "error": {"kind": "ParseError", "msg": "request must be {id, cmd, args}"}}
    cmd = req["cmd"]
    args = req.get("args") or {}
    fn = COMMANDS.get(cmd)
    if fn is None:
        return {"id": rid, "ok": False, "error": {"kind": "NotFoundError", "msg": f"unknown command {cmd!r}"}}
    try:
        result = fn(s, args, cancel)
        return {"id": rid, "ok": True, "result": result}
    except errors.LcfError as e:
        return {"id": rid, "ok": False, "error": {"kind": e.kind, "msg": str(e)}}
    except Exception as e:
        return {"id": rid, "ok": False, "error": {"kind": "InternalError", "msg": repr(e)}}


def serve_streams(fin, fout, search_paths: list[str] | None = None) -> None:
    """Line-delimited JSON over a stream pair.

    Requests run serialized on a worker thread; the reader thread handles
    `cancel` immediately, setting the running request's cancellation event.
    `quit` is answered and ends the connection.
    """
    s = new_session(search_paths)
    write_lock = threading.Lock()

    def respond(obj: dict):
        with write_lock:
            fout.write(json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n")
            fout.flush()

    jobs: "queue.Queue[tuple[str, object, threading.Event] | None]" = queue.Queue()
    running: dict = {"id": None, "event": None}

    def worker():
        while True:
            job = jobs.get()
            if job is None:
                return
            line, rid, cancel = job
            running["id"] = rid
            running["event"] = cancel
            resp = handle_request(s, line, cancel)
            running["id"] = None
            running["event"] = None
            respond(resp)

    th = threading.Thread(target=worker, daemon=True)
    th.start()

    for raw in fin:
        line = raw.strip()
        if not line:
            continue
        # peek for control commands handled on the reader thread
        rid = None
        cmd = None
        try:
            peeked = json.loads(line)
            if isinstance(peeked, dict):
                rid = peeked.get("id")
                cmd = peeked.get("cmd")
        except json.JSONDecodeError:
            pass
        if cmd == "cancel":
            target = (peeked.get("args") or {}).get("request")
            ev = running["event"]
            if running["id"] is not None and running["id"] == target and ev is not None:
                ev.set()
                respond({"id": rid, "ok": True, "result": {"cancelled": target}})
            else:
                respond({"id": rid, "ok": False, "error": {"kind": "NotFoundError", "msg": "no such running request"}})
            continue
        if cmd == "quit":
            jobs.put(None)
            th.join()
            respond({"id": rid, "ok": True, "result": {}})
            return
        jobs.put((line, rid, threading.Event()))
    jobs.put(None)
    th.join()


def serve(socket_path: str | None = None, search_paths: list[str] | None = None) -> int:
    """Serve on stdio, or on a local (unix-domain) socket accepting multiple
    independent connections."""
    if socket_path is None:
        serve_streams(sys.stdin, sys.stdout, search_paths)
        return 0
    srv = socket.socket(socket.AF_UNIX, socket.SOCK_STREAM)
    try:
        srv.bind(socket_path)
    except OSError as e:
        print(f"cannot bind {socket_path}: {e}", file=sys.stderr)
        return 2
    srv.listen()
    try:
        while True:
            conn, _ = srv.accept()
            fin = conn.makefile("r", encoding="utf-8")
            fout = conn.makefile("w", encoding="utf-8")
            t = threading.Thread(target=serve_streams, args=(fin, fout, search_paths), daemon=True)
            t.start()
    except KeyboardInterrupt:
        return 0
    finally:
        srv.close()
