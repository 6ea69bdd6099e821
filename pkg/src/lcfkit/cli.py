"""Command line entry point.

Exit codes: 0 success, 1 proof/logic failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys

from . import errors, session, store


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="lcfkit", description="LCF-style prover for higher-order logic")
    sub = ap.add_subparsers(dest="command", required=True)

    p_repl = sub.add_parser("repl", help="interactive proof session")
    p_repl.add_argument("--path", action="append", default=[], help="theory search path (repeatable)")
    p_repl.add_argument("--ascii", action="store_true", help="print ASCII notation")

    p_check = sub.add_parser("check", help="load theory files in batch; nonzero exit on failure")
    p_check.add_argument("files", nargs="+", metavar="FILE")
    p_check.add_argument("--path", action="append", default=[])

    p_serve = sub.add_parser("serve", help="line-delimited JSON protocol server")
    p_serve.add_argument("--socket", default=None, metavar="ADDR", help="unix socket path (default: stdio)")
    p_serve.add_argument("--path", action="append", default=[])

    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0

    if args.command == "repl":
        return session.repl(args.path, args.ascii)

    if args.command == "serve":
        return session.serve(args.socket, args.path)

    if args.command == "check":
        st = store.TheoryStore(args.path)
        failed = False
        for f in args.files:
            try:
                thy = st.load(f)
            except errors.ParseError as e:
                print(f"{f}: parse error: {e}", file=sys.stderr)
                return 2
            except errors.LcfError as e:
                print(f"{f}: {e.kind}: {e}", file=sys.stderr)
                failed = True
                continue
            rep = store.report(thy)
            print(rep.render())
        return 1 if failed else 0

    return 2


if __name__ == "__main__":
    sys.exit(main())
