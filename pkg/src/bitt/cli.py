"""Command-line client for the checking service.

By default the FastAPI app is mounted in process through httpx's ASGI
transport, so no server is needed; --server points at a remote instance
instead. Exit codes: 0 success, 1 type errors or property violations,
2 parse/IO errors, 3 fuel exhaustion. BITT_FUEL overrides the default
fuel; --fuel overrides both.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys

import httpx

from .reduction import DEFAULT_FUEL

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_FUEL = 3

_CATEGORY_EXIT = {"parse": 2, "io": 2, "type": 1, "fuel": 3, "internal": 1}


def _env_fuel() -> int:
    raw = os.environ.get("BITT_FUEL")
    if raw is None:
        return DEFAULT_FUEL
    try:
        fuel = int(raw)
    except ValueError:
        print(f"error[usage]: BITT_FUEL must be an integer, got {raw!r}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE) from None
    if fuel < 0:
        print("error[usage]: BITT_FUEL must be non-negative", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    return fuel


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bitt",
        description="Bidirectional type checker for a cumulative CComega "
        "with Sigma, Nat and Eq.",
    )
    parser.add_argument(
        "--server",
        metavar="URL",
        help="talk to a running service instead of the in-process app",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--fuel", type=int, default=None, metavar="N")
        p.add_argument("--json", action="store_true", dest="json_output")

    p = sub.add_parser("check", help="check a .bitt file, or -e EXPR against --type")
    p.add_argument("input", nargs="?", metavar="FILE")
    p.add_argument("-e", dest="expr", metavar="EXPR")
    p.add_argument("--type", dest="expected", metavar="TYPE")
    common(p)

    p = sub.add_parser("infer", help="print the principal type of an expression")
    p.add_argument("-e", dest="expr", required=True, metavar="EXPR")
    common(p)

    p = sub.add_parser("normalize", help="type-check, then print the normal form")
    p.add_argument("-e", dest="expr", required=True, metavar="EXPR")
    common(p)

    p = sub.add_parser("equiv", help="conversion or cumulativity verdict")
    p.add_argument(
        "-e",
        dest="exprs",
        action="append",
        required=True,
        metavar="EXPR",
        help="give twice: left and right side",
    )
    p.add_argument("--cumul", action="store_true")
    common(p)

    p = sub.add_parser("trace", help="JSON trace and validated derivation")
    p.add_argument("-e", dest="expr", required=True, metavar="EXPR")
    common(p)

    p = sub.add_parser("fuzz", help="run the oracle property suites")
    p.add_argument("--n", dest="count", type=int, default=500, metavar="COUNT")
    p.add_argument("--seed", type=int, default=0, metavar="S")
    p.add_argument("--max-depth", type=int, default=4, metavar="D")
    common(p)

    return parser


async def _post(args, path: str, payload: dict) -> dict:
    if args.server:
        client = httpx.AsyncClient(base_url=args.server, timeout=300.0)
    else:
        from .service.app import create_app

        client = httpx.AsyncClient(
            transport=httpx.ASGITransport(app=create_app()),
            base_url="http://bitt.internal",
            timeout=None,
        )
    async with client:
        resp = await client.post(path, json=payload)
        resp.raise_for_status()
        return resp.json()


def _report_error(err: dict) -> int:
    kind = err.get("kind") or err["category"]
    where = ""
    if err.get("line") is not None:
        where = f" at {err['line']}:{err['col']}"
    elif err.get("location"):
        where = " at " + "/".join(err["location"])
    print(f"error[{kind}]{where}: {err['message']}", file=sys.stderr)
    if err.get("expected") is not None:
        print(f"  expected: {err['expected']}", file=sys.stderr)
    if err.get("inferred") is not None:
        print(f"  inferred: {err['inferred']}", file=sys.stderr)
    return _CATEGORY_EXIT.get(err["category"], EXIT_FAIL)


def _finish(args, resp: dict) -> int | None:
    """Shared --json printing and error reporting; None means keep going."""
    if args.json_output:
        print(json.dumps(resp, indent=2))
        if not resp.get("ok", False):
            err = resp.get("error")
            return _CATEGORY_EXIT.get(err["category"], EXIT_FAIL) if err else EXIT_FAIL
        return None
    if not resp.get("ok", False) and resp.get("error"):
        return _report_error(resp["error"])
    return None


def _run(args) -> int:
    fuel = args.fuel if args.fuel is not None else _env_fuel()

    if args.command == "check":
        if (args.input is None) == (args.expr is None):
            print("error[usage]: check needs a FILE or -e EXPR", file=sys.stderr)
            return EXIT_USAGE
        if args.input is not None and args.expected is not None:
            print("error[usage]: --type only applies to -e EXPR", file=sys.stderr)
            return EXIT_USAGE
        if args.expr is not None:
            payload = {"expr": args.expr, "type": args.expected, "fuel": fuel}
            resp = asyncio.run(_post(args, "/v1/check_expr", payload))
            code = _finish(args, resp)
            if code is not None:
                return code
            if not args.json_output:
                print(f"{resp['term']} : {resp['type']}")
            return EXIT_OK
        try:
            with open(args.input, encoding="utf-8") as fh:
                source = fh.read()
        except OSError as e:
            print(f"error[io]: {e}", file=sys.stderr)
            return EXIT_USAGE
        resp = asyncio.run(_post(args, "/v1/check", {"source": source, "fuel": fuel}))
        code = _finish(args, resp)
        if code is not None:
            return code
        if not args.json_output:
            for d in resp["definitions"]:
                print(f"{d['name']} : {d['type']}")
        return EXIT_OK

    if args.command == "infer":
        resp = asyncio.run(
            _post(args, "/v1/infer", {"expr": args.expr, "fuel": fuel})
        )
        code = _finish(args, resp)
        if code is not None:
            return code
        if not args.json_output:
            print(resp["type"])
        return EXIT_OK

    if args.command == "normalize":
        resp = asyncio.run(
            _post(args, "/v1/normalize", {"expr": args.expr, "fuel": fuel})
        )
        code = _finish(args, resp)
        if code is not None:
            return code
        if not args.json_output:
            print(resp["normal_form"])
        return EXIT_OK

    if args.command == "equiv":
        if len(args.exprs) != 2:
            print("error[usage]: equiv needs exactly two -e EXPR", file=sys.stderr)
            return EXIT_USAGE
        payload = {
            "lhs": args.exprs[0],
            "rhs": args.exprs[1],
            "cumul": args.cumul,
            "fuel": fuel,
        }
        resp = asyncio.run(_post(args, "/v1/equiv", payload))
        code = _finish(args, resp)
        if code is not None:
            return code
        if not args.json_output:
            print("equivalent" if resp["equivalent"] else "not equivalent")
        return EXIT_OK if resp["equivalent"] else EXIT_FAIL

    if args.command == "trace":
        resp = asyncio.run(_post(args, "/v1/trace", {"expr": args.expr, "fuel": fuel}))
        code = _finish(args, resp)
        if code is not None:
            return code
        if not args.json_output:
            print(
                json.dumps(
                    {
                        "format": resp["format"],
                        "type": resp["type"],
                        "trace": resp["trace"],
                        "derivation": resp["derivation"],
                    },
                    indent=2,
                )
            )
        return EXIT_OK

    if args.command == "fuzz":
        payload = {
            "count": args.count,
            "seed": args.seed,
            "max_depth": args.max_depth,
            "fuel": fuel,
        }
        resp = asyncio.run(_post(args, "/v1/fuzz", payload))
        if args.json_output:
            print(json.dumps(resp, indent=2))
        else:
            report = resp["report"]
            if report["ok"]:
                print(
                    f"fuzz: {report['completed']}/{report['count']} iterations "
                    f"passed (seed {report['seed']})"
                )
            else:
                f = report["failures"][0]
                print(
                    f"fuzz: counterexample at iteration {f['iteration']} "
                    f"(seed {f['seed']}): {f['reason']}"
                )
                print(json.dumps(f["shrunk_derivation"], indent=2))
        return EXIT_OK if resp["ok"] else EXIT_FAIL

    raise AssertionError(args.command)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except httpx.HTTPError as e:
        print(f"error[io]: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
