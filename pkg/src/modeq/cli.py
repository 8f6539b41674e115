"""Command-line client.

A thin front end over the service schemas: each subcommand builds the same
pydantic request the HTTP endpoints accept, executes it in process (or
against a running server via --server), and prints the JSON response.

Exit codes for ``classify``: 0 equivalent, 1 inequivalent, 2 unsupported;
any usage or validation error exits 3.
"""

from __future__ import annotations

import argparse
import json
import sys
import urllib.request

from .service import handlers, models


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(3)


def _post(server: str, path: str, payload: dict) -> dict:
    body = json.dumps(payload).encode()
    req = urllib.request.Request(
        server.rstrip("/") + path, data=body,
        headers={"Content-Type": "application/json"},
    )
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read().decode())


def _dump(data: dict) -> str:
    return json.dumps(data, indent=2)


def _run(args, path: str, request, handler) -> dict:
    if args.server:
        return _post(args.server, path, request.model_dump(by_alias=True))
    return handler(request).model_dump(by_alias=True)


def _csv_ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _csv_strs(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="modeq", description=__doc__)
    parser.add_argument("--server", help="base URL of a running modeq service")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="decide equivalence of two modules")
    c.add_argument("--lambda1", required=True)
    c.add_argument("--mu1", required=True)
    c.add_argument("--lambda2", required=True)
    c.add_argument("--mu2", required=True)
    c.add_argument("--n", required=True)
    c.add_argument("--l", required=True, type=int)
    c.add_argument("--pattern", help="comma-separated offsets, e.g. 0,2,3,5")
    c.add_argument("--experimental", action="store_true",
                   help="allow the experimental pattern 0,2,3,4,6")

    i = sub.add_parser("invariants", help="evaluate classifying invariants")
    i.add_argument("--lambda", dest="lam", required=True)
    i.add_argument("--mu", required=True)
    i.add_argument("--n", required=True)
    i.add_argument("--kinds", help="comma-separated subset of "
                   "I,J,K,M,R,Itilde,Jtilde,Mtilde,Rtilde")

    p = sub.add_parser("pencil", help="emit level curves of a pencil")
    p.add_argument("--family", required=True, choices=["Rtilde", "I", "M"])
    p.add_argument("--n5")
    p.add_argument("--n6")
    p.add_argument("--levels", required=True,
                   help="comma-separated rational levels; 'inf' allowed")
    p.add_argument("--window", required=True, help="x0,x1,y0,y1")
    p.add_argument("--out", default="csv", choices=["csv", "svg"])
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--output", help="write to this file instead of stdout")

    o = sub.add_parser("oracle", help="run a brute-force verification grid")
    o.add_argument("--check", required=True, choices=["cmz", "pq", "intertwiner"])
    o.add_argument("--grid", default="small", choices=["small", "full"])
    o.add_argument("--degree", type=int, default=8)
    o.add_argument("--gen-cap", type=int, default=6)

    t = sub.add_parser("tables", help="regenerate a published classification")
    t.add_argument("--which", required=True,
                   choices=["DO97", "GO96", "LO99_l3", "Ga00_D2", "Ga00_D3"])
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "classify":
            req = models.ClassifyRequest(
                lambda1=args.lambda1, mu1=args.mu1,
                lambda2=args.lambda2, mu2=args.mu2,
                n=args.n, l=args.l,
                pattern=_csv_ints(args.pattern) if args.pattern else None,
                experimental=args.experimental,
            )
            data = _run(args, "/classify", req, handlers.handle_classify)
            print(_dump(data))
            return {"equivalent": 0, "inequivalent": 1, "unsupported": 2}[
                data["outcome"]
            ]
        if args.command == "invariants":
            req = models.InvariantsRequest(
                lam=args.lam, mu=args.mu, n=args.n,
                kinds=_csv_strs(args.kinds) if args.kinds else None,
            )
            print(_dump(_run(args, "/invariants", req, handlers.handle_invariants)))
            return 0
        if args.command == "pencil":
            req = models.PencilRequest(
                family=args.family, n5=args.n5, n6=args.n6,
                levels=_csv_strs(args.levels),
                window=_csv_strs(args.window),
                out=args.out, resolution=args.resolution,
            )
            data = _run(args, "/pencil", req, handlers.handle_pencil)
            if args.output:
                with open(args.output, "w") as fh:
                    fh.write(data["content"])
            else:
                sys.stdout.write(data["content"])
            return 0
        if args.command == "oracle":
            req = models.OracleRequest(
                check=args.check, grid=args.grid,
                degree=args.degree, gen_cap=args.gen_cap,
            )
            data = _run(args, "/oracle", req, handlers.handle_oracle)
            print(_dump(data))
            return 0
        if args.command == "tables":
            req = models.TablesRequest(which=args.which)
            print(_dump(_run(args, "/tables", req, handlers.handle_tables)))
            return 0
    except (ValueError, ZeroDivisionError) as exc:
        print(f"modeq: error: {exc}", file=sys.stderr)
        return 3
    return 3


if __name__ == "__main__":
    sys.exit(main())
