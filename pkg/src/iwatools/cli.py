"""Batch front door: thin client over the service handlers.

Every subcommand builds the same request model the HTTP service accepts and
calls the shared handler in-process (or POSTs it to --server when given), so
file-driven batch runs and the service cannot disagree.

Exit codes: 0 success, 1 mathematical error (NotDivisible, Indeterminate,
PrecisionExhausted, ...), 2 I/O or parse error.  Output is deterministic:
sorted-key JSON, or the fixed-width table of `invariants`.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import jsonio
from .errors import AlgebraError
from .service import handlers, models


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise jsonio.PayloadError(f"cannot read {path}: {e}") from e


def _emit(args, obj):
    if hasattr(obj, "model_dump"):
        obj = obj.model_dump(by_alias=True)
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _call(args, route, request):
    if args.server:
        import httpx

        resp = httpx.post(args.server.rstrip("/") + "/" + route,
                          json=request.model_dump(), timeout=600.0)
        if resp.status_code >= 400:
            raise AlgebraError(resp.json().get("error", {}).get("detail", resp.text))
        return resp.json()
    fn = {
        "prepare": handlers.prepare,
        "mulam": handlers.mulam,
        "divide": handlers.divide,
        "invariants": handlers.invariants,
        "mahler": handlers.mahler,
        "restrict": handlers.restrict,
        "pushforward": handlers.pushforward,
        "moment": handlers.moment_of,
        "coleman": handlers.coleman,
        "lp": handlers.lp,
        "iwfun": handlers.iwfun,
        "charideal": handlers.charideal,
        "euler": handlers.euler,
    }[route]
    return fn(request)


def main(argv=None) -> int:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    # SUPPRESS defaults: values parsed before the subcommand survive the
    # subparser pass; real defaults are installed once on the main parser
    common.add_argument("--server", default=argparse.SUPPRESS,
                        help="POST to a running service instead of computing "
                             "in-process")
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="write the JSON result to this file")
    common.add_argument("--p", type=int, default=argparse.SUPPRESS)
    common.add_argument("--digits", type=int, default=argparse.SUPPRESS,
                        help="digit budget N of the context")
    common.add_argument("--tdeg", type=int, default=argparse.SUPPRESS,
                        help="T-truncation window M")
    common.add_argument("--kappa-gen", type=int, default=argparse.SUPPRESS,
                        help="image of the topological generator in 1+4Z_2")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="iwatools",
        description="p-adic measures, Iwasawa series, characteristic ideals",
        allow_abbrev=False, parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("prepare", parents=[common],
                        help="Weierstrass preparation of a series")
    sp.add_argument("--series", required=True)

    sp = sub.add_parser("mulam", parents=[common],
                        help="mu/lambda invariants of a series")
    sp.add_argument("--series", required=True)

    sp = sub.add_parser("divide", parents=[common], help="Weierstrass division")
    sp.add_argument("--series", required=True)
    sp.add_argument("--by", required=True)

    sp = sub.add_parser("invariants", parents=[common],
                        help="invariant-matching identity across levels")
    sp.add_argument("--series", required=True)
    sp.add_argument("--levels", default="2..6")

    sp = sub.add_parser("mahler", parents=[common],
                        help="Mahler series of a dirac combination")
    sp.add_argument("--points", required=True,
                    help='JSON file: [{"a": 3, "coef": 1}, ...]')

    sp = sub.add_parser("restrict", parents=[common],
                        help="restrict a measure to the units")
    sp.add_argument("--measure", required=True)

    sp = sub.add_parser("pushforward", parents=[common],
                        help="image measure under x -> u x")
    sp.add_argument("--measure", required=True)
    sp.add_argument("--u", type=int, required=True)

    sp = sub.add_parser("moment", parents=[common], help="m-th moment of a measure")
    sp.add_argument("--measure", required=True)
    sp.add_argument("--m", type=int, required=True)

    sp = sub.add_parser("coleman", parents=[common],
                        help="Coleman operator of a unit series")
    sp.add_argument("--series", required=True)

    sp = sub.add_parser("lp", parents=[common],
                        help="p-adic L-value of a Galois measure")
    sp.add_argument("--measure", required=True)
    sp.add_argument("--chi", required=True, help='exponents like "1,2"')
    sp.add_argument("--s", type=int, required=True)

    sp = sub.add_parser("iwfun", parents=[common],
                        help="Iwasawa function of a Galois measure")
    sp.add_argument("--measure", required=True)
    sp.add_argument("--chi", required=True)

    sp = sub.add_parser("charideal", parents=[common],
                        help="characteristic ideal of a matrix")
    sp.add_argument("--matrix", required=True)

    sp = sub.add_parser("euler", parents=[common],
                        help="Kolyvagin-derivative checks")
    sp.add_argument("--scenario", required=True)
    sp.add_argument("--check", default="invariance",
                    choices=["telescope", "invariance", "kappa"])
    sp.add_argument("--r", default="", help='prime indices like "0,1"')

    args = parser.parse_args(argv)
    # the common flags live on both parser levels with SUPPRESS defaults
    # (set_defaults would leak through the shared parent actions); fill the
    # real defaults for whatever was never given
    for key, val in (("server", None), ("out", None), ("p", 2), ("digits", 64),
                     ("tdeg", 64), ("kappa_gen", 5), ("seed", 0)):
        if not hasattr(args, key):
            setattr(args, key, val)
    try:
        return _dispatch(args)
    except AlgebraError as e:
        _emit(args, jsonio.error_payload(e))
        return 1
    except (jsonio.PayloadError, OSError) as e:
        sys.stderr.write(f"input error: {e}\n")
        return 2


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "prepare":
        out = _call(args, "prepare", models.SeriesRequest(series=_load(args.series)))
    elif cmd == "mulam":
        out = _call(args, "mulam", models.SeriesRequest(series=_load(args.series)))
    elif cmd == "divide":
        out = _call(args, "divide", models.DivideRequest(
            series=_load(args.series), divisor=_load(args.by)))
    elif cmd == "invariants":
        out = _call(args, "invariants", models.InvariantsRequest(
            series=_load(args.series), levels=args.levels))
        return _emit_invariants(args, out)
    elif cmd == "mahler":
        out = _call(args, "mahler", models.MahlerRequest(
            p=args.p, N=args.digits, M=args.tdeg, points=_load(args.points)))
    elif cmd == "restrict":
        out = _call(args, "restrict",
                    models.MeasureRequest(measure=_load(args.measure)))
    elif cmd == "pushforward":
        out = _call(args, "pushforward", models.PushforwardRequest(
            measure=_load(args.measure), u=args.u))
    elif cmd == "moment":
        out = _call(args, "moment", models.MomentRequest(
            measure=_load(args.measure), m=args.m))
    elif cmd == "coleman":
        out = _call(args, "coleman",
                    models.ColemanRequest(series=_load(args.series)))
    elif cmd == "lp":
        out = _call(args, "lp", models.LpRequest(
            measure=_load(args.measure),
            chi=[int(x) for x in args.chi.split(",")],
            s=args.s, kappa_gen=args.kappa_gen))
    elif cmd == "iwfun":
        out = _call(args, "iwfun", models.IwfunRequest(
            measure=_load(args.measure),
            chi=[int(x) for x in args.chi.split(",")],
            kappa_gen=args.kappa_gen))
    elif cmd == "charideal":
        out = _call(args, "charideal",
                    models.CharidealRequest(matrix=_load(args.matrix)))
    elif cmd == "euler":
        scenario = _load(args.scenario)
        scenario.setdefault("seed", args.seed)
        out = _call(args, "euler", models.EulerRequest(
            scenario=scenario, check=args.check, r=_parse_primes(args.r)))
    else:  # pragma: no cover
        raise jsonio.PayloadError(f"unknown command {cmd}")
    _emit(args, out)
    return 0


def _parse_primes(spec: str):
    """Accept "0,1" index lists or "q1q2" names (q1 is the first prime)."""
    spec = spec.strip()
    if not spec:
        return []
    if "q" in spec:
        return [int(tok) - 1 for tok in spec.split("q") if tok.strip()]
    return [int(x) for x in spec.split(",") if x.strip() != ""]


def _emit_invariants(args, out) -> int:
    rows = out.rows if hasattr(out, "rows") else out["rows"]
    lines = [f"{'n':>3} {'lhs':>8} {'rhs':>8} match"]
    for row in rows:
        if hasattr(row, "n"):
            n, lhs, rhs, match = row.n, row.lhs, row.rhs, row.match
        else:
            n, lhs, rhs, match = row["n"], row["lhs"], row["rhs"], row["match"]
        lines.append(f"{n:>3} {lhs:>8} {rhs:>8} {'ok' if match else 'MISMATCH'}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
