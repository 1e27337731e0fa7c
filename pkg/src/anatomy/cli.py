"""Command-line front end.

Every command assembles its complete output in memory first, so a failing
run never leaves partial output behind. Exit status: 0 ok, 2 bad arguments
or violated precondition, 3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

from . import __version__
from .arith import DomainError, PreconditionError
from .characters import DEFAULT_EXCEPTIONAL_EXPONENT, CharacterSpec, char_sum, characters, exceptional_scan, is_cubefree
from .diophantine import (
    HyperbolaQuery,
    count_hyperbola,
    pell_fundamental,
    pell_like_solutions,
    powerful_linear_pairs,
)
from .factorial_square import enumerate_solutions, solution_count_table
from .intervals import build_factorial_kernels, default_a_cap, f3_witnesses, interval_product, is_bad, is_very_bad
from .oeis import compare_bfile, read_bfile
from .probes import SieveProblem, c31_constant, erdos_szekeres_constant, fracpart_histogram, large_sieve_report
from .sets import DEFAULT_HMAX_B, DEFAULT_HMAX_F3, DEFAULT_HMAX_VB, SetId, cumulative_counts, enumerate_b1, enumerate_set
from .smooth import b1_count_exact, psi

THREADS_ENV = "ANATOMY_THREADS"
EXIT_OK, EXIT_PRECONDITION, EXIT_INTERNAL = 0, 2, 3


class InvariantViolation(RuntimeError):
    """Two independent computations that must agree did not."""


def _default_hmax(set_id: SetId) -> int | None:
    return {SetId.B: DEFAULT_HMAX_B, SetId.VB: DEFAULT_HMAX_VB, SetId.F3: DEFAULT_HMAX_F3}.get(set_id)


def _decimals(precision: float) -> int:
    return max(0, math.ceil(-math.log10(precision)) + 1)


# -- command implementations: each returns (config, rows) -------------------


def cmd_enumerate(args):
    sid = SetId.parse(args.set)
    hmax = args.hmax if args.hmax is not None else _default_hmax(sid)
    values = enumerate_set(sid, args.x, hmax=hmax, include_one=args.include_one)
    config = {"set": sid.value, "x": args.x, "hmax": hmax, "include_one": args.include_one}
    return config, [{"index": i, "n": v} for i, v in enumerate(values, 1)]


def cmd_counts(args):
    sets = [SetId.parse(s) for s in args.sets.split(",") if s.strip()]
    rows = cumulative_counts(args.x, sets, args.step, hmax=args.hmax, include_one=args.include_one)
    hmaxes = {s.value: args.hmax or _default_hmax(s) for s in sets}
    config = {"x": args.x, "step": args.step, "sets": [s.value for s in sets], "hmax": hmaxes, "include_one": args.include_one}
    return config, rows


def cmd_verify_oeis(args):
    sid = SetId.parse(args.set)
    hmax = args.hmax if args.hmax is not None else _default_hmax(sid)
    terms = read_bfile(Path(args.bfile))
    x = args.x if args.x is not None else (terms[-1][1] if terms else 1)
    values = enumerate_set(sid, x, hmax=hmax, include_one=args.include_one)
    result = compare_bfile(terms, values, x)
    config = {"set": sid.value, "bfile": str(args.bfile), "x": x, "hmax": hmax, "include_one": args.include_one}
    return config, [result.as_row()]


def cmd_classify(args):
    N, H = args.n, args.h
    ip = interval_product(N, H)
    a_cap = args.a_cap if args.a_cap is not None else default_a_cap(N, H)
    limit = max(N - 1, 1) if args.exhaustive else max(min(a_cap, N - 1), 1)
    table = build_factorial_kernels(limit)
    wit = f3_witnesses(ip, table, a_cap, exhaustive=args.exhaustive)
    p0, e0 = ip.largest if ip.largest else (None, None)
    row = {
        "N": N,
        "H": H,
        "first": N + 1,
        "last": N + H,
        "bad": is_bad(ip),
        "very_bad": is_very_bad(ip),
        "type_f3": bool(wit),
        "p0": p0,
        "p0_exponent": e0,
        "kernel_primes": " ".join(map(str, ip.parity().primes)),
        "f3_witnesses": " ".join(map(str, wit)),
    }
    config = {"n": N, "h": H, "a_cap": None if args.exhaustive else a_cap, "exhaustive": args.exhaustive}
    return config, [row]


def cmd_pell(args):
    if args.d is not None:
        s = pell_fundamental(args.d)
        return {"d": args.d}, [{"u": 1, "v": s.v, "x": s.x, "y": s.y}]
    if args.u is None or args.v is None or args.ybound is None:
        raise DomainError("pell needs --d, or all of --u --v --ybound")
    sols = pell_like_solutions(args.u, args.v, args.ybound)
    config = {"u": args.u, "v": args.v, "ybound": args.ybound}
    return config, [{"u": s.u, "v": s.v, "x": s.x, "y": s.y} for s in sols]


def cmd_hyperbola(args):
    q = HyperbolaQuery(args.a, args.b, args.h, args.x)
    return {"a": q.a, "b": q.b, "h": q.h, "x": q.x}, [{"count": count_hyperbola(q)}]


def cmd_powerful_linear(args):
    pairs = powerful_linear_pairs(args.a, args.b, args.h, args.x)
    config = {"a": args.a, "b": args.b, "h": args.h, "x": args.x}
    if args.list:
        return config, [{"n": n, "m": m} for n, m in pairs]
    return config, [{"count": len(pairs)}]


def cmd_factorial_square(args):
    config = {"x": args.x, "hmax": args.hmax, "step": args.step}
    if args.step:
        return config, solution_count_table(args.x, args.step, args.hmax)
    sols = enumerate_solutions(args.x, args.hmax)
    return config, [{"a1": s.a1, "a2": s.a2, "a3": s.a3} for s in sols]


_CONSTANT_PRECISION = {"erdos-szekeres": "1e-6", "c31": "1e-3"}


def cmd_constants(args):
    names = list(_CONSTANT_PRECISION) if args.which == "all" else [args.which]
    rows = []
    for name in names:
        text = args.precision_text or _CONSTANT_PRECISION[name]
        p = float(text)
        if name == "erdos-szekeres":
            value = erdos_szekeres_constant(p).value
        else:
            c = c31_constant(p)
            # the sum is a lower bound; centre it inside its one-sided bar
            value = c.value + c.above / 2
        shown = f"{value:.{_decimals(p)}f}"
        rows.append({"constant": name, "value": shown, "error_bar": text, "certified": f"{shown} ± {text}"})
    return {"which": args.which, "precision": args.precision_text}, rows


def cmd_char_sum(args):
    if not is_cubefree(args.q):
        raise DomainError(f"modulus {args.q} is not cubefree")
    chars = [CharacterSpec(args.q, args.index)] if args.index is not None else characters(args.q)
    rows = []
    for chi in chars:
        s = char_sum(chi, args.z).value
        rows.append(
            {
                "q": chi.q,
                "index": chi.index,
                "conductor": chi.conductor(),
                "primitive": chi.is_primitive,
                "re": f"{s.real:.12f}",
                "im": f"{s.imag:.12f}",
                "abs": f"{abs(s):.12f}",
            }
        )
    return {"q": args.q, "z": args.z, "index": args.index}, rows


def cmd_exceptional(args):
    moduli = [q for q in range(args.qmin, args.qmax + 1) if is_cubefree(q)]
    rep = exceptional_scan(moduli, args.z, args.exponent)
    rows = [
        {"q": r.chi.q, "index": r.chi.index, "primitive": r.chi.is_primitive, "abs": f"{abs(r.value):.12f}"}
        for r in rep.exceptional
    ]
    config = {
        "z": args.z,
        "qmin": args.qmin,
        "qmax": args.qmax,
        "exponent": args.exponent,
        "threshold": f"{rep.threshold:.12f}",
        "characters_scanned": rep.characters_scanned,
        "primitive_square_total": f"{rep.primitive_square_total:.12f}",
    }
    return config, rows


def _parse_moduli(text: str) -> tuple[tuple[int, tuple[int, ...]], ...]:
    out = []
    for item in filter(None, (t.strip() for t in text.split(";"))):
        q, _, classes = item.partition(":")
        out.append((int(q), tuple(int(c) for c in classes.split(",") if c.strip())))
    return tuple(out)


def cmd_sieve_report(args):
    problem = SieveProblem(args.start, args.length, _parse_moduli(args.moduli))
    rep = large_sieve_report(problem, args.k)
    norm = rep.normalized
    row = {
        "survivors": rep.survivors,
        "denominator": f"{rep.denominator:.12f}",
        "normalized": "" if norm is None else f"{norm:.12f}",
    }
    return {"start": args.start, "length": args.length, "moduli": args.moduli, "k": args.k}, [row]


def cmd_fracparts(args):
    h = fracpart_histogram(args.n, args.p, args.j, args.bins)
    rows = [{"bin": i, "lo": f"{i / h.bins:.6f}", "count": c} for i, c in enumerate(h.counts)]
    config = {
        "n": args.n,
        "p": args.p,
        "j": args.j,
        "bins": args.bins,
        "primes": h.primes,
        "chi_square": f"{h.chi_square:.6f}",
        "forbidden_region": h.forbidden,
    }
    if args.joint:
        rows = [{"bin1": i, "bin2": k, "count": c} for i, r in enumerate(h.joint) for k, c in enumerate(r)]
    return config, rows


def cmd_psi(args):
    return {"x": args.x, "y": args.y}, [{"x": args.x, "y": args.y, "psi": psi(args.x, args.y)}]


def cmd_b1_identity(args):
    formula = b1_count_exact(args.x)
    direct = len(enumerate_b1(args.x, include_one=False))
    if formula != direct:
        raise InvariantViolation(f"sum_p Psi(x/p^2, p) = {formula} but direct count = {direct}")
    return {"x": args.x}, [{"x": args.x, "formula": formula, "direct": direct, "equal": True}]


# -- output -----------------------------------------------------------------


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return "" if v is None else str(v)


def render(command: str, config: dict, rows: list[dict], fmt: str) -> str:
    header = f"# anatomy {__version__} command={command} config={json.dumps(config, sort_keys=True)}"
    if fmt == "json":
        doc = {"command": command, "version": __version__, "config": config, "rows": rows}
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"
    if fmt == "bfile":
        if not rows or set(rows[0]) != {"index", "n"}:
            raise DomainError("bfile output is only available for sequence listings")
        return header + "\n" + "".join(f"{r['index']} {r['n']}\n" for r in rows)
    buf = io.StringIO()
    buf.write(header + "\n")
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(rows[0]))
        for r in rows:
            w.writerow([_cell(v) for v in r.values()])
    return buf.getvalue()


# -- argument parsing ---------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _natural(text: str) -> int:
    v = int(float(text)) if "e" in text.lower() else int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _bigint(text: str) -> int:
    """Accepts 1000000, 1e6 or 10**6."""
    t = text.replace("_", "")
    if "**" in t:
        b, e = t.split("**")
        return int(b) ** int(e)
    if "e" in t.lower():
        mant, _, exp = t.lower().partition("e")
        if "." in mant:
            raise argparse.ArgumentTypeError(f"not an integer: {text}")
        return int(mant) * 10 ** int(exp)
    return int(t)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anatomy", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json", "bfile"), default="csv")
    common.add_argument("--output", "-o", help="write here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    def one_flag(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--include-one", dest="include_one", action="store_true", default=True)
        g.add_argument("--exclude-one", dest="include_one", action="store_false")

    p = add("enumerate", cmd_enumerate, "list a set up to x")
    p.add_argument("set", help="B1, B, VB1, VB, F31 or F3")
    p.add_argument("--x", type=_bigint, required=True)
    p.add_argument("--hmax", type=_positive)
    one_flag(p)

    p = add("counts", cmd_counts, "cumulative counts (the data behind the comparison plots)")
    p.add_argument("--x", type=_bigint, required=True)
    p.add_argument("--step", type=_bigint, required=True)
    p.add_argument("--sets", default="B,B1,VB,F3,F31")
    p.add_argument("--hmax", type=_positive)
    one_flag(p)

    p = add("verify-oeis", cmd_verify_oeis, "compare an enumeration against an OEIS b-file")
    p.add_argument("set")
    p.add_argument("--bfile", required=True)
    p.add_argument("--x", type=_bigint)
    p.add_argument("--hmax", type=_positive)
    one_flag(p)

    p = add("classify", cmd_classify, "bad / very bad / F3 verdict for {n+1..n+h}")
    p.add_argument("--n", type=_bigint, required=True)
    p.add_argument("--h", type=_positive, required=True)
    p.add_argument("--a-cap", type=_positive)
    p.add_argument("--exhaustive", action="store_true", help="scan every a < n for F3 witnesses")

    p = add("pell", cmd_pell, "x^2 - D y^2 = 1, or u x^2 - v y^2 = 1 up to a y bound")
    p.add_argument("--d", type=_positive)
    p.add_argument("--u", type=_positive)
    p.add_argument("--v", type=_positive)
    p.add_argument("--ybound", type=_bigint)

    for name, func, text in (
        ("hyperbola", cmd_hyperbola, "count a n^2 + h = b m^2 with n <= x"),
        ("powerful-linear", cmd_powerful_linear, "count powerful a n + h = b m with a n <= x"),
    ):
        p = add(name, func, text)
        p.add_argument("--a", type=_positive, required=True)
        p.add_argument("--b", type=_positive, required=True)
        p.add_argument("--h", type=int, required=True)
        p.add_argument("--x", type=_bigint, required=True)
        if name == "powerful-linear":
            p.add_argument("--list", action="store_true", help="list the pairs instead of counting")

    p = add("factorial-square", cmd_factorial_square, "solutions of a1! a2! a3! = m^2")
    p.add_argument("--x", type=_bigint, required=True)
    p.add_argument("--hmax", type=_positive, default=DEFAULT_HMAX_F3)
    p.add_argument("--step", type=_bigint, help="emit a count table instead of the solutions")

    p = add("constants", cmd_constants, "certified numeric constants")
    p.add_argument("--which", choices=("erdos-szekeres", "c31", "all"), default="all")
    p.add_argument("--precision", dest="precision_text", help="default 1e-6 (erdos-szekeres), 1e-3 (c31)")

    p = add("char-sum", cmd_char_sum, "normalized prime character sums s_Z(chi)")
    p.add_argument("--q", type=_positive, required=True)
    p.add_argument("--z", type=_bigint, required=True)
    p.add_argument("--index", type=_natural)

    p = add("exceptional", cmd_exceptional, "scan for exceptional characters")
    p.add_argument("--z", type=_bigint, required=True)
    p.add_argument("--qmax", type=_positive, required=True)
    p.add_argument("--qmin", type=_positive, default=2)
    p.add_argument("--exponent", type=float, default=DEFAULT_EXCEPTIONAL_EXPONENT)

    p = add("sieve-report", cmd_sieve_report, "survivors vs the simplified large sieve denominator")
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--length", type=_bigint, required=True)
    p.add_argument("--moduli", required=True, help='e.g. "2:0;3:0;5:0,1"')
    p.add_argument("--k", type=_natural, default=1)

    p = add("fracparts", cmd_fracparts, "histogram of {N/p^j} over primes in [P, 2P)")
    p.add_argument("--n", type=_bigint, required=True)
    p.add_argument("--p", type=_bigint, required=True)
    p.add_argument("--j", type=int, choices=(1, 2), default=1)
    p.add_argument("--bins", type=_positive, default=10)
    p.add_argument("--joint", action="store_true", help="emit the 2-D ({N/p}, {N/p^2}) histogram")

    p = add("psi", cmd_psi, "exact count of y-smooth n <= x")
    p.add_argument("--x", type=_bigint, required=True)
    p.add_argument("--y", type=_bigint, required=True)

    p = add("b1-identity", cmd_b1_identity, "check sum_p Psi(x/p^2, p) against a direct count")
    p.add_argument("--x", type=_bigint, required=True)
    return parser


def _check_threads() -> None:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return
    if not raw.isdigit() or int(raw) < 1:
        raise DomainError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _check_threads()
        config, rows = args.func(args)
        text = render(args.command, config, rows, args.format)
    except (DomainError, PreconditionError, ValueError, OSError) as exc:
        print(f"anatomy {args.command}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (InvariantViolation, ArithmeticError, AssertionError) as exc:
        print(f"anatomy {args.command}: internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
