"""Command-line front end.

    valfram chain   -p 2 "x^2-2"
    valfram frame   -p 2 "(x^2+x+1)^2-2" [--verify]
    valfram dist    -p 2 "x^2-2" "x^2-6"
    valfram equiv   -p 2 "x^2-2" "x^2-6"
    valfram hos     -p 2 "x^2-2" "x"
    valfram krasner -p 2 "x^2-2"
    valfram corpus  -p 2 -p 3 < family.txt
    valfram selftest

Exit codes: 0 success, 2 usage error, 3 a certified branch was required but
only an approximant is available, 4 domain error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .arith import INF, InvalidOperand, PBase, format_val
from .chains import (
    DEFAULT_SV_BOUND,
    NeedsMorePrecision,
    build_chains,
    previous_primitive,
)
from .poly import Poly

__all__ = ["ParseError", "main", "parse_poly", "run"]

DEFAULT_SEED = 0

EXIT_OK, EXIT_USAGE, EXIT_PRECISION, EXIT_DOMAIN = 0, 2, 3, 4


# parsing -----------------------------------------------------------------------------------


class ParseError(InvalidOperand):
    def __init__(self, msg: str, pos: int, text: str) -> None:
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos
        self.text = text


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.toks = self._lex(text)
        self.i = 0

    def _lex(self, s: str) -> list[tuple[str, object, int]]:
        toks = []
        i = 0
        while i < len(s):
            c = s[i]
            if c.isspace():
                i += 1
            elif c.isdigit():
                j = i
                while j < len(s) and s[j].isdigit():
                    j += 1
                toks.append(("num", int(s[i:j]), i))
                i = j
            elif c in "+-*/^()":
                toks.append((c, c, i))
                i += 1
            elif c == "x":
                toks.append(("x", None, i))
                i += 1
            else:
                raise ParseError(f"unexpected character {c!r}", i, s)
        toks.append(("end", None, len(s)))
        return toks

    def peek(self) -> str:
        return self.toks[self.i][0]

    def take(self, kind: Optional[str] = None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[0])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2], self.text)
        self.i += 1
        return tok

    def parse(self) -> Poly:
        if self.peek() == "end":
            raise ParseError("empty expression", 0, self.text)
        f = self.expr()
        if self.peek() != "end":
            tok = self.toks[self.i]
            raise ParseError(f"unexpected {tok[0]!r}", tok[2], self.text)
        return f

    def expr(self) -> Poly:
        f = self.term()
        while self.peek() in "+-" and self.peek() != "end":
            op = self.take()[0]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self) -> Poly:
        f = self.unary()
        while self.peek() in ("*", "/"):
            op, _, pos = self.take()
            g = self.unary()
            if op == "*":
                f = f * g
            else:
                if g.is_zero() or g.degree > 0:
                    raise ParseError("division is only allowed by nonzero constants", pos, self.text)
                f = Poly([Fraction(c) / g[0] for c in f.coeffs])
        return f

    def unary(self) -> Poly:
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek() == "^":
            _, _, pos = self.take()
            if self.peek() != "num":
                tok = self.toks[self.i]
                raise ParseError("exponent must be a nonnegative integer literal", tok[2], self.text)
            n = self.take()[1]
            if self.peek() == "^":
                raise ParseError("chained exponents are ambiguous; use parentheses",
                                 self.toks[self.i][2], self.text)
            return base**n
        return base

    def atom(self) -> Poly:
        kind, val, pos = self.toks[self.i]
        if kind == "num":
            self.take()
            return Poly([val])
        if kind == "x":
            self.take()
            return Poly([0, 1])
        if kind == "(":
            self.take()
            f = self.expr()
            self.take(")")
            return f
        what = "end of input" if kind == "end" else repr(kind)
        raise ParseError(f"unexpected {what}", pos, self.text)


def parse_poly(text: str) -> Poly:
    """Parse integers, rationals, x, + - * / ^ and parentheses into a Poly.

    >>> str(parse_poly("(x^2+x+1)^2-2"))
    'x^4+2*x^3+3*x^2+2*x-1'
    """
    return _Parser(text).parse()


# reporting ------------------------------------------------------------------------------------


class _Usage(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D401 - argparse hook
        raise _Usage(message)


def _monic(text: str) -> Poly:
    f = parse_poly(text)
    if f.is_zero() or f.degree < 1 or not f.is_monic():
        raise InvalidOperand(f"{text!r} is not a monic polynomial of positive degree")
    if not f.is_integral():
        raise InvalidOperand(f"{text!r} must have integral coefficients")
    return f


def _chain(F: Poly, p: int, sv_bound):
    rep = build_chains(F, p, sv_bound)
    if not rep.is_irreducible():
        raise NeedsMorePrecision(f"{F} is not certified irreducible over Q_{p}")
    return rep.chain


def _report_json(rep) -> dict:
    branches = []
    for b in rep.branches:
        entry = {"kind": b.kind, "degree": b.degree, "certified": b.certified}
        if b.kind == "leaf":
            entry["factor"] = str(b.factor)
            entry["multiplicity"] = b.multiplicity
            if b.certified:
                entry["chain"] = b.chain().to_json()
        else:
            entry["approximant"] = str(b.approx)
            entry["node"] = str(b.node)
            entry["sv"] = format_val(b.node.sv())
        branches.append(entry)
    return {"prime": rep.p, "poly": str(rep.input), "irreducible": False, "branches": branches}


def _cmd_chain(args, p: int, F: Poly):
    rep = build_chains(F, p, args.sv_bound)
    if rep.is_irreducible():
        return rep.chain.to_json(), EXIT_OK
    out = _report_json(rep)
    return out, EXIT_OK if rep.all_certified else EXIT_PRECISION


def _cmd_frame(args, p: int, F: Poly):
    from .okutsu import frame_from_chain, verify_frame

    chain = _chain(F, p, args.sv_bound)
    frame = frame_from_chain(chain)
    out = frame.to_json(chain)
    if args.verify:
        from .kernels import chain_evaluator

        ev = chain_evaluator(chain)
        rep = verify_frame(frame, chain, grid_height=args.grid_height, seed=args.seed,
                           evaluator=ev.values)
        out["verification"] = rep.to_json()
        return out, EXIT_OK if rep.passed else EXIT_DOMAIN
    return out, EXIT_OK


def _text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        width = max((len(str(k)) for k in obj), default=0)
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{str(k):<{width}} :")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{str(k):<{width}} : {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        lines = []
        for v in obj:
            if isinstance(v, dict) and v:
                # nested block one level deeper, with the bullet in the freed indent
                block = _text(v, indent + 1)
                lines.append(pad + "- " + block[len(pad) + 2:])
            elif isinstance(v, list) and not _flat(v):
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
        return "\n".join(lines)
    return f"{pad}{_scalar(obj)}"


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) or
                                       (isinstance(x, list) and all(not isinstance(y, (dict, list)) for y in x))
                                       for x in v)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", "--prime", type=int, action="append", dest="primes",
                        help="prime (repeatable for corpus)")
    common.add_argument("--sv-bound", type=int, default=DEFAULT_SV_BOUND,
                        help="precision bound for approximant branches (default 20)")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
    common.add_argument("--seed", type=int, default=None, help="sampler seed")
    common.add_argument("--grid-height", type=int, default=8,
                        help="coefficient bound of the exhaustive sampler grid (default 8)")

    ap = _ArgParser(prog="valfram", description="MacLane chains and Okutsu frames over Q_p.",
                    parents=[common])
    sub = ap.add_subparsers(dest="cmd", parser_class=_ArgParser)
    one = "polynomial expression, or '-' to read one per line from stdin"
    s = sub.add_parser("chain", parents=[common], help="MLV chain of F")
    s.add_argument("poly", nargs="?", default="-", help=one)
    s = sub.add_parser("frame", parents=[common], help="Okutsu frame of F")
    s.add_argument("poly", nargs="?", default="-", help=one)
    s.add_argument("--verify", action="store_true", help="run the sampled frame verification")
    for name, hlp in (("dist", "ultrametric distance u(F,G)"),
                      ("equiv", "Okutsu equivalence of F and G"),
                      ("hos", "is G a HOS key polynomial for v_F")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("F")
        s.add_argument("G")
    s = sub.add_parser("krasner", parents=[common], help="Krasner constant of F")
    s.add_argument("poly", nargs="?", default="-", help=one)
    s = sub.add_parser("corpus", parents=[common],
                       help="group a family into Okutsu classes with a distance matrix")
    s.add_argument("polys", nargs="*", help="family members (default: read stdin)")
    s.add_argument("--max-degree", type=int, default=None,
                   help="enumerate monic polynomials up to this degree instead")
    s.add_argument("--height", type=int, default=2, help="coefficient bound for enumeration")
    sub.add_parser("selftest", parents=[common], help="run the invariant suites")
    return ap


def _single_prime(args) -> int:
    if not args.primes:
        raise _Usage("a prime is required (-p)")
    if len(args.primes) != 1:
        raise _Usage("this command takes exactly one prime")
    return PBase(args.primes[0]).p


def _polys_arg(text: str, stdin) -> list[str]:
    if text == "-":
        return [ln.strip() for ln in stdin if ln.strip() and not ln.lstrip().startswith("#")]
    return [text]


def _dispatch(args, stdin):
    cmd = args.cmd
    if cmd == "selftest":
        from .selftest import run_selftest

        res = run_selftest(seed=args.seed)
        return res, EXIT_OK if all(r["passed"] for r in res["suites"]) else 1
    if cmd == "corpus":
        return _cmd_corpus(args, stdin)
    p = _single_prime(args)
    if cmd in ("chain", "frame", "krasner"):
        texts = _polys_arg(args.poly, stdin)
        results, code = [], EXIT_OK
        for t in texts:
            F = _monic(t)
            if cmd == "chain":
                out, c = _cmd_chain(args, p, F)
            elif cmd == "frame":
                out, c = _cmd_frame(args, p, F)
            else:
                from .okutsu import krasner_constant

                out, c = {"poly": str(F), "krasner": format_val(krasner_constant(_chain(F, p, args.sv_bound)))}, EXIT_OK
            results.append(out)
            code = max(code, c)
        return (results[0] if args.poly != "-" else results), code
    F, G = _monic(args.F), _monic(args.G)
    if cmd == "dist":
        from .okutsu import distance

        cF, cG = _chain(F, p, args.sv_bound), _chain(G, p, args.sv_bound)
        return {"F": str(F), "G": str(G), "u": format_val(distance(F, G, p, cF, cG))}, EXIT_OK
    if cmd == "equiv":
        from .okutsu import okutsu_equivalent

        cF, cG = _chain(F, p, args.sv_bound), _chain(G, p, args.sv_bound)
        return {"F": str(F), "G": str(G), "equivalent": okutsu_equivalent(F, G, p, cF, cG)}, EXIT_OK
    if cmd == "hos":
        from .okutsu import is_hos_key

        cF = _chain(F, p, args.sv_bound)
        return {"F": str(F), "g": str(G), "hos_key": is_hos_key(cF, G, seed=args.seed)}, EXIT_OK
    raise _Usage(f"unknown command {cmd!r}")


def _cmd_corpus(args, stdin):
    from .okutsu import distance, okutsu_equivalent

    primes = [PBase(p).p for p in (args.primes or [])]
    if not primes:
        raise _Usage("corpus needs at least one prime (-p, repeatable)")
    if args.max_degree is not None:
        from .corpus import enumerate_monic

        family = list(enumerate_monic(args.max_degree, args.height))
    else:
        texts = args.polys or [ln.strip() for ln in stdin if ln.strip()]
        family = [_monic(t) for t in texts]
    out = []
    for p in primes:
        members, skipped = [], []
        for F in family:
            rep = build_chains(F, p, args.sv_bound)
            (members if rep.is_irreducible() else skipped).append((F, rep))
        chains = [rep.chain for _F, rep in members]
        polys = [F for F, _rep in members]
        classes: list[list[int]] = []
        for i, F in enumerate(polys):
            for cl in classes:
                j = cl[0]
                if okutsu_equivalent(polys[j], F, p, chains[j], chains[i]):
                    cl.append(i)
                    break
            else:
                classes.append([i])
        dist = [
            [format_val(distance(F, G, p, chains[i], chains[j])) if i != j else "inf"
             for j, G in enumerate(polys)]
            for i, F in enumerate(polys)
        ]
        out.append({
            "prime": p,
            "members": [str(F) for F in polys],
            "classes": [[str(polys[i]) for i in cl] for cl in classes],
            "distances": dist,
            "skipped": [str(F) for F, _ in skipped],
        })
    return (out[0] if len(out) == 1 else out), EXIT_OK


def run(argv: Sequence[str], stdin=None, stdout=None, stderr=None) -> int:
    """Run the CLI on ``argv``; returns the exit code."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    ap = _build_parser()
    fmt = "text" if "--text" in argv else "json"

    def fail(kind: str, msg: str, code: int, extra: Optional[dict] = None) -> int:
        if fmt == "json":
            err = {"error": kind, "message": msg}
            err.update(extra or {})
            print(json.dumps(err), file=stderr)
        else:
            print(f"valfram: {kind}: {msg}", file=stderr)
        return code

    try:
        args = ap.parse_args(list(argv))
        if args.cmd is None:
            raise _Usage("a subcommand is required")
        env_seed = os.environ.get("VALFRAM_SEED")
        if env_seed is not None:
            args.seed = int(env_seed)
        elif args.seed is None:
            args.seed = DEFAULT_SEED
        fmt = args.fmt or "json"
        result, code = _dispatch(args, stdin)
    except _Usage as exc:
        return fail("usage", str(exc), EXIT_USAGE)
    except ParseError as exc:
        return fail("parse", str(exc), EXIT_USAGE, {"position": exc.pos, "input": exc.text})
    except NeedsMorePrecision as exc:
        return fail("needs-more-precision", str(exc), EXIT_PRECISION)
    except (InvalidOperand, ValueError) as exc:
        return fail("domain", str(exc), EXIT_DOMAIN)
    if fmt == "json":
        print(json.dumps(result, indent=2), file=stdout)
    else:
        print(_text(result), file=stdout)
    return code


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":  # pragma: no cover
    main()
