"""Command-line interface.

Exit codes: 0 pass, 1 verification failure, 2 usage / bad input,
3 unknown scheme, 4 size cap exceeded.
"""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import analysis, verify
from .core import CapExceeded, Distribution, to_text
from .extractors import Scheme, UnknownScheme, builtin, builtin_names
from .tree import TreeError, parse_tree, show

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SCHEME, EXIT_CAP = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _add_scheme(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--scheme", help=f"builtin scheme: {', '.join(builtin_names())}")
    g.add_argument("--scheme-file", help="tree description file")
    p.add_argument("--output-alphabet", type=int, help="output alphabet D for --scheme-file")


def _add_dist(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--p", type=float, help="binary source <p, 1-p>")
    g.add_argument("--dist", help="comma-separated probabilities p0,p1,...")


def load_scheme(args) -> Scheme:
    if args.scheme:
        return builtin(args.scheme)
    with open(args.scheme_file) as fh:
        text = fh.read()
    tree = parse_tree(text, output_alphabet=args.output_alphabet)
    return Scheme(args.scheme_file, tree)


def load_dist(args, m: int, default=None) -> Distribution:
    if getattr(args, "dist", None):
        try:
            probs = [float(x) for x in args.dist.split(",")]
        except ValueError:
            raise UsageError(f"bad --dist {args.dist!r}") from None
        if abs(math.fsum(probs) - 1) > 1e-9 or any(p < 0 for p in probs):
            raise UsageError("--dist must be non-negative and sum to 1 within 1e-9")
        dist = Distribution.normalized(probs)
    elif getattr(args, "p", None) is not None:
        if not 0 <= args.p <= 1:
            raise UsageError("--p must lie in [0, 1]")
        dist = Distribution.bernoulli(args.p)
    elif default is not None:
        dist = default
    else:
        raise UsageError("a source distribution is required (--p or --dist)")
    if len(dist) != m:
        raise UsageError(f"distribution has {len(dist)} symbols, scheme expects {m}")
    return dist


def read_symbols(text: str, m: int) -> np.ndarray:
    """Digits of the source alphabet; whitespace ignored. Errors name line and column."""
    buf = np.frombuffer(text.encode("ascii", "replace"), dtype=np.uint8)
    digits = buf.astype(np.int64) - ord("0")
    space = np.isin(buf, np.frombuffer(b" \t\r\n\x0b\x0c", dtype=np.uint8))
    bad = ~space & ((digits < 0) | (digits >= m))
    if bad.any():
        pos = int(np.argmax(bad))
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        raise UsageError(f"invalid symbol {text[pos]!r} at line {line}, column {col}")
    return digits[~space]


def pack_bits(bits: np.ndarray) -> bytes:
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def unpack_bits(data: bytes, count: int) -> np.ndarray:
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))[:count]


# -- commands -----------------------------------------------------------------

def cmd_extract(args):
    s = load_scheme(args)
    if args.input and args.input != "-":
        with open(args.input) as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    x = read_symbols(text, s.alphabet_size)
    y = s.extract_array(x, args.depth)
    if args.format == "packed":
        if s.output_alphabet != 2:
            raise UsageError("--format packed needs a binary-output scheme")
        data = pack_bits(y)
        if args.output and args.output != "-":
            with open(args.output, "wb") as fh:
                fh.write(data)
        else:
            sys.stdout.buffer.write(data)
            sys.stdout.flush()
        print(f"bits={len(y)}", file=sys.stderr)
    else:
        out = to_text(y.tolist())
        if args.output and args.output != "-":
            with open(args.output, "w") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
            if out:
                sys.stdout.write("\n")
    return EXIT_OK


def cmd_verify(args):
    if args.kind == "golden":
        report = verify.golden_tables()
        print(report.render())
        return EXIT_OK if report.ok else EXIT_FAIL
    s = load_scheme(args)
    if args.kind == "extracting":
        report = verify.check_extracting(s, args.max)
        print(report.render())
        return EXIT_OK if report.ok else EXIT_FAIL
    if args.kind == "tree":
        ok = verify.check_uniform_outputs(s.tree, args.grid, args.seed, symbolic=args.symbolic)
        print(f"{s.name}: output nodes {'uniform' if ok else 'NOT uniform'}")
        return EXIT_OK if ok else EXIT_FAIL
    report = verify.check_structure(s.tree, args.n)
    status = "OK" if report.ok else f"FAIL {report.failure}"
    print(f"{s.name}: {report.strings} strings, {report.classes} classes, {status}")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_rate(args):
    if args.mode == "compare":
        grid = analysis.default_grid(args.step)
        names = args.schemes.split(",") if args.schemes else ["peres2", "peres3bit", "peres4bit_e4"]
        sys.stdout.write(analysis.compare_csv([builtin(n) for n in names], grid, args.depth))
        return EXIT_OK
    s = load_scheme(args)
    d = load_dist(args, s.alphabet_size)
    if args.mode == "recursion":
        if args.all:
            rep = analysis.rate_report(s, d, args.depth)
            for nu, r in enumerate(rep.rates):
                print(f"r_{nu}={r!r}")
            print(f"entropy_bound={rep.entropy_bound!r}")
            print(f"residual={rep.residual!r}")
        else:
            print(repr(analysis.truncated_rate(s, d, args.depth)))
    elif args.mode == "exact":
        print(repr(analysis.exact_rate(s, d, args.n)))
    else:
        if args.seed is None:
            raise UsageError("--seed is required for empirical rates")
        y = analysis.empirical_output(s, d, args.samples, args.seed)
        rate = len(y) / args.samples if args.samples else 0.0
        print(repr(rate))
        if args.chi_square:
            res = analysis.chi_square_blocks(y, s.output_alphabet, args.block)
            print(f"chi2={float(res.statistic)!r} pvalue={float(res.pvalue)!r}")
    return EXIT_OK


def cmd_entropy(args):
    if args.dist:
        d = load_dist(args, len(args.dist.split(",")))
    else:
        d = load_dist(args, 2)
    print(repr(analysis.shannon_entropy(d, args.base)))
    return EXIT_OK


def cmd_table(args):
    s = load_scheme(args)
    columns, rows = verify.scheme_columns(s)
    width = max(s.block_length, 1) + 2
    print("x".ljust(width) + "  ".join(c.ljust(4) for c in columns).rstrip())
    for block, row in rows.items():
        print(block.ljust(width) + "  ".join(row[c].ljust(4) for c in columns).rstrip())
    return EXIT_OK


def cmd_tree(args):
    with open(args.file) as fh:
        tree = parse_tree(fh.read(), output_alphabet=args.output_alphabet)
    if args.action == "validate":
        print(f"ok: {tree.num_blocks} leaves, {tree.size} internal nodes, "
              f"m={tree.alphabet_size}, b={tree.block_length}, D={tree.output_alphabet}")
    else:
        print(show(tree))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="peres", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="run an extractor over digit input")
    _add_scheme(p)
    p.add_argument("--input", help="input file (default stdin)")
    p.add_argument("--output", help="output file (default stdout)")
    p.add_argument("--format", choices=["digits", "packed"], default="digits")
    p.add_argument("--depth", type=int, help="truncate the recursion")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("verify", help="exhaustive and golden checks")
    p.add_argument("kind", choices=["extracting", "tree", "structure", "golden"])
    _add_scheme(p, required=False)
    p.add_argument("--max", type=int, default=8, help="longest input for 'extracting'")
    p.add_argument("--n", type=int, default=3, help="longest block string for 'structure'")
    p.add_argument("--grid", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--symbolic", action="store_true", help="also compare leaf monomials")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rate", help="output rates")
    p.add_argument("mode", choices=["recursion", "exact", "empirical", "compare"])
    _add_scheme(p, required=False)
    _add_dist(p)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--all", action="store_true", help="print every depth up to --depth")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--samples", type=int, default=10 ** 6)
    p.add_argument("--seed", type=int)
    p.add_argument("--chi-square", action="store_true")
    p.add_argument("--block", type=int, default=8)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--schemes", help="comma-separated builtin names for 'compare'")
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("entropy", help="Shannon entropy")
    _add_dist(p)
    p.add_argument("--base", type=int, default=2)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("table", help="component tables in printed row format")
    _add_scheme(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("tree", help="tree file tooling")
    p.add_argument("action", choices=["validate", "show"])
    p.add_argument("file")
    p.add_argument("--output-alphabet", type=int)
    p.set_defaults(func=cmd_tree)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("verify", "rate"):
        needs_scheme = not (args.command == "verify" and args.kind == "golden") and \
            not (args.command == "rate" and args.mode == "compare")
        if needs_scheme and not (args.scheme or args.scheme_file):
            parser.error("--scheme or --scheme-file is required")
        if args.command == "rate" and args.mode == "recursion" and args.depth is None:
            parser.error("--depth is required for 'rate recursion'")
    try:
        return args.func(args)
    except UnknownScheme as e:
        print(f"error: {e.args[0]}", file=sys.stderr)
        return EXIT_SCHEME
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, TreeError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
