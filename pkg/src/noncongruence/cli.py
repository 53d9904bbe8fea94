"""Command-line interface.

Exit codes: 0 success, 1 negative mathematical outcome (no witness found,
pair not coprime, inequivalent, closure inconclusive, ...), 2 usage, parse
or bound errors.  Environment variables MF_MAX_ORBIT and MF_MODULUS_CAP
set the default orbit-size and modulus bounds.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import __version__
from .catalog import build
from .chartable import dixon_table, format_table, frobenius_count, frobenius_sum, read_table, sum1_bound
from .corpus import corpus_run
from .errors import AuditMismatch, BoundExceeded, ClosureUnstable, FormatError, NoncongruenceError
from .group import PermGroup, center, conjugacy_classes, group_from_generators, write_group_text
from .modular import (
    classify,
    congruence_closure,
    cusp_data,
    default_max_orbit,
    default_modulus_cap,
    orbit_and_coset_table,
    presentation_class,
    stabilizer_words,
)
from .perm import Permutation, format_cycles, parse_cycles, parse_pair
from .reports import classification_report, format_report, witness_report
from .triples import (
    abelian_obstruction,
    alternating_witness,
    nielsen_equivalent,
    ppd,
    search_coprime_pair,
    search_smooth_pair,
    smooth_pair_check,
    verify_witness,
)

EPILOG = """\
pairs are written "(1 2 3 4 5);(1 2 3)" (1-based cycle notation).
groups: A<n> S<n> C<n> D<n> PSL2(p) SL2(p), products like C2xC2, Q8,
or file:path.grp.  Environment: MF_MAX_ORBIT (default 1000000),
MF_MODULUS_CAP (default 10000).
"""


class UsageError(Exception):
    pass


def _group(args) -> PermGroup:
    if not args.group:
        raise UsageError("--group is required")
    return build(args.group)


def _pair(g: PermGroup, text: str):
    x, y = parse_pair(text, g.degree)
    g.check_member(x, y)
    return x, y


def _emit(args, human_lines, report=None):
    if getattr(args, "format", "human") == "report" and report is not None:
        text = format_report(report)
        sys.stdout.write(text)
    else:
        text = "\n".join(human_lines) + "\n"
        sys.stdout.write(text)
    out = getattr(args, "out", None)
    if out and report is not None:
        Path(out).write_text(format_report(report), encoding="utf-8")


def _class_token(table, tok: str) -> int:
    """1-based index, or an order label like 47A (first class of order 47 is A)."""
    if tok.isdigit():
        k = int(tok) - 1
        if not 0 <= k < len(table.orders):
            raise UsageError(f"class index {tok} out of range 1..{len(table.orders)}")
        return k
    digits = tok.rstrip("ABCDEFGHIJKLMNOPQRSTUVWXYZ")
    letters = tok[len(digits):]
    if not digits.isdigit() or len(letters) != 1:
        raise UsageError(f"bad class label {tok!r}")
    ks = [k for k, o in enumerate(table.orders) if o == int(digits)]
    pos = ord(letters) - ord("A")
    if pos >= len(ks):
        raise UsageError(f"no class {tok}")
    return ks[pos]


# -- commands -----------------------------------------------------------------

def cmd_group_info(args):
    g = _group(args)
    cc = conjugacy_classes(g)
    lines = [
        f"group: {g.name}",
        f"degree: {g.degree}",
        f"order: {g.order()}",
        f"exponent: {g.exponent()}",
        f"abelian: {'true' if g.is_abelian() else 'false'}",
        f"center_order: {center(g).order()}",
        f"classes: {len(cc)}",
    ]
    if args.emit_file:
        sys.stdout.write(write_group_text(g.generators, comment=g.name))
        return 0
    lines += [f"generator: {format_cycles(h)}" for h in g.generators]
    _emit(args, lines)
    return 0


def cmd_classes(args):
    g = _group(args)
    cc = conjugacy_classes(g)
    lines = [f"{'class':>5} {'order':>5} {'size':>8}  representative"]
    for k in range(len(cc)):
        lines.append(f"{k + 1:>5} {cc.orders[k]:>5} {cc.sizes[k]:>8}  {format_cycles(cc.reps[k])}")
    _emit(args, lines)
    return 0


def cmd_chartab(args):
    g = _group(args)
    t = dixon_table(g)
    if args.format == "report" or args.out:
        text = format_table(t)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        if args.format == "report":
            sys.stdout.write(text)
            return 0
    cells = [[_value_str(v) for v in row] for row in t.values]
    head = [str(o) for o in t.orders]
    width = max(len(c) for row in cells + [head] for c in row)
    lines = ["order " + " ".join(h.rjust(width) for h in head),
             "size  " + " ".join(str(s).rjust(width) for s in t.sizes)]
    for i, row in enumerate(cells):
        lines.append(f"X{i + 1:<4} " + " ".join(c.rjust(width) for c in row))
    _emit(args, lines)
    return 0


def _value_str(v) -> str:
    if v.is_rational():
        return str(v.to_int())
    z = complex(v)
    return f"{z.real:.3f}{z.imag:+.3f}i"


def cmd_frobenius(args):
    if args.table:
        t = read_table(args.table, verify=not args.no_verify)
    else:
        t = dixon_table(_group(args))
    i, j, k = (_class_token(t, tok) for tok in args.classes)
    direct = args.direct
    s = frobenius_sum(t, i, j, k, invert_last=not direct)
    # with chi(c_k) the count is of solutions x y = c_k^-1
    kk = t.inverse_map[k] if direct else k
    count = frobenius_count(t, i, j, kk)
    b = sum1_bound(t, i, j, k, conjugate_last=not direct)
    lines = [
        f"classes: {i + 1} {j + 1} {k + 1} (orders {t.orders[i]} {t.orders[j]} {t.orders[k]})",
        f"convention: {'chi(c_k)' if direct else 'chi(c_k^-1)'}",
        f"sum: {s}",
        f"count: {count.count}",
        f"sum1_bound: {b.exact} ~ {float(b.exact):.6g} ({'< 1' if b.below_one else '>= 1'})",
    ]
    _emit(args, lines)
    return 0 if count.count > 0 else 1


def _parse_z(g: PermGroup, text: str | None):
    if text is None or text == "center":
        return center(g)
    gens = [parse_cycles(s, g.degree) for s in text.split(";") if s.strip()]
    g.check_member(*gens)
    return group_from_generators(gens) if gens else group_from_generators([g.identity()])


def cmd_triples_search(args):
    g = _group(args)
    if args.require_smooth is not None:
        z = _parse_z(g, args.require_smooth)
        w = search_smooth_pair(g, z, args.budget, args.seed, args.workers)
    else:
        if g.order() == 1:
            print("no witness (trivial group)")
            return 1
        e = abelian_obstruction(g)
        if e is not None:
            print(f"no witness (abelian obstruction delta={e})")
            return 1
        w = search_coprime_pair(g, args.budget, args.seed, args.workers)
    if w is None:
        print(f"no witness within budget {args.budget} (seed {args.seed})")
        return 1
    rep = verify_witness(g, w.x, w.y)
    report = witness_report(g.name, w.x, w.y, rep, smooth_for=w.smooth_for, seed=w.seed, iteration=w.iteration)
    lines = [
        f"x: {format_cycles(w.x)}",
        f"y: {format_cycles(w.y)}",
        f"orders: {' '.join(map(str, w.orders))}",
        f"delta: {w.delta}",
        f"generates: {'true' if w.generates else 'false'}",
    ]
    if w.smooth_for:
        lines.append(f"smooth_for: {w.smooth_for}")
    _emit(args, lines, report)
    return 0


def cmd_triples_verify(args):
    g = _group(args)
    x, y = _pair(g, args.pair)
    table = None
    if args.table:
        table = read_table(args.table)
    elif args.frobenius:
        table = dixon_table(g)
    rep = verify_witness(g, x, y, table)
    lines = [
        f"orders: {' '.join(map(str, rep.orders))}",
        f"delta: {rep.delta}",
        f"gcds: {' '.join(map(str, rep.gcds))}",
        f"coprime: {'true' if rep.coprime else 'false'}",
        f"generates: {'true' if rep.generates else 'false'}",
    ]
    if rep.frobenius is not None:
        lines.append(f"frobenius_count: {rep.frobenius.count}")
    _emit(args, lines, witness_report(g.name, x, y, rep))
    return 0 if rep.coprime and rep.generates else 1


def cmd_witness_alt(args):
    w = alternating_witness(args.n)
    g = build(f"A{args.n}")
    rep = verify_witness(g, w.u, w.v)
    lines = [
        f"u: {format_cycles(w.u)}",
        f"v: {format_cycles(w.v)}",
        f"orders: {' '.join(map(str, w.orders))}",
        f"uv_cycle_type: {' '.join(map(str, w.uv_cycle_type))}",
        f"conjugation: {w.conjugation}",
        f"delta: {rep.delta}",
        f"generates: {'true' if rep.generates else 'false'}",
    ]
    _emit(args, lines, witness_report(g.name, w.u, w.v, rep, conjugation=w.conjugation))
    return 0 if rep.coprime and rep.generates else 1


def cmd_ppd(args):
    r = ppd(args.a, args.d)
    if r.exceptional:
        print("exceptional (no primitive prime divisor)")
        return 1
    print(r.prime)
    return 0


def cmd_smooth(args):
    g = _group(args)
    x, y = _pair(g, args.pair)
    z = _parse_z(g, args.z)
    ok = smooth_pair_check(g, z, x, y)
    print("true" if ok else "false")
    return 0 if ok else 1


def cmd_nielsen(args):
    g = _group(args)
    p1 = _pair(g, args.pair)
    p2 = _pair(g, args.other)
    r = nielsen_equivalent(g, p1, p2, args.bound, mod_inn=args.mod_inn)
    lines = [r.status]
    if r.word is not None:
        lines.append(f"certificate: {r.word or '(empty)'}")
    lines.append(f"explored: {r.explored}")
    _emit(args, lines)
    return 0 if r.status == "equivalent" else 1


def _orbit(args, g, x, y):
    return orbit_and_coset_table(g, presentation_class(g, x, y), args.max_orbit)


def cmd_orbit(args):
    g = _group(args)
    x, y = _pair(g, args.pair)
    o = _orbit(args, g, x, y)
    cd = cusp_data(o)
    lines = [
        f"index_gamma: {len(o)}",
        f"cusp_widths: {' '.join(map(str, cd.widths))}",
        f"level: {cd.level}",
        f"base_width: {cd.base_width}",
        f"sigma_S: {format_cycles(Permutation(o.sigma_S))}",
        f"sigma_T: {format_cycles(Permutation(o.sigma_T))}",
        f"stabilizer_generators: {len(stabilizer_words(o))}",
    ]
    if args.points:
        for i in range(len(o)):
            px, py = o.pair(i)
            lines.append(f"point {i + 1}: {format_cycles(px)};{format_cycles(py)}")
    _emit(args, lines)
    return 0


def _closure_lines(res):
    lines = [
        f"index_gamma: {res.index_gamma}",
        f"cusp_widths: {' '.join(map(str, res.cusp_widths))}",
        f"level: {res.level}",
    ]
    for m, idx in res.schedule:
        lines.append(f"closure index mod {m}: {idx}")
    if res.stable_from is not None:
        lines.append(f"stable_from: {res.stable_from}")
    lines.append(f"index_closure: {res.index_closure}")
    if res.criterion_verdict is not None:
        lines.append(f"criterion_verdict: {'true' if res.criterion_verdict else 'false'}")
    lines.append(res.verdict)
    return lines


def cmd_closure(args):
    g = _group(args)
    x, y = _pair(g, args.pair)
    t0 = time.perf_counter()
    res = congruence_closure(_orbit(args, g, x, y), modulus_cap=args.modulus_cap)
    report = classification_report(g.name, x, y, res, time.perf_counter() - t0)
    _emit(args, _closure_lines(res), report)
    return 0


def cmd_classify(args):
    g = _group(args)
    x, y = _pair(g, args.pair)
    t0 = time.perf_counter()
    res = classify(g, x, y, audit=args.audit, max_orbit=args.max_orbit, modulus_cap=args.modulus_cap)
    report = classification_report(g.name, x, y, res, time.perf_counter() - t0)
    _emit(args, _closure_lines(res), report)
    return 0


def cmd_corpus_run(args):
    reports = corpus_run(args.manifest, args.seed, args.max_orbit, args.modulus_cap)
    failed = 0
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
    for r in reports:
        if args.out:
            name = r["group"].replace("(", "_").replace(")", "") + ".report"
            Path(args.out, name).write_text(format_report(r), encoding="utf-8")
        if args.format == "report":
            sys.stdout.write(format_report(r))
        else:
            print(f"{r['status']:4}  {r['group']:<10} {r['classes']:>4} classes  "
                  f"congruence={r['congruence']} noncongruence={r['noncongruence']} "
                  f"totally={r['totally_noncongruence']}  expect {r['expect']}")
        failed += r["status"] != "pass"
    return 1 if failed else 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "report"), default="human",
                        help="human-readable output or a key: value report")
    common.add_argument("--out", help="also write the report to this path")

    grp = argparse.ArgumentParser(add_help=False)
    grp.add_argument("--group", "-g", help="group id, e.g. A5, PSL2(7), C2xC2, file:g.grp")

    bounds = argparse.ArgumentParser(add_help=False)
    bounds.add_argument("--max-orbit", type=int, default=None,
                        help="orbit size bound (default $MF_MAX_ORBIT or 1000000)")
    bounds.add_argument("--modulus-cap", type=int, default=None,
                        help="largest modulus for closure indices (default $MF_MODULUS_CAP or 10000)")

    p = argparse.ArgumentParser(
        prog="noncongruence",
        description="Coprime generating pairs and congruence classification of two-generator presentations.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("group", help="group information")
    gsub = g.add_subparsers(dest="action", required=True)
    s = gsub.add_parser("info", parents=[common, grp], help="order, exponent, center, generators")
    s.add_argument("--emit-file", action="store_true", help="print the group in group-file format")
    s.set_defaults(func=cmd_group_info)

    s = sub.add_parser("classes", parents=[common, grp], help="conjugacy classes")
    s.set_defaults(func=cmd_classes)

    s = sub.add_parser("chartab", parents=[common, grp], help="character table (Dixon-Schur)")
    s.set_defaults(func=cmd_chartab)

    s = sub.add_parser("frobenius", parents=[common, grp], help="Frobenius character sum and triple count")
    s.add_argument("classes", nargs=3, help="class indices (1-based) or labels like 47A")
    s.add_argument("--table", help="character table file instead of computing one")
    s.add_argument("--no-verify", action="store_true", help="skip orthogonality checks on --table")
    s.add_argument("--direct", action="store_true",
                   help="use chi(c_k) in the last slot (xyz = 1 form) instead of chi(c_k^-1)")
    s.set_defaults(func=cmd_frobenius)

    t = sub.add_parser("triples", help="coprime generating pairs")
    tsub = t.add_subparsers(dest="action", required=True)
    s = tsub.add_parser("search", parents=[common, grp], help="randomized search for a coprime pair")
    s.add_argument("--budget", type=int, default=2000, help="iterations (default 2000)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--require-smooth", metavar="Z", nargs="?", const="center", default=None,
                   help="search for a pair whose orders are unchanged modulo the central "
                        "subgroup Z ('center' or generators separated by ';')")
    s.set_defaults(func=cmd_triples_search)
    s = tsub.add_parser("verify", parents=[common, grp], help="orders, delta and generation of a pair")
    s.add_argument("--pair", required=True)
    s.add_argument("--table", help="character table file for the Frobenius count")
    s.add_argument("--frobenius", action="store_true", help="compute the character table for the count")
    s.set_defaults(func=cmd_triples_verify)

    w = sub.add_parser("witness", help="explicit constructions")
    wsub = w.add_subparsers(dest="action", required=True)
    s = wsub.add_parser("alt", parents=[common], help="coprime pair for A_n")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_witness_alt)

    s = sub.add_parser("ppd", help="largest primitive prime divisor of a^d - 1")
    s.add_argument("a", type=int)
    s.add_argument("d", type=int)
    s.set_defaults(func=cmd_ppd)

    s = sub.add_parser("smooth", parents=[grp], help="orders of x, y, xy unchanged modulo Z")
    s.add_argument("--pair", required=True)
    s.add_argument("--z", default="center", help="'center' or generators separated by ';'")
    s.set_defaults(func=cmd_smooth)

    s = sub.add_parser("nielsen", parents=[common, grp], help="Nielsen equivalence of two pairs")
    s.add_argument("--pair", required=True)
    s.add_argument("--other", required=True)
    s.add_argument("--bound", type=int, default=10**5)
    s.add_argument("--mod-inn", action="store_true", help="identify pairs up to conjugation")
    s.set_defaults(func=cmd_nielsen)

    for name, func, helptext in (
        ("orbit", cmd_orbit, "SL2(Z)-orbit of a presentation class"),
        ("closure", cmd_closure, "congruence closure of the stabilizer"),
        ("classify", cmd_classify, "congruence / noncongruence / totally-noncongruence"),
    ):
        s = sub.add_parser(name, parents=[common, grp, bounds], help=helptext)
        s.add_argument("--pair", required=True)
        if name == "classify":
            s.add_argument("--audit", action="store_true",
                           help="run the closure pipeline even when the coprime criterion applies")
        if name == "orbit":
            s.add_argument("--points", action="store_true", help="list the orbit points")
        s.set_defaults(func=func)

    c = sub.add_parser("corpus", help="manifest-driven runs")
    csub = c.add_subparsers(dest="action", required=True)
    s = csub.add_parser("run", parents=[bounds], help="classify every manifest entry")
    s.add_argument("--manifest", help="manifest file (default: the shipped one)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="directory for per-group reports")
    s.add_argument("--format", choices=("human", "report"), default="human")
    s.set_defaults(func=cmd_corpus_run)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for attr, default in (("max_orbit", default_max_orbit), ("modulus_cap", default_modulus_cap)):
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, default())
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ClosureUnstable, AuditMismatch) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 1
    except (FormatError, BoundExceeded, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NoncongruenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
