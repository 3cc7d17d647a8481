"""Solve, measure and catalog ranking datasets from the command line.

Exit codes: 0 success, 1 data or solver error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import generators, ingest, linalg, modelcard, plots, query
from .core import rank_vector
from .lop import DEFAULT_CAP
from .rankability import analyze

class DataError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None


def _write(text: str, out) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


GENSPEC_PREFIX = "# genspec: "


def _load_matrix(path: str):
    """Matrix from a text file or a model card, plus the generator spec if one is recorded."""
    text = _read(path)
    if text.lstrip().startswith("{"):
        card = modelcard.parse(text)
        return card.D, card.genspec
    genspec = None
    for line in text.splitlines():
        if line.startswith(GENSPEC_PREFIX):
            try:
                genspec = generators.GenSpec(**json.loads(line[len(GENSPEC_PREFIX):]))
            except (ValueError, TypeError) as exc:
                raise DataError(f"bad genspec comment: {exc}") from None
    return ingest.parse_matrix(text), genspec


def cmd_generate(args):
    if args.kind in generators.STOCHASTIC and args.seed is None:
        raise UsageError(f"--seed is required for --kind {args.kind}")
    try:
        spec = generators.GenSpec(
            kind=args.kind,
            n=args.n,
            percent=args.percent,
            lo=args.lo,
            hi=args.hi,
            block_begin=args.block_begin,
            block_end=args.block_end,
            p_upset=args.p_upset,
            games_per_pair=args.games_per_pair,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    D = generators.generate(spec)
    header = GENSPEC_PREFIX + json.dumps(spec.to_dict(), sort_keys=True) + "\n"
    if args.unweighted or args.add_percent or args.remove_percent:
        header = ""  # post-processed: the spec alone no longer reproduces the matrix
    if args.unweighted:
        D = generators.unweighted(D)
    if args.add_percent or args.remove_percent:
        if args.seed is None:
            raise UsageError("--add-percent/--remove-percent need --seed")
        if not (0 <= args.add_percent <= 100 and 0 <= args.remove_percent <= 100):
            raise UsageError("percentages must lie in [0, 100]")
        D = generators.perturb(D, args.add_percent, args.remove_percent, args.seed)
    _write(header + ingest.format_matrix(D), args.out)


def cmd_ingest(args):
    text = _read(args.input)
    if args.kind == "games":
        D = ingest.ingest_games(ingest.read_games_csv(text))
    else:
        features, names, table = ingest.read_features_csv(text)
        lower = set(args.lower_is_better.split(",")) if args.lower_is_better else set()
        unknown = lower - set(features)
        if unknown:
            raise DataError(f"unknown feature(s) in --lower-is-better: {', '.join(sorted(unknown))}")
        D = ingest.ingest_features(names, table, [f not in lower for f in features])
    _write(ingest.format_matrix(D), args.out)


def cmd_solve(args):
    D, genspec = _load_matrix(args.input)
    analysis = analyze(D, args.method, args.cap, args.workers)
    card = modelcard.card_from_analysis(D, analysis, args.dataset_id, args.source, genspec)
    _write(modelcard.emit(card), args.out)


def cmd_rank(args):
    rows = ingest.read_games_csv(_read(args.input))
    teams = [t for t in args.teams.split(",") if t] if args.teams else []
    names, records = ingest.games_to_records(rows, teams)
    if len(names) < 2:
        raise DataError("rating systems need at least two teams (see --teams)")
    fn = linalg.massey if args.method == "massey" else linalg.colley
    res = fn(records, len(names), epsilon=args.epsilon, cap=args.cap)
    tree = {
        "method": args.method,
        "exact": res.exact,
        "teams": names,
        "ratings": [_num(r) for r in res.ratings],
        "ranking": rank_vector(res.ranking),
        "ystar": [[_num(y) for y in row] for row in res.ystar],
        "pseudo_optimal": [rank_vector(r) for r in res.pseudo_optimal],
    }
    _write(modelcard._dump(tree, 0) + "\n", args.out)


def _num(x):
    if isinstance(x, float):
        return Fraction(repr(x))
    return x


def cmd_measures(args):
    D, _ = _load_matrix(args.input)
    a = analyze(D, args.method, args.cap, args.workers)
    m = a.measures
    lines = [
        f"method={args.method}",
        f"k={'NA' if m.k is None else ingest.format_rational(m.k)}",
        f"p_k={'NA' if m.p_k is None else m.p_k}",
        f"p={m.p}",
        f"tau={m.tau}",
        f"beta={ingest.format_rational(m.beta)}",
        f"complete={'true' if a.optimal.complete else 'false'}",
    ]
    _write("\n".join(lines) + "\n", args.out)


def cmd_card(args):
    text = _read(args.input)
    card = modelcard.parse(text)
    canonical = modelcard.emit(card)
    if args.check:
        if canonical != text:
            raise DataError(f"{args.input} is valid but not in canonical form")
        return
    _write(canonical, args.out)


def cmd_filter(args):
    cards = modelcard.load_catalog(args.catalog)
    ids = query.filter_cards(cards, args.query)
    _write("".join(f"{i}\n" for i in ids), args.out)


def cmd_plot(args):
    card = modelcard.parse(_read(args.card))
    if args.kind == "pixel":
        svg = plots.pixel_plot(card)
    else:
        left, right = plots.select_pair(card, args.pair)
        svg = plots.spaghetti_plot(card, left, right)
    _write(svg, args.out)


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rankkit", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate an artificial dominance matrix")
    g.add_argument("--kind", required=True, choices=generators.KINDS)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--percent", type=float, default=0)
    g.add_argument("--lo", type=int, default=1)
    g.add_argument("--hi", type=int, default=1)
    g.add_argument("--block-begin", type=int)
    g.add_argument("--block-end", type=int)
    g.add_argument("--p-upset", type=float, default=0.0)
    g.add_argument("--games-per-pair", type=int, default=1)
    g.add_argument("--seed", type=int)
    g.add_argument("--unweighted", action="store_true", help="binarize the result")
    g.add_argument("--add-percent", type=float, default=0)
    g.add_argument("--remove-percent", type=float, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    i = sub.add_parser("ingest", help="convert games or features CSV into a dominance matrix")
    i.add_argument("input")
    i.add_argument("--kind", choices=("games", "features"), default="games")
    i.add_argument("--lower-is-better", help="comma-separated feature names where smaller wins")
    i.add_argument("--out")
    i.set_defaults(func=cmd_ingest)

    for name, func, helptext in (
        ("solve", cmd_solve, "solve an instance and emit its model card"),
        ("measures", cmd_measures, "print the rankability measures"),
    ):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("input", help="matrix text file or model card")
        s.add_argument("--method", choices=("lop", "hillside", "k") if name == "solve" else ("lop", "hillside"),
                       default="lop")
        s.add_argument("--cap", type=int, default=DEFAULT_CAP)
        s.add_argument("--workers", type=int, default=1)
        s.add_argument("--out")
        if name == "solve":
            s.add_argument("--dataset-id", type=int, default=0)
            s.add_argument("--source", default="user")
        s.set_defaults(func=func)

    r = sub.add_parser("rank", help="Massey or Colley ratings from a games CSV")
    r.add_argument("input")
    r.add_argument("--method", choices=("massey", "colley"), default="massey")
    r.add_argument("--teams", help="comma-separated team names to include even without games")
    r.add_argument("--epsilon", type=float, help="rating gap treated as a tie")
    r.add_argument("--cap", type=int, default=DEFAULT_CAP)
    r.add_argument("--out")
    r.set_defaults(func=cmd_rank)

    c = sub.add_parser("card", help="validate a model card and print it canonically")
    c.add_argument("input")
    c.add_argument("--check", action="store_true", help="fail unless the file is already canonical")
    c.add_argument("--out")
    c.set_defaults(func=cmd_card)

    f = sub.add_parser("filter", help="ids of catalog cards matching a query")
    f.add_argument("catalog")
    f.add_argument("query")
    f.add_argument("--out")
    f.set_defaults(func=cmd_filter)

    pl = sub.add_parser("plot", help="SVG pixel plot of X* or spaghetti plot of two rankings")
    pl.add_argument("card")
    pl.add_argument("--kind", choices=("pixel", "spaghetti"), default="pixel")
    pl.add_argument("--pair", default="farthest", help="farthest, closest or i,j")
    pl.add_argument("--out")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if getattr(args, "cap", DEFAULT_CAP) < 1:
        parser.error("--cap must be at least 1")
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be at least 1")
    try:
        args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (DataError, ValueError, OSError, ArithmeticError) as exc:
        print(f"rankkit: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
