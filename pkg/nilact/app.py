import argparse
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from .algebra.abelian import ab_to_table, aut_group, enumerate_automorphisms
from .algebra.actions import gamma_series
from .algebra.frattini import abelian_frattini_factor, frattini_factor, frattini_subgroup, maximal_subgroups
from .algebra.grpcore import lower_central_series
from .algebra.homotopy import eshp, intersection_eshp, sharp
from .algebra.localize import localize_action, localize_group
from .cli.catalog import load_catalog
from .cli.render import format_value, pairs, render_group, render_reports, render_series, subgroup_line
from .cli.suite import SuiteOptions, provenance_map, run_suite
from .core.config import settings
from .core.errors import EXIT_OK, EXIT_USAGE, NilactError, NotApplicable
from .models.space import EMSpace
from .schemas.catalog import Catalog, EntryKind

logger = logging.getLogger("nilact")


def _group(catalog: Catalog, name: str):
    entry = catalog.get(name)
    if entry.kind is EntryKind.PERM_GROUP:
        return entry.body.table
    if entry.kind is EntryKind.AB_GROUP:
        return ab_to_table(entry.body)
    raise NotApplicable(f"{name} is a {entry.kind.value}, not a group")


def _abgroup(catalog: Catalog, name: str):
    entry = catalog.get(name)
    if entry.kind is not EntryKind.AB_GROUP:
        raise NotApplicable(f"{name} is a {entry.kind.value}, not an abelian group")
    return entry.body


def _action(catalog: Catalog, name: str):
    entry = catalog.get(name)
    if entry.kind is not EntryKind.ACTION:
        raise NotApplicable(f"{name} is a {entry.kind.value}, not an action")
    return entry.body.action


def cmd_frattini(args, catalog: Catalog) -> int:
    G = _group(catalog, args.name)
    print(render_group(G))
    print(f"maximal={len(maximal_subgroups(G))}")
    print(f"frattini {subgroup_line(frattini_subgroup(G))}")
    print(f"factor order={frattini_factor(G).group.order}")
    entry = catalog.get(args.name)
    if entry.kind is EntryKind.AB_GROUP and entry.body.is_p_group():
        factor = abelian_frattini_factor(entry.body)
        print(f"tensor={factor.tensor.name} prime={factor.prime}")
    return EXIT_OK


def cmd_lcs(args, catalog: Catalog) -> int:
    G = _group(catalog, args.name)
    for line in render_series(args.name, lower_central_series(G, args.max_depth)):
        print(line)
    return EXIT_OK


def cmd_series(args, catalog: Catalog) -> int:
    action = _action(catalog, args.name)
    for line in render_series(args.name, gamma_series(action, args.max_depth)):
        print(line)
    return EXIT_OK


def cmd_localize(args, catalog: Catalog) -> int:
    entry = catalog.get(args.name)
    if entry.kind is EntryKind.ACTION:
        localized, loc = localize_action(entry.body.action, args.prime)
        print(f"localization={args.name} prime={args.prime} order={loc.group.order}")
        for line in render_series(localized.name, gamma_series(localized, args.max_depth)):
            print(line)
        return EXIT_OK
    loc = localize_group(_group(catalog, args.name), args.prime)
    print(f"localization={args.name} prime={args.prime} {subgroup_line(loc.sylow)}")
    return EXIT_OK


def cmd_aut(args, catalog: Catalog) -> int:
    A = _abgroup(catalog, args.name)
    automorphisms = enumerate_automorphisms(A)
    print(f"group={A.label} automorphisms={len(automorphisms)}")
    if len(automorphisms) <= settings.cap:
        auts = aut_group(A)
        print(pairs({"generators": [auts.group.label(g) for g in auts.group.generators]}))
    return EXIT_OK


def cmd_eshp(args, catalog: Catalog) -> int:
    X = EMSpace(coeff=_abgroup(catalog, args.name), degree=args.degree)
    primes = [args.prime] if args.prime else list(X.coeff.primes)
    for p in primes:
        kernel = eshp(X, p)
        series = lower_central_series(kernel.group)
        print(pairs({"space": X.label, "prime": p, "order": kernel.order, "verdict": str(series.verdict)}))
        for f in kernel.automorphisms:
            print(f"  {f}")
    if not args.prime:
        print(pairs({"space": X.label, "intersection": intersection_eshp(X).order, "sharp": sharp(X).order}))
    return EXIT_OK


def cmd_verify(args, catalog: Catalog) -> int:
    options = SuiteOptions(degree=args.degree, jobs=args.jobs or settings.jobs)
    run = run_suite(catalog, args.scope, options)
    for line in render_reports(run.reports, as_json=args.json, timings=args.timings):
        print(line)
    logger.info("outcomes %s", run.counts())
    return run.exit_code


def cmd_catalog(args, catalog: Catalog) -> int:
    for entry in catalog:
        values = {"name": entry.name, "kind": entry.kind.value, "provenance": entry.provenance.value}
        if entry.citation:
            values["citation"] = entry.citation
        values["summary"] = entry.summary
        print(pairs(values))
        if entry.kind is EntryKind.FIXTURE:
            print(f"  value={format_value(entry.body)}")
    return EXIT_OK


def cmd_provenance(args, catalog: Catalog) -> int:
    for check_id, label, statement, operation in provenance_map():
        print(pairs({"check": check_id, "label": label, "operation": operation, "statement": statement}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nilact", description="Nilpotent actions and self-equivalences of K(A,n)")
    parser.add_argument("--catalog", help="catalog file (default: the bundled one)")
    parser.add_argument("--cap", type=int, help="order cap for closures and tables")
    parser.add_argument("--log-level", default=None, help="logging level (default from NILACT_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("frattini", help="Frattini subgroup and factor of a group")
    p.add_argument("name")
    p.set_defaults(func=cmd_frattini)

    p = sub.add_parser("lcs", help="lower central series of a group")
    p.add_argument("name")
    p.add_argument("--max-depth", type=int)
    p.set_defaults(func=cmd_lcs)

    p = sub.add_parser("series", help="G-commutator series of an action")
    p.add_argument("name")
    p.add_argument("--max-depth", type=int)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("localize", help="p-localization of a nilpotent group or of an action")
    p.add_argument("name")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--max-depth", type=int)
    p.set_defaults(func=cmd_localize)

    p = sub.add_parser("aut", help="automorphism group of a finite abelian group")
    p.add_argument("name")
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("eshp", help="E#p(K(A,n)) for an abelian catalog group")
    p.add_argument("name")
    p.add_argument("--prime", type=int)
    p.add_argument("--degree", type=int, default=2)
    p.set_defaults(func=cmd_eshp)

    p = sub.add_parser("verify", help="run the verification suite over the catalog")
    p.add_argument("--scope", default="*", help="comma-separated glob patterns over check ids")
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--jobs", type=int)
    p.add_argument("--json", action="store_true")
    p.add_argument("--timings", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", help="catalog operations")
    catalog_sub = p.add_subparsers(dest="catalog_command", required=True)
    c = catalog_sub.add_parser("print", help="list catalog entries")
    c.set_defaults(func=cmd_catalog)

    p = sub.add_parser("provenance", help="check id -> statement -> operation table")
    p.set_defaults(func=cmd_provenance)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=(args.log_level or settings.log_level).upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.cap is not None:
        if args.cap < 1:
            parser.error("--cap must be positive")
        settings.cap = args.cap
    try:
        catalog = load_catalog(args.catalog)
        return args.func(args, catalog)
    except NilactError as exc:
        print(f"error: {exc.detail}", file=sys.stderr)
        return exc.status
    except ValidationError as exc:
        print(f"error: {exc.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
