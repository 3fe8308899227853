#!/usr/bin/env python3
"""
Vatican Designs Toolkit - Main Entry Point

Constructs, searches for and verifies Roman-k and Vatican crossover designs
built from sequencings of finite groups, and reproduces the published tables.

Exit codes: 0 success, 1 property not met, 2 usage or parse error,
3 search budget exhausted.
"""

import argparse
import csv
import io
import json
import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / 'src'))

import settings
from constructions import (ConstructionIntegrityError, halving_terrace_check, prescott_triple,
                           primitive_root_arrangement, primitive_root_certificate, walecki)
from designs import NonUniformDesignError, balance_report, read_design_csv
from golden_tables import TABLE_NAMES, compare_tables, vatican_design_for
from groups import make_group, parse_automorphism
from search import (MODE_ANY, MODE_GIVEN, MODE_TUPLE, STATUS_BUDGET_EXHAUSTED, SearchSpec,
                    checked_design, primitive_root_family, search_pseudoterraces, search_tuples, sweep_primes)
from triangles import (Arrangement, expand_pseudoterrace, is_terrace, pseudoterrace_k, roman_k,
                       singleton)

EXIT_OK = 0
EXIT_NOT_MET = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def status(message: str = ""):
    """Progress and verdicts go to stderr so stdout stays machine-readable"""
    print(message, file=sys.stderr)


def emit(args, text: str):
    if args.output:
        path = Path(args.output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        status(f"✓ Written to {path}")
    else:
        sys.stdout.write(text)


def build_group(config, descriptor: str):
    return make_group(descriptor,
                      max_order=settings.get(config, 'groups.max_order'),
                      table_max_order=settings.get(config, 'groups.table_max_order'))


def design_as_paper(design) -> str:
    return "".join(" ".join(str(v) for v in row) + "\n" for row in design.rows.tolist())


def verdict(report) -> str:
    if report.vatican:
        return "Vatican"
    if report.roman:
        return f"Roman-{report.max_k}" if report.max_k > 1 else "Roman (not Roman-2)"
    return "not Roman"


def export_extras(args, design=None, report=None, name="Design", description=()):
    if getattr(args, 'xlsx', None) and design is not None:
        from excel_exporter import ExcelExporter
        exporter = ExcelExporter()
        exporter.add_design(design, report, name=name, description=description)
        exporter.export(args.xlsx)
    if getattr(args, 'html', None) and design is not None:
        from html_renderer import render_report
        path = render_report(None, args.html, design=design, balance=report)
        status(f"✓ HTML report: {path}")


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------

def validate_construct(parser, args):
    if args.method in ('walecki', 'prescott', 'stacked') and args.t is None:
        parser.error(f"--method {args.method} needs --t")
    if args.method == 'stacked' and args.ell is None:
        parser.error("--method stacked needs --ell")
    if args.method == 'primitive-root':
        if args.p is None:
            parser.error("--method primitive-root needs --p")
        if args.rho is None and not args.halving:
            parser.error("--method primitive-root needs --rho or --halving")
    elif args.rho is not None or args.halving or args.p is not None:
        parser.error("--p, --rho and --halving only apply to --method primitive-root")
    if args.method != 'stacked' and args.ell is not None:
        parser.error("--ell only applies to --method stacked")


def cmd_construct(args, config) -> int:
    certificate = None
    description = []

    if args.method == 'walecki':
        arrangement = walecki(args.t)
        family = singleton(arrangement)
        status(f"✓ walecki({args.t}) = {arrangement}" + (" (terrace)" if is_terrace(arrangement) else ""))
    elif args.method == 'prescott':
        family = prescott_triple(args.t)
        status(f"✓ Prescott triple for Z{args.t} verified Roman (k = {roman_k(family)})")
    elif args.method == 'stacked':
        design, description = vatican_design_for(args.t, args.ell)
        report = balance_report(design)
        status(f"✓ {design.n} x {design.p} design: {verdict(report)}")
        for line in description:
            status(f"   {line}")
        return finish_design(args, design, report, description, [], None)
    else:
        if args.halving:
            certificate = halving_terrace_check(args.p)
            if certificate is None:
                status(f"❌ {(args.p + 1) // 2} is not a primitive root mod {args.p}")
                return EXIT_NOT_MET
        else:
            certificate = primitive_root_certificate(args.p, args.rho)
        arrangement = primitive_root_arrangement(args.p, certificate.rho)
        family = primitive_root_family(args.p, certificate.rho)
        marker = "*" if certificate.vatican else ""
        status(f"✓ rho={certificate.rho} mod {args.p}: {marker}{certificate.quadruple()}")

    # a pseudoterrace only becomes a design when expanded
    want_design = args.expand or (args.design and certificate is None)
    members = [arrangement] if certificate is not None else list(family)
    if not want_design:
        return finish_arrangements(args, members, family, certificate)

    design, report = checked_design(family)
    status(f"✓ {design.n} x {design.p} design: {verdict(report)}")
    return finish_design(args, design, report, description, members, certificate)


def finish_arrangements(args, members, family, certificate) -> int:
    fmt = args.format or 'paper'
    k = certificate.k if certificate is not None else roman_k(family)
    if fmt == 'json':
        payload = {
            'arrangements': [m.to_text() for m in members],
            'k': k,
            'certificate': certificate.to_dict() if certificate is not None else None,
        }
        emit(args, json.dumps(payload, indent=2) + "\n")
    elif fmt == 'csv':
        emit(args, "".join(m.to_text() + "\n" for m in members))
    else:
        lines = [str(m) for m in members]
        if certificate is not None:
            lines.append(("*" if certificate.vatican else "") + certificate.quadruple())
        else:
            lines.append(f"k = {k}")
        emit(args, "\n".join(lines) + "\n")

    if args.xlsx or args.html:
        design, report = checked_design(family)
        export_extras(args, design, report, description=[str(m) for m in members])
    return EXIT_OK


def finish_design(args, design, report, description, members, certificate) -> int:
    fmt = args.format or 'csv'
    if fmt == 'json':
        payload = design.to_dict(report)
        payload['arrangements'] = [m.to_text() for m in members]
        payload['certificate'] = certificate.to_dict() if certificate is not None else None
        payload['blocks'] = list(description)
        emit(args, json.dumps(payload) + "\n")
    elif fmt == 'paper':
        header = [str(m) for m in members]
        if certificate is not None:
            header.append(("*" if certificate.vatican else "") + certificate.quadruple())
        emit(args, "".join(line + "\n" for line in header) + design_as_paper(design))
    else:
        emit(args, design.to_csv())
    export_extras(args, design, report, description=list(description) or [str(m) for m in members])
    return EXIT_OK


# ---------------------------------------------------------------------------
# expand
# ---------------------------------------------------------------------------

def cmd_expand(args, config) -> int:
    group = build_group(config, args.group)
    automorphism = parse_automorphism(group, args.aut)
    arrangement = Arrangement.parse(group, args.arrangement)

    k = pseudoterrace_k(arrangement, automorphism)
    family = expand_pseudoterrace(arrangement, automorphism)
    design, report = checked_design(family)
    status(f"✓ {family.ell}-fold expansion of {arrangement} under {automorphism.describe()}: k = {k}")
    status(f"✓ {design.n} x {design.p} design: {verdict(report)}")

    fmt = args.format or 'csv'
    if fmt == 'json':
        payload = design.to_dict(report)
        payload['members'] = [m.to_text() for m in family]
        payload['k'] = k
        emit(args, json.dumps(payload) + "\n")
    elif fmt == 'paper':
        emit(args, "".join(f"{m}\n" for m in family) + f"k = {k}\n")
    else:
        emit(args, design.to_csv())
    export_extras(args, design, report, name=group.name, description=[str(m) for m in family])
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args, config) -> int:
    design = read_design_csv(args.path)
    try:
        report = balance_report(design)
    except NonUniformDesignError as e:
        status(f"❌ Design is not uniform: {e}")
        return EXIT_NOT_MET

    required = design.t - 1 if args.require_vatican else args.require_k
    met = report.meets(required) if required else True

    fmt = args.format or 'json'
    if fmt == 'paper':
        lines = [f"M_{i} = {m}" for i, m in enumerate(report.maxima, start=1)]
        lines += [f"max k = {report.max_k}", f"roman = {str(report.roman).lower()}",
                  f"vatican = {str(report.vatican).lower()}"]
        emit(args, "\n".join(lines) + "\n")
    elif fmt == 'csv':
        emit(args, "i,M_i\n" + "".join(f"{i},{m}\n" for i, m in enumerate(report.maxima, start=1)))
    else:
        emit(args, json.dumps(report.to_dict()) + "\n")

    status(f"{'✓' if met else '❌'} {design.n} x {design.p} design: {verdict(report)}"
           + (f" (required k >= {required})" if required else ""))
    export_extras(args, design, report, name=Path(args.path).stem)
    return EXIT_OK if met else EXIT_NOT_MET


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def cmd_sweep(args, config) -> int:
    workers = settings.worker_count(config, args.workers)
    rows = sweep_primes(args.p_min, args.p_max, args.ell_max, args.k_min, workers=workers,
                        verbose=args.verbose,
                        p_max_limit=settings.get(config, 'sweep.p_max_limit'))
    status(f"📊 {len(rows)} row(s), {sum(r.vatican for r in rows)} Vatican")

    fmt = 'paper' if args.paper_format else (args.format or 'json')
    if fmt == 'paper':
        if args.k_min >= 2:
            text = "".join(("*" if r.vatican else "") + r.listing() + "\n" for r in rows)
        else:
            by_prime = {}
            for r in rows:
                by_prime.setdefault(r.p, []).append(("*" if r.vatican else "") + r.quadruple())
            text = "".join(f"{p}: {' '.join(entries)}\n" for p, entries in by_prime.items())
    elif fmt == 'csv':
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(['p', 'ell', 'best_k', 'rho', 'r'])
        for r in rows:
            writer.writerow([r.p, r.ell, r.best_k if r.found else '', r.rho or '', r.r or ''])
        text = buffer.getvalue()
    else:
        text = "".join(json.dumps(r.to_dict()) + "\n" for r in rows)
    emit(args, text)

    if args.xlsx:
        from excel_exporter import ExcelExporter
        exporter = ExcelExporter()
        exporter.add_sweep(rows, name=f"Sweep {args.p_min}-{args.p_max}")
        exporter.export(args.xlsx)
    return EXIT_OK


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------

def cmd_search(args, config) -> int:
    group = build_group(config, args.group)
    mode = args.mode or (MODE_GIVEN if args.aut else MODE_ANY)
    automorphism = parse_automorphism(group, args.aut) if args.aut else None

    max_witnesses = args.max_witnesses
    if max_witnesses is None:
        max_witnesses = settings.get(config, 'search.max_witnesses')
    max_order_key = 'search.max_order_tuples' if mode == MODE_TUPLE else 'search.max_order_pseudoterrace'

    spec = SearchSpec(
        group=group,
        ell=args.ell,
        k=group.order - 1 if args.vatican else args.k,
        mode=mode,
        automorphism=automorphism,
        fixed_members=tuple(Arrangement.parse(group, text) for text in args.fixed or ()),
        node_budget=args.node_budget or settings.get(config, 'search.node_budget'),
        time_budget=args.time_budget,
        max_witnesses=max_witnesses or None,
        max_order=settings.get(config, max_order_key),
        conjugacy_max_order=settings.get(config, 'search.conjugacy_max_order'),
    )
    workers = settings.worker_count(config, args.workers)

    status("=" * 70)
    status(f"🔍 {mode} search: {group.name}, ell = {spec.ell}, k = {spec.k}, budget {spec.node_budget}")
    status("=" * 70)

    if mode == MODE_TUPLE:
        result = search_tuples(spec, workers=workers, verbose=args.verbose)
        families = list(result.witnesses)
        texts = [" ".join(str(m) for m in family) for family in families]
        records = [{'members': [m.to_text() for m in family], 'k': roman_k(family)}
                   for family in families]
    else:
        result = search_pseudoterraces(spec, workers=workers, verbose=args.verbose)
        families = [w.family() for w in result.witnesses]
        texts = [f"{w.automorphism.describe()}: {w.arrangement}" for w in result.witnesses]
        records = [{'automorphism': w.automorphism.describe(), 'arrangement': w.arrangement.to_text(),
                    'k': w.k} for w in result.witnesses]

    for warning in result.warnings:
        status(f"⚠️  {warning}")

    fmt = args.format or 'paper'
    if fmt == 'json':
        emit(args, json.dumps({
            'group': group.name,
            'ell': spec.ell,
            'k': spec.k,
            'mode': mode,
            'status': result.status,
            'nodes': result.nodes,
            'partitions': result.partitions,
            'witnesses': records,
            'warnings': result.warnings,
        }, indent=2) + "\n")
    elif fmt == 'csv':
        emit(args, "".join(
            "".join(m.to_text() + "\n" for m in family) for family in families
        ))
    elif texts:
        emit(args, "".join(text + "\n" for text in texts))

    if args.xlsx and families:
        from excel_exporter import ExcelExporter
        exporter = ExcelExporter()
        for i, family in enumerate(families[:10], start=1):
            design, report = checked_design(family)
            exporter.add_design(design, report, name=f"Witness {i}",
                                description=[str(m) for m in family])
        exporter.export(args.xlsx)

    if result.witnesses:
        status(f"✓ {len(result.witnesses)} witness(es) in {result.nodes} nodes ({result.status})")
        return EXIT_OK
    if result.status == STATUS_BUDGET_EXHAUSTED:
        status(f"⚠️  Budget exhausted after {result.nodes} nodes; nonexistence NOT established")
        return EXIT_BUDGET
    status(f"❌ None exists: search complete after {result.nodes} nodes")
    return EXIT_NOT_MET


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

def cmd_tables(args, config) -> int:
    workers = settings.worker_count(config, args.workers)
    node_budget = args.node_budget or settings.get(config, 'search.node_budget')

    status("=" * 70)
    status(f"GOLDEN TABLES: {', '.join(args.which)}")
    status("=" * 70)
    report = compare_tables(args.which, workers=workers, node_budget=node_budget,
                            verbose=args.verbose)
    summary = report['summary']
    results = report['results']

    fmt = args.format or 'paper'
    if fmt == 'json':
        emit(args, json.dumps(report, indent=2) + "\n")
    elif fmt == 'csv':
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(['table', 'key', 'status', 'published', 'recomputed', 'detail'])
        for bucket in ('pass', 'fail', 'informational'):
            for item in results[bucket]:
                writer.writerow([item['table'], item['key'], item['status'], item['published'],
                                 item['recomputed'], item['detail']])
        emit(args, buffer.getvalue())
    else:
        lines = []
        for bucket in ('pass', 'informational', 'fail'):
            for item in results[bucket]:
                line = f"{item['status']} [{item['table']}] {item['key']}"
                if item['status'] != 'PASS' or item['detail']:
                    line += f": published {item['published'] or '-'} | recomputed {item['recomputed'] or '-'}"
                    if item['detail']:
                        line += f" ({item['detail']})"
                lines.append(line)
        emit(args, "\n".join(lines) + "\n")

    status()
    status("📊 Summary:")
    for name, counts in summary['per_table'].items():
        status(f"   {name:<12} {counts['PASS']:>4} pass  {counts['FAIL']:>3} fail  {counts['INFO']:>3} info")
    status(f"   Elapsed: {report['metadata']['elapsed_seconds']} s")

    if args.html:
        from html_renderer import render_report
        status(f"✓ HTML report: {render_report(report, args.html)}")
    if args.xlsx:
        from excel_exporter import ExcelExporter
        exporter = ExcelExporter()
        exporter.add_table_check(report)
        exporter.export(args.xlsx)

    if summary['total_fail']:
        status(f"❌ {summary['total_fail']} row(s) FAIL")
        return EXIT_NOT_MET
    if report['metadata']['budget_exhausted']:
        status("⚠️  A nonexistence search ran out of budget; claim left unsettled")
        return EXIT_BUDGET
    status("✓ All rows reproduced")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=['csv', 'json', 'paper'],
                        help='Output format (default depends on the subcommand)')
    common.add_argument('--output', help='Write the payload to this file instead of stdout')
    common.add_argument('--workers', type=int,
                        help='Worker processes for searches and sweeps (default: config, 0 = all cores)')
    common.add_argument('--xlsx', help='Also export to this Excel workbook')
    common.add_argument('--config', help='Config file to use instead of config.yaml')
    common.add_argument('-v', '--verbose', action='store_true', help='Print progress to stderr')

    parser = argparse.ArgumentParser(
        description="Vatican Designs Toolkit",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Figure-style Williams square from the Walecki terrace
  python3 vatican.py construct --method walecki --t 6 --design

  # Primitive root 8 mod 11, expanded to the 55 x 11 design
  python3 vatican.py construct --method primitive-root --p 11 --rho 8 --expand

  # Check a design file for Vatican balance
  python3 vatican.py verify design.csv --require-vatican

  # Reproduce Table 1 with an HTML report
  python3 vatican.py tables 1 --html output/table1.html
        """
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('construct', parents=[common], help='Closed-form constructions')
    p.add_argument('--method', required=True,
                   choices=['walecki', 'prescott', 'primitive-root', 'stacked'])
    p.add_argument('--t', type=positive_int, help='Group order for walecki/prescott/stacked')
    p.add_argument('--p', type=positive_int, help='Prime for primitive-root')
    roots = p.add_mutually_exclusive_group()
    roots.add_argument('--rho', type=int, help='Primitive root')
    roots.add_argument('--halving', action='store_true', help='Use rho = (p+1)/2 (terrace check)')
    p.add_argument('--ell', type=positive_int, help='Fold for --method stacked')
    p.add_argument('--design', action='store_true', help="Emit the design (a pseudoterrace prints its arrangement and certificate; use --expand)")
    p.add_argument('--expand', action='store_true', help='Emit the expanded design')
    p.add_argument('--html', help='Also render an HTML report')
    p.set_defaults(handler=cmd_construct, validate=validate_construct)

    p = sub.add_parser('expand', parents=[common], help='Expand a pseudoterrace into a design')
    p.add_argument('--group', required=True, help='Group descriptor, e.g. Z5, D6, Q8, Z2^3')
    p.add_argument('--aut', required=True, help="Automorphism, e.g. '1->4' or 'u->u^2, v->v'")
    p.add_argument('--arrangement', required=True, help='Comma-separated element tokens')
    p.add_argument('--html', help='Also render an HTML report')
    p.set_defaults(handler=cmd_expand)

    p = sub.add_parser('verify', parents=[common], help='Carry-over balance of a design CSV')
    p.add_argument('path', help='Header-less CSV, one subject per line')
    need = p.add_mutually_exclusive_group()
    need.add_argument('--require-k', type=positive_int, help='Exit 1 unless max k reaches this')
    need.add_argument('--require-vatican', action='store_true', help='Exit 1 unless Vatican')
    p.add_argument('--html', help='Also render an HTML report')
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser('sweep', parents=[common], help='Primitive-root sweep over primes')
    p.add_argument('--p-min', type=positive_int, default=5)
    p.add_argument('--p-max', type=positive_int, required=True)
    p.add_argument('--ell-max', type=positive_int)
    p.add_argument('--k-min', type=int, default=0, help='Drop rows with best k below this')
    p.add_argument('--paper-format', action='store_true', help='Same as --format paper')
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser('search', parents=[common], help='Backtracking search')
    p.add_argument('--group', required=True)
    p.add_argument('--ell', type=positive_int, required=True, help='Fold')
    p.add_argument('--aut', help='Automorphism for mode given')
    p.add_argument('--mode', choices=[MODE_GIVEN, MODE_ANY, MODE_TUPLE])
    target = p.add_mutually_exclusive_group()
    target.add_argument('--k', type=positive_int, help='Balance target (default: Vatican)')
    target.add_argument('--vatican', action='store_true', help='Target k = t-1')
    p.add_argument('--max-witnesses', type=int, help='Stop after this many (0 = all)')
    p.add_argument('--node-budget', type=positive_int)
    p.add_argument('--time-budget', type=float, help='Seconds')
    p.add_argument('--fixed', action='append', help='Fixed tuple member (repeatable)')
    p.set_defaults(handler=cmd_search)

    p = sub.add_parser('tables', parents=[common], help='Recompute the published tables')
    p.add_argument('which', nargs='+', choices=list(TABLE_NAMES) + ['all'])
    p.add_argument('--node-budget', type=positive_int, help='Budget for the nonexistence searches')
    p.add_argument('--html', help='Render the report to this HTML file')
    p.set_defaults(handler=cmd_tables)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    validate = getattr(args, 'validate', None)
    if validate is not None:
        validate(parser, args)

    config = settings.load_config(args.config)

    try:
        return args.handler(args, config)
    except NonUniformDesignError as e:
        status(f"❌ {e}")
        return EXIT_NOT_MET
    except ConstructionIntegrityError as e:
        status(f"❌ Construction failed its self-check: {e}")
        return EXIT_NOT_MET
    except (ValueError, OSError) as e:
        status(f"❌ ERROR: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
