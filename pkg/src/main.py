"""CLI entry point for the surface positivity toolkit."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

from .base_loci import (
    SplitBundle,
    b_minus_bundle,
    b_minus_divisor,
    b_plus_bundle,
    b_plus_divisor,
    tensor,
    v_big,
    v_psef,
)
from .certificates import DEFAULT_SEED, VerifyConfig, b_minus_example, b_plus_example, l_counter
from .chern_ring import ch_split, chern_classes, exp_lc, lc, lc_add, project_degree1
from .errors import ParseError
from .lattice import (
    ample_test,
    blow_up,
    intersect,
    nef_test,
    psef_certificate,
    psef_test,
)
from .parsing import parse_bundle, parse_class, parse_integers
from .reporter import FORMATS, Report, render
from .schur import (
    Partition,
    h_product,
    kostka,
    pieri_summand_certificate,
    tensor_power_decomposition,
    witness_exponents,
)
from .suites import chern_suite, loci_suite, pullback_suite, schur_suite, zariski_suite
from .surface_config import dump_surface_config, load_surface
from .zariski import NotPseudoeffective, big_test, zariski_decompose

logger = logging.getLogger(__name__)

VERIFY_TARGETS = {
    "b-minus-example": b_minus_example,
    "b-plus-example": b_plus_example,
    "l-counter": l_counter,
    "schur-suite": schur_suite,
    "zariski-suite": zariski_suite,
    "loci-suite": loci_suite,
    "pullback-suite": pullback_suite,
    "chern-suite": chern_suite,
}


# ----- lattice -----

def cmd_lattice_show(args) -> Report:
    lattice = load_surface(args.surface)
    report = Report(f"Lattice {lattice.name}", seed=args.seed)
    report.fields.update({
        "basis": ", ".join(lattice.basis_labels),
        "polarization": lattice.polarization,
        "Mori generators": ", ".join(str(g) for g in lattice.mori_generators),
    })
    if lattice.aliases:
        report.fields["aliases"] = ", ".join(f"{a} = {b}" for a, b in lattice.aliases.items())
    for name, value in lattice.named_classes.items():
        report.fields[f"class {name}"] = value
    report.tables["gram"] = [
        {"": label, **{other: lattice.gram[i, j] for j, other in enumerate(lattice.basis_labels)}}
        for i, label in enumerate(lattice.basis_labels)
    ]
    report.tables["curves"] = [
        {
            "curve": a.label,
            "class": a.divisor,
            **{b.label: intersect(a.divisor, b.divisor) for b in lattice.curve_catalog},
            "degree": intersect(a.divisor, lattice.polarization),
        }
        for a in lattice.curve_catalog
    ]
    return report


def cmd_lattice_intersect(args) -> Report:
    lattice = load_surface(args.surface)
    a, b = parse_class(args.first, lattice), parse_class(args.second, lattice)
    report = Report(f"Intersection on {lattice.name}", seed=args.seed)
    report.fields.update({"first": a, "second": b, "intersection": intersect(a, b)})
    return report


def cmd_lattice_classify(args) -> Report:
    lattice = load_surface(args.surface)
    d = parse_class(args.divisor, lattice)
    report = Report(f"Positivity of {d} on {lattice.name}", seed=args.seed)
    report.fields.update({
        "class": d,
        "self-intersection": intersect(d, d),
        "nef": nef_test(d),
        "ample": ample_test(d),
        "pseudoeffective": psef_test(d),
        "big": big_test(d),
    })
    certificate = psef_certificate(d)
    if certificate is not None:
        report.tables["psef certificate"] = [
            {"generator": generator, "coefficient": coefficient}
            for generator, coefficient in zip(lattice.mori_generators, certificate) if coefficient != 0
        ]
    report.tables["degrees"] = [
        {"curve": record.label, "degree": intersect(d, record.divisor)} for record in lattice.curve_catalog
    ]
    return report


def cmd_lattice_blow_up(args) -> Report:
    lattice = load_surface(args.surface)
    centres = [label.strip() for label in args.center_on.split(",")] if args.center_on else None
    blown_up, blowdown = blow_up(lattice, centres, exceptional_label=args.label, name=args.name)
    text = dump_surface_config(blown_up)
    if args.write:
        Path(args.write).write_text(text, encoding="utf-8")
        print(f"Surface file saved to: {args.write}", file=sys.stderr)

    report = Report(f"Blow-up {blowdown.source.name} -> {blowdown.target.name}", seed=args.seed)
    report.fields.update({
        "basis": ", ".join(blown_up.basis_labels),
        "polarization": blown_up.polarization,
        "contracted": ", ".join(sorted(blowdown.contracted_curves)),
        "Mori generators": ", ".join(str(g) for g in blown_up.mori_generators),
    })
    report.tables["pullback"] = [
        {"class": label, "pullback": blowdown.pullback(lattice.basis_class(label))}
        for label in lattice.basis_labels
    ]
    report.tables["curves"] = [
        {"curve": record.label, "class": record.divisor, "self-intersection": record.self_intersection}
        for record in blown_up.curve_catalog
    ]
    return report


# ----- zariski / base loci -----

def cmd_zariski(args) -> Report:
    lattice = load_surface(args.surface)
    d = parse_class(args.divisor, lattice)
    report = Report(f"Zariski decomposition of {d} on {lattice.name}", seed=args.seed)
    decomposition = zariski_decompose(d)
    if isinstance(decomposition, NotPseudoeffective):
        report.fields.update({"class": d, "pseudoeffective": False})
        return report

    report.fields.update({
        "class": d,
        "pseudoeffective": True,
        "positive part P": decomposition.positive,
        "negative part N": decomposition.negative_part(),
        "P^2": intersect(decomposition.positive, decomposition.positive),
        "big": big_test(d),
        "verified": ", ".join(decomposition.check_invariants()),
    })
    report.tables["negative part"] = [
        {"curve": label, "multiplicity": multiplicity} for label, multiplicity in decomposition.negative.items()
    ]
    return report


def cmd_baselocus(args) -> Report:
    lattice = load_surface(args.surface)
    if args.divisor:
        d = parse_class(args.divisor, lattice)
        report = Report(f"Base loci of {d} on {lattice.name}", seed=args.seed)
        report.fields.update({"class": d, "B-": b_minus_divisor(d), "B+": b_plus_divisor(d)})
        return report

    summands = parse_bundle(args.bundle, lattice)
    twist = parse_class(args.twist, lattice) if args.twist else lattice.zero()
    bundle = SplitBundle(summands, twist)
    report = Report(f"Base loci of {bundle} on {lattice.name}", seed=args.seed)
    report.fields.update({
        "bundle": bundle,
        "B-": b_minus_bundle(bundle),
        "B+": b_plus_bundle(bundle),
        "V-psef": v_psef(bundle),
        "V-big": v_big(bundle),
    })
    report.tables["summands"] = [
        {"summand": d, "B-": b_minus_divisor(d), "B+": b_plus_divisor(d)} for d in bundle.twisted_summands()
    ]
    return report


# ----- schur -----

def cmd_schur_decompose(args) -> Report:
    summands = tensor_power_decomposition(args.n, args.r)
    report = Report(f"Schur decomposition of T^{args.n} E, rank {args.r}", seed=args.seed)
    total = sum(s.tableau_multiplicity * s.dimension for s in summands)
    report.fields.update({"summands": len(summands), "total dimension": total, "r^n": args.r ** args.n})
    report.tables["summands"] = [
        {"partition": s.partition, "multiplicity": s.tableau_multiplicity, "dimension": s.dimension}
        for s in summands
    ]
    return report


def cmd_schur_kostka(args) -> Report:
    shape = Partition.parse(args.shape)
    content = parse_integers(args.content, allow_negative=False)
    report = Report(f"Kostka number K{shape},{content}", seed=args.seed)
    report.fields["kostka"] = kostka(shape, content)
    return report


def cmd_schur_pieri(args) -> Report:
    shape = Partition.parse(args.shape)
    report = Report(f"Pieri certificate for {shape}, rank {args.r}", seed=args.seed)
    report.fields["multiplicity"] = pieri_summand_certificate(shape, args.r)
    report.tables["expansion"] = [
        {"partition": partition, "coefficient": coefficient}
        for partition, coefficient in h_product(shape.parts).items()
    ]
    return report


def cmd_schur_witness(args) -> Report:
    shape = Partition.parse(args.shape)
    witness = witness_exponents(shape, args.m, args.q, args.M)
    report = Report(f"Exponent witness for {shape}", seed=args.seed)
    report.fields.update({
        "a": list(witness.a), "b": list(witness.b),
        "2M - m sum a": witness.lhs, "M + sum b / q": witness.rhs, "holds": witness.holds,
    })
    return report


# ----- chern -----

def _bundle(args, surface: str) -> SplitBundle:
    lattice = load_surface(surface)
    twist = parse_class(args.twist, lattice) if getattr(args, "twist", None) else lattice.zero()
    return SplitBundle(parse_bundle(args.bundle, lattice), twist)


def cmd_chern_ch(args) -> Report:
    bundle = _bundle(args, args.surface)
    ch = ch_split(bundle)
    report = Report(f"Chern character of {bundle} on {bundle.lattice.name}", seed=args.seed)
    report.fields.update({
        "ch": ch,
        "c": chern_classes(ch),
        "lc": lc(ch),
        "degree 1": project_degree1(ch),
    })
    return report


def cmd_chern_lc(args) -> Report:
    bundle = _bundle(args, args.surface)
    log_class = lc(ch_split(bundle))
    report = Report(f"Log-Chern character of {bundle}", seed=args.seed)
    report.fields.update({"lc": log_class, "degree 1": project_degree1(log_class)})
    return report


def cmd_chern_additivity(args) -> Report:
    lattice = load_surface(args.surface)
    e = SplitBundle.of(parse_bundle(args.first, lattice))
    f = SplitBundle.of(parse_bundle(args.second, lattice))
    product = tensor(e, f)
    ch_e, ch_f, ch_product = ch_split(e), ch_split(f), ch_split(product)
    report = Report(f"lc additivity for {e} and {f}", seed=args.seed)
    report.fields.update({
        "lc(E)": lc(ch_e),
        "lc(F)": lc(ch_f),
        "lc(E (x) F)": lc(ch_product),
        "ch multiplicative": ch_product == ch_e * ch_f,
        "lc additive": lc(ch_product) == lc_add(lc(ch_e), lc(ch_f)),
        "exp_lc inverts lc": exp_lc(lc(ch_product)) == ch_product,
    })
    return report


# ----- verify -----

def cmd_verify(args) -> Report:
    config = VerifyConfig(seed=args.seed, parallel=args.parallel, workers=args.workers,
                          n_max=args.n_max, l_max=args.l_max)
    targets = list(VERIFY_TARGETS) if args.target == "all" else [args.target]
    report = Report(f"Verification: {args.target}", seed=args.seed)
    for target in targets:
        logger.info("Running %s", target)
        report.certificates.append(VERIFY_TARGETS[target](config))
    return report


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    output_group = common.add_argument_group('output')
    output_group.add_argument('--format', choices=FORMATS, default='table',
                              help='Output format (default: table)')
    output_group.add_argument('--output', type=str, default=None,
                              help='Write the rendered output to this file instead of stdout')
    output_group.add_argument('--verbose', action='store_true',
                              help='Verbose logging')
    exec_group = common.add_argument_group('execution')
    exec_group.add_argument('--seed', type=int, default=DEFAULT_SEED,
                            help=f'Seed of the random suites (default: {DEFAULT_SEED})')
    exec_group.add_argument('--parallel', action='store_true',
                            help='Fan suites out over a process pool')
    exec_group.add_argument('--workers', type=int, default=None,
                            help='Process pool size (default: number of CPUs)')

    parser = argparse.ArgumentParser(
        prog="python -m src.main",
        description="Exact Zariski decompositions, base loci and positivity certificates on surfaces",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Inspect the double blow-up of P^2
  python -m src.main lattice show p2-double-blowup

  # Zariski decomposition and base loci of a class
  python -m src.main zariski p2-double-blowup "C+Fb+2Fp"
  python -m src.main baselocus p2-double-blowup --divisor "L+Fb+Fp"
  python -m src.main baselocus p2-double-blowup --bundle "L+Fb; 0" --twist "1/2Fp"

  # Schur functor bookkeeping
  python -m src.main schur decompose 3 2
  python -m src.main schur kostka 2,1 1,1,1

  # Chern characters (pN is the projective space P^N)
  python -m src.main chern ch p2 "L; -L"

  # Certificates
  python -m src.main verify b-minus-example
  python -m src.main verify all --format json --output certificates.json

Classes are signed rational combinations of labels, e.g. 2L-Fb-3/2Fp
(F̄ and F′ are accepted for Fb and Fp). Bundles separate summands with ';'.
        """
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    lattice_parser = subparsers.add_parser('lattice', help='Inspect surface lattices')
    lattice_sub = lattice_parser.add_subparsers(dest='action', required=True)
    show = lattice_sub.add_parser('show', parents=[common], help='Basis, gram matrix and curve catalog')
    show.add_argument('surface', help='Preset name, pN, or surface file')
    show.set_defaults(handler=cmd_lattice_show)
    intersect_parser = lattice_sub.add_parser('intersect', parents=[common], help='Intersection number')
    intersect_parser.add_argument('surface')
    intersect_parser.add_argument('first')
    intersect_parser.add_argument('second')
    intersect_parser.set_defaults(handler=cmd_lattice_intersect)
    classify = lattice_sub.add_parser('classify', parents=[common], help='Nef / ample / psef / big tests')
    classify.add_argument('surface')
    classify.add_argument('divisor')
    classify.set_defaults(handler=cmd_lattice_classify)
    blow = lattice_sub.add_parser('blow-up', parents=[common], help='Blow up a point')
    blow.add_argument('surface')
    blow.add_argument('--center-on', type=str, default=None,
                      help='Comma-separated catalog curves through the point')
    blow.add_argument('--label', type=str, default=None, help='Label of the exceptional curve')
    blow.add_argument('--name', type=str, default=None, help='Name of the blown-up surface')
    blow.add_argument('--write', type=str, default=None, help='Save the blown-up surface file here')
    blow.set_defaults(handler=cmd_lattice_blow_up)

    zariski = subparsers.add_parser('zariski', parents=[common], help='Zariski decomposition of a class')
    zariski.add_argument('surface')
    zariski.add_argument('divisor')
    zariski.set_defaults(handler=cmd_zariski)

    baselocus = subparsers.add_parser('baselocus', parents=[common], help='Augmented and diminished base loci')
    baselocus.add_argument('surface')
    target = baselocus.add_mutually_exclusive_group(required=True)
    target.add_argument('--divisor', type=str, help='A divisor class')
    target.add_argument('--bundle', type=str, help="Split bundle summands separated by ';'")
    baselocus.add_argument('--twist', type=str, default=None, help='Rational twist class of the bundle')
    baselocus.set_defaults(handler=cmd_baselocus)

    schur = subparsers.add_parser('schur', help='Partition and Schur functor combinatorics')
    schur_sub = schur.add_subparsers(dest='action', required=True)
    decompose = schur_sub.add_parser('decompose', parents=[common], help='Schur summands of T^n E')
    decompose.add_argument('n', type=int)
    decompose.add_argument('r', type=int)
    decompose.set_defaults(handler=cmd_schur_decompose)
    kostka_parser = schur_sub.add_parser('kostka', parents=[common], help='Kostka number')
    kostka_parser.add_argument('shape')
    kostka_parser.add_argument('content')
    kostka_parser.set_defaults(handler=cmd_schur_kostka)
    pieri = schur_sub.add_parser('pieri', parents=[common], help='Pieri summand certificate')
    pieri.add_argument('shape')
    pieri.add_argument('r', type=int)
    pieri.set_defaults(handler=cmd_schur_pieri)
    witness = schur_sub.add_parser('witness', parents=[common], help='Exponent bookkeeping')
    witness.add_argument('shape')
    witness.add_argument('m', type=int)
    witness.add_argument('q', type=int)
    witness.add_argument('M', type=int)
    witness.set_defaults(handler=cmd_schur_witness)

    chern = subparsers.add_parser('chern', help='Chern and log-Chern characters of split bundles')
    chern_sub = chern.add_subparsers(dest='action', required=True)
    ch = chern_sub.add_parser('ch', parents=[common], help='Chern character and Chern classes')
    ch.add_argument('surface', help='Preset name, pN, or surface file')
    ch.add_argument('bundle')
    ch.add_argument('--twist', type=str, default=None)
    ch.set_defaults(handler=cmd_chern_ch)
    lc_parser = chern_sub.add_parser('lc', parents=[common], help='Log-Chern character')
    lc_parser.add_argument('bundle')
    lc_parser.add_argument('--surface', type=str, default='p2')
    lc_parser.add_argument('--twist', type=str, default=None)
    lc_parser.set_defaults(handler=cmd_chern_lc)
    additivity = chern_sub.add_parser('check-additivity', parents=[common], help='lc(E (x) F) = lc E + lc F')
    additivity.add_argument('first')
    additivity.add_argument('second')
    additivity.add_argument('--surface', type=str, default='p2')
    additivity.set_defaults(handler=cmd_chern_additivity)

    verify = subparsers.add_parser('verify', parents=[common], help='Run verification certificates')
    verify.add_argument('target', choices=list(VERIFY_TARGETS) + ['all'])
    verify.add_argument('--n-max', type=int, default=6, help='Largest n of the l-counter table (default: 6)')
    verify.add_argument('--l-max', type=int, default=6, help='Largest l of the l-counter table (default: 6)')
    verify.set_defaults(handler=cmd_verify)

    return parser


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(format='%(name)s:%(levelname)s:%(message)s')
    logging.getLogger().setLevel(logging.DEBUG if verbose else logging.WARNING)


def run(argv: Optional[list[str]] = None) -> int:
    """
    Parse arguments, dispatch and render.

    Returns:
        0 on success, 1 if a certificate failed, 2 on usage or parse errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    configure_logging(args.verbose)
    try:
        report = args.handler(args)
    except ParseError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2

    text = render(report, args.format)
    if args.output:
        output_path = Path(args.output)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(text, encoding="utf-8")
        print(f"Output saved to: {output_path}", file=sys.stderr)
    else:
        sys.stdout.write(text)

    return 0 if report.passed else 1


def main():
    """Main CLI entry point."""
    sys.exit(run())


if __name__ == '__main__':
    main()
