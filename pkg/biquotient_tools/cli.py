"""
Command line interface for the classification, invariant and curvature pipeline.

Usage example:

    biq enumerate --group sp1xsp1 --hdim 3
    biq invariants N6
    biq curvature N4 --theta 0.5 --theta 1.5707963
    python -m biquotient_tools.cli reproduce --out results

Creates (for reproduce):

    results/embeddings.md ... results/pontryagin.md, results/curvature.md, results/curvature.csv and
    results/bundle.json

Exit codes are 0 on success, 1 when a golden comparison fails, 2 for usage errors (bad arguments, unknown
biquotient names, invalid configuration values) and 3 for I/O errors. Other errors are not caught.
"""
from dataclasses import asdict, dataclass, field, replace
from typing import Any

import argparse
import json
import logging
import math
import os
import sys

import numpy as np
import scipy
import sympy

from . import __version__
from . import biq_tables
from .biq_config import CURVATURE_SPECS, BiqConfig
from .cohomology import CohomologyReport, report
from .curvature import POSITIVE, ZERO_PLANE, ScanRow, theta_scan
from .freeness import (Classification, FreenessVerdict, Sp1Pair, Status, candidate_pairs, certify, certify_sp1_pairs,
                       classify_all, confirmed_conflicts, counterexamples, is_violation, restriction_verdicts,
                       sample_oracle, unclassified)
from .reference_tables import Erratum, Mismatch, compare, compare_pairs, expected_values
from .reps import BiquotientSpec, TorusImage, enumerate_sp1, enumerate_sp1xsp1, load_library, load_spec, torus_image

logger = logging.getLogger(__name__)

SCHEMA = 1
EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
# the constructed zero-curvature plane of N4
ZERO_PLANE_CHECK = ("N4", math.pi/2)
EXPLORATORY = "exploratory, no published claim"
CLASSIFIED = "effectively free"

parser = argparse.ArgumentParser(
    prog='biq', description='Classify the biquotients Sp(3)//Sp(1)^2 and compute their invariants.')
parser.add_argument(
    '-v', '--verbose', action='store_true',
    help='Log progress to stderr')
commands = parser.add_subparsers(dest='command', required=True)

enumerate_parser = commands.add_parser('enumerate', help='List homomorphisms into Sp(n) with their torus images')
enumerate_parser.add_argument(
    '--group', choices=('sp1', 'sp1xsp1'), default='sp1',
    help='Source group Sp(1) or Sp(1)^2')
enumerate_parser.add_argument(
    '--hdim', type=int, default=3,
    help='Quaternionic dimension n of the target Sp(n)')
enumerate_parser.add_argument(
    '--json', action='store_true',
    help='Print json instead of a markdown table')

classify_parser = commands.add_parser('classify', help='Certify every candidate action and list the effectively free ones')
classify_parser.add_argument(
    '--json', action='store_true',
    help='Print json instead of a markdown table')
classify_parser.add_argument(
    '--witnesses', action='store_true',
    help='Also certify the rejected pairs of the classification and print their witnesses')

invariants_parser = commands.add_parser('invariants', help='Differentials, |H^8|, p1 and pi2 of named biquotients')
invariants_parser.add_argument(
    'name', nargs='?',
    help='Library name such as N6')
invariants_parser.add_argument(
    '--all', action='store_true',
    help='Every library biquotient')
invariants_parser.add_argument(
    '--json', action='store_true',
    help='Print json instead of a markdown table')

curvature_parser = commands.add_parser('curvature', help='Minimum zero-plane defect at rotation points p(theta)')
curvature_parser.add_argument(
    'name', type=str,
    help='Library name with block data (M1-M3, N1-N9)')
curvature_parser.add_argument(
    '--theta', type=float, action='append',
    help='Angle in radians; repeat for a scan (default from the configuration)')
curvature_parser.add_argument(
    '--restarts', type=int, default=None,
    help='Number of random starts')
curvature_parser.add_argument(
    '--seed', type=int, default=None,
    help='Seed of the random starts (overrides BIQ_SEED and the configuration)')
curvature_parser.add_argument(
    '--config', type=str, default=None,
    help='Json configuration file')
curvature_parser.add_argument(
    '--csv', type=str, default=None,
    help='Also save the scan rows to this csv file')
curvature_parser.add_argument(
    '--json', action='store_true',
    help='Print json instead of a markdown table')

reproduce_parser = commands.add_parser('reproduce', help='Run the whole pipeline and compare with the published tables')
reproduce_parser.add_argument(
    '--out', type=str, required=True,
    help='Output directory for the tables and bundle.json')
reproduce_parser.add_argument(
    '--golden', type=str, default=None,
    help='Directory of reference table json files (default: the packaged tables)')
reproduce_parser.add_argument(
    '--config', type=str, default=None,
    help='Json configuration file')
reproduce_parser.add_argument(
    '--seed', type=int, default=None,
    help='Seed of the curvature restarts (overrides BIQ_SEED and the configuration)')
reproduce_parser.add_argument(
    '--skip-curvature', action='store_true',
    help='Skip the curvature verification')
reproduce_parser.add_argument(
    '--skip-oracle', action='store_true',
    help='Skip the grid sampling cross-check of the certifier')


class UsageError(Exception):
    """Bad arguments, unknown names or invalid settings; reported with EXIT_USAGE."""


@dataclass
class ReportBundle:
    """
    Results of one reproduce run, written to bundle.json.

    Every cohomology report and curvature scan refers to a classified biquotient, or to a library
    biquotient whose published classification is recorded as an erratum.
    """
    classes: list[Classification]
    sp1_pairs: list[Sp1Pair]
    verdicts: list[FreenessVerdict]
    reports: list[CohomologyReport]
    scans: list[ScanRow]
    metadata: dict[str, Any]
    errata: list[Erratum] = field(default_factory=list)
    mismatches: list[Mismatch] = field(default_factory=list)

    def __post_init__(self):
        names = {c.spec.name for c in self.classes} | _classification_errata(self.errata)
        orphans = sorted(({r.name for r in self.reports} | {row.spec for row in self.scans}) - names)
        if orphans:
            raise ValueError(f"Reports for unclassified biquotients: {', '.join(orphans)}.")

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "metadata": self.metadata,
            "classes": [{**c.spec.to_json(), "status": c.verdict.status.value, "homogeneous": c.homogeneous}
                        for c in self.classes],
            "sp1_pairs": [{"pair": list(p.labels), "status": p.verdict.status.value} for p in self.sp1_pairs],
            "verdicts": [v.to_json() for v in self.verdicts],
            "cohomology": [r.to_json() for r in self.reports],
            "curvature": [row.to_json() for row in self.scans],
            "errata": [asdict(e) for e in self.errata],
            "mismatches": [asdict(m) for m in self.mismatches],
        }


def _classification_errata(errata: list[Erratum]) -> set[str]:
    return {e.key for e in errata if e.table == "classification"}


def _print_json(data: Any) -> None:
    print(json.dumps(data, indent=2))


def _config(args) -> BiqConfig:
    """Reads and validates the configuration, so bad values surface as usage errors."""
    try:
        config = BiqConfig(config_path=args.config) if args.config else BiqConfig()
        config.metadata()
        config.metric()
    except ValueError as error:
        raise UsageError(f"invalid configuration: {error}")
    return config


def _seed(args, config: BiqConfig) -> int:
    return args.seed if args.seed is not None else config.seed


def _spec(name: str) -> BiquotientSpec:
    try:
        return load_spec(name)
    except KeyError as error:
        raise UsageError(error.args[0])


def metadata(config: BiqConfig, seed: int) -> dict[str, Any]:
    """Run settings and package versions, without timestamps or paths."""
    return {
        **config.metadata(),
        "seed": seed,
        "versions": {"biquotient_tools": __version__, "numpy": np.__version__,
                     "scipy": scipy.__version__, "sympy": sympy.__version__},
    }


def cmd_enumerate(args) -> int:
    if args.hdim < 0:
        raise UsageError(f"--hdim must be non-negative, got {args.hdim}")
    if args.group == 'sp1':
        reps, title = enumerate_sp1(args.hdim), f"Homomorphisms Sp(1) -> Sp({args.hdim})"
    else:
        reps, title = enumerate_sp1xsp1(args.hdim), f"Homomorphisms Sp(1)^2 -> Sp({args.hdim})"
    if args.json:
        _print_json({"schema": SCHEMA, "group": args.group, "hdim": args.hdim,
                     "representations": [{"label": rep.label, "torus_image": torus_image(rep).to_json()}
                                         for rep in reps]})
    else:
        print(biq_tables.homomorphisms_table(title, reps), end='')
    return EXIT_OK


def _witness_lines(verdict: FreenessVerdict) -> list[str]:
    lines = [f"{verdict.name}: {verdict.status.value}"]
    for witness in verdict.witnesses:
        lines.append(f"  x = ({', '.join(map(str, witness.x))})  left angles ({', '.join(map(str, witness.left_eval))})"
                     f"  right angles ({', '.join(map(str, witness.right_eval))})")
    return lines


def cmd_classify(args) -> int:
    classes = classify_all()
    missing = unclassified(classes)
    verdicts = [certify(spec) for spec in counterexamples()] + missing if args.witnesses else []
    if args.json:
        data = {"schema": SCHEMA,
                "classes": [{**c.spec.to_json(), "status": c.verdict.status.value, "homogeneous": c.homogeneous}
                            for c in classes],
                "not_reproduced": [v.name for v in missing]}
        if args.witnesses:
            data["witnesses"] = [v.to_json() for v in verdicts]
        _print_json(data)
        return EXIT_OK
    print(biq_tables.torus_images_table(classes), end='')
    homogeneous = sum(c.homogeneous for c in classes)
    print(f"\n{len(classes)} effectively free classes: {homogeneous} homogeneous, "
          f"{len(classes) - homogeneous} inhomogeneous")
    for verdict in missing:
        print(f"library biquotient {verdict.name} is {verdict.status.value} as printed")
    for verdict in verdicts:
        print()
        print("\n".join(_witness_lines(verdict)))
    return EXIT_OK


def cmd_invariants(args) -> int:
    if args.all == (args.name is not None):
        invariants_parser.print_usage(sys.stderr)
        raise UsageError("give either a name or --all")
    specs = list(load_library().values()) if args.all else [_spec(args.name)]
    reports = [report(spec) for spec in specs]
    if args.json:
        _print_json({"schema": SCHEMA, "reports": [r.to_json() for r in reports]})
    else:
        print(biq_tables.invariants_table(reports), end='')
    return EXIT_OK


def cmd_curvature(args) -> int:
    config = _config(args)
    spec = _spec(args.name)
    if spec.blocks is None:
        raise UsageError(f"{args.name} has no Lie algebra block data; use one of M1-M3, N1-N9")
    restarts = args.restarts if args.restarts is not None else config.restarts
    if restarts < 1:
        raise UsageError(f"--restarts must be at least 1, got {restarts}")
    if args.name not in CURVATURE_SPECS:
        print(f"{args.name}: {EXPLORATORY}")
    thetas = args.theta or config.thetas
    rows = theta_scan(spec, thetas, restarts, config.metric(), _seed(args, config))
    if args.csv:
        biq_tables.write_scan_csv(args.csv, rows)
    if args.json:
        _print_json({"schema": SCHEMA, "scans": [row.to_json() for row in rows]})
    else:
        print(biq_tables.curvature_table(rows), end='')
    return EXIT_OK


def _image_rows(rows) -> tuple:
    return TorusImage(tuple(map(tuple, rows))).normalized().rows


def _classification_mismatches(classes: list[Classification], missing: list[FreenessVerdict],
                               golden) -> tuple[list[Mismatch], list[Erratum]]:
    actual = {c.spec.name: CLASSIFIED for c in classes}
    actual.update({v.name: v.status.value for v in missing})
    mismatches, errata = compare("classification", actual, golden)
    for c in classes:
        for label, verdict in restriction_verdicts(c.spec).items():
            if not verdict.is_effectively_free:
                mismatches.append(Mismatch("restrictions", f"{c.spec.name} {label}", CLASSIFIED,
                                           verdict.status.value))
    return mismatches, errata


def _witness_mismatches(verdicts: list[FreenessVerdict], specs) -> list[Mismatch]:
    out = []
    for spec, verdict in zip(specs, verdicts):
        if verdict.status is not Status.NOT_FREE or not verdict.witnesses:
            out.append(Mismatch("counterexamples", spec.name, "NotFree", verdict.status.value))
        elif not all(is_violation(spec, w.x) for w in verdict.witnesses):
            out.append(Mismatch("counterexamples", spec.name, "exact violations", "witness not a violation"))
    return out


def _oracle_mismatches(grid_n: int) -> list[Mismatch]:
    out = []
    candidates = candidate_pairs()
    for candidate in candidates:
        candidate = replace(candidate, name=f"{biq_tables.format_image(candidate.left)} / "
                                            f"{biq_tables.format_image(candidate.right)}")
        verdict = certify(candidate)
        oracle = sample_oracle(candidate, grid_n)
        out += [Mismatch("oracle", candidate.name, verdict.status.value, conflict)
                for conflict in confirmed_conflicts(candidate, verdict, oracle)]
    logger.info(f"oracle checked {len(candidates)} candidates on a {grid_n} grid, {len(out)} conflicts")
    return out


def _golden_mismatches(sp1, sp1xsp1, pairs, reports, golden) -> tuple[list[Mismatch], list[Erratum]]:
    mismatches, errata = [], []

    def collect(result):
        mismatches.extend(result[0])
        errata.extend(result[1])

    collect(compare("sp1_homomorphisms", {rep.label: torus_image(rep).to_json() for rep in sp1}, golden,
                    normalize=_image_rows))
    collect(compare("sp1xsp1_homomorphisms", {rep.label: torus_image(rep).to_json() for rep in sp1xsp1}, golden,
                    normalize=_image_rows))
    mismatches.extend(compare_pairs("sp1_pairs", [p.labels for p in pairs], golden))
    sp1_squared = [r for r in reports if r.h8_order is not None]
    collect(compare("differentials", {r.name: {"dx3": r.dx3.to_json(), "dx7": r.dx7.to_json()} for r in sp1_squared},
                    golden))
    collect(compare("h8_orders", {r.name: r.h8_order for r in sp1_squared}, golden))
    for r in sp1_squared:
        if math.gcd(r.alpha, r.beta) != 1:
            mismatches.append(Mismatch("differentials", f"{r.name} gcd", 1, math.gcd(r.alpha, r.beta)))
        if r.snf_divisors != (1, 1, r.h8_order):
            mismatches.append(Mismatch("h8_orders", f"{r.name} snf", [1, 1, r.h8_order], list(r.snf_divisors)))
    published_p1 = expected_values("pontryagin", golden)[0]
    collect(compare("pontryagin", {r.name: r.p1 for r in reports if r.name in published_p1}, golden, normalize=abs))
    return mismatches, errata


def _curvature_runs(config: BiqConfig, seed: int, classified: set[str]) -> tuple[list[ScanRow], list[Mismatch]]:
    scans, mismatches = [], []
    metric = config.metric()
    claims = [(name, theta, POSITIVE) for name in config.curvature_specs for theta in config.thetas]
    claims.append((*ZERO_PLANE_CHECK, ZERO_PLANE))
    for name, theta, expected in claims:
        if name not in classified:
            mismatches.append(Mismatch("curvature", name, "classified", None))
            continue
        row, = theta_scan(load_spec(name), [theta], config.restarts, metric, seed)
        scans.append(row)
        if row.verdict != expected:
            mismatches.append(Mismatch("curvature", f"{name} theta={theta:.6f}", expected, row.verdict))
    return scans, mismatches


def reproduce(config: BiqConfig, seed: int, golden: str | None = None, curvature: bool = True,
              oracle: bool = True) -> tuple[ReportBundle, dict[str, str]]:
    """
    Runs the whole pipeline and compares it with the reference tables.

    A library biquotient that the classification does not reproduce counts as a mismatch unless the
    classification table records it as an erratum; its invariants are then still computed from the
    library data and its certificate is kept with the witnesses.

    Returns
    -------
    ReportBundle
        Results with the errata applied and every failed comparison.
    dict
        Markdown tables keyed by file name.
    """
    library = load_library()
    sp1, sp1xsp1 = enumerate_sp1(3), enumerate_sp1xsp1(3)
    pairs = certify_sp1_pairs()
    classes = classify_all()
    missing = unclassified(classes)
    mismatches, errata = _classification_mismatches(classes, missing, golden)
    classified = {c.spec.name for c in classes}
    listed = classified | _classification_errata(errata)
    reports = [report(spec) for name, spec in library.items() if name in listed]

    rejected = counterexamples()
    verdicts = [certify(spec) for spec in rejected]
    mismatches += _witness_mismatches(verdicts, rejected)
    if oracle:
        mismatches += _oracle_mismatches(config.grid_n)
    golden_mismatches, golden_errata = _golden_mismatches(sp1, sp1xsp1, pairs, reports, golden)
    mismatches += golden_mismatches
    errata += golden_errata
    scans = []
    if curvature:
        scans, curvature_mismatches = _curvature_runs(config, seed, classified)
        mismatches += curvature_mismatches

    bundle = ReportBundle(classes=classes, sp1_pairs=pairs, verdicts=verdicts + missing, reports=reports,
                          scans=scans, metadata=metadata(config, seed), errata=errata, mismatches=mismatches)
    texts = [
        biq_tables.embeddings_table(list(library.values())),
        biq_tables.torus_images_table(classes),
        biq_tables.homomorphisms_table("Homomorphisms Sp(1) -> Sp(3)", sp1) + biq_tables.sp1_pairs_section(pairs),
        biq_tables.homomorphisms_table("Homomorphisms Sp(1)^2 -> Sp(3)", sp1xsp1),
        biq_tables.differentials_table([r for r in reports if r.h8_order is not None]),
        biq_tables.h8_table(reports),
        biq_tables.pontryagin_table(reports),
    ]
    tables = dict(zip(biq_tables.TABLE_FILES, texts))
    if scans:
        tables["curvature.md"] = biq_tables.curvature_table(scans)
    return bundle, tables


def cmd_reproduce(args) -> int:
    config = _config(args)
    seed = _seed(args, config)
    if args.golden is not None and not os.path.isdir(args.golden):
        raise UsageError(f"--golden {args.golden} is not a directory")
    os.makedirs(args.out, exist_ok=True)
    bundle, tables = reproduce(config, seed, args.golden, not args.skip_curvature, not args.skip_oracle)
    paths = biq_tables.write_tables(args.out, tables)
    if bundle.scans:
        paths.append(os.path.join(args.out, "curvature.csv"))
        biq_tables.write_scan_csv(paths[-1], bundle.scans)
    paths.append(os.path.join(args.out, "bundle.json"))
    biq_tables.write_json(paths[-1], bundle.to_json())
    print(f"wrote {len(paths)} files to {args.out}")
    for erratum in bundle.errata:
        print(f"erratum {erratum}")
    if bundle.mismatches:
        for mismatch in bundle.mismatches:
            print(mismatch)
        print(f"{len(bundle.mismatches)} comparisons failed")
        return EXIT_MISMATCH
    print("all comparisons pass")
    return EXIT_OK


COMMANDS = {
    'enumerate': cmd_enumerate,
    'classify': cmd_classify,
    'invariants': cmd_invariants,
    'curvature': cmd_curvature,
    'reproduce': cmd_reproduce,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return error.code if isinstance(error.code, int) else EXIT_USAGE
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format='%(levelname)s %(name)s: %(message)s')
    try:
        return COMMANDS[args.command](args)
    except UsageError as error:
        print(f"biq {args.command}: {error}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as error:
        print(f"biq {args.command}: {error}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
