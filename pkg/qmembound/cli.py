"""Command-line front end.

    qmembound bound --entropy S --dof D --mass M
    qmembound scan --dof D --beta-min A --beta-max B --steps N
    qmembound verify-lemma (--spectrum-file F | --hopt-dof D --hopt-cap C) (--entropy S | --entropy-per-dof s)
    qmembound devices --entropies S1 S2 ...
    qmembound estimate [--scenario F]

Exit codes: 0 success, 1 the lemma challenge found a violation, 2 bad input.
"""
import argparse
import io
import logging
import sys
from pathlib import Path
from typing import List, Optional, TextIO

import numpy as np
from tqdm.auto import tqdm

from .bound import BoundQuery, capacity_estimate, product_bound
from .config import DEFAULTS
from .constants import ELECTRON_MASS, from_nats, to_nats
from .devices import DEFAULT_SCALES, DeviceSpec, growth_scan
from .lemma import FiniteSpectrum, StateSpaceTooLargeError, challenge, min_energy_at_entropy, sorted_assignment_check
from .spectrum import SpectrumTooLargeError, check_dimension
from .thermo import ConvergenceError, z_l_log_steepest, z_l_sum
from .utils.roots import BracketError
from .utils.io import format_number, read_scenario, read_spectrum, scenario_lines, write_csv

logger = logging.getLogger(__name__)

INPUT_ERRORS = (ValueError, OSError, NotImplementedError, SpectrumTooLargeError, ConvergenceError,
                BracketError, StateSpaceTooLargeError)

SCAN_HEADER = ["beta", "log_z_direct", "log_z_approx", "error", "converged"]
DEVICES_HEADER = ["device", "entropy", "energy", "surface", "product", "bound", "bound_ratio"]


def _report(out: TextIO, **items):
    for key, value in items.items():
        out.write(f"{key}={format_number(value)}\n")


def cmd_bound(args, out: TextIO) -> int:
    query = BoundQuery.from_units(args.entropy, args.dof, args.mass, args.units)
    result = product_bound(query, args.r_squared)
    _report(out,
            entropy_nats=query.s_total,
            entropy_bits=from_nats(query.s_total, "bits"),
            dof=query.d,
            mass_kg=query.mass,
            hbar_J_s=result.constants_used["hbar_J_s"],
            constants=result.constants_used["source"],
            product_bound_J_m2=result.product_bound,
            product_bound_eV_nm2=result.product_bound_ev_nm2)
    if result.kappa_star is not None:
        _report(out, r_squared_m2=args.r_squared, kappa_star_J_per_m2=result.kappa_star)
    return 0


def cmd_scan(args, out: TextIO) -> int:
    d = check_dimension(args.dof)
    if not 0 < args.beta_min < args.beta_max:
        raise ValueError(f"need 0 < beta-min < beta-max, got {args.beta_min!r}, {args.beta_max!r}")
    if args.steps < 2:
        raise ValueError(f"steps must be >= 2, got {args.steps!r}")
    rows = []
    for beta in tqdm(np.geomspace(args.beta_min, args.beta_max, args.steps), desc="scan", disable=not args.progress):
        beta = float(beta)
        direct = z_l_sum(beta, d, args.max_terms)
        approx = float(z_l_log_steepest(beta, d))
        if not direct.converged:
            logger.warning("beta=%r: sum stopped at the %d-term cap", beta, direct.terms)
        rows.append((beta, direct.log_z, approx, direct.log_z - approx, direct.converged))
    write_csv(out, SCAN_HEADER, rows)
    return 0


def _lemma_spectrum(args) -> FiniteSpectrum:
    if args.spectrum_file is not None:
        return read_spectrum(args.spectrum_file)
    if args.hopt_cap is None:
        raise ValueError("--hopt-dof needs --hopt-cap")
    return FiniteSpectrum.from_hopt(args.hopt_dof, args.hopt_cap)


def cmd_verify_lemma(args, out: TextIO) -> int:
    spectrum = _lemma_spectrum(args)
    if args.entropy is not None:
        s_target = to_nats(args.entropy, args.units)
    elif args.spectrum_file is not None:
        raise ValueError("--entropy-per-dof only applies to --hopt-dof spectra")
    else:
        s_target = to_nats(args.entropy_per_dof, args.units) * args.hopt_dof
    match = min_energy_at_entropy(spectrum, s_target)
    worst = challenge(spectrum, s_target, args.trials, args.seed, progress=args.progress)
    try:
        rearranged = sorted_assignment_check(spectrum, match.distribution.state_probabilities(), seed=args.seed)
    except StateSpaceTooLargeError:
        rearranged = None
    passed = worst >= -DEFAULTS.violation_tol and rearranged is not False
    source = args.spectrum_file if args.spectrum_file is not None else f"hopt d={args.hopt_dof} cap={args.hopt_cap}"
    _report(out,
            spectrum=source,
            levels=spectrum.levels,
            log_state_count=spectrum.log_state_count,
            entropy_nats=s_target,
            trials=args.trials,
            seed=args.seed,
            boltzmann_beta=match.beta,
            boltzmann_entropy=match.distribution.entropy,
            boltzmann_energy=match.mean_energy,
            worst_violation=worst,
            sorted_assignment="skipped" if rearranged is None else rearranged,
            verdict="pass" if passed else "fail")
    return 0 if passed else 1


def cmd_devices(args, out: TextIO) -> int:
    entropies = [to_nats(s, args.units) for s in args.entropies]
    scales = {"box": args.box_width, "oscillator": args.omega, "hydrogen": args.coupling}
    rows = []
    for kind, scale in scales.items():
        spec = DeviceSpec(kind, args.mass, scale, args.level_cap)
        for cost in growth_scan(spec, entropies, progress=args.progress):
            rows.append((kind, from_nats(cost.entropy, args.units), cost.mean_energy, cost.mean_surface,
                         cost.product, cost.bound, cost.bound_ratio))
    write_csv(out, DEVICES_HEADER, rows)
    return 0


def cmd_estimate(args, out: TextIO) -> int:
    estimate = capacity_estimate(read_scenario(args.scenario))
    for line in scenario_lines(estimate.scenario):
        out.write(line + "\n")
    _report(out,
            r_squared_m2=estimate.r_squared,
            atoms=estimate.scenario.atoms,
            entropy_per_atom_nats=estimate.per_atom.nats,
            bits_per_atom=estimate.per_atom.bits,
            bits_per_dof=estimate.bits_per_dof,
            total_bits=estimate.total_bits,
            quoted_bits_per_atom=estimate.quoted_bits_per_atom,
            quoted_total_bits=estimate.quoted_total_bits,
            quoted_total_over_computed=estimate.quoted_total_ratio)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    common.add_argument("--progress", action="store_true", help="progress bar on stderr")
    common.add_argument("--output", type=Path, default=None, help="write to this file instead of stdout")
    units = argparse.ArgumentParser(add_help=False)
    units.add_argument("--units", choices=["nats", "bits"], default="nats", help="entropy units (default: nats)")

    parser = argparse.ArgumentParser(prog="qmembound", description="Energy x surface cost of storing information.")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("bound", parents=[common, units], help="the main product bound")
    p.add_argument("--entropy", type=float, required=True)
    p.add_argument("--dof", type=int, required=True)
    p.add_argument("--mass", type=float, required=True, help="kg")
    p.add_argument("--r-squared", type=float, default=None, help="<r^2> in m^2; also report the critical kappa")
    p.set_defaults(handler=cmd_bound)

    p = commands.add_parser("scan", parents=[common], help="direct vs steepest-descent ln Z_l on a log beta grid")
    p.add_argument("--dof", type=int, required=True)
    p.add_argument("--beta-min", type=float, required=True)
    p.add_argument("--beta-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--max-terms", type=int, default=DEFAULTS.max_terms)
    p.set_defaults(handler=cmd_scan)

    p = commands.add_parser("verify-lemma", parents=[common, units], help="challenge Boltzmann minimality")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--spectrum-file", type=Path, help="CSV with header energy,degeneracy")
    source.add_argument("--hopt-dof", type=int, help="use the optimal-Hamiltonian spectrum in this dimension")
    p.add_argument("--hopt-cap", type=float, default=None, help="energy cap for --hopt-dof")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--entropy", type=float)
    target.add_argument("--entropy-per-dof", type=float)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_verify_lemma)

    p = commands.add_parser("devices", parents=[common, units], help="box, oscillator and hydrogen costs")
    p.add_argument("--entropies", type=float, nargs="+", required=True)
    p.add_argument("--mass", type=float, default=ELECTRON_MASS, help="kg (default: electron mass)")
    p.add_argument("--box-width", type=float, default=DEFAULT_SCALES["box"], help="m")
    p.add_argument("--omega", type=float, default=DEFAULT_SCALES["oscillator"], help="1/s")
    p.add_argument("--coupling", type=float, default=DEFAULT_SCALES["hydrogen"], help="e^2 / (4 pi eps0) in J m")
    p.add_argument("--level-cap", type=int, default=200)
    p.set_defaults(handler=cmd_devices)

    p = commands.add_parser("estimate", parents=[common], help="capacity of the scenario body")
    p.add_argument("--scenario", type=Path, default=None, help="key=value file (default: packaged scenario)")
    p.set_defaults(handler=cmd_estimate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("qmembound").setLevel(level)
    logging.captureWarnings(True)
    buffer = io.StringIO()
    try:
        code = args.handler(args, buffer)
        if args.output is None:
            sys.stdout.write(buffer.getvalue())
        else:
            args.output.write_text(buffer.getvalue(), encoding="utf-8")
    except INPUT_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
