"""Command-line entry point: ``holderlift <subcommand> ...``.

Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import report
from .bernstein import Functional, moment_convergence_check, uniform_integrability_curve
from .coupling import GeneratorKind, generate_ensemble, load_ensemble, save_ensemble
from .errors import NumericalError, ValidationError
from .holder import norm_convergence_curve
from .modulus import load_profiles
from .orlicz import YoungFunction, theta_orlicz_report
from .pipeline import StrengthenConfig, run_strengthen
from .scaling import DEFAULT_QUANTILE, ScalingTable, fit_scaling

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _positive_int(text):
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if val < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {val}")
    return val


def _quantile(text):
    val = float(text)
    if not 0 < val <= 1:
        raise argparse.ArgumentTypeError(f"quantile must lie in (0, 1]: {val}")
    return val


def _caps(text):
    try:
        return [float(c) for c in text.split(",") if c.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"caps must be comma-separated reals: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="holderlift", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=_positive_int, default=1, help="cap on worker threads")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def gen_flags(sp):
        sp.add_argument("--kind", default="SMOOTH_DECAY", choices=[k.value for k in GeneratorKind])
        sp.add_argument("--m", type=_positive_int, default=256)
        sp.add_argument("--n-seq", type=_positive_int, default=32)
        sp.add_argument("--reps", type=_positive_int, default=50)
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("strengthen", help="full pipeline on a generated or ingested ensemble")
    gen_flags(sp)
    sp.add_argument("--ensemble", help="ingest this ensemble manifest instead of generating")
    sp.add_argument("--quantile", type=_quantile, default=DEFAULT_QUANTILE)
    sp.add_argument("--phi", default='{"family": "power", "p": 2}')
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("simulate", help="generate a coupled ensemble and save it")
    gen_flags(sp)
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("fit-scaling", help="fit a scaling table to saved envelopes")
    sp.add_argument("--envelopes", required=True)
    sp.add_argument("--quantile", type=_quantile, default=DEFAULT_QUANTILE)
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("holder-report", help="Hoelder-norm convergence curve of an ensemble")
    sp.add_argument("--ensemble", required=True)
    sp.add_argument("--g", required=True)
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("orlicz-report", help="Luxemburg norm and tail of theta samples")
    sp.add_argument("--theta", required=True)
    sp.add_argument("--phi", required=True)
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("bernstein-check", help="uniform integrability and moment convergence")
    sp.add_argument("--ensemble", required=True)
    sp.add_argument("--functional", required=True)
    sp.add_argument("--caps", type=_caps, required=True)
    sp.add_argument("--reference", type=float, default=None)
    sp.add_argument("--out", required=True)
    return p


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from None


def _read_theta(path) -> np.ndarray:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
        if isinstance(obj, dict):
            obj = obj["theta"]
        vals = np.asarray(obj, dtype=float)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError):
        try:
            vals = np.asarray([float(x) for x in text.replace(",", " ").split()])
        except ValueError as exc:
            raise ValidationError(f"cannot parse theta samples: {exc}") from None
    if vals.ndim != 1 or vals.size == 0:
        raise ValidationError("theta file must hold a nonempty list of reals")
    return vals


def run(args) -> int:
    if args.command == "strengthen":
        cfg = StrengthenConfig(kind=args.kind, m=args.m, N=args.n_seq, R=args.reps, seed=args.seed,
                               quantile=args.quantile, phi=YoungFunction.from_config(args.phi).to_config(),
                               ensemble=args.ensemble, threads=args.threads)
        report.write(args.out, run_strengthen(cfg))
        return EXIT_OK
    if args.command == "simulate":
        e = generate_ensemble(args.kind, args.m, args.n_seq, args.reps, args.seed, threads=args.threads)
        save_ensemble(args.out, e)
        return EXIT_OK
    if args.command == "fit-scaling":
        report.write(args.out, fit_scaling(load_profiles(args.envelopes), args.quantile).to_json())
        return EXIT_OK
    if args.command == "holder-report":
        curve = norm_convergence_curve(load_ensemble(args.ensemble), ScalingTable.from_json(_read_json(args.g)))
        report.write(args.out, curve.to_json())
        return EXIT_NUMERICAL if np.any(curve.non_members) else EXIT_OK
    if args.command == "orlicz-report":
        phi = YoungFunction.from_config(args.phi)
        report.write(args.out, theta_orlicz_report(_read_theta(args.theta), phi).to_json())
        return EXIT_OK
    if args.command == "bernstein-check":
        e = load_ensemble(args.ensemble)
        v = Functional.from_config(args.functional)
        out = {"functional": v.to_config(),
               "uniform_integrability": uniform_integrability_curve(e, v, args.caps).to_json(),
               "moment_convergence": moment_convergence_check(e, v, args.reference).to_json()}
        report.write(args.out, out)
        return EXIT_OK
    raise ValidationError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    try:
        return run(build_parser().parse_args(argv))
    except ValidationError as exc:
        code, err = EXIT_VALIDATION, exc
    except (OSError, json.JSONDecodeError) as exc:
        # unreadable or malformed input files are input errors too
        code, err = EXIT_VALIDATION, ValidationError(f"cannot read input: {exc}")
    except NumericalError as exc:
        code, err = EXIT_NUMERICAL, exc
    sys.stderr.write(json.dumps({"error": type(err).__name__, "message": str(err), "exit_code": code}) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
