"""``levselect`` command line: scores, select, experiment, bounds, synth.

Exit status is 0 on success, 1 for I/O, parse and usage errors and 2 for
domain errors (infeasible thresholds, bad epsilon, infeasible targets...).
Column indices in every output are 1-based.
"""
import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DomainError, InputError
from .evaluation import check_epsilon, comparison_counts, lemma1_certificate
from .experiment import ExperimentConfig, dumps_json, run_experiment, write_report
from .leverage import fit_power_law, leverage_scores
from .matrixio import FORMATS, load_matrix, write_matrix
from .selectors import (
    APPROX_BASIS,
    DETERMINISTIC,
    METHODS,
    RANDOMIZED,
    select_deterministic,
    select_pivoted_qr,
    select_randomized,
    select_with_basis,
    theta_from_epsilon,
)
from .sketch import FREQUENT_DIRECTIONS, RANGEFINDER, exact_basis, frequent_directions_basis, rangefinder_basis
from .synthgen import NEAR_UNIFORM, POWER_LAW, assemble_factors, make_spec

EXIT_OK, EXIT_IO, EXIT_DOMAIN = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _int_list(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _float_list(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _float_or_none(x):
    return None if x is None or np.isnan(x) else float(x)


def cmd_scores(args):
    a = load_matrix(args.input, args.format)
    profile = leverage_scores(exact_basis(a, args.k).z, args.k)
    fit = fit_power_law(profile, args.top_t)
    lines = ["index,score\n"]
    for i in profile.order:
        lines.append(f"{int(i) + 1},{float(profile.scores[i])!r}\n")
    fit_doc = dumps_json({"k": args.k, "alpha": fit.alpha, "beta": fit.beta,
                          "r_squared": fit.r_squared, "fitted_count": fit.fitted_count})
    if args.out_format == "json":
        doc = json.loads(fit_doc)
        doc["scores"] = [[int(i) + 1, float(profile.scores[i])] for i in profile.order]
        _emit(dumps_json(doc), args.out)
        return
    _emit("".join(lines), args.out)
    if args.fit_out:
        _emit(fit_doc, args.fit_out)
    elif args.out not in (None, "-"):
        sys.stdout.write(fit_doc)
    else:
        sys.stderr.write(fit_doc)


def _selection_basis(a, args):
    if args.method != APPROX_BASIS:
        return exact_basis(a, args.k).z
    if args.basis == RANGEFINDER:
        return rangefinder_basis(a, args.k, args.basis_epsilon, args.seed).z
    return frequent_directions_basis(a, args.k, args.basis_epsilon).z


def cmd_select(args):
    a = load_matrix(args.input, args.format)
    theta = args.theta
    if args.epsilon is not None:
        check_epsilon(args.epsilon)
        theta = theta_from_epsilon(args.k, args.epsilon)
    if args.method in (DETERMINISTIC, APPROX_BASIS):
        if theta is None:
            raise UsageError(f"--theta or --epsilon is required for {args.method}")
    elif args.c is None:
        raise UsageError(f"--c is required for {args.method}")
    z = _selection_basis(a, args)
    profile = leverage_scores(z, args.k)
    if args.method == DETERMINISTIC:
        sel = select_deterministic(profile, theta)
    elif args.method == APPROX_BASIS:
        sel = select_with_basis(a, z, args.k, theta)
    elif args.method == RANDOMIZED:
        sel = select_randomized(profile, args.c, args.seed)
    else:
        sel = select_pivoted_qr(a, args.c, profile)
    doc = {
        "method": sel.method,
        "k": args.k,
        "theta": sel.theta,
        "c": sel.c,
        "indices": [i + 1 for i in sel.indices],
        "mass": _float_or_none(sel.mass),
        "certificate": lemma1_certificate(z, sel),
        "forced": sel.forced,
        "seed": sel.seed,
    }
    _emit(dumps_json(doc), args.out)


def _experiment_config(args):
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.config}: {exc}") from None
    else:
        data = {}
    flags = {
        "k_list": args.k_list, "c_list": args.c_list, "theta_list": args.theta_list,
        "epsilon_list": args.epsilon_list, "methods": args.method, "repetitions": args.reps,
        "seed": args.seed, "norm": args.norm, "input": args.input, "input_format": args.format,
        "basis": args.basis, "basis_epsilon": args.basis_epsilon, "output_path": args.out,
        "output_format": args.out_format, "jobs": args.jobs,
    }
    for key, value in flags.items():
        if value is not None:
            data[key] = value
    if args.synthetic:
        data["synthetic"] = {"kind": args.synthetic, "m": args.m, "n": args.n, "alpha": args.alpha}
    if data.get("input") is not None:
        data.pop("synthetic", None)
    try:
        return ExperimentConfig(**data)
    except TypeError as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_experiment(args):
    config = _experiment_config(args)
    report = run_experiment(config)
    if config.output_path in (None, "-"):
        if config.output_format != "json":
            raise UsageError("--out is required for CSV experiment output")
        sys.stdout.write(dumps_json(report))
    else:
        write_report(report, config.output_path, config.output_format)


def cmd_bounds(args):
    _emit(dumps_json(comparison_counts(args.k, args.epsilon, args.eta).to_dict()), args.out)


def cmd_synth(args):
    if args.out in (None, "-"):
        raise UsageError("--out is required for synth")
    spec = make_spec(args.kind, args.m, args.n, args.k, args.seed, alpha=args.alpha)
    a, _, sigma, v = assemble_factors(spec)
    fmt = args.out_format if args.out_format in FORMATS else None
    write_matrix(a, args.out, fmt)
    realized = np.einsum("ij,ij->i", v[:, :args.k], v[:, :args.k])
    sidecar = {
        "kind": spec.profile_kind, "m": spec.m, "n": spec.n, "k": spec.k,
        "alpha": args.alpha, "seed": spec.seed, "capped": spec.capped,
        "targets": [float(x) for x in spec.targets],
        "profile": [float(x) for x in realized],
        "singular_values": [float(x) for x in sigma],
        "version": __version__,
    }
    side = args.sidecar or str(Path(args.out).with_suffix(".profile.json"))
    Path(side).write_text(dumps_json(sidecar), encoding="utf-8")


def build_parser():
    p = _Parser(prog="levselect", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp, need_input=True):
        sp.add_argument("--input", required=need_input, help="matrix file (MatrixMarket or CSV)")
        sp.add_argument("--format", choices=FORMATS, help="input format; guessed from the suffix")
        sp.add_argument("--out", help="output path (default stdout)")

    sp = sub.add_parser("scores", help="rank-k leverage scores and a power-law fit")
    common(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--top-t", type=int, default=None)
    sp.add_argument("--out-format", choices=("csv", "json"), default="csv")
    sp.add_argument("--fit-out", help="where to write the fit JSON in CSV mode")
    sp.set_defaults(func=cmd_scores)

    sp = sub.add_parser("select", help="select columns")
    common(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--method", choices=METHODS, default=DETERMINISTIC)
    sp.add_argument("--theta", type=float)
    sp.add_argument("--epsilon", type=float, help="shorthand for --theta k-epsilon")
    sp.add_argument("--c", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--basis", choices=(FREQUENT_DIRECTIONS, RANGEFINDER), default=FREQUENT_DIRECTIONS)
    sp.add_argument("--basis-epsilon", type=float, default=0.5)
    sp.add_argument("--out-format", choices=("json",), default="json")
    sp.set_defaults(func=cmd_select)

    sp = sub.add_parser("experiment", help="run a (k, sweep, method) grid")
    common(sp, need_input=False)
    sp.add_argument("--config", help="JSON file with ExperimentConfig fields; flags override it")
    sp.add_argument("--synthetic", choices=(NEAR_UNIFORM, POWER_LAW))
    sp.add_argument("--m", type=int, default=200)
    sp.add_argument("--n", type=int, default=1000)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--k", dest="k_list", type=_int_list)
    sweep = sp.add_mutually_exclusive_group()
    sweep.add_argument("--c", dest="c_list", type=_int_list)
    sweep.add_argument("--theta", dest="theta_list", type=_float_list)
    sweep.add_argument("--epsilon", dest="epsilon_list", type=_float_list)
    sp.add_argument("--method", action="append", choices=METHODS)
    sp.add_argument("--reps", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--norm", choices=("spectral", "frobenius", "both"))
    sp.add_argument("--basis", choices=(FREQUENT_DIRECTIONS, RANGEFINDER))
    sp.add_argument("--basis-epsilon", type=float)
    sp.add_argument("--jobs", type=int)
    sp.add_argument("--out-format", choices=("json", "csv"))
    sp.set_defaults(func=cmd_experiment)

    sp = sub.add_parser("bounds", help="column counts from the theory")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--eta", type=float, default=1.0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("synth", help="generate a matrix with prescribed leverage scores")
    sp.add_argument("--kind", choices=(NEAR_UNIFORM, POWER_LAW), required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.add_argument("--out-format", choices=FORMATS)
    sp.add_argument("--sidecar", help="profile JSON path (default <out>.profile.json)")
    sp.set_defaults(func=cmd_synth)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        # remaining ValueErrors come from argument combinations (c out of range...)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
