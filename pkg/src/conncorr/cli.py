"""Command-line harness: ``conncorr {report,scan,classify,fig2,lhv}``."""
from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import correlation as corr
from . import lhv
from .measures import measures_from_params, measures_from_state, negativity
from .qmat import DomainError, NumericError
from .scan import BIN_COLUMNS, WITNESS_COLUMNS, classify_bins, fig2_witnesses, read_scan, scan, write_scan
from .states import PAIRS, CanonicalParams, canonical_state, check_pair, density, from_amplitudes, reduce_pair


class UsageError(Exception):
    pass


def _floats(text, count, name):
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"{name}: expected comma-separated numbers, got {text!r}") from None
    if len(vals) != count:
        raise UsageError(f"{name}: expected {count} values, got {len(vals)}")
    return vals


def _unit_vector(text, name):
    v = np.array(_floats(text, 3, name))
    n = np.linalg.norm(v)
    if n == 0.0:
        raise UsageError(f"{name}: zero vector")
    return v / n


def _load_state(args):
    """Return (state vector, canonical params or None)."""
    if args.state and args.amps:
        raise UsageError("give either --state or --amps, not both")
    if args.amps:
        re_im = _floats(args.amps, 16, "--amps")
        amps = np.array(re_im[0::2]) + 1j * np.array(re_im[1::2])
        try:
            return from_amplitudes(amps), None
        except DomainError as exc:
            raise UsageError(f"--amps: {exc}") from None
    if args.state:
        vals = _floats(args.state, 6, "--state")
        try:
            p = CanonicalParams.normalized(*vals[:5], phi=vals[5])
        except DomainError as exc:
            raise UsageError(f"--state: {exc}") from None
        return canonical_state(p), p
    raise UsageError("a state is required (--state or --amps)")


def _report_data(args):
    pair = check_pair(args.pair)
    psi, params = _load_state(args)
    ms = measures_from_params(params, pair) if params is not None else measures_from_state(psi, pair)
    rho = reduce_pair(density(psi), pair)
    neg = negativity(rho)
    out = {
        "pair": pair,
        "E1": ms.e1, "E2": ms.e2, "E3": ms.e3, "E4": ms.e4, "E5": ms.e5,
        "N": neg.negativity, "logneg": neg.log_negativity,
    }
    for label, r in (("quantum", corr.r_matrix(rho)), ("connected", corr.connected_r_matrix(rho))):
        cls = corr.classify(r)
        best, _ = corr.chsh_optimize(r, restarts=args.restarts, seed=args.seed)
        out[label] = {
            "alpha1": cls.alpha1, "alpha2": cls.alpha2, "alpha3": cls.alpha3,
            "gamma1": cls.gamma1, "gamma2": cls.gamma2, "theta": cls.theta,
            "discriminant": cls.discriminant, "gamma": cls.gamma,
            "gamma_eigen": corr.max_violation_eigen(r),
            "gamma_optimizer": max(best, 0.0),
        }
    return out


def cmd_report(args, out):
    data = _report_data(args)
    if args.json:
        json.dump(data, out, indent=2)
        out.write("\n")
        return
    out.write(f"pair {data['pair']}\n")
    for key in ("E1", "E2", "E3", "E4", "E5", "N", "logneg"):
        out.write(f"{key:<8}{data[key]!r}\n")
    for label in ("quantum", "connected"):
        out.write(f"[{label}]\n")
        for key, val in data[label].items():
            out.write(f"  {key:<16}{val!r}\n")


def cmd_scan(args, out):
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    cols = scan(args.samples, seed=args.seed, pair=args.pair, separable_fraction=args.separable_fraction)
    if args.out in (None, "-"):
        write_scan(cols, out)
    else:
        write_scan(cols, args.out)


def _write_rows(rows, columns, target, out):
    def _emit(fh):
        w = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: (repr(float(v)) if isinstance(v, (float, np.floating)) else v) for k, v in row.items()})

    if target in (None, "-"):
        _emit(out)
    else:
        with open(target, "w", newline="", encoding="utf-8") as fh:
            _emit(fh)


def cmd_classify(args, out):
    cols = read_scan(args.scan)
    x_width = args.g2_width if args.fix == "g2theta" else args.a1_width
    rows = classify_bins(cols, args.fix, x_width, args.theta_width)
    _write_rows(rows, BIN_COLUMNS, args.out, out)


def cmd_fig2(args, out):
    cols = read_scan(args.scan)
    rows = fig2_witnesses(cols, args.g2_width, args.theta_width)
    _write_rows(rows, WITNESS_COLUMNS, args.out, out)
    print(f"{len(rows)} bins with witnesses", file=sys.stderr)


def _quarter_turn(v):
    # rotate by pi/2 about the lab y axis: z -> x, x -> -z
    return np.array([v[2], v[1], -v[0]])


def _lhv_data(args):
    pair = check_pair(args.pair)
    psi, _ = _load_state(args)
    rho = reduce_pair(density(psi), pair)
    r = corr.connected_r_matrix(rho) if args.correlator == "connected" else corr.r_matrix(rho)
    a = _unit_vector(args.a, "--a")
    b = _unit_vector(args.b, "--b")
    model = lhv.build_model(r)
    est, err, signed = lhv.mc_correlator(model, a, b, args.n, seed=args.seed)
    witness = lhv.freedom_of_choice_witness(model, (a, b), (_quarter_turn(a), _quarter_turn(b)), 0.5)
    return {
        "pair": pair,
        "correlator": args.correlator,
        "q": model.q.tolist(),
        "closed_form": lhv.correlator_closed(model, a, b),
        "direct": float(a @ r @ b),
        "mc_estimate": est,
        "mc_stderr": err,
        "signed_fraction": signed,
        "freedom_of_choice_witness": witness,
    }


def cmd_lhv(args, out):
    data = _lhv_data(args)
    if args.json:
        json.dump(data, out, indent=2)
        out.write("\n")
        return
    for key, val in data.items():
        out.write(f"{key:<27}{val!r}\n")


def _add_state_flags(p):
    p.add_argument("--state", help="canonical parameters l0,l1,l2,l3,l4,phi (amplitudes are normalized)")
    p.add_argument("--amps", help="16 comma-separated reals: re/im of the 8 amplitudes, interleaved")
    p.add_argument("--pair", default="12", choices=sorted(PAIRS))
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")


def build_parser():
    parser = argparse.ArgumentParser(prog="conncorr", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="measures and violations for one state")
    _add_state_flags(p)
    p.add_argument("--seed", type=int, default=0, help="optimizer seed")
    p.add_argument("--restarts", type=int, default=10)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("scan", help="random canonical states to CSV")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pair", default="12", choices=sorted(PAIRS))
    p.add_argument("--separable-fraction", type=float, default=0.0,
                   help="share of rows projected onto separable states of the pair")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("classify", help="bin a scan by (gamma2, theta) or (alpha1, theta)")
    p.add_argument("scan")
    p.add_argument("--fix", default="g2theta", choices=["g2theta", "a1theta"])
    p.add_argument("--g2-width", type=float, default=0.02)
    p.add_argument("--a1-width", type=float, default=0.02)
    p.add_argument("--theta-width", type=float, default=0.02)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("fig2", help="log-negativity vs gamma_c ordering witnesses")
    p.add_argument("scan")
    p.add_argument("--g2-width", type=float, default=0.02)
    p.add_argument("--theta-width", type=float, default=0.02)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("lhv", help="hidden-variable simulation of one correlator")
    _add_state_flags(p)
    p.add_argument("--a", default="0,0,1")
    p.add_argument("--b", default="0,0,1")
    p.add_argument("--n", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--correlator", default="connected", choices=["connected", "quantum"])
    p.set_defaults(func=cmd_lhv)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, out)
    except UsageError as exc:
        print(f"conncorr {args.command}: {exc}", file=sys.stderr)
        return 2
    except (DomainError, NumericError, OSError) as exc:
        print(f"conncorr {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
