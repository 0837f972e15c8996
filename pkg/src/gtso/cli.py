"""Command-line front end.

Exit codes: 0 success, 1 a residual exceeded its threshold, 2 invalid input.
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import epr, fock
from .errors import GtsoError
from .fock import TruncationConfig
from .symplectic import (
    Form,
    compose,
    decompose,
    factor_symplectic,
    max_deviation,
    symplectic_residual,
    target_symplectic,
    validate_params,
)
from .verify import is_truncation_limited, run_suite, sweep, threshold_for


class InputError(Exception):
    pass


def _floats(text, n, what):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise InputError(f"{what}: expected {n} comma-separated numbers, got {text!r}") from None
    if len(vals) != n or not all(np.isfinite(vals)):
        raise InputError(f"{what}: expected {n} finite comma-separated numbers, got {text!r}")
    return vals


def parse_complex(text, what="label"):
    re, im = _floats(text, 2, what)
    return complex(re, im)


def parse_params(text):
    try:
        return validate_params(*_floats(text, 4, "--abcd"))
    except GtsoError as exc:
        raise InputError(f"--abcd {text}: {exc}") from None


def parse_int_list(text):
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise InputError(f"--nmax-list: expected comma-separated integers, got {text!r}") from None
    if len(vals) < 2 or any(b <= a for a, b in zip(vals, vals[1:])):
        raise InputError("--nmax-list: need at least two strictly ascending values")
    return vals


def _config(args):
    try:
        return TruncationConfig(args.nmax, args.margin, args.tol)
    except GtsoError as exc:
        raise InputError(str(exc)) from None


def _matrix(m):
    return [[float(x) for x in row] for row in np.asarray(m)]


def _forms(text):
    return [Form.EQ22, Form.EQ25] if text == "both" else [Form.parse(text)]


# -- commands -----------------------------------------------------------------


def cmd_decompose(args):
    params = parse_params(args.abcd)
    target = target_symplectic(params)
    out = {"params": fock.params_dict(params), "form": args.form, "target": _matrix(target), "decompositions": []}
    for form in _forms(args.form):
        seq = decompose(params, form)
        composed = compose(seq)
        out["decompositions"].append(
            {
                "form": form.value,
                "factors": [
                    {"kind": f.kind.value, "param": f.param, "symplectic": _matrix(factor_symplectic(f))}
                    for f in seq
                ],
                "composed": _matrix(composed),
                "residual": max_deviation(composed, target),
                "symplectic_residual": symplectic_residual(composed),
            }
        )
    if args.output == "json":
        return out, 0
    rows = [["form", "index", "kind", "param", "residual"]]
    for dec in out["decompositions"]:
        for i, f in enumerate(dec["factors"]):
            rows.append([dec["form"], i, f["kind"], repr(f["param"]), repr(dec["residual"])])
    return rows, 0


def _verify_kwargs(args):
    return dict(
        form=args.form,
        eta=parse_complex(args.eta, "--eta") if args.eta else None,
        xi=parse_complex(args.xi, "--xi") if args.xi else None,
        lam=args.lam,
        draws=args.draws,
        seed=args.seed,
    )


def cmd_verify(args):
    params = parse_params(args.abcd)
    config = _config(args)
    report, thresholds, passed = run_suite(params, config, **_verify_kwargs(args))
    code = 0 if passed else 1
    if args.output == "json":
        return {
            "params": fock.params_dict(params),
            "form": args.form,
            "truncation": config.as_dict(),
            "residuals": report.residuals,
            "thresholds": thresholds,
            "pass": passed,
            "failed": sorted(k for k, v in report.residuals.items() if not v <= thresholds[k]),
            "diagnostics": report.diagnostics,
        }, code
    names = list(report.residuals)
    return [names + ["pass"], [repr(report.residuals[k]) for k in names] + [str(passed).lower()]], code


def cmd_state(args):
    config = _config(args)
    which = args.which
    if which in ("eta", "xi", "eta_db"):
        if args.label is None:
            raise InputError(f"state {which} needs --label re,im")
        label = parse_complex(args.label, "--label")
    params = parse_params(args.abcd) if which in ("gtso_vacuum", "eta_db") else None

    out = {"which": which, "truncation": config.as_dict(), "params": fock.params_dict(params)}
    if which == "gtso_vacuum":
        u = fock.realize_gtso(params, Form.EQ22 if args.form == "both" else args.form, config)
        vec = u[:, 0]
        sigma, resid = fock.vacuum_covariance(u, config, params)
        out["covariance"] = _matrix(sigma)
        out["covariance_residual"] = resid
    elif which == "eta":
        vec = epr.eta_state(label, config)
    elif which == "xi":
        vec = epr.xi_state(label, config)
    else:
        vec = epr.eta_db_state(label, params, config)
    if which != "gtso_vacuum":
        out["label"] = [label.real, label.imag]

    n1, n2 = fock.basis_labels(config)
    keep = np.flatnonzero(np.abs(vec) > args.amplitude_floor)
    out["amplitudes"] = [
        {"n1": int(n1[i]), "n2": int(n2[i]), "re": float(vec[i].real), "im": float(vec[i].imag)} for i in keep
    ]
    if args.output == "json":
        return out, 0
    rows = [["kind", "i", "j", "re", "im"]]
    rows += [["amp", a["n1"], a["n2"], repr(a["re"]), repr(a["im"])] for a in out["amplitudes"]]
    for i, row in enumerate(out.get("covariance", [])):
        rows += [["cov", i, j, repr(v), "0.0"] for j, v in enumerate(row)]
    return rows, 0


def cmd_sweep(args):
    params = parse_params(args.abcd)
    n_list = parse_int_list(args.nmax_list)
    frac = args.margin_fraction if args.margin_fraction is not None else args.margin / args.nmax
    try:
        rows = sweep(params, n_list, frac, args.tol, **_verify_kwargs(args))
    except GtsoError as exc:
        raise InputError(str(exc)) from None
    names = list(rows[0][1].residuals)
    if args.output == "json":
        return {
            "params": fock.params_dict(params),
            "form": args.form,
            "margin_fraction": frac,
            "thresholds": {k: threshold_for(k, rows[0][0]) for k in names},
            "truncation_limited": [k for k in names if is_truncation_limited(k)],
            "rows": [
                {"truncation": cfg.as_dict(), "residuals": rep.residuals, "pass": ok} for cfg, rep, ok in rows
            ],
        }, 0
    table = [["n_max", "margin"] + names]
    for cfg, rep, _ in rows:
        table.append([cfg.n_max, cfg.margin] + [repr(rep.residuals[k]) for k in names])
    return table, 0


# -- plumbing -----------------------------------------------------------------


def _emit(payload, fmt):
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(payload)
    return buf.getvalue()


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--abcd", default="1,0,0,1", help="parameters a,b,c,d with ad-bc=1")
    common.add_argument("--form", choices=["eq22", "eq25", "both"], default="both")
    common.add_argument("--nmax", type=int, default=16)
    common.add_argument("--margin", type=int, default=6)
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--eta", help="EPR label re,im")
    common.add_argument("--xi", help="conjugate EPR label re,im")
    common.add_argument("--lambda", dest="lam", type=float, help="two-mode squeezing strength")
    common.add_argument("--output", choices=["json", "csv"], default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--draws", type=int, default=0, help="random parameter draws for the symplectic suite")
    common.add_argument("--amplitude-floor", type=float, default=1e-12)
    common.add_argument("--out", help="write to PATH instead of stdout")

    parser = argparse.ArgumentParser(prog="gtso", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("decompose", parents=[common], help="emit factor sequences and their symplectics")
    sub.add_parser("verify", parents=[common], help="run the residual suite")
    st = sub.add_parser("state", parents=[common], help="export a state's amplitudes")
    st.add_argument("which", choices=["gtso_vacuum", "eta", "xi", "eta_db"])
    st.add_argument("--label", help="state label re,im")
    sw = sub.add_parser("sweep", parents=[common], help="residuals versus truncation")
    sw.add_argument("--nmax-list", required=True)
    sw.add_argument("--margin-fraction", type=float)
    return parser


COMMANDS = {"decompose": cmd_decompose, "verify": cmd_verify, "state": cmd_state, "sweep": cmd_sweep}


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.output is None:
        args.output = "csv" if args.command == "sweep" else "json"
    try:
        payload, code = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"gtso {args.command}: error: {exc}", file=sys.stderr)
        return 2
    text = _emit(payload, args.output)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
