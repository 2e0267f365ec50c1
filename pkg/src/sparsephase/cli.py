"""Command line interface.

Subcommands::

    sparsephase synth   --signal S.json --step H --count M --out meas.csv
    sparsephase recover --measurements meas.csv --order M --bound L [--eps ...] --out report.json
    sparsephase eval    (--signal S.json | --report R.json) --from A --to B --points P --out curve.csv
    sparsephase compare --ref A.json --rec B.json --tol T

Exit codes: 0 success, 1 comparison failed, 2 invalid input, 3 I/O error,
4 recovery pipeline failure. Every failure prints one line to stderr.
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__
from .errors import InvalidSignal, PreconditionError, SparsePhaseError
from .model import IntensitySamples, RecoveryConfig, SplineSignal, make_signal
from .retrieval import equivalent_mod_trivial, recover_signal
from .splines import spline_value
from .synthesis import sample_intensities

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_IO, EXIT_PIPELINE = 0, 1, 2, 3, 4
MEASUREMENT_HEADER = ["k", "omega", "magnitude"]
OMEGA_RTOL = 1e-12


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def fmt(x):
    return format(float(x), ".17g")


def _read_text(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO) from exc


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror or exc}", EXIT_IO) from exc


def _pairs(values, field):
    try:
        arr = np.array(values, dtype=float)
    except (TypeError, ValueError):
        raise CliError(f"{field}: expected a list of [re, im] pairs", EXIT_INPUT)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise CliError(f"{field}: expected a list of [re, im] pairs", EXIT_INPUT)
    return arr[:, 0] + 1j * arr[:, 1]


def _reals(values, field):
    try:
        arr = np.array(values, dtype=float)
    except (TypeError, ValueError):
        raise CliError(f"{field}: expected a list of numbers", EXIT_INPUT)
    if arr.ndim != 1:
        raise CliError(f"{field}: expected a list of numbers", EXIT_INPUT)
    return arr


def _json(path):
    text = _read_text(path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})", EXIT_INPUT)
    if not isinstance(doc, dict):
        raise CliError(f"{path}: expected a JSON object", EXIT_INPUT)
    return doc


def signal_from_doc(doc, path="<signal>"):
    """Signal from a signal description file or from a recovery report."""
    kind = doc.get("type")
    if kind not in ("spikes", "spline"):
        raise CliError(f"{path}: type: expected 'spikes' or 'spline', got {kind!r}", EXIT_INPUT)
    order = doc.get("order", 0) or 0
    if not isinstance(order, int) or isinstance(order, bool):
        raise CliError(f"{path}: order: expected an integer", EXIT_INPUT)
    if (kind == "spikes") != (order == 0):
        raise CliError(f"{path}: order: {order} is inconsistent with type {kind!r}", EXIT_INPUT)
    if "knots" not in doc:
        raise CliError(f"{path}: knots: missing", EXIT_INPUT)
    knots = _reals(doc["knots"], f"{path}: knots")
    if "coefficients" in doc:
        field = "coefficients"
    else:
        field = "c0" if order == 0 else "cm"
    if field not in doc:
        raise CliError(f"{path}: coefficients: missing", EXIT_INPUT)
    coeffs = _pairs(doc[field], f"{path}: {field}")
    try:
        return make_signal(order, knots, coeffs)
    except InvalidSignal as exc:
        raise CliError(f"{path}: {exc}", EXIT_INPUT)


def load_signal(path):
    return signal_from_doc(_json(path), path)


def signal_to_doc(signal):
    spline = isinstance(signal, SplineSignal)
    return {
        "type": "spline" if spline else "spikes",
        "order": signal.order,
        "knots": [float(t) for t in signal.knots],
        "coefficients": [[float(c.real), float(c.imag)] for c in signal.coefficients],
    }


def _complex_list(values):
    return [[float(c.real), float(c.imag)] for c in values]


def write_measurements(samples: IntensitySamples):
    buf = io.StringIO()
    buf.write(",".join(MEASUREMENT_HEADER) + "\n")
    for k, (w, v) in enumerate(zip(samples.omegas, samples.values)):
        buf.write(f"{k},{fmt(w)},{fmt(v)}\n")
    return buf.getvalue()


def read_measurements(path) -> IntensitySamples:
    text = _read_text(path)
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != MEASUREMENT_HEADER:
        raise CliError(f"{path}: header must be {','.join(MEASUREMENT_HEADER)}", EXIT_INPUT)
    ks, omegas, mags = [], [], []
    for line, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 3:
            raise CliError(f"{path}: line {line}: expected 3 columns", EXIT_INPUT)
        try:
            ks.append(int(row[0]))
            omegas.append(float(row[1]))
            mags.append(float(row[2]))
        except ValueError:
            raise CliError(f"{path}: line {line}: malformed number", EXIT_INPUT)
    if len(ks) < 2:
        raise CliError(f"{path}: need at least 2 samples to determine the step", EXIT_INPUT)
    if ks != list(range(len(ks))):
        raise CliError(f"{path}: k column must be contiguous from 0", EXIT_INPUT)
    omegas = np.array(omegas)
    step = omegas[1] - omegas[0]
    grid = step * np.arange(len(ks))
    if not step > 0 or np.any(np.abs(omegas - grid) > OMEGA_RTOL * np.maximum(np.abs(grid), step)):
        raise CliError(f"{path}: omega column is not a uniform grid h*k", EXIT_INPUT)
    mags = np.array(mags)
    if not np.all(np.isfinite(mags)) or np.any(mags < 0):
        raise CliError(f"{path}: magnitude: values must be finite and non-negative", EXIT_INPUT)
    return IntensitySamples(step, mags)


def report_to_doc(report, config):
    return {
        "type": "spline" if report.order else "spikes",
        "order": report.order,
        "knots": [float(t) for t in report.knots],
        "c0": _complex_list(report.c0),
        "cm": _complex_list(report.cm),
        "residuals": {k: float(v) for k, v in report.residuals.items()},
        "config": {
            "order": config.order,
            "bound": config.upper_bound,
            "eps": config.eps,
            "eps1": config.eps1,
            "eps2": config.eps2,
            "eps3": config.eps3,
        },
        "warnings": list(report.warnings),
    }


def cmd_synth(args):
    signal = load_signal(args.signal)
    if not args.step > 0:
        raise CliError(f"--step: must be positive, got {args.step}", EXIT_INPUT)
    if args.count < 1:
        raise CliError(f"--count: must be >= 1, got {args.count}", EXIT_INPUT)
    samples = sample_intensities(signal, args.step, args.count)
    _write_text(args.out, write_measurements(samples))
    return EXIT_OK


def cmd_recover(args):
    samples = read_measurements(args.measurements)
    try:
        config = RecoveryConfig(args.order, args.bound, args.eps, args.eps1, args.eps2, args.eps3)
    except PreconditionError as exc:
        raise CliError(str(exc), EXIT_INPUT)
    try:
        report = recover_signal(samples, config)
    except PreconditionError as exc:
        raise CliError(f"precondition: {exc}", EXIT_INPUT)
    except SparsePhaseError as exc:
        raise CliError(f"recovery failed: {exc}", EXIT_PIPELINE)
    text = json.dumps(report_to_doc(report, config), indent=2) + "\n"
    _write_text(args.out, text)
    return EXIT_OK


def cmd_eval(args):
    if args.signal is not None:
        signal = load_signal(args.signal)
    else:
        signal = signal_from_doc(_json(args.report), args.report)
    if not args.start < args.stop:
        raise CliError("--from must be smaller than --to", EXIT_INPUT)
    if args.points < 2:
        raise CliError("--points must be >= 2", EXIT_INPUT)
    t = np.linspace(args.start, args.stop, args.points)
    buf = io.StringIO()
    if isinstance(signal, SplineSignal):
        values = spline_value(signal, t)
        buf.write("t,re,im\n")
        for ti, v in zip(t, values):
            buf.write(f"{fmt(ti)},{fmt(v.real)},{fmt(v.imag)}\n")
    else:
        rows = [(ti, 0j, 0) for ti in t]
        rows += [
            (tk, c, 1)
            for tk, c in zip(signal.knots, signal.coefficients)
            if args.start <= tk <= args.stop
        ]
        rows.sort(key=lambda r: (r[0], r[2]))
        buf.write("t,re,im,is_knot\n")
        for ti, v, flag in rows:
            buf.write(f"{fmt(ti)},{fmt(v.real)},{fmt(v.imag)},{flag}\n")
    _write_text(args.out, buf.getvalue())
    return EXIT_OK


def cmd_compare(args):
    ref = signal_from_doc(_json(args.ref), args.ref)
    rec = signal_from_doc(_json(args.rec), args.rec)
    if type(ref) is not type(rec) or ref.order != rec.order:
        raise CliError("reference and recovery are different model types", EXIT_INPUT)
    ok, dk, dc = equivalent_mod_trivial(ref, rec, args.tol)
    print(f"knot_deviation={fmt(dk)}")
    print(f"coefficient_deviation={fmt(dc)}")
    print(f"equivalent={'yes' if ok else 'no'}")
    return EXIT_OK if ok else EXIT_MISMATCH


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(f"{self.prog}: {message}", EXIT_INPUT)


def build_parser():
    parser = _Parser(prog="sparsephase", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="write exact Fourier magnitudes of a signal")
    p.add_argument("--signal", required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("recover", help="recover a signal from Fourier magnitudes")
    p.add_argument("--measurements", required=True)
    p.add_argument("--order", type=int, default=0)
    p.add_argument("--bound", type=int, required=True, help="upper bound L on the knot count")
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--eps1", type=float, default=1e-5)
    p.add_argument("--eps2", type=float, default=1e-7)
    p.add_argument("--eps3", type=float, default=1e-10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("eval", help="evaluate a signal on an equispaced grid")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--signal")
    src.add_argument("--report")
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="compare two signals up to trivial ambiguities")
    p.add_argument("--ref", required=True)
    p.add_argument("--rec", required=True)
    p.add_argument("--tol", type=float, required=True)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
