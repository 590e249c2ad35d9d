"""Command-line front end.

Subcommands: ``dist``, ``mandel``, ``estimate``, ``predict``, ``simulate``
and ``reproduce-table2``. All tabular output is CSV with ``\\n`` line
endings; floats are written with ``repr`` so they round-trip exactly.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from .absorption import uk_total, wk_pmf
from .dist import ThermalCellDistribution, be_pmf
from .errors import DomainError, EstimationError, TruncationError
from .mandel import IntegratedIntensityLaw, mandel_pcount
from .mc import SimConfig, simulate
from .photometry import (
    TABLE2_HEADER,
    ChopperModel,
    PhotometryCounts,
    eta_chopper,
    eta_pulse_height,
    eta_two_channel,
    predict_counts,
    reproduce_table2,
)

ESTIMATE_HEADER = ("method", "N1", "N2", "Nc", "NA", "NB", "N1e", "N2e", "M")
_FIELD = {"N1": "n1", "N2": "n2", "Nc": "nc", "NA": "na", "NB": "nb", "N1e": "n1e", "N2e": "n2e", "M": "m"}


class CLIError(Exception):
    pass


def _num(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return repr(float(x))


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CLIError(f"cannot write {path}: {exc.strerror}") from exc


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc.strerror}") from exc


# -- subcommands ----------------------------------------------------------

def cmd_dist(args) -> str:
    if args.kind == "wk":
        if args.mean_occupation is not None:
            raise CLIError("--kind wk takes --cell-filling, not --mean-occupation")
        if args.cell_filling is None:
            raise CLIError("--kind wk requires --cell-filling")
        values = [wk_pmf(args.cell_filling, k) for k in range(args.max_index + 1)]
    else:
        if args.cell_filling is not None:
            raise CLIError(f"--kind {args.kind} takes --mean-occupation, not --cell-filling")
        if args.mean_occupation is None:
            raise CLIError(f"--kind {args.kind} requires --mean-occupation")
        dist = ThermalCellDistribution(args.mean_occupation)
        if args.kind == "be":
            values = [be_pmf(dist, n) for n in range(args.max_index + 1)]
        else:
            values = [uk_total(dist, k, args.tol).value for k in range(args.max_index + 1)]
    return _csv(("index", "probability"), ((i, _num(v)) for i, v in enumerate(values)))


def _read_table(path: str) -> tuple[list[float], list[float]]:
    rows = list(csv.reader(io.StringIO(_read(path))))
    if not rows or [c.strip() for c in rows[0]] != ["W", "density"]:
        raise CLIError(f"{path}: header must be 'W,density'")
    try:
        pairs = [(float(r[0]), float(r[1])) for r in rows[1:] if r]
    except (ValueError, IndexError) as exc:
        raise CLIError(f"{path}: malformed row ({exc})") from exc
    return [p[0] for p in pairs], [p[1] for p in pairs]


def cmd_mandel(args) -> str:
    if args.law == "deterministic":
        if args.w is None:
            raise CLIError("--law deterministic requires --w")
        law = IntegratedIntensityLaw.deterministic(args.w)
    elif args.law == "exponential":
        if args.mean_w is None:
            raise CLIError("--law exponential requires --mean-w")
        law = IntegratedIntensityLaw.exponential(args.mean_w)
    else:
        if args.table is None:
            raise CLIError("--law tabulated requires --table")
        law = IntegratedIntensityLaw.tabulated(*_read_table(args.table), normalize=args.normalize)
    return _csv(("index", "probability"), ((n, _num(mandel_pcount(law, n))) for n in range(args.max_index + 1)))


def _parse_counts(row: list[str], lineno: int) -> tuple[str, PhotometryCounts]:
    if len(row) != len(ESTIMATE_HEADER):
        raise CLIError(f"line {lineno}: expected {len(ESTIMATE_HEADER)} fields, got {len(row)}")
    values = {}
    for name, cell in zip(ESTIMATE_HEADER[1:], row[1:]):
        cell = cell.strip()
        if cell:
            try:
                values[_FIELD[name]] = float(cell)
            except ValueError:
                raise CLIError(f"line {lineno}: {name} is not a number: {cell!r}") from None
    return row[0].strip(), PhotometryCounts(**values)


def _flags(*estimates) -> str:
    out = []
    for label, est in estimates:
        out += [f"{label}:{f}" if label else f for f in est.flags]
    return ";".join(out)


def cmd_estimate(args) -> str:
    rows = list(csv.reader(io.StringIO(_read(args.input))))
    if not rows or tuple(rows[0]) != ESTIMATE_HEADER:
        raise CLIError(f"{args.input}: header must be exactly '{','.join(ESTIMATE_HEADER)}'")
    chopper = ChopperModel(args.eta_x)
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        method, counts = _parse_counts(row, lineno)
        try:
            if method == "two_channel":
                e1, e2 = eta_two_channel(counts, args.theory)
                out.append((method, args.theory, _num(e1.eta), _num(e2.eta), _flags(("eta1", e1), ("eta2", e2))))
                continue
            if method == "pulse_height":
                n2e, n1e = counts.require("n2e", "n1e")
                est = eta_pulse_height(n2e, n1e, args.theory)
            elif method == "chopper":
                na, nb = counts.require("na", "nb")
                est = eta_chopper(na, nb, args.theory, chopper)
            else:
                raise CLIError(f"line {lineno}: unknown method {method!r}")
        except EstimationError as exc:
            raise CLIError(f"line {lineno}: {exc}") from None
        out.append((method, args.theory, _num(est.eta), "", _flags(("", est))))
    return _csv(("method", "theory", "eta1", "eta2", "flags"), out)


def cmd_predict(args) -> str:
    c = predict_counts(args.m, args.eta1, args.eta2, args.theory, ChopperModel(args.eta_x))
    rows = []
    if args.eta2 is not None:
        rows.append(("two_channel", _num(c.n1), _num(c.n2), _num(c.nc), "", "", "", "", _num(c.m)))
    rows.append(("pulse_height", "", "", "", "", "", _num(c.n1e), _num(c.n2e), _num(c.m)))
    rows.append(("chopper", "", "", "", _num(c.na), _num(c.nb), "", "", _num(c.m)))
    return _csv(ESTIMATE_HEADER, rows)


def cmd_reproduce_table2(args) -> str:
    return _csv(TABLE2_HEADER, (row.cells() for row in reproduce_table2()))


def cmd_simulate(args) -> tuple[str, str, bool]:
    try:
        raw = json.loads(_read(args.config))
        if not isinstance(raw, dict):
            raise ValueError("top level must be an object")
        if args.workers is not None:
            raw["workers"] = args.workers
        config = SimConfig.from_dict(raw)
    except (ValueError, TypeError) as exc:
        raise CLIError(f"{args.config}: {exc}") from None
    result = simulate(config)
    tally_rows = [
        (group, outcome, count)
        for group, tally in zip(result.groups, result.tallies)
        for outcome, count in zip(tally.outcomes, tally.counts)
    ]
    summary_rows = [
        (d.quantity, _num(d.empirical), _num(d.expected), _num(d.sigma), _num(d.z), d.status)
        for d in result.deviations
    ]
    return (
        _csv(("group", "outcome", "count"), tally_rows),
        _csv(("quantity", "empirical", "expected", "sigma", "z", "status"), summary_rows),
        result.failed,
    )


# -- parser ---------------------------------------------------------------

def _prob(s: str) -> float:
    v = float(s)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"{s} is not in [0, 1]")
    return v


def _nonneg_int(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"{s} is negative")
    return v


def _pos_float(s: str) -> float:
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"{s} is not > 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="photocount", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def out(sp):
        sp.add_argument("-o", "--output", default="-", help="output CSV path (default: stdout)")

    d = sub.add_parser("dist", help="Bose-Einstein, W_k or U_k probabilities")
    d.add_argument("--kind", choices=("be", "wk", "uk"), required=True)
    d.add_argument("--mean-occupation", type=float)
    d.add_argument("--cell-filling", type=_nonneg_int)
    d.add_argument("--max-index", type=_nonneg_int, default=10)
    d.add_argument("--tol", type=_pos_float, default=1e-15)
    out(d)

    m = sub.add_parser("mandel", help="Mandel photocount distribution")
    m.add_argument("--law", choices=("deterministic", "exponential", "tabulated"), required=True)
    m.add_argument("--w", type=float, help="integrated intensity (deterministic law)")
    m.add_argument("--mean-w", type=float, help="mean integrated intensity (exponential law)")
    m.add_argument("--table", help="CSV with header 'W,density' (tabulated law)")
    m.add_argument("--normalize", action="store_true", help="rescale a tabulated density to unit mass")
    m.add_argument("--max-index", type=_nonneg_int, default=10)
    out(m)

    e = sub.add_parser("estimate", help="quantum efficiencies from count data")
    e.add_argument("input", help=f"CSV with header {','.join(ESTIMATE_HEADER)} ('-' for stdin)")
    e.add_argument("--theory", choices=("old", "new"), required=True)
    e.add_argument("--eta-x", type=_prob, help="blocking-detector efficiency for the new chopper estimator")
    out(e)

    pr = sub.add_parser("predict", help="expected counts for given efficiencies")
    pr.add_argument("--m", type=float, required=True, help="number of photon pairs")
    pr.add_argument("--eta1", type=_prob, required=True)
    pr.add_argument("--eta2", type=_prob)
    pr.add_argument("--theory", choices=("old", "new"), required=True)
    pr.add_argument("--eta-x", type=_prob)
    out(pr)

    s = sub.add_parser("simulate", help="seeded Monte Carlo run from a JSON config")
    s.add_argument("config", help="JSON SimConfig file")
    s.add_argument("--workers", type=int, help="override the configured worker count")
    s.add_argument("--summary", default=None, help="path for the analytic-vs-empirical summary CSV (default: stderr)")
    out(s)

    t = sub.add_parser("reproduce-table2", help="efficiency table under the new model")
    out(t)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            tally, summary, failed = cmd_simulate(args)
            _emit(tally, args.output)
            if args.summary:
                _emit(summary, args.summary)
            else:
                sys.stderr.write(summary)
            if failed:
                raise CLIError("empirical frequency deviates from the analytic value by more than 4 sigma")
            return 0
        handler = {
            "dist": cmd_dist,
            "mandel": cmd_mandel,
            "estimate": cmd_estimate,
            "predict": cmd_predict,
            "reproduce-table2": cmd_reproduce_table2,
        }[args.command]
        _emit(handler(args), args.output)
    except (CLIError, DomainError, EstimationError, TruncationError) as exc:
        print(f"photocount: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
