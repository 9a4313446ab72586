"""Command-line runs that write the data behind each plot and table.

Every output starts with the resolved run configuration, so an output file
can be fed back through ``--config`` to regenerate it::

    mpep pdf --kind fidelity --l 1-6 --min 0.5 --out fig_pdf.csv
    mpep pdf --config fig_pdf.csv --out again.csv

Exit codes: 0 success, 1 invalid input, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import quantum, stats
from .simulator import SimulationConfig, run_campaign
from .stats import QuadratureError

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

# key prefix marking embedded configuration inside CSV output
META = "#! "


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # bad flags are validation errors too; keep 2 for numerical failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# config files


def read_config(path: str | Path) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment.

    Also accepts files written by this tool: ``#! key = value`` lines in
    CSV output and the ``config`` object of JSON output.
    """
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: bad JSON: {exc}") from exc
        return {k: _to_text(v) for k, v in obj.get("config", {}).items()}
    out: dict[str, str] = {}
    tag = META.strip()
    # a previous CSV output: only the embedded config lines count
    emitted = any(raw.startswith(tag) for raw in text.splitlines())
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith(tag):
            line = line[len(tag):].strip()
        elif emitted or line.startswith("#") or not line:
            continue
        else:
            line = line.split("#", 1)[0].strip()
        if "=" not in line:
            continue
        key, value = (p.strip() for p in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _to_text(v) -> str:
    if isinstance(v, (list, tuple)):
        return ",".join(str(x) for x in v)
    if v is None:
        return ""
    return str(v)


# --------------------------------------------------------------------------
# value parsing


def int_list(text: str) -> list[int]:
    """``"1-6"``, ``"1,3,5"`` or a mix like ``"1-3,8"``."""
    out: list[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1) if not part.startswith("-") else (part, part)
            lo_i, hi_i = int(lo), int(hi)
            if hi_i < lo_i:
                raise UsageError(f"empty range {part!r}")
            out.extend(range(lo_i, hi_i + 1))
        else:
            out.append(int(part))
    if not out:
        raise UsageError(f"empty integer list {text!r}")
    return out


def float_list(text: str) -> list[float]:
    vals = [float(p) for p in str(text).split(",") if p.strip()]
    if not vals:
        raise UsageError(f"empty list {text!r}")
    return vals


# --------------------------------------------------------------------------
# output


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.10g}"


def _json_value(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return None if math.isnan(x) else (str(x) if math.isinf(x) else x)
    return x


def render(config: dict, header: list[str], rows: list[list], fmt: str, timestamp: str) -> str:
    if fmt == "json":
        obj = {
            "config": config,
            "generated": timestamp,
            "columns": header,
            "rows": [[_json_value(v) for v in r] for r in rows],
        }
        return json.dumps(obj, indent=2) + "\n"
    buf = io.StringIO()
    for k, v in config.items():
        buf.write(f"{META}{k} = {_to_text(v)}\n")
    buf.write(f"# generated = {timestamp}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _emit(text: str, out: str | None, suffix: str = "") -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    if suffix:
        path = path.with_name(f"{path.stem}_{suffix}{path.suffix or '.csv'}")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


# --------------------------------------------------------------------------
# subcommands


def cmd_pdf(opts: dict) -> list[tuple[str, list[str], list[list]]]:
    kind = opts["kind"]
    lmin = float(opts["min"])
    ls = int_list(opts["l"])
    points = int(opts["points"])
    if kind not in ("fidelity", "probability"):
        raise UsageError(f"--kind must be fidelity or probability, not {kind!r}")
    if kind == "fidelity" and not 0.5 <= lmin < 1.0:
        raise UsageError(f"--min {lmin} invalid: edge fidelity minimum must lie in [0.5, 1)")
    if kind == "probability" and not 0.0 < lmin < 1.0:
        raise UsageError(f"--min {lmin} invalid: edge probability minimum must lie in (0, 1)")
    if points < 2 or min(ls) < 1:
        raise UsageError("need --points >= 2 and path lengths >= 1")
    rows = []
    for l in ls:
        pdf = stats.PathFidelityPdf(l, lmin) if kind == "fidelity" else stats.PathProbabilityPdf(l, lmin)
        lo, hi = pdf.support
        grid = np.union1d(np.linspace(lo, hi, points), pdf.breakpoints())
        for x, y in zip(grid, pdf.pdf(grid)):
            rows.append([l, x, y])
    return [("", ["l", "x", "density"], rows)]


def cmd_moments(opts: dict):
    means = float_list(opts["means"])
    ls = int_list(opts["l"])
    rows = []
    for fbar in means:
        if not 0.5 <= fbar <= 1.0:
            raise UsageError(f"mean edge fidelity {fbar} outside [0.5, 1]")
        edge = stats.UniformEdgeDistribution.from_mean(fbar)
        for l in ls:
            rows.append([
                fbar, l,
                stats.mean_path_fidelity(l, edge),
                stats.std_path_fidelity(l, edge),
                stats.std_path_fidelity(l, edge, approx=True),
            ])
    return [("", ["mean_edge_fidelity", "l", "mean", "std", "std_narrow_approx"], rows)]


def cmd_window(opts: dict):
    n = int(opts["points"])
    if n < 2:
        raise UsageError("--points must be >= 2")
    rows = []
    for f1 in np.linspace(0.5, 1.0, n):
        w = quantum.useful_window(f1)
        rows.append([f1, w.lower, w.upper, w.width])
    return [("", ["f1", "lower", "upper", "width"], rows)]


def cmd_criteria_table(opts: dict):
    tau = opts.get("tau_m") or None
    try:
        cfg = stats.CriteriaConfig(float(opts["f_min"]), float(opts["p_min"]),
                                   None if tau is None else float(tau))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    fid, av = stats.decision_tables(cfg, int_list(opts["l0"]), int_list(opts["d"]),
                                    workers=int(opts["threads"]))
    out = []
    for table in (fid, av):
        header = ["l0"] + [f"d={d}" for d in table.d_values]
        rows = [[int(l0)] + [bool(v) for v in table.entries[i]] for i, l0 in enumerate(table.l0_values)]
        out.append((table.name, header, rows))
    return out


SIM_KEYS = {
    "nodes": ("num_nodes", int),
    "edges": ("num_edges", int),
    "seed": ("seed", int),
    "f_min": ("f_min", float),
    "p_min": ("p_min", float),
    "samples": ("num_samples", int),
    "l0_max": ("l0_max", int),
}


def cmd_simulate(opts: dict):
    kwargs = {field: conv(opts[key]) for key, (field, conv) in SIM_KEYS.items()}
    if opts.get("tau_m"):
        kwargs["tau_m"] = float(opts["tau_m"])
    kwargs["criteria"] = tuple(c for c in str(opts["criteria"]).split(",") if c)
    try:
        cfg = SimulationConfig(**kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = run_campaign(cfg, workers=int(opts["threads"]))
    stream = sys.stderr if opts.get("out") is None else sys.stdout
    for line in report.summary_lines():
        print(line, file=stream)
    header = ["l0", "n", "basic_mean", "basic_std", "mpep_mean", "mpep_std", "mpep_n",
              "chosen_mean", "chosen_std", "skipped_pairs"]
    rows = [
        [r.l0, r.n, r.basic_mean, r.basic_std, r.mpep_mean, r.mpep_std, r.mpep_n,
         r.chosen_mean, r.chosen_std, report.skipped_pairs]
        for r in report.rows
    ]
    return [("", header, rows)]


COMMANDS = {
    "pdf": (cmd_pdf, {"kind": "fidelity", "l": "1-6", "min": "0.5", "points": "200"}),
    "moments": (cmd_moments, {"means": "0.75,0.85,0.95,1", "l": "1-20"}),
    "window": (cmd_window, {"points": "201"}),
    "criteria-table": (cmd_criteria_table,
                       {"f_min": "0.9", "p_min": "0.7", "tau_m": "", "l0": "1-10", "d": "0-5"}),
    "simulate": (cmd_simulate, {
        "nodes": "10000", "edges": "25000", "f_min": "0.9", "p_min": "0.7", "samples": "10000",
        "l0_max": "10", "tau_m": "", "criteria": "fidelity,availability",
    }),
}

# csv cells in the simulate report use 6 significant digits
_SIG6 = {"simulate"}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, help="RNG seed (default 0)")
    common.add_argument("--out", help="output path; stdout when omitted")
    common.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    common.add_argument("--threads", type=int, help="worker processes (default: all CPUs)")
    common.add_argument("--config", help="flat key = value file, or a previous output of this tool")

    parser = _Parser(prog="mpep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pdf", parents=[common], help="path-parameter densities")
    p.add_argument("--kind", choices=("fidelity", "probability"))
    p.add_argument("--l", help="path lengths, e.g. 1-6")
    p.add_argument("--min", help="edge distribution minimum")
    p.add_argument("--points", help="grid points per curve")

    p = sub.add_parser("moments", parents=[common], help="mean and std of path fidelity")
    p.add_argument("--means", help="comma-separated mean edge fidelities")
    p.add_argument("--l", help="path lengths")

    p = sub.add_parser("window", parents=[common], help="useful purification window")
    p.add_argument("--points", help="number of f1 grid points on [0.5, 1]")

    p = sub.add_parser("criteria-table", parents=[common], help="decision tables")
    p.add_argument("--f-min", dest="f_min")
    p.add_argument("--p-min", dest="p_min")
    p.add_argument("--tau-m", dest="tau_m", help="memory coherence time (default 1/p_min)")
    p.add_argument("--l0", help="shortest-path lengths, e.g. 1-10")
    p.add_argument("--d", help="path-length differences, e.g. 0-5")

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo protocol comparison")
    p.add_argument("--nodes")
    p.add_argument("--edges")
    p.add_argument("--f-min", dest="f_min")
    p.add_argument("--p-min", dest="p_min")
    p.add_argument("--samples", help="number of source/destination pairs")
    p.add_argument("--l0-max", dest="l0_max")
    p.add_argument("--tau-m", dest="tau_m")
    p.add_argument("--criteria", help="comma-separated subset of fidelity,availability")
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Defaults, then config file, then explicit flags."""
    func, defaults = COMMANDS[args.command]
    opts = dict(defaults)
    opts.update({"seed": "0", "format": "csv", "threads": str(os.cpu_count() or 1)})
    if args.config:
        try:
            file_opts = read_config(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        cmd = file_opts.pop("command", args.command)
        if cmd != args.command:
            raise UsageError(f"config is for {cmd!r}, not {args.command!r}")
        unknown = set(file_opts) - set(opts) - {"out"}
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        file_opts.pop("out", None)
        opts.update(file_opts)
    for key, value in vars(args).items():
        if key in ("command", "config") or value is None:
            continue
        opts[key] = str(value)
    return opts


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = resolve(args)
        if opts["format"] not in ("csv", "json"):
            raise UsageError(f"unknown format {opts['format']!r}")
        func, defaults = COMMANDS[args.command]
        outputs = func(opts)
    except (UsageError, ValueError, KeyError) as exc:
        print(f"mpep {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuadratureError as exc:
        print(f"mpep {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    # only parameters that affect the data are embedded
    config = {"command": args.command, "seed": opts["seed"]}
    config.update({k: opts[k] for k in defaults})
    timestamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    try:
        for suffix, header, rows in outputs:
            if args.command in _SIG6:
                rows = [[f"{v:.6g}" if isinstance(v, float) else v for v in r] for r in rows]
            text = render(config, header, rows, opts["format"], timestamp)
            _emit(text, opts.get("out"), suffix)
    except OSError as exc:
        print(f"mpep {args.command}: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
