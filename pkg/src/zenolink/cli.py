"""Command-line front end.

Subcommands:

* ``eval``: evaluate one parameter set and emit a single report row.
* ``sweep``: run a parameter grid described by a JSON config file.
* ``table1``: reproduce the reference efficiency/exposure table with deltas.
* ``balance``: compute the balancing kappa1 for (N, kappa2) and demonstrate
  the resulting null at the unwanted terminal detector.
* ``figures``: run the checked-in sweep configs that back the standard
  figure datasets.

Output is CSV (fixed column order, 17 significant digits) or JSON. Identical
invocations produce byte-identical files. Exit codes: 0 success, 2 usage or
parameter error, 3 I/O error.
"""

import argparse
import csv
import dataclasses
import enum
import io
import itertools
import json
import math
import os
import sys
from dataclasses import dataclass
from importlib import resources

from . import oracle
from .protocol import (
    ProtocolParams,
    balanced_kappa1,
    eta_nb_closed_form,
    evaluate,
    inner_coefficients,
)

__all__ = [
    "COLUMNS",
    "Scenario",
    "ReportRow",
    "SweepAxis",
    "SweepSpec",
    "cmd_eval",
    "cmd_sweep",
    "cmd_table1",
    "cmd_balance",
    "cmd_figures",
    "read_report_csv",
    "main",
]

# The first 14 columns are the documented stable order; the trailing pair
# exposes the inner-chain splitting ratios that the fig2 datasets plot.
COLUMNS = (
    "M",
    "N",
    "kappa1",
    "kappa2",
    "kappa3",
    "blocks",
    "w1",
    "w2",
    "w3_total",
    "w_res",
    "w_tr_entering",
    "w_tr_absorbed",
    "eta",
    "eta_nb_closed_form",
    "w_inner1",
    "w_inner2",
)

_PARAM_NAMES = ("M", "N", "kappa1", "kappa2", "kappa3")

FIGURE_NAMES = ("fig2a", "fig2b", "fig3a", "fig3b", "fig4", "fig5")


class Scenario(enum.Enum):
    NO_BLOCKS = "no_blocks"
    WITH_BLOCKS = "with_blocks"
    BOTH = "both"


@dataclass(frozen=True, slots=True)
class ReportRow:
    """One evaluated grid point, flattened for tabular output."""

    outer_count: int
    inner_count: int
    kappa1: float
    kappa2: float
    kappa3: float
    blocks: bool
    w1: float
    w2: float
    w3_total: float
    w_res: float
    w_tr_entering: float
    w_tr_absorbed: float
    eta: float
    eta_nb_closed_form: float
    w_inner1: float
    w_inner2: float

    def as_mapping(self) -> dict:
        return {
            "M": self.outer_count,
            "N": self.inner_count,
            "kappa1": self.kappa1,
            "kappa2": self.kappa2,
            "kappa3": self.kappa3,
            "blocks": self.blocks,
            "w1": self.w1,
            "w2": self.w2,
            "w3_total": self.w3_total,
            "w_res": self.w_res,
            "w_tr_entering": self.w_tr_entering,
            "w_tr_absorbed": self.w_tr_absorbed,
            "eta": self.eta,
            "eta_nb_closed_form": self.eta_nb_closed_form,
            "w_inner1": self.w_inner1,
            "w_inner2": self.w_inner2,
        }


@dataclass(frozen=True, slots=True)
class SweepAxis:
    """One swept parameter (or several sharing the same values).

    params lists the parameter names this axis drives; coupled sweeps such
    as kappa2 = kappa3 use one axis with both names. spacing is "linear" or
    "log"; log spacing requires positive endpoints.
    """

    params: tuple
    start: float
    stop: float
    steps: int
    spacing: str = "linear"

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        if not self.params:
            raise ValueError("axis needs at least one parameter name")
        for name in self.params:
            if name not in _PARAM_NAMES:
                raise ValueError(f"unknown parameter {name!r}")
        if len(set(self.params)) != len(self.params):
            raise ValueError("axis parameter names must be distinct")
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "stop", float(self.stop))
        object.__setattr__(self, "steps", int(self.steps))
        if self.steps < 1:
            raise ValueError(f"steps must be at least 1, got {self.steps}")
        if self.spacing not in ("linear", "log"):
            raise ValueError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")
        if self.spacing == "log" and (self.start <= 0.0 or self.stop <= 0.0):
            raise ValueError("log spacing requires positive endpoints")

    def values(self) -> list:
        if self.steps == 1:
            return [self.start]
        last = self.steps - 1
        if self.spacing == "linear":
            span = self.stop - self.start
            return [self.start + span * i / last for i in range(self.steps)]
        lo = math.log10(self.start)
        span = math.log10(self.stop) - lo
        return [10.0 ** (lo + span * i / last) for i in range(self.steps)]


@dataclass(frozen=True, slots=True)
class SweepSpec:
    """Grid description: axes, fixed values, scenario, and output target."""

    axes: tuple
    fixed: dict
    scenario: Scenario = Scenario.NO_BLOCKS
    output_format: str = "csv"
    out: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        object.__setattr__(self, "fixed", dict(self.fixed))
        seen = set()
        for axis in self.axes:
            for name in axis.params:
                if name in seen:
                    raise ValueError(f"parameter {name!r} appears on more than one axis")
                seen.add(name)
        for name in self.fixed:
            if name not in _PARAM_NAMES:
                raise ValueError(f"unknown parameter {name!r}")
            if name in seen:
                raise ValueError(f"parameter {name!r} is both fixed and swept")
            seen.add(name)
        for required in ("M", "N"):
            if required not in seen:
                raise ValueError(f"parameter {required!r} must be fixed or swept")
        if not isinstance(self.scenario, Scenario):
            raise TypeError(f"scenario must be a Scenario, got {self.scenario!r}")
        if self.output_format not in ("csv", "json"):
            raise ValueError(f"format must be 'csv' or 'json', got {self.output_format!r}")

    @classmethod
    def from_mapping(cls, data: dict) -> "SweepSpec":
        if not isinstance(data, dict):
            raise ValueError("sweep config must be a JSON object")
        known = {"axes", "fixed", "scenario", "format", "out"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        axes = []
        for entry in data.get("axes", ()):
            if not isinstance(entry, dict):
                raise ValueError("each axis must be a JSON object")
            axis_known = {"param", "params", "start", "stop", "steps", "spacing"}
            axis_unknown = set(entry) - axis_known
            if axis_unknown:
                raise ValueError(f"unknown axis keys: {sorted(axis_unknown)}")
            if "params" in entry:
                names = entry["params"]
            elif "param" in entry:
                names = [entry["param"]]
            else:
                raise ValueError("axis needs a 'param' or 'params' entry")
            axes.append(
                SweepAxis(
                    params=tuple(names),
                    start=entry["start"],
                    stop=entry["stop"],
                    steps=entry["steps"],
                    spacing=entry.get("spacing", "linear"),
                )
            )
        return cls(
            axes=tuple(axes),
            fixed=dict(data.get("fixed", {})),
            scenario=Scenario(data.get("scenario", "no_blocks")),
            output_format=data.get("format", "csv"),
            out=data.get("out"),
        )

    @classmethod
    def from_file(cls, path) -> "SweepSpec":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValueError(f"invalid JSON in {path}: {exc}") from exc
        return cls.from_mapping(data)

    def grid(self):
        """Yield one {name: value} mapping per grid point, in axis order."""
        value_lists = [axis.values() for axis in self.axes]
        for combo in itertools.product(*value_lists):
            point = dict(self.fixed)
            for axis, value in zip(self.axes, combo):
                for name in axis.params:
                    point[name] = value
            yield point


def _as_count(name: str, value) -> int:
    number = float(value)
    nearest = round(number)
    if abs(number - nearest) > 1e-9:
        raise ValueError(f"{name} must be an integer, got {value!r}")
    return int(nearest)


def _params_from_point(point: dict, blocks: bool) -> ProtocolParams:
    return ProtocolParams(
        outer_count=_as_count("M", point["M"]),
        inner_count=_as_count("N", point["N"]),
        kappa1=point.get("kappa1", 0.0),
        kappa2=point.get("kappa2", 0.0),
        kappa3=point.get("kappa3", 0.0),
        bob_blocks=blocks,
    )


def cmd_eval(params: ProtocolParams) -> ReportRow:
    """Evaluate one parameter set into a flat report row."""
    trace = oracle.propagate(oracle.build_network(params))
    report = evaluate(params, trace=trace)
    inner = inner_coefficients(params.inner_count, params.kappa2, params.effective_kappa3)
    return ReportRow(
        outer_count=params.outer_count,
        inner_count=params.inner_count,
        kappa1=params.kappa1,
        kappa2=params.kappa2,
        kappa3=params.kappa3,
        blocks=params.bob_blocks,
        w1=report.w1,
        w2=report.w2,
        w3_total=sum(report.w3),
        w_res=report.w_res,
        w_tr_entering=oracle.channel_exposure(
            trace, oracle.ExposureConvention.ENTERING_PROBABILITY
        ),
        w_tr_absorbed=oracle.channel_exposure(trace, oracle.ExposureConvention.ABSORBED_ONLY),
        eta=report.eta,
        eta_nb_closed_form=eta_nb_closed_form(params.outer_count),
        w_inner1=inner.m11 * inner.m11,
        w_inner2=inner.m21 * inner.m21,
    )


def sweep_rows(spec: SweepSpec) -> list:
    """Evaluate every grid point, in deterministic order.

    With scenario "both", each point yields its no-blocks row immediately
    followed by its with-blocks row.
    """
    rows = []
    for point in spec.grid():
        if spec.scenario is not Scenario.WITH_BLOCKS:
            rows.append(cmd_eval(_params_from_point(point, False)))
        if spec.scenario is not Scenario.NO_BLOCKS:
            rows.append(cmd_eval(_params_from_point(point, True)))
    return rows


def cmd_sweep(spec: SweepSpec) -> list:
    """Run a sweep and emit its report to the spec's output target."""
    rows = sweep_rows(spec)
    _write(_render(COLUMNS, [row.as_mapping() for row in rows], spec.output_format), spec.out)
    return rows


# Reference efficiency/exposure table: (M, N) -> (W2, W_Tr) pairs for the
# three dissipation settings, all with blocks in the channel. Exposure uses
# the entering-probability convention.
TABLE1_REFERENCE = (
    (6, 12, (0.62, 0.35), (0.36, 0.26), (0.35, 0.26)),
    (12, 12, (0.37, 0.54), (0.10, 0.27), (0.10, 0.27)),
    (12, 20, (0.54, 0.43), (0.26, 0.28), (0.25, 0.27)),
    (20, 30, (0.49, 0.46), (0.21, 0.28), (0.20, 0.27)),
    (20, 50, (0.64, 0.34), (0.39, 0.25), (0.36, 0.23)),
    (30, 50, (0.48, 0.42), (0.24, 0.28), (0.21, 0.25)),
    (40, 100, (0.63, 0.35), (0.38, 0.25), (0.26, 0.20)),
)

TABLE1_SETTINGS = ("no_dissipation", "balanced_lossless", "balanced_small_loss")

TABLE1_COLUMNS = (
    "M",
    "N",
    "setting",
    "kappa1",
    "kappa2",
    "kappa3",
    "w2",
    "w2_reference",
    "w2_delta",
    "w_tr",
    "w_tr_reference",
    "w_tr_delta",
)


def table1_params(outer_count: int, inner_count: int, setting: str) -> ProtocolParams:
    """Parameter set behind one reference-table cell (always with blocks)."""
    if setting == "no_dissipation":
        kappa1 = kappa2 = 0.0
    elif setting == "balanced_lossless":
        kappa2 = 0.0
        kappa1 = balanced_kappa1(inner_count, kappa2)
    elif setting == "balanced_small_loss":
        kappa2 = 1e-4
        kappa1 = balanced_kappa1(inner_count, kappa2)
    else:
        raise ValueError(f"unknown table setting {setting!r}")
    return ProtocolParams(
        outer_count=outer_count,
        inner_count=inner_count,
        kappa1=kappa1,
        kappa2=kappa2,
        kappa3=kappa2,
        bob_blocks=True,
    )


def table1_rows() -> list:
    """Computed vs reference values for all 21 table cells."""
    rows = []
    for outer_count, inner_count, *references in TABLE1_REFERENCE:
        for setting, (w2_ref, wtr_ref) in zip(TABLE1_SETTINGS, references):
            params = table1_params(outer_count, inner_count, setting)
            row = cmd_eval(params)
            rows.append(
                {
                    "M": outer_count,
                    "N": inner_count,
                    "setting": setting,
                    "kappa1": params.kappa1,
                    "kappa2": params.kappa2,
                    "kappa3": params.kappa3,
                    "w2": row.w2,
                    "w2_reference": w2_ref,
                    "w2_delta": row.w2 - w2_ref,
                    "w_tr": row.w_tr_entering,
                    "w_tr_reference": wtr_ref,
                    "w_tr_delta": row.w_tr_entering - wtr_ref,
                }
            )
    return rows


def cmd_table1(output_format: str = "csv", out: str | None = None) -> list:
    """Emit the full reference-table comparison."""
    rows = table1_rows()
    _write(_render(TABLE1_COLUMNS, rows, output_format), out)
    return rows


def cmd_balance(
    inner_count: int,
    kappa2: float = 0.0,
    outer_count: int = 6,
    kappa3: float = 0.0,
) -> ReportRow:
    """Balanced-dissipation demonstration row.

    Sets kappa1 to the balancing value for (inner_count, kappa2) and
    evaluates the with-blocks scenario; the w1 column shows the resulting
    null at the unwanted terminal detector.
    """
    kappa1 = balanced_kappa1(inner_count, kappa2)
    params = ProtocolParams(
        outer_count=outer_count,
        inner_count=inner_count,
        kappa1=kappa1,
        kappa2=kappa2,
        kappa3=kappa3,
        bob_blocks=True,
    )
    return cmd_eval(params)


def load_figure_spec(name: str) -> SweepSpec:
    """Load one checked-in figure sweep config by name."""
    if name not in FIGURE_NAMES:
        raise ValueError(f"unknown figure {name!r}; choose from {', '.join(FIGURE_NAMES)}")
    path = resources.files("zenolink") / "configs" / f"{name}.json"
    with path.open("r", encoding="utf-8") as fh:
        return SweepSpec.from_mapping(json.load(fh))


def cmd_figures(names=(), out_dir: str = ".", output_format: str = "csv") -> list:
    """Run the named figure sweeps (all of them by default) into out_dir."""
    chosen = tuple(names) or FIGURE_NAMES
    specs = [(name, load_figure_spec(name)) for name in chosen]
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for name, spec in specs:
        target = os.path.join(out_dir, f"{name}.{output_format}")
        cmd_sweep(dataclasses.replace(spec, output_format=output_format, out=target))
        written.append(target)
    return written


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    if math.isnan(value):
        return "undefined"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def _json_value(value):
    if isinstance(value, (bool, int, str)):
        return value
    if math.isnan(value):
        return "undefined"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def _render(columns, mappings, output_format: str) -> str:
    if output_format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for mapping in mappings:
            writer.writerow([_format_value(mapping[name]) for name in columns])
        return buffer.getvalue()
    if output_format == "json":
        payload = [{name: _json_value(mapping[name]) for name in columns} for mapping in mappings]
        return json.dumps(payload, indent=2) + "\n"
    raise ValueError(f"format must be 'csv' or 'json', got {output_format!r}")


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _parse_float(token: str) -> float:
    if token == "undefined":
        return math.nan
    if token == "inf":
        return math.inf
    if token == "-inf":
        return -math.inf
    return float(token)


def read_report_csv(source) -> list:
    """Parse an emitted report CSV back into ReportRow objects.

    Accepts a path or an open text stream. Numeric fields round-trip
    exactly; "inf" and "undefined" come back as infinity and NaN.
    """
    if hasattr(source, "read"):
        return _parse_report_csv(source)
    with open(source, "r", encoding="utf-8", newline="") as fh:
        return _parse_report_csv(fh)


def _parse_report_csv(stream) -> list:
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or tuple(header) != COLUMNS:
        raise ValueError("stream does not start with the report column header")
    rows = []
    for record in reader:
        if len(record) != len(COLUMNS):
            raise ValueError(f"malformed row: {record!r}")
        values = dict(zip(COLUMNS, record))
        rows.append(
            ReportRow(
                outer_count=int(values["M"]),
                inner_count=int(values["N"]),
                kappa1=_parse_float(values["kappa1"]),
                kappa2=_parse_float(values["kappa2"]),
                kappa3=_parse_float(values["kappa3"]),
                blocks=values["blocks"] == "true",
                w1=_parse_float(values["w1"]),
                w2=_parse_float(values["w2"]),
                w3_total=_parse_float(values["w3_total"]),
                w_res=_parse_float(values["w_res"]),
                w_tr_entering=_parse_float(values["w_tr_entering"]),
                w_tr_absorbed=_parse_float(values["w_tr_absorbed"]),
                eta=_parse_float(values["eta"]),
                eta_nb_closed_form=_parse_float(values["eta_nb_closed_form"]),
                w_inner1=_parse_float(values["w_inner1"]),
                w_inner2=_parse_float(values["w_inner2"]),
            )
        )
    return rows


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zenolink",
        description="Chained-interferometer link evaluator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    eval_p = sub.add_parser("eval", help="evaluate one parameter set")
    eval_p.add_argument("--m", type=int, required=True, help="outer chain length M")
    eval_p.add_argument("--n", type=int, required=True, help="inner chain length N")
    eval_p.add_argument("--kappa1", type=float, default=0.0, help="left-group dissipation")
    eval_p.add_argument("--kappa2", type=float, default=0.0, help="middle-group dissipation")
    eval_p.add_argument("--kappa3", type=float, default=0.0, help="channel-group dissipation")
    eval_p.add_argument("--blocks", action="store_true", help="absorbers in the channel")
    eval_p.add_argument(
        "--balanced",
        action="store_true",
        help="override kappa1 with the balancing value for (N, kappa2)",
    )
    eval_p.add_argument("--format", choices=("csv", "json"), default="csv")
    eval_p.add_argument("--out", default=None, help="output path (default: stdout)")

    sweep_p = sub.add_parser("sweep", help="run a JSON-configured parameter sweep")
    sweep_p.add_argument("--config", required=True, help="path to a sweep config file")
    sweep_p.add_argument("--format", choices=("csv", "json"), default=None)
    sweep_p.add_argument("--out", default=None, help="output path (default: config's, else stdout)")

    table_p = sub.add_parser("table1", help="reference table comparison with deltas")
    table_p.add_argument("--format", choices=("csv", "json"), default="csv")
    table_p.add_argument("--out", default=None)

    balance_p = sub.add_parser("balance", help="balanced-dissipation demonstration")
    balance_p.add_argument("--n", type=int, required=True, help="inner chain length N")
    balance_p.add_argument("--kappa2", type=float, default=0.0)
    balance_p.add_argument("--m", type=int, default=6, help="outer chain length M (default 6)")
    balance_p.add_argument("--kappa3", type=float, default=0.0)
    balance_p.add_argument("--format", choices=("csv", "json"), default="csv")
    balance_p.add_argument("--out", default=None)

    figures_p = sub.add_parser("figures", help="run the checked-in figure sweeps")
    figures_p.add_argument("names", nargs="*", help=f"subset of: {', '.join(FIGURE_NAMES)}")
    figures_p.add_argument("--out", default=".", help="output directory")
    figures_p.add_argument("--format", choices=("csv", "json"), default="csv")

    return parser


def _dispatch(args) -> int:
    if args.command == "eval":
        kappa1 = args.kappa1
        if args.balanced:
            kappa1 = balanced_kappa1(args.n, args.kappa2)
        params = ProtocolParams(
            outer_count=args.m,
            inner_count=args.n,
            kappa1=kappa1,
            kappa2=args.kappa2,
            kappa3=args.kappa3,
            bob_blocks=args.blocks,
        )
        row = cmd_eval(params)
        _write(_render(COLUMNS, [row.as_mapping()], args.format), args.out)
        return 0
    if args.command == "sweep":
        spec = SweepSpec.from_file(args.config)
        if args.format is not None:
            spec = dataclasses.replace(spec, output_format=args.format)
        if args.out is not None:
            spec = dataclasses.replace(spec, out=args.out)
        cmd_sweep(spec)
        return 0
    if args.command == "table1":
        cmd_table1(args.format, args.out)
        return 0
    if args.command == "balance":
        row = cmd_balance(args.n, args.kappa2, outer_count=args.m, kappa3=args.kappa3)
        _write(_render(COLUMNS, [row.as_mapping()], args.format), args.out)
        return 0
    if args.command == "figures":
        written = cmd_figures(args.names, args.out, args.format)
        for path in written:
            print(f"wrote {path}")
        return 0
    raise ValueError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
