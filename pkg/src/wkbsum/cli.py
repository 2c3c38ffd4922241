"""Batch front end: tables comparing every quantization route.

Exit codes: 0 success, 2 configuration error, 3 numerical gate failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import algebra, contour, oracle, series, swkb
from .errors import WKBError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GATE = 3

COMMANDS = ("quantize", "contour", "swkb", "oracle", "report", "coefficients")

QUANTIZE_COLUMNS = ["m", "n_theta", "N", "E_N", "lambda2_N", "lambda2_exact", "residual"]
CONTOUR_COLUMNS = ["n", "m", "l", "E", "U", "numeric", "closed_form", "abs_error", "higher_l", "samples_used"]
SWKB_COLUMNS = ["m", "n_theta", "e_minus", "lambda2_swkb", "lambda2_exact", "cbc_numeric", "cbc_target", "abs_error"]
ORACLE_COLUMNS = ["m", "l", "E", "lambda2", "lambda2_exact", "abs_error", "node_count"]
REPORT_COLUMNS = [
    "m", "l", "lambda2_exact", "lambda2_torus", "lambda2_wkb_N", "lambda2_wkb_summed",
    "lambda2_swkb", "lambda2_oracle", "max_abs_error", "status",
]

# gates applied by the contour command
GATE_CLOSED_FORM = 1e-6
GATE_ZERO = 1e-8


class ConfigError(Exception):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class GateFailure(Exception):
    pass


def parse_range(text: str, field: str) -> tuple[int, int]:
    """``A..B`` inclusive, or a single integer."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise ConfigError(field, f"expected A..B, got {text!r}") from None
    if hi < lo:
        raise ConfigError(field, f"empty range {text!r}")
    return lo, hi


@dataclass(frozen=True)
class RunConfig:
    command: str
    m_range: tuple[int, int] = (1, 1)
    n_theta_range: tuple[int, int] = (0, 0)
    l_range: tuple[int, int] | None = None
    order: int = 4
    samples: int = contour.MIN_SAMPLES
    tolerance: float = contour.GATE_TOL
    format: str = "csv"
    out_path: Path | None = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError("command", f"unknown command {self.command!r}")
        if self.m_range[0] < 1:
            raise ConfigError("--m", "lower bound must be >= 1")
        if self.n_theta_range[0] < 0:
            raise ConfigError("--n-theta", "lower bound must be >= 0")
        if self.l_range is not None and self.l_range[1] < self.m_range[0]:
            raise ConfigError("--l", "no l >= m in range")
        if self.order < 0:
            raise ConfigError("--order", "must be >= 0")
        if self.command in ("contour", "coefficients") and self.order > algebra.N_MAX:
            raise ConfigError("--order", f"must be <= {algebra.N_MAX}")
        if self.samples < contour.MIN_SAMPLES or self.samples % 2:
            raise ConfigError("--samples", f"must be even and >= {contour.MIN_SAMPLES}")
        if not self.tolerance > 0:
            raise ConfigError("--tolerance", "must be positive")
        if self.format not in ("csv", "json"):
            raise ConfigError("--format", "must be csv or json")

    def ms(self):
        return range(self.m_range[0], self.m_range[1] + 1)

    def levels(self):
        """(m, l) pairs, from --l when given, else l = m + n_theta."""
        for m in self.ms():
            if self.l_range is not None:
                ls = range(max(m, self.l_range[0]), self.l_range[1] + 1)
            else:
                ls = (m + n for n in range(self.n_theta_range[0], self.n_theta_range[1] + 1))
            for l in ls:
                yield m, l


def fmt(value):
    """Round floats to 15 significant digits; other values pass through."""
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return None
        return float(f"{value:.15g}")
    return value


def _row(columns, values):
    return {c: fmt(v) for c, v in zip(columns, values)}


def run_quantize(cfg: RunConfig) -> list[dict]:
    rows = []
    for m in cfg.ms():
        for n in range(cfg.n_theta_range[0], cfg.n_theta_range[1] + 1):
            p = series.ProblemParams(m, n)
            for N in range(cfg.order + 1):
                r = series.partial_sum_energy(p, N)
                rows.append(_row(QUANTIZE_COLUMNS, [m, n, N, r.E_N, r.lambda2_N, r.lambda2_exact, r.residual]))
            r = series.summed_quantization(p)
            rows.append(_row(QUANTIZE_COLUMNS, [m, n, "summed", r.E_N, r.lambda2_N, r.lambda2_exact, r.residual]))
            t = series.torus_limit(p)
            rows.append(_row(QUANTIZE_COLUMNS, [m, n, "torus", t + 0.25, t, p.lambda2_exact, abs(t - p.lambda2_exact)]))
    return rows


def _contour_gate(rep: contour.IntegralReport) -> bool:
    if rep.n >= 3 and rep.n % 2:
        ok = abs(rep.numeric) < GATE_ZERO
    else:
        ok = rep.abs_error is not None and rep.abs_error < GATE_CLOSED_FORM
    return ok and abs(rep.higher_l) < GATE_ZERO


def run_contour(cfg: RunConfig) -> list[dict]:
    rows = []
    failures = []
    for m, l in cfg.levels():
        U, E = series.reduce_parameters(m, l * (l + 1))
        tp = contour.turning_points(E, U)
        path = contour.ContourPath.around(tp, samples=cfg.samples)
        for n in range(cfg.order + 1):
            try:
                rep = contour.integral_report(n, E, U, path, tol=cfg.tolerance)
            except WKBError as exc:
                raise GateFailure(f"n={n}, m={m}, l={l}: {type(exc).__name__}: {exc}") from exc
            rows.append(_row(CONTOUR_COLUMNS, [
                n, m, l, E, U, rep.numeric, rep.closed_form, rep.abs_error, rep.higher_l, rep.samples_used,
            ]))
            if not _contour_gate(rep):
                failures.append(f"n={n}, m={m}, l={l}")
    if failures:
        raise GateFailure("gate failed for " + "; ".join(failures), rows)
    return rows


def run_swkb(cfg: RunConfig) -> list[dict]:
    rows = []
    for m in cfg.ms():
        ctx = swkb.SusyContext(m)
        for n in range(cfg.n_theta_range[0], cfg.n_theta_range[1] + 1):
            lv = swkb.swkb_spectrum(ctx, n)
            numeric = swkb.cbc_integral(ctx, lv.e_minus) if n > 0 else 0.0
            target = n * math.pi
            rows.append(_row(SWKB_COLUMNS, [
                m, n, lv.e_minus, lv.lambda2, lv.lambda2_exact, numeric, target, abs(numeric - target),
            ]))
    return rows


def run_oracle(cfg: RunConfig) -> list[dict]:
    rows = []
    for m, l in cfg.levels():
        r = oracle.solve_level(m, l)
        rows.append(_row(ORACLE_COLUMNS, [m, l, r.E, r.lambda2, r.lambda2_exact, r.abs_error, r.node_count]))
    return rows


def run_report(cfg: RunConfig) -> list[dict]:
    rows = []
    for m, l in cfg.levels():
        p = series.ProblemParams(m, l - m)
        exact = p.lambda2_exact
        vals = {"lambda2_torus": series.torus_limit(p)}
        status = []
        try:
            vals["lambda2_wkb_N"] = series.partial_sum_energy(p, cfg.order).lambda2_N
            vals["lambda2_wkb_summed"] = series.summed_quantization(p).lambda2_N
        except WKBError as exc:
            status.append(type(exc).__name__)
        try:
            vals["lambda2_swkb"] = swkb.swkb_spectrum(swkb.SusyContext(m), l - m).lambda2
        except WKBError as exc:
            status.append(type(exc).__name__)
        try:
            vals["lambda2_oracle"] = oracle.solve_level(m, l).lambda2
        except WKBError as exc:
            status.append(type(exc).__name__)
        checked = [vals[k] for k in ("lambda2_wkb_summed", "lambda2_swkb", "lambda2_oracle") if k in vals]
        worst = max((abs(v - exact) for v in checked), default=None)
        rows.append(_row(REPORT_COLUMNS, [
            m, l, exact, vals["lambda2_torus"], vals.get("lambda2_wkb_N"), vals.get("lambda2_wkb_summed"),
            vals.get("lambda2_swkb"), vals.get("lambda2_oracle"), worst, ";".join(status) or "ok",
        ]))
    return rows


def _columns_for(command):
    return {
        "quantize": QUANTIZE_COLUMNS, "contour": CONTOUR_COLUMNS, "swkb": SWKB_COLUMNS,
        "oracle": ORACLE_COLUMNS, "report": REPORT_COLUMNS,
    }[command]


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.15g}"
    return str(v)


def to_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_cell(r[c]) for c in columns])
    return buf.getvalue()


def to_json(columns, rows) -> str:
    return json.dumps({"columns": columns, "rows": rows}, indent=1) + "\n"


def render(cfg: RunConfig, rows) -> str:
    if cfg.command == "coefficients":
        return rows
    cols = _columns_for(cfg.command)
    return to_csv(cols, rows) if cfg.format == "csv" else to_json(cols, rows)


def execute(cfg: RunConfig):
    cfg.validate()
    if cfg.command == "coefficients":
        return algebra.dump_coefficients(algebra.canonical_table(cfg.order), indent=1) + "\n"
    runner = {
        "quantize": run_quantize, "contour": run_contour, "swkb": run_swkb,
        "oracle": run_oracle, "report": run_report,
    }[cfg.command]
    return runner(cfg)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wkbsum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--m", default="1..1", help="azimuthal range A..B (inclusive)")
        sp.add_argument("--n-theta", default="0..0", help="n_theta range A..B")
        sp.add_argument("--l", default=None, help="l range A..B (contour/oracle/report)")
        sp.add_argument("--order", type=int, default=4)
        sp.add_argument("--samples", type=int, default=contour.MIN_SAMPLES)
        sp.add_argument("--tolerance", type=float, default=contour.GATE_TOL)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", default=None)
    return parser


def config_from_args(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        m_range=parse_range(args.m, "--m"),
        n_theta_range=parse_range(args.n_theta, "--n-theta"),
        l_range=parse_range(args.l, "--l") if args.l else None,
        order=args.order,
        samples=args.samples,
        tolerance=args.tolerance,
        format=args.format,
        out_path=Path(args.out) if args.out else None,
    )


def _emit(text: str, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text, encoding="utf-8", newline="\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        result = execute(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GateFailure as exc:
        print(f"gate failure: {exc.args[0]}", file=sys.stderr)
        if len(exc.args) > 1 and exc.args[1]:
            _emit(render(cfg, exc.args[1]), cfg.out_path)
        return EXIT_GATE
    _emit(render(cfg, result), cfg.out_path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
