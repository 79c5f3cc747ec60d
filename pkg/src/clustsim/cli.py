"""Command-line surface: dataset I/O, four subcommands, and SVG figures.

Exit codes: 0 success, 1 usage error, 2 data or domain error.
"""
from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

from .algorithms import cluster_columns
from .bayes import ClusteringResult, Hypothesis, posterior
from .core import DataMatrix, format_partition, parse_partition, pattern
from .distance import distance_matrix
from .harness import SweepConfig, SweepResult, default_sigma_grid, sweep
from .synthesis import NoiseSpec, Seed, generate

__all__ = [
    "CsvParseError",
    "FigureSpec",
    "main",
    "read_csv",
    "render_figure",
    "sweep_csv",
    "write_csv",
]

ALGO_NAMES = {"single": "single_linkage", "diana": "diana", "pam": "pam"}
DIST_NAMES = {"normal": "normal", "t3": "student_t3"}


class CsvParseError(ValueError):
    """Malformed dataset file; the message carries the row/column location."""


def _fmt(x: float) -> str:
    """17 significant digits: enough to round-trip any 64-bit float."""
    return format(float(x), ".17g")


def read_csv(path: str | Path) -> DataMatrix:
    """Load a rectangular numeric CSV, with an optional header row of labels.

    A header is detected by a non-numeric cell in the first row; without
    one, columns are labeled X1..Xp.
    """
    rows: list[list[str]] = []
    with open(path, newline="", encoding="utf-8-sig") as fh:
        for row in csv.reader(fh):
            if row and any(cell.strip() for cell in row):
                rows.append([cell.strip() for cell in row])
    if not rows:
        raise CsvParseError(f"{path}: file contains no data")
    width = len(rows[0])
    for number, row in enumerate(rows, start=1):
        if len(row) != width:
            raise CsvParseError(
                f"{path}: row {number} has {len(row)} cells, expected {width}"
            )

    def parse_row(row: list[str], number: int) -> list[float]:
        out = []
        for j, cell in enumerate(row, start=1):
            try:
                out.append(float(cell))
            except ValueError:
                raise CsvParseError(
                    f"{path}: row {number}, column {j}: {cell!r} is not a number"
                ) from None
        return out

    header: tuple[str, ...] = ()
    values: list[list[float]] = []
    try:
        values.append(parse_row(rows[0], 1))
    except CsvParseError:
        header = tuple(rows[0])
    for number, row in enumerate(rows[1:], start=2):
        values.append(parse_row(row, number))
    if len(values) < 2:
        raise CsvParseError(f"{path}: need at least 2 data rows, found {len(values)}")
    if width < 2:
        raise CsvParseError(f"{path}: need at least 2 columns, found {width}")
    try:
        return DataMatrix(values, header)
    except ValueError as exc:
        raise CsvParseError(f"{path}: {exc}") from None


def write_csv(m: DataMatrix, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(m.col_names) + "\n")
        for row in m.values:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def sweep_csv(result: SweepResult) -> str:
    """One row per grid sigma, with the configuration echoed on every row."""
    cfg = result.config
    lines = ["algorithm,pattern,distribution,n,k,B,sigma,errors,error_rate"]
    for point in result.points:
        lines.append(
            f"{cfg.algorithm},{cfg.pattern_id},{cfg.distribution},{cfg.n},{cfg.k},"
            f"{cfg.iterations},{_fmt(point.sigma)},{point.error_count},{_fmt(point.error_rate)}"
        )
    return "\n".join(lines) + "\n"


# --- SVG figure -----------------------------------------------------------

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_W, _H = 720, 480
_ML, _MR, _MT, _MB = 64, 24, 48, 56


@dataclass(frozen=True)
class FigureSpec:
    """An error-rate line chart: one series per sweep, shared sigma grid."""

    series: tuple[tuple[str, SweepResult], ...]
    title: str
    x_label: str = "sigma"
    y_label: str = "f"

    def __post_init__(self) -> None:
        if not self.series:
            raise ValueError("a figure needs at least one series")
        grids = {tuple(r.config.sigma_grid) for _, r in self.series}
        if len(grids) != 1:
            raise ValueError("all series must share the same sigma grid")


def render_figure(spec: FigureSpec) -> str:
    """Dependency-free SVG: y fixed to [0, 1] with ticks every 0.1, one
    polyline per series."""
    sigmas = spec.series[0][1].config.sigma_grid
    x_max = max(1e-12, max(sigmas))
    plot_w = _W - _ML - _MR
    plot_h = _H - _MT - _MB

    def sx(s: float) -> float:
        return _ML + (s / x_max) * plot_w

    def sy(f: float) -> float:
        f = min(1.0, max(0.0, f))
        return _MT + (1.0 - f) * plot_h

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.1f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{escape(spec.title)}</text>',
    ]
    # grid and ticks every 0.1 on both axes
    ticks = [t / 10 for t in range(0, 11)]
    for t in ticks:
        y = sy(t)
        out.append(
            f'<line x1="{_ML}" y1="{y:.1f}" x2="{_W - _MR}" y2="{y:.1f}" '
            'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_ML - 8}" y="{y + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{t:.1f}</text>'
        )
    for t in ticks:
        s = t * x_max
        x = sx(s)
        out.append(
            f'<line x1="{x:.1f}" y1="{_MT}" x2="{x:.1f}" y2="{_H - _MB}" '
            'stroke="#eeeeee" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{x:.1f}" y="{_H - _MB + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{s:.2f}</text>'
        )
    out.append(
        f'<rect x="{_ML}" y="{_MT}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#333333" stroke-width="1"/>'
    )
    out.append(
        f'<text x="{_ML + plot_w / 2:.1f}" y="{_H - 16}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{escape(spec.x_label)}</text>'
    )
    out.append(
        f'<text x="20" y="{_MT + plot_h / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 20 {_MT + plot_h / 2:.1f})">{escape(spec.y_label)}</text>'
    )
    for idx, (label, result) in enumerate(spec.series):
        color = _PALETTE[idx % len(_PALETTE)]
        points = " ".join(
            f"{sx(p.sigma):.2f},{sy(p.error_rate):.2f}" for p in result.points
        )
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.8" points="{points}"/>'
        )
        ly = _MT + 16 + 18 * idx
        out.append(
            f'<line x1="{_W - _MR - 150}" y1="{ly - 4}" x2="{_W - _MR - 122}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.8"/>'
        )
        out.append(
            f'<text x="{_W - _MR - 116}" y="{ly}" font-family="sans-serif" '
            f'font-size="12">{escape(label)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


# --- subcommands ----------------------------------------------------------

def _cmd_cluster(args: argparse.Namespace) -> int:
    m = read_csv(args.input)
    part = cluster_columns(ALGO_NAMES[args.algo], distance_matrix(m), args.k)
    print(format_partition(part, m.col_names))
    return 0


def _cmd_generate(args: argparse.Namespace) -> int:
    m = generate(
        pattern(args.pattern),
        args.n,
        NoiseSpec(DIST_NAMES[args.dist], args.sigma),
        Seed(args.seed),
    )
    write_csv(m, args.out)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = SweepConfig(
        algorithm=ALGO_NAMES[args.algo],
        pattern_id=args.pattern,
        n=args.n,
        distribution=DIST_NAMES[args.dist],
        sigma_grid=default_sigma_grid(args.sigma_steps),
        iterations=args.iters,
        seed=Seed(args.seed),
        k=args.k,
    )
    result = sweep(config, workers=args.workers)
    Path(args.out).write_text(sweep_csv(result), encoding="utf-8")
    if args.svg:
        label = f"{args.algo} pattern {args.pattern} n={args.n} {args.dist}"
        spec = FigureSpec(
            series=((label, result),),
            title=f"error rate vs noise sd (B={args.iters})",
        )
        Path(args.svg).write_text(render_figure(spec), encoding="utf-8")
    return 0


def _parse_result(text: str, col_names: tuple[str, ...]) -> ClusteringResult:
    algo, sep, partition_text = text.partition(":")
    if not sep or algo not in ALGO_NAMES:
        raise ValueError(
            f"--result must look like ALGO:PARTITION with ALGO in "
            f"{sorted(ALGO_NAMES)}, got {text!r}"
        )
    return ClusteringResult(
        ALGO_NAMES[algo], parse_partition(partition_text, col_names)
    )


def _cmd_posterior(args: argparse.Namespace) -> int:
    m = read_csv(args.input)
    results = [_parse_result(text, m.col_names) for text in args.result]
    if args.priors is None:
        priors = [1.0 / len(results)] * len(results)
    else:
        priors = [float(x) for x in args.priors.split(",")]
        if len(priors) != len(results):
            raise ValueError(
                f"{len(priors)} priors for {len(results)} results; counts must match"
            )
    hypotheses = [
        Hypothesis(r.observed, prior) for r, prior in zip(results, priors)
    ]
    report = posterior(
        results, hypotheses, m, args.iters, Seed(args.seed), workers=args.workers
    )

    names = m.col_names
    print(f"posterior report  (iterations={report.iterations}, seed={args.seed})")
    print("hypotheses:")
    for j, h in enumerate(report.hypotheses, start=1):
        print(f"  H{j}: {format_partition(h.partition, names)}  prior={h.prior:g}")
    print("results:")
    for i, row in enumerate(report.rows, start=1):
        print(f"  {row.algorithm}  c={format_partition(row.observed, names)}")
        conds = "  ".join(
            f"P(c|H{j + 1})={c.probability:.4f} (se {c.stderr:.4f})"
            for j, c in enumerate(row.conditionals)
        )
        print(f"    {conds}")
        print(f"    posterior P(H{i}|c)={row.posterior:.4f}")
    print(f"recommended: {report.recommendation}")

    if args.out:
        lines = ["algorithm,hypothesis,conditional,stderr,prior,posterior,recommended"]
        for i, row in enumerate(report.rows):
            for j, (cond, hyp) in enumerate(zip(row.conditionals, report.hypotheses)):
                flag = "true" if row.recommended and i == j else "false"
                lines.append(
                    f"{row.algorithm},{format_partition(hyp.partition, names)},"
                    f"{_fmt(cond.probability)},{_fmt(cond.stderr)},{_fmt(hyp.prior)},"
                    f"{_fmt(row.posteriors[j])},{flag}"
                )
        Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return 0


# --- parser ---------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this workbench reserves 2 for data
    errors and uses 1 for usage."""

    def error(self, message: str):  # noqa: ANN201 - argparse signature
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="clustsim",
        description=(
            "Cluster variables by correlation distance, generate linked noisy "
            "data sets, sweep Monte Carlo error rates, and compare discordant "
            "clusterings a posteriori."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster the columns of a CSV file")
    p.add_argument("--input", required=True, help="CSV data file")
    p.add_argument("--algo", required=True, choices=sorted(ALGO_NAMES))
    p.add_argument("--k", type=int, required=True, help="number of clusters")
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("generate", help="write one synthetic data set as CSV")
    p.add_argument("--pattern", type=int, required=True, choices=(1, 2, 3))
    p.add_argument("--n", type=int, required=True, help="number of rows")
    p.add_argument("--dist", required=True, choices=sorted(DIST_NAMES))
    p.add_argument("--sigma", type=float, required=True, help="noise sd")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("sweep", help="error-rate curve over a noise grid")
    p.add_argument("--algo", required=True, choices=sorted(ALGO_NAMES))
    p.add_argument("--pattern", type=int, required=True, choices=(1, 2, 3))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dist", required=True, choices=sorted(DIST_NAMES))
    p.add_argument("--sigma-steps", type=int, default=30,
                   help="grid points j/steps for j=1..steps (default 30)")
    p.add_argument("--iters", type=int, required=True, help="iterations per grid point")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--svg", help="also write an SVG line chart here")
    p.add_argument("--workers", type=int, default=1,
                   help="worker processes (never changes results)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("posterior", help="compare discordant results by Bayes rule")
    p.add_argument("--input", required=True, help="CSV data file")
    p.add_argument("--result", action="append", required=True,
                   metavar="ALGO:PARTITION",
                   help="observed result, e.g. pam:{X1,X2}|{X3,X4}|{X5,X6} (repeat)")
    p.add_argument("--priors", help="comma-separated priors (default uniform)")
    p.add_argument("--iters", type=int, default=10000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="also write a CSV report here")
    p.add_argument("--workers", type=int, default=1,
                   help="worker processes (never changes results)")
    p.set_defaults(func=_cmd_posterior)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse printed the message already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"clustsim: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
