"""Command-line entry point: ``freeelastica <command> [--h H] [--out DIR] ...``.

Commands
    constants       critical constants as JSON
    elastica        graph U over [-3, 3], the branch U* / gamma* (CSV + SVG)
    solve           existence verdict and minimiser for apex height --h
    verify          invariant suites; pass/fail table on stdout
    oracle-compare  discrete minimisation versus the analytic minimiser

Exit status: 0 success, 1 domain error, 2 verification failure, 64 usage
error, 74 output not writable. File names are ``<command>_<h-or-na>.<ext>``
(extra artifacts of one command add a ``_<part>`` suffix); no timestamps.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import export
from .errors import FreeElasticaError

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_VERIFY = 2
EXIT_USAGE = 64
EXIT_IO = 74

COMMANDS = ("constants", "elastica", "solve", "verify", "oracle-compare")
FORMATS = ("csv", "json", "svg")
U_POINTS = 1537  # over [-3, 3]: 1024 points per period of U


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    h: float | None = None
    samples: int = 2048
    output_dir: Path = Path(".")
    formats: frozenset = field(default_factory=lambda: frozenset(FORMATS))
    seed: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.command in ("solve", "oracle-compare") and self.h is None:
            raise UsageError(f"{self.command} requires --h")
        if self.samples < 64:
            raise UsageError("--samples must be at least 64")
        bad = set(self.formats) - set(FORMATS)
        if bad:
            raise UsageError(f"unknown format(s): {', '.join(sorted(bad))}")

    def tag(self) -> str:
        return "na" if self.h is None else export.fmt(self.h)

    def path(self, ext: str, part: str = "") -> Path:
        suffix = f"_{part}" if part else ""
        return Path(self.output_dir) / f"{self.command}_{self.tag()}{suffix}.{ext}"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="freeelastica",
                     description="Free elasticae and the symmetric cone-obstacle problem.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--h", type=float, default=None, help="cone apex height")
    parser.add_argument("--samples", type=int, default=2048,
                        help="samples of the canonical branch (>= 64)")
    parser.add_argument("--out", type=Path, default=Path("."), help="output directory")
    parser.add_argument("--format", action="append", choices=FORMATS, dest="formats",
                        help="artifact format; repeat for several (default: all)")
    parser.add_argument("--seed", type=int, default=0, help="seed for random benchmark curves")
    return parser


def _emit(cfg: RunConfig, ext: str, text: str, part: str = "") -> None:
    if ext in cfg.formats:
        export.write_text(cfg.path(ext, part), text)


# -- commands ------------------------------------------------------------------

def _constants(cfg: RunConfig) -> int:
    from .elliptic import paper_constants

    text = export.to_json(export.constants_record(paper_constants()))
    _emit(cfg, "json", text)
    sys.stdout.write(text)
    return EXIT_OK


def _elastica(cfg: RunConfig) -> int:
    from .elastica import H_STAR, canonical_branch, canonical_graph_point
    from .obstacle import assemble_solution

    x = np.linspace(-3.0, 3.0, U_POINTS)
    pts = [canonical_graph_point(v) for v in x]
    u = np.array([p.u for p in pts])
    slope = np.array([p.slope for p in pts])
    kappa = np.array([p.curvature for p in pts])
    branch = canonical_branch(cfg.samples)
    _emit(cfg, "csv", export.csv_text(["x", "U", "dU", "kappa"], [x, u, slope, kappa]))
    _emit(cfg, "csv", export.branch_csv(branch), "branch")

    if "svg" in cfg.formats:
        fig_u = export.Figure("graph of U (rectangular elastica)", "x", "U(x)",
                              [export.Series(x, u, label="U")])
        _emit(cfg, "svg", export.render_svg(fig_u))
        c = branch.curve
        sol = assemble_solution(1.0).solution
        half = sol.samples.x <= 0.0
        fig_b = export.Figure(
            "branch U* and the similar copy solving h = 1", "x", "y",
            [export.Series(c.position[:, 0], c.position[:, 1], label="U* / gamma*"),
             export.Series(sol.samples.x[half] + 1.0, sol.samples.u[half], color="#c0392b",
                           dash="12 8", label="lambda R_phi gamma*([0, s]) shifted by +1")],
            [export.Marker(1.0, H_STAR, "(1, h*)", "#1f4e9c"),
             export.Marker(1.0, 1.0, "(1, h) for h = 1")],
        )
        _emit(cfg, "svg", export.render_svg(fig_b), "branch")
    print(f"elastica: {U_POINTS} points of U, {len(branch.curve)} branch samples, "
          f"L* = {export.fmt(branch.L_star)}")
    return EXIT_OK


def _solve(cfg: RunConfig) -> int:
    from .obstacle import assemble_solution

    verdict = assemble_solution(cfg.h)
    text = export.to_json(export.solution_record(verdict))
    _emit(cfg, "json", text)
    sol = verdict.solution
    if sol is not None:
        _emit(cfg, "csv", export.solution_csv(sol))
        if "svg" in cfg.formats:
            s = sol.samples
            fig = export.Figure(
                f"cone obstacle h = {export.fmt(cfg.h)}", "x", "height",
                [export.Series(s.x, sol.problem.psi(s.x), color="#7f8c8d", label="cone psi"),
                 export.Series(s.x, s.u, label="minimiser u")],
                [export.Marker(0.0, cfg.h, "touching point (0, h)")],
            )
            _emit(cfg, "svg", export.render_svg(fig))
    sys.stdout.write(text)
    return EXIT_OK


def _verify(cfg: RunConfig) -> int:
    from .verify import format_table, run_all

    results = run_all(cfg.seed)
    table = format_table(results)
    print(table)
    _emit(cfg, "json", export.to_json({"seed": cfg.seed,
                                       "suites": [r.as_dict() for r in results]}))
    _emit(cfg, "csv", "name,passed,metric,threshold\n" + "".join(
        f"{r.name},{int(r.passed)},{export.fmt(r.metric)},{export.fmt(r.threshold)}\n"
        for r in results))
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} suites passed")
    return EXIT_VERIFY if failed else EXIT_OK


def _oracle_compare(cfg: RunConfig) -> int:
    from .oracle import compare

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RuntimeWarning)
        report = compare(cfg.h)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    text = export.to_json(export.oracle_record(report))
    _emit(cfg, "json", text)
    sys.stdout.write(text)
    return EXIT_OK


_DISPATCH = {
    "constants": _constants,
    "elastica": _elastica,
    "solve": _solve,
    "verify": _verify,
    "oracle-compare": _oracle_compare,
}


def run(cfg: RunConfig) -> int:
    if cfg.h is not None and not (math.isfinite(cfg.h) and cfg.h > 0.0):
        print(f"error: h must be a positive finite number, got {cfg.h}", file=sys.stderr)
        return EXIT_DOMAIN
    try:
        Path(cfg.output_dir).mkdir(parents=True, exist_ok=True)
        return _DISPATCH[cfg.command](cfg)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    except (FreeElasticaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            h=args.h,
            samples=args.samples,
            output_dir=args.out,
            formats=frozenset(args.formats or FORMATS),
            seed=args.seed,
        )
    except UsageError as exc:
        print(f"freeelastica: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
