"""Command-line surface: simulate | map | eval | sweep | compare.

Every run is reproducible: outputs carry no timestamps and the seed plus the
configuration determine every output byte. Exit codes: 1 usage, 2 I/O,
3 validation.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import fields

from .antonym_mapper import AntonymAccumulator
from .config import METHODS, ConfigError, RunConfig, _parse_value, load_config
from .evaluate import DEFAULT_ALPHA, EvalReport, evaluate_map, tcr_sweep
from .fuzzy_mapper import FuzzyMapSet
from .grid import ScalarGrid
from .prob_mapper import ProbabilisticMap
from .simworld import generate_trace, reference_map
from .traceio import export_map, import_map, parse_trace, write_trace

EXIT_USAGE = 1
EXIT_IO = 2
EXIT_VALIDATION = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="key=value config file")
    for f in fields(RunConfig):
        flag = "--" + f.name.replace("_", "-")
        if f.name == "method":
            parser.add_argument(flag, choices=METHODS)
        else:
            parser.add_argument(flag, metavar="VALUE")


def _config_from_args(args) -> RunConfig:
    overrides = {}
    for f in fields(RunConfig):
        raw = getattr(args, f.name, None)
        if raw is None:
            continue
        overrides[f.name] = raw if f.name == "method" else _parse_value(f.name, raw)
    return load_config(args.config, overrides)


def _write_report(report: EvalReport, prefix: str, method: str, env: str) -> None:
    with open(prefix + ".txt", "w") as f:
        f.write(report.to_text())
    with open(prefix + ".csv", "w") as f:
        f.write(EvalReport.CSV_HEADER + "\n")
        f.write(report.csv_row(method, env) + "\n")


def _build_method(method: str, records, cfg: RunConfig, spec, ring,
                  out_dir: str, images: bool) -> ScalarGrid:
    """Build one method's map from a trace, write its files, return the
    signed map."""

    def emit(grid: ScalarGrid, stem: str):
        export_map(grid, os.path.join(out_dir, stem + ".csv"), "csv")
        if images:
            if grid.range_tag == "unit":
                export_map(grid, os.path.join(out_dir, stem + ".pgm"), "pgm")
            else:
                export_map(grid, os.path.join(out_dir, stem + ".ppm"), "ppm")

    if method == "prob":
        signed = ProbabilisticMap(spec, cfg.prob_params()) \
            .build(records, ring).signed_map()
    elif method == "fuzzy":
        maps = FuzzyMapSet(spec, cfg.fuzzy_params(), cfg.rho_v).build(records, ring)
        emit(maps.occupied_grid, "fuzzy_occup")
        emit(maps.empty_grid, "fuzzy_empty")
        signed = maps.signed_map()
    else:
        acc = AntonymAccumulator(spec, cfg.antonym_params(),
                                 cfg.near_threshold).build(records, ring)
        pre = acc.render_maps()
        for stem, grid in (("antonym_occup_pre", pre.occup),
                           ("antonym_empty_pre", pre.empty),
                           ("antonym_contra_pre", pre.contra),
                           ("antonym_integ_pre", pre.integ)):
            emit(grid, stem)
        if cfg.correction:
            acc.correct_contradictions(cfg.contra_threshold)
            post = acc.render_maps()
            for stem, grid in (("antonym_occup_post", post.occup),
                               ("antonym_empty_post", post.empty),
                               ("antonym_contra_post", post.contra),
                               ("antonym_integ_post", post.integ)):
                emit(grid, stem)
            signed = post.integ
        else:
            signed = pre.integ
    emit(signed, f"map_{method}")
    return signed


def cmd_simulate(args) -> int:
    cfg = _config_from_args(args)
    os.makedirs(args.out_dir, exist_ok=True)
    env = cfg.environment_obj()
    ring = cfg.ring()
    records = generate_trace(env, cfg.trajectory(), ring, cfg.noise(), cfg.seed)
    trace_path = os.path.join(args.out_dir, "trace.txt")
    write_trace(trace_path, records)
    ref = reference_map(env, cfg.grid_spec(env), cfg.reference_halfwidth())
    ref_path = os.path.join(args.out_dir, "reference.csv")
    export_map(ref, ref_path, "csv")
    print(f"simulate: {len(records)} records -> {trace_path}, {ref_path}")
    return 0


def cmd_map(args) -> int:
    cfg = _config_from_args(args)
    os.makedirs(args.out_dir, exist_ok=True)
    records = parse_trace(args.trace)
    env = cfg.environment_obj()
    spec = cfg.grid_spec(env)
    signed = _build_method(cfg.method, records, cfg, spec, cfg.ring(),
                           args.out_dir, args.images)
    print(f"map: {cfg.method} over {len(records)} records -> "
          f"{os.path.join(args.out_dir, f'map_{cfg.method}.csv')}")
    return 0


def cmd_eval(args) -> int:
    signed = import_map(args.map)
    ref = import_map(args.ref)
    report = evaluate_map(signed, ref, args.alpha)
    _write_report(report, args.out, method="", env="")
    print(f"eval: tcr={report.tcr:.4f} mae={report.mae:.4f} -> {args.out}.txt")
    return 0


def cmd_sweep(args) -> int:
    signed = import_map(args.map)
    ref = import_map(args.ref)
    points = tcr_sweep(signed, ref)
    with open(args.out, "w") as f:
        f.write("alpha,tcr\n")
        for alpha, value in points:
            f.write(f"{alpha:.6f},{value:.6f}\n")
    print(f"sweep: {len(points)} points -> {args.out}")
    return 0


def cmd_compare(args) -> int:
    cfg = _config_from_args(args)
    os.makedirs(args.out_dir, exist_ok=True)
    env = cfg.environment_obj()
    ring = cfg.ring()
    spec = cfg.grid_spec(env)
    records = generate_trace(env, cfg.trajectory(), ring, cfg.noise(), cfg.seed)
    write_trace(os.path.join(args.out_dir, "trace.txt"), records)
    ref = reference_map(env, spec, cfg.reference_halfwidth())
    export_map(ref, os.path.join(args.out_dir, "reference.csv"), "csv")

    rows = []
    print(f"{'method':<10}{'P_O':>7}{'R_O':>7}{'F_O':>7}"
          f"{'P_E':>7}{'R_E':>7}{'F_E':>7}{'TCR':>7}{'MAE':>8}")
    for method in METHODS:
        signed = _build_method(method, records, cfg, spec, ring,
                               args.out_dir, args.images)
        report = evaluate_map(signed, ref, cfg.alpha)
        _write_report(report, os.path.join(args.out_dir, f"report_{method}"),
                      method, env.name)
        rows.append(report.csv_row(method, env.name))
        print(f"{method:<10}"
              f"{report.p_obstacle:>7.2f}{report.r_obstacle:>7.2f}"
              f"{report.f_obstacle:>7.2f}{report.p_empty:>7.2f}"
              f"{report.r_empty:>7.2f}{report.f_empty:>7.2f}"
              f"{report.tcr:>7.2f}{report.mae:>8.4f}")
    with open(os.path.join(args.out_dir, "compare.csv"), "w") as f:
        f.write(EvalReport.CSV_HEADER + "\n")
        for row in rows:
            f.write(row + "\n")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="antomap",
                     description="Sonar occupancy-grid mapping and comparison")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a trace and reference map")
    _add_config_flags(p)
    p.add_argument("--out-dir", default=".", metavar="DIR")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("map", help="build a map from a trace file")
    p.add_argument("--trace", required=True, metavar="FILE")
    _add_config_flags(p)
    p.add_argument("--out-dir", default=".", metavar="DIR")
    p.add_argument("--images", action="store_true",
                   help="also write pgm/ppm images")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("eval", help="score a map against a reference map")
    p.add_argument("--map", required=True, metavar="FILE")
    p.add_argument("--ref", required=True, metavar="FILE")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--out", default="report", metavar="PREFIX")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="30-point TCR alpha sweep")
    p.add_argument("--map", required=True, metavar="FILE")
    p.add_argument("--ref", required=True, metavar="FILE")
    p.add_argument("--out", default="sweep.csv", metavar="FILE")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="run all three methods on one trace")
    _add_config_flags(p)
    p.add_argument("--out-dir", default=".", metavar="DIR")
    p.add_argument("--images", action="store_true")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"antomap: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"antomap: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"antomap: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
