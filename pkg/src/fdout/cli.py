"""Command-line interface.

Subcommands: ``simulate`` writes a synthetic sample and its planted-outlier
truth file; ``detect`` runs a detector on CSV curves and writes a JSON
report (optionally an SVG); ``depth`` writes per-curve ordering scores;
``plot`` renders a stored report. Exit codes: 0 success, 2 invalid input,
3 numeric failure.

Flag defaults are read off the library function signatures, so the CLI can
never drift from the library defaults.
"""

from __future__ import annotations

import argparse
import dataclasses
import inspect
import os
import sys
from typing import Optional

import numpy as np

from . import detect as _detect
from .csvio import atomic_write_text, read_curves, write_curves, write_truth
from .errors import FdoutError, NumericError, ValidationError
from .fdcore import MultiCurveSample, RandomSource
from .muod import muod as _muod
from .report import SCHEMA_VERSION, DetectionReport, to_external_indices
from .simmodels import simulation_model
from .svgplot import emit_plot

__all__ = ["main", "build_parser", "run_simulate", "run_detect", "run_depth", "run_plot"]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3


def _default(func, name):
    return inspect.signature(func).parameters[name].default


def _add_csv_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--layout", choices=["wide", "per-dimension"], default="wide",
                        help="input CSV layout (multiple files imply per-dimension)")
    parser.add_argument("--header", choices=["auto", "yes", "no"], default="auto",
                        help="whether the first CSV row holds grid points")
    parser.add_argument("--id-column", choices=["auto", "yes", "no"], default="auto",
                        help="whether the first CSV column holds curve ids")


def _tristate(value: str):
    return {"auto": "auto", "yes": True, "no": False}[value]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fdout",
        description="Outlier detection for grid-sampled functional data.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sim = sub.add_parser("simulate", help="generate a synthetic sample with planted outliers")
    sim.add_argument("--model", type=int, required=True, help="model id, 1..9")
    sim.add_argument("--n", type=int, default=_default(simulation_model, "n"))
    sim.add_argument("--p", type=int, default=_default(simulation_model, "p"))
    sim.add_argument("--rate", type=float, default=_default(simulation_model, "outlier_rate"))
    sim.add_argument("--seed", type=int, default=_default(simulation_model, "seed"))
    sim.add_argument("--deterministic", action="store_true",
                     help="plant exactly ceil(n*rate) outliers at evenly spaced rows")
    sim.add_argument("--out", required=True, help="output directory for data.csv and truth.txt")

    det = sub.add_parser("detect", help="run a detector and write a JSON report")
    det.add_argument("--method", required=True,
                     choices=["msplot", "tvdmss", "seq", "muod", "fbplot"])
    det.add_argument("--in", dest="infile", required=True,
                     help="input CSV path(s), comma separated for per-dimension input")
    det.add_argument("--report", required=True, help="output JSON report path")
    det.add_argument("--plot", default=None, help="optional SVG output path")
    det.add_argument("--plot-kind", choices=["curves", "msplot"], default="curves")
    det.add_argument("--seed", type=int, default=0, help="seed for randomised steps")
    det.add_argument("--level", type=float, default=_default(_detect.msplot, "level"),
                     help="msplot: flagging tail probability")
    det.add_argument("--coverage", type=float, default=None,
                     help="msplot: MCD coverage fraction (default max breakdown)")
    det.add_argument("--factor-mss", type=float,
                     default=_default(_detect.tvdmss, "emp_factor_mss"),
                     help="tvdmss: boxplot factor on shape similarity")
    det.add_argument("--factor-tvd", type=float,
                     default=_default(_detect.tvdmss, "emp_factor_tvd"),
                     help="tvdmss: functional boxplot factor")
    det.add_argument("--sequence", default="T0,T1,T2",
                     help="seq: comma-separated stages from T0,D0,T1,T2,D1,D2,O")
    det.add_argument("--depth", default=_default(_detect.seq_transform, "depth_method"),
                     choices=list(_detect.DEPTH_METHODS),
                     help="seq/fbplot: ordering method")
    det.add_argument("--erld-type", default=None,
                     choices=["two_sided", "one_sided_right", "one_sided_left"],
                     help="tail convention when --depth erld")
    det.add_argument("--central-region", type=float,
                     default=_default(_detect.functional_boxplot, "central_region"),
                     help="fbplot/seq/tvdmss: central region fraction")
    det.add_argument("--factor", type=float,
                     default=_default(_detect.functional_boxplot, "factor"),
                     help="fbplot/seq: fence factor")
    det.add_argument("--cut", default=_default(_muod, "cut_method"),
                     choices=["boxplot", "tangent"], help="muod: cutoff method")
    _add_csv_flags(det)

    dep = sub.add_parser("depth", help="write per-curve ordering scores as CSV")
    dep.add_argument("--method", required=True, choices=list(_detect.DEPTH_METHODS))
    dep.add_argument("--in", dest="infile", required=True)
    dep.add_argument("--out", required=True)
    dep.add_argument("--erld-type", default=None,
                     choices=["two_sided", "one_sided_right", "one_sided_left"])
    dep.add_argument("--seed", type=int, default=0)
    _add_csv_flags(dep)

    plo = sub.add_parser("plot", help="render an SVG from data and a stored report")
    plo.add_argument("--in", dest="infile", required=True)
    plo.add_argument("--kind", choices=["curves", "msplot"], default="curves")
    plo.add_argument("--out", required=True)
    plo.add_argument("--report", default=None, help="JSON report with outliers to highlight")
    _add_csv_flags(plo)

    return parser


def _load_sample(args):
    paths = [p for p in args.infile.split(",") if p]
    return read_curves(
        paths,
        layout=args.layout,
        header=_tristate(args.header),
        id_column=_tristate(args.id_column),
    )


def run_simulate(args) -> int:
    out = simulation_model(
        args.model,
        n=args.n,
        p=args.p,
        outlier_rate=args.rate,
        deterministic=args.deterministic,
        seed=args.seed,
    )
    os.makedirs(args.out, exist_ok=True)
    data_path = os.path.join(args.out, "data.csv")
    truth_path = os.path.join(args.out, "truth.txt")
    write_curves(data_path, out.data)
    write_truth(truth_path, out.true_outliers)
    print(f"wrote {data_path} ({out.data.n}x{out.data.p}) and "
          f"{truth_path} ({out.true_outliers.size} outliers)")
    return EXIT_OK


def _dims(sample) -> tuple[int, int, int]:
    if isinstance(sample, MultiCurveSample):
        return sample.n, sample.p, sample.d
    return sample.n, sample.p, 1


def _detect_report(args, sample) -> DetectionReport:
    n, p, d = _dims(sample)
    method = args.method
    if method == "msplot":
        res = _detect.msplot(
            sample, level=args.level, coverage=args.coverage,
            rng=RandomSource(args.seed),
        )
        return DetectionReport(
            method=method,
            parameters={"level": args.level, "coverage": args.coverage,
                        "seed": args.seed},
            n=n, p=p, d=d,
            outliers={"all": to_external_indices(res.outliers)},
            diagnostics={
                "mo": res.mo,
                "vo": res.vo,
                "distances": res.distances,
                "cutoff_threshold": res.cutoff.threshold,
                "cutoff_dof": [res.cutoff.dof1, res.cutoff.dof2],
            },
        )
    if method == "tvdmss":
        if isinstance(sample, MultiCurveSample):
            sample = sample.to_univariate()
        res = _detect.tvdmss(
            sample,
            emp_factor_mss=args.factor_mss,
            emp_factor_tvd=args.factor_tvd,
            central_region_tvd=args.central_region,
        )
        return DetectionReport(
            method=method,
            parameters={"emp_factor_mss": args.factor_mss,
                        "emp_factor_tvd": args.factor_tvd,
                        "central_region_tvd": args.central_region},
            n=n, p=p, d=d,
            outliers={
                "all": to_external_indices(res.outliers),
                "shape": to_external_indices(res.shape_outliers),
                "magnitude": to_external_indices(res.magnitude_outliers),
            },
            diagnostics={"tvd": res.tvd, "mss": res.mss},
        )
    if method == "seq":
        stages = [s for s in args.sequence.split(",") if s]
        res = _detect.seq_transform(
            sample, stages,
            depth_method=args.depth,
            erld_type=args.erld_type,
            rng=RandomSource(args.seed),
            central_region=args.central_region,
            factor=args.factor,
        )
        union = np.array([], dtype=np.intp)
        for stage in res.stages:
            union = np.union1d(union, stage.outliers)
        newly = _detect.stage_set_differences(res)
        return DetectionReport(
            method=method,
            parameters={"sequence": stages, "depth": args.depth,
                        "erld_type": args.erld_type, "seed": args.seed,
                        "central_region": args.central_region,
                        "factor": args.factor},
            n=n, p=p, d=d,
            outliers={"all": to_external_indices(union)},
            diagnostics={
                "stages": [
                    {"label": s.label, "outliers": to_external_indices(s.outliers)}
                    for s in res.stages
                ],
                "new_per_stage": [
                    {"label": label, "outliers": to_external_indices(idx)}
                    for label, idx in newly
                ],
            },
            warnings=res.warnings,
        )
    if method == "muod":
        if isinstance(sample, MultiCurveSample):
            sample = sample.to_univariate()
        flags, indices = _muod(sample, cut_method=args.cut)
        union = np.union1d(np.union1d(flags.shape, flags.magnitude), flags.amplitude)
        return DetectionReport(
            method=method,
            parameters={"cut": args.cut},
            n=n, p=p, d=d,
            outliers={
                "all": to_external_indices(union),
                "shape": to_external_indices(flags.shape),
                "magnitude": to_external_indices(flags.magnitude),
                "amplitude": to_external_indices(flags.amplitude),
            },
            diagnostics={
                "index_shape": indices.shape,
                "index_magnitude": indices.magnitude,
                "index_amplitude": indices.amplitude,
            },
        )
    # fbplot
    if isinstance(sample, MultiCurveSample):
        sample = sample.to_univariate()
    depth = _detect.depth_by_name(
        sample, args.depth, erld_type=args.erld_type, rng=RandomSource(args.seed)
    )
    res = _detect.functional_boxplot(
        sample, depth, central_region=args.central_region, factor=args.factor
    )
    return DetectionReport(
        method=method,
        parameters={"depth": args.depth, "erld_type": args.erld_type,
                    "central_region": args.central_region, "factor": args.factor},
        n=n, p=p, d=d,
        outliers={"all": to_external_indices(res.outliers)},
        diagnostics={
            "depth": res.depth.scores,
            "depth_direction": res.depth.direction,
            "central": to_external_indices(res.central_indices),
            "envelope_lower": res.envelope_lower,
            "envelope_upper": res.envelope_upper,
            "fence_lower": res.fence_lower,
            "fence_upper": res.fence_upper,
        },
    )


def run_detect(args) -> int:
    sample = _load_sample(args)
    report = _detect_report(args, sample)
    if not sample.grid.is_uniform:
        note = ("grid spacing is non-uniform; summaries that average over the "
                "grid treat all points equally")
        report = dataclasses.replace(report, warnings=report.warnings + (note,))
    atomic_write_text(args.report, report.to_json())
    if args.plot:
        plot_sample = sample
        if isinstance(sample, MultiCurveSample) and sample.d == 1:
            plot_sample = sample.to_univariate()
        emit_plot(report, plot_sample, args.plot_kind, args.plot)
    return EXIT_OK


def run_depth(args) -> int:
    sample = _load_sample(args)
    if isinstance(sample, MultiCurveSample) and sample.d == 1:
        sample = sample.to_univariate()
    depth = _detect.depth_by_name(
        sample, args.method, erld_type=args.erld_type, rng=RandomSource(args.seed)
    )
    ids = sample.ids
    lines = ["curve,score"]
    for i, score in enumerate(depth.scores):
        label = str(ids[i]) if ids is not None else str(i + 1)
        lines.append(f"{label},{repr(float(score))}")
    atomic_write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def run_plot(args) -> int:
    sample = _load_sample(args)
    if args.report is not None:
        with open(args.report, "r", encoding="utf-8") as handle:
            report = DetectionReport.from_json(handle.read())
    else:
        n, p, d = _dims(sample)
        report = DetectionReport(
            method="none", parameters={}, n=n, p=p, d=d, outliers={"all": []}
        )
    if isinstance(sample, MultiCurveSample) and sample.d == 1:
        sample = sample.to_univariate()
    emit_plot(report, sample, args.kind, args.out)
    return EXIT_OK


def _error_report(args, exc: FdoutError) -> None:
    """Best-effort error report so pipelines can inspect failures."""
    report = DetectionReport(
        method=getattr(args, "method", "unknown"),
        parameters={},
        n=0, p=0, d=0,
        outliers={},
        error={"type": type(exc).__name__, "message": str(exc)},
    )
    try:
        atomic_write_text(args.report, report.to_json())
    except OSError:
        pass


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    runners = {
        "simulate": run_simulate,
        "detect": run_detect,
        "depth": run_depth,
        "plot": run_plot,
    }
    try:
        return runners[args.subcommand](args)
    except NumericError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        if args.subcommand == "detect":
            _error_report(args, exc)
        return EXIT_NUMERIC
    except ValidationError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        if args.subcommand == "detect":
            _error_report(args, exc)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
