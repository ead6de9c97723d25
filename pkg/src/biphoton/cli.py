"""Batch command-line interface.

Every subcommand writes deterministic files into ``--out`` and prints the
written paths, one per line.  Failures emit a single JSON object on stderr
(`{"error": ..., "message": ...}`) and a nonzero exit code: 2 for usage
problems, 1 for anything else.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .coincidence import ClosedFormContext, MeasurementKind, hom_curve, nonlocal_curve
from .errors import BiphotonError
from .experiments import (
    FIGURE_TAGS,
    RunConfig,
    SWEEP_COLUMNS,
    SweepSpec,
    SweepVariable,
    Arm,
    config_from_mapping,
    load_config,
    reproduce_figure,
    run_sweep,
    run_verification,
    write_curve_csv,
    write_jsa_csv,
    write_sweep_csv,
    _write_csv,
    _write_json,
)
from .jsa import BandwidthConvention, assemble_jsa
from .schmidt import schmidt_decompose, schmidt_number

log = logging.getLogger("biphoton")


def _emit_error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: A003 - argparse API
        _emit_error("UsageError", message)
        raise SystemExit(2)


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="JSON config; flags override it")
    parser.add_argument("--pump-nm", type=float, dest="pump_nm")
    parser.add_argument("--pump-fwhm-nm", type=float, dest="pump_fwhm_nm")
    parser.add_argument(
        "--bandwidth-convention",
        dest="bandwidth_convention",
        choices=[c.value for c in BandwidthConvention],
    )
    parser.add_argument("--crystal", metavar="FILE", help="Sellmeier coefficient file")
    parser.add_argument("--length-mm", type=float, dest="length_mm")
    parser.add_argument("--beta-s", type=float, dest="beta_s", help="signal-arm GDD in s^2")
    parser.add_argument("--beta-i", type=float, dest="beta_i", help="idler-arm GDD in s^2")
    parser.add_argument("--grid-n", type=int, dest="grid_n")
    parser.add_argument("--out", default=None, help="output directory (default: cwd)")
    parser.add_argument("--format", choices=["csv", "json"], dest="format")
    parser.add_argument("--verbose", action="store_true")


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides = {
        "pump_nm": args.pump_nm,
        "pump_fwhm_nm": args.pump_fwhm_nm,
        "bandwidth_convention": args.bandwidth_convention,
        "crystal": args.crystal,
        "length_mm": args.length_mm,
        "beta_s": args.beta_s,
        "beta_i": args.beta_i,
        "grid_n": args.grid_n,
        "out": args.out,
        "format": args.format,
    }
    if args.config:
        return load_config(args.config, overrides)
    return config_from_mapping({k: v for k, v in overrides.items() if v is not None})


def _out_dir(config: RunConfig) -> Path:
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _announce(paths: list[Path]) -> int:
    for path in paths:
        print(path)
    return 0


def _state_params(config: RunConfig) -> dict:
    params = config.si_echo()
    params["grid_n"] = config.grid_n
    return params


def _cmd_jsa(config: RunConfig) -> int:
    state = assemble_jsa(
        config.crystal(), config.pump(), beta_s=config.beta_s, beta_i=config.beta_i,
        grid_n=config.grid_n,
    )
    out = _out_dir(config)
    summary = {
        "params": _state_params(config),
        "factors": list(state.factors),
        "norm_squared": state.norm_squared(),
        "tau_s_s": state.walkoff.tau_s,
        "tau_i_s": state.walkoff.tau_i,
    }
    if config.format == "json":
        path = out / "jsa.json"
        _write_json(
            path,
            {
                **summary,
                "nu_s_rad_s": state.grid.nu_s.tolist(),
                "nu_i_rad_s": state.grid.nu_i.tolist(),
                "re_f": state.values.real.tolist(),
                "im_f": state.values.imag.tolist(),
            },
        )
        return _announce([path])
    csv_path = out / "jsa.csv"
    magnitude_path = out / "jsa_magnitude.csv"
    write_jsa_csv(csv_path, magnitude_path, state)
    json_path = out / "jsa_summary.json"
    _write_json(json_path, summary)
    return _announce([csv_path, magnitude_path, json_path])


def _cmd_schmidt(config: RunConfig) -> int:
    state = assemble_jsa(
        config.crystal(), config.pump(), beta_s=config.beta_s, beta_i=config.beta_i,
        grid_n=config.grid_n,
    )
    spectrum = schmidt_decompose(state)
    number = schmidt_number(spectrum)
    out = _out_dir(config)
    summary = {
        "params": _state_params(config),
        "schmidt_number": number,
        "rank_kept": spectrum.rank,
    }
    if config.format == "json":
        path = out / "schmidt.json"
        _write_json(path, {**summary, "coefficients": spectrum.coefficients.tolist()})
        return _announce([path])
    csv_path = out / "schmidt_spectrum.csv"
    _write_csv(
        csv_path,
        ("j", "k_j"),
        [(str(j), "%.9g" % k) for j, k in enumerate(spectrum.coefficients)],
    )
    json_path = out / "schmidt_summary.json"
    _write_json(json_path, summary)
    return _announce([csv_path, json_path])


def _cmd_curve(config: RunConfig, kind: MeasurementKind) -> int:
    state = assemble_jsa(
        config.crystal(), config.pump(), beta_s=config.beta_s, beta_i=config.beta_i,
        grid_n=config.grid_n,
    )
    curve = hom_curve(state) if kind is MeasurementKind.LOCAL else nonlocal_curve(state)
    out = _out_dir(config)
    stem = "hom" if kind is MeasurementKind.LOCAL else "nonlocal"
    summary = {
        "fwhm_s": curve.fwhm_s,
        "visibility": curve.visibility,
        "mode": kind.value,
        "params": _state_params(config),
    }
    if config.format == "json":
        path = out / f"{stem}.json"
        _write_json(
            path,
            {**summary, "tau_s": curve.delays.tolist(), "rate": curve.rates.tolist()},
        )
        return _announce([path])
    csv_path = out / f"{stem}_curve.csv"
    write_curve_csv(csv_path, curve.delays, {"rate": np.asarray(curve.rates)})
    json_path = out / f"{stem}_summary.json"
    _write_json(json_path, summary)
    return _announce([csv_path, json_path])


def _cmd_sweep(config: RunConfig, args: argparse.Namespace) -> int:
    lock = args.lock_reference_nm
    spec = SweepSpec(
        crystal=config.crystal(),
        variable=SweepVariable(args.variable),
        start_nm=args.start_nm,
        stop_nm=args.stop_nm,
        step_nm=args.step_nm,
        bandwidth_nm=(
            config.pump_fwhm_nm
            if SweepVariable(args.variable) is SweepVariable.PUMP_WAVELENGTH
            else None
        ),
        lock_reference_nm=lock,
        convention=config.bandwidth_convention,
        pump_nm=(
            config.pump_nm
            if SweepVariable(args.variable) is SweepVariable.PUMP_FWHM
            else None
        ),
        beta_ref=args.beta_ref,
        arm=Arm(args.arm),
        kind=MeasurementKind(args.mode),
        grid_n=config.grid_n if config.grid_n >= 8 else 256,
    )
    rows = run_sweep(spec)
    failures = sum(1 for r in rows if r.error)
    if failures:
        log.warning("%d of %d sweep points recorded errors", failures, len(rows))
    out = _out_dir(config)
    if config.format == "json":
        path = out / "sweep.json"
        _write_json(path, {"rows": [asdict(r) for r in rows]})
        return _announce([path])
    csv_path = out / "sweep.csv"
    write_sweep_csv(csv_path, rows)
    json_path = out / "sweep_summary.json"
    _write_json(
        json_path,
        {
            "columns": list(SWEEP_COLUMNS),
            "points": len(rows),
            "failed_points": failures,
            "variable": spec.variable.value,
            "arm": spec.arm.value,
            "measurement": spec.kind.value,
        },
    )
    return _announce([csv_path, json_path])


def _cmd_figure(config: RunConfig, args: argparse.Namespace) -> int:
    crystal = None
    if config.crystal_path is not None or config.length_mm != 10.0:
        crystal = config.crystal()
    paths = reproduce_figure(args.tag, _out_dir(config), crystal)
    return _announce(paths)


def _cmd_verify(config: RunConfig) -> int:
    out = _out_dir(config)
    crystal = config.crystal() if config.crystal_path is not None else None
    report = run_verification(crystal, out)
    summary = report["summary"]
    print(out / "verify_report.json")
    print("worst local relative error:    %.3e" % summary["worst_local_relative_error"])
    print("worst nonlocal relative error: %.3e" % summary["worst_nonlocal_full_relative_error"])
    print("worst Schmidt relative error:  %.3e" % summary["worst_schmidt_relative_error"])
    discrepant = [r for r in report["nonlocal"] if r["cross_term_discrepancy"]]
    for row in discrepant:
        print(
            "cross-term discrepancy at beta_s=%g beta_i=%g: "
            "no-cross-term form off by %.1f%%, full form off by %.2f%%"
            % (
                row["beta_s_s2"],
                row["beta_i_s2"],
                100 * row["no_cross_term_relative_error"],
                100 * row["full_relative_error"],
            )
        )
    return 0 if summary["all_within_tolerance"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="biphoton", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("jsa", "schmidt", "hom", "nonlocal", "verify"):
        p = sub.add_parser(name)
        _add_common_flags(p)

    p_sweep = sub.add_parser("sweep")
    _add_common_flags(p_sweep)
    p_sweep.add_argument("--variable", choices=[v.value for v in SweepVariable],
                         default=SweepVariable.PUMP_WAVELENGTH.value)
    p_sweep.add_argument("--start-nm", type=float, default=590.0)
    p_sweep.add_argument("--stop-nm", type=float, default=810.0)
    p_sweep.add_argument("--step-nm", type=float, default=1.0)
    p_sweep.add_argument("--lock-reference-nm", type=float, default=None,
                         help="convert the nm bandwidth once, at this wavelength")
    p_sweep.add_argument("--beta-ref", type=float, default=100e-27)
    p_sweep.add_argument("--arm", choices=[a.value for a in Arm], default=Arm.SIGNAL.value)
    p_sweep.add_argument("--mode", choices=[k.value for k in MeasurementKind],
                         default=MeasurementKind.LOCAL.value)

    p_fig = sub.add_parser("figure")
    p_fig.add_argument("tag", choices=list(FIGURE_TAGS))
    _add_common_flags(p_fig)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = _config_from_args(args)
        if getattr(args, "verbose", False):
            for key, value in sorted(config.si_echo().items()):
                log.info("%s = %.9g", key, value)
        if args.command == "jsa":
            return _cmd_jsa(config)
        if args.command == "schmidt":
            return _cmd_schmidt(config)
        if args.command == "hom":
            return _cmd_curve(config, MeasurementKind.LOCAL)
        if args.command == "nonlocal":
            return _cmd_curve(config, MeasurementKind.NONLOCAL)
        if args.command == "sweep":
            return _cmd_sweep(config, args)
        if args.command == "figure":
            return _cmd_figure(config, args)
        if args.command == "verify":
            return _cmd_verify(config)
        raise AssertionError(f"unhandled command {args.command!r}")
    except BiphotonError as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 1
    except (ValueError, OSError) as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
