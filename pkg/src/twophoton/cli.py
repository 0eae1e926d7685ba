"""Command-line front end that writes plot-ready datasets and a summary.

Example::

    python -m twophoton --mode cross-sections --pulse-length 10 \\
        --tau 0 --tau 1.4 --tau 5 --out out/long

Settings may also come from a ``key = value`` file given with ``--config``;
command-line flags override file values.  Recognised keys: mode,
pulse_length, tau (comma separated), grid (min:max:points), sweep
(min:max:steps), out, tolerance, output_stride.

Exit status: 0 on success, 1 on numerical failure (non-convergence or a
violated invariant), 2 on usage errors.  The worker count for sweeps is
capped by the ``TWOPHOTON_WORKERS`` environment variable.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from .observables import (
    BoundaryError,
    CrossSection,
    NoPeakError,
    component_ratio_profile,
    cross_section,
    field_norm,
    find_peak,
)
from .pulses import GaussianPulse, SpatialGrid, default_grid, make_gaussian
from .quadrature import ConvergenceError, QuadratureSettings
from .scattering import one_photon_output, psi_abs_at, two_photon_output

log = logging.getLogger(__name__)

MODES = ("one-photon", "two-photon", "decomposition", "cross-sections", "sweep")
WORKERS_ENV = "TWOPHOTON_WORKERS"
MAX_WRITTEN_POINTS = 401
SWEEP_MAX_POINTS = 1201

ONE_PHOTON_NORM_TOL = 1e-6
TWO_PHOTON_NORM_TOL = 1e-4
DIAGONAL_TOL = 1e-10

EXIT_OK, EXIT_NUMERICAL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


class InvariantError(RuntimeError):
    pass


@dataclass
class ScenarioConfig:
    mode: str
    pulse_length: float = 10.0
    grid: Optional[SpatialGrid] = None
    tau_list: List[float] = field(default_factory=list)
    sweep_range: Optional[Tuple[float, float, int]] = None
    output_dir: Path = Path("out")
    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings)
    output_stride: Optional[int] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise UsageError(f"mode must be one of {', '.join(MODES)}")
        if not (math.isfinite(self.pulse_length) and self.pulse_length > 0):
            raise UsageError("pulse length must be positive")
        if any(not t >= 0 for t in self.tau_list):
            raise UsageError("tau values must be non-negative")
        if self.mode == "sweep":
            if self.sweep_range is None:
                raise UsageError("sweep mode needs --sweep min:max:steps")
            lo, hi, steps = self.sweep_range
            if not (0 < lo < hi) or steps < 2:
                raise UsageError("sweep range must satisfy 0 < min < max and steps >= 2")
        if self.output_stride is not None and self.output_stride < 1:
            raise UsageError("output_stride must be >= 1")
        if not self.tau_list:
            self.tau_list = default_taus(self.pulse_length)
        self.output_dir = Path(self.output_dir)


def default_taus(T: float) -> List[float]:
    return [0.0, 0.3, 1.0] if T < 3 else [0.0, 1.4, 5.0]


# -- acceptance bands ---------------------------------------------------------

# keyed by pulse length; (summary key, low, high)
BANDS = {
    10.0: [
        ("one_photon.delay", 1.8, 2.2),
        ("one_photon.peak_ratio", -1.1, -0.85),
        ("absorption.peak_ratio", 1.85, 2.1),
        ("absorption.shift", 0.85, 1.15),
        ("xsec.tau=0.total_ratio", -3.3, -2.7),
        ("xsec.tau=0.total_delay", 0.5, 0.85),
        ("xsec.tau=1.4.total_max_fraction", 0.0, 0.1),
        ("xsec.tau=5.total_ratio", 0.85, 1.15),
        ("xsec.tau=5.total_delay", 1.7, 2.3),
        ("xsec.tau=0.psi2_ratio", -4.4, -3.6),
        ("xsec.tau=1.4.psi2_ratio", -4.4, -3.6),
        ("xsec.tau=5.psi2_ratio", -4.4, -3.6),
        ("xsec.tau=0.psi3_ratio", -0.05, 0.05),
        ("xsec.tau=1.4.psi3_ratio", 2.6, 3.4),
        ("xsec.tau=5.psi3_ratio", 3.5, 4.4),
    ],
    1.0: [
        ("absorption.peak_ratio", 1.15, 1.45),
        ("absorption.shift", 0.45, 0.75),
        ("one_photon.has_positive_front", 1, 1),
        ("one_photon.has_negative_tail", 1, 1),
        ("two_photon.max_total", -math.inf, 0.0),
        ("xsec.tau=0.total_delay", 0.3, 0.5),
        ("xsec.tau=0.psi2_ratio", -2.9, -2.1),
        ("xsec.tau=0.total_ratio", -1.9, -1.2),
        ("xsec.tau=1.psi2_ratio", -3.5, -2.5),
        ("xsec.tau=1.psi3_ratio", 1.1, 1.9),
        ("xsec.tau=1.total_ratio", -0.8, -0.3),
    ],
}


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _tau_key(tau: float) -> str:
    return f"{tau:g}"


# -- computations ---------------------------------------------------------------

def one_photon_summary(pulse: GaussianPulse, grid: SpatialGrid) -> Tuple[object, dict]:
    dec = one_photon_output(pulse, grid)
    x = grid.points

    def section(a):
        return CrossSection(0.0, x, a)

    ref = section(dec.prop.amplitudes)
    out_pk = find_peak(section(dec.total.amplitudes), ref)
    abs_pk = find_peak(section(dec.abs.amplitudes), ref)
    in_pk = find_peak(ref)
    total = dec.total.amplitudes
    summary = {
        "one_photon.norm_in": field_norm(dec.prop),
        "one_photon.norm_out": field_norm(dec.total),
        "one_photon.delay": out_pk.delay - in_pk.delay,
        "one_photon.peak_value": out_pk.peak_value,
        "one_photon.peak_ratio": out_pk.ratio_to_reference,
        "absorption.peak_ratio": abs(abs_pk.ratio_to_reference),
        "absorption.shift": abs_pk.delay - in_pk.delay,
        "one_photon.has_positive_front": bool(np.any(total[x > pulse.center] > 0)),
        "one_photon.has_negative_tail": bool(np.any(total[x < pulse.center] < 0)),
    }
    return dec, summary


def two_photon_summary(pulse: GaussianPulse, grid: SpatialGrid, taus) -> Tuple[object, dict]:
    dec = two_photon_output(pulse, grid)
    total = dec.total.amplitudes
    summary = {
        "two_photon.norm": field_norm(dec.total),
        "two_photon.symmetry_residual": dec.total.symmetry_residual(),
        "two_photon.max_abs_psi3_diagonal": float(np.max(np.abs(dec.psi3.diagonal()))),
        "two_photon.max_total": float(total.max()),
        "two_photon.min_total": float(total.min()),
        "two_photon.positive_fraction": float(np.mean(total > 0)),
    }
    for tau in taus:
        k = f"xsec.tau={_tau_key(tau)}"
        prof = component_ratio_profile(dec, tau)
        ref_section = cross_section(dec.psi1, tau)
        tot_section = cross_section(dec.total, tau)
        summary[f"{k}.input_peak"] = prof.reference.peak_value
        summary[f"{k}.psi2_ratio"] = prof.ratios["psi2"]
        summary[f"{k}.psi3_ratio"] = prof.ratios["psi3"]
        summary[f"{k}.total_ratio"] = prof.ratios["total"]
        summary[f"{k}.total_max_fraction"] = float(
            np.max(np.abs(tot_section.amplitudes)) / np.max(np.abs(ref_section.amplitudes))
        )
        pk = prof.peaks["total"]
        summary[f"{k}.total_delay"] = "undefined" if pk is None else pk.delay - prof.reference.delay
    return dec, summary


def validate_one_photon(summary: dict):
    if abs(summary["one_photon.norm_out"] - 1.0) > ONE_PHOTON_NORM_TOL:
        raise InvariantError(f"one-photon norm {summary['one_photon.norm_out']!r} is not 1")


def validate_two_photon(summary: dict, check_norm: bool = True):
    if check_norm and abs(summary["two_photon.norm"] - 1.0) > TWO_PHOTON_NORM_TOL:
        raise InvariantError(f"two-photon norm {summary['two_photon.norm']!r} is not 1")
    if summary["two_photon.symmetry_residual"] != 0.0:
        raise InvariantError("two-photon output is not symmetric")
    if summary["two_photon.max_abs_psi3_diagonal"] > DIAGONAL_TOL:
        raise InvariantError("two-photon absorption does not vanish on the diagonal")


def quadrature_crosscheck(pulse: GaussianPulse, grid: SpatialGrid, settings: QuadratureSettings) -> float:
    """Largest difference between closed-form and quadrature absorption amplitudes."""
    T = pulse.pulse_length
    lo = max(grid.x_min, pulse.center - 5 * T)
    hi = min(grid.x_max, pulse.center + 3 * T)
    xs = np.linspace(lo, hi, 41)
    closed = psi_abs_at(pulse, xs)
    quad = psi_abs_at(pulse, xs, settings, method="quadrature")
    return float(np.max(np.abs(closed - quad)))


def evaluate_bands(T: float, summary: dict) -> List[Tuple[str, bool, object, float, float]]:
    results = []
    for key, bands in BANDS.items():
        if abs(T - key) > 1e-12:
            continue
        for name, lo, hi in bands:
            if name not in summary:
                continue
            v = summary[name]
            ok = isinstance(v, (int, float, np.floating, bool, np.bool_)) and lo <= float(v) <= hi
            results.append((name, bool(ok), v, lo, hi))
    return results


# -- output -----------------------------------------------------------------------

def _stride(config: ScenarioConfig, n: int) -> int:
    if config.output_stride is not None:
        return config.output_stride
    return max(1, math.ceil((n - 1) / (MAX_WRITTEN_POINTS - 1)))


def write_csv(path: Path, header: List[str], columns) -> None:
    data = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    np.savetxt(path, data, delimiter=",", header=",".join(header), comments="", fmt="%.16e")


def write_one_photon(path: Path, dec) -> None:
    write_csv(
        path,
        ["x", "psi_in", "psi_prop", "psi_abs", "psi_out"],
        [dec.total.grid.points, dec.prop.amplitudes, dec.prop.amplitudes,
         dec.abs.amplitudes, dec.total.amplitudes],
    )


def write_two_photon(path: Path, dec, stride: int) -> None:
    x = dec.grid.points
    idx = np.arange(0, len(x), stride)
    X1, X2 = np.meshgrid(x[idx], x[idx], indexing="ij")
    sub = np.ix_(idx, idx)
    cols = [X1.ravel(), X2.ravel()]
    for name in ("psi1", "psi2", "psi3", "nonlinear_delta", "total"):
        cols.append(getattr(dec, name).amplitudes[sub].ravel())
    write_csv(path, ["x1", "x2", "psi1", "psi2", "psi3", "nonlinear_delta", "total"], cols)


def write_cross_sections(out: Path, dec, taus) -> List[str]:
    names = []
    for tau in taus:
        for comp in ("psi1", "psi2", "psi3", "nonlinear_delta", "total"):
            sec = cross_section(getattr(dec, comp), tau)
            name = f"cross_section_tau{_tau_key(tau)}_{comp}.csv"
            write_csv(out / name, ["mean_position", "amplitude"], [sec.mean_positions, sec.amplitudes])
            names.append(name)
    return names


def write_summary(path: Path, entries: List[Tuple[str, object]]) -> None:
    with open(path, "w") as fh:
        for k, v in entries:
            fh.write(f"{k} = {_fmt(v)}\n")


# -- scenario drivers -----------------------------------------------------------------

def run_scenario(config: ScenarioConfig) -> int:
    if config.mode == "sweep":
        return run_sweep(config)
    out = config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    T = config.pulse_length
    pulse = make_gaussian(T)
    grid = config.grid or default_grid(T)
    entries: List[Tuple[str, object]] = [
        ("mode", config.mode),
        ("pulse_length", T),
        ("grid", f"{grid.x_min!r}:{grid.x_max!r}:{grid.point_count}"),
        ("relative_tolerance", config.quadrature.relative_tolerance),
    ]
    summary = {}
    status = EXIT_OK
    files: List[str] = []
    try:
        summary["quadrature.max_abs_difference"] = quadrature_crosscheck(pulse, grid, config.quadrature)
        one, s1 = one_photon_summary(pulse, grid)
        summary.update(s1)
        validate_one_photon(s1)
        two = None
        if config.mode != "one-photon":
            two, s2 = two_photon_summary(pulse, grid, config.tau_list)
            summary.update(s2)
            validate_two_photon(s2)

        write_one_photon(out / "one_photon.csv", one)
        files.append("one_photon.csv")
        if config.mode in ("two-photon", "decomposition"):
            stride = _stride(config, grid.point_count)
            summary["two_photon.output_stride"] = stride
            write_two_photon(out / "two_photon.csv", two, stride)
            files.append("two_photon.csv")
        if config.mode in ("cross-sections", "decomposition"):
            files += write_cross_sections(out, two, config.tau_list)
    except ConvergenceError as exc:
        status = EXIT_NUMERICAL
        entries.append(("error", f"quadrature did not converge: {exc} (best estimate {exc.estimate!r})"))
    except (InvariantError, BoundaryError, NoPeakError) as exc:
        status = EXIT_NUMERICAL
        entries.append(("error", str(exc)))

    entries.append(("status", "ok" if status == EXIT_OK else "failed; outputs incomplete"))
    entries += sorted(summary.items())
    for name, ok, v, lo, hi in evaluate_bands(T, summary):
        entries.append((f"check.{name}", f"{'PASS' if ok else 'FAIL'} {_fmt(v)} [{lo!r}, {hi!r}]"))
    entries.append(("files", ",".join(files)))
    write_summary(out / "summary.txt", entries)
    return status


def sweep_values(lo: float, hi: float, steps: int) -> np.ndarray:
    """Log-spaced pulse lengths, endpoints included exactly."""
    vals = np.geomspace(lo, hi, steps)
    vals[0], vals[-1] = lo, hi
    return vals


def sweep_point(T: float) -> dict:
    """Nonlinearity measures for one pulse length on a size-capped default grid."""
    lo, hi = -(3.0 * T + 20.0), 3.0 * T
    spacing = max(min(T / 40.0, 0.05), (hi - lo) / (SWEEP_MAX_POINTS - 1))
    grid = SpatialGrid.from_spacing(lo, hi, spacing)
    pulse = make_gaussian(T)
    dec = two_photon_output(pulse, grid)
    s = {
        "two_photon.norm": field_norm(dec.total),
        "two_photon.symmetry_residual": dec.total.symmetry_residual(),
        "two_photon.max_abs_psi3_diagonal": float(np.max(np.abs(dec.psi3.diagonal()))),
    }
    validate_two_photon(s, check_norm=False)
    absabs = dec.psi3 - dec.nonlinear_delta
    psi3_norm = math.sqrt(field_norm(dec.psi3))
    absabs_norm = math.sqrt(field_norm(absabs))
    prof = component_ratio_profile(dec, 0.0)
    total = dec.total.amplitudes
    return {
        "pulse_length": T,
        "nonlinearity_metric": 1.0 - psi3_norm / absabs_norm,
        "nonlinear_weight": math.sqrt(field_norm(dec.nonlinear_delta)),
        "total_to_psi1_ratio_tau0": prof.ratios["total"],
        "total_norm": s["two_photon.norm"],
        "max_total": float(total.max()),
        "min_total": float(total.min()),
        "positive_fraction": float(np.mean(total > 0)),
        "grid_points": grid.point_count,
    }


SWEEP_COLUMNS = [
    "pulse_length", "nonlinearity_metric", "nonlinear_weight", "total_to_psi1_ratio_tau0",
    "total_norm", "max_total", "min_total", "positive_fraction", "grid_points",
]


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be an integer >= 1") from None
    if n < 1:
        raise UsageError(f"{WORKERS_ENV} must be an integer >= 1")
    return n


def run_sweep(config: ScenarioConfig) -> int:
    out = config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    lo, hi, steps = config.sweep_range
    Ts = sweep_values(lo, hi, steps)
    entries: List[Tuple[str, object]] = [("mode", "sweep"), ("sweep", f"{lo!r}:{hi!r}:{steps}")]
    status = EXIT_OK
    rows = []
    try:
        with ThreadPoolExecutor(max_workers=worker_count()) as pool:
            rows = list(pool.map(sweep_point, Ts))
    except (InvariantError, BoundaryError, NoPeakError) as exc:
        status = EXIT_NUMERICAL
        entries.append(("error", str(exc)))
    entries.append(("status", "ok" if status == EXIT_OK else "failed; outputs incomplete"))
    if rows:
        write_csv(out / "sweep.csv", SWEEP_COLUMNS, [[r[c] for r in rows] for c in SWEEP_COLUMNS])
        metric = [r["nonlinearity_metric"] for r in rows]
        weight = [r["nonlinear_weight"] for r in rows]
        entries += [
            ("sweep.metric_argmax_pulse_length", rows[int(np.argmax(metric))]["pulse_length"]),
            ("sweep.nonlinear_weight_argmax_pulse_length", rows[int(np.argmax(weight))]["pulse_length"]),
            ("files", "sweep.csv"),
        ]
    write_summary(out / "summary.txt", entries)
    return status


# -- argument handling ------------------------------------------------------------

def parse_config_file(path) -> dict:
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def _parse_grid(text: str) -> SpatialGrid:
    try:
        lo, hi, n = text.split(":")
        return SpatialGrid(float(lo), float(hi), int(n))
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}: {exc}") from None


def _parse_sweep(text: str) -> Tuple[float, float, int]:
    try:
        lo, hi, n = text.split(":")
        return float(lo), float(hi), int(n)
    except ValueError:
        raise UsageError(f"bad sweep range {text!r}, expected min:max:steps") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="twophoton",
        description="Scatter Gaussian one- and two-photon pulses off a one-dimensional atom.",
    )
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--pulse-length", type=float, help="pulse length T in units of 1/Gamma")
    p.add_argument("--tau", type=float, action="append", help="photon separation for cross-sections (repeatable)")
    p.add_argument("--grid", help="min:max:points (odd point count)")
    p.add_argument("--sweep", help="min:max:steps for the pulse-length sweep")
    p.add_argument("--out", help="output directory")
    p.add_argument("--tolerance", type=float, help="relative tolerance for quadrature")
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args: argparse.Namespace) -> ScenarioConfig:
    values = parse_config_file(args.config) if args.config else {}
    known = {"mode", "pulse_length", "tau", "grid", "sweep", "out", "tolerance", "output_stride"}
    unknown = set(values) - known
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    if args.mode:
        values["mode"] = args.mode
    if args.pulse_length is not None:
        values["pulse_length"] = args.pulse_length
    if args.tau:
        values["tau"] = args.tau
    for key in ("grid", "sweep", "out", "tolerance"):
        if getattr(args, key) is not None:
            values[key] = getattr(args, key)
    if "mode" not in values:
        raise UsageError("--mode is required")
    try:
        taus = values.get("tau", [])
        if isinstance(taus, str):
            taus = [float(t) for t in taus.split(",") if t.strip()]
        settings = QuadratureSettings()
        if "tolerance" in values:
            settings = QuadratureSettings(relative_tolerance=float(values["tolerance"]))
        return ScenarioConfig(
            mode=values["mode"],
            pulse_length=float(values.get("pulse_length", 10.0)),
            grid=_parse_grid(values["grid"]) if "grid" in values else None,
            tau_list=[float(t) for t in taus],
            sweep_range=_parse_sweep(values["sweep"]) if "sweep" in values else None,
            output_dir=Path(values.get("out", "out")),
            quadrature=settings,
            output_stride=int(values["output_stride"]) if "output_stride" in values else None,
        )
    except UsageError:
        raise
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _attach_range_values(argv: List[str]) -> List[str]:
    # "--grid -20:6:401" would otherwise be read as an unknown option
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in ("--grid", "--sweep") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_attach_range_values(argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = config_from_args(args)
        if config.mode == "sweep":
            worker_count()
    except (UsageError, OSError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    log.info("running %s for T=%s into %s", config.mode, config.pulse_length, config.output_dir)
    status = run_scenario(config)
    if status != EXIT_OK:
        log.error("scenario failed; see %s", config.output_dir / "summary.txt")
    return status


if __name__ == "__main__":
    sys.exit(main())
