"""Command-line surface: single evaluations, sweeps, identity batches, CSV/SVG.

Exit codes: 0 ok, 2 config error, 3 degenerate parameters, 4 numerical
instability.  Every CSV starts with a ``# schema=1`` comment line and a
fixed header; identical config + seed gives byte-identical output.
``EXOCALC_THREADS`` caps sweep parallelism (row order is fixed by sweep
index, not completion time).
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import cartan as cartan_mod
from . import metric as metric_mod
from .core import ThetaField
from .dispersion import (
    BoxRegion,
    ComplexMomentum,
    DegenerateParameterError,
    constrained_spectrum,
    delta_sigma,
    spectrum_reference_approx,
)
from .forms import (
    dilated_connection,
    d_squared_obstruction,
    exotic_d,
    field_strength,
    homotopy_H,
    pullback_at,
    random_form,
    random_linear_theta,
    wedge,
)
from .pde import InstabilityError, SimGrid, WavePacket, fit_decay_rate, simulate_time_domain

SCHEMA_LINE = "# schema=1"


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------- utils


def fmt(x) -> str:
    """Canonical float formatting shared by implementation and fixture paths."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return format(float(x), ".12e")


def fmt6(x) -> str:
    return format(float(x), ".6e")


def write_csv(path: Path, header: str, rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(SCHEMA_LINE + "\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")
    return path


def write_svg_line(path: Path, xs, ys, title: str, x_label: str, y_label: str) -> Path:
    """Minimal static line chart; no plotting dependency, deterministic bytes."""
    width, height, pad = 640, 420, 50
    xs = [float(v) for v in xs]
    ys = [float(v) for v in ys]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0

    def sx(v):
        return pad + (v - x_lo) / x_span * (width - 2 * pad)

    def sy(v):
        return height - pad - (v - y_lo) / y_span * (height - 2 * pad)

    points = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width/2:.0f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{pad}" y1="{height-pad}" x2="{width-pad}" y2="{height-pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height-pad}" stroke="black"/>',
        f'<text x="{width/2:.0f}" y="{height-12}" text-anchor="middle" font-size="12">{x_label}</text>',
        f'<text x="14" y="{height/2:.0f}" font-size="12" transform="rotate(-90 14 {height/2:.0f})" text-anchor="middle">{y_label}</text>',
        f'<text x="{pad}" y="{height-pad+16}" font-size="10">{x_lo:.4g}</text>',
        f'<text x="{width-pad}" y="{height-pad+16}" font-size="10" text-anchor="end">{x_hi:.4g}</text>',
        f'<text x="{pad-4}" y="{height-pad}" font-size="10" text-anchor="end">{y_lo:.4g}</text>',
        f'<text x="{pad-4}" y="{pad+4}" font-size="10" text-anchor="end">{y_hi:.4g}</text>',
        f'<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{points}"/>',
        "</svg>",
    ]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return path


def thread_count() -> int:
    raw = os.environ.get("EXOCALC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _parallel_map(fn, items):
    n = thread_count()
    items = list(items)
    if n <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def sweep_values(spec) -> list:
    """A sweep axis is a list of numbers or {start, stop, count} (inclusive)."""
    if isinstance(spec, (int, float)):
        return [float(spec)]
    if isinstance(spec, list):
        if not spec:
            raise ConfigError("empty sweep range")
        return [float(v) for v in spec]
    if isinstance(spec, dict):
        try:
            start, stop, count = spec["start"], spec["stop"], int(spec["count"])
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"bad sweep spec: {spec!r}") from exc
        if count < 1:
            raise ConfigError("sweep count must be >= 1")
        if count == 1:
            return [float(start)]
        step = (stop - start) / (count - 1)
        return [float(start + i * step) for i in range(count)]
    raise ConfigError(f"bad sweep spec: {spec!r}")


# ------------------------------------------------------------------- config


DEFAULTS = {
    "metric": {
        "theta_grad": [0.0, 0.01, 0.0, 0.0],
        "points": [[0.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0]],
        "probe": [1.0, 1.0, 1.0, 1.0],
    },
    "lightcone": {
        "theta_dot": 0.0,
        "theta_prime": 0.01,
        "c": 1.0,
        "points": [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]],
    },
    "spectrum": {
        "theta_dot": {"start": 0.01, "stop": 0.05, "count": 5},
        "grad_norm": {"start": 0.0, "stop": 0.004, "count": 5},
        "m": [1.0],
        "box": {"t0": 0.0, "t1": 1.0, "spatial": [[0.0, 1.0], [0.0, 1.0], [0.0, 1.0]]},
    },
    "simulate": {
        "grid": {
            "x_min": 0.0,
            "x_max": 200.0,
            "n_x": 512,
            "dt": 0.3,
            "n_t": 1024,
            "bc": "periodic",
            "snapshot_stride": 32,
        },
        "m": 1.0,
        "theta_dot": 0.02,
        "theta_prime": 0.0,
        "include_x_term": False,
        "packet": {"center": 100.0, "width": 12.0, "wavenumber": 0.5, "amplitude": 1.0},
        "fit_window": None,
    },
    "forms-check": {"seeds": 20, "dimension": 3, "degree": 2},
    "cartan": {"samples": 1000},
    "generate-fixtures": {},
}


def load_config(command: str, path: str | None, overrides: list) -> dict:
    cfg = copy.deepcopy(DEFAULTS[command])
    if path is not None:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config document must be a JSON object")
        for key, value in data.items():
            if key not in cfg:
                raise ConfigError(f"unknown config key {key!r} for {command!r}")
            cfg[key] = value
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, _, raw = item.partition("=")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = cfg
        parts = key.split(".")
        for part in parts[:-1]:
            if not isinstance(node.get(part), dict):
                raise ConfigError(f"unknown config key {key!r} for {command!r}")
            node = node[part]
        if parts[-1] not in node:
            raise ConfigError(f"unknown config key {key!r} for {command!r}")
        node[parts[-1]] = value
    return cfg


# ------------------------------------------------------------------ commands


METRIC_HEADER = (
    "idx,t,x,y,z,eta_00,eta_01,eta_02,eta_03,eta_11,eta_12,eta_13,eta_22,eta_23,"
    "eta_33,witness_norm,validity_ratio"
)


def metric_rows(cfg: dict):
    theta = ThetaField.linear(tuple(float(g) for g in cfg["theta_grad"]))
    probe = tuple(float(v) for v in cfg["probe"])
    rows = []
    for idx, point in enumerate(cfg["points"]):
        x = tuple(float(c) for c in point)
        g = metric_mod.metric_full(x, theta)
        witness = metric_mod.degeneracy_witness(probe, x, theta)
        w_norm = math.sqrt(sum(float(w) ** 2 for w in witness))
        ratio = metric_mod.validity_ratio(x, theta)
        row = [str(idx)] + [fmt(c) for c in x]
        row += [fmt(g[a, b]) for a in range(4) for b in range(a, 4)]
        row += [fmt(w_norm), fmt(ratio)]
        rows.append(row)
    return METRIC_HEADER, rows


LIGHTCONE_HEADER = "t,x,theta_dot,theta_prime,c,u_plus,u_minus,residual_plus,residual_minus"


def lightcone_rows(cfg: dict):
    td, tp, c = float(cfg["theta_dot"]), float(cfg["theta_prime"]), float(cfg["c"])
    rows = []
    for t, x in cfg["points"]:
        t, x = float(t), float(x)
        u_plus, u_minus = metric_mod.lightcone_velocity(t, x, td, tp, c)
        res_p = metric_mod.interval_2d(1.0, u_plus, t, x, td, tp, c)
        res_m = metric_mod.interval_2d(1.0, u_minus, t, x, td, tp, c)
        rows.append(
            [fmt(t), fmt(x), fmt(td), fmt(tp), fmt(c), fmt(u_plus), fmt(u_minus), fmt(res_p), fmt(res_m)]
        )
    return LIGHTCONE_HEADER, rows


SPECTRUM_HEADER = (
    "theta_dot,grad_norm,m,reE_plus,imE_plus,reE_minus,imE_minus,"
    "reE_paper,imE_paper,delta_diag"
)


def _box_from_config(spec: dict) -> BoxRegion:
    try:
        return BoxRegion(
            float(spec["t0"]), float(spec["t1"]), tuple(tuple(map(float, ab)) for ab in spec["spatial"])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad box spec: {spec!r}") from exc


def spectrum_rows(cfg: dict, spectrum_fn=None, delta_fn=None):
    """Rows of the aligned-spectrum sweep.

    ``spectrum_fn`` and ``delta_fn`` default to the implementation; the
    fixture generator passes the oracle routes instead.
    """
    spectrum_fn = spectrum_fn or constrained_spectrum
    delta_fn = delta_fn or delta_sigma
    box = _box_from_config(cfg["box"])
    grid = [
        (td, gn, m)
        for td in sweep_values(cfg["theta_dot"])
        for gn in sweep_values(cfg["grad_norm"])
        for m in sweep_values(cfg["m"])
    ]

    def one(item):
        td, gn, m = item
        v = (td, gn, 0.0, 0.0)
        e_plus, e_minus = spectrum_fn(v, m)
        ref = spectrum_reference_approx(td, gn, m)
        p = ComplexMomentum.constrained(v, e_plus)
        v_norm = math.hypot(td, gn)
        diag = v_norm * abs(delta_fn(p, box))
        return [
            fmt(td),
            fmt(gn),
            fmt(m),
            fmt(e_plus.real),
            fmt(e_plus.imag),
            fmt(e_minus.real),
            fmt(e_minus.imag),
            fmt(ref[0].real),
            fmt(ref[0].imag),
            fmt6(diag),
        ]

    return SPECTRUM_HEADER, _parallel_map(one, grid)


FORMS_HEADER = "identity,seed,dimension,degree,residual_grade,pass"

FORMS_IDENTITIES = ("leibniz", "d_squared", "d_cubed", "homotopy", "field_strength")

# residual-grade contract per identity: exact zero, or the stated minimal grade
_FORMS_PASS_GRADE = {
    "leibniz": math.inf,
    "d_squared": 2,
    "d_cubed": 2,
    "homotopy": 1,
    "field_strength": 2,
}


def forms_identity_rows(seed: int, n_max: int, deg_max: int, d_fn=None):
    """Residual grades of the five identity checks for one seeded draw.

    ``d_fn`` selects the deformed-derivative route (defaults to the sparse
    engine; the fixture generator passes the dense oracle route).
    """
    from .poly import random_multipoly

    d_fn = d_fn or exotic_d
    rng = random.Random(seed)
    dim = rng.randint(2, max(2, n_max))
    deg = rng.randint(0, min(deg_max, dim - 1))
    theta = random_linear_theta(rng, dim)

    w = random_form(rng, dim, deg, max_poly_degree=deg_max)
    other = random_form(rng, dim, rng.randint(0, min(deg_max, dim - 1)), max_poly_degree=deg_max)

    leib = d_fn(wedge(w, other), theta) - wedge(d_fn(w, theta), other)
    signed = wedge(w, d_fn(other, theta))
    leib = leib - (-signed if w.degree % 2 else signed)

    dd = d_fn(d_fn(w, theta), theta) - d_squared_obstruction(w, theta)
    ddd = d_fn(d_fn(d_fn(w, theta), theta), theta)

    ext = random_form(rng, dim + 1, rng.randint(1, dim), max_poly_degree=deg_max, lambda_active=True)
    hom = (
        homotopy_H(d_fn(ext, theta))
        + d_fn(homotopy_H(ext), theta)
        - (pullback_at(ext, 1) - pullback_at(ext, 0))
    )

    a_comps = [random_multipoly(rng, dim, min(deg_max, 2)) for _ in range(dim)]
    fs = field_strength(a_comps, theta) - d_fn(dilated_connection(a_comps, theta), theta)

    residuals = {
        "leibniz": leib,
        "d_squared": dd,
        "d_cubed": ddd,
        "homotopy": hom,
        "field_strength": fs,
    }
    rows = []
    for name in FORMS_IDENTITIES:
        grade = residuals[name].eps_grade()
        ok = grade >= _FORMS_PASS_GRADE[name]
        rows.append([name, str(seed), str(dim), str(deg), fmt_grade(grade), "1" if ok else "0"])
    return rows


def fmt_grade(grade) -> str:
    return "inf" if math.isinf(grade) else str(int(grade))


def forms_check_rows(cfg: dict, seed: int, d_fn=None):
    n_max = int(cfg["dimension"])
    deg_max = int(cfg["degree"])
    count = int(cfg["seeds"])
    if not 2 <= n_max <= 4:
        raise ConfigError("dimension must be between 2 and 4")
    if not 0 <= deg_max <= 3:
        raise ConfigError("degree must be between 0 and 3")
    chunks = _parallel_map(
        lambda s: forms_identity_rows(s, n_max, deg_max, d_fn),
        range(seed, seed + count),
    )
    return FORMS_HEADER, [row for chunk in chunks for row in chunk]


CARTAN_HEADER = "idx,roundtrip_err,nullity_residual,det_residual"


def cartan_rows(cfg: dict, seed: int):
    n = int(cfg["samples"])
    rng = random.Random(seed)
    rows = []
    for idx in range(n):
        s = (
            complex(rng.gauss(0, 1), rng.gauss(0, 1)),
            complex(rng.gauss(0, 1), rng.gauss(0, 1)),
        )
        v = cartan_mod.spinor_to_point(s)
        scale = max(1.0, v[0] * v[0])
        nullity = abs(v[0] ** 2 - v[1] ** 2 - v[2] ** 2 - v[3] ** 2) / scale
        if v[0] > 1e-12:
            back = cartan_mod.spinor_to_point(cartan_mod.point_to_spinor(v))
            roundtrip = max(abs(a - b) for a, b in zip(v, back)) / max(1.0, abs(v[0]))
        else:
            roundtrip = 0.0
        lam = np.array(
            [
                [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(2)]
                for _ in range(2)
            ]
        )
        det = np.linalg.det(lam)
        if abs(det) < 1e-8:
            lam = lam + np.eye(2)
            det = np.linalg.det(lam)
        lam = lam / np.sqrt(abs(det))
        vm = cartan_mod.outer_matrix(s)
        out = cartan_mod.sl2c_act(lam, vm)
        det_res = abs(np.linalg.det(out) - np.linalg.det(vm))
        rows.append([str(idx), fmt(roundtrip), fmt(nullity), fmt(det_res)])
    return CARTAN_HEADER, rows


def simulate_outputs(cfg: dict, out_dir: Path, svg: bool):
    gcfg = cfg["grid"]
    grid = SimGrid(
        x_min=float(gcfg["x_min"]),
        x_max=float(gcfg["x_max"]),
        n_x=int(gcfg["n_x"]),
        dt=float(gcfg["dt"]),
        n_t=int(gcfg["n_t"]),
        bc=str(gcfg["bc"]),
        snapshot_stride=int(gcfg["snapshot_stride"]),
    )
    pk = cfg["packet"]
    packet = WavePacket(
        center=float(pk["center"]),
        width=float(pk["width"]),
        wavenumber=float(pk["wavenumber"]),
        amplitude=float(pk["amplitude"]),
    )
    try:
        simulate_time_domain(
            grid,
            float(cfg["m"]),
            float(cfg["theta_dot"]),
            float(cfg["theta_prime"]),
            include_x_term=bool(cfg["include_x_term"]),
            initial=packet,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    window = cfg["fit_window"]
    if window is None:
        window = (float(grid.times[1]), float(grid.times[-1]))
    rate = fit_decay_rate(grid, (float(window[0]), float(window[1])))

    xs = grid.xs()
    snap_rows = []
    for t, snap in zip(grid.times, grid.snapshots):
        for x, val in zip(xs, snap):
            snap_rows.append([fmt(t), fmt(x), fmt(val.real), fmt(val.imag)])
    snap_path = write_csv(out_dir / "simulate_snapshots.csv", "t,x,re_phi,im_phi", snap_rows)

    log_amp = np.log(np.sqrt(np.sum(np.abs(grid.snapshots) ** 2, axis=1) * grid.dx))
    summary_rows = [
        [fmt(t), fmt(a), fmt(rate)] for t, a in zip(grid.times, log_amp)
    ]
    summary_path = write_csv(
        out_dir / "simulate_summary.csv", "t,log_l2_amplitude,fitted_rate", summary_rows
    )
    written = [snap_path, summary_path]
    if svg:
        written.append(
            write_svg_line(
                out_dir / "simulate.svg",
                grid.times,
                log_amp,
                "log amplitude vs time",
                "t",
                "log ||phi||",
            )
        )
    return written


# ------------------------------------------------------------------- fixtures


class FixtureMismatchError(RuntimeError):
    pass


def generate_fixtures(out_dir: Path, seed: int = 42) -> list:
    """Write golden CSVs from the oracle routes, verified against the implementation.

    The oracle and implementation rows are formatted through the same
    writers; any string-level disagreement aborts with a per-row diff.
    """
    from .oracles import delta_quadrature, dense_exotic_d, spectrum_companion

    spec_cfg = copy.deepcopy(DEFAULTS["spectrum"])
    header, oracle_rows = spectrum_rows(
        spec_cfg, spectrum_fn=spectrum_companion, delta_fn=delta_quadrature
    )
    _, impl_rows = spectrum_rows(spec_cfg)
    _diff_or_raise("spectrum", oracle_rows, impl_rows)
    paths = [write_csv(out_dir / "spectrum_golden.csv", header, oracle_rows)]

    forms_cfg = copy.deepcopy(DEFAULTS["forms-check"])
    header, oracle_rows = forms_check_rows(forms_cfg, seed, d_fn=dense_exotic_d)
    _, impl_rows = forms_check_rows(forms_cfg, seed)
    _diff_or_raise("forms-check", oracle_rows, impl_rows)
    paths.append(write_csv(out_dir / "forms_check_golden.csv", header, oracle_rows))
    return paths


def _diff_or_raise(name: str, oracle_rows, impl_rows):
    if oracle_rows == impl_rows:
        return
    lines = [f"oracle/implementation mismatch in {name}:"]
    for i, (a, b) in enumerate(zip(oracle_rows, impl_rows)):
        if a != b:
            lines.append(f"  row {i}: oracle={','.join(a)} impl={','.join(b)}")
    if len(oracle_rows) != len(impl_rows):
        lines.append(f"  row count: oracle={len(oracle_rows)} impl={len(impl_rows)}")
    raise FixtureMismatchError("\n".join(lines))


# ---------------------------------------------------------------------- main


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exocalc",
        description="Deformed flat-spacetime calculus: metric, light cone, spectrum, "
        "simulation, exterior-calculus identity checks, spinor-point maps.",
    )
    names = ["metric", "lightcone", "spectrum", "simulate", "forms-check", "cartan"]
    sub = parser.add_subparsers(
        dest="command", required=True, metavar="{" + ",".join(names) + "}"
    )
    for name in names + ["generate-fixtures"]:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="JSON config document")
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a config scalar (repeatable, dotted keys allowed)",
        )
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=42, help="random seed (u64)")
        p.add_argument("--svg", action="store_true", help="also write SVG plots")
    return parser


def run(args) -> list:
    out_dir = Path(args.out)
    cfg = load_config(args.command, args.config, args.set)
    if args.command == "metric":
        header, rows = metric_rows(cfg)
        return [write_csv(out_dir / "metric.csv", header, rows)]
    if args.command == "lightcone":
        header, rows = lightcone_rows(cfg)
        return [write_csv(out_dir / "lightcone.csv", header, rows)]
    if args.command == "spectrum":
        header, rows = spectrum_rows(cfg)
        written = [write_csv(out_dir / "spectrum.csv", header, rows)]
        if args.svg and rows:
            written.append(
                write_svg_line(
                    out_dir / "spectrum.svg",
                    [float(r[0]) for r in rows],
                    [float(r[4]) for r in rows],
                    "Im E+ vs theta_dot",
                    "theta_dot",
                    "Im E+",
                )
            )
        return written
    if args.command == "simulate":
        return simulate_outputs(cfg, out_dir, args.svg)
    if args.command == "forms-check":
        header, rows = forms_check_rows(cfg, args.seed)
        return [write_csv(out_dir / "forms_check.csv", header, rows)]
    if args.command == "cartan":
        header, rows = cartan_rows(cfg, args.seed)
        return [write_csv(out_dir / "cartan.csv", header, rows)]
    if args.command == "generate-fixtures":
        return generate_fixtures(out_dir, args.seed)
    raise ConfigError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        written = run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DegenerateParameterError as exc:
        print(f"degenerate parameters: {exc}", file=sys.stderr)
        return 3
    except InstabilityError as exc:
        print(f"instability: {exc}", file=sys.stderr)
        return 4
    except FixtureMismatchError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
