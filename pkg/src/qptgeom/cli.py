"""Command-line scans over the XY parameter plane and over temperature.

Every grid point becomes one or more rows ``coord1,coord2,quantity,value,valid,error``.
Points that hit a singularity are kept as invalid rows tagged
``critical-point``, ``degenerate`` or ``branch``; only configuration and I/O
problems make the process exit with a nonzero status.
"""

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import partial
from typing import Optional

import numpy as np

from . import geometry, spin, thermal, xy
from .errors import GeometryError

MODELS = ("xy-finite", "xy-tdl", "spin-ed", "thermal")
QUANTITIES = ("metric", "curvature", "fidelity", "thermal")
DEFAULT_QUANTITY = {"xy-finite": "metric", "xy-tdl": "metric", "spin-ed": "fidelity", "thermal": "thermal"}
HEADER = ("coord1", "coord2", "quantity", "value", "valid", "error")
METRIC_NAMES = ("g_hh", "g_hgamma", "g_gammagamma")


@dataclass(frozen=True)
class ScanConfig:
    model: str
    quantity: str
    h: tuple = (0.5, 0.5, 1)
    gamma: tuple = (0.5, 0.5, 1)
    beta: tuple = (0.1, 5.0, 50)
    sites: Optional[int] = None
    delta: Optional[float] = None
    out: Optional[str] = None
    fmt: str = "csv"
    workers: int = 1
    sector: str = "periodic"
    spectrum: Optional[str] = None
    compare_routes: bool = False

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        if self.quantity not in QUANTITIES:
            raise ValueError(f"unknown quantity {self.quantity!r}")
        for name in ("h", "gamma", "beta"):
            lo, hi, steps = getattr(self, name)
            if not (np.isfinite(lo) and np.isfinite(hi)):
                raise ValueError(f"{name} range must be finite")
            if lo > hi:
                raise ValueError(f"{name} range has min > max")
            if int(steps) != steps or steps < 1:
                raise ValueError(f"{name} steps must be a positive integer")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"unknown format {self.fmt!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class ResultRow:
    coord1: float
    coord2: Optional[float]
    quantity: str
    value: Optional[float]
    valid: bool = True
    error: str = ""


def grid(lo, hi, steps):
    """Inclusive grid with ``steps`` points."""
    return np.linspace(lo, hi, int(steps))


def _plane(config):
    return [(h, g) for h in grid(*config.h) for g in grid(*config.gamma)]


def _invalid(coords, names, exc):
    c1, c2 = coords if len(coords) == 2 else (coords[0], None)
    return [ResultRow(c1, c2, name, None, False, exc.tag) for name in names]


def _metric_rows(coords, g, names=METRIC_NAMES):
    h, gamma = coords
    return [ResultRow(h, gamma, name, float(v), True, "") for name, v in zip(names, (g[0, 0], g[0, 1], g[1, 1]))]


def _parallel_map(func, tasks, workers):
    if workers == 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunk = max(1, len(tasks) // (8 * workers))
        return list(pool.map(func, tasks, chunksize=chunk))


def _flatten(blocks):
    return [row for block in blocks for row in block]


# -- metric -----------------------------------------------------------------


def _ed_metric(L, h, gamma):
    spec = spin.SpinChainSpec(L, h, gamma)
    es = spin.full_spectrum(spin.build_xy_hamiltonian(spec))
    return geometry.qgt_perturbative(es, [spin.dH(spec, "h"), spin.dH(spec, "gamma")]).metric


def _xy_metric_point(config, coords):
    h, gamma = coords
    try:
        if config.model == "xy-tdl":
            g = xy.metric_tdl(h, gamma)
        elif config.model == "xy-finite":
            p = xy.XYPoint(h, gamma, config.sites)
            sector = xy.ground_state_sector(p.L, h, gamma) if config.sector == "ground" else config.sector
            g = xy.metric_finite_size(p, sector=sector)
        else:
            g = _ed_metric(config.sites, h, gamma)
    except GeometryError as exc:
        return _invalid(coords, METRIC_NAMES, exc)
    return _metric_rows(coords, g)


def cmd_xy_metric(config):
    """Rows ``g_hh, g_hgamma, g_gammagamma`` over the ``(h, gamma)`` grid (per site for xy-tdl)."""
    return _flatten(_parallel_map(partial(_xy_metric_point, config), _plane(config), config.workers))


# -- curvature --------------------------------------------------------------


def _curvature_point(coords):
    try:
        return [ResultRow(coords[0], coords[1], "LR", xy.scalar_curvature_closed(*coords))]
    except GeometryError as exc:
        return _invalid(coords, ("LR",), exc)


def cmd_xy_curvature(config):
    """Rows ``LR`` (size-scaled scalar curvature) over the ``(h, gamma)`` grid."""
    return _flatten(_parallel_map(_curvature_point, _plane(config), config.workers))


# -- exact-diagonalization fidelity ----------------------------------------


def _ed_fidelity_point(config, coords):
    h, gamma = coords
    L = config.sites
    delta = 0.01 if config.delta is None else config.delta
    names = ["F", *METRIC_NAMES]
    if config.compare_routes:
        names += [n + "_fd" for n in METRIC_NAMES] + ["route_gap"]
    try:
        psi = spin.ground_state(spin.build_xy_hamiltonian(spin.SpinChainSpec(L, h, gamma)))[1]
        shifted = spin.ground_state(spin.build_xy_hamiltonian(spin.SpinChainSpec(L, h + delta, gamma)))[1]
        F = geometry.fidelity(psi, shifted)
        g = _ed_metric(L, h, gamma)
        rows = [ResultRow(h, gamma, "F", F)] + _metric_rows(coords, g)
        if config.compare_routes:
            g_fd = geometry.qgt_finite_difference(spin.xy_state_map(L), (h, gamma)).metric
            rows += _metric_rows(coords, g_fd, [n + "_fd" for n in METRIC_NAMES])
            rows.append(ResultRow(h, gamma, "route_gap", geometry.relative_difference(g_fd, g)))
    except GeometryError as exc:
        return _invalid(coords, names, exc)
    return rows


def cmd_ed_fidelity(config):
    """Rows ``F = |<psi(h, gamma)|psi(h + delta, gamma)>|`` and the sum-over-states metric."""
    return _flatten(_parallel_map(partial(_ed_fidelity_point, config), _plane(config), config.workers))


# -- thermal ----------------------------------------------------------------


def load_spectrum(path):
    """Energies from a whitespace- or newline-separated text file."""
    with open(path) as fh:
        values = np.array(fh.read().split(), dtype=float)
    if values.size == 0:
        raise ValueError(f"no energies in {path}")
    return values


def _thermal_point(energies, delta, beta):
    spec = thermal.GibbsSpec(energies, beta)
    exact, approx = thermal.fidelity_expansion_check(spec, delta)
    return [
        ResultRow(beta, None, "F", exact),
        ResultRow(beta, None, "F_approx", approx),
        ResultRow(beta, None, "c_V", thermal.specific_heat(spec)),
    ]


def thermal_energies(config):
    if config.spectrum is not None:
        return load_spectrum(config.spectrum)
    if config.sites is None:
        raise ValueError("thermal scans need --spectrum or --sites")
    H = spin.build_xy_hamiltonian(spin.SpinChainSpec(config.sites, config.h[0], config.gamma[0]))
    return np.linalg.eigvalsh(H)


def cmd_thermal(config):
    """Rows ``F``, ``F_approx`` and ``c_V`` over the inverse-temperature grid."""
    energies = thermal_energies(config)
    delta = 1e-3 if config.delta is None else config.delta
    func = partial(_thermal_point, energies, delta)
    return _flatten(_parallel_map(func, list(grid(*config.beta)), config.workers))


COMMANDS = {
    "metric": cmd_xy_metric,
    "curvature": cmd_xy_curvature,
    "fidelity": cmd_ed_fidelity,
    "thermal": cmd_thermal,
}


def run(config):
    if config.quantity == "fidelity" and config.model != "spin-ed":
        raise ValueError("quantity 'fidelity' needs --model spin-ed")
    if config.quantity == "curvature" and config.model not in ("xy-tdl", "xy-finite"):
        raise ValueError("quantity 'curvature' needs an xy model")
    if config.quantity == "thermal" and config.model not in ("thermal", "spin-ed"):
        raise ValueError("quantity 'thermal' needs --model thermal or spin-ed")
    if config.model in ("xy-finite", "spin-ed") and config.quantity != "thermal" and config.sites is None:
        raise ValueError(f"model {config.model} needs --sites")
    if config.model == "xy-finite" and config.quantity == "metric":
        xy.XYPoint(0.0, 1.0, config.sites)
    if config.model == "spin-ed" and config.sites is not None:
        spin.SpinChainSpec(config.sites)
    return COMMANDS[config.quantity](config)


def _fmt(x):
    return "" if x is None else format(x, ".17g")


def format_rows(rows, fmt="csv"):
    if fmt == "json":
        return json.dumps([asdict(r) for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for r in rows:
        writer.writerow(
            [_fmt(r.coord1), _fmt(r.coord2), r.quantity, _fmt(r.value), "true" if r.valid else "false", r.error]
        )
    return buf.getvalue()


def write_rows(rows, path=None, fmt="csv"):
    text = format_rows(rows, fmt)
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def build_parser():
    p = argparse.ArgumentParser(prog="qptgeom", description=__doc__.splitlines()[0])
    p.add_argument("--model", choices=MODELS, required=True)
    p.add_argument("--quantity", choices=QUANTITIES)
    for name, lo, hi, steps in (("h", 0.5, 0.5, 1), ("gamma", 0.5, 0.5, 1), ("beta", 0.1, 5.0, 50)):
        p.add_argument(f"--{name}-min", type=float, default=lo)
        p.add_argument(f"--{name}-max", type=float, default=hi)
        p.add_argument(f"--{name}-steps", type=int, default=steps)
    p.add_argument("--sites", type=int, help="chain length L")
    p.add_argument("--delta", type=float, help="fidelity step (dh for spin-ed, dbeta for thermal)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--sector", choices=("periodic", "antiperiodic", "ground"), default="periodic",
                   help="momentum set for xy-finite sums")
    p.add_argument("--spectrum", help="text file of energy levels for thermal scans")
    p.add_argument("--compare-routes", action="store_true",
                   help="also emit the finite-difference metric for spin-ed fidelity scans")
    return p


def config_from_args(ns):
    return ScanConfig(
        model=ns.model,
        quantity=ns.quantity or DEFAULT_QUANTITY[ns.model],
        h=(ns.h_min, ns.h_max, ns.h_steps),
        gamma=(ns.gamma_min, ns.gamma_max, ns.gamma_steps),
        beta=(ns.beta_min, ns.beta_max, ns.beta_steps),
        sites=ns.sites,
        delta=ns.delta,
        out=ns.out,
        fmt=ns.fmt,
        workers=ns.workers,
        sector=ns.sector,
        spectrum=ns.spectrum,
        compare_routes=ns.compare_routes,
    )


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        config = config_from_args(ns)
        rows = run(config)
    except ValueError as exc:
        parser.error(str(exc))
    except OSError as exc:
        print(f"qptgeom: {exc}", file=sys.stderr)
        return 1
    try:
        write_rows(rows, config.out, config.fmt)
    except BrokenPipeError:
        # the reader went away (e.g. `| head`); stop quietly like other CLI tools
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except OSError as exc:
        print(f"qptgeom: cannot write output: {exc}", file=sys.stderr)
        return 1
    return 0
