"""Command-line front end.

    phaseflow packet|flow|figures|montecarlo|wigner-grid [--config FILE] [options]

Configuration is a flat JSON object; command-line flags override it. The
packet is given either by physical keys (x0, p0, alpha0_re, alpha0_im, q)
or by dimensionless keys (xi0, eta0, eps0, delta, optional L), never both.
``hbar`` and ``mass`` default to 1 and may accompany either block.

Exit codes: 0 success, 1 acceptance check failed, 2 configuration or I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import ensemble, flow, geometry, packet as pc, wigner
from .emit import write_json, write_table
from .errors import ConfigurationError, UndefinedArrival

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG = 0, 1, 2
ZSCORE_LIMIT = 6.0

PHYSICAL_KEYS = ("x0", "p0", "alpha0_re", "alpha0_im", "q")
DIMENSIONLESS_KEYS = ("xi0", "eta0", "eps0", "delta")

# Figure reproduction needs concrete numbers that the figures themselves do
# not state; these are display choices and are recorded in every output.
FIGURE_DEFAULTS = {"xi0": 0.0, "eta0": 0.1, "eps0": -2.0, "delta": 2.0}


@dataclass
class RunConfig:
    hbar: float = 1.0
    mass: float = 1.0
    x0: float | None = None
    p0: float | None = None
    alpha0_re: float | None = None
    alpha0_im: float | None = None
    q: float | None = None
    xi0: float | None = None
    eta0: float | None = None
    eps0: float | None = None
    delta: float | None = None
    L: float | None = None
    tau_start: float | None = None
    tau_stop: float | None = None
    tau_count: int | None = None
    t_start: float | None = None
    t_stop: float | None = None
    t_count: int | None = None
    n: int = 1_000_000
    seed: int = 0
    format: str = "csv"
    strict_scenario: bool = False
    mc_tau_count: int = 20
    fig_tau: float = 0.0
    fig_dtau: float = 1.0
    contour_c: float = 1.0
    contour_points: int = 128
    region_grid: int = 200
    theta_count: int = 2001
    grid_tau: float = 0.0
    grid_n: int = 101
    grid_sigma: float = 4.0

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(f"unknown configuration keys: {', '.join(unknown)}")
        return cls(**data)

    def to_mapping(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    def physical_block(self) -> bool:
        return any(getattr(self, k) is not None for k in PHYSICAL_KEYS)

    def dimensionless_block(self) -> bool:
        return any(getattr(self, k) is not None for k in DIMENSIONLESS_KEYS + ("L",))


def _complete(cfg: RunConfig, keys) -> None:
    missing = [k for k in keys if getattr(cfg, k) is None]
    if missing:
        raise ConfigurationError(f"incomplete packet block, missing: {', '.join(missing)}")


def resolve_packet(cfg: RunConfig, allow_default: bool = False):
    """Return ``(params, dimless)`` and fill in the block that was not given."""
    physical, dimensionless = cfg.physical_block(), cfg.dimensionless_block()
    if physical and dimensionless:
        raise ConfigurationError("give either physical or dimensionless packet parameters, not both")
    if not physical and not dimensionless:
        if not allow_default:
            raise ConfigurationError("no packet parameters given (physical or dimensionless block required)")
        for key, value in FIGURE_DEFAULTS.items():
            setattr(cfg, key, value)
        dimensionless = True
    if physical:
        _complete(cfg, PHYSICAL_KEYS)
        params = pc.PacketParams(cfg.hbar, cfg.mass, cfg.x0, cfg.p0, complex(cfg.alpha0_re, cfg.alpha0_im), cfg.q)
        return params, wigner.rescale(params)
    _complete(cfg, DIMENSIONLESS_KEYS)
    dimless = wigner.DimensionlessPacket(cfg.xi0, cfg.eta0, cfg.eps0, cfg.delta, 1.0 if cfg.L is None else cfg.L)
    return wigner.to_physical(dimless, cfg.hbar, cfg.mass), dimless


def resolve_tau_grid(cfg: RunConfig, params: pc.PacketParams) -> np.ndarray:
    dimensionless_keys = (cfg.tau_start, cfg.tau_stop, cfg.tau_count)
    physical_keys = (cfg.t_start, cfg.t_stop, cfg.t_count)
    if any(v is not None for v in dimensionless_keys) and any(v is not None for v in physical_keys):
        raise ConfigurationError("give the time grid as tau_* or t_* keys, not both")
    if any(v is not None for v in physical_keys):
        start, stop, count = (cfg.t_start or 0.0), cfg.t_stop, cfg.t_count
        unit = wigner.time_unit(params)
        start, stop = start / unit, (stop / unit if stop is not None else None)
    else:
        start, stop, count = (cfg.tau_start or 0.0), cfg.tau_stop, cfg.tau_count
    stop = 4.0 if stop is None else stop
    count = 2001 if count is None else count
    if count < 1:
        raise ConfigurationError("time grid is empty")
    if count > 1 and not stop > start:
        raise ConfigurationError(f"time grid must be increasing, got start={start} stop={stop}")
    return np.linspace(start, stop, int(count))


def _provenance(cfg: RunConfig) -> dict:
    return cfg.to_mapping()


def _packet_comment(p: wigner.DimensionlessPacket) -> str:
    return f"packet: xi0={p.xi0!r} eta0={p.eta0!r} eps0={p.eps0!r} delta={p.delta!r} L={p.L!r}"


def cmd_packet(cfg: RunConfig, out: Path) -> int:
    params, dimless = resolve_packet(cfg)
    taus = resolve_tau_grid(cfg, params)
    back = wigner.rescale(wigner.to_physical(dimless, params.hbar, params.mass))
    roundtrip = max(abs(a - b) / max(1.0, abs(a)) for a, b in
                    zip((dimless.xi0, dimless.eta0, dimless.eps0, dimless.delta, dimless.L),
                        (back.xi0, back.eta0, back.eps0, back.delta, back.L)))
    try:
        t_cl = pc.classical_arrival_time(params)
        arrival = f"{t_cl:.10g}" + (" (moving away from the detector)" if t_cl < 0 else "")
    except UndefinedArrival:
        t_cl, arrival = None, "undefined (p0 = 0)"

    rows = []
    for tau in taus:
        t = float(wigner.to_t(params, tau))
        alpha = complex(pc.evolve_alpha(params, t))
        rows.append((t, tau, pc.center(params, t), wigner.xi_tau(dimless, tau), alpha.real, alpha.imag,
                     wigner.epsilon_tau(dimless, tau), float(pc.spread(params, t))))
    config = _provenance(cfg)
    comments = [_packet_comment(dimless), f"t_cl={t_cl!r} rescale_roundtrip_error={roundtrip!r}"]
    columns = ("t", "tau", "x_t", "xi_tau", "alpha_re", "alpha_im", "eps_tau", "spread")
    path = write_table(out / "packet", config, columns, rows, cfg.format, comments)

    print(f"L = {dimless.L:.10g}   eps0 = {dimless.eps0:.10g}   xi0 = {dimless.xi0:.10g}   "
          f"eta0 = {dimless.eta0:.10g}   delta = {dimless.delta:.10g}")
    print(f"t_cl = {arrival}")
    print(f"rescale round-trip error = {roundtrip:.3g}")
    print(f"{'t':>10} {'x_t':>11}  {'alpha_t':<26} {'eps_tau':>10} {'spread':>10}")
    for row in (rows if len(rows) <= 10 else rows[:5] + rows[-5:]):
        t, _, x_t, _, are, aim, eps, sd = row
        alpha = f"{are:+.6g}{aim:+.6g}i"
        print(f"{t:10.4g} {x_t:11.5g}  {alpha:<26} {eps:10.6g} {sd:10.6g}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_flow(cfg: RunConfig, out: Path) -> int:
    params, dimless = resolve_packet(cfg)
    scenario = flow.FlowScenario(dimless, tuple(resolve_tau_grid(cfg, params)))
    if cfg.strict_scenario:
        scenario.require_separated()
    series = flow.scan_flow(scenario)
    config = _provenance(cfg)
    columns = ("tau", "pi", "shift_rate", "shear_rate", "total_rate", "negative_flag")
    comments = [_packet_comment(dimless), "negative_flag: 1 negative flow, 0 not, -1 boundary"]
    path = write_table(out / "flow", config, columns, series.rows(), cfg.format, comments)
    summary = {
        "scenario_issues": scenario.issues(),
        "negative_intervals": [
            {"start": i.start, "end": i.end, "min_total_rate": i.min_total_rate} for i in series.intervals
        ],
    }
    spath = write_json(out / "flow_summary", config, summary)
    for issue in summary["scenario_issues"]:
        print(f"note: {issue}")
    print(f"{len(series.intervals)} negative-flow interval(s)")
    for i in series.intervals:
        print(f"  tau in [{i.start:.6g}, {i.end:.6g}]  min dPi/dtau = {i.min_total_rate:.6g}")
    print(f"wrote {path} and {spath}")
    return EXIT_OK


def cmd_figures(cfg: RunConfig, out: Path) -> int:
    _, dimless = resolve_packet(cfg, allow_default=True)
    config = _provenance(cfg)
    comments = [_packet_comment(dimless)]
    tau0, dtau, C, npts = cfg.fig_tau, cfg.fig_dtau, cfg.contour_c, cfg.contour_points
    written = []

    s, pts = geometry.contour_points(dimless, tau0, C, npts)
    written.append(write_table(out / "fig1_contour", config, ("s", "xi", "eta"),
                               zip(s, pts.xi, pts.eta), cfg.format, comments + [f"tau={tau0!r} C={C!r}"]))
    axis = geometry.major_axis_segment(dimless, tau0, C)
    written.append(write_table(out / "fig1_axis", config, ("xi", "eta"), zip(axis.xi, axis.eta),
                               cfg.format, comments + [f"tau={tau0!r} C={C!r}"]))

    tau_axis = np.linspace(-dimless.eps0 - 4.0, -dimless.eps0 + 4.0, cfg.theta_count)
    theta_rows = [(t, geometry.major_axis_angle(wigner.epsilon_tau(dimless, t)))
                  for t in tau_axis if wigner.epsilon_tau(dimless, t) != 0]
    written.append(write_table(out / "fig2_theta", config, ("tau", "theta"), theta_rows, cfg.format,
                               comments + [f"theta undefined at tau=-eps0={-dimless.eps0!r}"]))

    snapshots = []
    shifted = wigner.DimensionlessPacket(dimless.xi0 + dimless.eta0 * dtau, dimless.eta0, dimless.eps0,
                                         dimless.delta, dimless.L)
    for label, pk, tau in ((0, dimless, tau0), (1, shifted, tau0), (2, dimless, tau0 + dtau)):
        s, pts = geometry.contour_points(pk, tau, C, npts)
        snapshots += [(label, si, x, e) for si, x, e in zip(s, pts.xi, pts.eta)]
    written.append(write_table(out / "fig3_snapshots", config, ("snapshot", "s", "xi", "eta"), snapshots,
                               cfg.format, comments + [f"tau={tau0!r} dtau={dtau!r} C={C!r}",
                                                       "snapshot 0: Omega_tau, 1: shifted, 2: sheared"]))

    ang = geometry.angle_geometry(dimless, tau0)
    fig4 = {
        "tau": tau0,
        "center": [wigner.xi_tau(dimless, tau0), dimless.eta0],
        "detector": [dimless.delta, 0.0],
        "theta": ang.theta,
        "theta_bar": ang.theta_bar,
        "phi": ang.phi,
        "major_axis": [list(axis.xi), list(axis.eta)],
    }
    written.append(write_json(out / "fig4_angles", config, fig4))

    theta_bar, phi, flags = geometry.region_sample(cfg.region_grid, cfg.region_grid)
    region_rows = [(tb, ph, int(flags[i, j])) for i, tb in enumerate(theta_bar) for j, ph in enumerate(phi)]
    written.append(write_table(out / "fig5_region", config, ("theta_bar", "phi", "flag"), region_rows,
                               cfg.format, comments + [f"true fraction={flags.mean()!r}"]))
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def cmd_montecarlo(cfg: RunConfig, out: Path) -> int:
    params, dimless = resolve_packet(cfg, allow_default=True)
    grid = resolve_tau_grid(cfg, params)
    taus = np.linspace(grid[0], grid[-1], cfg.mc_tau_count) if cfg.mc_tau_count > 1 else grid[:1]
    report = ensemble.quantum_classical_compare(dimless, dimless.delta, taus, cfg.n, cfg.seed)
    rows = [(r.run.tau, r.run.pi_estimate, r.run.standard_error, r.pi_quantum, r.zscore) for r in report.rows]
    config = _provenance(cfg)
    path = write_table(out / "montecarlo", config, ("tau", "pi_cl", "stderr", "pi_quantum", "zscore"),
                       rows, cfg.format, [_packet_comment(dimless)])
    passed = report.max_zscore < ZSCORE_LIMIT
    print(f"N = {cfg.n}, seed = {cfg.seed}, {len(rows)} times: max z-score = {report.max_zscore:.3f} "
          f"({'ok' if passed else 'FAILED'}, limit {ZSCORE_LIMIT:g})")
    print(f"wrote {path}")
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_wigner_grid(cfg: RunConfig, out: Path) -> int:
    _, dimless = resolve_packet(cfg)
    tau = cfg.grid_tau
    xi_axis, eta_axis = wigner.grid_axes(dimless, tau, cfg.grid_n, cfg.grid_sigma)
    rows = wigner.omega_grid(dimless, tau, xi_axis, eta_axis)
    header = f"# xi,eta,omega tau={tau!r} eps0={dimless.eps0!r} xi0={dimless.xi0!r} eta0={dimless.eta0!r}"
    comments = ["convention: omega = hbar * W (dimensionless Wigner density)"]
    path = write_table(out / "wigner_grid", _provenance(cfg), ("xi", "eta", "omega"), rows, cfg.format,
                       comments, header_line=header)
    print(f"wrote {path}")
    return EXIT_OK


COMMANDS = {
    "packet": cmd_packet,
    "flow": cmd_flow,
    "figures": cmd_figures,
    "montecarlo": cmd_montecarlo,
    "wigner-grid": cmd_wigner_grid,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phaseflow", description=__doc__.split("\n\n")[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", type=Path, help="flat JSON configuration file")
    parser.add_argument("--out", type=Path, default=Path("phaseflow_out"), help="output directory")
    parser.add_argument("--seed", type=int, help="Monte Carlo seed (unsigned 64-bit)")
    parser.add_argument("--n", type=int, help="Monte Carlo sample size")
    parser.add_argument("--format", choices=("csv", "json"), help="table output format")
    parser.add_argument("--strict-scenario", action="store_true", default=None,
                        help="reject packets closer than 3 initial spreads to the detector")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one configuration key (VALUE parsed as JSON)")
    return parser


def load_config(args) -> RunConfig:
    data = {}
    if args.config is not None:
        try:
            data = json.loads(args.config.read_text())
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {args.config}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config {args.config} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigurationError(f"config {args.config} must hold a JSON object")
    for item in args.set:
        key, sep, raw = item.partition("=")
        if not sep:
            raise ConfigurationError(f"--set expects KEY=VALUE, got {item!r}")
        try:
            data[key.strip()] = json.loads(raw)
        except json.JSONDecodeError:
            data[key.strip()] = raw
    for key in ("seed", "n", "format", "strict_scenario"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    cfg = RunConfig.from_mapping(data)
    if cfg.n < 1:
        raise ConfigurationError(f"n must be positive, got {cfg.n}")
    if not 0 <= cfg.seed < 2**64:
        raise ConfigurationError(f"seed must be an unsigned 64-bit integer, got {cfg.seed}")
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](cfg, args.out)
    except ConfigurationError as exc:
        print(f"phaseflow: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (TypeError, ValueError) as exc:
        print(f"phaseflow: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"phaseflow: I/O error on {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
