import logging

import click

from config import embedded_config, load_config, thresholds_from, validate_config
from export import (CONVERGENCE_COLUMNS, ORACLE_COLUMNS, SIMULATE_COLUMNS, TRIAL_COLUMNS,
                    write_csv, write_json)
from grid_oracle import STENCILS, oracle_scan
from metrology import (FLUX_PERIOD, angular_resolution, estimate_flux, flux_resolution,
                       monte_carlo_trials, relative_flux_error, revival_density, run_trial)
from relativistic import (RelScale, evolve_corrected, max_phase_shift, min_radius,
                          radius_satisfies_bound)
from reports import export_pdf
from revival import peak_angle
from ring import (PacketSpec, RingConfig, alpha_to_flux, evolve,
                  make_gaussian_packet, packet_width, position_density)
from utils import exit_on_error


def _configure_logging(level):
    logging.basicConfig(level=getattr(logging, str(level).upper(), logging.INFO),
                        format="%(asctime)s %(levelname)s %(message)s")


def _resolve(ctx, **sections):
    """Load, override and validate the configuration for one command"""
    overrides = {name.upper(): values for name, values in sections.items()}
    config = load_config(ctx.obj["config_path"], overrides)
    _configure_logging(ctx.obj["log_level"] or config["LOG_LEVEL"])
    resolved = validate_config(config)
    ctx.obj["timezone"] = config["TIMEZONE"]
    return resolved


def _packet_spec(resolved):
    packet = resolved["packet"]
    return PacketSpec(packet["delta_n"], packet["n0"], packet["phi0"], packet["cutoff"])


def _ring_config(resolved):
    ring = resolved["ring"]
    if ring["flux"] is not None:
        return RingConfig.from_flux(ring["mass"], ring["radius"], ring["flux"], ring["rel_enabled"])
    return RingConfig(ring["mass"], ring["radius"], ring["alpha"], ring["rel_enabled"])


def _rho(ring):
    return ring.rho if ring.rel_enabled else None


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False),
              help="TOML file, or an earlier CSV/JSON output to replay.")
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR.")
@click.pass_context
def cli(ctx, config_path, log_level):
    """Single-shot flux measurement by wavepacket revival on a ring"""
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path
    ctx.obj["log_level"] = log_level


@cli.command()
@click.option("--delta-n", type=float)
@click.option("--n0", type=int)
@click.option("--phi0", type=float)
@click.option("--alpha", type=float)
@click.option("--grid-size", type=int)
@click.option("--tau-grid", help="Comma-separated times in units of T, e.g. 0,1/4,1/3,1/2,1.")
@click.option("--out", type=click.Path(dir_okay=False), help="CSV path; stdout if omitted.")
@click.pass_context
@exit_on_error
def simulate(ctx, delta_n, n0, phi0, alpha, grid_size, tau_grid, out):
    """Density snapshots over a grid of times"""
    resolved = _resolve(ctx,
                        packet={"delta_n": delta_n, "n0": n0, "phi0": phi0},
                        ring={"alpha": alpha},
                        run={"grid_size": grid_size, "tau_grid": tau_grid})
    spec = _packet_spec(resolved)
    ring = _ring_config(resolved)
    grid_size = resolved["run"]["grid_size"]
    packet = make_gaussian_packet(spec)

    rows = []
    for tau in sorted(resolved["run"]["tau_grid"]):
        if ring.rel_enabled:
            state = evolve_corrected(packet, tau, ring.alpha, ring.rho)
        else:
            state = evolve(packet, tau, ring.alpha)
        density = position_density(state, grid_size)
        rows.extend(zip([tau] * grid_size, density.angles, density.values))
    logging.info("simulated %d snapshots", len(resolved["run"]["tau_grid"]))
    write_csv(out, embedded_config(resolved), SIMULATE_COLUMNS, rows)


@cli.command()
@click.option("--delta-n", type=float)
@click.option("--phi0", type=float)
@click.option("--alpha", type=float)
@click.option("--flux", type=float, help="Flux in webers; overrides --alpha.")
@click.option("--seed", type=int)
@click.option("--grid-size", type=int)
@click.option("--shots", type=int)
@click.option("--out", type=click.Path(dir_okay=False), help="JSON path; stdout if omitted.")
@click.pass_context
@exit_on_error
def estimate(ctx, delta_n, phi0, alpha, flux, seed, grid_size, shots, out):
    """One simulated measurement and its flux estimate"""
    resolved = _resolve(ctx,
                        packet={"delta_n": delta_n, "phi0": phi0},
                        ring={"alpha": alpha, "flux": flux},
                        run={"seed": seed, "grid_size": grid_size, "shots": shots})
    run = resolved["run"]
    ring = _ring_config(resolved)
    record = run_trial(_packet_spec(resolved), ring.alpha, run["seed"], run["grid_size"],
                       run["shots"], _rho(ring))
    result = record.as_dict()
    result["flux_wb"] = ring.flux
    result["alpha_est_flux_wb"] = alpha_to_flux(record.alpha_est)
    result["alpha_true_flux_wb"] = alpha_to_flux(record.alpha_true_mod)
    write_json(out, embedded_config(resolved), result)


@cli.command()
@click.option("--delta-n", type=float)
@click.option("--phi0", type=float)
@click.option("--alpha", type=float)
@click.option("--flux", type=float, help="Flux in webers; overrides --alpha.")
@click.option("--seed", type=int, help="Base seed of the trial seed stream.")
@click.option("--trials", type=int)
@click.option("--grid-size", type=int)
@click.option("--shots", type=int)
@click.option("--workers", type=int)
@click.option("--out", type=click.Path(dir_okay=False), help="Report JSON; stdout if omitted.")
@click.option("--trials-out", type=click.Path(dir_okay=False), help="Per-trial CSV.")
@click.option("--pdf", type=click.Path(dir_okay=False), help="PDF summary.")
@click.pass_context
@exit_on_error
def mc(ctx, delta_n, phi0, alpha, flux, seed, trials, grid_size, shots, workers, out,
       trials_out, pdf):
    """Monte Carlo error budget of the single-shot estimator"""
    resolved = _resolve(ctx,
                        packet={"delta_n": delta_n, "phi0": phi0},
                        ring={"alpha": alpha, "flux": flux},
                        run={"seed": seed, "trials": trials, "grid_size": grid_size,
                             "shots": shots, "workers": workers})
    run = resolved["run"]
    spec = _packet_spec(resolved)
    ring = _ring_config(resolved)
    report, records = monte_carlo_trials(spec, ring.alpha, run["trials"], run["seed"],
                                         run["grid_size"], run["workers"], run["shots"],
                                         _rho(ring))
    result = report.as_dict()
    quantum = alpha_to_flux(FLUX_PERIOD)
    result["flux_wb"] = ring.flux
    result["rms_flux_error_wb"] = report.rms_relative_error * quantum
    result["mean_bias_flux_wb"] = alpha_to_flux(report.mean_bias)

    header = embedded_config(resolved)
    if trials_out:
        rows = [(i, r.seed, r.sampled_angle, r.alpha_true_mod, r.alpha_est, r.circular_error)
                for i, r in enumerate(records)]
        write_csv(trials_out, header, TRIAL_COLUMNS, rows)
    write_json(out, header, result)
    if pdf:
        export_pdf(pdf, "Monte Carlo error report", header, result, ctx.obj["timezone"])


@cli.command()
@click.option("--delta-n", type=float)
@click.option("--mass", type=float, help="Particle mass in kg.")
@click.option("--radius", type=float, help="Ring radius in m.")
@click.option("--out", type=click.Path(dir_okay=False), help="JSON path; stdout if omitted.")
@click.option("--pdf", type=click.Path(dir_okay=False), help="PDF summary.")
@click.pass_context
@exit_on_error
def feasibility(ctx, delta_n, mass, radius, out, pdf):
    """Revival time, relativistic radius bound and resolution"""
    resolved = _resolve(ctx,
                        packet={"delta_n": delta_n},
                        ring={"mass": mass, "radius": radius})
    ring = _ring_config(resolved)
    delta_n = resolved["packet"]["delta_n"]
    scale = RelScale.from_radius(ring.radius, ring.mass)
    result = {
        "revival_time": ring.revival_time,
        "min_radius": min_radius(delta_n, ring.mass),
        "max_phase_shift": max_phase_shift(delta_n, scale.rho),
        "delta_phi": angular_resolution(delta_n),
        "packet_width": packet_width(delta_n),
        "relative_flux_error": relative_flux_error(delta_n),
        "flux_resolution_wb": flux_resolution(delta_n),
        "rho": scale.rho,
        "radius_satisfies_bound": bool(radius_satisfies_bound(ring.radius, delta_n, ring.mass)),
    }
    header = embedded_config(resolved)
    write_json(out, header, result)
    if pdf:
        export_pdf(pdf, "Feasibility", header, result, ctx.obj["timezone"])


@cli.command()
@click.option("--delta-n", type=float)
@click.option("--n0", type=int)
@click.option("--phi0", type=float)
@click.option("--alpha", type=float)
@click.option("--grid-size", type=int)
@click.option("--tau-grid", help="Comma-separated times in units of T.")
@click.option("--dtau", type=float)
@click.option("--stencil", type=click.Choice(STENCILS))
@click.option("--convergence", is_flag=True, help="Repeat with dtau/2 and report the error ratio.")
@click.option("--out", type=click.Path(dir_okay=False), help="CSV path; stdout if omitted.")
@click.pass_context
@exit_on_error
def oracle(ctx, delta_n, n0, phi0, alpha, grid_size, tau_grid, dtau, stencil, convergence, out):
    """Compare the grid propagator with the spectral evolution"""
    resolved = _resolve(ctx,
                        packet={"delta_n": delta_n, "n0": n0, "phi0": phi0},
                        ring={"alpha": alpha},
                        run={"oracle_grid_size": grid_size, "oracle_tau_grid": tau_grid,
                             "dtau": dtau, "stencil": stencil})
    run = resolved["run"]
    ring = _ring_config(resolved)
    packet = make_gaussian_packet(_packet_spec(resolved))
    args = (run["oracle_tau_grid"], ring.alpha, run["oracle_grid_size"])

    rows = oracle_scan(packet, *args, run["dtau"], run["stencil"])
    columns = ORACLE_COLUMNS
    if convergence:
        halved = oracle_scan(packet, *args, run["dtau"] / 2, run["stencil"])
        rows = [(tau, full, half, full / half if half > 0 else float("inf"))
                for (tau, full), (_, half) in zip(rows, halved)]
        columns = CONVERGENCE_COLUMNS
    write_csv(out, embedded_config(resolved), columns, rows)


@cli.command()
@click.option("--delta-n", type=float)
@click.option("--phi0", type=float)
@click.option("--alpha", type=float)
@click.option("--grid-size", type=int)
@click.pass_context
@exit_on_error
def peak(ctx, delta_n, phi0, alpha, grid_size):
    """Noise-free revival peak and the flux it implies"""
    resolved = _resolve(ctx,
                        packet={"delta_n": delta_n, "phi0": phi0},
                        ring={"alpha": alpha},
                        run={"grid_size": grid_size})
    spec = _packet_spec(resolved)
    ring = _ring_config(resolved)
    density = revival_density(spec, ring.alpha, resolved["run"]["grid_size"], _rho(ring))
    angle = peak_angle(density, thresholds_from(resolved))
    alpha_mod = estimate_flux(angle, spec.phi0)
    write_json(None, embedded_config(resolved),
               {"peak_angle": angle, "alpha_mod": alpha_mod,
                "flux_mod_wb": alpha_to_flux(alpha_mod)})
