from invoke import Context, task
from termcolor import cprint

from fock_phase import runner
from fock_phase.cli.tasks_utils import STATE_HELP, _get_config, phase_errors
from fock_phase.config import PhaseConfig, RunConfig, sweep_states

GRID_HELP = {"grid_size": "Number of theta points (>= 64, raised to 2*dim when needed)."}
PHI_HELP = {"phi_points": "Number of phi points on (margin, pi - margin)."}


def _run_command(c: Context, command, output=None, output_format="csv", **params):
    settings = _get_config(c)
    grid_size = params.pop("grid_size", None) or settings.grid_size
    phi_points = params.pop("phi_points", None) or settings.phi_points
    with phase_errors():
        states, sweep = sweep_states(**params)
        config = RunConfig(
            command=command,
            states=states,
            sweep=sweep,
            grid_size=int(grid_size),
            phi_points=int(phi_points),
            output=output,
            output_format=output_format,
        )
        result = runner.run(config, settings)
    report(result)
    return result


def report(result: runner.RunResult):
    for note in result.notes:
        cprint(note, color="yellow")
    cprint(
        f"Wrote {len(result.dataset.rows)} rows to {result.path}",
        color="green",
    )


@task(help=STATE_HELP | GRID_HELP)
def phase_dist(
    c: Context,
    kind="add",
    count="0",
    n="0",
    alpha="0",
    theta2="0",
    alpha_scan=None,
    grid_size=None,
    output=None,
    output_format="csv",
):
    """Phase distribution P_theta on a theta grid over [-pi, pi)."""
    _run_command(
        c,
        PhaseConfig.PHASE_DIST,
        output,
        output_format,
        kind=kind,
        count=count,
        n=n,
        alpha=alpha,
        theta2=theta2,
        alpha_scan=alpha_scan,
        grid_size=grid_size,
    )


@task(help=STATE_HELP | GRID_HELP)
def angular_q(
    c: Context,
    kind="add",
    count="0",
    n="0",
    alpha="0",
    theta2="0",
    alpha_scan=None,
    grid_size=None,
    output=None,
    output_format="csv",
):
    """Angular Q distribution as (theta, radius) pairs for polar plots."""
    _run_command(
        c,
        PhaseConfig.ANGULAR_Q,
        output,
        output_format,
        kind=kind,
        count=count,
        n=n,
        alpha=alpha,
        theta2=theta2,
        alpha_scan=alpha_scan,
        grid_size=grid_size,
    )


@task(help=STATE_HELP)
def fluctuation(
    c: Context,
    kind="add",
    count="0",
    n="0",
    alpha="0",
    theta2="0",
    alpha_scan=None,
    output=None,
    output_format="csv",
):
    """Barnett-Pegg moments and the U, S, Q phase fluctuation parameters."""
    _run_command(
        c,
        PhaseConfig.FLUCTUATION,
        output,
        output_format,
        kind=kind,
        count=count,
        n=n,
        alpha=alpha,
        theta2=theta2,
        alpha_scan=alpha_scan,
    )


@task(help=STATE_HELP | GRID_HELP)
def dispersion(
    c: Context,
    kind="add",
    count="0",
    n="0",
    alpha="0",
    theta2="0",
    alpha_scan=None,
    grid_size=None,
    output=None,
    output_format="csv",
):
    """Phase dispersion D from amplitudes and by quadrature of P_theta."""
    _run_command(
        c,
        PhaseConfig.DISPERSION,
        output,
        output_format,
        kind=kind,
        count=count,
        n=n,
        alpha=alpha,
        theta2=theta2,
        alpha_scan=alpha_scan,
        grid_size=grid_size,
    )


@task(help=STATE_HELP | PHI_HELP)
def estimate(
    c: Context,
    kind="add",
    count="0",
    n="0",
    alpha="0",
    theta2="0",
    alpha_scan=None,
    phi_points=None,
    output=None,
    output_format="csv",
):
    """Mach-Zehnder phase uncertainty delta_phi with a vacuum second port."""
    _run_command(
        c,
        PhaseConfig.ESTIMATE,
        output,
        output_format,
        kind=kind,
        count=count,
        n=n,
        alpha=alpha,
        theta2=theta2,
        alpha_scan=alpha_scan,
        phi_points=phi_points,
    )
