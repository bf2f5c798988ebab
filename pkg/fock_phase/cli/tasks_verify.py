from invoke import Context, Exit, task
from termcolor import cprint

from fock_phase import runner
from fock_phase.cli.tasks_utils import TableWriter, _get_config, phase_errors
from fock_phase.config import PhaseConfig, RunConfig
from fock_phase.verify import run_suite


@task(
    help={
        "suite": "Suite name from suites.yml ('quick' or 'full').",
        "output": "Write the per-check results to this file.",
        "output_format": "'csv' (default) or 'json'.",
        "show_all": "Print every check, not only failures.",
    }
)
def verify(c: Context, suite="full", output=None, output_format="csv", show_all=False):
    """Cross-check closed forms against the matrix oracle on a randomized suite."""
    settings = _get_config(c)
    with phase_errors():
        if output:
            config = RunConfig(
                command=PhaseConfig.VERIFY,
                output=output,
                output_format=output_format,
                suite=suite,
            )
            result = runner.run(config, settings)
            cprint(f"Wrote {len(result.dataset.rows)} checks to {result.path}", color="green")
            failures = result.failures
        else:
            report = run_suite(suite, settings)
            shown = report.results if show_all else report.failures
            if shown:
                rows = [check.table_row() for check in shown]
                TableWriter(["Check", "Spec", "Error", "Status"], rows).write_table()
            failures = len(report.failures)
            cprint(
                f"{len(report.specs)} specs, {len(report.results)} checks",
                color="blue",
            )

    if failures:
        cprint(f"{failures} checks failed", color="red")
        raise Exit(f"Verification suite '{suite}' failed", 1)
    cprint("All checks passed", color="green")
