import os
from pathlib import Path
from typing import List, Optional

from invoke import Argument, Collection, Context, Exit, Program, task
from termcolor import cprint

from fock_phase import runner
from fock_phase.cli import tasks_phase, tasks_verify
from fock_phase.cli.tasks_utils import _get_config, phase_errors
from fock_phase.config import RunConfig


@task
def init(c: Context, env):
    """Initialize an environment."""

    env_file = f".env.{env}"
    path = Path(env_file)
    if path.exists():
        raise Exit(f"Environment {env} already exists.")

    c.run(f"cp .env.example {env_file}")
    cprint(f"Environment {env} initialized.", color="green")
    print(f"  - Update the settings in '{path}'.")


@task(help={"config": "Flat KEY=value run file (COMMAND, KIND, COUNT, N, ALPHA, ...)."})
def run(c: Context, config):
    """Run a command described by a config file."""
    settings = _get_config(c)
    with phase_errors():
        run_config = RunConfig.from_file(Path(config), settings)
        result = runner.run(run_config, settings)
    tasks_phase.report(result)
    if result.failures:
        raise Exit(f"{result.failures} verification checks failed", 1)


@task
def ruff(c: Context, no_fix=False, unsafe_fixes=False):
    """Run ruff checks and formatting. Use --unsafe-fixes to apply unsafe fixes."""
    fix_flag = "" if no_fix else "--fix"
    unsafe_fixes_flag = "--unsafe-fixes" if unsafe_fixes else ""
    c.run(f"ruff check {fix_flag} {unsafe_fixes_flag}", echo=True, pty=True)
    c.run("ruff format", echo=True, pty=True)


@task(help={"keyword": "Only run tests matching this pytest -k expression."})
def test(c: Context, keyword=None):
    """Run the unit tests."""
    keyword_flag = f"-k '{keyword}'" if keyword else ""
    c.run(f"pytest tests {keyword_flag}", echo=True, pty=True)


namespace = Collection(
    init,
    run,
    ruff,
    test,
    tasks_phase.phase_dist,
    tasks_phase.angular_q,
    tasks_phase.fluctuation,
    tasks_phase.dispersion,
    tasks_phase.estimate,
    tasks_verify.verify,
)


class FockPhaseProgram(Program):
    def core_args(self):
        core_args = super().core_args()
        extra_args = [
            Argument(
                name="env",
                help="The settings environment to use (reads .env.<env>)",
            ),
        ]
        return core_args + extra_args

    def parse_core(self, argv: Optional[List[str]]) -> None:
        super().parse_core(argv)
        env = self.args.env.value
        if not env:
            env = os.getenv("FOCKPHASE_ENV")
        self.config["environment"] = env


program = FockPhaseProgram(name="fock-phase", namespace=namespace)
