import contextlib

from invoke import Context, Exit
from termcolor import cprint

from fock_phase.config import PhaseConfig
from fock_phase.errors import PhaseError

STATE_HELP = {
    "kind": "Ladder operation: 'add' or 'subtract'.",
    "count": "Photons added/subtracted. Integer, list '0,2' or range '0..3'.",
    "n": "Fock parameter n. Integer, list or range.",
    "alpha": "Displacement magnitude |alpha|. Number, list or scan 'lo:hi:step'.",
    "theta2": "Displacement phase theta2 in radians. Number, list or scan.",
    "alpha_scan": "Shorthand for a scan over |alpha|, e.g. '0:4:0.05'.",
    "output": "Output file. Defaults to '<OUTPUT_DIR>/<command>.<format>'.",
    "output_format": "'csv' (default) or 'json'.",
}


@contextlib.contextmanager
def phase_errors():
    """Re-raise library errors as invoke exits carrying the error's exit code."""
    try:
        yield
    except PhaseError as e:
        cprint(f"{type(e).__name__}: {e}", color="red")
        raise Exit(str(e), e.exit_code)


def _get_config(c: Context) -> PhaseConfig:
    env = c.config.get("environment")
    with phase_errors():
        config = PhaseConfig(env)
    cprint(f"Using environment: {config.environment}", color="blue")
    return config


class TableWriter:
    def __init__(self, headers, rows):
        self.headers = headers
        self.col_widths = [
            max(len(str(cell)) for cell in column) for column in zip(headers, *rows)
        ]
        self.template = " | ".join(
            ["{{:<{}}}".format(width) for width in self.col_widths]
        )
        self.rows = rows

    def write_table(self):
        self.write_headers()
        self.write_separator()
        self.write_rows()
        self.write_separator()

    def write_headers(self):
        print(self.template.format(*self.headers))

    def write_rows(self):
        for row in self.rows:
            print(self.template.format(*row))

    def write_separator(self):
        print(self.template.format(*["-" * width for width in self.col_widths]))
