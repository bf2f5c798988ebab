import dataclasses
from pathlib import Path

import yaml
from dotenv import dotenv_values

from fock_phase import fock
from fock_phase.errors import ConfigError, InvalidSpecError
from fock_phase.states import OperationKind, StateSpec


class PhaseConfig:
    PHASE_DIST = "phase-dist"
    ANGULAR_Q = "angular-q"
    FLUCTUATION = "fluctuation"
    DISPERSION = "dispersion"
    ESTIMATE = "estimate"
    VERIFY = "verify"

    ALL_COMMANDS = [
        PHASE_DIST,
        ANGULAR_Q,
        FLUCTUATION,
        DISPERSION,
        ESTIMATE,
        VERIFY,
    ]

    FORMATS = ["csv", "json"]

    def __init__(self, env: str | None = None):
        config = {}
        if env:
            env_path = Path(f".env.{env}")
            if not env_path.exists():
                raise ConfigError(f"Environment file not found: {env_path}")
            config = dotenv_values(env_path)
        self.environment = env or "default"

        self.truncation_tolerance = float(
            config.get("TRUNCATION_TOLERANCE", fock.DEFAULT_TOLERANCE)
        )
        self.dim_cap = int(config.get("DIM_CAP", fock.DIM_CAP))
        self.zero_norm_threshold = float(
            config.get("ZERO_NORM_THRESHOLD", fock.ZERO_NORM_THRESHOLD)
        )
        self.grid_size = int(config.get("GRID_SIZE", 1024))
        self.phi_points = int(config.get("PHI_POINTS", 256))
        self.phi_margin = float(config.get("PHI_MARGIN", 0.05))
        self.radial_points = int(config.get("RADIAL_POINTS", 32))
        self.output_dir = Path(config.get("OUTPUT_DIR", "datasets"))
        self.significant_digits = int(config.get("SIGNIFICANT_DIGITS", 12))

        if not 0 < self.truncation_tolerance <= 1e-6:
            raise ConfigError(
                f"TRUNCATION_TOLERANCE must lie in (0, 1e-6]: {self.truncation_tolerance}"
            )

    def output_path(self, command: str, fmt: str = "csv") -> Path:
        if command not in self.ALL_COMMANDS:
            raise ConfigError(f"Invalid command: {command}")
        return self.output_dir / f"{command}.{fmt}"

    def tolerances(self) -> dict:
        """Tolerance block written into every dataset header."""
        return {
            "truncation_tolerance": self.truncation_tolerance,
            "dim_cap": self.dim_cap,
            "zero_norm_threshold": self.zero_norm_threshold,
        }

    def get_suite(self, name: str):
        found = [suite for suite in self.get_suites() if suite.name == name]
        if not found:
            raise ConfigError(f"Suite not found: {name}")
        return found[0]

    def get_suites(self):
        path = Path(__file__).parent / "suites.yml"
        with path.open() as f:
            data = yaml.safe_load(f)
        return [Suite.from_dict(raw) for raw in data["suites"]]


@dataclasses.dataclass(frozen=True)
class Suite:
    name: str
    seed: int
    specs: int
    max_count: int = 3
    max_fock: int = 3
    max_alpha: float = 2.0
    min_alpha: float = 0.1
    phases: tuple[float, ...] = (0.0,)
    thetas: tuple[float, ...] = (0.0,)
    phis: tuple[float, ...] = (1.0,)

    @classmethod
    def from_dict(cls, data):
        return cls(
            name=data["name"],
            seed=int(data["seed"]),
            specs=int(data["specs"]),
            max_count=int(data.get("max_count", 3)),
            max_fock=int(data.get("max_fock", 3)),
            max_alpha=float(data.get("max_alpha", 2.0)),
            min_alpha=float(data.get("min_alpha", 0.1)),
            phases=tuple(float(v) for v in data.get("phases", [0.0])),
            thetas=tuple(float(v) for v in data.get("thetas", [0.0])),
            phis=tuple(float(v) for v in data.get("phis", [1.0])),
        )


@dataclasses.dataclass
class RunConfig:
    command: str
    states: list[tuple[float, StateSpec]] = dataclasses.field(default_factory=list)
    sweep: str | None = None
    grid_size: int = 1024
    phi_points: int = 256
    output: Path | None = None
    output_format: str = "csv"
    suite: str = "full"

    def __post_init__(self):
        if self.output is not None:
            self.output = Path(self.output)
        if self.command not in PhaseConfig.ALL_COMMANDS:
            raise InvalidSpecError(f"Unknown command: {self.command}")
        if self.output_format not in PhaseConfig.FORMATS:
            raise InvalidSpecError(f"Unknown output format: {self.output_format}")
        if self.command != PhaseConfig.VERIFY and not self.states:
            raise InvalidSpecError(f"Command {self.command} needs at least one state")

    @classmethod
    def from_file(cls, path: Path, settings: PhaseConfig):
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"Run config not found: {path}")
        raw = {k.upper(): v for k, v in dotenv_values(path).items() if v is not None}
        if "COMMAND" not in raw:
            raise InvalidSpecError(f"{path}: COMMAND is required")
        command = raw["COMMAND"]
        states, sweep = [], None
        if command != PhaseConfig.VERIFY:
            states, sweep = sweep_states(
                kind=raw.get("KIND", OperationKind.ADD.value),
                count=raw.get("COUNT", "0"),
                n=raw.get("N", "0"),
                alpha=raw.get("ALPHA", "0"),
                theta2=raw.get("THETA2", "0"),
                alpha_scan=raw.get("ALPHA_SCAN"),
            )
        output = raw.get("OUTPUT")
        return cls(
            command=command,
            states=states,
            sweep=sweep,
            grid_size=int(raw.get("GRID_SIZE", settings.grid_size)),
            phi_points=int(raw.get("PHI_POINTS", settings.phi_points)),
            output=Path(output) if output else None,
            output_format=raw.get("FORMAT", "csv"),
            suite=raw.get("SUITE", "full"),
        )


def parse_values(text, integer=False) -> list:
    """Parse a scalar, a comma list, an integer range ``lo..hi`` or a scan ``lo:hi:step``.

    Scans include ``hi`` when it falls on the step lattice.
    """
    text = str(text).strip()
    cast = int if integer else float
    try:
        if ".." in text:
            lo, hi = text.split("..")
            values = list(range(int(lo), int(hi) + 1))
        elif ":" in text:
            lo, hi, step = (float(part) for part in text.split(":"))
            if step <= 0 or hi < lo:
                raise InvalidSpecError(f"Invalid scan '{text}'")
            count = int(round((hi - lo) / step))
            values = [lo + i * step for i in range(count + 1)]
            values = [round(v, 12) for v in values if v <= hi + 1e-12]
        else:
            values = [part.strip() for part in text.split(",")]
        return [cast(v) for v in values]
    except ValueError as e:
        if isinstance(e, InvalidSpecError):
            raise
        raise InvalidSpecError(f"Cannot parse '{text}': {e}") from e


def sweep_states(kind, count, n, alpha, theta2, alpha_scan=None):
    """Expand flag values into ``[(param, StateSpec)]`` with at most one swept parameter."""
    if alpha_scan:
        alpha = alpha_scan
    values = {
        "count": parse_values(count, integer=True),
        "n": parse_values(n, integer=True),
        "alpha": parse_values(alpha),
        "theta2": parse_values(theta2),
    }
    swept = [name for name, vals in values.items() if len(vals) > 1]
    if len(swept) > 1:
        raise InvalidSpecError(
            f"Only one parameter may be swept per run, got: {', '.join(swept)}"
        )
    sweep = swept[0] if swept else None
    try:
        kind = OperationKind(kind)
    except ValueError:
        raise InvalidSpecError(f"Unknown kind '{kind}' (add | subtract)")

    states = []
    for value in values[sweep] if sweep else [None]:
        params = {name: vals[0] for name, vals in values.items()}
        if sweep:
            params[sweep] = value
        spec = StateSpec(
            kind=kind,
            count=params["count"],
            fock_n=params["n"],
            alpha_mag=params["alpha"],
            alpha_phase=params["theta2"],
        )
        spec.validate()
        states.append((float(value) if sweep else 0.0, spec))
    return states, sweep
