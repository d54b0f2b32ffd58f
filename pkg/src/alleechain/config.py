"""Sectioned key = value run configurations.

The format is deliberately small: `[section]` headers, `key = value`
lines, blank lines, and `#` comments.  Parsing tracks line numbers so
that every rejection (unknown key, missing key, malformed number,
unstable time step) points at the offending line.  A config is validated
completely before any run starts; an invalid config never produces
partial output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError

COMMANDS = ("equilibria", "turing", "turing-table", "sim1d", "sim2d", "decay", "overexploit")

# schema: section -> key -> (type tag, default or REQUIRED)
REQUIRED = object()

_PARAM_KEYS = {
    "w1": ("float", REQUIRED),
    "w2": ("float", REQUIRED),
    "w3": ("float", REQUIRED),
    "w4": ("float", REQUIRED),
    "a2": ("float", REQUIRED),
    "c": ("float", REQUIRED),
    "D3": ("float", REQUIRED),
    "m": ("float", 0.0),
    "d1": ("float", 0.0),
    "d2": ("float", 0.0),
    "d3": ("float", 0.0),
}

SCHEMA = {
    "params": _PARAM_KEYS,
    "grid": {
        "N": ("int", 256),
        "nx": ("int", 200),
        "ny": ("int", 200),
        "dx": ("float", 0.1),
        "dy": ("float", 0.1),
        "dt": ("float", 0.1),
    },
    "init": {
        "eps1": ("float", 0.05),
        "eps2": ("float", 0.05),
        "eps3": ("float", 0.05),
        "wavenumber": ("int", 8),
        "kind": ("str", "random"),  # 2d: random | cos2
        "amplitude": ("float", 0.05),
        "seed": ("int", 0),
    },
    "time": {
        "t_end": ("float", 1000.0),
        "snapshot_every": ("float", 50.0),
        "atol": ("float", 1e-8),
        "rtol": ("float", 1e-6),
    },
    "experiment": {
        "m_values": ("floatlist", None),
        "m_max": ("float", 0.0035),
        "m_count": ("int", 13),
        "k2_max": ("float", 2000.0),
        "k2_count": ("int", 400),
        "full_protocol": ("bool", False),
    },
    "scenario": {
        "kind": ("str", None),
        "u0": ("float", None),
        "v0": ("float", None),
        "r0": ("float", None),
        "N": ("int", 64),
    },
}

# sections each command consults (others may be present and are validated too)
COMMAND_SECTIONS = {
    "equilibria": ("params",),
    "turing": ("params", "experiment"),
    "turing-table": ("params", "experiment"),
    "sim1d": ("params", "grid", "init", "time"),
    "sim2d": ("params", "grid", "init", "time"),
    "decay": ("params", "grid", "init", "time", "experiment"),
    "overexploit": ("params", "scenario", "time"),
}


@dataclass
class RunConfig:
    command: str
    values: dict  # (section, key) -> typed value
    lines: dict  # (section, key) -> line number where set (absent if default)
    source_text: str = ""

    def get(self, section: str, key: str):
        return self.values[(section, key)]

    def set(self, section: str, key: str, value):
        self.values[(section, key)] = value

    def effective_text(self) -> str:
        """Config echo: every effective value, grouped by section."""
        out = [f"# effective configuration (command = {self.command})"]
        sections = sorted({s for s, _ in self.values})
        for s in sections:
            out.append(f"[{s}]")
            for (sec, key), val in sorted(self.values.items()):
                if sec != s or val is None:
                    continue
                if isinstance(val, list):
                    val = ", ".join(repr(x) for x in val)
                elif isinstance(val, bool):
                    val = "true" if val else "false"
                elif isinstance(val, float):
                    val = repr(val)
                out.append(f"{key} = {val}")
            out.append("")
        return "\n".join(out)


def _convert(raw: str, kind: str, where: str):
    raw = raw.strip()
    try:
        if kind == "float":
            return float(raw)
        if kind == "int":
            v = float(raw)
            if v != int(v):
                raise ValueError("not an integer")
            return int(v)
        if kind == "bool":
            low = raw.lower()
            if low in ("true", "yes", "1", "on"):
                return True
            if low in ("false", "no", "0", "off"):
                return False
            raise ValueError("not a boolean")
        if kind == "floatlist":
            if not raw:
                raise ValueError("empty list")
            return [float(tok) for tok in raw.replace(",", " ").split()]
        return raw
    except ValueError as exc:
        raise ConfigError(f"{where}: cannot parse {raw!r} as {kind} ({exc})") from None


def parse_config(text: str, command: str | None = None) -> RunConfig:
    """Parse and fully validate a config; defaults are filled in."""
    entries: dict[tuple[str, str], tuple[str, int]] = {}
    section = None
    cmd_from_file = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            section = stripped[1:-1].strip().lower()
            if section != "run" and section not in SCHEMA:
                raise ConfigError(f"line {lineno}: unknown section [{section}]")
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        if section is None:
            raise ConfigError(f"line {lineno}: key outside of any [section]")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if section == "run":
            if key == "command":
                cmd_from_file = raw
                continue
            raise ConfigError(f"line {lineno}: unknown key {key!r} in [run] (only 'command')")
        if key not in SCHEMA[section]:
            raise ConfigError(f"line {lineno}: unknown key {key!r} in [{section}]")
        if (section, key) in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} in [{section}]")
        entries[(section, key)] = (raw, lineno)

    command = command or cmd_from_file
    if command is None:
        raise ConfigError("no command given (CLI argument or [run] command = ...)")
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")

    values: dict[tuple[str, str], object] = {}
    lines: dict[tuple[str, str], int] = {}
    for sec, keys in SCHEMA.items():
        for key, (kind, default) in keys.items():
            if (sec, key) in entries:
                raw, lineno = entries[(sec, key)]
                values[(sec, key)] = _convert(raw, kind, f"line {lineno}: [{sec}] {key}")
                lines[(sec, key)] = lineno
            else:
                values[(sec, key)] = None if default is REQUIRED else default

    cfg = RunConfig(command, values, lines, text)
    _validate(cfg)
    return cfg


def _line_of(cfg: RunConfig, sec: str, key: str) -> str:
    ln = cfg.lines.get((sec, key))
    return f"line {ln}: " if ln is not None else ""


def _validate(cfg: RunConfig) -> None:
    needed = COMMAND_SECTIONS[cfg.command]
    if "params" in needed:
        for key, (kind, default) in _PARAM_KEYS.items():
            if default is REQUIRED and cfg.values[("params", key)] is None:
                raise ConfigError(f"missing required key {key!r} in [params]")
        for key in ("w1", "w2", "w3", "w4", "a2", "c", "D3"):
            v = cfg.get("params", key)
            if not v > 0.0:
                raise ConfigError(f"{_line_of(cfg, 'params', key)}[params] {key} must be > 0, got {v}")
        for key in ("m", "d1", "d2", "d3"):
            v = cfg.get("params", key)
            if v < 0.0:
                raise ConfigError(f"{_line_of(cfg, 'params', key)}[params] {key} must be >= 0, got {v}")
        m = cfg.get("params", "m")
        if m > 1.0:
            raise ConfigError(f"{_line_of(cfg, 'params', 'm')}[params] m must lie in [0, 1], got {m}")
    diffusive = cfg.command in ("turing", "turing-table", "sim1d", "sim2d", "decay")
    if diffusive:
        for key in ("d1", "d2", "d3"):
            if not cfg.get("params", key) > 0.0:
                raise ConfigError(
                    f"{_line_of(cfg, 'params', key)}[params] {key} must be > 0 for command {cfg.command!r}"
                )
    if cfg.command in ("sim1d", "decay"):
        n = cfg.get("grid", "N")
        if n < 8:
            raise ConfigError(f"{_line_of(cfg, 'grid', 'N')}[grid] N must be >= 8, got {n}")
    if cfg.command == "sim2d":
        for key in ("nx", "ny"):
            if cfg.get("grid", key) < 4:
                raise ConfigError(f"{_line_of(cfg, 'grid', key)}[grid] {key} must be >= 4")
        for key in ("dx", "dy", "dt"):
            if not cfg.get("grid", key) > 0.0:
                raise ConfigError(f"{_line_of(cfg, 'grid', key)}[grid] {key} must be > 0")
        dmax = max(cfg.get("params", "d1"), cfg.get("params", "d2"), cfg.get("params", "d3"))
        dx, dy, dt = (cfg.get("grid", k) for k in ("dx", "dy", "dt"))
        cfl = dmax * dt * (1.0 / dx ** 2 + 1.0 / dy ** 2)
        if cfl > 0.5:
            bound = 0.5 / (dmax * (1.0 / dx ** 2 + 1.0 / dy ** 2))
            raise ConfigError(
                f"{_line_of(cfg, 'grid', 'dt')}unstable time step: max(d)*dt*(1/dx^2 + 1/dy^2) "
                f"= {cfl:.6g} > 0.5; require dt <= {bound:.6g}"
            )
    if cfg.command in ("sim1d", "sim2d", "decay", "overexploit"):
        for key in ("t_end", "snapshot_every"):
            if not cfg.get("time", key) > 0.0:
                raise ConfigError(f"{_line_of(cfg, 'time', key)}[time] {key} must be > 0")
    if cfg.command == "sim2d" and cfg.get("init", "kind") not in ("random", "cos2"):
        raise ConfigError(
            f"{_line_of(cfg, 'init', 'kind')}[init] kind must be 'random' or 'cos2', "
            f"got {cfg.get('init', 'kind')!r}"
        )
    if cfg.command == "decay":
        mv = cfg.get("experiment", "m_values")
        if mv is not None:
            if 0.0 not in mv:
                raise ConfigError(
                    f"{_line_of(cfg, 'experiment', 'm_values')}[experiment] m_values must include 0"
                )
            if any(m < 0 for m in mv):
                raise ConfigError(
                    f"{_line_of(cfg, 'experiment', 'm_values')}[experiment] m_values must be >= 0"
                )
        else:
            if not cfg.get("experiment", "m_max") > 0:
                raise ConfigError(f"{_line_of(cfg, 'experiment', 'm_max')}[experiment] m_max must be > 0")
            if cfg.get("experiment", "m_count") < 3:
                raise ConfigError(f"{_line_of(cfg, 'experiment', 'm_count')}[experiment] m_count must be >= 3")
    if cfg.command == "overexploit":
        kind = cfg.get("scenario", "kind")
        if kind not in ("total-extinction", "prey-recovery", "persistence"):
            raise ConfigError(
                f"{_line_of(cfg, 'scenario', 'kind')}[scenario] kind must be total-extinction, "
                f"prey-recovery or persistence, got {kind!r}"
            )
        for key in ("u0", "v0", "r0"):
            v = cfg.get("scenario", key)
            if v is None:
                raise ConfigError(f"missing required key {key!r} in [scenario]")
            if v < 0:
                raise ConfigError(f"{_line_of(cfg, 'scenario', key)}[scenario] {key} must be >= 0")


def params_from_config(cfg: RunConfig):
    from .model import Params

    return Params(
        w1=cfg.get("params", "w1"),
        w2=cfg.get("params", "w2"),
        w3=cfg.get("params", "w3"),
        w4=cfg.get("params", "w4"),
        a2=cfg.get("params", "a2"),
        c=cfg.get("params", "c"),
        D3=cfg.get("params", "D3"),
        m=cfg.get("params", "m"),
        d1=cfg.get("params", "d1"),
        d2=cfg.get("params", "d2"),
        d3=cfg.get("params", "d3"),
    )
