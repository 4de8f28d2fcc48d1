"""Flat ``key = value`` run configuration.

One document per run::

    # comments start with '#'
    command = sweep
    trials = 100
    l_min = 0.01

Keys and their types are fixed per command by ``SCHEMAS``.  Floats are
written with ``repr`` so a parse of a dump gives back the same values.
CSV outputs echo the same lines as ``#`` comments; ``RunConfig.from_header``
reads them back, so every output file records how to re-run it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ValidationError


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_floats(text: str) -> tuple:
    return tuple(float(x) for x in text.split(",") if x.strip())


def _parse_strs(text: str) -> tuple:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _parse_opt_int(text: str):
    return None if text.strip() in ("", "none", "None") else int(text)


_PARSERS = {
    int: int,
    float: float,
    bool: _parse_bool,
    str: str.strip,
    "floats": _parse_floats,
    "strs": _parse_strs,
    "opt_int": _parse_opt_int,
}


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (tuple, list)):
        return ",".join(_format(v) for v in value)
    if value is None:
        return "none"
    return str(value)


SCHEMAS: dict[str, dict[str, Any]] = {
    "sweep": {"trials": int, "n_max": int, "l_min": float, "seed": int, "incremental": bool},
    "exact": {"n": int, "l_min": float, "cutoffs": "floats"},
    "classify": {"n": int, "l_min": float, "cutoffs": "floats"},
    "lattice-threshold": {
        "geometry": "strs",
        "size": "opt_int",
        "z": int,
        "trials": int,
        "seed": int,
        "method": str,
    },
    "spacing-cdf": {"n": int, "trials": int, "seed": int, "points": int},
}


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in SCHEMAS:
            raise ValidationError(f"unknown command {self.command!r}")
        unknown = set(self.params) - set(SCHEMAS[self.command])
        if unknown:
            raise ValidationError(f"unknown keys for {self.command}: {', '.join(sorted(unknown))}")

    def lines(self) -> list:
        out = [f"command = {self.command}"]
        for key in SCHEMAS[self.command]:
            if key in self.params:
                out.append(f"{key} = {_format(self.params[key])}")
        return out

    def as_dict(self) -> dict:
        return {"command": self.command, **{k: self.params[k] for k in SCHEMAS[self.command] if k in self.params}}

    def to_text(self) -> str:
        return "\n".join(self.lines()) + "\n"

    @classmethod
    def from_text(cls, text: str, strict: bool = True) -> "RunConfig":
        """Parse a config document; ``strict=False`` skips keys the command does not know."""
        raw = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValidationError(f"line {lineno}: expected 'key = value', got {line!r}")
            raw[key.strip().replace("-", "_")] = value.strip()
        command = raw.pop("command", None)
        if command is None:
            raise ValidationError("config has no 'command' entry")
        schema = SCHEMAS.get(command)
        if schema is None:
            raise ValidationError(f"unknown command {command!r}")
        params = {}
        for key, value in raw.items():
            if key not in schema:
                if strict:
                    raise ValidationError(f"unknown key {key!r} for {command}")
                continue
            try:
                params[key] = _PARSERS[schema[key]](value)
            except ValueError as exc:
                raise ValidationError(f"bad value for {key!r}: {exc}") from None
        return cls(command, params)

    @classmethod
    def from_header(cls, text: str) -> "RunConfig":
        """Config echoed in the leading ``#`` lines of a CSV output."""
        head = []
        for line in text.splitlines():
            if not line.startswith("#"):
                break
            if "=" in line:
                head.append(line[1:])
        return cls.from_text("\n".join(head), strict=False)

    @classmethod
    def load(cls, path) -> "RunConfig":
        """Read a config file, or the header of a CSV written by the CLI."""
        text = Path(path).read_text()
        if text.startswith("# insider-perc "):
            return cls.from_header(text)
        return cls.from_text(text)
