"""JSON configuration files for the command-line interface.

A config holds named junction blocks, an optional ring block and an
optional task block with per-command defaults.  Angles are plain numbers
(radians) or strings "pi:<x>" meaning x * pi, so exact multiples of pi
survive the round trip through text.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .junction import JunctionParams, Orientation
from .ring import ANTISYMMETRIC, SYMMETRIC, General, RingConfig


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


_JUNCTION_ANGLES = ("alpha", "beta", "gamma", "delta", "a", "b")
_JUNCTION_FIELDS = frozenset(("theta", "L0") + _JUNCTION_ANGLES)
_RING_FIELDS = frozenset(("left", "right", "mode", "xi1", "xi2"))


def parse_angle(value: Any, where: str) -> float:
    """Angle in radians from a number or a 'pi:<x>' string."""
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected an angle, got a boolean")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str) and value.startswith("pi:"):
        try:
            return float(value[3:]) * math.pi
        except ValueError:
            raise ConfigError(f"{where}: malformed pi-multiple {value!r}") from None
    raise ConfigError(f"{where}: expected a number or 'pi:<x>', got {value!r}")


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _junction(block: Any, where: str) -> JunctionParams:
    if not isinstance(block, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = set(block) - _JUNCTION_FIELDS
    if unknown:
        raise ConfigError(f"{where}.{sorted(unknown)[0]}: unknown field")
    theta = block.get("theta", [0.0, 0.0, 0.0])
    if not isinstance(theta, list) or len(theta) != 3:
        raise ConfigError(f"{where}.theta: expected a list of three angles")
    kwargs = {"theta": tuple(parse_angle(t, f"{where}.theta[{i}]") for i, t in enumerate(theta))}
    for name in _JUNCTION_ANGLES:
        if name in block:
            kwargs[name] = parse_angle(block[name], f"{where}.{name}")
    if "L0" in block:
        kwargs["L0"] = _number(block["L0"], f"{where}.L0")
    try:
        return JunctionParams(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


@dataclass(frozen=True)
class ParsedConfig:
    junctions: dict[str, JunctionParams]
    ring: RingConfig | None
    task: dict[str, Any] = field(default_factory=dict)

    def sole_junction_name(self) -> str:
        if len(self.junctions) == 1:
            return next(iter(self.junctions))
        raise ConfigError(
            "task.junction: required when the config defines several junctions"
        )


def load_config(path: str | Path) -> ParsedConfig:
    """Load and validate a config file."""
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be an object")
    unknown = set(doc) - {"junctions", "ring", "task"}
    if unknown:
        raise ConfigError(f"{sorted(unknown)[0]}: unknown top-level field")

    junctions_block = doc.get("junctions")
    if not isinstance(junctions_block, dict) or not junctions_block:
        raise ConfigError("junctions: at least one named junction block is required")
    junctions = {
        name: _junction(block, f"junctions.{name}") for name, block in junctions_block.items()
    }

    ring = None
    if "ring" in doc:
        ring = _ring(doc["ring"], junctions)

    task = doc.get("task", {})
    if not isinstance(task, dict):
        raise ConfigError("task: expected an object")
    return ParsedConfig(junctions=junctions, ring=ring, task=dict(task))


def _ring(block: Any, junctions: dict[str, JunctionParams]) -> RingConfig:
    if not isinstance(block, dict):
        raise ConfigError("ring: expected an object")
    unknown = set(block) - _RING_FIELDS
    if unknown:
        raise ConfigError(f"ring.{sorted(unknown)[0]}: unknown field")
    for req in ("left", "mode", "xi1", "xi2"):
        if req not in block:
            raise ConfigError(f"ring.{req}: required")
    left_name = block["left"]
    if left_name not in junctions:
        raise ConfigError(f"ring.left: unknown junction {left_name!r}")
    mode_name = block["mode"]
    if mode_name == "symmetric":
        mode = SYMMETRIC
    elif mode_name == "antisymmetric":
        mode = ANTISYMMETRIC
    elif mode_name == "general":
        right_name = block.get("right")
        if right_name is None:
            raise ConfigError("ring.right: required for general mode")
        if right_name not in junctions:
            raise ConfigError(f"ring.right: unknown junction {right_name!r}")
        mode = General(right=junctions[right_name])
    else:
        raise ConfigError(
            f"ring.mode: expected symmetric|antisymmetric|general, got {mode_name!r}"
        )
    if mode_name != "general" and "right" in block:
        raise ConfigError("ring.right: only valid for general mode")
    xi1 = _number(block["xi1"], "ring.xi1")
    xi2 = _number(block["xi2"], "ring.xi2")
    try:
        return RingConfig(left=junctions[left_name], mode=mode, xi1=xi1, xi2=xi2)
    except ValueError as exc:
        raise ConfigError(f"ring: {exc}") from exc


def task_orientation(task: dict[str, Any]) -> Orientation:
    raw = task.get("orientation", "inward")
    try:
        return Orientation(raw)
    except ValueError:
        raise ConfigError(
            f"task.orientation: expected inward|outward, got {raw!r}"
        ) from None
