"""Run configuration: YAML in, validated :class:`RunConfig` out."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml

from .lie import LieStructure, builtin_sl2
from .scalars import ExpansionWindow

__all__ = ["ConfigError", "RunConfig", "SUITES", "SABOTAGE", "load_config", "parse_config", "build_lie"]

SUITES = (
    "local_triple",
    "global_triple",
    "retract_local",
    "retract_global",
    "pairing",
    "cohomology",
    "adelic_crosscheck",
    "envelope",
)
SABOTAGE = ("drop_boundary", "broken_jacobi", "wrong_sigma")
_KEYS = {"lie", "marked_points", "window", "seed", "suites", "samples_per_property", "output_path", "sabotage"}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    lie: Any = "sl2"
    marked_w: tuple = (0, 1)
    marked_z: tuple = (0, 2)
    window: ExpansionWindow = field(default_factory=lambda: ExpansionWindow.square(2))
    seed: int = 1
    suites: tuple = SUITES
    samples_per_property: int = 50
    output_path: str | None = None
    sabotage: str | None = None

    def echo(self) -> dict:
        return {
            "lie": self.lie,
            "marked_points": {"w": list(self.marked_w), "z": list(self.marked_z)},
            "window": str(self.window),
            "seed": self.seed,
            "suites": list(self.suites),
            "samples_per_property": self.samples_per_property,
            "sabotage": self.sabotage,
        }


def build_lie(spec) -> LieStructure:
    """``"sl2"`` or a table ``{dim, names, brackets: [[a, b, {c: coeff}], ...], form: [[...]]}``."""
    if spec == "sl2":
        return builtin_sl2()
    if not isinstance(spec, dict):
        raise ConfigError(f"unknown Lie algebra {spec!r}")
    try:
        dim = int(spec["dim"])
        brackets = {}
        for a, b, out in spec["brackets"]:
            brackets[(int(a), int(b))] = {int(c): Fraction(str(v)) for c, v in out.items()}
        form = [[Fraction(str(x)) for x in row] for row in spec["form"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad structure-constant table: {exc}") from exc
    if len(form) != dim or any(len(r) != dim for r in form):
        raise ConfigError(f"form must be {dim}x{dim}")
    return LieStructure.from_tables(dim, brackets, form, spec.get("names"))


def _line_of(node, key: str) -> int | None:
    if isinstance(node, yaml.MappingNode):
        for k, _ in node.value:
            if getattr(k, "value", None) == key:
                return k.start_mark.line + 1
    return None


def _window(value) -> ExpansionWindow:
    if isinstance(value, str):
        return ExpansionWindow.parse(value)
    if isinstance(value, dict):
        return ExpansionWindow(int(value["w_min"]), int(value["w_max"]), int(value["z_min"]), int(value["z_max"]))
    if isinstance(value, int):
        return ExpansionWindow.square(value)
    raise ValueError("window must be 'wmin:wmax,zmin:zmax', a mapping, or an integer")


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    try:
        node = yaml.compose(text)
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be a mapping")

    def fail(key, msg):
        line = _line_of(node, key)
        where = f"{source}:{line}" if line else source
        raise ConfigError(f"{where}: {key}: {msg}")

    for key in data:
        if key not in _KEYS:
            fail(key, f"unknown key (expected one of {sorted(_KEYS)})")
    cfg = RunConfig()
    if "lie" in data:
        try:
            build_lie(data["lie"])
        except ConfigError as exc:
            fail("lie", str(exc))
        cfg.lie = data["lie"]
    if "marked_points" in data:
        mp = data["marked_points"]
        if not isinstance(mp, dict) or set(mp) != {"w", "z"}:
            fail("marked_points", "expected a mapping with keys w and z")
        w, z = tuple(mp["w"]), tuple(mp["z"])
        if len(w) != len(z) or not w:
            fail("marked_points", "w and z must be non-empty lists of equal length")
        if len(set(w)) != len(w) or len(set(z)) != len(z):
            fail("marked_points", "marked points must be pairwise distinct per coordinate")
        if not all(isinstance(x, int) for x in w + z):
            fail("marked_points", "marked points must be integers")
        cfg.marked_w, cfg.marked_z = w, z
    if "window" in data:
        try:
            cfg.window = _window(data["window"])
        except (ValueError, KeyError, TypeError) as exc:
            fail("window", str(exc))
    if "seed" in data:
        s = data["seed"]
        if not isinstance(s, int) or not 0 <= s < 2**64:
            fail("seed", "expected a 64-bit non-negative integer")
        cfg.seed = s
    if "suites" in data:
        names = data["suites"]
        if not isinstance(names, list) or any(n not in SUITES for n in names):
            fail("suites", f"expected a list drawn from {list(SUITES)}")
        cfg.suites = tuple(names)
    if "samples_per_property" in data:
        n = data["samples_per_property"]
        if not isinstance(n, int) or n <= 0:
            fail("samples_per_property", "expected a positive integer")
        cfg.samples_per_property = n
    if "output_path" in data:
        cfg.output_path = str(data["output_path"]) if data["output_path"] is not None else None
    if "sabotage" in data:
        sab = data["sabotage"]
        if sab is not None and sab not in SABOTAGE:
            fail("sabotage", f"expected one of {list(SABOTAGE)}")
        cfg.sabotage = sab
    return cfg


def load_config(path: str | Path) -> RunConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"{p}: {exc.strerror}") from exc
    return parse_config(text, str(p))
