"""Run configuration: flat key=value text with named material blocks."""

from __future__ import annotations

from dataclasses import dataclass, field, fields as dc_fields

from .errors import ConfigError
from .laminate import builtin_materials, load_materials
from .mesh import DEFAULT_MATERIAL, DEFAULT_SLB_LAYUP

DEFAULT_RAMP = {"dcb": 10.0, "enf": 3.0, "mmb": 3.0, "slb": 12.0}

_GEOMETRY_KEYS = ("span", "a0", "width", "arm_thickness", "t_top", "t_bot",
                  "lever")


@dataclass
class RunConfig:
    """Everything one benchmark run needs, with printable defaults."""

    case: str = "dcb"
    element_size: float = 2.0
    material: str = ""            # empty = case default
    ramp: float = 0.0             # 0 = case default
    out: str = ""                 # empty = <case>_<size>.csv

    # geometry overrides; 0 keeps the benchmark table value
    span: float = 0.0
    a0: float = 0.0
    width: float = 0.0
    arm_thickness: float = 0.0
    t_top: float = 0.0
    t_bot: float = 0.0
    lever: float = 0.0

    # model options
    slb_layup: str = DEFAULT_SLB_LAYUP
    strip_elements: int = 0
    alpha: float = 50.0
    contact_alpha: float = 1.0
    plane_strain: bool = False
    elastic_only: bool = False
    slb_mode_mix: float = 0.4

    # solver options
    tol_residual: float = 5.0e-3
    tol_displacement: float = 1.0e-2
    max_iterations: int = 60
    max_cuts: int = 6
    initial_fraction: float = 0.01
    growth: float = 1.5
    max_fraction: float = 0.05

    materials: dict = field(default_factory=dict)

    def resolved_material(self) -> str:
        return self.material or DEFAULT_MATERIAL[self.case]

    def resolved_ramp(self) -> float:
        return self.ramp if self.ramp > 0.0 else DEFAULT_RAMP[self.case]

    def resolved_out(self) -> str:
        return self.out or f"{self.case}_{self.element_size:g}mm.csv"

    def geometry_overrides(self) -> dict:
        return {key: getattr(self, key) for key in _GEOMETRY_KEYS
                if getattr(self, key) > 0.0}

    def validate(self):
        if self.case not in DEFAULT_RAMP:
            raise ConfigError(f"case: unknown value '{self.case}'")
        if self.element_size <= 0.0:
            raise ConfigError("element_size: must be > 0")
        name = self.resolved_material()
        if name not in self.lookup_materials():
            raise ConfigError(f"material: unknown material '{name}'")

    def lookup_materials(self) -> dict:
        table = builtin_materials()
        table.update(self.materials)
        return table


_BOOL_KEYS = {"plane_strain", "elastic_only"}
_INT_KEYS = {"strip_elements", "max_iterations", "max_cuts"}
_STR_KEYS = {"case", "material", "out", "slb_layup"}


def _coerce(key: str, raw: str):
    if key in _STR_KEYS:
        return raw
    if key in _BOOL_KEYS:
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{key}: expected a boolean, got '{raw}'")
    try:
        if key in _INT_KEYS:
            return int(raw)
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: could not parse '{raw}'") from exc


def parse_config(text: str) -> RunConfig:
    """Parse flat key=value configuration text plus material blocks."""
    known = {f.name for f in dc_fields(RunConfig)} - {"materials"}
    config = RunConfig()
    in_block = False
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            in_block = True
            continue
        if in_block:
            continue
        if "=" not in line:
            raise ConfigError(f"malformed line (expected key = value): {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"{key}: unknown configuration key")
        setattr(config, key, _coerce(key, value))
    config.materials = load_materials(text)
    return config


def defaults_text() -> str:
    """All defaults in the accepted input format."""
    config = RunConfig()
    lines = ["# delamshell run configuration (defaults)"]
    for f in dc_fields(RunConfig):
        if f.name == "materials":
            continue
        value = getattr(config, f.name)
        if f.name in _BOOL_KEYS:
            value = int(value)
        lines.append(f"{f.name} = {value}")
    lines.append("")
    lines.append("# built-in materials (moduli GPa, toughness kJ/m^2, strength MPa)")
    for name, ply in builtin_materials().items():
        lines.append(f"[material {name}]")
        for key in ("E11", "E22", "E33", "nu12", "nu13", "nu23",
                    "G12", "G13", "G23", "GIc", "GIIc", "eta",
                    "tauIc", "tauIIc"):
            lines.append(f"{key} = {getattr(ply, key)}")
        lines.append("")
    return "\n".join(lines)
