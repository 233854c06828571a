"""
Run configuration: a line-oriented `key = value` format with sections,
resolved into the parameter dataclasses with every default equal to the
reference values (a = 10, σ = 1, A_E = 0.8, σ_E = 0.5, N_c = 10³,
softening 0.4837, ω_L = 0.044, F_L = 0.15, 2-11-2 envelope, mask radius 5,
Gabor window 0.35 T_L).

The laser section accepts either (omega | wavelength_nm) and either
(F_L | intensity_wcm2); whichever is given is converted at parse time and
the manifest records the resolved atomic-unit values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ensemble import EnsembleSpec, MaskSpec
from .model import (AtomParams, LaserParams, PerturberParams,
                    field_from_intensity_wcm2, omega_from_wavelength_nm)
from .sampler import StructureParams


class ConfigError(ValueError):
    """Bad configuration text; message carries the line number or key."""


@dataclass(frozen=True)
class RunConfig:
    laser: LaserParams = LaserParams()
    atom: AtomParams = AtomParams()
    perturber: PerturberParams = PerturberParams()
    structure: StructureParams = StructureParams()
    mask: MaskSpec = MaskSpec()
    n_c: int = 1000
    master_seed: int = 1
    x_min: float = -400.0
    x_max: float = 400.0
    n_grid: int = 8192
    dt: float = 0.02
    record_stride: int = 4
    absorber_band: float = 0.1
    gabor_window_cycles: float = 0.35
    # execution knobs: not part of the run's physical identity, so they are
    # excluded from equality and never rendered into stored configuration
    workers: int = field(default=1, compare=False)
    out_dir: str = field(default="out", compare=False)

    def ensemble_spec(self) -> EnsembleSpec:
        return EnsembleSpec(
            n_c=self.n_c, master_seed=self.master_seed,
            structure=self.structure, perturber=self.perturber,
            laser=self.laser, atom=self.atom,
            x_min=self.x_min, x_max=self.x_max, n_grid=self.n_grid,
            dt=self.dt, record_stride=self.record_stride,
            absorber_band=self.absorber_band)


# section -> key -> (target dataclass field path, converter)
_SCHEMA: dict[str, dict[str, tuple[str, type]]] = {
    "laser": {
        "F_L": ("laser.F_L", float),
        "intensity_wcm2": ("laser.F_L", float),
        "omega": ("laser.omega_L", float),
        "wavelength_nm": ("laser.omega_L", float),
        "n_up": ("laser.n_up", int),
        "n_plateau": ("laser.n_plateau", int),
        "n_down": ("laser.n_down", int),
    },
    "atom": {
        "softening": ("atom.softening", float),
    },
    "environment": {
        "A_E": ("perturber.A_E", float),
        "sigma_E": ("perturber.sigma_E", float),
        "a": ("structure.a", float),
        "sigma": ("structure.sigma", float),
        "n_p": ("structure.n_p", int),
        "mask_radius": ("mask.r0", float),
        "mask_width": ("mask.width", float),
    },
    "grid": {
        "x_min": ("x_min", float),
        "x_max": ("x_max", float),
        "n": ("n_grid", int),
        "dt": ("dt", float),
        "record_stride": ("record_stride", int),
        "absorber_band": ("absorber_band", float),
    },
    "ensemble": {
        "n_c": ("n_c", int),
        "master_seed": ("master_seed", int),
        "workers": ("workers", int),
    },
    "output": {
        "out_dir": ("out_dir", str),
        "gabor_window_cycles": ("gabor_window_cycles", float),
    },
}

_UNIT_ALTERNATIVES = {
    "intensity_wcm2": field_from_intensity_wcm2,
    "wavelength_nm": omega_from_wavelength_nm,
}


def parse_config(text: str) -> RunConfig:
    """Parse configuration text; unknown keys and bad values are errors."""
    values: dict[str, dict[str, object]] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in _SCHEMA:
                raise ConfigError(f"line {lineno}: unknown section [{section}]")
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        if section is None:
            raise ConfigError(f"line {lineno}: key outside any section")
        key, _, val = (part.strip() for part in line.partition("="))
        if key not in _SCHEMA[section]:
            raise ConfigError(f"line {lineno}: unknown key '{key}' "
                              f"in section [{section}]")
        _, conv = _SCHEMA[section][key]
        try:
            parsed = conv(val)
        except ValueError:
            raise ConfigError(f"line {lineno}: cannot parse value for "
                              f"'{key}': {val!r}") from None
        if key in _UNIT_ALTERNATIVES:
            parsed = _UNIT_ALTERNATIVES[key](parsed)
        values.setdefault(section, {})[key] = parsed

    kw: dict[str, dict] = {"laser": {}, "atom": {}, "perturber": {},
                           "structure": {}, "mask": {}}
    top: dict[str, object] = {}
    for section, pairs in values.items():
        for key, parsed in pairs.items():
            path, _ = _SCHEMA[section][key]
            if "." in path:
                group, attr = path.split(".")
                kw[group][attr] = parsed
            else:
                top[path] = parsed
    try:
        return RunConfig(
            laser=LaserParams(**kw["laser"]),
            atom=AtomParams(**kw["atom"]),
            perturber=PerturberParams(**kw["perturber"]),
            structure=StructureParams(**kw["structure"]),
            mask=MaskSpec(**kw["mask"]),
            **top)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def render_config(cfg: RunConfig) -> str:
    """Emit configuration text that parses back to an equal RunConfig."""
    lines = [
        "[laser]",
        f"F_L = {cfg.laser.F_L!r}",
        f"omega = {cfg.laser.omega_L!r}",
        f"n_up = {cfg.laser.n_up}",
        f"n_plateau = {cfg.laser.n_plateau}",
        f"n_down = {cfg.laser.n_down}",
        "[atom]",
        f"softening = {cfg.atom.softening!r}",
        "[environment]",
        f"A_E = {cfg.perturber.A_E!r}",
        f"sigma_E = {cfg.perturber.sigma_E!r}",
        f"a = {cfg.structure.a!r}",
        f"sigma = {cfg.structure.sigma!r}",
        f"n_p = {cfg.structure.n_p}",
        f"mask_radius = {cfg.mask.r0!r}",
        f"mask_width = {cfg.mask.width!r}",
        "[grid]",
        f"x_min = {cfg.x_min!r}",
        f"x_max = {cfg.x_max!r}",
        f"n = {cfg.n_grid}",
        f"dt = {cfg.dt!r}",
        f"record_stride = {cfg.record_stride}",
        f"absorber_band = {cfg.absorber_band!r}",
        "[ensemble]",
        f"n_c = {cfg.n_c}",
        f"master_seed = {cfg.master_seed}",
        "[output]",
        f"gabor_window_cycles = {cfg.gabor_window_cycles!r}",
    ]
    return "\n".join(lines) + "\n"


def load_config(path) -> RunConfig:
    with open(path) as fh:
        return parse_config(fh.read())
