"""Experiment configuration, 3-D geometry and derived angles/delays."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .errors import ConfigError, SchemaError, ValidationError
from .waveform import SPEED_OF_LIGHT, WaveformSpec


def _point(value, name: str) -> np.ndarray:
    arr = np.array(value, dtype=float)
    if arr.shape != (3,):
        raise ValidationError(name, f"expected a 3-D point, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(name, "non-finite coordinate")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ArrayGeometry:
    """Jammer ULA: element n sits at ``jammer_position + n * spacing * axis``."""

    num_elements: int
    spacing: float
    axis: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0]))

    def __post_init__(self):
        if int(self.num_elements) != self.num_elements or self.num_elements < 1:
            raise ValidationError("array.n", "must be a positive integer")
        if not (self.spacing > 0 and math.isfinite(self.spacing)):
            raise ValidationError("array.d_m", "must be positive")
        axis = _point(self.axis, "array.axis")
        if abs(np.linalg.norm(axis) - 1.0) > 1e-12:
            raise ValidationError("array.axis", "must be a unit vector (|axis| = 1 within 1e-12)")
        object.__setattr__(self, "num_elements", int(self.num_elements))
        object.__setattr__(self, "axis", axis)


@dataclass(frozen=True)
class Scenario:
    radar_positions: np.ndarray
    target_position: np.ndarray
    jammer_position: np.ndarray
    jammer_array: ArrayGeometry
    waveform: WaveformSpec
    num_slots: int
    target_snr_db: float
    input_jsnr_per_element_db: float
    noise_variance: float
    p: float
    master_seed: int
    num_jammers: int = 1
    num_targets: int = 1

    def __post_init__(self):
        radars = np.array(self.radar_positions, dtype=float)
        if radars.ndim != 2 or radars.shape[1] != 3:
            raise ValidationError("radars", "expected a list of [x, y, z] points")
        if radars.shape[0] < 2:
            raise ValidationError("radars", "need at least 2 radars (K >= 2)")
        if not np.all(np.isfinite(radars)):
            raise ValidationError("radars", "non-finite coordinate")
        radars.setflags(write=False)
        object.__setattr__(self, "radar_positions", radars)
        object.__setattr__(self, "target_position", _point(self.target_position, "target"))
        object.__setattr__(self, "jammer_position", _point(self.jammer_position, "jammer"))
        if np.array_equal(self.target_position, self.jammer_position):
            raise ValidationError("target", "target and jammer must be distinct points")
        if int(self.num_slots) != self.num_slots or self.num_slots < 1:
            raise ValidationError("slots", "must be a positive integer")
        object.__setattr__(self, "num_slots", int(self.num_slots))
        if not (self.noise_variance > 0 and math.isfinite(self.noise_variance)):
            raise ValidationError("noise_variance", "must be positive")
        if not (0.0 <= self.p <= 1.0):
            raise ValidationError("p", f"must lie in [0, 1], got {self.p}")
        for name in ("target_snr_db", "input_jsnr_per_element_db"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(name, "must be finite")
        if not (0 <= int(self.master_seed) < 2**64) or int(self.master_seed) != self.master_seed:
            raise ValidationError("seed", "must be an unsigned 64-bit integer")
        object.__setattr__(self, "master_seed", int(self.master_seed))
        if self.num_jammers != 1 or self.num_targets != 1:
            raise ValidationError("num_jammers", "only J = T = 1 is supported")

    @property
    def num_radars(self) -> int:
        return self.radar_positions.shape[0]

    @property
    def wavelength(self) -> float:
        return self.waveform.wavelength

    def with_(self, **changes) -> "Scenario":
        return replace(self, **changes)

    def with_elements(self, n: int) -> "Scenario":
        return replace(self, jammer_array=replace(self.jammer_array, num_elements=n))

    def to_document(self) -> dict[str, Any]:
        """Inverse of :func:`load_scenario` (all keys explicit)."""
        return {
            "radars": self.radar_positions.tolist(),
            "target": self.target_position.tolist(),
            "jammer": self.jammer_position.tolist(),
            "array": {
                "n": self.jammer_array.num_elements,
                "d_m": self.jammer_array.spacing,
                "axis": self.jammer_array.axis.tolist(),
            },
            "waveform": {
                "type": self.waveform.kind,
                "bandwidth_hz": self.waveform.bandwidth,
                "duration_s": self.waveform.duration,
                "carrier_hz": self.waveform.carrier,
            },
            "slots": self.num_slots,
            "target_snr_db": self.target_snr_db,
            "input_jsnr_per_element_db": self.input_jsnr_per_element_db,
            "noise_variance": self.noise_variance,
            "p": self.p,
            "seed": self.master_seed,
        }

    def digest(self) -> str:
        canonical = json.dumps(self.to_document(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()


@dataclass(frozen=True)
class GeometrySolution:
    """Per-radar angles (radians from broadside) and delays (seconds)."""

    angles: np.ndarray
    jammer_delays: np.ndarray
    target_delays: np.ndarray

    @property
    def sin_angles(self) -> np.ndarray:
        return np.sin(self.angles)


def target_delay(distance):
    # Doubled one-way delay, as the signal model states it for every radar.
    # A bistatic variant would return (d_tx + d_k) / c instead.
    return 2.0 * np.asarray(distance) / SPEED_OF_LIGHT


def solve_geometry(scenario: Scenario) -> GeometrySolution:
    radars = scenario.radar_positions
    to_radar = radars - scenario.jammer_position
    d_jam = np.linalg.norm(to_radar, axis=1)
    d_tgt = np.linalg.norm(radars - scenario.target_position, axis=1)
    if np.any(d_jam == 0.0):
        raise ConfigError("degenerate geometry: a radar coincides with the jammer")
    if np.any(d_tgt == 0.0):
        raise ConfigError("degenerate geometry: a radar coincides with the target")
    sin_theta = np.clip(to_radar @ scenario.jammer_array.axis / d_jam, -1.0, 1.0)
    return GeometrySolution(
        angles=np.arcsin(sin_theta),
        jammer_delays=d_jam / SPEED_OF_LIGHT,
        target_delays=target_delay(d_tgt),
    )


# -- config documents ---------------------------------------------------------

_TOP_KEYS = {
    "radars": list,
    "target": list,
    "jammer": list,
    "array": dict,
    "waveform": dict,
    "slots": int,
    "target_snr_db": (int, float),
    "input_jsnr_per_element_db": (int, float),
    "noise_variance": (int, float),
    "p": (int, float),
    "seed": int,
}
_ARRAY_KEYS = {"n": int, "d_m": (int, float)}
_ARRAY_OPTIONAL = {"axis": list}
_WAVEFORM_KEYS = {"type": str, "bandwidth_hz": (int, float), "duration_s": (int, float), "carrier_hz": (int, float)}


def _check_keys(doc, required, optional, prefix, problems):
    for key, typ in required.items():
        if key not in doc:
            problems.append(f"missing key '{prefix}{key}'")
        elif isinstance(doc[key], bool) or not isinstance(doc[key], typ):
            problems.append(f"key '{prefix}{key}' has wrong type {type(doc[key]).__name__}")
    for key, typ in optional.items():
        if key in doc and not isinstance(doc[key], typ):
            problems.append(f"key '{prefix}{key}' has wrong type {type(doc[key]).__name__}")
    for key in doc:
        if key not in required and key not in optional:
            problems.append(f"unknown key '{prefix}{key}'")


def load_scenario(config_document: Mapping[str, Any]) -> Scenario:
    """Build a validated :class:`Scenario` from a parsed JSON document.

    Schema problems are collected and reported together as a
    :class:`SchemaError`; semantic violations raise :class:`ValidationError`.
    The only default is ``array.axis = [1, 0, 0]``.
    """
    if not isinstance(config_document, Mapping):
        raise SchemaError(["document must be a JSON object"])
    problems: list[str] = []
    _check_keys(config_document, _TOP_KEYS, {}, "", problems)
    if isinstance(config_document.get("array"), dict):
        _check_keys(config_document["array"], _ARRAY_KEYS, _ARRAY_OPTIONAL, "array.", problems)
    if isinstance(config_document.get("waveform"), dict):
        _check_keys(config_document["waveform"], _WAVEFORM_KEYS, {}, "waveform.", problems)
    if problems:
        raise SchemaError(problems)

    doc = config_document
    wf = doc["waveform"]
    if wf["type"] != "lfm":
        raise ValidationError("waveform.type", f"radar waveform must be 'lfm', got {wf['type']!r}")
    arr = doc["array"]
    try:
        radars = np.array(doc["radars"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError("radars", str(exc)) from None
    return Scenario(
        radar_positions=radars,
        target_position=doc["target"],
        jammer_position=doc["jammer"],
        jammer_array=ArrayGeometry(arr["n"], float(arr["d_m"]), arr.get("axis", [1.0, 0.0, 0.0])),
        waveform=WaveformSpec("lfm", float(wf["bandwidth_hz"]), float(wf["duration_s"]), float(wf["carrier_hz"])),
        num_slots=doc["slots"],
        target_snr_db=float(doc["target_snr_db"]),
        input_jsnr_per_element_db=float(doc["input_jsnr_per_element_db"]),
        noise_variance=float(doc["noise_variance"]),
        p=float(doc["p"]),
        master_seed=doc["seed"],
    )


def read_scenario(path) -> Scenario:
    text = Path(path).read_text()  # OSError propagates: an I/O failure, not a config one
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError([f"{path}: not valid JSON ({exc})"]) from None
    return load_scenario(doc)


def default_scenario() -> Scenario:
    """The four-radar desk scenario shipped with the package."""
    text = resources.files("rassjam").joinpath("data/four_radar.json").read_text()
    return load_scenario(json.loads(text))
