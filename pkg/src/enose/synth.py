"""Calibrated synthetic gas-sensor dataset generator.

Gas channels are class-conditional Gaussians with separability margins large
enough for desk-scale accuracy targets.  Temperature and pressure follow a
session-wide ramp over the block-ordered recording session, so with drift
enabled they correlate with the encoded label even though they carry no
substance information — the ambient-drift pathology the diagnostics must
surface.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

import numpy as np

from .dataset import CANONICAL_CHANNELS, Dataset
from .errors import BadSpec
from .rng import derive_rng

GAS_CHANNELS = ("co", "no2", "voc", "ethanol", "co2", "tvoc")
AMBIENT_CHANNELS = ("temperature", "humidity", "pressure")

DEFAULT_CLASSES = (
    "apple_juice",
    "cardamom",
    "cinnamon",
    "expired_apple_juice",
    "expired_garlic",
    "expired_ginger",
    "expired_onion",
    "garlic",
    "ginger",
    "onion",
)


@dataclass(frozen=True)
class DriftSpec:
    enabled: bool = True
    temperature_ramp: tuple[float, float] = (27.0, 21.0)
    pressure_ramp: tuple[float, float] = (1008.0, 1019.0)
    jitter_sigma: float = 0.25


@dataclass(frozen=True)
class SynthSpec:
    classes: tuple[str, ...]
    channels: tuple[str, ...]
    gas_means: np.ndarray   # C x n_gas
    gas_stds: np.ndarray    # C x n_gas
    samples_per_class: int
    drift: DriftSpec
    humidity_base: float
    seed: int


def _default_gas_means() -> np.ndarray:
    """Class-conditional means in sigma units.

    Each substance activates two gas channels at amplitude 10 (>= 5 sigma
    apart between distinct substances on at least two channels); expired
    variants add 4 sigma on ethanol and tvoc (>= 3 sigma on two channels
    between any fresh/expired pair).
    """
    substances = {"apple_juice": 0, "cardamom": 1, "cinnamon": 2, "garlic": 3, "ginger": 4, "onion": 5}
    n_gas = len(GAS_CHANNELS)
    ethanol = GAS_CHANNELS.index("ethanol")
    tvoc = GAS_CHANNELS.index("tvoc")
    means = np.zeros((len(DEFAULT_CLASSES), n_gas))
    for i, name in enumerate(DEFAULT_CLASSES):
        base = name.removeprefix("expired_")
        s = substances[base]
        means[i, s] += 10.0
        means[i, (s + 1) % n_gas] += 10.0
        if name.startswith("expired_"):
            means[i, ethanol] += 4.0
            means[i, tvoc] += 4.0
    return means


def default_spec(samples_per_class: int = 10_000, seed: int = 0,
                 drift_enabled: bool = True) -> SynthSpec:
    means = _default_gas_means()
    return SynthSpec(
        classes=DEFAULT_CLASSES,
        channels=CANONICAL_CHANNELS,
        gas_means=means,
        gas_stds=np.ones_like(means),
        samples_per_class=samples_per_class,
        drift=DriftSpec(enabled=drift_enabled),
        humidity_base=45.0,
        seed=seed,
    )


def generate(spec: SynthSpec, seed_override: int | None = None) -> Dataset:
    """Deterministically draw a blocked-session dataset from the spec."""
    if spec.samples_per_class < 1:
        raise BadSpec("samples_per_class must be >= 1")
    if (np.asarray(spec.gas_stds) <= 0).any():
        raise BadSpec("gas channel standard deviations must be positive")
    if spec.gas_means.shape != (len(spec.classes), len(GAS_CHANNELS)):
        raise BadSpec(f"gas_means must be {len(spec.classes)} x {len(GAS_CHANNELS)}")
    missing = [c for c in GAS_CHANNELS + AMBIENT_CHANNELS if c not in spec.channels]
    if missing:
        raise BadSpec(f"channels must include {missing}")

    seed = spec.seed if seed_override is None else seed_override
    C = len(spec.classes)
    m = spec.samples_per_class
    n = C * m
    col = {name: j for j, name in enumerate(spec.channels)}
    X = np.zeros((n, len(spec.channels)))

    drift = spec.drift
    session = np.linspace(0.0, 1.0, n)
    t0, t1 = drift.temperature_ramp
    p0, p1 = drift.pressure_ramp
    if drift.enabled:
        temperature = t0 + (t1 - t0) * session
        pressure = p0 + (p1 - p0) * session
    else:
        temperature = np.full(n, t0)
        pressure = np.full(n, p0)

    sorted_classes = tuple(sorted(set(spec.classes)))
    labels = np.zeros(n, dtype=np.int64)
    for block, name in enumerate(spec.classes):
        rows = slice(block * m, (block + 1) * m)
        labels[rows] = sorted_classes.index(name)
        rng = derive_rng(seed, "gas", block)
        gas = spec.gas_means[block] + spec.gas_stds[block] * rng.standard_normal((m, len(GAS_CHANNELS)))
        for j, ch in enumerate(GAS_CHANNELS):
            X[rows, col[ch]] = gas[:, j]

    ambient_rng = derive_rng(seed, "ambient")
    X[:, col["temperature"]] = temperature + drift.jitter_sigma * ambient_rng.standard_normal(n)
    X[:, col["pressure"]] = pressure + drift.jitter_sigma * ambient_rng.standard_normal(n)
    X[:, col["humidity"]] = spec.humidity_base + 2.0 * ambient_rng.standard_normal(n)

    return Dataset(spec.channels, X, labels, sorted_classes)


def _format_float(x: float) -> str:
    return repr(float(x))


def write_run_files(ds: Dataset, out_dir: str, run_id: str = "run0") -> str:
    """Emit per-class CSV run files plus a manifest; returns the manifest path."""
    os.makedirs(out_dir, exist_ok=True)
    header = ",".join(ds.feature_names)
    manifest_lines = []
    for c, name in enumerate(ds.classes):
        rows = ds.features[ds.labels == c]
        fname = f"{name}__{run_id}.csv"
        path = os.path.join(out_dir, fname)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(header + "\n")
            for row in rows:
                fh.write(",".join(_format_float(v) for v in row) + "\n")
        manifest_lines.append(f"{fname},{name}")
    manifest_path = os.path.join(out_dir, "manifest.csv")
    with open(manifest_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(manifest_lines) + "\n")
    return manifest_path
