"""Core domain types shared across the toolkit.

Complex matrices are held in float64/complex128 internally; 32-bit
precision appears only at the serialization boundary (see
``csiaug.dataset_io``).  All containers are frozen dataclasses wrapping
read-only NumPy arrays, so instances can be shared freely across worker
threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping

import numpy as np

from csiaug.rng import check_seed


class Domain(enum.Enum):
    """Which representation a dataset's samples live in."""

    SPATIAL_FREQUENCY = "spatial-frequency"
    ANGULAR_DELAY = "angular-delay"


class AugmentMethod(enum.Enum):
    """Amplitude-domain augmentation methods (tokens match the CLI)."""

    BUBBLE_SHIFT_UP = "bs-up"
    BUBBLE_SHIFT_DOWN = "bs-down"
    RANDOM_GENERATION = "rg"
    MODEL_DRIVEN = "md"


class ShiftDirection(enum.Enum):
    UP = "up"
    DOWN = "down"


class AugmentMode(enum.Enum):
    """Replace the samples, or append augmented copies after the originals."""

    REPLACE = "replace"
    APPEND = "append"


def _frozen_complex_matrix(values: Any, what: str) -> np.ndarray:
    vals = np.array(values, dtype=np.complex128, copy=True)
    if vals.ndim != 2:
        raise ValueError(f"{what} must be 2-D, got shape {vals.shape}")
    if vals.shape[0] < 1 or vals.shape[1] < 1:
        raise ValueError(f"{what} must have at least one row and column, got {vals.shape}")
    if not np.all(np.isfinite(vals)):
        raise ValueError(f"{what} entries must be finite")
    vals.flags.writeable = False
    return vals


@dataclass(frozen=True)
class ChannelMatrix:
    """Complex downlink channel response, subcarriers x antennas.

    Entries are linear channel gains.  The array is copied, validated
    (finite, non-empty) and frozen at construction.
    """

    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _frozen_complex_matrix(self.values, "channel matrix"))

    @property
    def subcarriers(self) -> int:
        return self.values.shape[0]

    @property
    def antennas(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChannelMatrix):
            return NotImplemented
        return self.shape == other.shape and self.values.tobytes() == other.values.tobytes()


@dataclass(frozen=True)
class AngularDelayMatrix:
    """Complex matrix in the delay (rows) x angle (columns) representation.

    Rows index multipath delay bins, columns index spatial angle bins;
    typically obtained from a :class:`ChannelMatrix` by the 2-D transform
    in :mod:`csiaug.transform`, keeping only the leading delay rows.
    """

    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "values", _frozen_complex_matrix(self.values, "angular-delay matrix")
        )

    @property
    def delay_bins(self) -> int:
        return self.values.shape[0]

    @property
    def angle_bins(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AngularDelayMatrix):
            return NotImplemented
        return self.shape == other.shape and self.values.tobytes() == other.values.tobytes()


def polar_parts(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Element-wise (amplitude, phase) of a complex array.

    Phase lies in [-pi, pi); entries with zero amplitude get phase exactly
    0, which keeps the polar round trip exact at zeros (the argument of 0
    is a convention, and 0 is the one that recomposes to 0 bitwise).
    """
    amplitude = np.abs(values)
    phase = np.angle(values)
    # np.angle returns (-pi, pi]; fold the +pi endpoint and pin zeros.
    phase = np.where(phase == np.pi, -np.pi, phase)
    phase = np.where(amplitude == 0.0, 0.0, phase)
    return amplitude, phase


def decompose(matrix: AngularDelayMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Split an angular-delay matrix into amplitude and phase arrays.

    Amplitude entries are non-negative; phase entries lie in [-pi, pi),
    with zero-amplitude entries reported as phase 0.
    """
    return polar_parts(matrix.values)


def recompose(amplitude: np.ndarray, phase: np.ndarray) -> AngularDelayMatrix:
    """Rebuild a complex matrix as ``amplitude * (cos(phase) + j sin(phase))``.

    Inverse of :func:`decompose` up to floating-point rounding.
    """
    amplitude = np.asarray(amplitude, dtype=np.float64)
    phase = np.asarray(phase, dtype=np.float64)
    if amplitude.shape != phase.shape:
        raise ValueError(
            f"amplitude shape {amplitude.shape} must match phase shape {phase.shape}"
        )
    if amplitude.size and np.min(amplitude) < 0.0:
        raise ValueError("amplitude entries must be non-negative")
    return AngularDelayMatrix(combine_polar(amplitude, phase))


def combine_polar(amplitude: np.ndarray, phase: np.ndarray) -> np.ndarray:
    """Raw-array form of :func:`recompose`, without validation."""
    return amplitude * (np.cos(phase) + 1j * np.sin(phase))


@dataclass(frozen=True)
class AugmentationRecord:
    """One applied augmentation step: method token, parameters, base seed."""

    method: str
    parameters: Mapping[str, Any]
    seed: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "parameters", dict(self.parameters))

    def to_dict(self) -> dict[str, Any]:
        return {"method": self.method, "parameters": dict(self.parameters), "seed": self.seed}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "AugmentationRecord":
        return cls(
            method=str(data["method"]),
            parameters=dict(data["parameters"]),
            seed=int(data["seed"]),
        )


@dataclass(frozen=True)
class Provenance:
    """How a dataset came to be: generation scenario, base seed, and the
    append-only chain of augmentations applied since generation."""

    scenario: Mapping[str, Any] | None = None
    seed: int | None = None
    augmentations: tuple[AugmentationRecord, ...] = ()

    def __post_init__(self) -> None:
        if self.scenario is not None:
            object.__setattr__(self, "scenario", dict(self.scenario))
        object.__setattr__(self, "augmentations", tuple(self.augmentations))

    def with_augmentation(self, record: AugmentationRecord) -> "Provenance":
        return Provenance(
            scenario=self.scenario,
            seed=self.seed,
            augmentations=self.augmentations + (record,),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenario": dict(self.scenario) if self.scenario is not None else None,
            "seed": self.seed,
            "augmentations": [rec.to_dict() for rec in self.augmentations],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Provenance":
        return cls(
            scenario=data.get("scenario"),
            seed=data.get("seed"),
            augmentations=tuple(
                AugmentationRecord.from_dict(rec) for rec in data.get("augmentations", [])
            ),
        )


@dataclass(frozen=True, eq=False)
class Dataset:
    """Ordered collection of equally shaped complex samples.

    ``samples`` is a read-only complex128 array of shape
    ``(count, rows, cols)``; the stacked layout enforces the equal-shape
    invariant.  ``domain`` says what the rows/cols mean, ``meta`` records
    provenance.
    """

    samples: np.ndarray
    domain: Domain
    meta: Provenance = field(default_factory=Provenance)

    def __post_init__(self) -> None:
        vals = np.array(self.samples, dtype=np.complex128, copy=True)
        if vals.ndim != 3:
            raise ValueError(f"samples must be a (count, rows, cols) array, got shape {vals.shape}")
        if vals.shape[1] < 1 or vals.shape[2] < 1:
            raise ValueError(f"sample shape must be at least 1x1, got {vals.shape[1:]}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("dataset samples must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "samples", vals)
        if not isinstance(self.domain, Domain):
            raise TypeError(f"domain must be a Domain, got {type(self.domain).__name__}")

    def __len__(self) -> int:
        return self.samples.shape[0]

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.samples)

    @property
    def sample_shape(self) -> tuple[int, int]:
        return self.samples.shape[1:]

    def matrix(self, index: int) -> ChannelMatrix | AngularDelayMatrix:
        """Sample ``index`` wrapped in the type matching the domain tag."""
        values = self.samples[index]
        if self.domain is Domain.SPATIAL_FREQUENCY:
            return ChannelMatrix(values)
        return AngularDelayMatrix(values)

    def with_samples(self, samples: np.ndarray, domain: Domain | None = None) -> "Dataset":
        return Dataset(samples, domain if domain is not None else self.domain, self.meta)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.domain is other.domain
            and self.samples.shape == other.samples.shape
            and self.samples.tobytes() == other.samples.tobytes()
            and self.meta == other.meta
        )


def empty_dataset(rows: int, cols: int, domain: Domain, meta: Provenance | None = None) -> Dataset:
    """Dataset with zero samples but a definite sample shape."""
    return Dataset(
        np.zeros((0, rows, cols), dtype=np.complex128),
        domain,
        meta if meta is not None else Provenance(),
    )


_SHIFT_METHODS = (
    AugmentMethod.BUBBLE_SHIFT_UP,
    AugmentMethod.BUBBLE_SHIFT_DOWN,
    AugmentMethod.MODEL_DRIVEN,
)


@dataclass(frozen=True)
class AugmentParams:
    """Parameters for one augmentation pass over a dataset.

    ``shift`` (delay bins) applies to the shift-based methods and is
    ignored by random generation; ``block_size`` (bins, edge length of
    the redrawn square) applies to random generation only.  ``direction``
    is consumed only by the model-driven baseline, whose cyclic shift has
    no inherent direction; it defaults to DOWN.
    """

    method: AugmentMethod
    shift: int | None = None
    block_size: int | None = None
    seed: int = 0
    direction: ShiftDirection = ShiftDirection.DOWN

    def __post_init__(self) -> None:
        if not isinstance(self.method, AugmentMethod):
            raise TypeError(f"method must be an AugmentMethod, got {type(self.method).__name__}")
        check_seed(self.seed)
        if self.method in _SHIFT_METHODS:
            if self.shift is None:
                raise ValueError(f"method {self.method.value} requires a shift")
            if int(self.shift) < 0:
                raise ValueError(f"shift must be non-negative, got {self.shift}")
            object.__setattr__(self, "shift", int(self.shift))
        else:
            if self.block_size is None:
                raise ValueError(f"method {self.method.value} requires a block size")
            if int(self.block_size) < 1:
                raise ValueError(f"block size must be positive, got {self.block_size}")
            object.__setattr__(self, "block_size", int(self.block_size))
        if not isinstance(self.direction, ShiftDirection):
            raise TypeError("direction must be a ShiftDirection")


@dataclass(frozen=True)
class DftPlan:
    """Dimensions for the angular-delay transform.

    Both transforms use unitary (1/sqrt(N)) scaling, so the untruncated
    transform preserves Frobenius energy and inverts exactly.
    """

    subcarriers: int
    antennas: int
    delay_bins: int

    def __post_init__(self) -> None:
        for name in ("subcarriers", "antennas", "delay_bins"):
            value = getattr(self, name)
            if int(value) < 1:
                raise ValueError(f"{name} must be at least 1, got {value}")
            object.__setattr__(self, name, int(value))
        if self.delay_bins > self.subcarriers:
            raise ValueError(
                f"delay_bins ({self.delay_bins}) cannot exceed subcarriers ({self.subcarriers})"
            )
