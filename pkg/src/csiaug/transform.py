"""Spatial-frequency <-> angular-delay transforms.

The angular-delay representation of a subcarriers x antennas channel
matrix ``H`` is ``F_delay @ H @ F_angle^H`` where both factors are
unitary DFT matrices; with the sign conventions used here that product
is exactly ``numpy.fft.ifft2(H, norm="ortho")``.  Channel energy beyond
the first few delay rows is negligible for band-limited multipath
channels, so the representation is truncated to the leading
``delay_bins`` rows; the inverse zero-pads the missing rows before
transforming back.

The row convention makes the delay axis physical: a path with delay of
``t`` subcarrier-sampling periods contributes a phase ramp
``exp(-2j pi n t / Nc)`` across subcarriers, which lands in delay row
``t`` (spread over neighbours when ``t`` is fractional).
"""

from __future__ import annotations

import numpy as np

from csiaug.core import AngularDelayMatrix, ChannelMatrix, Dataset, DftPlan, Domain


def transform_values(values: np.ndarray, plan: DftPlan) -> np.ndarray:
    """Raw-array forward transform; trailing two axes are (rows, cols).

    Transforms the long (subcarrier) axis first and truncates before
    touching the antenna axis; identical to ifft2 + row slice.
    """
    delay = np.fft.ifft(values, axis=-2, norm="ortho")[..., : plan.delay_bins, :]
    return np.fft.ifft(delay, axis=-1, norm="ortho")


def inverse_transform_values(values: np.ndarray, plan: DftPlan) -> np.ndarray:
    """Raw-array inverse transform; zero-pads the delay axis back to full size."""
    angle = np.fft.fft(values, axis=-1, norm="ortho")
    pad = [(0, 0)] * (values.ndim - 2) + [(0, plan.subcarriers - plan.delay_bins), (0, 0)]
    return np.fft.fft(np.pad(angle, pad), axis=-2, norm="ortho")


def to_angular_delay(channel: ChannelMatrix, plan: DftPlan) -> AngularDelayMatrix:
    """Transform a channel matrix and keep the leading delay rows."""
    if channel.shape != (plan.subcarriers, plan.antennas):
        raise ValueError(
            f"channel shape {channel.shape} does not match plan "
            f"({plan.subcarriers}, {plan.antennas})"
        )
    return AngularDelayMatrix(transform_values(channel.values, plan))


def from_angular_delay(matrix: AngularDelayMatrix, plan: DftPlan) -> ChannelMatrix:
    """Invert :func:`to_angular_delay`, treating dropped delay rows as zero.

    Exact (to rounding) when the plan keeps all rows; otherwise returns
    the channel whose truncated transform equals ``matrix``.
    """
    if matrix.shape != (plan.delay_bins, plan.antennas):
        raise ValueError(
            f"matrix shape {matrix.shape} does not match plan "
            f"({plan.delay_bins}, {plan.antennas})"
        )
    return ChannelMatrix(inverse_transform_values(matrix.values, plan))


def transform_dataset(dataset: Dataset, plan: DftPlan) -> Dataset:
    """Apply :func:`to_angular_delay` to every sample of a dataset."""
    if dataset.domain is not Domain.SPATIAL_FREQUENCY:
        raise ValueError(f"dataset is already in domain {dataset.domain.value}")
    if dataset.sample_shape != (plan.subcarriers, plan.antennas):
        raise ValueError(
            f"sample shape {dataset.sample_shape} does not match plan "
            f"({plan.subcarriers}, {plan.antennas})"
        )
    return Dataset(transform_values(dataset.samples, plan), Domain.ANGULAR_DELAY, dataset.meta)


def inverse_transform_dataset(dataset: Dataset, plan: DftPlan) -> Dataset:
    """Apply :func:`from_angular_delay` to every sample of a dataset."""
    if dataset.domain is not Domain.ANGULAR_DELAY:
        raise ValueError(f"dataset is already in domain {dataset.domain.value}")
    if dataset.sample_shape != (plan.delay_bins, plan.antennas):
        raise ValueError(
            f"sample shape {dataset.sample_shape} does not match plan "
            f"({plan.delay_bins}, {plan.antennas})"
        )
    return Dataset(
        inverse_transform_values(dataset.samples, plan), Domain.SPATIAL_FREQUENCY, dataset.meta
    )
