"""Amplitude-domain augmentations for angular-delay CSI matrices.

Three families:

* Bubble shift (up/down): per column, circularly shift the amplitude
  profile toward shorter or longer delay, one step at a time, repairing
  the wrapped element after each step with a bubble pass so the profile
  keeps its decaying shape around the peak.  Deterministic, and a pure
  permutation of each column's values.
* Random block regeneration: redraw a small square block, centred on a
  random column of the strongest row, uniformly between the matrix's
  min and max.
* Cyclic-shift baseline: plain circular shift of the amplitude plus a
  fully randomized phase matrix.  This reimplements (approximately) the
  model-driven scheme the bubble shifts are compared against; unlike
  them it destroys the phase structure.

All of these leave the complex samples' phase untouched except the
baseline.  Seeded operations derive one child seed per sample from the
pass seed and the sample index, so results do not depend on worker
count or scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from csiaug.core import (
    AugmentationRecord,
    AugmentMethod,
    AugmentMode,
    AugmentParams,
    Dataset,
    Domain,
    ShiftDirection,
    combine_polar,
    polar_parts,
)
from csiaug.rng import derive_seed, make_generator

WORKERS_ENV = "CSIAUG_WORKERS"


def _check_amplitude(amplitude: np.ndarray) -> np.ndarray:
    amp = np.array(amplitude, dtype=np.float64, copy=True)
    if amp.ndim != 2 or amp.shape[0] < 1 or amp.shape[1] < 1:
        raise ValueError(f"amplitude matrix must be 2-D and non-empty, got shape {amp.shape}")
    if not np.all(np.isfinite(amp)):
        raise ValueError("amplitude entries must be finite")
    if np.min(amp) < 0.0:
        raise ValueError("amplitude entries must be non-negative")
    return amp


def _check_shift(shift: int) -> int:
    if int(shift) < 0:
        raise ValueError(f"shift must be non-negative, got {shift}")
    return int(shift)


def _bubble_up_column(col: list[float], shift: int) -> None:
    n = len(col)
    peak = max(range(n), key=col.__getitem__)
    for _ in range(min(shift, peak)):
        # One step up; the old top value wraps to the bottom.
        col.append(col.pop(0))
        # Let the wrapped value climb while it beats the one above it.
        k = n - 1
        while k >= 1 and col[k] > col[k - 1]:
            col[k], col[k - 1] = col[k - 1], col[k]
            k -= 1


def _bubble_down_column(col: list[float], shift: int) -> None:
    n = len(col)
    peak = max(range(n), key=col.__getitem__)
    for _ in range(min(shift, n - 1 - peak)):
        # One step down; the old bottom value wraps to the top.
        col.insert(0, col.pop())
        # Walk up from the bottom, trading values into the top slot while
        # they would sit between the current top two entries.  The top
        # slot is re-read each swap, so the fence rises as repairs land.
        k = n - 1
        while k >= 1 and col[0] < col[k] < col[1]:
            col[k], col[0] = col[0], col[k]
            k -= 1


def bubble_shift_up(amplitude: np.ndarray, shift: int) -> np.ndarray:
    """Shift each column's profile toward delay 0, at most ``shift`` steps.

    Per column: the number of steps is capped at the peak's row index,
    so the peak never wraps past the top.  Each step is a one-row
    circular shift up followed by a bubble pass that floats the wrapped
    value to its ordered place.  The result is a permutation of each
    column's values (bitwise), and the phase is not involved at all.
    """
    amp = _check_amplitude(amplitude)
    shift = _check_shift(shift)
    if shift == 0:
        return amp
    for c in range(amp.shape[1]):
        col = amp[:, c].tolist()
        _bubble_up_column(col, shift)
        amp[:, c] = col
    return amp


def bubble_shift_down(amplitude: np.ndarray, shift: int) -> np.ndarray:
    """Shift each column's profile toward longer delay, at most ``shift`` steps.

    Mirror image of :func:`bubble_shift_up`: steps are capped at the
    distance from the peak to the bottom row, and after each one-row
    circular shift down the repair pass re-seats values that landed
    between the top entry and the runner-up slot.
    """
    amp = _check_amplitude(amplitude)
    shift = _check_shift(shift)
    if shift == 0:
        return amp
    for c in range(amp.shape[1]):
        col = amp[:, c].tolist()
        _bubble_down_column(col, shift)
        amp[:, c] = col
    return amp


def random_generation(amplitude: np.ndarray, block_size: int, seed: int) -> np.ndarray:
    """Redraw a square block of the amplitude matrix uniformly at random.

    The block nominally spans ``block_size`` rows and columns, centred
    on the row of the global maximum (first occurrence) and a column
    drawn uniformly at random; for even sizes the centre sits
    ``(block_size-1)//2`` cells from the block's leading edge.  The
    block is clipped at the matrix edges, never wrapped.  Redrawn
    entries are i.i.d. uniform between the matrix's global min and max
    (computed before any redraw); everything outside the clipped block
    is left bit-identical.
    """
    amp = _check_amplitude(amplitude)
    if int(block_size) < 1:
        raise ValueError(f"block size must be positive, got {block_size}")
    block_size = int(block_size)
    rows, cols = amp.shape
    peak_row = int(np.argmax(amp)) // cols
    low = float(np.min(amp))
    high = float(np.max(amp))
    rng = make_generator(seed)
    centre_col = int(rng.integers(0, cols))
    before = (block_size - 1) // 2
    r0 = max(peak_row - before, 0)
    r1 = min(peak_row - before + block_size, rows)
    c0 = max(centre_col - before, 0)
    c1 = min(centre_col - before + block_size, cols)
    amp[r0:r1, c0:c1] = rng.uniform(low, high, size=(r1 - r0, c1 - c0))
    return amp


def md_baseline(
    amplitude: np.ndarray,
    phase: np.ndarray,
    shift: int,
    direction: ShiftDirection,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic-shift baseline: rigid column shift, phase fully redrawn.

    The amplitude columns are circularly shifted ``shift`` rows in the
    given direction with no repair pass; the phase matrix is replaced
    elementwise by i.i.d. uniform draws on [-pi, pi).
    """
    amp = _check_amplitude(amplitude)
    shift = _check_shift(shift)
    phase = np.asarray(phase, dtype=np.float64)
    if phase.shape != amp.shape:
        raise ValueError(f"phase shape {phase.shape} must match amplitude shape {amp.shape}")
    if not isinstance(direction, ShiftDirection):
        raise TypeError("direction must be a ShiftDirection")
    offset = -shift if direction is ShiftDirection.UP else shift
    shifted = np.roll(amp, offset, axis=0)
    rng = make_generator(seed)
    new_phase = rng.uniform(-np.pi, np.pi, size=amp.shape)
    return shifted, new_phase


def augment_matrix(values: np.ndarray, params: AugmentParams, sample_seed: int) -> np.ndarray:
    """Augment one complex angular-delay matrix, returning a new array.

    Decomposes into amplitude and phase, transforms the amplitude per
    the chosen method (phase preserved bit-for-bit except for the
    cyclic-shift baseline, which randomizes it), and recomposes.
    """
    amplitude, phase = polar_parts(np.asarray(values, dtype=np.complex128))
    if params.method is AugmentMethod.BUBBLE_SHIFT_UP:
        amplitude = bubble_shift_up(amplitude, params.shift)
    elif params.method is AugmentMethod.BUBBLE_SHIFT_DOWN:
        amplitude = bubble_shift_down(amplitude, params.shift)
    elif params.method is AugmentMethod.RANDOM_GENERATION:
        amplitude = random_generation(amplitude, params.block_size, sample_seed)
    elif params.method is AugmentMethod.MODEL_DRIVEN:
        amplitude, phase = md_baseline(
            amplitude, phase, params.shift, params.direction, sample_seed
        )
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown method {params.method!r}")
    return combine_polar(amplitude, phase)


def _worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        workers = int(raw)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    if workers < 1:
        raise ValueError(f"{WORKERS_ENV} must be at least 1, got {workers}")
    return workers


def _record(params: AugmentParams, mode: AugmentMode) -> AugmentationRecord:
    parameters: dict[str, object] = {"mode": mode.value}
    if params.method is AugmentMethod.RANDOM_GENERATION:
        parameters["block_size"] = params.block_size
    else:
        parameters["shift"] = params.shift
        if params.method is AugmentMethod.MODEL_DRIVEN:
            parameters["direction"] = params.direction.value
    return AugmentationRecord(method=params.method.value, parameters=parameters, seed=params.seed)


def augment_dataset(
    dataset: Dataset, params: AugmentParams, mode: AugmentMode = AugmentMode.APPEND
) -> Dataset:
    """Augment every sample of an angular-delay dataset.

    Sample ``i`` uses the child seed derived from ``params.seed`` and
    ``i``, so output is reproducible and independent of worker count
    (set the ``CSIAUG_WORKERS`` environment variable to parallelize).
    APPEND keeps the originals and adds the augmented copies after them,
    doubling the sample count; REPLACE keeps only the augmented copies.
    The provenance chain gains one record either way.
    """
    if dataset.domain is not Domain.ANGULAR_DELAY:
        raise ValueError(
            f"augmentation expects angular-delay samples, got domain {dataset.domain.value}"
        )
    if not isinstance(mode, AugmentMode):
        raise TypeError("mode must be an AugmentMode")
    count = len(dataset)
    augmented = np.empty_like(dataset.samples)

    def run(index: int) -> None:
        augmented[index] = augment_matrix(
            dataset.samples[index], params, derive_seed(params.seed, index)
        )

    workers = _worker_count()
    if workers == 1 or count <= 1:
        for i in range(count):
            run(i)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, range(count)))

    if mode is AugmentMode.APPEND:
        samples = np.concatenate([dataset.samples, augmented], axis=0)
    else:
        samples = augmented
    return Dataset(samples, dataset.domain, dataset.meta.with_augmentation(_record(params, mode)))
