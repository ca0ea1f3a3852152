"""Linear principal-subspace codec and NMSE evaluation.

The compressor is deliberately simple: vectorize each angular-delay
matrix into real features (all real parts, then all imaginary parts),
centre on the training mean, and project onto the top principal
directions of the training covariance.  It stands in for the neural
autoencoders used in CSI-feedback studies; absolute errors are not
comparable to theirs, but the question the toolkit asks (does a
training-set augmentation close a train/test distribution gap?) only
needs a compressor whose quality depends on its training distribution.

Reconstruction quality is the usual normalized mean square error,
``mean ||X - X_hat||^2_F / ||X||^2_F`` over samples, reported both
linear and in dB (floored at -300 dB so perfect reconstructions stay
finite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping

import numpy as np

from csiaug.core import AngularDelayMatrix, Dataset, Domain

DB_FLOOR = -300.0
ORTHONORMALITY_TOL = 1e-8


def parse_ratio(value: Fraction | str | int) -> Fraction:
    """Exact compression ratio from "1/4"-style strings or rationals.

    Floats are rejected on purpose: the retained-component count is
    ``round(ratio * feature_dim)`` and must not drift with binary
    rounding of, say, 1/64.
    """
    if isinstance(value, bool):
        raise TypeError("ratio must be a Fraction, string, or integer")
    if isinstance(value, float):
        raise TypeError(f"ratio must be exact (got float {value!r}); pass a string like '1/4'")
    if isinstance(value, (Fraction, int)):
        ratio = Fraction(value)
    elif isinstance(value, str):
        try:
            ratio = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse ratio {value!r}: {exc}") from None
    else:
        raise TypeError(f"ratio must be a Fraction, string, or integer, got {type(value).__name__}")
    if ratio <= 0:
        raise ValueError(f"ratio must be positive, got {ratio}")
    return ratio


def to_db(linear: float) -> float:
    """10*log10 with the report floor applied; 0 maps to the floor."""
    if linear < 0:
        raise ValueError(f"linear NMSE cannot be negative, got {linear}")
    if linear == 0:
        return DB_FLOOR
    return max(10.0 * math.log10(linear), DB_FLOOR)


def features(samples: np.ndarray) -> np.ndarray:
    """(n, rows, cols) complex batch -> (n, 2*rows*cols) real features."""
    n = samples.shape[0]
    return np.concatenate(
        [samples.real.reshape(n, -1), samples.imag.reshape(n, -1)], axis=1
    )


def unfeatures(vectors: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`features` for a (n, 2*rows*cols) batch."""
    n = vectors.shape[0]
    half = rows * cols
    real = vectors[:, :half].reshape(n, rows, cols)
    imag = vectors[:, half:].reshape(n, rows, cols)
    return real + 1j * imag


@dataclass(frozen=True)
class LinearCodec:
    """Mean vector plus column-orthonormal basis at a fixed ratio.

    ``basis`` has shape (feature_dim, components) where feature_dim =
    2 * delay_bins * antennas and components = round(ratio *
    feature_dim).  Encoding projects the centred feature vector onto
    the basis; decoding is the transposed map plus the mean.
    """

    delay_bins: int
    antennas: int
    ratio: Fraction
    mean: np.ndarray
    basis: np.ndarray

    def __post_init__(self) -> None:
        for name in ("delay_bins", "antennas"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be at least 1, got {getattr(self, name)}")
            object.__setattr__(self, name, int(getattr(self, name)))
        ratio = parse_ratio(self.ratio)
        object.__setattr__(self, "ratio", ratio)
        dim = 2 * self.delay_bins * self.antennas
        mean = np.array(self.mean, dtype=np.float64, copy=True)
        basis = np.array(self.basis, dtype=np.float64, copy=True)
        if mean.shape != (dim,):
            raise ValueError(f"mean must have shape ({dim},), got {mean.shape}")
        if basis.ndim != 2 or basis.shape[0] != dim:
            raise ValueError(f"basis must have shape ({dim}, m), got {basis.shape}")
        m = basis.shape[1]
        if not 1 <= m <= dim:
            raise ValueError(f"component count must lie in [1, {dim}], got {m}")
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(basis))):
            raise ValueError("codec entries must be finite")
        residual = np.abs(basis.T @ basis - np.eye(m)).max()
        if residual > ORTHONORMALITY_TOL:
            raise ValueError(
                f"basis columns are not orthonormal (residual {residual:.3e} > "
                f"{ORTHONORMALITY_TOL})"
            )
        mean.flags.writeable = False
        basis.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "basis", basis)

    @property
    def feature_dim(self) -> int:
        return 2 * self.delay_bins * self.antennas

    @property
    def components(self) -> int:
        return self.basis.shape[1]

    def info(self) -> dict[str, Any]:
        return {
            "delay_bins": self.delay_bins,
            "antennas": self.antennas,
            "feature_dim": self.feature_dim,
            "components": self.components,
            "ratio": str(self.ratio),
        }


@dataclass(frozen=True)
class CodeVector:
    """Compressed representation of one angular-delay matrix."""

    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=np.float64, copy=True)
        if vals.ndim != 1:
            raise ValueError(f"code vector must be 1-D, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("code vector entries must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.shape[0]


def component_count(ratio: Fraction, feature_dim: int) -> int:
    """round(ratio * feature_dim), computed exactly on rationals."""
    return round(ratio * feature_dim)


def _fix_signs(basis: np.ndarray) -> np.ndarray:
    # Eigenvectors are defined up to sign; pin each column so its first
    # nonzero coordinate is positive, making fits reproducible artifacts.
    out = basis.copy()
    for j in range(out.shape[1]):
        nz = np.flatnonzero(out[:, j])
        if nz.size and out[nz[0], j] < 0:
            out[:, j] = -out[:, j]
    return out


def fit_codec(train: Dataset, ratio: Fraction | str | int) -> LinearCodec:
    """Fit mean and principal directions on an angular-delay dataset.

    The basis holds the top ``round(ratio * feature_dim)`` eigenvectors
    of the sample covariance, in descending eigenvalue order.  The full
    eigendecomposition always yields a complete orthonormal set, so
    ratio 1 gives a lossless codec even when the training set has fewer
    samples than features.
    """
    ratio = parse_ratio(ratio)
    if train.domain is not Domain.ANGULAR_DELAY:
        raise ValueError(f"codec training expects angular-delay samples, got {train.domain.value}")
    n = len(train)
    if n < 2:
        raise ValueError(f"codec training needs at least 2 samples, got {n}")
    rows, cols = train.sample_shape
    dim = 2 * rows * cols
    m = component_count(ratio, dim)
    if m < 1:
        raise ValueError(f"ratio {ratio} retains no components at feature dim {dim}")
    if m > dim:
        raise ValueError(f"ratio {ratio} exceeds feature dim {dim} ({m} components)")
    x = features(train.samples)
    mean = x.mean(axis=0)
    centred = x - mean
    cov = (centred.T @ centred) / (n - 1)
    _, vectors = np.linalg.eigh(cov)
    basis = _fix_signs(vectors[:, ::-1][:, :m])
    return LinearCodec(rows, cols, ratio, mean, basis)


def encode(codec: LinearCodec, matrix: AngularDelayMatrix) -> CodeVector:
    """Project one matrix onto the codec subspace."""
    if matrix.shape != (codec.delay_bins, codec.antennas):
        raise ValueError(
            f"matrix shape {matrix.shape} does not match codec "
            f"({codec.delay_bins}, {codec.antennas})"
        )
    x = features(matrix.values[None, :, :])[0]
    return CodeVector(codec.basis.T @ (x - codec.mean))


def decode(codec: LinearCodec, code: CodeVector) -> AngularDelayMatrix:
    """Reconstruct a matrix from its code vector."""
    if len(code) != codec.components:
        raise ValueError(
            f"code length {len(code)} does not match codec components {codec.components}"
        )
    x = codec.basis @ code.values + codec.mean
    return AngularDelayMatrix(unfeatures(x[None, :], codec.delay_bins, codec.antennas)[0])


def encode_batch(codec: LinearCodec, samples: np.ndarray) -> np.ndarray:
    """(n, rows, cols) complex batch -> (n, components) code matrix."""
    if samples.shape[1:] != (codec.delay_bins, codec.antennas):
        raise ValueError(
            f"sample shape {samples.shape[1:]} does not match codec "
            f"({codec.delay_bins}, {codec.antennas})"
        )
    return (features(samples) - codec.mean) @ codec.basis


def decode_batch(codec: LinearCodec, codes: np.ndarray) -> np.ndarray:
    """(n, components) code matrix -> (n, rows, cols) complex batch."""
    if codes.ndim != 2 or codes.shape[1] != codec.components:
        raise ValueError(
            f"code batch must have shape (n, {codec.components}), got {codes.shape}"
        )
    return unfeatures(codes @ codec.basis.T + codec.mean, codec.delay_bins, codec.antennas)


def reconstruct_batch(codec: LinearCodec, samples: np.ndarray) -> np.ndarray:
    return decode_batch(codec, encode_batch(codec, samples))


def _nmse_arrays(ref: np.ndarray, rec: np.ndarray) -> tuple[float, float]:
    num = np.sum(np.abs(rec - ref) ** 2, axis=(1, 2))
    den = np.sum(np.abs(ref) ** 2, axis=(1, 2))
    if np.any(den == 0.0):
        raise ValueError("reference contains an all-zero sample; NMSE is undefined")
    linear = float(np.mean(num / den))
    return linear, to_db(linear)


def nmse(ref: Dataset, rec: Dataset) -> tuple[float, float]:
    """Mean per-sample squared-error ratio, as (linear, dB).

    The dB value is floored at -300 so identical datasets report a
    finite number.
    """
    if len(ref) != len(rec):
        raise ValueError(f"sample counts differ: {len(ref)} vs {len(rec)}")
    if ref.sample_shape != rec.sample_shape:
        raise ValueError(f"sample shapes differ: {ref.sample_shape} vs {rec.sample_shape}")
    if len(ref) == 0:
        raise ValueError("NMSE of an empty dataset is undefined")
    return _nmse_arrays(ref.samples, rec.samples)


@dataclass(frozen=True)
class EvalReport:
    """One evaluation run: a codec applied to one test set.

    ``label`` names the training condition being measured (e.g. which
    augmentation produced the training set); the codec file does not
    carry that, so the caller supplies it.
    """

    label: str
    ratio: str
    nmse_linear: float
    nmse_db: float
    sample_count: int
    codec_info: Mapping[str, Any]
    test_provenance: Mapping[str, Any] | None = None
    db_floor: float = DB_FLOOR

    def __post_init__(self) -> None:
        object.__setattr__(self, "codec_info", dict(self.codec_info))
        if self.test_provenance is not None:
            object.__setattr__(self, "test_provenance", dict(self.test_provenance))

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "ratio": self.ratio,
            "nmse_linear": self.nmse_linear,
            "nmse_db": self.nmse_db,
            "sample_count": self.sample_count,
            "codec_info": dict(self.codec_info),
            "test_provenance": dict(self.test_provenance)
            if self.test_provenance is not None
            else None,
            "db_floor": self.db_floor,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "EvalReport":
        return cls(
            label=str(data["label"]),
            ratio=str(data["ratio"]),
            nmse_linear=float(data["nmse_linear"]),
            nmse_db=float(data["nmse_db"]),
            sample_count=int(data["sample_count"]),
            codec_info=dict(data["codec_info"]),
            test_provenance=data.get("test_provenance"),
            db_floor=float(data.get("db_floor", DB_FLOOR)),
        )


def evaluate(codec: LinearCodec, test: Dataset, label: str = "unlabeled") -> EvalReport:
    """Encode and decode every test sample, returning the NMSE report."""
    if test.domain is not Domain.ANGULAR_DELAY:
        raise ValueError(f"evaluation expects angular-delay samples, got {test.domain.value}")
    if len(test) == 0:
        raise ValueError("cannot evaluate on an empty dataset")
    recon = reconstruct_batch(codec, test.samples)
    linear, db = _nmse_arrays(test.samples, recon)
    return EvalReport(
        label=label,
        ratio=str(codec.ratio),
        nmse_linear=linear,
        nmse_db=db,
        sample_count=len(test),
        codec_info=codec.info(),
        test_provenance=test.meta.to_dict(),
    )
