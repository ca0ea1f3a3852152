import numpy as np
import pytest

from csiaug.core import (
    AngularDelayMatrix,
    ChannelMatrix,
    Dataset,
    DftPlan,
    Domain,
    Provenance,
)
from csiaug.transform import (
    from_angular_delay,
    inverse_transform_dataset,
    to_angular_delay,
    transform_dataset,
)


def reference_transform(values, delay_bins):
    """Dense-matrix oracle: build both unitary DFT factors explicitly.

    The delay-side factor has entries exp(+2j pi d n / Nc) / sqrt(Nc)
    and the angle-side factor exp(-2j pi a m / Nt) / sqrt(Nt); the
    product F_delay @ H @ F_angle^H is evaluated literally, then rows
    are truncated.  Completely independent of the FFT implementation.
    """
    nc, nt = values.shape
    d = np.arange(nc)
    f_delay = np.exp(2j * np.pi * np.outer(d, d) / nc) / np.sqrt(nc)
    a = np.arange(nt)
    f_angle = np.exp(-2j * np.pi * np.outer(a, a) / nt) / np.sqrt(nt)
    return (f_delay @ values @ f_angle.conj().T)[:delay_bins]


def random_channel(rng, nc, nt):
    return rng.standard_normal((nc, nt)) + 1j * rng.standard_normal((nc, nt))


@pytest.mark.parametrize("nc,nt,na", [(8, 4, 8), (16, 4, 6), (12, 5, 3), (9, 1, 9)])
def test_matches_dense_dft_oracle(nc, nt, na):
    rng = np.random.default_rng(nc * 100 + nt * 10 + na)
    h = random_channel(rng, nc, nt)
    got = to_angular_delay(ChannelMatrix(h), DftPlan(nc, nt, na)).values
    want = reference_transform(h, na)
    assert np.abs(got - want).max() < 1e-10 * np.abs(want).max()


def test_single_delay_tone_concentrates_in_one_row():
    # A pure phase ramp of one cycle across 4 subcarriers is a path at
    # delay bin 1; the transform puts all energy there, scaled to 2.
    h = np.exp(-2j * np.pi * np.arange(4) / 4).reshape(4, 1)
    ha = to_angular_delay(ChannelMatrix(h), DftPlan(4, 1, 4)).values
    assert np.abs(ha - np.array([[0], [2], [0], [0]])).max() < 1e-12


def test_size_one_transform_is_identity():
    h = np.array([[3.5 - 1.25j]])
    ha = to_angular_delay(ChannelMatrix(h), DftPlan(1, 1, 1)).values
    assert np.abs(ha - h).max() < 1e-15


def test_zeros_map_to_zeros():
    plan = DftPlan(16, 4, 8)
    assert not np.any(to_angular_delay(ChannelMatrix(np.zeros((16, 4))), plan).values)
    assert not np.any(
        from_angular_delay(
            to_angular_delay(ChannelMatrix(np.zeros((16, 4))), plan), plan
        ).values
    )


def test_untruncated_round_trip_and_parseval():
    rng = np.random.default_rng(7)
    plan = DftPlan(64, 8, 64)
    h = random_channel(rng, 64, 8)
    ha = to_angular_delay(ChannelMatrix(h), plan)
    h_norm = np.linalg.norm(h)
    assert abs(np.linalg.norm(ha.values) - h_norm) / h_norm < 1e-10
    back = from_angular_delay(ha, plan)
    assert np.linalg.norm(back.values - h) / h_norm < 1e-10


def test_linearity():
    rng = np.random.default_rng(21)
    plan = DftPlan(32, 4, 12)
    h1, h2 = random_channel(rng, 32, 4), random_channel(rng, 32, 4)
    a, b = 1.7 - 0.3j, -0.4 + 2.2j
    combined = to_angular_delay(ChannelMatrix(a * h1 + b * h2), plan).values
    separate = a * to_angular_delay(ChannelMatrix(h1), plan).values + b * to_angular_delay(
        ChannelMatrix(h2), plan
    ).values
    assert np.abs(combined - separate).max() < 1e-10 * np.abs(separate).max()


def test_truncated_round_trip_for_band_limited_input():
    # A channel synthesized from delay content confined to the kept rows
    # loses nothing to truncation, so the round trip is tight both ways.
    rng = np.random.default_rng(3)
    nc, nt, na = 64, 4, 8
    plan = DftPlan(nc, nt, na)
    rows = rng.standard_normal((na, nt)) + 1j * rng.standard_normal((na, nt))
    h = from_angular_delay(AngularDelayMatrix(rows), plan)
    ha = to_angular_delay(h, plan)
    assert np.linalg.norm(ha.values - rows) / np.linalg.norm(rows) < 1e-10
    again = to_angular_delay(from_angular_delay(ha, plan), plan)
    assert np.linalg.norm(again.values - ha.values) / np.linalg.norm(ha.values) < 1e-10


def test_shape_mismatches_rejected():
    plan = DftPlan(16, 4, 8)
    with pytest.raises(ValueError, match="shape"):
        to_angular_delay(ChannelMatrix(np.zeros((8, 4))), plan)
    with pytest.raises(ValueError, match="shape"):
        from_angular_delay(
            to_angular_delay(ChannelMatrix(np.zeros((16, 4))), plan), DftPlan(16, 4, 4)
        )


def test_dataset_transform_matches_per_sample_loop():
    rng = np.random.default_rng(11)
    plan = DftPlan(16, 4, 6)
    samples = rng.standard_normal((5, 16, 4)) + 1j * rng.standard_normal((5, 16, 4))
    meta = Provenance(seed=4)
    ds = Dataset(samples, Domain.SPATIAL_FREQUENCY, meta)
    batch = transform_dataset(ds, plan)
    assert batch.domain is Domain.ANGULAR_DELAY
    assert batch.meta == meta
    for i in range(5):
        single = to_angular_delay(ChannelMatrix(samples[i]), plan).values
        assert np.array_equal(batch.samples[i], single)
    back = inverse_transform_dataset(batch, plan)
    assert back.domain is Domain.SPATIAL_FREQUENCY
    for i in range(5):
        single = from_angular_delay(AngularDelayMatrix(batch.samples[i]), plan).values
        assert np.array_equal(back.samples[i], single)
    # the inverse is a right inverse on the truncated domain, not on raw samples
    again = transform_dataset(back, plan)
    assert np.abs(again.samples - batch.samples).max() < 1e-10


def test_dataset_transform_checks_domain():
    ds = Dataset(np.zeros((1, 8, 2), dtype=complex), Domain.ANGULAR_DELAY)
    with pytest.raises(ValueError, match="domain"):
        transform_dataset(ds, DftPlan(8, 2, 4))
    fwd = Dataset(np.zeros((1, 8, 2), dtype=complex), Domain.SPATIAL_FREQUENCY)
    with pytest.raises(ValueError, match="domain"):
        inverse_transform_dataset(fwd, DftPlan(8, 2, 8))
