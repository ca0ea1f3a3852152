"""CSI toolkit: angular-delay transforms, amplitude-domain augmentation,
synthetic multipath generation, and a linear compression/NMSE harness.

Typical pipeline::

    from csiaug import (
        load_scenario, generate_dataset, transform_dataset, DftPlan,
        AugmentParams, AugmentMethod, augment_dataset, fit_codec, evaluate,
    )

    spec = load_scenario("scenarios/motion-range-train.json")
    freq = generate_dataset(spec, 2000)
    plan = DftPlan(spec.subcarriers, spec.antennas, delay_bins=32)
    train = transform_dataset(freq, plan)
    aug = augment_dataset(train, AugmentParams(AugmentMethod.BUBBLE_SHIFT_DOWN, shift=1))
    codec = fit_codec(aug, "1/4")
    print(evaluate(codec, test_set, label="bs-down").nmse_db)

The same steps are available as ``csiaug`` CLI subcommands.
"""

from csiaug.augment import (
    augment_dataset,
    augment_matrix,
    bubble_shift_down,
    bubble_shift_up,
    md_baseline,
    random_generation,
)
from csiaug.channel import (
    ScenarioSpec,
    generate_angular_dataset,
    generate_dataset,
    load_scenario,
    sample_channel,
    save_scenario,
)
from csiaug.codec import (
    CodeVector,
    EvalReport,
    LinearCodec,
    decode,
    encode,
    evaluate,
    fit_codec,
    nmse,
    parse_ratio,
)
from csiaug.core import (
    AngularDelayMatrix,
    AugmentMethod,
    AugmentMode,
    AugmentParams,
    AugmentationRecord,
    ChannelMatrix,
    Dataset,
    DftPlan,
    Domain,
    Provenance,
    ShiftDirection,
    decompose,
    recompose,
)
from csiaug.dataset_io import (
    CorruptedFileError,
    FileFormatError,
    read_codec,
    read_dataset,
    read_report,
    write_codec,
    write_dataset,
    write_report,
)
from csiaug.rng import derive_seed, make_generator, splitmix64
from csiaug.transform import (
    from_angular_delay,
    inverse_transform_dataset,
    to_angular_delay,
    transform_dataset,
)

__version__ = "0.1.0"

__all__ = [
    "AngularDelayMatrix",
    "AugmentMethod",
    "AugmentMode",
    "AugmentParams",
    "AugmentationRecord",
    "ChannelMatrix",
    "CodeVector",
    "CorruptedFileError",
    "Dataset",
    "DftPlan",
    "Domain",
    "EvalReport",
    "FileFormatError",
    "LinearCodec",
    "Provenance",
    "ScenarioSpec",
    "ShiftDirection",
    "augment_dataset",
    "augment_matrix",
    "bubble_shift_down",
    "bubble_shift_up",
    "decode",
    "decompose",
    "derive_seed",
    "encode",
    "evaluate",
    "fit_codec",
    "from_angular_delay",
    "generate_angular_dataset",
    "generate_dataset",
    "inverse_transform_dataset",
    "load_scenario",
    "make_generator",
    "md_baseline",
    "nmse",
    "parse_ratio",
    "random_generation",
    "read_codec",
    "read_dataset",
    "read_report",
    "recompose",
    "sample_channel",
    "save_scenario",
    "splitmix64",
    "to_angular_delay",
    "transform_dataset",
    "write_codec",
    "write_dataset",
    "write_report",
    "__version__",
]
